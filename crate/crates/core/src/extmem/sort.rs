use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::file::{Direction, RecordFile, RecordReader, RecordWriter};
use super::record::Record;
use super::{Engine, Reservation};
use crate::{Error, Result};

/// External merge sorter working inside a fixed share of the budget.
///
/// Records are collected in a buffer of `share - B` records (one block stays
/// free for writing a run); full buffers are
/// sorted and written as runs. Runs are merged with fan-in `share / B - 1`
/// so that the read buffers plus one output block stay within the share.
/// When everything fits, no run is ever written.
pub struct Sorter<R: Record + Ord> {
    engine: Engine,
    share: usize,
    buf: Vec<R>,
    runs: Vec<RecordFile<R>>,
    reservation: Reservation,
}

impl<R: Record + Ord> Sorter<R> {
    pub fn new(engine: &Engine, share: usize) -> Result<Self> {
        let b = engine.block();
        if share < 3 * b {
            return Err(Error::Config(format!(
                "sorter share {share} is below three blocks of {b}"
            )));
        }
        let reservation = engine.reserve(share)?;
        Ok(Sorter {
            engine: engine.clone(),
            share,
            buf: Vec::new(),
            runs: Vec::new(),
            reservation,
        })
    }

    pub fn push(&mut self, record: R) -> Result<()> {
        self.buf.push(record);
        if self.buf.len() == self.share - self.engine.block() {
            self.spill()?;
        }
        Ok(())
    }

    fn spill(&mut self) -> Result<()> {
        self.buf.sort_unstable();
        let mut w = RecordWriter::unreserved(&self.engine)?;
        for r in self.buf.drain(..) {
            w.push(r)?;
        }
        self.runs.push(w.finish()?);
        Ok(())
    }

    fn fan_in(&self) -> usize {
        self.share / self.engine.block() - 1
    }

    pub fn finish(mut self) -> Result<Sorted<R>> {
        self.engine.note_sort();
        if self.runs.is_empty() {
            self.buf.sort_unstable();
            let items = std::mem::take(&mut self.buf);
            return Ok(Sorted {
                source: Source::Memory(items.into_iter().peekable()),
                _reservation: self.reservation,
            });
        }
        if !self.buf.is_empty() {
            self.spill()?;
        }
        self.buf = Vec::new();
        let fan_in = self.fan_in();
        while self.runs.len() > fan_in {
            let group: Vec<_> = self.runs.drain(..fan_in).collect();
            let mut merger = Merger::new(&self.engine, &group)?;
            let mut w = RecordWriter::unreserved(&self.engine)?;
            while let Some(r) = merger.next()? {
                w.push(r)?;
            }
            self.runs.push(w.finish()?);
        }
        let merger = Merger::new(&self.engine, &self.runs)?;
        Ok(Sorted {
            source: Source::Merge(merger),
            _reservation: self.reservation,
        })
    }
}

struct Merger<R: Record + Ord> {
    readers: Vec<RecordReader<R>>,
    heap: BinaryHeap<Reverse<(R, usize)>>,
}

impl<R: Record + Ord> Merger<R> {
    fn new(engine: &Engine, runs: &[RecordFile<R>]) -> Result<Self> {
        let mut readers = Vec::with_capacity(runs.len());
        let mut heap = BinaryHeap::new();
        for (i, run) in runs.iter().enumerate() {
            let mut r = run.reader_unreserved(engine, Direction::Forward)?;
            if let Some(x) = r.next()? {
                heap.push(Reverse((x, i)));
            }
            readers.push(r);
        }
        Ok(Merger { readers, heap })
    }

    fn peek(&self) -> Option<R> {
        self.heap.peek().map(|Reverse((r, _))| *r)
    }

    fn next(&mut self) -> Result<Option<R>> {
        let Some(Reverse((r, i))) = self.heap.pop() else {
            return Ok(None);
        };
        if let Some(x) = self.readers[i].next()? {
            self.heap.push(Reverse((x, i)));
        }
        Ok(Some(r))
    }
}

enum Source<R: Record + Ord> {
    Memory(std::iter::Peekable<std::vec::IntoIter<R>>),
    Merge(Merger<R>),
}

/// The sorted output of a [`Sorter`], consumed sequentially.
pub struct Sorted<R: Record + Ord> {
    source: Source<R>,
    _reservation: Reservation,
}

impl<R: Record + Ord> Sorted<R> {
    pub fn peek(&mut self) -> Result<Option<R>> {
        Ok(match &mut self.source {
            Source::Memory(it) => it.peek().copied(),
            Source::Merge(m) => m.peek(),
        })
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Result<Option<R>> {
        match &mut self.source {
            Source::Memory(it) => Ok(it.next()),
            Source::Merge(m) => m.next(),
        }
    }

    /// Materialize the remaining records as a file.
    pub fn into_file(mut self, engine: &Engine) -> Result<RecordFile<R>> {
        let mut w = RecordWriter::new(engine)?;
        while let Some(r) = self.next()? {
            w.push(r)?;
        }
        w.finish()
    }
}

/// Sort a whole file by `R`'s order using the engine's budget: one input
/// block, one output block, and the remainder for the sorter.
pub fn sort_external<R: Record + Ord>(engine: &Engine, input: &RecordFile<R>) -> Result<RecordFile<R>> {
    let share = engine.shares(2, 1)?;
    let mut sorter = Sorter::new(engine, share)?;
    {
        let mut r = input.reader(engine, Direction::Forward)?;
        while let Some(x) = r.next()? {
            sorter.push(x)?;
        }
    }
    sorter.finish()?.into_file(engine)
}
