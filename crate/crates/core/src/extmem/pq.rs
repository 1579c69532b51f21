use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::file::{Direction, RecordReader, RecordWriter};
use super::record::Record;
use super::{Engine, Reservation};
use crate::{Error, Result};

/// An entry of a [`LevelizedPriorityQueue`]. The order on entries must be
/// level-major: `a.level() < b.level()` implies `a < b`.
pub trait PqEntry: Record + Ord {
    /// Sweep level of the entry, in processing order.
    fn level(&self) -> u32;
}

/// Priority queue for level-by-level sweeps.
///
/// Entries are popped in non-decreasing order. Once an entry has been
/// popped, pushes must be strictly greater than it: future levels are always
/// fine, the current level only ahead of the sweep position. Half of the
/// share holds an in-memory heap; when it fills up it is spilled as a
/// sorted run, and at most `share / (2B) - 1` runs are kept, each with one
/// resident block.
pub struct LevelizedPriorityQueue<E: PqEntry> {
    engine: Engine,
    heap: BinaryHeap<Reverse<E>>,
    heap_capacity: usize,
    runs: Vec<RecordReader<E>>,
    max_runs: usize,
    last_popped: Option<E>,
    len: u64,
    _reservation: Reservation,
}

impl<E: PqEntry> LevelizedPriorityQueue<E> {
    pub fn new(engine: &Engine, share: usize) -> Result<Self> {
        let b = engine.block();
        if share < 4 * b {
            return Err(Error::Config(format!(
                "priority queue share {share} is below four blocks of {b}"
            )));
        }
        let reservation = engine.reserve(share)?;
        let heap_capacity = share / 2;
        Ok(LevelizedPriorityQueue {
            engine: engine.clone(),
            heap: BinaryHeap::new(),
            heap_capacity,
            runs: Vec::new(),
            max_runs: (share - heap_capacity) / b - 1,
            last_popped: None,
            len: 0,
            _reservation: reservation,
        })
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Level of the last popped entry, if any.
    pub fn current_level(&self) -> Option<u32> {
        self.last_popped.map(|e| e.level())
    }

    pub fn push(&mut self, entry: E) -> Result<()> {
        if let Some(last) = self.last_popped {
            if entry.level() < last.level() {
                return Err(Error::Invariant(format!(
                    "push to finished level {} while sweeping level {}",
                    entry.level(),
                    last.level()
                )));
            }
            if entry <= last {
                return Err(Error::Invariant(format!(
                    "push on level {} behind the sweep position",
                    entry.level()
                )));
            }
        }
        if self.heap.len() == self.heap_capacity {
            self.spill()?;
        }
        self.heap.push(Reverse(entry));
        self.len += 1;
        Ok(())
    }

    fn spill(&mut self) -> Result<()> {
        let mut w = RecordWriter::unreserved(&self.engine)?;
        if self.runs.len() < self.max_runs {
            while let Some(Reverse(e)) = self.heap.pop() {
                w.push(e)?;
            }
        } else {
            // Merge the heap and every run into a single run.
            while let Some((src, e)) = self.min_source()? {
                self.take(src)?;
                w.push(e)?;
            }
            self.runs.clear();
        }
        let run = w.finish()?;
        self.runs.push(run.reader_unreserved(&self.engine, Direction::Forward)?);
        Ok(())
    }

    /// Smallest available entry and where it lives: `None` for the heap,
    /// `Some(i)` for run `i`.
    fn min_source(&mut self) -> Result<Option<(Option<usize>, E)>> {
        let mut best: Option<(Option<usize>, E)> = self.heap.peek().map(|Reverse(e)| (None, *e));
        for (i, run) in self.runs.iter_mut().enumerate() {
            if let Some(e) = run.peek()? {
                if best.as_ref().is_none_or(|(_, b)| e < *b) {
                    best = Some((Some(i), e));
                }
            }
        }
        Ok(best)
    }

    fn take(&mut self, source: Option<usize>) -> Result<()> {
        match source {
            None => {
                self.heap.pop();
            }
            Some(i) => {
                self.runs[i].next()?;
            }
        }
        Ok(())
    }

    pub fn peek(&mut self) -> Result<Option<E>> {
        Ok(self.min_source()?.map(|(_, e)| e))
    }

    pub fn pop(&mut self) -> Result<Option<E>> {
        let Some((src, e)) = self.min_source()? else {
            return Ok(None);
        };
        self.take(src)?;
        if let Some(i) = src {
            if self.runs[i].peek()?.is_none() {
                self.runs.swap_remove(i);
            }
        }
        self.len -= 1;
        self.last_popped = Some(e);
        Ok(Some(e))
    }
}
