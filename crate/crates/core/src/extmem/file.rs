use std::fmt;
use std::marker::PhantomData;
use std::sync::{Arc, RwLock};

use super::record::{decode_block, encode_block, Record};
use super::{Disk, Engine, Reservation};
use crate::Result;

pub(crate) enum Store {
    File(std::fs::File),
    Memory(RwLock<Vec<u8>>),
}

impl Store {
    fn create(engine: &Engine) -> Result<Store> {
        Ok(match engine.disk() {
            Disk::Directory(dir) => Store::File(tempfile::tempfile_in(dir)?),
            Disk::Memory => Store::Memory(RwLock::new(Vec::new())),
        })
    }

    fn write_at(&self, offset: u64, bytes: &[u8]) -> std::io::Result<()> {
        match self {
            Store::File(f) => {
                use std::os::unix::fs::FileExt;
                f.write_all_at(bytes, offset)
            }
            Store::Memory(buf) => {
                let mut buf = buf.write().expect("store lock poisoned");
                let end = offset as usize + bytes.len();
                if buf.len() < end {
                    buf.resize(end, 0);
                }
                buf[offset as usize..end].copy_from_slice(bytes);
                Ok(())
            }
        }
    }

    fn read_at(&self, offset: u64, bytes: &mut [u8]) -> std::io::Result<()> {
        match self {
            Store::File(f) => {
                use std::os::unix::fs::FileExt;
                f.read_exact_at(bytes, offset)
            }
            Store::Memory(buf) => {
                let buf = buf.read().expect("store lock poisoned");
                let start = offset as usize;
                bytes.copy_from_slice(&buf[start..start + bytes.len()]);
                Ok(())
            }
        }
    }
}

/// An immutable file of fixed-width records on the external level.
///
/// Clones share the same backing store, which is released when the last
/// clone drops.
pub struct RecordFile<R> {
    store: Arc<Store>,
    len: u64,
    _record: PhantomData<fn() -> R>,
}

impl<R> Clone for RecordFile<R> {
    fn clone(&self) -> Self {
        RecordFile {
            store: Arc::clone(&self.store),
            len: self.len,
            _record: PhantomData,
        }
    }
}

impl<R> fmt::Debug for RecordFile<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RecordFile").field("len", &self.len).finish()
    }
}

impl<R: Record> RecordFile<R> {
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Write all `records` into a new file.
    pub fn from_records(engine: &Engine, records: impl IntoIterator<Item = R>) -> Result<Self> {
        let mut w = RecordWriter::new(engine)?;
        for r in records {
            w.push(r)?;
        }
        w.finish()
    }

    pub fn reader(&self, engine: &Engine, direction: Direction) -> Result<RecordReader<R>> {
        RecordReader::open(engine, self, direction, true)
    }

    pub(crate) fn reader_unreserved(&self, engine: &Engine, direction: Direction) -> Result<RecordReader<R>> {
        RecordReader::open(engine, self, direction, false)
    }

    /// Read the whole file forward into a vector (counted like any read).
    pub fn read_all(&self, engine: &Engine) -> Result<Vec<R>> {
        let mut r = self.reader(engine, Direction::Forward)?;
        let mut out = Vec::with_capacity(self.len as usize);
        while let Some(x) = r.next()? {
            out.push(x);
        }
        Ok(out)
    }
}

/// Sequential writer; buffers one block.
pub struct RecordWriter<R: Record> {
    engine: Engine,
    store: Arc<Store>,
    buf: Vec<R>,
    bytes: Vec<u8>,
    len: u64,
    _reservation: Option<Reservation>,
}

impl<R: Record> RecordWriter<R> {
    pub fn new(engine: &Engine) -> Result<Self> {
        let reservation = engine.reserve(engine.block())?;
        Self::build(engine, Some(reservation))
    }

    /// Writer whose block buffer is accounted for by an enclosing structure.
    pub(crate) fn unreserved(engine: &Engine) -> Result<Self> {
        Self::build(engine, None)
    }

    fn build(engine: &Engine, reservation: Option<Reservation>) -> Result<Self> {
        Ok(RecordWriter {
            engine: engine.clone(),
            store: Arc::new(Store::create(engine)?),
            buf: Vec::with_capacity(engine.block()),
            bytes: Vec::new(),
            len: 0,
            _reservation: reservation,
        })
    }

    pub fn push(&mut self, record: R) -> Result<()> {
        self.buf.push(record);
        if self.buf.len() == self.engine.block() {
            self.flush()?;
        }
        Ok(())
    }

    pub fn len(&self) -> u64 {
        self.len + self.buf.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn flush(&mut self) -> Result<()> {
        if self.buf.is_empty() {
            return Ok(());
        }
        encode_block(&self.buf, &mut self.bytes);
        let offset = self.len * R::byte_width() as u64;
        self.store.write_at(offset, &self.bytes)?;
        self.engine.note_write(self.buf.len());
        self.len += self.buf.len() as u64;
        self.buf.clear();
        Ok(())
    }

    pub fn finish(mut self) -> Result<RecordFile<R>> {
        self.flush()?;
        Ok(RecordFile {
            store: Arc::clone(&self.store),
            len: self.len,
            _record: PhantomData,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Backward,
}

/// Sequential reader over a [`RecordFile`]; buffers one block.
///
/// A backward reader yields the records in exactly reversed order.
pub struct RecordReader<R: Record> {
    engine: Engine,
    file: RecordFile<R>,
    direction: Direction,
    buf: Vec<R>,
    bytes: Vec<u8>,
    // Index of the next record to hand out inside `buf`, counting in the
    // reading direction.
    cursor: usize,
    blocks_left: u64,
    next_block: u64,
    _reservation: Option<Reservation>,
}

impl<R: Record> RecordReader<R> {
    fn open(engine: &Engine, file: &RecordFile<R>, direction: Direction, reserve: bool) -> Result<Self> {
        let reservation = if reserve {
            Some(engine.reserve(engine.block())?)
        } else {
            None
        };
        let blocks = engine.config().blocks_for(file.len);
        Ok(RecordReader {
            engine: engine.clone(),
            file: file.clone(),
            direction,
            buf: Vec::with_capacity(engine.block()),
            bytes: Vec::new(),
            cursor: 0,
            blocks_left: blocks,
            next_block: match direction {
                Direction::Forward => 0,
                Direction::Backward => blocks.saturating_sub(1),
            },
            _reservation: reservation,
        })
    }

    fn fill(&mut self) -> Result<bool> {
        if self.blocks_left == 0 {
            return Ok(false);
        }
        let b = self.engine.block() as u64;
        let first = self.next_block * b;
        let count = b.min(self.file.len - first) as usize;
        let width = R::byte_width();
        self.bytes.resize(count * width, 0);
        self.file.store.read_at(first * width as u64, &mut self.bytes)?;
        decode_block(&self.bytes, &mut self.buf);
        if self.direction == Direction::Backward {
            self.buf.reverse();
        }
        self.engine.note_read(count);
        self.cursor = 0;
        self.blocks_left -= 1;
        match self.direction {
            Direction::Forward => self.next_block += 1,
            Direction::Backward => self.next_block = self.next_block.saturating_sub(1),
        }
        Ok(true)
    }

    pub fn peek(&mut self) -> Result<Option<R>> {
        if self.cursor == self.buf.len() && !self.fill()? {
            return Ok(None);
        }
        Ok(Some(self.buf[self.cursor]))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn next(&mut self) -> Result<Option<R>> {
        let r = self.peek()?;
        if r.is_some() {
            self.cursor += 1;
        }
        Ok(r)
    }
}
