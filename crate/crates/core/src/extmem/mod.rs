//! Block storage that makes I/O cost and memory residency observable.
//!
//! The model has two levels: internal memory holding at most `M` records and
//! an unbounded external store accessed in blocks of `B` records. Every file,
//! sorter and queue allocates its buffers through an [`Engine`], which keeps
//! the block counters and a residency gauge. A reservation that would push
//! the gauge above `M` fails with [`Error::MemoryBudget`].

mod file;
mod pq;
mod record;
mod sort;

pub use file::{Direction, RecordFile, RecordReader, RecordWriter};
pub use pq::{LevelizedPriorityQueue, PqEntry};
pub use record::Record;
pub use sort::{sort_external, Sorted, Sorter};

use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Environment variable naming the directory for spill files.
pub const TMPDIR_ENV: &str = "XBDD_TMPDIR";

/// Block size `B` and memory budget `M`, both counted in records.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockConfig {
    pub block_size_records: usize,
    pub memory_budget_records: usize,
}

impl BlockConfig {
    pub fn new(block_size_records: usize, memory_budget_records: usize) -> Result<Self> {
        let cfg = BlockConfig {
            block_size_records,
            memory_budget_records,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.block_size_records < 2 {
            return Err(Error::Config(format!(
                "block size must be at least 2 records, got {}",
                self.block_size_records
            )));
        }
        if self.memory_budget_records < 4 * self.block_size_records {
            return Err(Error::Config(format!(
                "memory budget {} must hold at least four blocks of {}",
                self.memory_budget_records, self.block_size_records
            )));
        }
        Ok(())
    }

    pub fn block(&self) -> usize {
        self.block_size_records
    }

    pub fn memory(&self) -> usize {
        self.memory_budget_records
    }

    /// Number of blocks needed for `records` records.
    pub fn blocks_for(&self, records: u64) -> u64 {
        records.div_ceil(self.block_size_records as u64)
    }
}

impl Default for BlockConfig {
    fn default() -> Self {
        BlockConfig {
            block_size_records: 64,
            memory_budget_records: 1 << 20,
        }
    }
}

/// A snapshot of the block counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IoCounters {
    pub blocks_read: u64,
    pub blocks_written: u64,
    pub records_streamed: u64,
    pub sorts: u64,
}

impl IoCounters {
    /// Counter growth from `earlier` to `self`.
    pub fn since(&self, earlier: &IoCounters) -> IoCounters {
        IoCounters {
            blocks_read: self.blocks_read - earlier.blocks_read,
            blocks_written: self.blocks_written - earlier.blocks_written,
            records_streamed: self.records_streamed - earlier.records_streamed,
            sorts: self.sorts - earlier.sorts,
        }
    }

    pub fn blocks(&self) -> u64 {
        self.blocks_read + self.blocks_written
    }
}

/// Where spilled and intermediate files live.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Disk {
    /// Anonymous temporary files in this directory, unlinked at creation and
    /// gone as soon as the last handle drops.
    Directory(PathBuf),
    /// A simulated external level kept in process memory. Transfers are
    /// counted exactly like file transfers.
    Memory,
}

impl Disk {
    /// `XBDD_TMPDIR` if set, the system temp directory otherwise.
    pub fn from_env() -> Disk {
        match std::env::var_os(TMPDIR_ENV) {
            Some(dir) if !dir.is_empty() => Disk::Directory(PathBuf::from(dir)),
            _ => Disk::Directory(std::env::temp_dir()),
        }
    }
}

#[derive(Debug, Default)]
struct Stats {
    blocks_read: AtomicU64,
    blocks_written: AtomicU64,
    records_streamed: AtomicU64,
    sorts: AtomicU64,
    resident: AtomicU64,
    peak_resident: AtomicU64,
    intermediate_records: AtomicU64,
    largest_intermediate_nodes: AtomicU64,
}

#[derive(Debug)]
struct Inner {
    cfg: BlockConfig,
    disk: Disk,
    stats: Stats,
}

/// Owner of the counters, the residency gauge and the spill location.
///
/// Cloning is cheap and the clones share counters. Independent engines have
/// independent counters, so concurrent computations should each use their
/// own engine.
#[derive(Clone, Debug)]
pub struct Engine {
    inner: Arc<Inner>,
}

impl Engine {
    /// Engine spilling to `XBDD_TMPDIR` (or the system temp directory).
    pub fn new(cfg: BlockConfig) -> Result<Engine> {
        Engine::with_disk(cfg, Disk::from_env())
    }

    /// Engine keeping its external level in memory.
    pub fn in_memory(cfg: BlockConfig) -> Result<Engine> {
        Engine::with_disk(cfg, Disk::Memory)
    }

    pub fn with_disk(cfg: BlockConfig, disk: Disk) -> Result<Engine> {
        cfg.validate()?;
        if let Disk::Directory(dir) = &disk {
            if !dir.is_dir() {
                return Err(Error::Config(format!(
                    "spill directory {} does not exist",
                    dir.display()
                )));
            }
        }
        Ok(Engine {
            inner: Arc::new(Inner {
                cfg,
                disk,
                stats: Stats::default(),
            }),
        })
    }

    pub fn config(&self) -> BlockConfig {
        self.inner.cfg
    }

    pub fn disk(&self) -> &Disk {
        &self.inner.disk
    }

    pub(crate) fn block(&self) -> usize {
        self.inner.cfg.block_size_records
    }

    pub fn counters(&self) -> IoCounters {
        let s = &self.inner.stats;
        IoCounters {
            blocks_read: s.blocks_read.load(Ordering::Relaxed),
            blocks_written: s.blocks_written.load(Ordering::Relaxed),
            records_streamed: s.records_streamed.load(Ordering::Relaxed),
            sorts: s.sorts.load(Ordering::Relaxed),
        }
    }

    /// Zero the counters and restart peak tracking from the current residency.
    pub fn reset_counters(&self) {
        let s = &self.inner.stats;
        s.blocks_read.store(0, Ordering::Relaxed);
        s.blocks_written.store(0, Ordering::Relaxed);
        s.records_streamed.store(0, Ordering::Relaxed);
        s.sorts.store(0, Ordering::Relaxed);
        s.intermediate_records.store(0, Ordering::Relaxed);
        s.largest_intermediate_nodes.store(0, Ordering::Relaxed);
        s.peak_resident
            .store(s.resident.load(Ordering::Relaxed), Ordering::Relaxed);
    }

    pub fn resident_records(&self) -> u64 {
        self.inner.stats.resident.load(Ordering::Relaxed)
    }

    pub fn peak_resident_records(&self) -> u64 {
        self.inner.stats.peak_resident.load(Ordering::Relaxed)
    }

    /// Total size of the unreduced conjunctions built inside `AndExists`.
    pub fn intermediate_records(&self) -> u64 {
        self.inner.stats.intermediate_records.load(Ordering::Relaxed)
    }

    /// Largest unreduced diagram (in nodes) produced by any `Apply` sweep.
    pub fn largest_intermediate_nodes(&self) -> u64 {
        self.inner.stats.largest_intermediate_nodes.load(Ordering::Relaxed)
    }

    pub(crate) fn note_intermediate_records(&self, records: u64) {
        self.inner
            .stats
            .intermediate_records
            .fetch_add(records, Ordering::Relaxed);
    }

    pub(crate) fn note_intermediate_nodes(&self, nodes: u64) {
        self.inner
            .stats
            .largest_intermediate_nodes
            .fetch_max(nodes, Ordering::Relaxed);
    }

    pub(crate) fn note_read(&self, records: usize) {
        let s = &self.inner.stats;
        s.blocks_read.fetch_add(1, Ordering::Relaxed);
        s.records_streamed.fetch_add(records as u64, Ordering::Relaxed);
    }

    pub(crate) fn note_write(&self, records: usize) {
        let s = &self.inner.stats;
        s.blocks_written.fetch_add(1, Ordering::Relaxed);
        s.records_streamed.fetch_add(records as u64, Ordering::Relaxed);
    }

    pub(crate) fn note_sort(&self) {
        self.inner.stats.sorts.fetch_add(1, Ordering::Relaxed);
    }

    /// Register `records` resident records with the gauge.
    pub fn reserve(&self, records: usize) -> Result<Reservation> {
        let s = &self.inner.stats;
        let budget = self.inner.cfg.memory_budget_records as u64;
        let mut current = s.resident.load(Ordering::Relaxed);
        loop {
            let next = current + records as u64;
            if next > budget {
                return Err(Error::MemoryBudget {
                    requested: records,
                    resident: current as usize,
                    budget: budget as usize,
                });
            }
            match s
                .resident
                .compare_exchange_weak(current, next, Ordering::Relaxed, Ordering::Relaxed)
            {
                Ok(_) => {
                    s.peak_resident.fetch_max(next, Ordering::Relaxed);
                    return Ok(Reservation {
                        engine: self.clone(),
                        records,
                    });
                }
                Err(actual) => current = actual,
            }
        }
    }

    /// Split the budget left after `fixed_blocks` stream buffers into
    /// `structures` equal shares, each at least four blocks.
    pub fn shares(&self, fixed_blocks: usize, structures: usize) -> Result<usize> {
        let b = self.block();
        let available = self
            .inner
            .cfg
            .memory_budget_records
            .saturating_sub(self.resident_records() as usize)
            .saturating_sub(fixed_blocks * b);
        let share = available / structures.max(1);
        if share < 4 * b {
            return Err(Error::Config(format!(
                "memory budget {} is too small for {} stream buffers and {} structures of at least {} records",
                self.inner.cfg.memory_budget_records,
                fixed_blocks,
                structures,
                4 * b
            )));
        }
        Ok(share)
    }
}

/// Records registered with the residency gauge; released on drop.
#[derive(Debug)]
pub struct Reservation {
    engine: Engine,
    records: usize,
}

impl Reservation {
    pub fn records(&self) -> usize {
        self.records
    }
}

impl Drop for Reservation {
    fn drop(&mut self) {
        self.engine
            .inner
            .stats
            .resident
            .fetch_sub(self.records as u64, Ordering::Relaxed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_limits() {
        assert!(BlockConfig::new(1, 100).is_err());
        assert!(BlockConfig::new(8, 31).is_err());
        assert!(BlockConfig::new(8, 32).is_ok());
    }

    #[test]
    fn fresh_counters_are_zero() {
        let engine = Engine::in_memory(BlockConfig::default()).unwrap();
        assert_eq!(engine.counters(), IoCounters::default());
    }

    #[test]
    fn reservations_respect_budget() {
        let engine = Engine::in_memory(BlockConfig::new(4, 16).unwrap()).unwrap();
        let a = engine.reserve(10).unwrap();
        assert!(matches!(engine.reserve(7), Err(Error::MemoryBudget { .. })));
        let b = engine.reserve(6).unwrap();
        assert_eq!(engine.resident_records(), 16);
        drop(a);
        drop(b);
        assert_eq!(engine.resident_records(), 0);
        assert_eq!(engine.peak_resident_records(), 16);
    }
}
