//! Binary decision diagrams manipulated by time-forward processing.
//!
//! Every diagram lives in a block file of fixed-width node records sorted
//! top-down by level. Operations never chase pointers; they sweep levels in
//! order and forward pending work through levelized priority queues. All
//! block transfers and all buffer residency go through an [`Engine`], which
//! counts I/Os and enforces a memory budget of `M` records.
//!
//! The crate is organised bottom-up:
//!
//! - [`extmem`]: block files, an external merge sorter, a levelized priority
//!   queue and the I/O counters.
//! - [`bdd`]: node identities, reduced diagrams, unreduced arc streams,
//!   evaluation and the `XBDD0001` file format.
//! - [`sweeps`]: the top-down `Apply` product construction, the bottom-up
//!   `Reduce`, and `Transpose`.
//! - [`substitution`]: monotone variable substitution (streamed, inside
//!   `Reduce`, or as a deferred affine shift).
//! - [`quantify`]: nested-sweep quantification, `AndExists` and the
//!   relational product (`relnext`/`relprev`).
//! - [`models`]: Petri net and Boolean network frontends.
//! - [`checker`]: reachability, deadlock, SCC and single-step tasks, plus
//!   the `xbdd` command line.

pub mod bdd;
pub mod checker;
mod error;
pub mod extmem;
pub mod models;
pub mod quantify;
pub mod substitution;
pub mod sweeps;

pub use bdd::{LevelInfo, NodeRecord, Ptr, ReducedDiagram, Uid};
pub use error::{Error, Result};
pub use extmem::{BlockConfig, Engine, IoCounters};
pub use quantify::{OptTier, RelationSpec, VarSet};
pub use substitution::{AffineShift, MonotoneSubst, ShiftedDiagram};
pub use sweeps::BooleanOp;

/// Position of a variable in the global order; 0 is the topmost level.
pub type Level = u32;
