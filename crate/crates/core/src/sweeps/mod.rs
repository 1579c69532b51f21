//! Level-by-level sweeps: `Apply` (top-down product), `Reduce` (bottom-up
//! canonicalization) and `Transpose`.

mod apply;
mod ops;
mod reduce;
mod transpose;

pub use apply::apply;
pub(crate) use apply::{product, ProductOptions};
pub use ops::BooleanOp;
pub use reduce::reduce;
pub(crate) use reduce::{reduce_with, ReduceOptions};
pub use transpose::{transpose, transpose_diagram};

use crate::bdd::{NodeSource, ReducedDiagram};
use crate::extmem::Engine;
use crate::Result;

/// Existential or universal quantification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    Exists,
    Forall,
}

impl Quantifier {
    /// The terminal that decides the quantification on its own.
    pub fn absorbing(self) -> bool {
        self == Quantifier::Exists
    }

    /// The operator combining the two cofactors.
    pub fn op(self) -> BooleanOp {
        match self {
            Quantifier::Exists => BooleanOp::Or,
            Quantifier::Forall => BooleanOp::And,
        }
    }
}

impl Engine {
    /// `reduce(apply(f, g, op))`
    pub fn binary(&self, f: &dyn NodeSource, g: &dyn NodeSource, op: BooleanOp) -> Result<ReducedDiagram> {
        reduce(self, apply(self, f, g, op)?, None)
    }

    pub fn and(&self, f: &dyn NodeSource, g: &dyn NodeSource) -> Result<ReducedDiagram> {
        self.binary(f, g, BooleanOp::And)
    }

    pub fn or(&self, f: &dyn NodeSource, g: &dyn NodeSource) -> Result<ReducedDiagram> {
        self.binary(f, g, BooleanOp::Or)
    }

    pub fn xor(&self, f: &dyn NodeSource, g: &dyn NodeSource) -> Result<ReducedDiagram> {
        self.binary(f, g, BooleanOp::Xor)
    }

    /// `f ∧ ¬g`
    pub fn diff(&self, f: &dyn NodeSource, g: &dyn NodeSource) -> Result<ReducedDiagram> {
        self.binary(f, g, BooleanOp::Diff)
    }

    pub fn not(&self, f: &dyn NodeSource) -> Result<ReducedDiagram> {
        self.binary(f, &ReducedDiagram::constant(true), BooleanOp::Xor)
    }
}
