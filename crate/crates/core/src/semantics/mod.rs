//! Finite modal FM frames, the algebra of refined regular open sets, the
//! satisfaction relation and first-order evaluation.

mod algebra;
mod fo_eval;
mod frame;
mod model;
mod worldset;

pub use algebra::RoAlgebra;
pub use fo_eval::{eval_fo, CompiledFo, FoEnv};
pub use frame::{FmFrame, FrameError, FrameFile, Relation};
pub use model::{
    all_valuations, for_each_valuation, valid, valid_with_budget, Assertion, CompiledAssertion, Model, SemanticsError, Valuation,
    DEFAULT_BUDGET,
};
pub use worldset::{WorldSet, MAX_WORLDS};
