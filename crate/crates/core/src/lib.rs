//! Correspondence theory for intuitionistic modal logic over FM frames.
//!
//! The crate classifies formulas as inductive, runs the ALBA elimination
//! procedure on them, translates the resulting pure quasi-inequalities into
//! first-order sentences over `≤₁`, `≤₂` and `R`, and checks all of it by brute
//! force on finite frames.

pub mod alba;
pub mod fo;
pub mod formula;
pub mod harness;
pub mod inductive;
pub mod parse;
pub mod semantics;

pub use formula::{Formula, Inequality, Polarity, QuasiInequality};
pub use parse::{parse_formula, parse_inequality, parse_quasi, ParseError};

/// The guide's chapters, compiled so that their snippets run as doctests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/frames.md")]
    mod frames {}
    #[doc = include_str!("../../../book/src/inductive.md")]
    mod inductive {}
    #[doc = include_str!("../../../book/src/alba.md")]
    mod alba {}
    #[doc = include_str!("../../../book/src/translation.md")]
    mod translation {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
