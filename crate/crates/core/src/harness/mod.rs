//! Frame enumeration, formula corpora and the checks that run over them.

mod corpus;
mod frames;
mod suites;

pub use corpus::{
    fixed_corpus, inductive_corpus, sample_expanded, sample_inductive, CORPUS_DEPTH, CORPUS_VARIABLES, FIXED_CORPUS,
};
pub use frames::{
    enumerate_frames, frames_up_to, is_canonical, partial_orders, sample_frames, sub_orders, world_names,
    EnumerationError, EnumerationOptions, MAX_ENUMERATION_SIZE,
};
pub use suites::{
    adequacy_suite, algebra_suite, crosscheck, rule_soundness_suite, sentence_holds, AdequacyReport, AlgebraReport,
    CrosscheckReport, HarnessError, Mismatch, PropertyResult, RuleSoundnessReport, RuleViolation, SuiteOptions,
    PROPERTY_NAMES,
};
