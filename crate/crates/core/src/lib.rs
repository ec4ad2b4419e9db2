//! Classification of regulatory statements in EU legislation.
//!
//! The crate is organised around the pipeline it supports:
//!
//! * [`corpus`] extracts enacting terms from legal acts, segments them into
//!   sentences, keeps the deontic ones and draws stratified samples.
//! * [`parse`] reads dependency parses (CoNLL-U) and answers agent-noun
//!   queries against a lexicon.
//! * [`ruleclf`] decides whether a parsed sentence is regulatory using
//!   dependency-path rules, and fuses that decision with external
//!   classifiers.
//! * [`metrics`] scores classifiers against gold labels.
//! * [`explain`] produces token-masking attributions for any classifier.
//! * [`cli`] wires all of the above into the `lexrule` binary.

pub mod cli;
pub mod corpus;
pub mod explain;
pub mod fsutil;
mod label;
pub mod metrics;
pub mod parse;
pub mod rng;
pub mod ruleclf;
pub mod text;

pub use label::Label;
pub use parse::{AgentLexicon, ParsedSentence, Token};
pub use ruleclf::{Classifier, ClassificationOutcome, RuleProfile};
