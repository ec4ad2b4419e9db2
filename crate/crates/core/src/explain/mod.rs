//! Token-masking local surrogate explanations and their aggregation.
//!
//! A sentence is perturbed by dropping random subsets of its tokens (or of
//! fixed-length token blocks), every perturbation is scored by the
//! classifier under study, and a kernel-weighted ridge regression from the
//! keep-indicators to the scores yields one attribution per unit.

mod aggregate;
mod lime;
mod stability;
mod surrogate;
mod tokenize;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ruleclf::ClassifierError;
use crate::Label;

pub use aggregate::{
    aggregate_influential, position_stats, relative_position, top_k, write_influential_csv,
    write_positions_csv,
    ClassPositionStats, InfluentialTable, ItemOutcome, PositionStats, Summary,
};
pub use lime::{explain_sentence, mask_units, perturbed_text, sample_masks, MaskSample};
pub use stability::{stability_check, StabilityReport, StabilityStatus};
pub use surrogate::{fit_weighted_ridge, RidgeFit};
pub use tokenize::{tokenize, TokenSpan};

#[derive(Debug, Error)]
pub enum ExplainError {
    #[error("invalid explainer configuration: {0}")]
    InvalidConfig(String),
    #[error("sentence has no tokens")]
    EmptySentence,
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
    #[error("classifier returned {got} scores for {expected} texts")]
    ScoreCount { expected: usize, got: usize },
    #[error("explanations and outcomes are not aligned: {0} vs {1}")]
    Alignment(usize, usize),
    #[error("stability check needs at least two runs")]
    TooFewRuns,
    #[error("surrogate fit failed: {0}")]
    Fit(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExplainConfig {
    pub n_samples: usize,
    pub keep_probability: f64,
    /// Kernel width in units of drop fraction.
    pub kernel_width: f64,
    pub ridge_lambda: f64,
    /// Tokens per masking unit; 1 masks single tokens.
    pub ngram: usize,
    pub seed: u64,
    /// Threads used to score the perturbation batch.
    pub threads: usize,
}

impl Default for ExplainConfig {
    fn default() -> Self {
        Self {
            n_samples: 1000,
            keep_probability: 0.5,
            kernel_width: 0.75,
            ridge_lambda: 1.0,
            ngram: 1,
            seed: 0,
            threads: 1,
        }
    }
}

impl ExplainConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), ExplainError> {
        let bad = |m: &str| Err(ExplainError::InvalidConfig(m.to_owned()));
        if self.n_samples < 10 {
            return bad("n_samples must be at least 10");
        }
        if !(self.keep_probability > 0.0 && self.keep_probability < 1.0) {
            return bad("keep_probability must lie strictly between 0 and 1");
        }
        if self.ngram < 1 {
            return bad("ngram must be at least 1");
        }
        if !(self.kernel_width > 0.0) {
            return bad("kernel_width must be positive");
        }
        if !(self.ridge_lambda >= 0.0) {
            return bad("ridge_lambda must be non-negative");
        }
        Ok(())
    }
}

/// Attributions for one sentence under one classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Explanation {
    pub sentence: String,
    /// Masking units: tokens, or token blocks in n-gram mode.
    pub tokens: Vec<TokenSpan>,
    pub attributions: Vec<f64>,
    pub intercept: f64,
    /// Class the attributions point towards.
    #[serde(rename = "class")]
    pub class_scored: Label,
    /// `P(regulatory)` of the unperturbed sentence.
    pub base_score: f64,
    pub n_samples: usize,
    pub seed: u64,
    pub ngram: usize,
}
