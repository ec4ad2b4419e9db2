//! Classification metrics and agreement.
//!
//! Undefined ratios (0/0) are `None`, never 0.

mod alpha;
mod compare;
mod join;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Label;

pub use alpha::krippendorff_alpha;
pub use compare::{compare_models, ComparisonReport, Disagreement, ModelReport, PairwiseAgreement};
pub use join::{align_predictions, AlignedEvaluation};

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("ratings are degenerate: alpha undefined")]
    DegenerateRatings,
    #[error("alpha needs at least two items")]
    TooFewItems,
    #[error("{0}")]
    Join(String),
}

/// Counts with regulatory as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }
}

pub fn confusion(gold: &[Label], pred: &[Label]) -> Result<ConfusionMatrix, MetricsError> {
    if gold.len() != pred.len() {
        return Err(MetricsError::LengthMismatch {
            left: gold.len(),
            right: pred.len(),
        });
    }
    if gold.is_empty() {
        return Err(MetricsError::EmptyInput);
    }
    let mut cm = ConfusionMatrix::default();
    for (g, p) in gold.iter().zip(pred) {
        match (g, p) {
            (Label::Regulatory, Label::Regulatory) => cm.tp += 1,
            (Label::NonRegulatory, Label::Regulatory) => cm.fp += 1,
            (Label::NonRegulatory, Label::NonRegulatory) => cm.tn += 1,
            (Label::Regulatory, Label::NonRegulatory) => cm.fn_ += 1,
        }
    }
    Ok(cm)
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Precision, recall and F1 for one class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub f1: Option<f64>,
}

impl ClassMetrics {
    fn from_counts(tp: usize, fp: usize, fn_: usize) -> Self {
        let precision = ratio(tp, tp + fp);
        let recall = ratio(tp, tp + fn_);
        let f1 = match (precision, recall) {
            (Some(p), Some(r)) if p + r > 0.0 => Some(2.0 * p * r / (p + r)),
            _ => None,
        };
        Self {
            precision,
            recall,
            f1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub n: usize,
    pub confusion: ConfusionMatrix,
    pub accuracy: f64,
    pub regulatory: ClassMetrics,
    pub non_regulatory: ClassMetrics,
    /// Krippendorff's alpha against gold; `None` when undefined.
    pub alpha_vs_gold: Option<f64>,
}

/// Accuracy and per-class metrics from counts. `alpha_vs_gold` is left
/// `None`; [`evaluate`] fills it.
pub fn per_class_metrics(cm: &ConfusionMatrix) -> MetricsReport {
    let n = cm.total();
    assert!(n > 0, "confusion matrix is empty");
    MetricsReport {
        n,
        confusion: *cm,
        accuracy: (cm.tp + cm.tn) as f64 / n as f64,
        regulatory: ClassMetrics::from_counts(cm.tp, cm.fp, cm.fn_),
        non_regulatory: ClassMetrics::from_counts(cm.tn, cm.fn_, cm.fp),
        alpha_vs_gold: None,
    }
}

/// Full report for one prediction vector.
pub fn evaluate(gold: &[Label], pred: &[Label]) -> Result<MetricsReport, MetricsError> {
    let cm = confusion(gold, pred)?;
    let mut report = per_class_metrics(&cm);
    report.alpha_vs_gold = match krippendorff_alpha(gold, pred) {
        Ok(a) => Some(a),
        Err(MetricsError::DegenerateRatings | MetricsError::TooFewItems) => None,
        Err(e) => return Err(e),
    };
    Ok(report)
}
