use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ExplainError, Explanation};
use crate::Label;

/// Correctness of a classifier decision against gold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ItemOutcome {
    TP,
    TN,
    FP,
    FN,
}

impl ItemOutcome {
    pub fn new(gold: Label, pred: Label) -> Self {
        match (gold, pred) {
            (Label::Regulatory, Label::Regulatory) => ItemOutcome::TP,
            (Label::NonRegulatory, Label::NonRegulatory) => ItemOutcome::TN,
            (Label::NonRegulatory, Label::Regulatory) => ItemOutcome::FP,
            (Label::Regulatory, Label::NonRegulatory) => ItemOutcome::FN,
        }
    }

    /// Class an item contributes to in aggregates: TP to regulatory, TN to
    /// non-regulatory, errors to neither.
    pub fn retained_class(self) -> Option<Label> {
        match self {
            ItemOutcome::TP => Some(Label::Regulatory),
            ItemOutcome::TN => Some(Label::NonRegulatory),
            _ => None,
        }
    }
}

/// The `k` largest attributions as `(token, attribution, start_char)`,
/// descending; ties go to the earlier token.
pub fn top_k(expl: &Explanation, k: usize) -> Vec<(String, f64, usize)> {
    let mut idx: Vec<usize> = (0..expl.attributions.len()).collect();
    idx.sort_by(|&i, &j| {
        expl.attributions[j]
            .total_cmp(&expl.attributions[i])
            .then(expl.tokens[i].start_char.cmp(&expl.tokens[j].start_char))
    });
    idx.into_iter()
        .take(k)
        .map(|i| (expl.tokens[i].text.clone(), expl.attributions[i], expl.tokens[i].start_char))
        .collect()
}

fn check_aligned(expls: &[Explanation], outcomes: &[ItemOutcome]) -> Result<(), ExplainError> {
    if expls.len() != outcomes.len() {
        return Err(ExplainError::Alignment(expls.len(), outcomes.len()));
    }
    Ok(())
}

/// How often each lower-cased token is among the top `k` of a correctly
/// classified sentence, per class.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct InfluentialTable {
    pub regulatory: Vec<(String, usize)>,
    pub non_regulatory: Vec<(String, usize)>,
}

impl InfluentialTable {
    pub fn class(&self, label: Label) -> &[(String, usize)] {
        match label {
            Label::Regulatory => &self.regulatory,
            Label::NonRegulatory => &self.non_regulatory,
        }
    }
}

fn sorted_counts(counts: HashMap<String, usize>, min_freq: usize) -> Vec<(String, usize)> {
    let mut v: Vec<_> = counts.into_iter().filter(|(_, c)| *c >= min_freq).collect();
    v.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v
}

/// Frequency of tokens in the top `k` over TP (regulatory) and TN
/// (non-regulatory) items, dropping counts below `min_freq`, sorted by
/// frequency descending then token.
pub fn aggregate_influential(
    expls: &[Explanation],
    outcomes: &[ItemOutcome],
    k: usize,
    min_freq: usize,
) -> Result<InfluentialTable, ExplainError> {
    check_aligned(expls, outcomes)?;
    let mut reg = HashMap::new();
    let mut non = HashMap::new();
    for (e, o) in expls.iter().zip(outcomes) {
        let counts = match o.retained_class() {
            Some(Label::Regulatory) => &mut reg,
            Some(Label::NonRegulatory) => &mut non,
            None => continue,
        };
        for (token, _, _) in top_k(e, k) {
            *counts.entry(token.to_lowercase()).or_insert(0usize) += 1;
        }
    }
    Ok(InfluentialTable {
        regulatory: sorted_counts(reg, min_freq),
        non_regulatory: sorted_counts(non, min_freq),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    /// Population standard deviation.
    pub stddev: f64,
}

impl Summary {
    pub fn of(values: &[f64]) -> Option<Summary> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mid = sorted.len() / 2;
        let median = if sorted.len().is_multiple_of(2) {
            (sorted[mid - 1] + sorted[mid]) / 2.0
        } else {
            sorted[mid]
        };
        Some(Summary {
            mean,
            median,
            stddev: var.sqrt(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassPositionStats {
    /// Relative start position (%) of top-k tokens.
    pub position_pct: Option<Summary>,
    /// Sentence length in characters, one value per sentence.
    pub sent_chars: Option<Summary>,
    pub n_tokens: usize,
    pub n_sentences: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositionStats {
    pub regulatory: ClassPositionStats,
    pub non_regulatory: ClassPositionStats,
}

impl PositionStats {
    pub fn class(&self, label: Label) -> &ClassPositionStats {
        match label {
            Label::Regulatory => &self.regulatory,
            Label::NonRegulatory => &self.non_regulatory,
        }
    }
}

/// Start offset of a token as a percentage of the sentence length in
/// characters.
pub fn relative_position(start_char: usize, sentence_chars: usize) -> f64 {
    start_char as f64 / sentence_chars as f64 * 100.0
}

/// Position and sentence-length statistics over TP and TN items.
pub fn position_stats(
    expls: &[Explanation],
    outcomes: &[ItemOutcome],
    k: usize,
) -> Result<PositionStats, ExplainError> {
    check_aligned(expls, outcomes)?;
    let mut positions: [Vec<f64>; 2] = Default::default();
    let mut lengths: [Vec<f64>; 2] = Default::default();
    for (e, o) in expls.iter().zip(outcomes) {
        let Some(class) = o.retained_class() else {
            continue;
        };
        let slot = class.bit() as usize;
        let chars = crate::text::char_len(&e.sentence);
        lengths[slot].push(chars as f64);
        for (_, _, start) in top_k(e, k) {
            positions[slot].push(relative_position(start, chars));
        }
    }
    let stats = |slot: usize| ClassPositionStats {
        position_pct: Summary::of(&positions[slot]),
        sent_chars: Summary::of(&lengths[slot]),
        n_tokens: positions[slot].len(),
        n_sentences: lengths[slot].len(),
    };
    Ok(PositionStats {
        regulatory: stats(1),
        non_regulatory: stats(0),
    })
}

/// `token,class,frequency`
pub fn write_influential_csv(path: &Path, table: &InfluentialTable) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["token", "class", "frequency"])?;
    for label in [Label::Regulatory, Label::NonRegulatory] {
        for (token, count) in table.class(label) {
            w.write_record([token.as_str(), label.as_str(), &count.to_string()])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    crate::fsutil::write_atomic(path, &bytes)
}

/// `class,stat,position_pct,sent_chars` with rows for mean, median and
/// stddev; empty cells where a class has no items.
pub fn write_positions_csv(path: &Path, stats: &PositionStats) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["class", "stat", "position_pct", "sent_chars"])?;
    let fmt = |s: Option<Summary>, f: fn(Summary) -> f64| s.map_or_else(String::new, |s| format!("{:.4}", f(s)));
    for label in [Label::Regulatory, Label::NonRegulatory] {
        let c = stats.class(label);
        let rows: [(&str, fn(Summary) -> f64); 3] = [
            ("mean", |s| s.mean),
            ("median", |s| s.median),
            ("stddev", |s| s.stddev),
        ];
        for (name, f) in rows {
            w.write_record([label.as_str(), name, &fmt(c.position_pct, f), &fmt(c.sent_chars, f)])?;
        }
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    crate::fsutil::write_atomic(path, &bytes)
}
