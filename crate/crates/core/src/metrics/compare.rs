use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{evaluate, krippendorff_alpha, MetricsError, MetricsReport};
use crate::Label;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelReport {
    pub name: String,
    pub metrics: MetricsReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disagreement {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sentence: Option<String>,
    pub label_a: u8,
    pub label_b: u8,
    pub gold: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseAgreement {
    pub model_a: String,
    pub model_b: String,
    pub alpha: Option<f64>,
    pub disagreements: Vec<Disagreement>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub models: Vec<ModelReport>,
    pub pairwise: Vec<PairwiseAgreement>,
}

fn alpha_or_none(a: &[Label], b: &[Label]) -> Result<Option<f64>, MetricsError> {
    match krippendorff_alpha(a, b) {
        Ok(v) => Ok(Some(v)),
        Err(MetricsError::DegenerateRatings | MetricsError::TooFewItems) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Per-model metrics against gold, plus alpha and the disagreeing items for
/// every pair of models. Models are reported in name order.
pub fn compare_models(
    gold: &[Label],
    preds: &BTreeMap<String, Vec<Label>>,
    sentences: Option<&[String]>,
) -> Result<ComparisonReport, MetricsError> {
    let mut models = Vec::new();
    for (name, pred) in preds {
        models.push(ModelReport {
            name: name.clone(),
            metrics: evaluate(gold, pred)?,
        });
    }
    let names: Vec<&String> = preds.keys().collect();
    let mut pairwise = Vec::new();
    for (i, a) in names.iter().enumerate() {
        for b in &names[i + 1..] {
            let (pa, pb) = (&preds[*a], &preds[*b]);
            let disagreements = pa
                .iter()
                .zip(pb.iter())
                .enumerate()
                .filter(|(_, (x, y))| x != y)
                .map(|(index, (x, y))| Disagreement {
                    index,
                    sentence: sentences.and_then(|s| s.get(index).cloned()),
                    label_a: x.bit(),
                    label_b: y.bit(),
                    gold: gold[index].bit(),
                })
                .collect();
            pairwise.push(PairwiseAgreement {
                model_a: (*a).clone(),
                model_b: (*b).clone(),
                alpha: alpha_or_none(pa, pb)?,
                disagreements,
            });
        }
    }
    Ok(ComparisonReport { models, pairwise })
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "undef".to_owned(), |x| format!("{x:.2}"))
}

impl ComparisonReport {
    /// Plain-text table: accuracy, per-class F1/precision/recall and alpha
    /// against gold, one row per model.
    pub fn to_table(&self) -> String {
        let name_w = self
            .models
            .iter()
            .map(|m| m.name.len())
            .chain(std::iter::once(5))
            .max()
            .unwrap_or(5);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<name_w$}  {:>8}  {:^26}  {:^26}  {:>7}",
            "", "", "Non-regulatory", "Regulatory", ""
        );
        let _ = writeln!(
            out,
            "{:<name_w$}  {:>8}  {:>8} {:>8} {:>8}  {:>8} {:>8} {:>8}  {:>7}",
            "Model", "Accuracy", "F1", "Prec", "Recall", "F1", "Prec", "Recall", "Alpha"
        );
        for m in &self.models {
            let r = &m.metrics;
            let _ = writeln!(
                out,
                "{:<name_w$}  {:>8}  {:>8} {:>8} {:>8}  {:>8} {:>8} {:>8}  {:>7}",
                m.name,
                cell(Some(r.accuracy)),
                cell(r.non_regulatory.f1),
                cell(r.non_regulatory.precision),
                cell(r.non_regulatory.recall),
                cell(r.regulatory.f1),
                cell(r.regulatory.precision),
                cell(r.regulatory.recall),
                cell(r.alpha_vs_gold),
            );
        }
        for p in &self.pairwise {
            let _ = writeln!(
                out,
                "alpha({}, {}) = {}  ({} disagreements)",
                p.model_a,
                p.model_b,
                cell(p.alpha),
                p.disagreements.len()
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Label::{NonRegulatory as N, Regulatory as R};

    #[test]
    fn identical_models_agree() {
        let gold = vec![R, N, R, N];
        let preds = BTreeMap::from([("a".to_string(), vec![R, N, N, N]), ("b".to_string(), vec![R, N, N, N])]);
        let rep = compare_models(&gold, &preds, None).unwrap();
        assert_eq!(rep.pairwise[0].alpha, Some(1.0));
        assert!(rep.pairwise[0].disagreements.is_empty());
    }

    #[test]
    fn gold_and_inverted_gold() {
        let gold = vec![R, N, R, N, N];
        let inv: Vec<Label> = gold.iter().map(|l| l.other()).collect();
        let preds = BTreeMap::from([("gold".to_string(), gold.clone()), ("inv".to_string(), inv)]);
        let rep = compare_models(&gold, &preds, None).unwrap();
        assert_eq!(rep.models[0].metrics.accuracy, 1.0);
        assert_eq!(rep.models[1].metrics.accuracy, 0.0);
        assert_eq!(rep.pairwise[0].disagreements.len(), 5);
    }

    #[test]
    fn table_has_one_row_per_model() {
        let gold = vec![R, N];
        let preds = BTreeMap::from([("dep".to_string(), vec![R, N])]);
        let t = compare_models(&gold, &preds, None).unwrap().to_table();
        assert!(t.lines().any(|l| l.starts_with("dep ") && l.contains("1.00")));
    }
}
