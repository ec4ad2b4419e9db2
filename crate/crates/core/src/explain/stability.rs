use std::collections::BTreeSet;

use serde::Serialize;

use super::{explain_sentence, ExplainConfig, ExplainError, Explanation};
use crate::ruleclf::Classifier;

const TOP: usize = 3;
const DEGENERATE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityStatus {
    Stable,
    Unstable,
    /// Every attribution is ~0 in every run, so the top tokens carry no
    /// information.
    Degenerate,
}

#[derive(Debug, Clone, Serialize)]
pub struct StabilityReport {
    /// Unit indices of the top-3 attributions, per run.
    pub top_sets: Vec<BTreeSet<usize>>,
    /// The same units as text, highest attribution first.
    pub top_tokens: Vec<Vec<String>>,
    /// Jaccard overlap for each pair of runs, in (i, j) lexicographic order.
    pub pairwise_jaccard: Vec<f64>,
    pub mean_jaccard: f64,
    pub status: StabilityStatus,
    /// Doubled sample count to try when unstable.
    pub suggested_n_samples: Option<usize>,
}

fn jaccard(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// Indices of the top-3 units, highest attribution first.
fn top_ranked(e: &Explanation) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..e.attributions.len()).collect();
    idx.sort_by(|&i, &j| {
        e.attributions[j]
            .total_cmp(&e.attributions[i])
            .then(e.tokens[i].start_char.cmp(&e.tokens[j].start_char))
    });
    idx.truncate(TOP);
    idx
}

/// Repeats the explanation with seeds `seed, seed + 1, ...` and compares the
/// top-3 units across runs. Mean pairwise Jaccard below 2/3 is unstable.
pub fn stability_check(
    sentence: &str,
    classifier: &dyn Classifier,
    cfg: &ExplainConfig,
    runs: usize,
) -> Result<StabilityReport, ExplainError> {
    if runs < 2 {
        return Err(ExplainError::TooFewRuns);
    }
    let mut explanations = Vec::with_capacity(runs);
    for r in 0..runs {
        let run_cfg = ExplainConfig {
            seed: cfg.seed.wrapping_add(r as u64),
            ..cfg.clone()
        };
        explanations.push(explain_sentence(sentence, classifier, &run_cfg)?);
    }
    let ranked: Vec<Vec<usize>> = explanations.iter().map(top_ranked).collect();
    let top_sets: Vec<BTreeSet<usize>> = ranked.iter().map(|r| r.iter().copied().collect()).collect();
    let top_tokens = explanations
        .iter()
        .zip(&ranked)
        .map(|(e, r)| r.iter().map(|&i| e.tokens[i].text.clone()).collect())
        .collect();
    let mut pairwise_jaccard = Vec::new();
    for i in 0..runs {
        for j in i + 1..runs {
            pairwise_jaccard.push(jaccard(&top_sets[i], &top_sets[j]));
        }
    }
    let mean_jaccard = pairwise_jaccard.iter().sum::<f64>() / pairwise_jaccard.len() as f64;
    let degenerate = explanations
        .iter()
        .all(|e| e.attributions.iter().all(|a| a.abs() < DEGENERATE_EPS));
    let status = if degenerate {
        StabilityStatus::Degenerate
    } else if mean_jaccard < 2.0 / 3.0 {
        StabilityStatus::Unstable
    } else {
        StabilityStatus::Stable
    };
    Ok(StabilityReport {
        top_sets,
        top_tokens,
        pairwise_jaccard,
        mean_jaccard,
        status,
        suggested_n_samples: (status == StabilityStatus::Unstable).then_some(cfg.n_samples * 2),
    })
}
