use std::ops::Range;

use rayon::prelude::*;

use super::{fit_weighted_ridge, tokenize, ExplainConfig, ExplainError, Explanation, TokenSpan};
use crate::rng::PortableRng;
use crate::ruleclf::Classifier;
use crate::Label;

/// One perturbation of the sentence and the classifier's score for it.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskSample {
    pub keep_mask: Vec<bool>,
    pub perturbed_text: String,
    pub model_score: f64,
}

/// Consecutive, non-overlapping blocks of `ngram` tokens; the last block
/// may be shorter.
pub fn mask_units(n_tokens: usize, ngram: usize) -> Vec<Range<usize>> {
    (0..n_tokens)
        .step_by(ngram.max(1))
        .map(|s| s..(s + ngram).min(n_tokens))
        .collect()
}

/// The all-kept mask followed by `n_samples - 1` masks drawn unit by unit
/// from a [`PortableRng`] seeded with `seed`.
pub fn sample_masks(n_units: usize, n_samples: usize, keep_probability: f64, seed: u64) -> Vec<Vec<bool>> {
    let mut rng = PortableRng::seed_from_u64(seed);
    let mut masks = Vec::with_capacity(n_samples);
    masks.push(vec![true; n_units]);
    for _ in 1..n_samples {
        masks.push((0..n_units).map(|_| rng.chance(keep_probability)).collect());
    }
    masks
}

/// Kept tokens joined by single spaces.
pub fn perturbed_text(tokens: &[TokenSpan], units: &[Range<usize>], mask: &[bool]) -> String {
    units
        .iter()
        .zip(mask)
        .filter(|(_, &keep)| keep)
        .flat_map(|(r, _)| tokens[r.clone()].iter().map(|t| t.text.as_str()))
        .collect::<Vec<_>>()
        .join(" ")
}

fn score_all(classifier: &dyn Classifier, texts: &[String], threads: usize) -> Result<Vec<f64>, ExplainError> {
    let scores = if threads <= 1 {
        classifier.classify_batch(texts)?
    } else {
        let chunk = texts.len().div_ceil(threads).max(1);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| ExplainError::InvalidConfig(e.to_string()))?;
        let parts: Vec<_> = pool.install(|| {
            texts
                .par_chunks(chunk)
                .map(|c| classifier.classify_batch(c))
                .collect()
        });
        let mut scores = Vec::with_capacity(texts.len());
        for part in parts {
            scores.extend(part?);
        }
        scores
    };
    if scores.len() != texts.len() {
        return Err(ExplainError::ScoreCount {
            expected: texts.len(),
            got: scores.len(),
        });
    }
    Ok(scores)
}

pub(crate) fn explain_with_samples(
    sentence: &str,
    classifier: &dyn Classifier,
    cfg: &ExplainConfig,
) -> Result<(Explanation, Vec<MaskSample>), ExplainError> {
    cfg.validate()?;
    let tokens = tokenize(sentence);
    if tokens.is_empty() {
        return Err(ExplainError::EmptySentence);
    }
    let units = mask_units(tokens.len(), cfg.ngram);
    let masks = sample_masks(units.len(), cfg.n_samples, cfg.keep_probability, cfg.seed);
    let texts: Vec<String> = masks.iter().map(|m| perturbed_text(&tokens, &units, m)).collect();
    let scores = score_all(classifier, &texts, cfg.threads)?;

    let base_score = scores[0];
    let class_scored = Label::from_score(base_score);
    let targets: Vec<f64> = match class_scored {
        Label::Regulatory => scores.clone(),
        Label::NonRegulatory => scores.iter().map(|p| 1.0 - p).collect(),
    };
    let n_units = units.len() as f64;
    let width2 = cfg.kernel_width * cfg.kernel_width;
    let weights: Vec<f64> = masks
        .iter()
        .map(|m| {
            let kept = m.iter().filter(|&&k| k).count() as f64;
            let d = 1.0 - kept / n_units;
            (-d * d / width2).exp()
        })
        .collect();
    let features: Vec<Vec<f64>> = masks
        .iter()
        .map(|m| m.iter().map(|&k| if k { 1.0 } else { 0.0 }).collect())
        .collect();
    let fit = fit_weighted_ridge(&features, &targets, &weights, cfg.ridge_lambda)?;

    let unit_spans: Vec<TokenSpan> = units
        .iter()
        .map(|r| TokenSpan {
            text: tokens[r.clone()]
                .iter()
                .map(|t| t.text.as_str())
                .collect::<Vec<_>>()
                .join(" "),
            start_char: tokens[r.start].start_char,
        })
        .collect();
    let samples = masks
        .into_iter()
        .zip(texts)
        .zip(scores)
        .map(|((keep_mask, perturbed_text), model_score)| MaskSample {
            keep_mask,
            perturbed_text,
            model_score,
        })
        .collect();
    Ok((
        Explanation {
            sentence: sentence.to_owned(),
            tokens: unit_spans,
            attributions: fit.coefficients,
            intercept: fit.intercept,
            class_scored,
            base_score,
            n_samples: cfg.n_samples,
            seed: cfg.seed,
            ngram: cfg.ngram,
        },
        samples,
    ))
}

/// Explains the classifier's decision on `sentence`. Positive attributions
/// push towards the class predicted for the unperturbed sentence.
pub fn explain_sentence(
    sentence: &str,
    classifier: &dyn Classifier,
    cfg: &ExplainConfig,
) -> Result<Explanation, ExplainError> {
    explain_with_samples(sentence, classifier, cfg).map(|(e, _)| e)
}
