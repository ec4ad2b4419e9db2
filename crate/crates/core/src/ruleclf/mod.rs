//! Rule-based regulatory-statement classification and classifier adapters.
//!
//! A sentence is regulatory when some lexical verb carries a `shall`/`must`
//! auxiliary and a dependency path from that verb reaches an agent noun:
//! backwards (towards the subject) in active clauses, forwards in passive
//! ones.

mod engine;
mod export;
mod hybrid;
mod predictions;
mod rules;
mod subprocess;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::Label;
pub use engine::{
    classify_rule, detect_voice, find_attribute, find_deontic_verbs, noun_phrase, AttributeMatch,
    AttributeSearch, DeonticVerb,
};
pub use export::{write_outcomes_csv, OutcomeRow};
pub use hybrid::{classify_hybrid, classify_hybrid_batch, is_proper_noun_like, DelegationPolicy};
pub use predictions::{classifier_from_predictions, PredictionTable};
pub use rules::RuleClassifier;
pub use subprocess::{classifier_from_subprocess, SubprocessClassifier, DEFAULT_TIMEOUT};

#[derive(Debug, Error)]
pub enum ClassifierError {
    #[error("no prediction for sentence {0:?}")]
    MissingPrediction(String),
    #[error("fallback classifier unavailable: {0}")]
    FallbackUnavailable(String),
    #[error("{path}: {message}")]
    Data { path: String, message: String },
}

/// Uniform scoring surface over the rule engine, prediction files and
/// external processes. Scores are `P(regulatory)` in `[0, 1]`, one per
/// input text, in input order.
pub trait Classifier: Send + Sync {
    fn name(&self) -> &str;

    fn classify_batch(&self, texts: &[String]) -> Result<Vec<f64>, ClassifierError>;
}

impl<C: Classifier + ?Sized> Classifier for &C {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn classify_batch(&self, texts: &[String]) -> Result<Vec<f64>, ClassifierError> {
        (**self).classify_batch(texts)
    }
}

impl<C: Classifier + ?Sized> Classifier for Box<C> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn classify_batch(&self, texts: &[String]) -> Result<Vec<f64>, ClassifierError> {
        (**self).classify_batch(texts)
    }
}

/// Which attribute rules apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RuleProfile {
    /// Any agent noun on a forward path satisfies a passive clause.
    #[default]
    PaperV1,
    /// Passive clauses only accept the `by`-agent of the verb.
    Refined,
}

impl FromStr for RuleProfile {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().replace('-', "_").as_str() {
            "paper_v1" => Ok(RuleProfile::PaperV1),
            "refined" => Ok(RuleProfile::Refined),
            other => Err(format!("unknown rule profile {other:?}")),
        }
    }
}

impl fmt::Display for RuleProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleProfile::PaperV1 => "paper_v1",
            RuleProfile::Refined => "refined",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Voice {
    Active,
    Passive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureReason {
    NoDeonticVerb,
    NoAttributeFound,
    PronounAttribute,
    UnknownAgentNoun,
}

impl FailureReason {
    pub fn as_str(self) -> &'static str {
        match self {
            FailureReason::NoDeonticVerb => "no_deontic_verb",
            FailureReason::NoAttributeFound => "no_attribute_found",
            FailureReason::PronounAttribute => "pronoun_attribute",
            FailureReason::UnknownAgentNoun => "unknown_agent_noun",
        }
    }

    /// Whether the failure happened after a deontic verb was found.
    pub fn is_attribute_stage(self) -> bool {
        !matches!(self, FailureReason::NoDeonticVerb)
    }

    /// How far the search got; higher is further.
    fn progress(self) -> u8 {
        match self {
            FailureReason::NoDeonticVerb => 0,
            FailureReason::NoAttributeFound => 1,
            FailureReason::PronounAttribute | FailureReason::UnknownAgentNoun => 2,
        }
    }
}

impl fmt::Display for FailureReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Nominal that was considered for the attribute but rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RejectedCandidate {
    pub token_index: usize,
    pub form: String,
    pub upos: String,
}

/// Why the rule engine decided as it did.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rationale {
    pub deontic_verb_index: Option<usize>,
    pub deontic_aux_lemma: Option<String>,
    pub voice: Option<Voice>,
    pub attribute_token_index: Option<usize>,
    pub attribute_phrase: Option<String>,
    pub failure_reason: Option<FailureReason>,
    pub rejected_candidate: Option<RejectedCandidate>,
    /// Name of the classifier that decided, when the rules delegated.
    pub delegated_to: Option<String>,
}

impl Rationale {
    /// Field invariants for a rationale attached to `label`.
    ///
    /// Rule decisions: regulatory carries verb, voice and attribute with no
    /// failure; non-regulatory carries a failure. Delegated decisions carry
    /// the rule failure that triggered delegation and no attribute.
    pub fn check(&self, label: Label) -> Result<(), String> {
        if self.delegated_to.is_some() {
            return match (self.failure_reason, self.attribute_token_index) {
                (Some(f), None) if f.is_attribute_stage() => Ok(()),
                _ => Err("delegated outcome must record its attribute-stage failure".into()),
            };
        }
        match label {
            Label::Regulatory => {
                if self.deontic_verb_index.is_none()
                    || self.voice.is_none()
                    || self.attribute_token_index.is_none()
                {
                    return Err("regulatory outcome missing verb, voice or attribute".into());
                }
                if self.failure_reason.is_some() {
                    return Err("regulatory outcome has a failure reason".into());
                }
            }
            Label::NonRegulatory => {
                if self.failure_reason.is_none() {
                    return Err("non-regulatory outcome without failure reason".into());
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationOutcome {
    pub label: Label,
    /// `P(regulatory)`; the rule engine only emits 0.0 or 1.0.
    pub score: f64,
    pub rationale: Rationale,
}

impl ClassificationOutcome {
    pub fn regulatory_by_rules(&self) -> bool {
        self.label == Label::Regulatory && self.rationale.delegated_to.is_none()
    }
}
