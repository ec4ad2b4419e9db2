use std::collections::HashMap;

use super::{classify_rule, Classifier, ClassifierError, RuleProfile};
use crate::parse::{AgentLexicon, ParsedSentence};
use crate::text::normalize_sentence;

/// The rule engine behind the [`Classifier`] surface. Texts are looked up
/// among the parses it was built with.
pub struct RuleClassifier {
    name: String,
    parses: HashMap<String, ParsedSentence>,
    lexicon: AgentLexicon,
    profile: RuleProfile,
}

impl RuleClassifier {
    pub fn new(parses: Vec<ParsedSentence>, lexicon: AgentLexicon, profile: RuleProfile) -> Self {
        Self {
            name: format!("dep-rules-{profile}"),
            parses: parses
                .into_iter()
                .map(|p| (normalize_sentence(&p.text), p))
                .collect(),
            lexicon,
            profile,
        }
    }
}

impl Classifier for RuleClassifier {
    fn name(&self) -> &str {
        &self.name
    }

    fn classify_batch(&self, texts: &[String]) -> Result<Vec<f64>, ClassifierError> {
        texts
            .iter()
            .map(|t| {
                self.parses
                    .get(&normalize_sentence(t))
                    .map(|p| classify_rule(p, &self.lexicon, self.profile).score)
                    .ok_or_else(|| ClassifierError::MissingPrediction(t.clone()))
            })
            .collect()
    }
}
