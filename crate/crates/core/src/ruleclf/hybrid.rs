use super::{classify_rule, Classifier, ClassificationOutcome, ClassifierError, FailureReason, Label, RuleProfile};
use crate::parse::{AgentLexicon, ParsedSentence};

/// When a failed rule decision is handed to the fallback classifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DelegationPolicy {
    /// Delegate pronoun and no-attribute failures, and unknown agent nouns
    /// that look like names (all caps, or capitalised mid-sentence). A
    /// lower-case common noun that fails the lexicon keeps the rule verdict.
    #[default]
    ProperNounLike,
    /// Delegate every attribute-stage failure.
    Always,
}

/// All-caps (at least two letters) or capitalised and not the first word.
pub fn is_proper_noun_like(sentence: &ParsedSentence, token_index: usize) -> bool {
    let form = &sentence.token(token_index).form;
    let letters: Vec<char> = form.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.len() >= 2 && letters.iter().all(|c| c.is_uppercase()) {
        return true;
    }
    let first_word = sentence
        .tokens
        .iter()
        .find(|t| t.form.chars().any(char::is_alphabetic))
        .map(|t| t.index);
    letters.first().is_some_and(|c| c.is_uppercase()) && first_word != Some(token_index)
}

fn should_delegate(outcome: &ClassificationOutcome, sentence: &ParsedSentence, policy: DelegationPolicy) -> bool {
    let Some(reason) = outcome.rationale.failure_reason else {
        return false;
    };
    match (reason, policy) {
        (FailureReason::NoDeonticVerb, _) => false,
        (_, DelegationPolicy::Always) => true,
        (FailureReason::UnknownAgentNoun, DelegationPolicy::ProperNounLike) => outcome
            .rationale
            .rejected_candidate
            .as_ref()
            .is_some_and(|c| is_proper_noun_like(sentence, c.token_index)),
        (FailureReason::PronounAttribute | FailureReason::NoAttributeFound, _) => true,
    }
}

/// Rules first; attribute-stage failures selected by `policy` are scored by
/// `fallback` in one batch.
pub fn classify_hybrid_batch(
    sentences: &[ParsedSentence],
    lexicon: &AgentLexicon,
    profile: RuleProfile,
    fallback: &dyn Classifier,
    policy: DelegationPolicy,
) -> Result<Vec<ClassificationOutcome>, ClassifierError> {
    let mut outcomes: Vec<ClassificationOutcome> = sentences
        .iter()
        .map(|s| classify_rule(s, lexicon, profile))
        .collect();
    let delegated: Vec<usize> = (0..sentences.len())
        .filter(|&i| should_delegate(&outcomes[i], &sentences[i], policy))
        .collect();
    if delegated.is_empty() {
        return Ok(outcomes);
    }
    let texts: Vec<String> = delegated.iter().map(|&i| sentences[i].text.clone()).collect();
    let scores = fallback.classify_batch(&texts)?;
    if scores.len() != texts.len() {
        return Err(ClassifierError::FallbackUnavailable(format!(
            "{} returned {} scores for {} texts",
            fallback.name(),
            scores.len(),
            texts.len()
        )));
    }
    for (&i, score) in delegated.iter().zip(scores) {
        let outcome = &mut outcomes[i];
        outcome.score = score;
        outcome.label = Label::from_score(score);
        outcome.rationale.delegated_to = Some(fallback.name().to_owned());
    }
    Ok(outcomes)
}

pub fn classify_hybrid(
    sentence: &ParsedSentence,
    lexicon: &AgentLexicon,
    profile: RuleProfile,
    fallback: &dyn Classifier,
    policy: DelegationPolicy,
) -> Result<ClassificationOutcome, ClassifierError> {
    classify_hybrid_batch(std::slice::from_ref(sentence), lexicon, profile, fallback, policy)
        .map(|mut v| v.remove(0))
}
