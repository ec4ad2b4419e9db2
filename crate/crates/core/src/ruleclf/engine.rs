use std::collections::VecDeque;

use super::{
    ClassificationOutcome, FailureReason, Label, Rationale, RejectedCandidate, RuleProfile, Voice,
};
use crate::parse::{is_agent_noun, AgentLexicon, ParsedSentence, Relation, Upos};

const DEONTIC_LEMMAS: [&str; 2] = ["shall", "must"];

fn is_deontic(lemma: &str) -> bool {
    let l = lemma.to_lowercase();
    DEONTIC_LEMMAS.contains(&l.as_str())
}

/// A lexical verb governed by `shall` or `must`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeonticVerb {
    pub verb_index: usize,
    pub aux_index: usize,
}

/// Every `VERB` with a deontic auxiliary, ordered by verb index.
///
/// The auxiliary is either an `aux`/passive-aux dependent of the verb or,
/// for parses that hang the verb under the modal, the verb's head. Verbs
/// conjoined to a deontic verb inherit its auxiliary.
pub fn find_deontic_verbs(sentence: &ParsedSentence) -> Vec<DeonticVerb> {
    let mut aux_of: Vec<Option<usize>> = vec![None; sentence.len() + 1];
    for verb in sentence.tokens.iter().filter(|t| t.upos == Upos::Verb) {
        let dependent_aux = sentence.dependents(verb.index).find(|d| {
            matches!(d.deprel, Relation::AuxDep | Relation::PassiveAux) && is_deontic(&d.lemma)
        });
        let head_aux = (verb.head != 0)
            .then(|| sentence.token(verb.head))
            .filter(|h| matches!(h.upos, Upos::Aux | Upos::Verb) && is_deontic(&h.lemma));
        aux_of[verb.index] = dependent_aux.or(head_aux).map(|t| t.index);
    }

    // Conjunct inheritance, breadth-first from the directly marked verbs.
    let mut queue: VecDeque<usize> = (1..=sentence.len()).filter(|&i| aux_of[i].is_some()).collect();
    while let Some(v) = queue.pop_front() {
        let aux = aux_of[v];
        for c in sentence.dependents(v) {
            if c.deprel == Relation::Conj && c.upos == Upos::Verb && aux_of[c.index].is_none() {
                aux_of[c.index] = aux;
                queue.push_back(c.index);
            }
        }
    }

    (1..=sentence.len())
        .filter_map(|i| {
            aux_of[i].map(|aux_index| DeonticVerb {
                verb_index: i,
                aux_index,
            })
        })
        .collect()
}

/// Passive iff the verb has a passive auxiliary or passive subject.
pub fn detect_voice(verb_index: usize, sentence: &ParsedSentence) -> Voice {
    let passive = sentence
        .dependents(verb_index)
        .any(|d| matches!(d.deprel, Relation::PassiveAux | Relation::PassiveSubj));
    if passive {
        Voice::Passive
    } else {
        Voice::Active
    }
}

/// Surface phrase of a nominal: the noun with the contiguous run of its
/// compound, flat and adjectival modifiers.
pub fn noun_phrase(sentence: &ParsedSentence, index: usize) -> String {
    let modifies = |i: usize| {
        let t = sentence.token(i);
        t.head == index
            && (matches!(t.deprel, Relation::Compound | Relation::Flat)
                || t.raw_deprel == "amod")
    };
    let mut lo = index;
    while lo > 1 && modifies(lo - 1) {
        lo -= 1;
    }
    let mut hi = index;
    while hi < sentence.len() && modifies(hi + 1) {
        hi += 1;
    }
    (lo..=hi)
        .map(|i| sentence.token(i).form.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeMatch {
    pub token_index: usize,
    pub phrase: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSearch {
    pub matched: Option<AttributeMatch>,
    pub failure: Option<FailureReason>,
    /// First nominal examined, when nothing matched.
    pub nearest_nominal: Option<usize>,
}

/// Whether `index` is the `by`-agent of a passive clause: a UD
/// `obl:agent`, the object of a `by` preposition, or a conjunct of either.
fn is_by_agent(sentence: &ParsedSentence, index: usize) -> bool {
    let t = sentence.token(index);
    match &t.deprel {
        Relation::Agent => true,
        Relation::PrepObj => {
            let head_is_by = t.head != 0 && sentence.token(t.head).lemma.eq_ignore_ascii_case("by");
            let case_by = sentence
                .dependents(index)
                .any(|d| d.deprel == Relation::Case && d.lemma.eq_ignore_ascii_case("by"));
            head_is_by || case_by
        }
        Relation::Conj if t.head != 0 => is_by_agent(sentence, t.head),
        _ => false,
    }
}

/// Nodes on the requested side of the verb in breadth-first order: tree
/// distance ascending, then token index. A node is on the backward side
/// when the first step of its path from the verb goes to an earlier token.
fn side_nodes(sentence: &ParsedSentence, verb: usize, backward: bool) -> Vec<usize> {
    let n = sentence.len();
    let mut dist = vec![usize::MAX; n + 1];
    let mut first = vec![0usize; n + 1];
    dist[verb] = 0;
    let mut queue = VecDeque::from([verb]);
    while let Some(u) = queue.pop_front() {
        for v in sentence.neighbours(u) {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                first[v] = if u == verb { v } else { first[u] };
                queue.push_back(v);
            }
        }
    }
    let mut nodes: Vec<usize> = (1..=n)
        .filter(|&i| i != verb && dist[i] != usize::MAX)
        .filter(|&i| (first[i] < verb) == backward)
        .collect();
    nodes.sort_by_key(|&i| (dist[i], i));
    nodes
}

/// Searches for the attribute (regulated agent) of a deontic verb.
///
/// Active clauses search backward paths, passive clauses forward ones. The
/// first nominal that is an agent noun wins. Under
/// [`RuleProfile::Refined`], passive clauses only consider `by`-agents.
pub fn find_attribute(
    verb_index: usize,
    voice: Voice,
    sentence: &ParsedSentence,
    lexicon: &AgentLexicon,
    profile: RuleProfile,
) -> AttributeSearch {
    let backward = voice == Voice::Active;
    let restrict_to_agent = voice == Voice::Passive && profile == RuleProfile::Refined;
    let mut nearest_nominal = None;
    for i in side_nodes(sentence, verb_index, backward) {
        if !sentence.token(i).upos.is_nominal() {
            continue;
        }
        if restrict_to_agent && !is_by_agent(sentence, i) {
            continue;
        }
        nearest_nominal.get_or_insert(i);
        if is_agent_noun(i, sentence, lexicon).is_some() {
            return AttributeSearch {
                matched: Some(AttributeMatch {
                    token_index: i,
                    phrase: noun_phrase(sentence, i),
                }),
                failure: None,
                nearest_nominal: None,
            };
        }
    }
    let failure = match nearest_nominal {
        Some(i) if sentence.token(i).upos == Upos::Pron => FailureReason::PronounAttribute,
        Some(_) => FailureReason::UnknownAgentNoun,
        None => FailureReason::NoAttributeFound,
    };
    AttributeSearch {
        matched: None,
        failure: Some(failure),
        nearest_nominal,
    }
}

/// Applies the dependency rules to one sentence.
///
/// The first deontic verb (by index) with an attribute makes the sentence
/// regulatory. Otherwise the rationale reports the verb whose search got
/// furthest, earliest verb first on ties.
pub fn classify_rule(
    sentence: &ParsedSentence,
    lexicon: &AgentLexicon,
    profile: RuleProfile,
) -> ClassificationOutcome {
    let mut best: Option<Rationale> = None;
    for dv in find_deontic_verbs(sentence) {
        let voice = detect_voice(dv.verb_index, sentence);
        let search = find_attribute(dv.verb_index, voice, sentence, lexicon, profile);
        let mut rationale = Rationale {
            deontic_verb_index: Some(dv.verb_index),
            deontic_aux_lemma: Some(sentence.token(dv.aux_index).lemma.to_lowercase()),
            voice: Some(voice),
            ..Rationale::default()
        };
        if let Some(m) = search.matched {
            rationale.attribute_token_index = Some(m.token_index);
            rationale.attribute_phrase = Some(m.phrase);
            return ClassificationOutcome {
                label: Label::Regulatory,
                score: 1.0,
                rationale,
            };
        }
        rationale.failure_reason = search.failure;
        rationale.rejected_candidate = search.nearest_nominal.map(|i| {
            let t = sentence.token(i);
            RejectedCandidate {
                token_index: i,
                form: t.form.clone(),
                upos: t.upos.to_string(),
            }
        });
        let progress = |r: &Rationale| r.failure_reason.map_or(0, FailureReason::progress);
        if best.as_ref().is_none_or(|b| progress(&rationale) > progress(b)) {
            best = Some(rationale);
        }
    }
    ClassificationOutcome {
        label: Label::NonRegulatory,
        score: 0.0,
        rationale: best.unwrap_or_else(|| Rationale {
            failure_reason: Some(FailureReason::NoDeonticVerb),
            ..Rationale::default()
        }),
    }
}
