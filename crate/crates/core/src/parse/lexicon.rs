use std::collections::BTreeSet;
use std::path::Path;

use super::{ParseError, ParsedSentence, Relation, Upos};

const BUILTIN_LEXICON: &str = include_str!("../../data/agents.txt");

/// Lower-cased, single-spaced lemma phrases denoting agents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AgentLexicon {
    entries: BTreeSet<String>,
}

fn normalize_phrase(phrase: &str) -> String {
    phrase
        .split_whitespace()
        .map(str::to_lowercase)
        .collect::<Vec<_>>()
        .join(" ")
}

impl AgentLexicon {
    pub fn from_entries<I, S>(entries: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        Self {
            entries: entries
                .into_iter()
                .map(|e| normalize_phrase(e.as_ref()))
                .filter(|e| !e.is_empty())
                .collect(),
        }
    }

    pub fn parse(contents: &str) -> Self {
        Self::from_entries(crate::text::read_phrase_list(contents))
    }

    /// The snapshot shipped in `data/agents.txt`.
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_LEXICON)
    }

    pub fn contains(&self, phrase: &str) -> bool {
        self.entries.contains(&normalize_phrase(phrase))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(String::as_str)
    }

    pub fn without(&self, phrase: &str) -> Self {
        let mut entries = self.entries.clone();
        entries.remove(&normalize_phrase(phrase));
        Self { entries }
    }
}

/// Loads a lexicon file and returns it with its entry count. An empty
/// lexicon is logged as a warning, not an error.
pub fn load_lexicon(path: &Path) -> Result<(AgentLexicon, usize), ParseError> {
    let contents = std::fs::read_to_string(path).map_err(|source| ParseError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let lexicon = AgentLexicon::parse(&contents);
    if lexicon.is_empty() {
        log::warn!("agent lexicon {} is empty", path.display());
    }
    let n = lexicon.len();
    Ok((lexicon, n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgentVia {
    ProperNoun,
    Lemma,
    CompoundPhrase,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgentMatch {
    pub via: AgentVia,
    /// Lexicon phrase that matched, or the proper noun's lemma.
    pub phrase: String,
}

/// Token indices of `index` plus the contiguous run of its compound and
/// flat dependents around it.
fn compound_span(sentence: &ParsedSentence, index: usize) -> (usize, usize) {
    let joins = |i: usize| {
        let t = sentence.token(i);
        t.head == index && matches!(t.deprel, Relation::Compound | Relation::Flat)
    };
    let mut lo = index;
    while lo > 1 && joins(lo - 1) {
        lo -= 1;
    }
    let mut hi = index;
    while hi < sentence.len() && joins(hi + 1) {
        hi += 1;
    }
    (lo, hi)
}

/// Agenthood of the nominal at `token_index`.
///
/// Pronouns are never agents. Proper nouns always are. Common nouns are
/// agents when their lemma, or the lemma phrase of the noun with its
/// compound/flat dependents, is in the lexicon. Non-nominal tokens return
/// `None`.
pub fn is_agent_noun(
    token_index: usize,
    sentence: &ParsedSentence,
    lexicon: &AgentLexicon,
) -> Option<AgentMatch> {
    let token = sentence.token(token_index);
    match token.upos {
        Upos::Pron => None,
        Upos::Propn => Some(AgentMatch {
            via: AgentVia::ProperNoun,
            phrase: token.lemma_lower(),
        }),
        Upos::Noun => {
            let lemma = token.lemma_lower();
            if lexicon.contains(&lemma) {
                return Some(AgentMatch {
                    via: AgentVia::Lemma,
                    phrase: lemma,
                });
            }
            let (lo, hi) = compound_span(sentence, token_index);
            if lo == hi {
                return None;
            }
            let phrase = (lo..=hi)
                .map(|i| sentence.token(i).lemma_lower())
                .collect::<Vec<_>>()
                .join(" ");
            lexicon.contains(&phrase).then_some(AgentMatch {
                via: AgentVia::CompoundPhrase,
                phrase,
            })
        }
        _ => None,
    }
}
