//! Dependency-parsed sentences and agent-noun lookup.

mod conllu;
mod deprel;
mod lexicon;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

pub use conllu::{read_conllu, read_conllu_str, write_conllu};
pub use deprel::{map_label, DeprelScheme, Relation};
pub use lexicon::{is_agent_noun, load_lexicon, AgentLexicon, AgentMatch, AgentVia};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed CoNLL-U at line {line}: {message}")]
    MalformedConllu { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Universal part-of-speech tags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Upos {
    Adj,
    Adp,
    Adv,
    Aux,
    Cconj,
    Det,
    Intj,
    Noun,
    Num,
    Part,
    Pron,
    Propn,
    Punct,
    Sconj,
    Sym,
    Verb,
    X,
}

impl Upos {
    pub fn as_str(self) -> &'static str {
        match self {
            Upos::Adj => "ADJ",
            Upos::Adp => "ADP",
            Upos::Adv => "ADV",
            Upos::Aux => "AUX",
            Upos::Cconj => "CCONJ",
            Upos::Det => "DET",
            Upos::Intj => "INTJ",
            Upos::Noun => "NOUN",
            Upos::Num => "NUM",
            Upos::Part => "PART",
            Upos::Pron => "PRON",
            Upos::Propn => "PROPN",
            Upos::Punct => "PUNCT",
            Upos::Sconj => "SCONJ",
            Upos::Sym => "SYM",
            Upos::Verb => "VERB",
            Upos::X => "X",
        }
    }

    /// Nouns, proper nouns and pronouns: the tags an attribute can carry.
    pub fn is_nominal(self) -> bool {
        matches!(self, Upos::Noun | Upos::Propn | Upos::Pron)
    }
}

impl FromStr for Upos {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "ADJ" => Upos::Adj,
            "ADP" => Upos::Adp,
            "ADV" => Upos::Adv,
            "AUX" => Upos::Aux,
            "CCONJ" | "CONJ" => Upos::Cconj,
            "DET" => Upos::Det,
            "INTJ" => Upos::Intj,
            "NOUN" => Upos::Noun,
            "NUM" => Upos::Num,
            "PART" => Upos::Part,
            "PRON" => Upos::Pron,
            "PROPN" => Upos::Propn,
            "PUNCT" => Upos::Punct,
            "SCONJ" => Upos::Sconj,
            "SYM" => Upos::Sym,
            "VERB" => Upos::Verb,
            "X" | "_" => Upos::X,
            other => return Err(format!("unknown UPOS tag {other:?}")),
        })
    }
}

impl fmt::Display for Upos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    /// 1-based position in the sentence.
    pub index: usize,
    pub form: String,
    pub lemma: String,
    pub upos: Upos,
    pub xpos: String,
    pub feats: String,
    /// Index of the head token; 0 for the root.
    pub head: usize,
    pub deprel: Relation,
    pub raw_deprel: String,
    pub deps: String,
    pub misc: String,
    /// Character (not byte) offset of the form in the sentence text.
    pub start_char: usize,
}

impl Token {
    pub fn lemma_lower(&self) -> String {
        self.lemma.to_lowercase()
    }

    pub fn space_after(&self) -> bool {
        !self.misc.split('|').any(|f| f == "SpaceAfter=No")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParsedSentence {
    pub text: String,
    pub tokens: Vec<Token>,
}

impl ParsedSentence {
    /// Token by 1-based index.
    pub fn token(&self, index: usize) -> &Token {
        &self.tokens[index - 1]
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Direct dependents of `index`, in sentence order.
    pub fn dependents(&self, index: usize) -> impl Iterator<Item = &Token> {
        self.tokens.iter().filter(move |t| t.head == index)
    }

    /// Tree neighbours of `index` (head and dependents), in sentence order.
    pub fn neighbours(&self, index: usize) -> Vec<usize> {
        let head = self.token(index).head;
        let mut out: Vec<usize> = self
            .tokens
            .iter()
            .filter(|t| t.head == index || (head != 0 && t.index == head))
            .map(|t| t.index)
            .collect();
        out.sort_unstable();
        out
    }

    /// Checks that head links form one tree over all tokens.
    pub fn validate_tree(&self) -> Result<(), String> {
        let n = self.tokens.len();
        let mut roots = 0;
        for (i, t) in self.tokens.iter().enumerate() {
            if t.index != i + 1 {
                return Err(format!("token {} out of sequence", t.index));
            }
            if t.head == t.index {
                return Err(format!("token {} is its own head", t.index));
            }
            if t.head > n {
                return Err(format!("token {} has head {} beyond sentence", t.index, t.head));
            }
            if t.head == 0 {
                roots += 1;
            }
        }
        if n > 0 && roots != 1 {
            return Err(format!("expected exactly one root, found {roots}"));
        }
        for t in &self.tokens {
            let mut cur = t.head;
            let mut steps = 0;
            while cur != 0 {
                steps += 1;
                if steps > n {
                    return Err(format!("cycle through token {}", t.index));
                }
                cur = self.token(cur).head;
            }
        }
        Ok(())
    }
}
