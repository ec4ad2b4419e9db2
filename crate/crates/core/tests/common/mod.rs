#![allow(dead_code)]

use std::path::PathBuf;

use lexrule::parse::{read_conllu_str, DeprelScheme};
use lexrule::ruleclf::{Classifier, ClassifierError};
use lexrule::ParsedSentence;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

pub fn load_conllu(name: &str) -> Vec<ParsedSentence> {
    let text = std::fs::read_to_string(fixture(name)).unwrap();
    read_conllu_str(&text, DeprelScheme::UdV2).unwrap()
}

pub fn all_fixture_parses() -> Vec<ParsedSentence> {
    ["reference_examples.conllu", "extra_examples.conllu", "ud_examples.conllu"]
        .iter()
        .flat_map(|f| load_conllu(f))
        .collect()
}

pub fn by_text<'a>(parses: &'a [ParsedSentence], prefix: &str) -> &'a ParsedSentence {
    parses
        .iter()
        .find(|p| p.text.starts_with(prefix))
        .unwrap_or_else(|| panic!("no fixture sentence starting with {prefix:?}"))
}

pub fn stub_bin() -> String {
    env!("CARGO_BIN_EXE_lexrule-stub").to_owned()
}

pub fn stub_cmd(args: &[&str]) -> Vec<String> {
    std::iter::once(stub_bin())
        .chain(args.iter().map(|s| s.to_string()))
        .collect()
}

/// In-process classifier defined by a closure over the text.
pub struct FnClassifier<F> {
    pub name: String,
    pub f: F,
}

impl<F: Fn(&str) -> f64 + Send + Sync> Classifier for FnClassifier<F> {
    fn name(&self) -> &str {
        &self.name
    }

    fn classify_batch(&self, texts: &[String]) -> Result<Vec<f64>, ClassifierError> {
        Ok(texts.iter().map(|t| (self.f)(t)).collect())
    }
}

pub fn fn_classifier<F: Fn(&str) -> f64 + Send + Sync>(f: F) -> FnClassifier<F> {
    FnClassifier {
        name: "fn".into(),
        f,
    }
}

pub fn has_word(text: &str, word: &str) -> bool {
    text.split_whitespace().any(|w| w == word)
}
