use serde::{Deserialize, Serialize};

/// A token and its character offset in the sentence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenSpan {
    pub text: String,
    pub start_char: usize,
}

fn is_punct(c: char) -> bool {
    c.is_ascii_punctuation() || matches!(c, '“' | '”' | '‘' | '’' | '«' | '»' | '…' | '–' | '—')
}

/// Whitespace tokens with their leading and trailing punctuation runs split
/// off as separate tokens. A token made only of punctuation stays whole.
pub fn tokenize(sentence: &str) -> Vec<TokenSpan> {
    let mut out = Vec::new();
    let chars: Vec<char> = sentence.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && !chars[i].is_whitespace() {
            i += 1;
        }
        let word = &chars[start..i];
        let lead = word.iter().take_while(|c| is_punct(**c)).count();
        if lead == word.len() {
            out.push(span(word, start));
            continue;
        }
        let trail = word.iter().rev().take_while(|c| is_punct(**c)).count();
        if lead > 0 {
            out.push(span(&word[..lead], start));
        }
        out.push(span(&word[lead..word.len() - trail], start + lead));
        if trail > 0 {
            out.push(span(&word[word.len() - trail..], start + word.len() - trail));
        }
    }
    out
}

fn span(chars: &[char], start_char: usize) -> TokenSpan {
    TokenSpan {
        text: chars.iter().collect(),
        start_char,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(s: &str) -> Vec<String> {
        tokenize(s).into_iter().map(|t| t.text).collect()
    }

    #[test]
    fn splits_punctuation() {
        assert_eq!(
            texts("Citizens must separate (their) recyclables."),
            vec!["Citizens", "must", "separate", "(", "their", ")", "recyclables", "."]
        );
    }

    #[test]
    fn keeps_inner_punctuation() {
        assert_eq!(texts("real-time No 1234/2007"), vec!["real-time", "No", "1234/2007"]);
    }

    #[test]
    fn offsets_are_char_based() {
        let toks = tokenize("Él «debe» ir");
        let chars: Vec<char> = "Él «debe» ir".chars().collect();
        for t in &toks {
            let got: String = chars[t.start_char..t.start_char + t.text.chars().count()].iter().collect();
            assert_eq!(got, t.text);
        }
        assert_eq!(toks[1].text, "«");
    }

    #[test]
    fn empty() {
        assert!(tokenize("  ").is_empty());
    }
}
