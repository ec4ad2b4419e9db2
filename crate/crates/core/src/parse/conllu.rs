//! CoNLL-U reader and writer.
//!
//! Multiword-token ranges (`3-4`) and empty nodes (`5.1`) are skipped. A
//! `# text = ...` comment supplies the sentence text; `# scheme = ...`
//! switches the dependency label scheme for the rest of the stream.

use std::fmt::Write as _;
use std::io::BufRead;

use super::{map_label, DeprelScheme, ParseError, ParsedSentence, Token, Upos};

#[derive(Default)]
struct Block {
    text: Option<String>,
    tokens: Vec<Token>,
    first_line: usize,
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::MalformedConllu {
        line,
        message: message.into(),
    }
}

fn parse_token_line(line_no: usize, line: &str, scheme: DeprelScheme) -> Result<Option<Token>, ParseError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != 10 {
        return Err(malformed(line_no, format!("expected 10 columns, found {}", cols.len())));
    }
    if cols[0].contains('-') || cols[0].contains('.') {
        return Ok(None);
    }
    let index: usize = cols[0]
        .parse()
        .map_err(|_| malformed(line_no, format!("bad token id {:?}", cols[0])))?;
    let head: usize = cols[6]
        .parse()
        .map_err(|_| malformed(line_no, format!("bad head {:?}", cols[6])))?;
    let upos: Upos = cols[3].parse().map_err(|m: String| malformed(line_no, m))?;
    Ok(Some(Token {
        index,
        form: cols[1].to_owned(),
        lemma: cols[2].to_owned(),
        upos,
        xpos: cols[4].to_owned(),
        feats: cols[5].to_owned(),
        head,
        deprel: map_label(cols[7], scheme),
        raw_deprel: cols[7].to_owned(),
        deps: cols[8].to_owned(),
        misc: cols[9].to_owned(),
        start_char: 0,
    }))
}

/// Text rebuilt from forms, honouring `SpaceAfter=No`, with char offsets.
fn detokenize(tokens: &[Token]) -> (String, Vec<usize>) {
    let mut text = String::new();
    let mut offsets = Vec::with_capacity(tokens.len());
    let mut chars = 0;
    for (i, t) in tokens.iter().enumerate() {
        offsets.push(chars);
        text.push_str(&t.form);
        chars += t.form.chars().count();
        if i + 1 < tokens.len() && t.space_after() {
            text.push(' ');
            chars += 1;
        }
    }
    (text, offsets)
}

/// Char offsets of each form found left to right in `text`.
fn align(text: &str, tokens: &[Token]) -> Option<Vec<usize>> {
    let mut cursor = 0;
    let mut offsets = Vec::with_capacity(tokens.len());
    for t in tokens {
        if t.form.is_empty() {
            return None;
        }
        let found = cursor + text[cursor..].find(t.form.as_str())?;
        offsets.push(text[..found].chars().count());
        cursor = found + t.form.len();
    }
    Some(offsets)
}

fn finish_block(block: Block) -> Result<Option<ParsedSentence>, ParseError> {
    if block.tokens.is_empty() {
        return Ok(None);
    }
    let Block {
        text,
        mut tokens,
        first_line,
    } = block;
    let (text, offsets) = match text {
        Some(text) => match align(&text, &tokens) {
            Some(offsets) => (text, offsets),
            None => {
                let (_, offsets) = detokenize(&tokens);
                (text, offsets)
            }
        },
        None => detokenize(&tokens),
    };
    for (t, o) in tokens.iter_mut().zip(offsets) {
        t.start_char = o;
    }
    let sentence = ParsedSentence { text, tokens };
    sentence
        .validate_tree()
        .map_err(|m| malformed(first_line, m))?;
    Ok(Some(sentence))
}

/// Reads every sentence in a CoNLL-U stream. `scheme` applies until a
/// `# scheme = ...` comment overrides it.
pub fn read_conllu<R: BufRead>(reader: R, scheme: DeprelScheme) -> Result<Vec<ParsedSentence>, ParseError> {
    let mut scheme = scheme;
    let mut out = Vec::new();
    let mut block = Block::default();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|source| ParseError::Io {
            path: "<stream>".into(),
            source,
        })?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            out.extend(finish_block(std::mem::take(&mut block))?);
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                match key.trim() {
                    "text" => block.text = Some(value.trim().to_owned()),
                    "scheme" => {
                        scheme = value.parse().map_err(|m: String| malformed(line_no, m))?;
                    }
                    _ => {}
                }
            }
            continue;
        }
        if block.tokens.is_empty() {
            block.first_line = line_no;
        }
        if let Some(token) = parse_token_line(line_no, line, scheme)? {
            if token.index != block.tokens.len() + 1 {
                return Err(malformed(line_no, format!("token id {} out of sequence", token.index)));
            }
            block.tokens.push(token);
        }
    }
    out.extend(finish_block(block)?);
    Ok(out)
}

pub fn read_conllu_str(input: &str, scheme: DeprelScheme) -> Result<Vec<ParsedSentence>, ParseError> {
    read_conllu(input.as_bytes(), scheme)
}

/// Serializes sentences with their raw labels.
pub fn write_conllu(sentences: &[ParsedSentence]) -> String {
    let mut out = String::new();
    for s in sentences {
        let _ = writeln!(out, "# text = {}", s.text);
        for t in &s.tokens {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                t.index, t.form, t.lemma, t.upos, t.xpos, t.feats, t.head, t.raw_deprel, t.deps, t.misc
            );
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::Relation;

    const CITIZENS: &str = "# text = Citizens must separate recyclables.
1\tCitizens\tcitizen\tNOUN\tNNS\t_\t3\tnsubj\t_\t_
2\tmust\tmust\tAUX\tMD\t_\t3\taux\t_\t_
3\tseparate\tseparate\tVERB\tVB\t_\t0\troot\t_\t_
4\trecyclables\trecyclable\tNOUN\tNNS\t_\t3\tobj\t_\tSpaceAfter=No
5\t.\t.\tPUNCT\t.\t_\t3\tpunct\t_\t_

";

    #[test]
    fn reads_one_sentence() {
        let got = read_conllu_str(CITIZENS, DeprelScheme::UdV2).unwrap();
        assert_eq!(got.len(), 1);
        let s = &got[0];
        assert_eq!(s.len(), 5);
        assert_eq!(s.token(1).deprel, Relation::Subj);
        assert_eq!(s.token(2).deprel, Relation::AuxDep);
        let offsets: Vec<_> = s.tokens.iter().map(|t| t.start_char).collect();
        assert_eq!(offsets, vec![0, 9, 14, 23, 34]);
    }

    #[test]
    fn empty_stream() {
        assert!(read_conllu_str("", DeprelScheme::UdV2).unwrap().is_empty());
    }

    #[test]
    fn nine_columns_rejected() {
        let bad = "1\tA\ta\tNOUN\t_\t_\t0\troot\t_\n";
        match read_conllu_str(bad, DeprelScheme::UdV2) {
            Err(ParseError::MalformedConllu { line, .. }) => assert_eq!(line, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn two_roots_rejected() {
        let bad = "1\tA\ta\tNOUN\t_\t_\t0\troot\t_\t_\n2\tB\tb\tNOUN\t_\t_\t0\troot\t_\t_\n";
        assert!(read_conllu_str(bad, DeprelScheme::UdV2).is_err());
    }

    #[test]
    fn cycle_rejected() {
        let bad = "1\tA\ta\tNOUN\t_\t_\t2\tx\t_\t_\n2\tB\tb\tNOUN\t_\t_\t1\tx\t_\t_\n3\tC\tc\tVERB\t_\t_\t0\troot\t_\t_\n";
        assert!(read_conllu_str(bad, DeprelScheme::UdV2).is_err());
    }

    #[test]
    fn multiword_and_empty_nodes_skipped() {
        let s = "1-2\tdon't\t_\t_\t_\t_\t_\t_\t_\t_\n1\tdo\tdo\tAUX\t_\t_\t3\taux\t_\tSpaceAfter=No\n2\tn't\tnot\tPART\t_\t_\t3\tadvmod\t_\t_\n2.1\tx\tx\tX\t_\t_\t_\t_\t_\t_\n3\tgo\tgo\tVERB\t_\t_\t0\troot\t_\t_\n";
        let got = read_conllu_str(s, DeprelScheme::UdV2).unwrap();
        assert_eq!(got[0].len(), 3);
        assert_eq!(got[0].text, "don't go");
        assert_eq!(got[0].token(3).start_char, 6);
    }

    #[test]
    fn scheme_comment_overrides() {
        let s = "# scheme = legacy_clear\n1\tIt\tit\tPRON\t_\t_\t2\tnsubjpass\t_\t_\n2\tgo\tgo\tVERB\t_\t_\t0\tROOT\t_\t_\n";
        let got = read_conllu_str(s, DeprelScheme::UdV2).unwrap();
        assert_eq!(got[0].token(1).deprel, Relation::PassiveSubj);
    }

    #[test]
    fn round_trip_keeps_structure() {
        let first = read_conllu_str(CITIZENS, DeprelScheme::UdV2).unwrap();
        let again = read_conllu_str(&write_conllu(&first), DeprelScheme::UdV2).unwrap();
        assert_eq!(first, again);
    }
}
