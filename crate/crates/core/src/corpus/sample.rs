use std::collections::{BTreeMap, HashMap};

use super::CandidateSentence;
use crate::rng::PortableRng;

/// `(adoption_year, policy_area)`; orders year ascending, then area.
pub type StratumKey = (i32, String);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stratum {
    pub year: i32,
    pub policy_area: String,
    pub sentences: Vec<CandidateSentence>,
}

/// Groups candidates by the (year, policy area) of their document, in key
/// order. Members are sorted by `(doc_id, index_in_doc)` so that grouping
/// does not depend on input order. Candidates whose document has no
/// metadata are left out.
pub fn strata(
    candidates: &[CandidateSentence],
    metadata: &HashMap<String, (i32, String)>,
) -> Vec<Stratum> {
    let mut groups: BTreeMap<StratumKey, Vec<CandidateSentence>> = BTreeMap::new();
    let mut orphans = 0usize;
    for c in candidates {
        match metadata.get(&c.doc_id) {
            Some((year, area)) => groups.entry((*year, area.clone())).or_default().push(c.clone()),
            None => orphans += 1,
        }
    }
    if orphans > 0 {
        log::warn!("{orphans} candidate sentences have no document metadata and were skipped");
    }
    groups
        .into_iter()
        .map(|((year, policy_area), mut sentences)| {
            sentences.sort_by(|a, b| {
                a.doc_id
                    .cmp(&b.doc_id)
                    .then(a.index_in_doc.cmp(&b.index_in_doc))
            });
            Stratum {
                year,
                policy_area,
                sentences,
            }
        })
        .collect()
}

/// Equal-allocation stratified sample.
///
/// Strata smaller than `per_stratum` are dropped. From every other stratum,
/// visited in key order, `per_stratum` members are drawn without
/// replacement by partial Fisher-Yates on one [`PortableRng`] seeded with
/// `seed`. Output is stratum order, then draw order.
pub fn stratify_sample(
    candidates: &[CandidateSentence],
    metadata: &HashMap<String, (i32, String)>,
    per_stratum: usize,
    seed: u64,
) -> Vec<CandidateSentence> {
    assert!(per_stratum >= 1, "per_stratum must be at least 1");
    let mut rng = PortableRng::seed_from_u64(seed);
    let mut out = Vec::new();
    for stratum in strata(candidates, metadata) {
        if stratum.sentences.len() < per_stratum {
            log::info!(
                "stratum ({}, {}) has {} sentences, below {per_stratum}; excluded",
                stratum.year,
                stratum.policy_area,
                stratum.sentences.len()
            );
            continue;
        }
        for i in rng.sample_indices(stratum.sentences.len(), per_stratum) {
            out.push(stratum.sentences[i].clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cand(doc: &str, i: usize) -> CandidateSentence {
        CandidateSentence {
            doc_id: doc.into(),
            index_in_doc: i,
            text: format!("{doc} sentence {i} shall apply."),
            deontic_tokens: vec!["shall".into()],
        }
    }

    fn meta(pairs: &[(&str, i32, &str)]) -> HashMap<String, (i32, String)> {
        pairs
            .iter()
            .map(|(d, y, a)| (d.to_string(), (*y, a.to_string())))
            .collect()
    }

    #[test]
    fn forced_selection_returns_all() {
        let cands: Vec<_> = (0..7).map(|i| cand("A", i)).collect();
        let mut got = stratify_sample(&cands, &meta(&[("A", 2000, "01")]), 7, 1);
        got.sort_by_key(|c| c.index_in_doc);
        assert_eq!(got, cands);
    }

    #[test]
    fn undersized_strata_excluded() {
        let mut cands: Vec<_> = (0..6).map(|i| cand("A", i)).collect();
        cands.extend((0..9).map(|i| cand("B", i)));
        let got = stratify_sample(&cands, &meta(&[("A", 2000, "01"), ("B", 2001, "01")]), 7, 9);
        assert_eq!(got.len(), 7);
        assert!(got.iter().all(|c| c.doc_id == "B"));
    }

    #[test]
    fn output_is_stratum_sorted() {
        let mut cands = Vec::new();
        for d in ["X", "Y", "Z"] {
            cands.extend((0..3).map(|i| cand(d, i)));
        }
        let m = meta(&[("X", 2005, "02"), ("Y", 1999, "15"), ("Z", 2005, "01")]);
        let got = stratify_sample(&cands, &m, 2, 4);
        let docs: Vec<_> = got.iter().map(|c| c.doc_id.as_str()).collect();
        assert_eq!(docs, vec!["Y", "Y", "Z", "Z", "X", "X"]);
    }

    #[test]
    fn input_order_does_not_matter() {
        let cands: Vec<_> = (0..20).map(|i| cand("A", i)).collect();
        let mut rev = cands.clone();
        rev.reverse();
        let m = meta(&[("A", 2000, "01")]);
        assert_eq!(stratify_sample(&cands, &m, 5, 3), stratify_sample(&rev, &m, 5, 3));
    }

    #[test]
    fn missing_metadata_skipped() {
        let cands: Vec<_> = (0..3).map(|i| cand("A", i)).collect();
        assert!(stratify_sample(&cands, &HashMap::new(), 1, 0).is_empty());
    }
}
