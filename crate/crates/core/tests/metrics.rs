mod common;

use std::collections::BTreeMap;

use common::fixture;
use lexrule::corpus::io::read_labeled_csv;
use lexrule::metrics::{
    align_predictions, compare_models, confusion, evaluate, krippendorff_alpha, MetricsError,
};
use lexrule::ruleclf::PredictionTable;
use lexrule::Label;
use proptest::prelude::*;

fn labels(bits: &[u8]) -> Vec<Label> {
    bits.iter().map(|&b| Label::from_bit(b).unwrap()).collect()
}

/// Alpha by enumerating value pairs: observed disagreement over ordered
/// pairs within an item, expected disagreement over all ordered pairs of
/// distinct values in the pool.
fn alpha_by_enumeration(a: &[u8], b: &[u8]) -> f64 {
    let pool: Vec<u8> = a.iter().chain(b).copied().collect();
    let within = a.iter().zip(b).filter(|(x, y)| x != y).count() as f64 * 2.0;
    let observed = within / pool.len() as f64;
    let mut across = 0usize;
    for (i, x) in pool.iter().enumerate() {
        for (j, y) in pool.iter().enumerate() {
            if i != j && x != y {
                across += 1;
            }
        }
    }
    let expected = across as f64 / (pool.len() * (pool.len() - 1)) as f64;
    1.0 - observed / expected
}

const ALPHA_ORACLE: f64 = 16.0 / 21.0;

#[test]
fn alpha_hand_computed_example() {
    let a = [1, 0, 1, 0, 1, 1, 0, 0];
    let b = [1, 0, 1, 0, 1, 0, 0, 0];
    assert!((alpha_by_enumeration(&a, &b) - ALPHA_ORACLE).abs() < 1e-12);
    let got = krippendorff_alpha(&labels(&a), &labels(&b)).unwrap();
    assert!((got - ALPHA_ORACLE).abs() < 1e-12, "{got}");
}

#[test]
fn alpha_error_cases() {
    assert_eq!(
        krippendorff_alpha(&labels(&[1, 0]), &labels(&[1])),
        Err(MetricsError::LengthMismatch { left: 2, right: 1 })
    );
    assert!(krippendorff_alpha(&[], &[]).is_err());
    assert_eq!(
        krippendorff_alpha(&labels(&[1, 1, 1]), &labels(&[1, 1, 1])),
        Err(MetricsError::DegenerateRatings)
    );
}

#[test]
fn metrics_from_fixture_predictions() {
    let gold = read_labeled_csv(&fixture("gold.csv")).unwrap();
    let table = PredictionTable::load(&fixture("fallback_scores.csv")).unwrap();
    let aligned = align_predictions(&gold, &[table]).unwrap();
    let pred = &aligned.preds["fallback_scores"];
    let cm = confusion(&aligned.gold, pred).unwrap();
    // Gold has 12 regulatory rows. The table scores every one of them above
    // 0.5 and also scores three non-regulatory rows above 0.5.
    assert_eq!((cm.tp, cm.fp, cm.tn, cm.fn_), (12, 3, 4, 0));
    let report = evaluate(&aligned.gold, pred).unwrap();
    assert!((report.accuracy - 16.0 / 19.0).abs() < 1e-12);
    assert_eq!(report.regulatory.recall, Some(1.0));
    assert!((report.regulatory.precision.unwrap() - 0.8).abs() < 1e-12);
    assert!((report.non_regulatory.precision.unwrap() - 1.0).abs() < 1e-12);
    assert!((report.non_regulatory.recall.unwrap() - 4.0 / 7.0).abs() < 1e-12);
}

#[test]
fn join_requires_every_gold_sentence() {
    let gold = read_labeled_csv(&fixture("gold.csv")).unwrap();
    let partial = PredictionTable::from_pairs("partial", [("Citizens must separate their recyclables.", 1.0)]).unwrap();
    assert!(matches!(align_predictions(&gold, &[partial]), Err(MetricsError::Join(_))));
}

#[test]
fn comparison_lists_disagreements() {
    let gold = labels(&[1, 0, 1, 0]);
    let mut preds = BTreeMap::new();
    preds.insert("a".to_owned(), labels(&[1, 0, 1, 1]));
    preds.insert("b".to_owned(), labels(&[1, 1, 1, 1]));
    let sentences: Vec<String> = ["s0", "s1", "s2", "s3"].iter().map(|s| s.to_string()).collect();
    let report = compare_models(&gold, &preds, Some(&sentences)).unwrap();
    assert_eq!(report.models.len(), 2);
    let pair = &report.pairwise[0];
    assert_eq!((pair.model_a.as_str(), pair.model_b.as_str()), ("a", "b"));
    assert_eq!(pair.disagreements.len(), 1);
    assert_eq!(pair.disagreements[0].sentence.as_deref(), Some("s1"));
    // b never predicts non-regulatory, so that precision is undefined.
    assert!(report.models[1].metrics.non_regulatory.precision.is_none());
    assert!(report.models[1].metrics.alpha_vs_gold.is_some());
    let table = report.to_table();
    assert!(table.contains("undef"), "{table}");
}

fn ratings(n: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
    (prop::collection::vec(0u8..=1, n), prop::collection::vec(0u8..=1, n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn alpha_properties((a, b) in (2usize..40).prop_flat_map(ratings)) {
        let (la, lb) = (labels(&a), labels(&b));
        let pooled_one = a.iter().chain(&b).all(|&x| x == a[0]);
        match krippendorff_alpha(&la, &lb) {
            Err(MetricsError::DegenerateRatings) => prop_assert!(pooled_one),
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
            Ok(alpha) => {
                prop_assert!(!pooled_one);
                prop_assert!(alpha <= 1.0 + 1e-12);
                let swapped = krippendorff_alpha(&lb, &la).unwrap();
                prop_assert_eq!(alpha.to_bits(), swapped.to_bits());
                prop_assert!((alpha - alpha_by_enumeration(&a, &b)).abs() < 1e-12);
                if a.iter().any(|&x| x != a[0]) {
                    prop_assert!((krippendorff_alpha(&la, &la).unwrap() - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn disagreement_count_is_hamming_distance((g, (a, b)) in (2usize..30).prop_flat_map(|n| (prop::collection::vec(0u8..=1, n), ratings(n)))) {
        let mut preds = BTreeMap::new();
        preds.insert("a".to_owned(), labels(&a));
        preds.insert("b".to_owned(), labels(&b));
        let report = compare_models(&labels(&g), &preds, None).unwrap();
        let hamming = a.iter().zip(&b).filter(|(x, y)| x != y).count();
        prop_assert_eq!(report.pairwise[0].disagreements.len(), hamming);
        let cm = confusion(&labels(&g), &labels(&a)).unwrap();
        prop_assert_eq!(cm.total(), g.len());
    }
}
