use std::collections::BTreeMap;

use super::MetricsError;
use crate::corpus::io::LabeledSentence;
use crate::ruleclf::PredictionTable;
use crate::Label;

/// Gold labels and thresholded predictions aligned by sentence.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedEvaluation {
    pub sentences: Vec<String>,
    pub gold: Vec<Label>,
    pub preds: BTreeMap<String, Vec<Label>>,
}

/// Joins gold rows to each table by normalized sentence text and applies
/// the 0.5 threshold. Every gold sentence must be present in every table.
pub fn align_predictions(
    gold: &[LabeledSentence],
    tables: &[PredictionTable],
) -> Result<AlignedEvaluation, MetricsError> {
    use crate::ruleclf::Classifier;

    let mut preds = BTreeMap::new();
    for table in tables {
        let labels = gold
            .iter()
            .map(|g| {
                table.get(&g.text).map(Label::from_score).ok_or_else(|| {
                    MetricsError::Join(format!("{}: no prediction for {:?}", table.name(), g.text))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        if preds.insert(table.name().to_owned(), labels).is_some() {
            return Err(MetricsError::Join(format!("duplicate model name {}", table.name())));
        }
    }
    Ok(AlignedEvaluation {
        sentences: gold.iter().map(|g| g.text.clone()).collect(),
        gold: gold.iter().map(|g| g.label).collect(),
        preds,
    })
}
