use std::collections::HashMap;
use std::path::Path;

use serde::Deserialize;

use super::{Classifier, ClassifierError};
use crate::text::normalize_sentence;

/// Classifier answering from a `sentence,score` table.
#[derive(Debug, Clone)]
pub struct PredictionTable {
    name: String,
    scores: HashMap<String, f64>,
}

#[derive(Deserialize)]
struct Row {
    sentence: String,
    score: f64,
}

impl PredictionTable {
    pub fn from_pairs<I, S>(name: impl Into<String>, pairs: I) -> Result<Self, ClassifierError>
    where
        I: IntoIterator<Item = (S, f64)>,
        S: AsRef<str>,
    {
        let name = name.into();
        let mut scores = HashMap::new();
        for (sentence, score) in pairs {
            if !(0.0..=1.0).contains(&score) {
                return Err(ClassifierError::Data {
                    path: name.clone(),
                    message: format!("score {score} outside [0, 1]"),
                });
            }
            scores.insert(normalize_sentence(sentence.as_ref()), score);
        }
        Ok(Self { name, scores })
    }

    /// Reads a CSV with `sentence` and `score` columns; other columns are
    /// ignored, so outcome exports load directly.
    pub fn load(path: &Path) -> Result<Self, ClassifierError> {
        let data_err = |message: String| ClassifierError::Data {
            path: path.display().to_string(),
            message,
        };
        let mut reader = csv::Reader::from_path(path).map_err(|e| data_err(e.to_string()))?;
        let mut pairs = Vec::new();
        for (i, row) in reader.deserialize::<Row>().enumerate() {
            let row = row.map_err(|e| data_err(format!("line {}: {e}", i + 2)))?;
            pairs.push((row.sentence, row.score));
        }
        let name = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "predictions".into());
        Self::from_pairs(name, pairs).map_err(|e| data_err(e.to_string()))
    }

    pub fn get(&self, sentence: &str) -> Option<f64> {
        self.scores.get(&normalize_sentence(sentence)).copied()
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

impl Classifier for PredictionTable {
    fn name(&self) -> &str {
        &self.name
    }

    fn classify_batch(&self, texts: &[String]) -> Result<Vec<f64>, ClassifierError> {
        texts
            .iter()
            .map(|t| self.get(t).ok_or_else(|| ClassifierError::MissingPrediction(t.clone())))
            .collect()
    }
}

pub fn classifier_from_predictions(path: &Path) -> Result<PredictionTable, ClassifierError> {
    PredictionTable::load(path)
}
