use std::fmt;

use serde::{Deserialize, Serialize};

/// Binary sentence class. Serialized as `1` (regulatory) / `0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    NonRegulatory,
    Regulatory,
}

impl Label {
    pub fn from_score(score: f64) -> Label {
        if score >= 0.5 {
            Label::Regulatory
        } else {
            Label::NonRegulatory
        }
    }

    pub fn from_bit(bit: u8) -> Option<Label> {
        match bit {
            0 => Some(Label::NonRegulatory),
            1 => Some(Label::Regulatory),
            _ => None,
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Label::NonRegulatory => 0,
            Label::Regulatory => 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Label::NonRegulatory => "non_regulatory",
            Label::Regulatory => "regulatory",
        }
    }

    pub fn other(self) -> Label {
        match self {
            Label::NonRegulatory => Label::Regulatory,
            Label::Regulatory => Label::NonRegulatory,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
