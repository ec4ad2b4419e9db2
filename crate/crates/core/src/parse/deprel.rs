use std::fmt;
use std::str::FromStr;

/// Label scheme a parse was produced with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DeprelScheme {
    /// Universal Dependencies v2 (`aux:pass`, `nsubj:pass`, `obl:agent`).
    #[default]
    UdV2,
    /// Pre-UD English labels (`auxpass`, `nsubjpass`, `agent`, `prep`/`pobj`).
    LegacyClear,
}

impl FromStr for DeprelScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().replace('-', "_").as_str() {
            "ud_v2" => Ok(DeprelScheme::UdV2),
            "legacy_clear" => Ok(DeprelScheme::LegacyClear),
            other => Err(format!("unknown dependency scheme {other:?}")),
        }
    }
}

impl fmt::Display for DeprelScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeprelScheme::UdV2 => "ud_v2",
            DeprelScheme::LegacyClear => "legacy_clear",
        })
    }
}

/// Scheme-independent relation used by the rule engine.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Relation {
    AuxDep,
    PassiveAux,
    Subj,
    PassiveSubj,
    Agent,
    /// Object of a preposition: UD `obl`, legacy `pobj`.
    PrepObj,
    /// Legacy `prep`: the preposition heading a `pobj`.
    Prep,
    /// UD `case`: the preposition attached below its object.
    Case,
    Compound,
    Flat,
    Conj,
    Other(String),
}

impl Relation {
    pub fn is_prepositional(&self) -> bool {
        matches!(self, Relation::PrepObj | Relation::Prep | Relation::Case)
    }
}

/// Maps a raw dependency label to its canonical relation. Total: unknown
/// labels become [`Relation::Other`] with the raw string kept.
pub fn map_label(raw: &str, scheme: DeprelScheme) -> Relation {
    let base = raw.split(':').next().unwrap_or(raw);
    match scheme {
        DeprelScheme::UdV2 => match raw {
            "aux" => Relation::AuxDep,
            "aux:pass" => Relation::PassiveAux,
            "nsubj" => Relation::Subj,
            "nsubj:pass" => Relation::PassiveSubj,
            "obl:agent" => Relation::Agent,
            "case" => Relation::Case,
            "conj" => Relation::Conj,
            _ if base == "obl" => Relation::PrepObj,
            _ if base == "compound" => Relation::Compound,
            _ if base == "flat" => Relation::Flat,
            _ => Relation::Other(raw.to_owned()),
        },
        DeprelScheme::LegacyClear => match raw {
            "aux" => Relation::AuxDep,
            "auxpass" => Relation::PassiveAux,
            "nsubj" => Relation::Subj,
            "nsubjpass" => Relation::PassiveSubj,
            "agent" => Relation::Agent,
            "pobj" => Relation::PrepObj,
            "prep" => Relation::Prep,
            "compound" | "nn" => Relation::Compound,
            "conj" => Relation::Conj,
            _ => Relation::Other(raw.to_owned()),
        },
    }
}
