//! JSON form of a formula (schema version 1) and the fixture file, a JSON
//! array of such documents. Coefficients are `"p/q"` strings so no value
//! ever passes through a float.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use ruin_core::algebra::{Monomial, MultiPoly, Rational, RationalFormula};
use ruin_core::transforms::MomentKind;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("unsupported schema version {0}")]
    SchemaVersion(u32),
    #[error("unsupported player count {0}")]
    Players(usize),
    #[error("term {index}: bad coefficient {text:?}")]
    Coefficient { index: usize, text: String },
    #[error("term {index}: expected {expected} exponents, found {found}")]
    Exponents {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("{0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("fixture {index} is not canonical")]
    NotCanonical { index: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Binomial,
    Raw,
    Central,
}

impl From<MomentKind> for Kind {
    fn from(k: MomentKind) -> Self {
        match k {
            MomentKind::Binomial => Kind::Binomial,
            MomentKind::Raw => Kind::Raw,
            MomentKind::Central => Kind::Central,
        }
    }
}

impl From<Kind> for MomentKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Binomial => MomentKind::Binomial,
            Kind::Raw => MomentKind::Raw,
            Kind::Central => MomentKind::Central,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermDocument {
    pub coefficient: String,
    pub exponents: Vec<u16>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormulaDocument {
    pub schema_version: u32,
    pub players: usize,
    pub kind: Kind,
    pub order: usize,
    pub numerator_terms: Vec<TermDocument>,
    pub denominator_power: u32,
}

fn coefficient_string(c: &Rational) -> String {
    format!("{}/{}", c.numer(), c.denom())
}

fn parse_coefficient(text: &str) -> Option<Rational> {
    let (n, d) = match text.split_once('/') {
        Some((n, d)) => (
            n.trim().parse::<BigInt>().ok()?,
            d.trim().parse::<BigInt>().ok()?,
        ),
        None => (text.trim().parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    (d != BigInt::from(0)).then(|| Rational::new(n, d))
}

impl FormulaDocument {
    pub fn from_formula(kind: Kind, order: usize, f: &RationalFormula) -> Self {
        let players = f.vars();
        FormulaDocument {
            schema_version: SCHEMA_VERSION,
            players,
            kind,
            order,
            numerator_terms: f
                .numerator()
                .terms()
                .map(|(m, c)| TermDocument {
                    coefficient: coefficient_string(c),
                    exponents: m.exponents()[..players].to_vec(),
                })
                .collect(),
            denominator_power: f.denominator_power(),
        }
    }

    pub fn to_formula(&self) -> Result<RationalFormula, DocumentError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(DocumentError::SchemaVersion(self.schema_version));
        }
        if self.players != 2 && self.players != 3 {
            return Err(DocumentError::Players(self.players));
        }
        let mut terms = Vec::with_capacity(self.numerator_terms.len());
        for (index, t) in self.numerator_terms.iter().enumerate() {
            if t.exponents.len() != self.players {
                return Err(DocumentError::Exponents {
                    index,
                    expected: self.players,
                    found: t.exponents.len(),
                });
            }
            let c =
                parse_coefficient(&t.coefficient).ok_or_else(|| DocumentError::Coefficient {
                    index,
                    text: t.coefficient.clone(),
                })?;
            terms.push((Monomial::new(&t.exponents), c));
        }
        Ok(RationalFormula::new(
            MultiPoly::from_terms(self.players, terms),
            self.denominator_power,
        ))
    }

    /// True when re-serializing the parsed formula reproduces this document
    /// exactly: canonical term order, reduced coefficients, no cancellable
    /// denominator.
    pub fn is_canonical(&self) -> bool {
        self.to_formula()
            .is_ok_and(|f| Self::from_formula(self.kind, self.order, &f) == *self)
    }
}

/// Formulas transcribed from published closed forms, stored expanded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureSet {
    pub entries: Vec<FormulaDocument>,
}

impl FixtureSet {
    /// Parses a JSON array and checks every entry is canonical.
    pub fn from_json(text: &str) -> Result<Self, DocumentError> {
        let entries: Vec<FormulaDocument> = serde_json::from_str(text)?;
        for (index, e) in entries.iter().enumerate() {
            e.to_formula()?;
            if !e.is_canonical() {
                return Err(DocumentError::NotCanonical { index });
            }
        }
        Ok(FixtureSet { entries })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DocumentError> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn for_players(&self, players: usize) -> impl Iterator<Item = &FormulaDocument> + '_ {
        self.entries.iter().filter(move |e| e.players == players)
    }
}
