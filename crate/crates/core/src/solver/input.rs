//! JSON schema for solver input files.
//!
//! ```json
//! {
//!   "n": 5,
//!   "reference": "mu",
//!   "exceptional": ["Sigma", "B"],
//!   "donaldson_part": "U^3 + -E8^2",
//!   "reference_square": "1",
//!   "data": [ { "pattern": { "mu": 10 }, "value": "945", "unit_power": 5 } ]
//! }
//! ```
//!
//! Values are exact rationals written as strings (`"p/q"` or an integer);
//! JSON numbers are rejected so nothing is ever read through a float.
//! `reference_square` is optional and defaults to 1.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::lattice::LatticeExpr;
use crate::rational::{format_rational, parse_rational};

/// One intersection number `∫ Π class^e = value · t^unit_power`, where `t`
/// is the unit in which the reference class squares to `reference_square`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionDatum {
    pub pattern: BTreeMap<String, u32>,
    pub value: BigRational,
    pub unit_power: i64,
}

impl IntersectionDatum {
    pub fn new<'a>(
        pattern: impl IntoIterator<Item = (&'a str, u32)>,
        value: BigRational,
        unit_power: i64,
    ) -> Self {
        Self {
            pattern: pattern
                .into_iter()
                .filter(|(_, e)| *e > 0)
                .map(|(c, e)| (c.to_string(), e))
                .collect(),
            value,
            unit_power,
        }
    }

    pub fn degree(&self) -> u32 {
        self.pattern.values().sum()
    }
}

/// Renders a named pattern as `mu^8*Sigma*B` (reference class first).
pub fn pattern_label(pattern: &BTreeMap<String, u32>, reference: &str) -> String {
    let mut names: Vec<&String> = pattern.keys().collect();
    names.sort_by_key(|n| (n.as_str() != reference, n.as_str()));
    names
        .iter()
        .map(|name| match pattern[*name] {
            1 => name.to_string(),
            e => format!("{name}^{e}"),
        })
        .collect::<Vec<_>>()
        .join("*")
}

/// Everything the solver needs: the reference class, the exceptional
/// classes, the lattice carried isometrically (up to scale) by the
/// reference family, and the intersection data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolverInput {
    pub n: u32,
    pub reference: String,
    pub exceptional: Vec<String>,
    pub donaldson_part: LatticeExpr,
    pub reference_square: BigRational,
    pub data: Vec<IntersectionDatum>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDatum {
    pattern: BTreeMap<String, u32>,
    value: String,
    unit_power: i64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInput {
    n: u32,
    reference: String,
    exceptional: Vec<String>,
    donaldson_part: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reference_square: Option<String>,
    data: Vec<RawDatum>,
}

impl SolverInput {
    pub fn from_json(text: &str) -> Result<Self, SolveError> {
        let raw: RawInput =
            serde_json::from_str(text).map_err(|e| SolveError::Input(e.to_string()))?;
        let rational = |s: &str| parse_rational(s).map_err(|e| SolveError::Input(e.to_string()));
        let reference_square = match &raw.reference_square {
            Some(s) => rational(s)?,
            None => BigRational::one(),
        };
        let data = raw
            .data
            .iter()
            .map(|d| {
                Ok(IntersectionDatum {
                    pattern: d.pattern.clone(),
                    value: rational(&d.value)?,
                    unit_power: d.unit_power,
                })
            })
            .collect::<Result<_, SolveError>>()?;
        Ok(Self {
            n: raw.n,
            reference: raw.reference,
            exceptional: raw.exceptional,
            donaldson_part: LatticeExpr::parse(&raw.donaldson_part)?,
            reference_square,
            data,
        })
    }

    pub fn to_json(&self) -> String {
        let raw = RawInput {
            n: self.n,
            reference: self.reference.clone(),
            exceptional: self.exceptional.clone(),
            donaldson_part: self.donaldson_part.to_string(),
            reference_square: (!self.reference_square.is_one())
                .then(|| format_rational(&self.reference_square)),
            data: self
                .data
                .iter()
                .map(|d| RawDatum {
                    pattern: d.pattern.clone(),
                    value: format_rational(&d.value),
                    unit_power: d.unit_power,
                })
                .collect(),
        };
        serde_json::to_string_pretty(&raw).expect("plain data serializes")
    }

    /// The built-in ten-dimensional O'Grady input.
    pub fn og10() -> Self {
        Self::from_json(OG10_INTERSECTIONS).expect("shipped input is valid")
    }

    /// Replaces the reference class by `scale` times itself in the sense of
    /// the unit: its declared square is multiplied by `scale` and every datum
    /// with `m` reference slots is multiplied by `scale^(m/2)`.
    pub fn rescale_reference(&self, scale: &BigRational) -> Self {
        let mut out = self.clone();
        out.reference_square = &self.reference_square * scale;
        for d in &mut out.data {
            let slots = d.pattern.get(&self.reference).copied().unwrap_or(0);
            if slots % 2 == 0 {
                d.value = &d.value * num_traits::pow(scale.clone(), (slots / 2) as usize);
            }
        }
        out
    }
}

/// Solver input for O'Grady's ten-dimensional example.
pub const OG10_INTERSECTIONS: &str = include_str!("../../data/og10_intersections.json");
