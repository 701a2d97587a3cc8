//! JSON scenario files for [`RankLedger`].
//!
//! ```json
//! {
//!   "terms": [
//!     { "name": "A", "dim": 2 },
//!     { "name": "B" },
//!     { "name": "C", "lo": 20, "hi": 22 }
//!   ],
//!   "arrows": [
//!     { "from": "A", "label": "f", "annotations": ["injective"], "citation": "why" }
//!   ],
//!   "exact": ["B"],
//!   "imports": [ { "term": "B", "lo": 3, "citation": "known" } ]
//! }
//! ```
//!
//! Terms form a chain in the order listed. `dim` pins a dimension, `lo` and
//! `hi` bound it; anything left out is unknown. Arrows not mentioned carry
//! no annotation.

use serde::Deserialize;

use super::{Annotation, Interval, RankLedger, UpperBound};
use crate::error::LedgerError;

fn interval(
    what: &str,
    dim: Option<u64>,
    lo: Option<u64>,
    hi: Option<u64>,
) -> Result<Interval, LedgerError> {
    match (dim, lo, hi) {
        (Some(d), None, None) => Ok(Interval::exact(d)),
        (Some(_), _, _) => Err(LedgerError::Malformed(format!(
            "{what}: give either dim or lo/hi"
        ))),
        (None, lo, hi) => Ok(Interval {
            lo: lo.unwrap_or(0),
            hi: hi.map_or(UpperBound::Infinite, UpperBound::Finite),
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
struct TermSpec {
    name: String,
    #[serde(default)]
    dim: Option<u64>,
    #[serde(default)]
    lo: Option<u64>,
    #[serde(default)]
    hi: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrowSpec {
    from: String,
    #[serde(default)]
    label: Option<String>,
    #[serde(default)]
    annotations: Vec<Annotation>,
    #[serde(default)]
    citation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ImportSpec {
    term: String,
    citation: String,
    #[serde(default)]
    dim: Option<u64>,
    #[serde(default)]
    lo: Option<u64>,
    #[serde(default)]
    hi: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LedgerScenario {
    terms: Vec<TermSpec>,
    #[serde(default)]
    arrows: Vec<ArrowSpec>,
    #[serde(default)]
    exact: Vec<String>,
    #[serde(default)]
    imports: Vec<ImportSpec>,
}

impl LedgerScenario {
    pub fn from_json(text: &str) -> Result<Self, LedgerError> {
        serde_json::from_str(text).map_err(|e| LedgerError::Malformed(e.to_string()))
    }

    /// The ledger before propagation.
    pub fn build(&self) -> Result<RankLedger, LedgerError> {
        let mut ledger = RankLedger::new();
        for t in &self.terms {
            if ledger.index(&t.name).is_ok() {
                return Err(LedgerError::Malformed(format!(
                    "term {:?} listed twice",
                    t.name
                )));
            }
            ledger = ledger.term(t.name.clone(), interval(&t.name, t.dim, t.lo, t.hi)?);
        }
        for a in &self.arrows {
            ledger = ledger.arrow(&a.from, a.label.as_deref(), &a.annotations)?;
            if let Some(c) = &a.citation {
                ledger = ledger.cite(&a.from, c.clone())?;
            }
        }
        for name in &self.exact {
            ledger = ledger.exact_at(name)?;
        }
        for i in &self.imports {
            ledger = ledger.import(
                &i.term,
                interval(&i.term, i.dim, i.lo, i.hi)?,
                i.citation.clone(),
            )?;
        }
        Ok(ledger)
    }

    pub fn run(&self) -> Result<RankLedger, LedgerError> {
        self.build()?.propagate()
    }
}
