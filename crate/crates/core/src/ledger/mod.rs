//! Dimension bookkeeping through exact sequences of vector spaces.
//!
//! A [`RankLedger`] is a chain `T_0 → T_1 → … → T_m` of vector spaces with a
//! dimension interval on each term. Every arrow carries an interval for its
//! rank, so all rules become linear constraints on intervals:
//!
//! * `rank f ≤ dim source`, `rank f ≤ dim target`;
//! * injective: `rank f = dim source`; surjective: `rank f = dim target`;
//!   zero: `rank f = 0`;
//! * exact at `B` in `A →f B →g C`: `dim B = rank f + rank g`.
//!
//! [`RankLedger::propagate`] intersects intervals until nothing changes.
//! Intervals never widen, so the result is a fixpoint and running it again
//! changes nothing.

mod betti;
mod og10;
mod scenario;

pub use betti::{leray_product_bound, thom_excision, thom_shift, BettiProfile};
pub use og10::{derive_b2_og10, derive_b2_og10_with, B2Derivation, Og10Scenario};
pub use scenario::LedgerScenario;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::LedgerError;

/// Upper end of a dimension interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UpperBound {
    Finite(u64),
    Infinite,
}

impl UpperBound {
    fn min(self, other: UpperBound) -> UpperBound {
        match (self, other) {
            (UpperBound::Finite(a), UpperBound::Finite(b)) => UpperBound::Finite(a.min(b)),
            (UpperBound::Finite(a), UpperBound::Infinite)
            | (UpperBound::Infinite, UpperBound::Finite(a)) => UpperBound::Finite(a),
            (UpperBound::Infinite, UpperBound::Infinite) => UpperBound::Infinite,
        }
    }

    fn add(self, other: UpperBound) -> UpperBound {
        match (self, other) {
            (UpperBound::Finite(a), UpperBound::Finite(b)) => a
                .checked_add(b)
                .map_or(UpperBound::Infinite, UpperBound::Finite),
            _ => UpperBound::Infinite,
        }
    }

    /// `self - lo`, saturating at zero.
    fn sub(self, lo: u64) -> UpperBound {
        match self {
            UpperBound::Finite(a) => UpperBound::Finite(a.saturating_sub(lo)),
            UpperBound::Infinite => UpperBound::Infinite,
        }
    }

    pub fn finite(self) -> Option<u64> {
        match self {
            UpperBound::Finite(a) => Some(a),
            UpperBound::Infinite => None,
        }
    }
}

impl fmt::Display for UpperBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpperBound::Finite(a) => write!(f, "{a}"),
            UpperBound::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for UpperBound {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            UpperBound::Finite(a) => s.serialize_u64(*a),
            UpperBound::Infinite => s.serialize_str("inf"),
        }
    }
}

/// A set `{lo, …, hi}` of possible dimensions. May be empty (`lo > hi`)
/// only transiently; the ledger reports that as a contradiction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Interval {
    pub lo: u64,
    pub hi: UpperBound,
}

impl Interval {
    pub const UNKNOWN: Interval = Interval {
        lo: 0,
        hi: UpperBound::Infinite,
    };

    pub fn exact(d: u64) -> Self {
        Self {
            lo: d,
            hi: UpperBound::Finite(d),
        }
    }

    pub fn at_least(lo: u64) -> Self {
        Self {
            lo,
            hi: UpperBound::Infinite,
        }
    }

    pub fn at_most(hi: u64) -> Self {
        Self {
            lo: 0,
            hi: UpperBound::Finite(hi),
        }
    }

    pub fn between(lo: u64, hi: u64) -> Self {
        Self {
            lo,
            hi: UpperBound::Finite(hi),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self.hi, UpperBound::Finite(h) if self.lo > h)
    }

    /// The single value, when the interval is a point.
    pub fn value(&self) -> Option<u64> {
        (self.hi == UpperBound::Finite(self.lo)).then_some(self.lo)
    }

    pub fn contains(&self, d: u64) -> bool {
        d >= self.lo && self.hi.finite().is_none_or(|h| d <= h)
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        self.lo >= other.lo
            && match (self.hi, other.hi) {
                (_, UpperBound::Infinite) => true,
                (UpperBound::Infinite, UpperBound::Finite(_)) => false,
                (UpperBound::Finite(a), UpperBound::Finite(b)) => a <= b,
            }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        }
    }

    /// `None` when the lower end overflows.
    fn plus(&self, other: &Interval) -> Option<Interval> {
        Some(Interval {
            lo: self.lo.checked_add(other.lo)?,
            hi: self.hi.add(other.hi),
        })
    }

    /// Possible values of `x` given `x + other ∈ self`.
    fn minus(&self, other: &Interval) -> Interval {
        let lo = match other.hi {
            UpperBound::Finite(h) => self.lo.saturating_sub(h),
            UpperBound::Infinite => 0,
        };
        Interval {
            lo,
            hi: self.hi.sub(other.lo),
        }
    }

    fn below(&self) -> Interval {
        Interval { lo: 0, hi: self.hi }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "[{}, {}]", self.lo, self.hi),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Annotation {
    Injective,
    Surjective,
    Zero,
}

impl fmt::Display for Annotation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Annotation::Injective => "injective",
            Annotation::Surjective => "surjective",
            Annotation::Zero => "zero",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Term {
    pub name: String,
    pub dim: Interval,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arrow {
    pub label: String,
    pub annotations: Vec<Annotation>,
    /// Source of the annotations, when they are imported facts.
    pub citation: Option<String>,
    pub rank: Interval,
}

/// Where a bound came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "source", rename_all = "lowercase")]
pub enum Justification {
    /// A fact taken as input, with a short citation.
    Imported(String),
    /// A propagation rule.
    Rule(String),
}

impl fmt::Display for Justification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Justification::Imported(s) => write!(f, "[imported: {s}]"),
            Justification::Rule(s) => write!(f, "[rule: {s}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceEntry {
    pub why: Justification,
    /// Term name, or `rank(label)` for an arrow.
    pub subject: String,
    pub interval: Interval,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} = {}", self.why, self.subject, self.interval)
    }
}

pub fn render_trace(trace: &[TraceEntry]) -> String {
    trace
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

/// A chain of terms and arrows with dimension and rank intervals.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct RankLedger {
    terms: Vec<Term>,
    arrows: Vec<Arrow>,
    trace: Vec<TraceEntry>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Slot {
    Term(usize),
    Rank(usize),
}

/// Cap on full sweeps; reached only by ledgers whose lower bounds chase
/// each other upward without a finite ceiling.
const MAX_SWEEPS: usize = 10_000;

impl RankLedger {
    pub fn new() -> Self {
        Self::default()
    }

    /// Appends a term; every term after the first is joined to its
    /// predecessor by an arrow labelled `prev→name`.
    pub fn term(mut self, name: impl Into<String>, dim: Interval) -> Self {
        let name = name.into();
        if let Some(prev) = self.terms.last() {
            self.arrows.push(Arrow {
                label: format!("{}→{}", prev.name, name),
                annotations: Vec::new(),
                citation: None,
                rank: Interval::UNKNOWN,
            });
        }
        self.terms.push(Term {
            name,
            dim,
            exact: false,
        });
        self
    }

    /// Labels and annotates the arrow leaving term `source`.
    pub fn arrow(
        mut self,
        source: &str,
        label: Option<&str>,
        annotations: &[Annotation],
    ) -> Result<Self, LedgerError> {
        let i = self.index(source)?;
        let arrow = self.arrows.get_mut(i).ok_or_else(|| {
            LedgerError::Malformed(format!("term {source:?} has no outgoing arrow"))
        })?;
        if let Some(l) = label {
            arrow.label = l.to_string();
        }
        arrow.annotations.extend_from_slice(annotations);
        Ok(self)
    }

    /// Marks the annotations of the arrow leaving `source` as imported facts.
    pub fn cite(mut self, source: &str, citation: impl Into<String>) -> Result<Self, LedgerError> {
        let i = self.index(source)?;
        let arrow = self.arrows.get_mut(i).ok_or_else(|| {
            LedgerError::Malformed(format!("term {source:?} has no outgoing arrow"))
        })?;
        arrow.citation = Some(citation.into());
        Ok(self)
    }

    /// Declares exactness at an interior term.
    pub fn exact_at(mut self, name: &str) -> Result<Self, LedgerError> {
        let i = self.index(name)?;
        if i == 0 || i + 1 == self.terms.len() {
            return Err(LedgerError::Malformed(format!(
                "exactness needs arrows on both sides of {name:?}"
            )));
        }
        self.terms[i].exact = true;
        Ok(self)
    }

    /// Narrows a term with an externally supplied fact, recorded in the trace.
    pub fn import(
        mut self,
        name: &str,
        bound: Interval,
        citation: impl Into<String>,
    ) -> Result<Self, LedgerError> {
        let i = self.index(name)?;
        self.narrow(
            Slot::Term(i),
            bound,
            Justification::Imported(citation.into()),
        )?;
        Ok(self)
    }

    fn index(&self, name: &str) -> Result<usize, LedgerError> {
        self.terms
            .iter()
            .position(|t| t.name == name)
            .ok_or_else(|| LedgerError::Malformed(format!("unknown term {name:?}")))
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn trace(&self) -> &[TraceEntry] {
        &self.trace
    }

    pub fn dim(&self, name: &str) -> Result<Interval, LedgerError> {
        Ok(self.terms[self.index(name)?].dim)
    }

    fn get(&self, slot: Slot) -> Interval {
        match slot {
            Slot::Term(i) => self.terms[i].dim,
            Slot::Rank(k) => self.arrows[k].rank,
        }
    }

    fn subject(&self, slot: Slot) -> String {
        match slot {
            Slot::Term(i) => self.terms[i].name.clone(),
            Slot::Rank(k) => format!("rank({})", self.arrows[k].label),
        }
    }

    /// Intersects `slot` with `bound`; returns whether anything changed.
    fn narrow(
        &mut self,
        slot: Slot,
        bound: Interval,
        why: Justification,
    ) -> Result<bool, LedgerError> {
        let old = self.get(slot);
        let new = old.intersect(&bound);
        if new == old {
            return Ok(false);
        }
        let entry = TraceEntry {
            why,
            subject: self.subject(slot),
            interval: new,
        };
        if new.is_empty() {
            self.trace.push(entry);
            return Err(LedgerError::Contradiction {
                term: self.subject(slot),
                lo: new.lo.to_string(),
                hi: new.hi.to_string(),
                trace: render_trace(&self.trace),
            });
        }
        self.trace.push(entry);
        match slot {
            Slot::Term(i) => self.terms[i].dim = new,
            Slot::Rank(k) => self.arrows[k].rank = new,
        }
        Ok(true)
    }

    fn sweep(&mut self) -> Result<bool, LedgerError> {
        let rule = |s: String| Justification::Rule(s);
        let mut changed = false;
        for k in 0..self.arrows.len() {
            let (s, t, r) = (Slot::Term(k), Slot::Term(k + 1), Slot::Rank(k));
            let label = self.arrows[k].label.clone();
            let bound = self.get(s).below().intersect(&self.get(t).below());
            changed |= self.narrow(
                r,
                bound,
                rule(format!("rank of {label} bounded by its ends")),
            )?;
            let lift = Interval::at_least(self.get(r).lo);
            changed |= self.narrow(s, lift, rule(format!("source of {label} carries its rank")))?;
            changed |= self.narrow(t, lift, rule(format!("target of {label} carries its rank")))?;
            let citation = self.arrows[k].citation.clone();
            for a in self.arrows[k].annotations.clone() {
                let why = match &citation {
                    Some(c) => Justification::Imported(format!("{label} {a}, {c}")),
                    None => rule(format!("{label} {a}")),
                };
                match a {
                    Annotation::Zero => {
                        changed |= self.narrow(r, Interval::exact(0), why)?;
                    }
                    Annotation::Injective | Annotation::Surjective => {
                        let end = if a == Annotation::Injective { s } else { t };
                        changed |= self.narrow(r, self.get(end), why.clone())?;
                        changed |= self.narrow(end, self.get(r), why)?;
                    }
                }
            }
        }
        for i in 1..self.terms.len().saturating_sub(1) {
            if !self.terms[i].exact {
                continue;
            }
            let why = rule(format!("exactness at {}", self.terms[i].name));
            let (b, f, g) = (Slot::Term(i), Slot::Rank(i - 1), Slot::Rank(i));
            let sum = self
                .get(f)
                .plus(&self.get(g))
                .ok_or_else(|| LedgerError::Unbounded {
                    term: self.subject(b),
                    trace: render_trace(&self.trace),
                })?;
            changed |= self.narrow(b, sum, why.clone())?;
            changed |= self.narrow(f, self.get(b).minus(&self.get(g)), why.clone())?;
            changed |= self.narrow(g, self.get(b).minus(&self.get(f)), why)?;
        }
        Ok(changed)
    }

    /// Runs every rule to a fixpoint.
    pub fn propagate(mut self) -> Result<Self, LedgerError> {
        for _ in 0..MAX_SWEEPS {
            if !self.sweep()? {
                return Ok(self);
            }
        }
        Err(LedgerError::Malformed(format!(
            "propagation did not settle after {MAX_SWEEPS} sweeps"
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cited_annotations_are_imports() {
        let l = RankLedger::new()
            .term("A", Interval::exact(1))
            .term("B", Interval::UNKNOWN)
            .arrow("A", Some("a"), &[Annotation::Injective])
            .and_then(|l| l.cite("A", "known"))
            .unwrap()
            .propagate()
            .unwrap();
        assert!(l
            .trace()
            .iter()
            .any(|e| e.to_string() == "[imported: a injective, known] rank(a) = 1"));
    }

    #[test]
    fn exactness_bounds_middle_term() {
        let l = RankLedger::new()
            .term("A", Interval::exact(2))
            .term("B", Interval::UNKNOWN)
            .term("C", Interval::exact(22))
            .exact_at("B")
            .unwrap()
            .propagate()
            .unwrap();
        assert_eq!(l.dim("B").unwrap(), Interval::at_most(24));
    }

    #[test]
    fn injective_source_bounded_by_target() {
        let l = RankLedger::new()
            .term("0", Interval::exact(0))
            .term("A", Interval::UNKNOWN)
            .term("B", Interval::exact(5))
            .arrow("A", None, &[Annotation::Injective])
            .unwrap()
            .propagate()
            .unwrap();
        assert_eq!(l.dim("A").unwrap(), Interval::at_most(5));
    }

    #[test]
    fn injective_then_exact_pins_quotient() {
        let l = RankLedger::new()
            .term("P", Interval::exact(1))
            .term("Q", Interval::exact(23))
            .term("R", Interval::UNKNOWN)
            .term("S", Interval::exact(0))
            .arrow("P", Some("a"), &[Annotation::Injective])
            .unwrap()
            .exact_at("Q")
            .unwrap()
            .exact_at("R")
            .unwrap()
            .propagate()
            .unwrap();
        assert_eq!(l.dim("R").unwrap().value(), Some(22));
        assert!(l
            .trace()
            .iter()
            .any(|e| e.subject == "R" && e.why == Justification::Rule("exactness at R".into())));
    }

    #[test]
    fn zero_map_into_exact_term_makes_next_injective() {
        let l = RankLedger::new()
            .term("A", Interval::exact(4))
            .term("B", Interval::exact(3))
            .term("C", Interval::UNKNOWN)
            .arrow("A", None, &[Annotation::Zero])
            .unwrap()
            .exact_at("B")
            .unwrap()
            .propagate()
            .unwrap();
        assert_eq!(l.arrows()[1].rank, Interval::exact(3));
        assert_eq!(l.dim("C").unwrap(), Interval::at_least(3));
    }

    #[test]
    fn short_exact_sequence_checked() {
        let build = |a, b, c| {
            RankLedger::new()
                .term("0", Interval::exact(0))
                .term("A", Interval::exact(a))
                .term("B", Interval::exact(b))
                .term("C", Interval::exact(c))
                .term("0'", Interval::exact(0))
                .exact_at("A")
                .and_then(|l| l.exact_at("B"))
                .and_then(|l| l.exact_at("C"))
                .unwrap()
        };
        assert!(build(2, 5, 3).propagate().is_ok());
        let err = build(2, 6, 3).propagate().unwrap_err();
        assert!(matches!(err, LedgerError::Contradiction { .. }));
        assert!(err.to_string().contains("[rule: exactness at"));
    }

    #[test]
    fn imported_facts_are_marked() {
        let l = RankLedger::new()
            .term("X", Interval::UNKNOWN)
            .import("X", Interval::at_least(24), "known lower bound")
            .unwrap();
        assert_eq!(
            l.trace()[0].to_string(),
            "[imported: known lower bound] X = [24, inf]"
        );
        let err = l
            .import("X", Interval::at_most(23), "upper bound")
            .unwrap_err();
        assert!(
            matches!(err, LedgerError::Contradiction { ref lo, ref hi, .. } if lo == "24" && hi == "23")
        );
    }

    #[test]
    fn propagate_is_idempotent() {
        let l = RankLedger::new()
            .term("A", Interval::between(1, 3))
            .term("B", Interval::UNKNOWN)
            .term("C", Interval::exact(7))
            .exact_at("B")
            .unwrap()
            .propagate()
            .unwrap();
        let again = l.clone().propagate().unwrap();
        assert_eq!(again, l);
    }

    #[test]
    fn self_doubling_term_is_unbounded() {
        // rank f = dim B = rank g and dim B = rank f + rank g force B = 0
        let l = RankLedger::new()
            .term("A", Interval::UNKNOWN)
            .term("B", Interval::at_least(1))
            .term("C", Interval::UNKNOWN)
            .arrow("A", None, &[Annotation::Surjective])
            .and_then(|l| l.arrow("B", None, &[Annotation::Injective]))
            .and_then(|l| l.exact_at("B"))
            .unwrap();
        assert!(matches!(l.propagate(), Err(LedgerError::Unbounded { .. })));
    }

    #[test]
    fn malformed_inputs() {
        let l = RankLedger::new()
            .term("A", Interval::UNKNOWN)
            .term("B", Interval::UNKNOWN);
        assert!(matches!(
            l.clone().exact_at("A"),
            Err(LedgerError::Malformed(_))
        ));
        assert!(matches!(
            l.clone().exact_at("Z"),
            Err(LedgerError::Malformed(_))
        ));
        assert!(matches!(
            l.arrow("B", None, &[]),
            Err(LedgerError::Malformed(_))
        ));
    }

    #[test]
    fn interval_arithmetic() {
        let x = Interval::between(3, 10);
        assert_eq!(x.minus(&Interval::between(2, 4)), Interval::between(0, 8));
        assert_eq!(x.minus(&Interval::UNKNOWN), Interval::at_most(10));
        assert_eq!(Interval::UNKNOWN.plus(&x), Some(Interval::at_least(3)));
        assert_eq!(Interval::at_least(u64::MAX).plus(&x), None);
        assert!(Interval::between(4, 5).is_subset_of(&x));
        assert!(!Interval::at_least(4).is_subset_of(&x));
        assert!(Interval::between(5, 4).is_empty());
        assert_eq!(Interval::at_least(2).to_string(), "[2, inf]");
    }
}
