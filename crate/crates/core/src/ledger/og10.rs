//! The chain of dimension counts giving `b₂ = 24` for O'Grady's
//! ten-dimensional example.
//!
//! Three ledgers are run in order, each feeding the next:
//!
//! 1. On the open set `Φ⁻¹(U) ∪ V` of the ambient moduli space the pair
//!    sequence `H²(pair) →a H²(Φ⁻¹(U) ∪ V) → H²(Φ⁻¹(U)) → H³(pair)` with `a`
//!    injective pins `H²(Φ⁻¹(U))`.
//! 2. The pair sequence for `(M̃ ∖ Y, Ψ⁻¹(U))` bounds `b₂(M̃ ∖ Y)` by the
//!    number of divisor components plus the previous value.
//! 3. Codimension-two removals and the known lower bound finish the count.

use serde::Serialize;

use super::{render_trace, thom_excision, Annotation, Interval, RankLedger, TraceEntry};
use crate::error::LedgerError;

/// Inputs of the derivation that are imported rather than derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Og10Scenario {
    /// `b₂` of the ambient moduli space.
    pub ambient_b2: u64,
    /// Irreducible components of the divisor of reducible curves.
    pub components: u64,
    /// Previously known lower bound for `b₂`.
    pub lower_bound: u64,
}

impl Default for Og10Scenario {
    fn default() -> Self {
        Self {
            ambient_b2: 23,
            components: 2,
            lower_bound: 24,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct B2Derivation {
    pub scenario: Og10Scenario,
    /// `b₂` when the bounds meet.
    pub value: Option<u64>,
    pub bounds: Interval,
    pub trace: Vec<TraceEntry>,
}

impl B2Derivation {
    pub fn render(&self) -> String {
        let mut out = render_trace(&self.trace);
        out.push('\n');
        match self.value {
            Some(v) => out.push_str(&format!("b2 = {v}")),
            None => out.push_str(&format!(
                "undetermined: b2 in {} (gap between upper bound and lower bound {})",
                self.bounds, self.scenario.lower_bound
            )),
        }
        out
    }
}

const PAIR_V: &str = "H2(Phi^-1(U) + V, Phi^-1(U))";
const OPEN_V: &str = "H2(Phi^-1(U) + V)";
const OPEN_PHI: &str = "H2(Phi^-1(U))";
const PAIR_V3: &str = "H3(Phi^-1(U) + V, Phi^-1(U))";
const PAIR_Y: &str = "H2(M~ - Y, Psi^-1(U))";
const OPEN_Y: &str = "H2(M~ - Y)";
const OPEN_PSI: &str = "H2(Psi^-1(U))";
const TOTAL: &str = "H2(M)";

/// Prefixes the trace of earlier stages onto a contradiction.
fn with_history(err: LedgerError, history: &[TraceEntry]) -> LedgerError {
    match err {
        LedgerError::Contradiction {
            term,
            lo,
            hi,
            trace,
        } if !history.is_empty() => LedgerError::Contradiction {
            term,
            lo,
            hi,
            trace: format!("{}\n{trace}", render_trace(history)),
        },
        other => other,
    }
}

pub fn derive_b2_og10() -> Result<B2Derivation, LedgerError> {
    derive_b2_og10_with(Og10Scenario::default())
}

pub fn derive_b2_og10_with(scenario: Og10Scenario) -> Result<B2Derivation, LedgerError> {
    let mut history = Vec::new();

    let open_set = RankLedger::new()
        .term(PAIR_V, Interval::UNKNOWN)
        .term(OPEN_V, Interval::UNKNOWN)
        .term(OPEN_PHI, Interval::UNKNOWN)
        .term(PAIR_V3, Interval::UNKNOWN)
        .arrow(PAIR_V, Some("a"), &[Annotation::Injective])?
        .cite(
            PAIR_V,
            "its image contains the class of the divisor Phi^-1(R)",
        )?
        .arrow(OPEN_V, Some("restriction"), &[])?
        .arrow(OPEN_PHI, Some("coboundary"), &[])?
        .exact_at(OPEN_V)?
        .exact_at(OPEN_PHI)?
        .import(
            PAIR_V,
            Interval::exact(thom_excision(1)),
            "excision and Thom isomorphism, V smooth and irreducible",
        )?
        .import(
            PAIR_V3,
            Interval::exact(0),
            "excision and Thom isomorphism, H1(V) = 0",
        )?
        .import(
            OPEN_V,
            Interval::exact(scenario.ambient_b2),
            format!(
                "complement has codimension two, b2 of the ambient moduli space = {}",
                scenario.ambient_b2
            ),
        )?
        .propagate()?;
    let open_phi = open_set.dim(OPEN_PHI)?;
    history.extend_from_slice(open_set.trace());

    let pair = RankLedger::new()
        .term(PAIR_Y, Interval::UNKNOWN)
        .term(OPEN_Y, Interval::UNKNOWN)
        .term(OPEN_PSI, Interval::UNKNOWN)
        .arrow(PAIR_Y, Some("j"), &[])?
        .arrow(OPEN_Y, Some("restriction'"), &[])?
        .exact_at(OPEN_Y)?
        .import(
            PAIR_Y,
            Interval::exact(thom_excision(scenario.components)),
            format!(
                "excision and Thom isomorphism, Psi^-1(R) - Y has {} irreducible components",
                scenario.components
            ),
        )
        .and_then(|l| {
            l.import(
                OPEN_PSI,
                open_phi,
                "comparison of open sets: H2(Psi^-1(U)) = H2(Phi^-1(U))",
            )
        })
        .and_then(RankLedger::propagate)
        .map_err(|e| with_history(e, &history))?;
    let open_y = pair.dim(OPEN_Y)?;
    history.extend_from_slice(pair.trace());

    let total = RankLedger::new()
        .term(TOTAL, Interval::UNKNOWN)
        .import(
            TOTAL,
            open_y,
            "Y has codimension two in M~, and b2(M) = b2(M~)",
        )
        .and_then(|l| {
            l.import(
                TOTAL,
                Interval::at_least(scenario.lower_bound),
                format!(
                    "previously known lower bound b2(M) >= {}",
                    scenario.lower_bound
                ),
            )
        })
        .map_err(|e| with_history(e, &history))?;
    let bounds = total.dim(TOTAL)?;
    history.extend_from_slice(total.trace());

    Ok(B2Derivation {
        scenario,
        value: bounds.value(),
        bounds,
        trace: history,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::Justification;

    #[test]
    fn default_scenario_gives_24() {
        let d = derive_b2_og10().unwrap();
        assert_eq!(d.value, Some(24));
        let text = d.render();
        assert!(text.contains("[rule: exactness at H2(Phi^-1(U))] H2(Phi^-1(U)) = 22"));
        assert!(text.contains("b2 of the ambient moduli space = 23"));
        assert!(text.contains("has 2 irreducible components"));
        assert!(text.contains("H2(M~ - Y) = [0, 24]"));
        assert!(text.contains("[imported: previously known lower bound b2(M) >= 24] H2(M) = 24"));
        assert!(text.ends_with("b2 = 24"));
    }

    #[test]
    fn trace_mixes_imports_and_rules() {
        let d = derive_b2_og10().unwrap();
        let imported = d
            .trace
            .iter()
            .filter(|e| matches!(e.why, Justification::Imported(_)))
            .count();
        assert!(imported >= 6);
        assert!(d
            .trace
            .iter()
            .any(|e| matches!(e.why, Justification::Rule(_))));
    }

    #[test]
    fn three_components_leave_a_gap() {
        let d = derive_b2_og10_with(Og10Scenario {
            components: 3,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(d.value, None);
        assert_eq!(d.bounds, Interval::between(24, 25));
        assert!(d.render().contains("undetermined: b2 in [24, 25]"));
    }

    #[test]
    fn smaller_ambient_contradicts_lower_bound() {
        let err = derive_b2_og10_with(Og10Scenario {
            ambient_b2: 22,
            ..Default::default()
        })
        .unwrap_err();
        match err {
            LedgerError::Contradiction {
                term,
                lo,
                hi,
                trace,
            } => {
                assert_eq!(
                    (term.as_str(), lo.as_str(), hi.as_str()),
                    (TOTAL, "24", "23")
                );
                assert!(trace.contains("H2(Phi^-1(U)) = 21"));
            }
            other => panic!("{other:?}"),
        }
    }
}
