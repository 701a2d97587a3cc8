//! The table of known irreducible symplectic varieties and its verification.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::error::FujikiError;
use crate::fujiki::{fujiki_constant_formula, Family};
use crate::lattice::{Atom, LatticeExpr, Signature};
use crate::rational::{double_factorial_odd, format_rational};
use crate::solver::{solve, SolverInput};

/// One row: a deformation type with its second Betti number, Fujiki
/// constant and Beauville lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogRow {
    pub name: String,
    #[serde(serialize_with = "serialize_family")]
    pub family: Family,
    pub n: u32,
    pub b2: usize,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub fujiki: BigRational,
    /// Absolute value of the discriminant.
    #[serde(serialize_with = "serialize_display")]
    pub abs_discriminant: BigInt,
    #[serde(serialize_with = "serialize_display")]
    pub lattice: LatticeExpr,
}

fn serialize_display<S: serde::Serializer, T: fmt::Display>(
    v: &T,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn serialize_family<S: serde::Serializer>(f: &Family, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(f.name())
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "hilb" | "hilbk3" | "k3" => Ok(Family::HilbK3),
            "kummer" | "kum" => Ok(Family::Kummer),
            "og6" => Ok(Family::Og6),
            "og10" => Ok(Family::Og10),
            _ => Err(format!(
                "unknown family {s:?} (expected hilb, kummer, og6 or og10)"
            )),
        }
    }
}

fn rank_one(d: i64) -> LatticeExpr {
    LatticeExpr::atom(Atom::RankOne(d.into()))
}

fn expr(text: &str) -> LatticeExpr {
    LatticeExpr::parse(text).expect("built-in expression parses")
}

/// Builds the row of `family` in half-dimension `n`.
pub fn instantiate(family: Family, n: u32) -> Result<CatalogRow, FujikiError> {
    let mismatch = || FujikiError::FamilyMismatch {
        family: family.name(),
        n,
    };
    let odd = || BigRational::from_integer(double_factorial_odd(n));
    let row = match family {
        Family::HilbK3 if n >= 2 => CatalogRow {
            name: format!("X^[{n}]"),
            family,
            n,
            b2: 23,
            fujiki: odd(),
            abs_discriminant: BigInt::from(2 * (n - 1)),
            lattice: expr("U^3 + -E8^2").plus(rank_one(-2 * (i64::from(n) - 1))),
        },
        Family::Kummer if n >= 2 => CatalogRow {
            name: format!("K^{n}(T)"),
            family,
            n,
            b2: 7,
            fujiki: odd() * BigRational::from_integer((n + 1).into()),
            abs_discriminant: BigInt::from(2 * (n + 1)),
            lattice: expr("U^3").plus(rank_one(-2 * (i64::from(n) + 1))),
        },
        Family::Og6 if n == 3 => CatalogRow {
            name: "OG6".into(),
            family,
            n,
            b2: 8,
            fujiki: BigRational::from_integer(60.into()),
            abs_discriminant: BigInt::from(4),
            lattice: expr("U^3 + (-2)^2"),
        },
        Family::Og10 if n == 5 => CatalogRow {
            name: "OG10".into(),
            family,
            n,
            b2: 24,
            fujiki: BigRational::from_integer(945.into()),
            abs_discriminant: BigInt::from(3),
            lattice: expr("U^3 + -E8^2 + Lambda"),
        },
        _ => return Err(mismatch()),
    };
    Ok(row)
}

/// Default half-dimension of a family row.
pub fn default_n(family: Family) -> u32 {
    match family {
        Family::HilbK3 | Family::Kummer => 2,
        Family::Og6 => 3,
        Family::Og10 => 5,
    }
}

/// `X^[2]`, `K^2(T)`, `OG6`, `OG10`, plus `X^[5]` for comparison with `OG10`.
pub fn builtin_catalog() -> Vec<CatalogRow> {
    let mut rows: Vec<CatalogRow> = [Family::HilbK3, Family::Kummer, Family::Og6, Family::Og10]
        .into_iter()
        .map(|f| instantiate(f, default_n(f)).expect("default rows are valid"))
        .collect();
    rows.push(instantiate(Family::HilbK3, 5).expect("X^[5] is valid"));
    rows
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl Check {
    fn new(name: &'static str, expected: impl ToString, actual: impl ToString) -> Self {
        let (expected, actual) = (expected.to_string(), actual.to_string());
        Self {
            pass: expected == actual,
            name,
            expected,
            actual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowReport {
    pub row: CatalogRow,
    #[serde(serialize_with = "serialize_display")]
    pub discriminant: BigInt,
    pub signature: Signature,
    pub checks: Vec<Check>,
}

impl RowReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

/// Product of the block determinants, without assembling the full Gram.
pub fn blockwise_discriminant(expr: &LatticeExpr) -> BigInt {
    expr.terms.iter().fold(BigInt::one(), |acc, t| {
        let det = t.atom.gram().determinant().expect("atom grams are square");
        acc * det.to_integer().pow(t.power)
    })
}

/// Checks rank, signature, parity, discriminant and Fujiki constant of a
/// row; the `OG10` row is also re-derived with the solver.
pub fn verify_row(row: &CatalogRow) -> RowReport {
    let lattice = row.lattice.realize();
    let discriminant = lattice.discriminant();
    let signature = lattice.signature();
    let mut checks = vec![
        Check::new("rank", row.b2, lattice.rank()),
        Check::new(
            "signature",
            Signature {
                positive: 3,
                negative: row.b2.saturating_sub(3),
                zero: 0,
            },
            signature,
        ),
        Check::new("even", true, lattice.is_even()),
        Check::new("|discriminant|", &row.abs_discriminant, discriminant.abs()),
        Check::new(
            "blockwise discriminant",
            blockwise_discriminant(&row.lattice),
            &discriminant,
        ),
        Check::new("fujiki > 0", true, row.fujiki.is_positive()),
        Check::new(
            "fujiki formula",
            format_rational(&row.fujiki),
            fujiki_constant_formula(row.family, row.n)
                .map(|c| format_rational(&c))
                .unwrap_or_else(|e| e.to_string()),
        ),
    ];
    if row.family == Family::Og10 {
        match solve(&SolverInput::og10()) {
            Ok(sol) => {
                checks.push(Check::new(
                    "solver fujiki",
                    format_rational(&row.fujiki),
                    format_rational(&sol.c),
                ));
                checks.push(Check::new(
                    "solver lattice",
                    row.lattice.realize().gram(),
                    sol.lattice().gram(),
                ));
            }
            Err(e) => checks.push(Check::new("solver", "solution", e)),
        }
    }
    RowReport {
        row: row.clone(),
        discriminant,
        signature,
        checks,
    }
}
