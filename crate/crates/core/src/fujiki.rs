//! Fujiki's formula `∫ α^{2n} = c · B(α,α)^n` and its polarization.
//!
//! The polarized form averages `Π B(α_σ(2i-1), α_σ(2i))` over all of
//! `S_{2n}`. Every unordered perfect matching of the `2n` slots is hit by
//! exactly `n! · 2^n` permutations, so the average equals
//!
//! ```text
//! c / (2n-1)!! · Σ_{matchings m} Π_{(i,j) ∈ m} B(α_i, α_j)
//! ```
//!
//! which is what this module evaluates: 945 terms instead of 10! at n = 5.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Deserialize;

use crate::error::FujikiError;
use crate::linalg::ExactMatrix;
use crate::rational::{double_factorial_odd, factorial, format_rational, parse_rational};

/// Largest slot count accepted by the matching enumerator.
pub const MAX_SLOTS: usize = 16;

/// A perfect matching as a list of pairs `(i, j)` with `i < j`, sorted by `i`.
/// Slots are numbered from 0.
pub type Matching = Vec<(usize, usize)>;

fn check_slots(slots: usize) -> Result<(), FujikiError> {
    if !slots.is_multiple_of(2) {
        return Err(FujikiError::OddSlots(slots));
    }
    if slots > MAX_SLOTS {
        return Err(FujikiError::TooManySlots {
            slots,
            cap: MAX_SLOTS,
        });
    }
    Ok(())
}

/// Visits every perfect matching of `0..slots` in lexicographic order of
/// their sorted pair lists.
pub fn for_each_matching(
    slots: usize,
    mut visit: impl FnMut(&[(usize, usize)]),
) -> Result<(), FujikiError> {
    check_slots(slots)?;
    let mut used = vec![false; slots];
    let mut pairs = Vec::with_capacity(slots / 2);
    recurse(&mut used, &mut pairs, &mut visit);
    Ok(())
}

fn recurse(
    used: &mut [bool],
    pairs: &mut Vec<(usize, usize)>,
    visit: &mut impl FnMut(&[(usize, usize)]),
) {
    let Some(first) = used.iter().position(|u| !u) else {
        visit(pairs);
        return;
    };
    used[first] = true;
    for partner in first + 1..used.len() {
        if used[partner] {
            continue;
        }
        used[partner] = true;
        pairs.push((first, partner));
        recurse(used, pairs, visit);
        pairs.pop();
        used[partner] = false;
    }
    used[first] = false;
}

/// All `(slots-1)!!` perfect matchings of `0..slots`.
pub fn perfect_matchings(slots: usize) -> Result<Vec<Matching>, FujikiError> {
    let mut out = Vec::new();
    for_each_matching(slots, |m| out.push(m.to_vec()))?;
    Ok(out)
}

/// Half-dimension, Fujiki constant and Beauville form on a chosen class basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FujikiStructure {
    n: u32,
    c: BigRational,
    gram: ExactMatrix,
}

impl FujikiStructure {
    pub fn new(n: u32, c: BigRational, gram: ExactMatrix) -> Result<Self, FujikiError> {
        if !c.is_positive() {
            return Err(FujikiError::NonPositiveConstant);
        }
        if !gram.is_symmetric() {
            return Err(FujikiError::BadGram);
        }
        check_slots(2 * n as usize)?;
        Ok(Self { n, c, gram })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn constant(&self) -> &BigRational {
        &self.c
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    /// `∫ α_1 ∧ … ∧ α_{2n}` for classes given by basis index.
    pub fn polarized_integral(&self, classes: &[usize]) -> Result<BigRational, FujikiError> {
        let slots = 2 * self.n as usize;
        if classes.len() != slots {
            return Err(FujikiError::WrongArity {
                expected: slots,
                got: classes.len(),
            });
        }
        let size = self.gram.rows();
        if let Some(&index) = classes.iter().find(|&&i| i >= size) {
            return Err(FujikiError::ClassOutOfRange { index, size });
        }
        let mut sum = BigRational::zero();
        for_each_matching(slots, |m| {
            let mut term = BigRational::one();
            for &(i, j) in m {
                let b = self.gram.get(classes[i], classes[j]);
                if b.is_zero() {
                    return;
                }
                term *= b;
            }
            sum += term;
        })?;
        Ok(&self.c * sum / BigRational::from_integer(double_factorial_odd(self.n)))
    }

    /// `∫ α^{2n} = c · B(α,α)^n` for a basis class.
    pub fn top_power(&self, class: usize) -> Result<BigRational, FujikiError> {
        self.polarized_integral(&vec![class; 2 * self.n as usize])
    }
}

/// A monomial in degree-2 classes, `class -> exponent`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MonomialPattern {
    exponents: BTreeMap<usize, u32>,
}

impl MonomialPattern {
    pub fn new(exponents: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (class, e) in exponents {
            if e > 0 {
                *map.entry(class).or_insert(0) += e;
            }
        }
        Self { exponents: map }
    }

    pub fn degree(&self) -> u32 {
        self.exponents.values().sum()
    }

    pub fn exponent(&self, class: usize) -> u32 {
        self.exponents.get(&class).copied().unwrap_or(0)
    }

    pub fn exponents(&self) -> &BTreeMap<usize, u32> {
        &self.exponents
    }

    /// Classes repeated by exponent, in increasing class order.
    pub fn slots(&self) -> Vec<usize> {
        self.exponents
            .iter()
            .flat_map(|(&c, &e)| std::iter::repeat_n(c, e as usize))
            .collect()
    }
}

/// Pairs of classes whose Beauville pairing is declared to vanish.
/// Everything not listed may be nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Support {
    vanishing: BTreeSet<(usize, usize)>,
}

impl Support {
    pub fn all() -> Self {
        Self::default()
    }

    pub fn vanishing(mut self, a: usize, b: usize) -> Self {
        self.vanishing.insert((a.min(b), a.max(b)));
        self
    }

    pub fn allows(&self, a: usize, b: usize) -> bool {
        !self.vanishing.contains(&(a.min(b), a.max(b)))
    }
}

/// Product of Beauville entries `Π B(i,j)^e`, keys normalized to `i <= j`.
pub type PairingMonomial = BTreeMap<(usize, usize), u32>;

/// A polynomial in Beauville entries; every coefficient is a multiple of `c`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PairingPolynomial {
    pub terms: BTreeMap<PairingMonomial, BigRational>,
}

impl PairingPolynomial {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, monomial: &PairingMonomial) -> BigRational {
        self.terms
            .get(monomial)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Display for PairingPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, q)| {
                let factors: Vec<String> = m
                    .iter()
                    .map(|(&(i, j), &e)| {
                        if e == 1 {
                            format!("B({i},{j})")
                        } else {
                            format!("B({i},{j})^{e}")
                        }
                    })
                    .collect();
                format!("{}*c*{}", format_rational(q), factors.join("*"))
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Expands `∫ pattern` symbolically as `c · Σ coeff · Π B(i,j)^e`, keeping
/// only matchings whose pairs are allowed by `support`.
pub fn pattern_coefficient(
    n: u32,
    pattern: &MonomialPattern,
    support: &Support,
) -> Result<PairingPolynomial, FujikiError> {
    let slots = pattern.slots();
    if slots.len() != 2 * n as usize {
        return Err(FujikiError::WrongArity {
            expected: 2 * n as usize,
            got: slots.len(),
        });
    }
    let mut counts: BTreeMap<PairingMonomial, BigInt> = BTreeMap::new();
    for_each_matching(slots.len(), |m| {
        let mut monomial = PairingMonomial::new();
        for &(i, j) in m {
            let (a, b) = (slots[i], slots[j]);
            if !support.allows(a, b) {
                return;
            }
            *monomial.entry((a.min(b), a.max(b))).or_insert(0) += 1;
        }
        *counts.entry(monomial).or_insert_with(BigInt::zero) += 1;
    })?;
    let norm = double_factorial_odd(n);
    Ok(PairingPolynomial {
        terms: counts
            .into_iter()
            .map(|(m, k)| (m, BigRational::new(k, norm.clone())))
            .collect(),
    })
}

/// The deformation families of the known irreducible symplectic varieties.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Hilbert schemes of points on a K3 surface.
    HilbK3,
    /// Generalized Kummer varieties.
    Kummer,
    /// O'Grady's six-dimensional example.
    Og6,
    /// O'Grady's ten-dimensional example.
    Og10,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::HilbK3 => "HilbK3",
            Family::Kummer => "Kummer",
            Family::Og6 => "OG6",
            Family::Og10 => "OG10",
        }
    }
}

/// Closed-form Fujiki constant: `(2n)!/(n! 2^n)` for Hilbert schemes, that
/// times `(n+1)` for generalized Kummers, 60 for OG6 and 945 for OG10.
pub fn fujiki_constant_formula(family: Family, n: u32) -> Result<BigRational, FujikiError> {
    let mismatch = Err(FujikiError::FamilyMismatch {
        family: family.name(),
        n,
    });
    let hilb = || -> BigInt { factorial(2 * n) / (factorial(n) * BigInt::from(2).pow(n)) };
    let value = match family {
        Family::HilbK3 | Family::Kummer if n == 0 => return mismatch,
        Family::HilbK3 => hilb(),
        Family::Kummer => hilb() * BigInt::from(n + 1),
        Family::Og6 if n == 3 => BigInt::from(60),
        Family::Og10 if n == 5 => BigInt::from(945),
        Family::Og6 | Family::Og10 => return mismatch,
    };
    Ok(BigRational::from_integer(value))
}

/// A class given either as a basis index or by its coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum ClassSpec {
    Index(usize),
    Coordinates(Vec<String>),
}

/// JSON input for a single polarized integral:
///
/// ```json
/// { "n": 2, "c": "3", "gram": [["2", "0"], ["0", "-2"]], "classes": [0, 0, 1, ["1", "1"]] }
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FujikiQuery {
    pub n: u32,
    #[serde(deserialize_with = "crate::rational::deserialize")]
    pub c: BigRational,
    pub gram: Vec<Vec<String>>,
    pub classes: Vec<ClassSpec>,
}

impl FujikiQuery {
    pub fn from_json(text: &str) -> Result<Self, FujikiError> {
        serde_json::from_str(text).map_err(|e| FujikiError::Input(e.to_string()))
    }

    fn parse_row(row: &[String]) -> Result<Vec<BigRational>, FujikiError> {
        row.iter()
            .map(|s| parse_rational(s).map_err(|e| FujikiError::Input(e.to_string())))
            .collect()
    }

    pub fn structure(&self) -> Result<FujikiStructure, FujikiError> {
        let rows = self
            .gram
            .iter()
            .map(|r| Self::parse_row(r))
            .collect::<Result<Vec<_>, _>>()?;
        let gram = ExactMatrix::from_rows(rows).map_err(|_| FujikiError::BadGram)?;
        if !gram.is_square() {
            return Err(FujikiError::BadGram);
        }
        FujikiStructure::new(self.n, self.c.clone(), gram)
    }

    /// Evaluates `∫ α_1 ∧ … ∧ α_{2n}` on the listed classes.
    pub fn evaluate(&self) -> Result<BigRational, FujikiError> {
        let fs = self.structure()?;
        let size = fs.gram().rows();
        let mut vectors = Vec::with_capacity(self.classes.len());
        for class in &self.classes {
            let v = match class {
                ClassSpec::Index(i) if *i < size => {
                    let mut v = vec![BigRational::zero(); size];
                    v[*i] = BigRational::one();
                    v
                }
                ClassSpec::Index(i) => {
                    return Err(FujikiError::ClassOutOfRange { index: *i, size })
                }
                ClassSpec::Coordinates(coords) => {
                    let v = Self::parse_row(coords)?;
                    if v.len() != size {
                        return Err(FujikiError::Input(format!(
                            "class has {} coordinates, form has rank {size}",
                            v.len()
                        )));
                    }
                    v
                }
            };
            vectors.push(v);
        }
        let basis =
            ExactMatrix::from_rows(vectors).map_err(|e| FujikiError::Input(e.to_string()))?;
        let pulled = basis
            .mul(fs.gram())
            .and_then(|m| m.mul(&basis.transpose()))
            .map_err(|e| FujikiError::Input(e.to_string()))?;
        let slots: Vec<usize> = (0..self.classes.len()).collect();
        FujikiStructure::new(self.n, self.c.clone(), pulled)?.polarized_integral(&slots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticeExpr;
    use crate::rational::int;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn matching_counts() {
        assert_eq!(perfect_matchings(2).unwrap().len(), 1);
        assert_eq!(perfect_matchings(4).unwrap().len(), 3);
        assert_eq!(perfect_matchings(10).unwrap().len(), 9 * 7 * 5 * 3);
        assert_eq!(perfect_matchings(0).unwrap(), vec![Vec::new()]);
    }

    #[test]
    fn matchings_are_lexicographic() {
        let m = perfect_matchings(4).unwrap();
        assert_eq!(
            m,
            vec![
                vec![(0, 1), (2, 3)],
                vec![(0, 2), (1, 3)],
                vec![(0, 3), (1, 2)]
            ]
        );
        let six = perfect_matchings(6).unwrap();
        assert!(six.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn matching_errors() {
        assert_eq!(perfect_matchings(3), Err(FujikiError::OddSlots(3)));
        assert_eq!(
            perfect_matchings(18),
            Err(FujikiError::TooManySlots { slots: 18, cap: 16 })
        );
    }

    #[test]
    fn polarized_integral_reduces_to_unpolarized() {
        let gram = ExactMatrix::from_ints(&[[3, 1], [1, -2]]).unwrap();
        let fs = FujikiStructure::new(3, int(15), gram).unwrap();
        assert_eq!(fs.top_power(0).unwrap(), int(15 * 27));
        assert_eq!(fs.top_power(1).unwrap(), int(15 * -8));
    }

    #[test]
    fn hyperbolic_basis_evaluates_to_one() {
        let u5 = LatticeExpr::parse("U^5").unwrap().realize();
        let fs = FujikiStructure::new(5, int(945), u5.gram().clone()).unwrap();
        let classes: Vec<usize> = (0..10).collect();
        assert_eq!(fs.polarized_integral(&classes).unwrap(), int(1));
    }

    #[test]
    fn k3_surface_pair_of_hilbert_square() {
        // n = 2, c = 3, one class of square s: 3 s^2.
        for s in [1, 2, 5] {
            let fs =
                FujikiStructure::new(2, int(3), ExactMatrix::from_ints(&[[s]]).unwrap()).unwrap();
            assert_eq!(
                fs.polarized_integral(&[0, 0, 0, 0]).unwrap(),
                int(3 * s * s)
            );
        }
    }

    #[test]
    fn polarized_integral_errors() {
        let fs = FujikiStructure::new(1, int(1), ExactMatrix::identity(2)).unwrap();
        assert_eq!(
            fs.polarized_integral(&[0]),
            Err(FujikiError::WrongArity {
                expected: 2,
                got: 1
            })
        );
        assert_eq!(
            fs.polarized_integral(&[0, 2]),
            Err(FujikiError::ClassOutOfRange { index: 2, size: 2 })
        );
        assert_eq!(
            FujikiStructure::new(1, int(0), ExactMatrix::identity(2)),
            Err(FujikiError::NonPositiveConstant)
        );
    }

    #[test]
    fn pattern_coefficients() {
        let (r, x, y) = (0, 1, 2);
        let pure =
            pattern_coefficient(5, &MonomialPattern::new([(r, 10)]), &Support::all()).unwrap();
        assert_eq!(pure.terms.len(), 1);
        assert_eq!(pure.coefficient(&[((r, r), 5)].into()), int(1));

        let support = Support::all().vanishing(r, x).vanishing(r, y);
        let mixed =
            pattern_coefficient(5, &MonomialPattern::new([(r, 8), (x, 1), (y, 1)]), &support)
                .unwrap();
        assert_eq!(mixed.terms.len(), 1);
        assert_eq!(
            mixed.coefficient(&[((r, r), 4), ((x, y), 1)].into()),
            q(1, 9)
        );

        let odd =
            pattern_coefficient(5, &MonomialPattern::new([(r, 9), (x, 1)]), &support).unwrap();
        assert!(odd.is_zero());
        assert_eq!(odd.to_string(), "0");
    }

    #[test]
    fn pattern_coefficient_full_support_splits_monomials() {
        let p = pattern_coefficient(1, &MonomialPattern::new([(0, 1), (1, 1)]), &Support::all())
            .unwrap();
        assert_eq!(p.to_string(), "1*c*B(0,1)");
        let p = pattern_coefficient(2, &MonomialPattern::new([(0, 2), (1, 2)]), &Support::all())
            .unwrap();
        // matchings of x x y y: {xx,yy} once, {xy,xy} twice.
        assert_eq!(p.coefficient(&[((0, 0), 1), ((1, 1), 1)].into()), q(1, 3));
        assert_eq!(p.coefficient(&[((0, 1), 2)].into()), q(2, 3));
    }

    #[test]
    fn family_constants() {
        assert_eq!(
            fujiki_constant_formula(Family::HilbK3, 5).unwrap(),
            int(945)
        );
        assert_eq!(fujiki_constant_formula(Family::Kummer, 3).unwrap(), int(60));
        assert_eq!(fujiki_constant_formula(Family::HilbK3, 1).unwrap(), int(1));
        assert_eq!(fujiki_constant_formula(Family::HilbK3, 2).unwrap(), int(3));
        assert_eq!(fujiki_constant_formula(Family::Og6, 3).unwrap(), int(60));
        assert_eq!(fujiki_constant_formula(Family::Og10, 5).unwrap(), int(945));
        assert!(fujiki_constant_formula(Family::Og10, 4).is_err());
        assert!(fujiki_constant_formula(Family::Og6, 5).is_err());
        assert!(fujiki_constant_formula(Family::HilbK3, 0).is_err());
    }

    #[test]
    fn hilbert_constant_is_double_factorial_and_matching_count() {
        for n in 1..=8u32 {
            let c = fujiki_constant_formula(Family::HilbK3, n).unwrap();
            assert_eq!(c, BigRational::from_integer(double_factorial_odd(n)));
            let mut count = 0i64;
            for_each_matching(2 * n as usize, |_| count += 1).unwrap();
            assert_eq!(c, int(count));
            let k = fujiki_constant_formula(Family::Kummer, n).unwrap();
            assert_eq!(k, c * int(n as i64 + 1));
        }
    }

    #[test]
    fn query_from_json() {
        // n = 2, c = 3: ∫ x^4 = 3 B(x,x)^2 with x = e0 + e1, B(x,x) = 2 - 2 = 0.
        let q = FujikiQuery::from_json(
            r#"{"n": 2, "c": "3", "gram": [["2", "0"], ["0", "-2"]],
                "classes": [["1", "1"], ["1", "1"], ["1", "1"], ["1", "1"]]}"#,
        )
        .unwrap();
        assert_eq!(q.evaluate().unwrap(), int(0));
        let q = FujikiQuery::from_json(
            r#"{"n": 2, "c": "3", "gram": [["2", "0"], ["0", "-2"]], "classes": [0, 0, 1, 1]}"#,
        )
        .unwrap();
        // (B00 B11 + 2 B01^2) = -4, times c/3
        assert_eq!(q.evaluate().unwrap(), int(-4));
        let mixed = FujikiQuery {
            classes: vec![
                ClassSpec::Index(0),
                ClassSpec::Index(0),
                ClassSpec::Index(1),
                ClassSpec::Coordinates(vec!["0".into(), "1".into()]),
            ],
            ..q.clone()
        };
        assert_eq!(mixed.evaluate().unwrap(), int(-4));
        let out = FujikiQuery {
            classes: vec![ClassSpec::Index(2); 4],
            ..q.clone()
        };
        assert!(matches!(
            out.evaluate(),
            Err(FujikiError::ClassOutOfRange { .. })
        ));
        let short = FujikiQuery {
            classes: vec![ClassSpec::Coordinates(vec!["1".into()]); 4],
            ..q
        };
        assert!(matches!(short.evaluate(), Err(FujikiError::Input(_))));
        assert!(matches!(
            FujikiQuery::from_json(r#"{"n": 2, "c": 3.0, "gram": [], "classes": []}"#),
            Err(FujikiError::Input(_))
        ));
    }
}
