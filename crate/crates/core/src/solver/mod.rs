//! Recovery of the Beauville form and Fujiki constant from intersection
//! numbers.
//!
//! Notation: `r` is the reference class, `t` the unit in which
//! `B_donaldson(r, r) = λ t` (λ = `reference_square`), `e_1..e_k` the
//! exceptional classes and `a` the unknown scale with `B = a · B_donaldson`
//! on the reference lattice. The steps are:
//!
//! 1. `c (aλ)^n = F₀` from the datum `r^{2n} = F₀ t^n`.
//! 2. `B(r, e_i) = 0`, checked against any `r^{2n-1} e_i` data.
//! 3. `B(e_i, e_j) = k_ij · aλ / (κ F₀)` from `r^{2n-2} e_i e_j = k_ij t^{n-1}`,
//!    where `κ = 1/(2n-1)` is the matching coefficient of that pattern.
//! 4. `a` is the unique positive rational making the assembled Gram
//!    `a·D ⊕ (B(e_i,e_j))` integral with content 1.
//! 5. `c = F₀ / (aλ)^n`.
//!
//! Every datum is then re-predicted from the solution and any mismatch is a
//! hard error naming the pattern.

mod input;

pub use input::{pattern_label, IntersectionDatum, SolverInput, OG10_INTERSECTIONS};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::SolveError;
use crate::fujiki::{
    fujiki_constant_formula, pattern_coefficient, Family, FujikiStructure, MonomialPattern, Support,
};
use crate::lattice::{lambda_gram, Atom, Lattice, LatticeExpr};
use crate::linalg::ExactMatrix;
use crate::rational::{binomial, format_rational};

/// Largest half-dimension the solver accepts (16 matching slots).
pub const MAX_HALF_DIMENSION: u32 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BeauvilleSolution {
    pub n: u32,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub a: BigRational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub c: BigRational,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub reference_square: BigRational,
    pub reference: String,
    pub exceptional: Vec<String>,
    pub exceptional_gram: ExactMatrix,
    #[serde(skip)]
    pub donaldson_gram: ExactMatrix,
    #[serde(serialize_with = "serialize_display")]
    pub assembled: LatticeExpr,
    /// Whether the reference lattice handed in was unimodular.
    pub donaldson_unimodular: bool,
}

fn serialize_display<S: serde::Serializer, T: std::fmt::Display>(
    v: &T,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

impl BeauvilleSolution {
    /// The assembled lattice `a·D ⊕ exceptional`.
    pub fn lattice(&self) -> Lattice {
        self.assembled.realize()
    }

    /// `B(r, r)` in units of `t`.
    pub fn reference_pairing(&self) -> BigRational {
        &self.a * &self.reference_square
    }

    fn class_index(&self, name: &str) -> Option<usize> {
        if name == self.reference {
            return Some(0);
        }
        self.exceptional
            .iter()
            .position(|e| e == name)
            .map(|i| i + 1)
    }

    /// Fujiki structure on the basis `(r, e_1, …, e_k)` with `B(r,r) = aλ`.
    pub fn structure(&self) -> FujikiStructure {
        let r = ExactMatrix::diagonal(&[self.reference_pairing()]);
        let gram = ExactMatrix::direct_sum([&r, &self.exceptional_gram]);
        FujikiStructure::new(self.n, self.c.clone(), gram).expect("solution is a valid structure")
    }

    /// Predicted `∫ pattern` as the coefficient of `t^k`, `k` = reference slots / 2.
    pub fn predict_integral(
        &self,
        pattern: &BTreeMap<String, u32>,
    ) -> Result<BigRational, SolveError> {
        let mut slots = Vec::new();
        for (name, &e) in pattern {
            let idx = self
                .class_index(name)
                .ok_or_else(|| SolveError::UnknownClass(name.clone()))?;
            slots.extend(std::iter::repeat_n(idx, e as usize));
        }
        let degree = slots.len() as u32;
        if degree != 2 * self.n {
            return Err(SolveError::WrongDegree {
                pattern: pattern_label(pattern, &self.reference),
                degree,
                expected: 2 * self.n,
            });
        }
        Ok(self.structure().polarized_integral(&slots)?)
    }
}

fn gcd_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::zero(), |g, v| g.gcd(v))
}

fn lcm_all<'a>(values: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |l, v| l.lcm(v))
}

/// The positive rational `a` with `a · pre_gram` integral of content 1.
///
/// `a = L / g` where `L` is the lcm of the denominators and `g` the gcd of
/// the entries of `L · pre_gram`.
pub fn content_one_scale(pre_gram: &ExactMatrix) -> Result<BigRational, SolveError> {
    let l = lcm_all(pre_gram.entries().iter().map(|q| q.denom()));
    let scaled: Vec<BigInt> = pre_gram
        .entries()
        .iter()
        .map(|q| (q * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let g = gcd_all(&scaled);
    if g.is_zero() {
        return Err(SolveError::NoScale);
    }
    Ok(BigRational::new(l, g))
}

fn exceptional_atom(gram: &ExactMatrix) -> LatticeExpr {
    if gram == &lambda_gram() {
        LatticeExpr::atom(Atom::Lambda)
    } else {
        LatticeExpr::atom(Atom::Gram(gram.clone()))
    }
}

struct Indexed<'a> {
    datum: &'a IntersectionDatum,
    pattern: MonomialPattern,
    reference_slots: u32,
}

pub fn solve(input: &SolverInput) -> Result<BeauvilleSolution, SolveError> {
    let n = input.n;
    if n == 0 || n > MAX_HALF_DIMENSION {
        return Err(SolveError::Input(format!(
            "n must be in 1..={MAX_HALF_DIMENSION}, got {n}"
        )));
    }
    let mut names = vec![input.reference.as_str()];
    names.extend(input.exceptional.iter().map(String::as_str));
    for (i, a) in names.iter().enumerate() {
        if names[..i].contains(a) {
            return Err(SolveError::Input(format!("class {a:?} declared twice")));
        }
    }
    if !input.reference_square.is_positive() {
        return Err(SolveError::NonPositiveReferenceSquare(format_rational(
            &input.reference_square,
        )));
    }
    let label = |d: &IntersectionDatum| pattern_label(&d.pattern, &input.reference);

    // Index the data and enforce the per-datum invariants.
    let mut indexed = Vec::with_capacity(input.data.len());
    for datum in &input.data {
        let mut exps = Vec::new();
        for (name, &e) in &datum.pattern {
            let idx = names
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| SolveError::UnknownClass(name.clone()))?;
            exps.push((idx, e));
        }
        let pattern = MonomialPattern::new(exps);
        if pattern.degree() != 2 * n {
            return Err(SolveError::WrongDegree {
                pattern: label(datum),
                degree: pattern.degree(),
                expected: 2 * n,
            });
        }
        let reference_slots = pattern.exponent(0);
        if reference_slots % 2 == 1 {
            if !datum.value.is_zero() {
                return Err(SolveError::NonOrthogonal {
                    pattern: label(datum),
                    value: format_rational(&datum.value),
                });
            }
        } else if datum.unit_power * 2 != i64::from(reference_slots) {
            return Err(SolveError::UnitPower {
                pattern: label(datum),
                got: datum.unit_power,
                reference_slots,
            });
        }
        indexed.push(Indexed {
            datum,
            pattern,
            reference_slots,
        });
    }
    for (i, x) in indexed.iter().enumerate() {
        if let Some(y) = indexed[..i].iter().find(|y| y.pattern == x.pattern) {
            if y.datum.value != x.datum.value {
                return Err(SolveError::Inconsistent {
                    pattern: label(x.datum),
                    given: format_rational(&x.datum.value),
                    predicted: format_rational(&y.datum.value),
                });
            }
        }
    }
    let lookup = |pattern: &MonomialPattern| {
        indexed
            .iter()
            .find(|x| &x.pattern == pattern)
            .map(|x| &x.datum.value)
    };

    // (i) pure reference datum
    let pure = MonomialPattern::new([(0, 2 * n)]);
    let f0 = lookup(&pure)
        .ok_or_else(|| SolveError::MissingDatum(format!("{}^{}", input.reference, 2 * n)))?
        .clone();
    if !f0.is_positive() {
        return Err(SolveError::NonPositiveReference(format_rational(&f0)));
    }

    // (ii) orthogonality of r and the exceptional classes
    let k = input.exceptional.len();
    let support = (1..=k).fold(Support::all(), |s, i| s.vanishing(0, i));

    // (iii) exceptional Gram up to the scale a
    let lambda = &input.reference_square;
    let mut unscaled = ExactMatrix::zeros(k, k);
    for i in 1..=k {
        for j in i..=k {
            let pattern = MonomialPattern::new([(0, 2 * n - 2), (i, 1), (j, 1)]);
            let value = lookup(&pattern).ok_or_else(|| {
                let mut named = BTreeMap::new();
                named.insert(input.reference.clone(), 2 * n - 2);
                *named.entry(names[i].to_string()).or_insert(0) += 1;
                *named.entry(names[j].to_string()).or_insert(0) += 1;
                SolveError::MissingDatum(pattern_label(&named, &input.reference))
            })?;
            let poly = pattern_coefficient(n, &pattern, &support)?;
            let monomial: BTreeMap<(usize, usize), u32> = if n == 1 {
                [((i, j), 1)].into()
            } else {
                [((0, 0), n - 1), ((i, j), 1)].into()
            };
            let kappa = poly.coefficient(&monomial);
            debug_assert_eq!(poly.terms.len(), 1);
            let entry = value * lambda / (kappa * &f0);
            unscaled =
                unscaled
                    .with_entry(i - 1, j - 1, entry.clone())
                    .with_entry(j - 1, i - 1, entry);
        }
    }

    // (iv) scale fixing
    let donaldson = input.donaldson_part.realize();
    let pre_gram = ExactMatrix::direct_sum([donaldson.gram(), &unscaled]);
    let a = content_one_scale(&pre_gram)?;
    let exceptional_gram = unscaled.scale(&a);

    // (v) Fujiki constant
    let c = &f0 / num_traits::pow(&a * lambda, n as usize);

    let assembled = if a.is_one() {
        input.donaldson_part.clone()
    } else {
        LatticeExpr::atom(Atom::Gram(donaldson.gram().scale(&a)))
    }
    .plus(exceptional_atom(&exceptional_gram));

    let solution = BeauvilleSolution {
        n,
        a,
        c,
        reference_square: lambda.clone(),
        reference: input.reference.clone(),
        exceptional: input.exceptional.clone(),
        exceptional_gram,
        donaldson_gram: donaldson.gram().clone(),
        assembled,
        donaldson_unimodular: donaldson.is_unimodular(),
    };

    for x in &indexed {
        let predicted = solution.predict_integral(&x.datum.pattern)?;
        if predicted != x.datum.value {
            return Err(SolveError::Inconsistent {
                pattern: label(x.datum),
                given: format_rational(&x.datum.value),
                predicted: format_rational(&predicted),
            });
        }
        debug_assert!(x.reference_slots <= 2 * n);
    }
    Ok(solution)
}

/// Coefficient of `s^4` in `∫_{X^[2] × X^[2]} ((p₁* + p₂*) x)^8` where
/// `∫_{X^[2]} x^4 = c₂ s²`: only the `(4, 4)` split survives, giving
/// `binomial(8, 4) · (c₂)²`.
pub fn hilb2_cross_check_with(c2: &BigRational) -> BigRational {
    let single = FujikiStructure::new(2, c2.clone(), ExactMatrix::identity(1))
        .and_then(|fs| fs.top_power(0))
        .expect("n = 2 structure with positive constant");
    BigRational::from_integer(binomial(8, 4)) * &single * &single
}

/// [`hilb2_cross_check_with`] at the Hilbert-square constant `c₂ = 3`.
pub fn hilb2_cross_check() -> BigRational {
    let c2 = fujiki_constant_formula(Family::HilbK3, 2).expect("n = 2 is valid");
    hilb2_cross_check_with(&c2)
}

/// Determinant certificate for the saturation of a sublattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SaturationCertificate {
    pub saturated: bool,
    #[serde(serialize_with = "crate::rational::serialize")]
    pub determinant: BigRational,
    /// Bottom-right 2×2 block, when the matrix is at least 2×2.
    pub corner: Option<ExactMatrix>,
}

/// Block evaluation matrix `[[upper, 0], [lower_left, corner]]`.
///
/// `upper` pairs the reference-lattice classes with integral cycles, the
/// zero block records that those classes vanish on the contracted curves,
/// and `corner` holds the pairings of the exceptional classes with them.
pub fn evaluation_matrix(
    upper: &ExactMatrix,
    corner: &ExactMatrix,
    lower_left: Option<&ExactMatrix>,
) -> ExactMatrix {
    let mut m = ExactMatrix::direct_sum([upper, corner]);
    if let Some(block) = lower_left {
        for i in 0..block.rows() {
            for j in 0..block.cols() {
                m = m.with_entry(upper.rows() + i, j, block.get(i, j).clone());
            }
        }
    }
    m
}

pub fn saturation_certificate(
    eval_matrix: &ExactMatrix,
) -> Result<SaturationCertificate, SolveError> {
    let determinant = eval_matrix
        .determinant()
        .map_err(|e| SolveError::Lattice(e.into()))?;
    let n = eval_matrix.rows();
    let corner = (n >= 2).then(|| eval_matrix.submatrix(&[n - 2, n - 1], &[n - 2, n - 1]));
    Ok(SaturationCertificate {
        saturated: determinant.abs().is_one(),
        determinant,
        corner,
    })
}
