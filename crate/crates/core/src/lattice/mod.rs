//! Integral lattices and their invariants.

mod expr;

pub use expr::{Atom, LatticeExpr, Term, MAX_POWER};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::LatticeError;
use crate::linalg::ExactMatrix;

/// Cartan matrix of E8 in Bourbaki node order.
///
/// Nodes 1-3-4-5-6-7-8 form a chain and node 2 is attached to node 4, so
/// the nonzero off-diagonal entries (1-based) are at
/// (1,3) (3,4) (4,5) (5,6) (6,7) (7,8) (2,4), all equal to -1.
pub const E8_CARTAN: [[i64; 8]; 8] = [
    [2, 0, -1, 0, 0, 0, 0, 0],
    [0, 2, 0, -1, 0, 0, 0, 0],
    [-1, 0, 2, -1, 0, 0, 0, 0],
    [0, -1, -1, 2, -1, 0, 0, 0],
    [0, 0, 0, -1, 2, -1, 0, 0],
    [0, 0, 0, 0, -1, 2, -1, 0],
    [0, 0, 0, 0, 0, -1, 2, -1],
    [0, 0, 0, 0, 0, 0, -1, 2],
];

pub const LAMBDA: [[i64; 2]; 2] = [[-6, 3], [3, -2]];

pub fn e8_gram() -> ExactMatrix {
    ExactMatrix::from_ints(&E8_CARTAN).expect("8x8")
}

pub fn lambda_gram() -> ExactMatrix {
    ExactMatrix::from_ints(&LAMBDA).expect("2x2")
}

/// A free abelian group of finite rank with a symmetric integral bilinear form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    gram: ExactMatrix,
}

/// Inertia of a real symmetric form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.positive, self.negative, self.zero)
    }
}

/// Invariant factors `> 1` of `L*/L`, each dividing the next.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DiscriminantGroup {
    pub factors: Vec<BigInt>,
}

impl DiscriminantGroup {
    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }
}

impl fmt::Display for DiscriminantGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        f.write_str(&parts.join(" x "))
    }
}

impl Lattice {
    /// Wraps a Gram matrix, checking symmetry and integrality.
    pub fn new(gram: ExactMatrix) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        if !gram.is_integral() {
            return Err(LatticeError::NonIntegral);
        }
        Ok(Self { gram })
    }

    pub(crate) fn from_validated(gram: ExactMatrix) -> Self {
        debug_assert!(gram.is_symmetric() && gram.is_integral());
        Self { gram }
    }

    pub fn gram(&self) -> &ExactMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn direct_sum(&self, other: &Lattice) -> Lattice {
        Self::from_validated(ExactMatrix::direct_sum([&self.gram, &other.gram]))
    }

    /// `det(gram)`; the empty lattice has discriminant 1.
    pub fn discriminant(&self) -> BigInt {
        self.gram
            .determinant()
            .expect("gram is square")
            .to_integer()
    }

    /// Inertia by congruence diagonalization over the rationals.
    ///
    /// When every remaining diagonal entry is zero but some `a_ij` is not,
    /// the basis vector `e_i` is replaced by `e_i + e_j`, whose square is
    /// `2 a_ij != 0`. Matrix values are never perturbed.
    pub fn signature(&self) -> Signature {
        let mut a = self.gram.row_vecs();
        let mut active: Vec<usize> = (0..self.rank()).collect();
        let (mut positive, mut negative) = (0, 0);
        loop {
            let pivot = active.iter().copied().find(|&i| !a[i][i].is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => {
                    let pair = active.iter().enumerate().find_map(|(k, &i)| {
                        active[k + 1..]
                            .iter()
                            .find(|&&j| !a[i][j].is_zero())
                            .map(|&j| (i, j))
                    });
                    let Some((i, j)) = pair else { break };
                    let row_j = a[j].clone();
                    for (x, v) in a[i].iter_mut().zip(row_j) {
                        *x += v;
                    }
                    for row in a.iter_mut() {
                        let v = row[j].clone();
                        row[i] += v;
                    }
                    i
                }
            };
            let p = a[pivot][pivot].clone();
            if p.is_positive() {
                positive += 1;
            } else {
                negative += 1;
            }
            active.retain(|&i| i != pivot);
            for &i in &active {
                if a[i][pivot].is_zero() {
                    continue;
                }
                let factor: BigRational = &a[i][pivot] / &p;
                for &k in &active {
                    let delta = &factor * &a[pivot][k];
                    a[i][k] -= delta;
                }
            }
        }
        Signature {
            positive,
            negative,
            zero: active.len(),
        }
    }

    /// Even iff every vector has even square, i.e. every diagonal entry is even.
    pub fn is_even(&self) -> bool {
        let two = BigInt::from(2);
        (0..self.rank()).all(|i| (self.gram.get(i, i).numer() % &two).is_zero())
    }

    pub fn is_unimodular(&self) -> bool {
        self.discriminant().abs().is_one()
    }

    /// Content: gcd of all Gram entries (0 for the zero form).
    pub fn content(&self) -> BigInt {
        use num_integer::Integer;
        self.gram
            .entries()
            .iter()
            .fold(BigInt::zero(), |g, q| g.gcd(q.numer()))
    }

    pub fn discriminant_group(&self) -> Result<DiscriminantGroup, LatticeError> {
        let snf = self.gram.smith_normal_form()?;
        if snf.d.iter().any(Zero::is_zero) {
            return Err(LatticeError::Degenerate);
        }
        Ok(DiscriminantGroup {
            factors: snf.d.into_iter().filter(|d| !d.is_one()).collect(),
        })
    }
}

/// Whether the rows of `pairing` span a saturated sublattice.
///
/// `pairing` holds the integer evaluations of candidate classes (rows) on
/// integral cycles (columns). The span is saturated iff every Smith invariant
/// factor equals 1, equivalently some maximal minor is ±1.
pub fn is_primitive_sublattice(pairing: &ExactMatrix) -> Result<bool, LatticeError> {
    if pairing.rows() > pairing.cols() {
        return Err(LatticeError::TooManyRows {
            rows: pairing.rows(),
            cols: pairing.cols(),
        });
    }
    let snf = pairing.smith_normal_form()?;
    Ok(snf.d.iter().all(One::is_one))
}
