//! Independent oracles and generators shared by the integration tests.

#![allow(dead_code)]

use beauville_core::rational::factorial;
use beauville_core::{BigInt, BigRational, ExactMatrix};
use itertools::Itertools;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// `c/(2n)! · Σ_{σ ∈ S_2n} Π_i B(α_σ(2i-1), α_σ(2i))`, summed over every
/// permutation with no matching shortcut.
pub fn naive_polarized(c: &BigRational, gram: &ExactMatrix, classes: &[usize]) -> BigRational {
    let slots = classes.len();
    let mut sum = BigRational::zero();
    for perm in (0..slots).permutations(slots) {
        let mut term = BigRational::one();
        for pair in perm.chunks(2) {
            term *= gram.get(classes[pair[0]], classes[pair[1]]);
        }
        sum += term;
    }
    c * sum / BigRational::from_integer(factorial(slots as u32))
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &ExactMatrix) -> BigRational {
    let n = m.rows();
    if n == 0 {
        return BigRational::one();
    }
    let mut det = BigRational::zero();
    for j in 0..n {
        let rest: Vec<usize> = (0..n).filter(|&k| k != j).collect();
        let minor = m.submatrix(&(1..n).collect::<Vec<_>>(), &rest);
        let term = m.get(0, j) * cofactor_det(&minor);
        if j % 2 == 0 {
            det += term;
        } else {
            det -= term;
        }
    }
    det
}

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-9i64..=9, 1i64..=5).prop_map(|(p, q)| BigRational::new(p.into(), q.into()))
}

/// Symmetric `k × k` rational matrix.
pub fn symmetric_rational(k: usize) -> impl Strategy<Value = ExactMatrix> {
    proptest::collection::vec(rational(), k * (k + 1) / 2).prop_map(move |upper| {
        let mut m = ExactMatrix::zeros(k, k);
        let mut it = upper.into_iter();
        for i in 0..k {
            for j in i..k {
                let x = it.next().expect("enough entries");
                m = m.with_entry(i, j, x.clone()).with_entry(j, i, x);
            }
        }
        m
    })
}

/// Integer matrix with `1..=max` rows and columns.
pub fn integer_matrix(max: usize, bound: i64) -> impl Strategy<Value = ExactMatrix> {
    (1..=max, 1..=max).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c).prop_map(move |e| {
            let rows: Vec<Vec<i64>> = e.chunks(c).map(<[i64]>::to_vec).collect();
            ExactMatrix::from_ints(&rows).expect("rectangular")
        })
    })
}

pub fn square_integer_matrix(max: usize, bound: i64) -> impl Strategy<Value = ExactMatrix> {
    (1..=max).prop_flat_map(move |n| {
        proptest::collection::vec(-bound..=bound, n * n).prop_map(move |e| {
            let rows: Vec<Vec<i64>> = e.chunks(n).map(<[i64]>::to_vec).collect();
            ExactMatrix::from_ints(&rows).expect("square")
        })
    })
}

/// Checks `u·A·v = diag(d)`, unimodularity of `u` and `v`, and the
/// divisibility chain of `d`.
pub fn check_snf(a: &ExactMatrix) -> Result<(), String> {
    let snf = a.smith_normal_form().map_err(|e| e.to_string())?;
    let product = snf
        .u
        .mul(a)
        .and_then(|m| m.mul(&snf.v))
        .map_err(|e| e.to_string())?;
    if product != snf.diagonal_matrix() {
        return Err(format!(
            "u·A·v = {product}, expected {}",
            snf.diagonal_matrix()
        ));
    }
    for (name, m) in [("u", &snf.u), ("v", &snf.v)] {
        let det = m.determinant().map_err(|e| e.to_string())?;
        if !m.is_integral() || det.numer().magnitude() != BigInt::one().magnitude() {
            return Err(format!("{name} is not unimodular: {m}"));
        }
    }
    for w in snf.d.windows(2) {
        let ok = if w[0].is_zero() {
            w[1].is_zero()
        } else {
            (&w[1] % &w[0]).is_zero()
        };
        if !ok {
            return Err(format!(
                "invariant factors {:?} do not form a divisibility chain",
                snf.d
            ));
        }
    }
    if snf.d.iter().any(|x| x < &BigInt::zero()) {
        return Err(format!("negative invariant factor in {:?}", snf.d));
    }
    Ok(())
}

/// `|det A|` equals the product of the invariant factors.
pub fn det_matches_snf(a: &ExactMatrix) -> Result<(), String> {
    let det = a.determinant().map_err(|e| e.to_string())?;
    let snf = a.smith_normal_form().map_err(|e| e.to_string())?;
    let product: BigInt = snf.d.iter().product();
    if det.numer().magnitude() != product.magnitude() || !det.denom().is_one() {
        return Err(format!("det {det} vs invariant factor product {product}"));
    }
    Ok(())
}
