//! Smith normal form over the integers with unimodular transforms.
//!
//! Pivot rule: the nonzero entry of smallest absolute value in the active
//! submatrix, ties broken by lowest `(row, col)`. The output is therefore
//! deterministic for a given input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::ExactMatrix;
use crate::error::LinalgError;

/// `u · a · v = diag(d)` padded with zeros to the shape of `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfDecomposition {
    /// Invariant factors, nonnegative, each dividing the next; length `min(rows, cols)`.
    pub d: Vec<BigInt>,
    pub u: ExactMatrix,
    pub v: ExactMatrix,
}

impl SnfDecomposition {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }

    /// The diagonal matrix `diag(d)` with the shape of the original input.
    pub fn diagonal_matrix(&self) -> ExactMatrix {
        let (rows, cols) = (self.u.rows(), self.v.rows());
        let mut m = ExactMatrix::zeros(rows, cols);
        for (i, d) in self.d.iter().enumerate() {
            m = m.with_entry(i, i, d.clone().into());
        }
        m
    }
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            row.swap(i, j);
        }
    }

    /// row_dst += factor * row_src
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for m in [&mut self.a, &mut self.u] {
            let src_row = m[src].clone();
            for (x, s) in m[dst].iter_mut().zip(&src_row) {
                *x += factor * s;
            }
        }
    }

    /// col_dst += factor * col_src
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for row in self.a.iter_mut().chain(self.v.iter_mut()) {
            let s = row[src].clone();
            row[dst] += factor * s;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for m in [&mut self.a, &mut self.u] {
            for x in m[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }

    fn smallest_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in self.a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

impl ExactMatrix {
    /// Smith normal form; every entry must be an integer.
    pub fn smith_normal_form(&self) -> Result<SnfDecomposition, LinalgError> {
        let (rows, cols) = (self.rows(), self.cols());
        let mut w = Work {
            a: self.to_integer_rows()?,
            u: identity(rows),
            v: identity(cols),
        };
        let steps = rows.min(cols);
        for t in 0..steps {
            while let Some((pi, pj)) = w.smallest_pivot(t) {
                if pi != t {
                    w.swap_rows(t, pi);
                }
                if pj != t {
                    w.swap_cols(t, pj);
                }
                let p = w.a[t][t].clone();

                let mut dirty = false;
                for i in t + 1..rows {
                    if w.a[i][t].is_zero() {
                        continue;
                    }
                    let q = w.a[i][t].div_floor(&p);
                    w.add_row(i, t, &-q);
                    dirty |= !w.a[i][t].is_zero();
                }
                for j in t + 1..cols {
                    if w.a[t][j].is_zero() {
                        continue;
                    }
                    let q = w.a[t][j].div_floor(&p);
                    w.add_col(j, t, &-q);
                    dirty |= !w.a[t][j].is_zero();
                }
                if dirty {
                    continue;
                }

                // Pivot row and column are clear; enforce divisibility of the rest.
                let offender =
                    (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !w.a[i][j].is_multiple_of(&p)));
                match offender {
                    Some(i) => w.add_row(t, i, &BigInt::one()),
                    None => break,
                }
            }
            if w.a[t][t].is_negative() {
                w.negate_row(t);
            }
        }
        let d = (0..steps).map(|i| w.a[i][i].clone()).collect();
        Ok(SnfDecomposition {
            d,
            u: ExactMatrix::from_bigints(&w.u)?,
            v: ExactMatrix::from_bigints(&w.v)?,
        })
    }
}
