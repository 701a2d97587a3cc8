//! Picard–Lefschetz monodromy of a nodal degeneration of a genus-`p` curve.
//!
//! On `H_1` of the smooth fiber the generator of `π_1(Δ*)` acts by the
//! transvection `β ↦ β + ⟨δ, β⟩ δ`. In a basis starting with the vanishing
//! cycle this is the identity plus a single 1 in position (row 1, col 2).
//! The action on degree-`q` cocycles is `∧^q` of the dual map; its fixed
//! space is what [`invariant_dimension`] counts.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::MonodromyError;
use crate::linalg::ExactMatrix;
use crate::rational::binomial;

/// Largest genus accepted.
pub const MAX_GENUS: u32 = 12;

/// Largest dimension of an exterior power materialized as a dense matrix.
pub const MAX_WEDGE_DIM: usize = 2048;

/// The Picard–Lefschetz transvection on `H_1` of a genus-`p` curve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transvection {
    genus: u32,
    matrix: ExactMatrix,
}

impl Transvection {
    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }
}

fn check_genus(p: u32) -> Result<(), MonodromyError> {
    if p == 0 || p > MAX_GENUS {
        return Err(MonodromyError::Genus { p, cap: MAX_GENUS });
    }
    Ok(())
}

/// `2p × 2p` identity with entry (0, 1) set to 1, so `e_2 ↦ e_1 + e_2`.
pub fn transvection_matrix(p: u32) -> Result<Transvection, MonodromyError> {
    check_genus(p)?;
    let n = 2 * p as usize;
    Ok(Transvection {
        genus: p,
        matrix: ExactMatrix::identity(n).with_entry(0, 1, BigRational::one()),
    })
}

/// Increasing `q`-subsets of `0..n` in lexicographic order.
pub fn wedge_basis(n: usize, q: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, q: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == q {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < q - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, q, &mut Vec::new(), &mut out);
    out
}

/// Sorts `indices` in place and returns the permutation sign, or `None` when
/// an index repeats (the wedge vanishes).
fn sort_with_sign(indices: &mut [usize]) -> Option<bool> {
    let mut negative = false;
    for i in 1..indices.len() {
        let mut j = i;
        while j > 0 && indices[j - 1] > indices[j] {
            indices.swap(j - 1, j);
            negative = !negative;
            j -= 1;
        }
        if j > 0 && indices[j - 1] == indices[j] {
            return None;
        }
    }
    Some(negative)
}

/// Columns of a sparse matrix, each a map `row -> nonzero value`.
pub type SparseColumns = Vec<BTreeMap<usize, BigRational>>;

/// Sparse columns of `∧^q m` on the lexicographically ordered basis
/// `e_{i1} ∧ … ∧ e_{iq}` (`i1 < … < iq`). Column `J` is
/// `m e_{j1} ∧ … ∧ m e_{jq}`, so entry `(I, J)` is the minor `det m[I, J]`.
///
/// The column is expanded over the nonzero entries of the columns of `m`,
/// which is cheap for the sparse matrices that occur here.
pub fn wedge_power_sparse(m: &ExactMatrix, q: usize) -> Result<SparseColumns, MonodromyError> {
    if !m.is_square() {
        return Err(crate::error::LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        }
        .into());
    }
    let n = m.rows();
    if q > n {
        return Err(MonodromyError::Degree { q, max: n });
    }
    let basis = wedge_basis(n, q);
    let index: BTreeMap<&[usize], usize> = basis
        .iter()
        .enumerate()
        .map(|(k, b)| (b.as_slice(), k))
        .collect();
    let columns: Vec<Vec<(usize, &BigRational)>> = (0..n)
        .map(|j| {
            (0..n)
                .map(|i| (i, m.get(i, j)))
                .filter(|(_, v)| !v.is_zero())
                .collect()
        })
        .collect();

    let mut out = vec![BTreeMap::new(); basis.len()];
    for (subset, column) in basis.iter().zip(out.iter_mut()) {
        if subset.iter().any(|&j| columns[j].is_empty()) {
            continue;
        }
        // odometer over one nonzero entry per column of the subset
        let mut choice = vec![0usize; q];
        'expand: loop {
            let picks: Vec<(usize, &BigRational)> =
                (0..q).map(|k| columns[subset[k]][choice[k]]).collect();
            let mut rows: Vec<usize> = picks.iter().map(|&(i, _)| i).collect();
            if let Some(negative) = sort_with_sign(&mut rows) {
                let term = picks
                    .iter()
                    .fold(BigRational::one(), |acc, &(_, v)| acc * v);
                let slot = column
                    .entry(index[rows.as_slice()])
                    .or_insert_with(BigRational::zero);
                if negative {
                    *slot -= term;
                } else {
                    *slot += term;
                }
            }
            let mut k = q;
            loop {
                if k == 0 {
                    break 'expand;
                }
                k -= 1;
                choice[k] += 1;
                if choice[k] < columns[subset[k]].len() {
                    continue 'expand;
                }
                choice[k] = 0;
            }
        }
        column.retain(|_, v| !v.is_zero());
    }
    Ok(out)
}

/// Dense `∧^q m`, refused above [`MAX_WEDGE_DIM`].
pub fn wedge_power(m: &ExactMatrix, q: usize) -> Result<ExactMatrix, MonodromyError> {
    if m.is_square() && q <= m.rows() {
        let dim = usize::try_from(binomial(m.rows() as u64, q as u64)).unwrap_or(usize::MAX);
        if dim > MAX_WEDGE_DIM {
            return Err(MonodromyError::WedgeTooLarge {
                dim,
                cap: MAX_WEDGE_DIM,
            });
        }
    }
    let columns = wedge_power_sparse(m, q)?;
    let dim = columns.len();
    let mut entries = vec![BigRational::zero(); dim * dim];
    for (col, column) in columns.into_iter().enumerate() {
        for (row, v) in column {
            entries[row * dim + col] = v;
        }
    }
    Ok(ExactMatrix::new(dim, dim, entries)?)
}

/// Determinant of a square sparse matrix by Gaussian elimination with
/// row pivoting, preferring the sparsest pivot row.
pub fn sparse_determinant(columns: &[BTreeMap<usize, BigRational>]) -> BigRational {
    let dim = columns.len();
    let mut rows: Vec<BTreeMap<usize, BigRational>> = vec![BTreeMap::new(); dim];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); dim];
    for (c, column) in columns.iter().enumerate() {
        for (&r, v) in column {
            if !v.is_zero() {
                rows[r].insert(c, v.clone());
                col_rows[c].insert(r);
            }
        }
    }
    let mut used = vec![false; dim];
    let mut pivot_of = Vec::with_capacity(dim);
    let mut det = BigRational::one();
    for c in 0..dim {
        let Some(p) = col_rows[c]
            .iter()
            .copied()
            .filter(|&r| !used[r])
            .min_by_key(|&r| (rows[r].len(), r))
        else {
            return BigRational::zero();
        };
        used[p] = true;
        pivot_of.push(p);
        let pivot_row = rows[p].clone();
        let pv = pivot_row[&c].clone();
        let targets: Vec<usize> = col_rows[c].iter().copied().filter(|&r| !used[r]).collect();
        for r in targets {
            let factor = &rows[r][&c] / &pv;
            for (&cc, v) in &pivot_row {
                let entry = rows[r].entry(cc).or_insert_with(BigRational::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    rows[r].remove(&cc);
                    col_rows[cc].remove(&r);
                } else {
                    col_rows[cc].insert(r);
                }
            }
        }
        det *= pv;
    }
    // sign of the permutation c -> pivot_of[c]
    let mut seen = vec![false; dim];
    let mut negative = false;
    for start in 0..dim {
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = pivot_of[i];
            len += 1;
        }
        if len > 0 && len % 2 == 0 {
            negative = !negative;
        }
    }
    if negative {
        -det
    } else {
        det
    }
}

/// `det ∧^q T` for the genus-`p` transvection, computed on the sparse wedge
/// power so every `q ≤ 2p` is reachable.
pub fn wedge_determinant(p: u32, q: usize) -> Result<BigRational, MonodromyError> {
    check_degree(p, q)?;
    let t = transvection_matrix(p)?;
    Ok(sparse_determinant(&wedge_power_sparse(t.matrix(), q)?))
}

fn check_degree(p: u32, q: usize) -> Result<(), MonodromyError> {
    check_genus(p)?;
    let max = 2 * p as usize;
    if q > max {
        return Err(MonodromyError::Degree { q, max });
    }
    Ok(())
}

/// Dimension of the monodromy-invariant degree-`q` cocycles:
/// `dim ker((∧^q M)^T − I)`.
pub fn invariant_dimension(p: u32, q: usize) -> Result<usize, MonodromyError> {
    check_degree(p, q)?;
    let w = wedge_power(transvection_matrix(p)?.matrix(), q)?;
    let shifted = w.transpose().sub(&ExactMatrix::identity(w.rows()))?;
    Ok(shifted.kernel_dimension())
}

/// Same count computed on `∧^q M − I` without transposing.
pub fn invariant_dimension_direct(p: u32, q: usize) -> Result<usize, MonodromyError> {
    check_degree(p, q)?;
    let w = wedge_power(transvection_matrix(p)?.matrix(), q)?;
    Ok(w.sub(&ExactMatrix::identity(w.rows()))?.kernel_dimension())
}

/// `2p − 1` for `q = 1` and `2p² − 3p + 2` for `q = 2`.
pub fn closed_form_invariant_dimension(p: u32, q: usize) -> Result<usize, MonodromyError> {
    check_genus(p)?;
    let p = p as usize;
    match q {
        1 => Ok(2 * p - 1),
        2 => Ok(2 * p * p + 2 - 3 * p),
        _ => Err(MonodromyError::NoClosedForm(q)),
    }
}

/// `binomial(2p, q)`, the dimension of the full degree-`q` space.
pub fn wedge_dimension(p: u32, q: usize) -> u64 {
    binomial(2 * p as u64, q as u64)
        .try_into()
        .expect("binomial fits in u64 for p <= 12")
}
