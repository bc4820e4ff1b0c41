//! Smith normal form with transforms.
//!
//! The pivot is always the entry of smallest nonzero absolute value in the
//! active submatrix, ties broken by lowest row and then lowest column, so the
//! output is a deterministic function of the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

/// `u * a * v == d` with `u`, `v` unimodular and `d` diagonal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub source_rows: usize,
    pub source_cols: usize,
}

impl SmithDecomposition {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`, zeros included.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }
}

fn find_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a[(bi, bj)].abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for k in 0..m.min(n) {
        loop {
            let Some((pi, pj)) = find_pivot(&d, k) else {
                break;
            };
            d.swap_rows(k, pi);
            u.swap_rows(k, pi);
            d.swap_cols(k, pj);
            v.swap_cols(k, pj);

            let pivot = d[(k, k)].clone();
            let mut dirty = false;
            for i in k + 1..m {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = -d[(i, k)].div_floor(&pivot);
                d.add_row_multiple(i, k, &q);
                u.add_row_multiple(i, k, &q);
                dirty |= !d[(i, k)].is_zero();
            }
            for j in k + 1..n {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = -d[(k, j)].div_floor(&pivot);
                d.add_col_multiple(j, k, &q);
                v.add_col_multiple(j, k, &q);
                dirty |= !d[(k, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // Row and column are clear; enforce divisibility on the rest.
            let offender = (k + 1..m).find(|&i| {
                (k + 1..n).any(|j| !d[(i, j)].is_multiple_of(&pivot))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::from(1);
                    d.add_row_multiple(k, i, &one);
                    u.add_row_multiple(k, i, &one);
                }
                None => break,
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
    }

    SmithDecomposition {
        u,
        d,
        v,
        source_rows: m,
        source_cols: n,
    }
}
