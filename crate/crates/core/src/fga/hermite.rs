//! Row-style Hermite normal form: `u * a == h` where `h` is in row echelon
//! form, every pivot is positive, and entries above a pivot lie in
//! `[0, pivot)`. Zero rows sink to the bottom.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::IntMatrix;

pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut r = 0;

    for j in 0..n {
        if r == m {
            break;
        }
        // Euclid down the column until only row r is nonzero.
        loop {
            let pivot = (r..m)
                .filter(|&i| !h[(i, j)].is_zero())
                .min_by(|&x, &y| h[(x, j)].abs().cmp(&h[(y, j)].abs()).then(x.cmp(&y)));
            let Some(p) = pivot else { break };
            h.swap_rows(r, p);
            u.swap_rows(r, p);
            let mut done = true;
            for i in r + 1..m {
                if h[(i, j)].is_zero() {
                    continue;
                }
                let q = -h[(i, j)].div_floor(&h[(r, j)]);
                h.add_row_multiple(i, r, &q);
                u.add_row_multiple(i, r, &q);
                done &= h[(i, j)].is_zero();
            }
            if done {
                break;
            }
        }
        if h[(r, j)].is_zero() {
            continue;
        }
        if h[(r, j)].is_negative() {
            h.negate_row(r);
            u.negate_row(r);
        }
        let pivot = h[(r, j)].clone();
        for i in 0..r {
            let q = -h[(i, j)].div_floor(&pivot);
            h.add_row_multiple(i, r, &q);
            u.add_row_multiple(i, r, &q);
        }
        r += 1;
    }
    (h, u)
}

/// Pivot column of every nonzero row of a matrix already in Hermite form.
pub fn pivot_columns(h: &IntMatrix) -> Vec<usize> {
    (0..h.rows())
        .filter_map(|i| h.row(i).iter().position(|x| !x.is_zero()))
        .collect()
}

/// Reduce `x` against the nonzero rows of a Hermite form `h`, leaving each
/// pivot coordinate in `[0, pivot)`. Returns the remainder; it is zero iff `x`
/// lies in the row lattice of `h`.
pub fn reduce_against(h: &IntMatrix, x: &[BigInt]) -> Vec<BigInt> {
    let mut x = x.to_vec();
    for (i, &c) in pivot_columns(h).iter().enumerate() {
        let q = x[c].div_floor(&h[(i, c)]);
        if q.is_zero() {
            continue;
        }
        for (xk, hk) in x.iter_mut().zip(h.row(i)) {
            *xk -= &q * hk;
        }
    }
    x
}

/// Nonzero rows of the Hermite form of the lattice spanned by `vectors`.
pub fn lattice_basis(vectors: &[Vec<BigInt>], dim: usize) -> Vec<Vec<BigInt>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let m = IntMatrix::from_fn(vectors.len(), dim, |i, j| vectors[i][j].clone());
    let (h, _) = hermite_normal_form(&m);
    (0..h.rows())
        .map(|i| h.row(i).to_vec())
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}
