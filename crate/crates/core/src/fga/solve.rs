use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::hermite::{lattice_basis, reduce_against};
use super::{smith_normal_form, FgaError, IntMatrix};

/// Integer solutions of `a * x == b`: one particular solution and a basis of
/// the integer kernel.
///
/// The kernel basis is returned in Hermite form and the particular solution
/// is reduced against it, so the output depends only on the solution coset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerSolution {
    pub particular: Vec<BigInt>,
    pub kernel_basis: Vec<Vec<BigInt>>,
}

impl IntegerSolution {
    /// Whether `x` lies in `particular + span(kernel_basis)`.
    pub fn contains(&self, x: &[BigInt]) -> bool {
        if x.len() != self.particular.len() {
            return false;
        }
        let diff: Vec<BigInt> = x
            .iter()
            .zip(&self.particular)
            .map(|(a, b)| a - b)
            .collect();
        let h = basis_matrix(&self.kernel_basis, diff.len());
        reduce_against(&h, &diff).iter().all(Zero::is_zero)
    }
}

pub(crate) fn basis_matrix(basis: &[Vec<BigInt>], dim: usize) -> IntMatrix {
    IntMatrix::from_fn(basis.len(), dim, |i, j| basis[i][j].clone())
}

pub fn solve_integer_linear(
    a: &IntMatrix,
    b: &[BigInt],
) -> Result<Option<IntegerSolution>, FgaError> {
    if b.len() != a.rows() {
        return Err(FgaError::DimensionMismatch(format!(
            "right-hand side has length {} but the system has {} rows",
            b.len(),
            a.rows()
        )));
    }
    let n = a.cols();
    let snf = smith_normal_form(a);
    let diag = snf.diagonal();
    let rank = snf.rank();
    // d * y == u * b, x == v * y
    let ub = snf.u.mul_vec(b)?;
    let mut y = vec![BigInt::zero(); n];
    for (i, c) in ub.iter().enumerate() {
        if i < rank {
            let (q, r) = c.div_rem(&diag[i]);
            if !r.is_zero() {
                return Ok(None);
            }
            y[i] = q;
        } else if !c.is_zero() {
            return Ok(None);
        }
    }
    let particular = snf.v.mul_vec(&y)?;
    let raw_kernel: Vec<Vec<BigInt>> = (rank..n).map(|j| snf.v.column(j)).collect();
    let kernel_basis = lattice_basis(&raw_kernel, n);
    let particular = reduce_against(&basis_matrix(&kernel_basis, n), &particular);
    Ok(Some(IntegerSolution {
        particular,
        kernel_basis,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn one_equation_two_unknowns() {
        let a = IntMatrix::from_rows(&[vec![1, 1]]);
        let s = solve_integer_linear(&a, &v(&[3])).unwrap().unwrap();
        assert_eq!(a.mul_vec(&s.particular).unwrap(), v(&[3]));
        assert_eq!(s.kernel_basis.len(), 1);
        assert_eq!(a.mul_vec(&s.kernel_basis[0]).unwrap(), v(&[0]));
        assert_eq!(s.kernel_basis[0], v(&[1, -1]));
        assert_eq!(s.particular, v(&[0, 3]));
    }

    #[test]
    fn parity_obstruction() {
        let a = IntMatrix::from_rows(&[vec![2]]);
        assert!(solve_integer_linear(&a, &v(&[1])).unwrap().is_none());
    }

    #[test]
    fn identity_system() {
        let a = IntMatrix::identity(3);
        let s = solve_integer_linear(&a, &v(&[1, 2, 3])).unwrap().unwrap();
        assert_eq!(s.particular, v(&[1, 2, 3]));
        assert!(s.kernel_basis.is_empty());
    }

    #[test]
    fn dimension_mismatch() {
        let a = IntMatrix::identity(2);
        assert!(solve_integer_linear(&a, &v(&[1])).is_err());
    }

    #[test]
    fn zero_columns() {
        let a = IntMatrix::zeros(2, 0);
        assert!(solve_integer_linear(&a, &v(&[0, 0])).unwrap().is_some());
        assert!(solve_integer_linear(&a, &v(&[0, 1])).unwrap().is_none());
    }
}
