use num_bigint::BigInt;
use num_traits::Zero;

use super::hermite::lattice_basis;
use super::solve::basis_matrix;
use super::{solve_integer_linear, FgaElement, FgaError, FgaGroup, IntMatrix};

/// Homomorphism between finitely generated abelian groups, stored as the
/// matrix whose column `j` is the image of source generator `j` in target
/// coordinates (reduced).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FgaHom {
    source: FgaGroup,
    target: FgaGroup,
    matrix: IntMatrix,
}

impl FgaHom {
    pub fn new(source: FgaGroup, target: FgaGroup, matrix: IntMatrix) -> Result<Self, FgaError> {
        if matrix.rows() != target.generator_count() || matrix.cols() != source.generator_count() {
            return Err(FgaError::DimensionMismatch(format!(
                "matrix {}x{} for a hom {source} -> {target}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let mut columns = Vec::with_capacity(matrix.cols());
        for j in 0..matrix.cols() {
            let col = target.reduce(&matrix.column(j))?;
            let order = source.generator_order(j);
            if !order.is_zero() {
                let multiple: Vec<BigInt> = col.iter().map(|c| c * &order).collect();
                if !target.reduce(&multiple)?.iter().all(Zero::is_zero) {
                    return Err(FgaError::NotWellDefined(format!(
                        "generator {j} of order {order} maps to an element of larger order"
                    )));
                }
            }
            columns.push(col);
        }
        let matrix = IntMatrix::from_columns(target.generator_count(), &columns);
        Ok(FgaHom {
            source,
            target,
            matrix,
        })
    }

    pub fn identity(g: &FgaGroup) -> Self {
        FgaHom::new(g.clone(), g.clone(), IntMatrix::identity(g.generator_count()))
            .expect("identity is well defined")
    }

    pub fn zero(source: &FgaGroup, target: &FgaGroup) -> Self {
        FgaHom {
            source: source.clone(),
            target: target.clone(),
            matrix: IntMatrix::zeros(target.generator_count(), source.generator_count()),
        }
    }

    pub fn source(&self) -> &FgaGroup {
        &self.source
    }

    pub fn target(&self) -> &FgaGroup {
        &self.target
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &FgaElement) -> Result<FgaElement, FgaError> {
        if x.group() != &self.source {
            return Err(FgaError::GroupMismatch(format!(
                "element of {} fed to a hom from {}",
                x.group(),
                self.source
            )));
        }
        let y = self.matrix.mul_vec(x.coords())?;
        self.target.element_from_coords(&y)
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &FgaHom) -> Result<FgaHom, FgaError> {
        if inner.target != self.source {
            return Err(FgaError::GroupMismatch(format!(
                "cannot compose {} -> {} after {} -> {}",
                self.source, self.target, inner.source, inner.target
            )));
        }
        FgaHom::new(
            inner.source.clone(),
            self.target.clone(),
            self.matrix.mul(&inner.matrix)?,
        )
    }

    /// `[A | R_T]`: images of the source generators followed by the target
    /// relations.
    fn augmented(&self) -> IntMatrix {
        self.matrix
            .hcat(&self.target.relation_matrix())
            .expect("same row count")
    }

    /// Generators of `{x in Z^n : A x ∈ im R_T}`, the preimage of zero in the
    /// free cover of the source.
    fn lifted_kernel_generators(&self) -> Vec<Vec<BigInt>> {
        let aug = self.augmented();
        let n = self.source.generator_count();
        let zero = vec![BigInt::zero(); aug.rows()];
        let sol = solve_integer_linear(&aug, &zero)
            .expect("shape")
            .expect("homogeneous systems are solvable");
        let projected: Vec<Vec<BigInt>> = sol
            .kernel_basis
            .iter()
            .map(|k| k[..n].to_vec())
            .collect();
        lattice_basis(&projected, n)
    }

    pub fn image(&self) -> FgaGroup {
        let n = self.source.generator_count();
        let lifted = self.lifted_kernel_generators();
        FgaGroup::from_relations(n, &IntMatrix::from_columns(n, &lifted))
    }

    pub fn kernel(&self) -> FgaGroup {
        let n = self.source.generator_count();
        let basis = self.lifted_kernel_generators();
        let r = basis.len();
        // Express the source relations in the basis of the lifted kernel.
        let b_t = basis_matrix(&basis, n).transpose();
        let rel = self.source.relation_matrix();
        let mut coeffs = Vec::with_capacity(rel.cols());
        for j in 0..rel.cols() {
            let c = solve_integer_linear(&b_t, &rel.column(j))
                .expect("shape")
                .expect("source relations lie in the kernel lattice");
            coeffs.push(c.particular);
        }
        FgaGroup::from_relations(r, &IntMatrix::from_columns(r, &coeffs))
    }

    pub fn cokernel(&self) -> FgaGroup {
        FgaGroup::from_relations(self.target.generator_count(), &self.augmented())
    }

    pub fn is_injective(&self) -> bool {
        self.kernel().is_trivial()
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel().is_trivial()
    }

    /// Some `x` with `self(x) == y`, if any.
    pub fn preimage(&self, y: &FgaElement) -> Result<Option<FgaElement>, FgaError> {
        if y.group() != &self.target {
            return Err(FgaError::GroupMismatch(format!(
                "element of {} is not in the target {}",
                y.group(),
                self.target
            )));
        }
        let n = self.source.generator_count();
        let Some(sol) = solve_integer_linear(&self.augmented(), y.coords())? else {
            return Ok(None);
        };
        Ok(Some(self.source.element_from_coords(&sol.particular[..n])?))
    }

    pub fn is_automorphism(&self) -> bool {
        self.source == self.target && self.is_injective() && self.is_surjective()
    }

    pub fn invert_automorphism(&self) -> Result<FgaHom, FgaError> {
        if !self.is_automorphism() {
            return Err(FgaError::NotInvertible(format!(
                "hom {} -> {} is not an automorphism",
                self.source, self.target
            )));
        }
        let n = self.target.generator_count();
        let mut columns = Vec::with_capacity(n);
        for i in 0..n {
            let x = self
                .preimage(&self.target.generator(i))?
                .expect("surjective");
            columns.push(x.coords().to_vec());
        }
        FgaHom::new(
            self.target.clone(),
            self.source.clone(),
            IntMatrix::from_columns(self.source.generator_count(), &columns),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn times(k: i64) -> FgaHom {
        let z = FgaGroup::free(1);
        FgaHom::new(z.clone(), z, IntMatrix::from_rows(&[vec![k]])).unwrap()
    }

    #[test]
    fn doubling_on_z() {
        let f = times(2);
        assert_eq!(f.image(), FgaGroup::free(1));
        assert!(f.kernel().is_trivial());
        assert_eq!(f.cokernel(), FgaGroup::from_orders(0, &b(&[2])));
        let z = FgaGroup::free(1);
        let x = f.preimage(&z.element(&b(&[4]), &[]).unwrap()).unwrap().unwrap();
        assert_eq!(x.coords(), &b(&[2])[..]);
        assert!(f.preimage(&z.element(&b(&[3]), &[]).unwrap()).unwrap().is_none());
        assert!(!f.is_automorphism());
    }

    #[test]
    fn diagonal_cokernel() {
        let z2 = FgaGroup::free(2);
        let f = FgaHom::new(z2.clone(), z2, IntMatrix::from_rows(&[vec![2, 0], vec![0, 6]])).unwrap();
        assert_eq!(f.cokernel(), FgaGroup::from_orders(0, &b(&[2, 6])));
    }

    #[test]
    fn z4_onto_z2() {
        let z4 = FgaGroup::from_orders(0, &b(&[4]));
        let z2 = FgaGroup::from_orders(0, &b(&[2]));
        let f = FgaHom::new(z4, z2.clone(), IntMatrix::from_rows(&[vec![1]])).unwrap();
        assert_eq!(f.kernel(), z2);
        assert_eq!(f.image(), z2);
    }

    #[test]
    fn ill_defined_rejected() {
        let z2 = FgaGroup::from_orders(0, &b(&[2]));
        let z = FgaGroup::free(1);
        assert!(matches!(
            FgaHom::new(z2, z, IntMatrix::from_rows(&[vec![1]])),
            Err(FgaError::NotWellDefined(_))
        ));
    }

    #[test]
    fn mixed_target_preimage() {
        // (a, b) -> (a + b, b mod 2)
        let src = FgaGroup::free(2);
        let tgt = FgaGroup::from_orders(1, &b(&[2]));
        let f = FgaHom::new(src, tgt.clone(), IntMatrix::from_rows(&[vec![1, 1], vec![0, 1]])).unwrap();
        let y = tgt.element(&b(&[0]), &b(&[1])).unwrap();
        let x = f.preimage(&y).unwrap().unwrap();
        assert_eq!(f.apply(&x).unwrap(), y);
    }

    #[test]
    fn negation_is_self_inverse() {
        let f = times(-1);
        assert!(f.is_automorphism());
        assert_eq!(f.invert_automorphism().unwrap(), f);
        assert!(times(2).invert_automorphism().is_err());
        assert!(FgaHom::identity(&FgaGroup::free(3)).is_automorphism());
    }

    #[test]
    fn torsion_automorphism_inverse() {
        let z5 = FgaGroup::from_orders(0, &b(&[5]));
        let f = FgaHom::new(z5.clone(), z5.clone(), IntMatrix::from_rows(&[vec![2]])).unwrap();
        let g = f.invert_automorphism().unwrap();
        assert_eq!(g.matrix()[(0, 0)], BigInt::from(3));
        assert_eq!(g.compose(&f).unwrap(), FgaHom::identity(&z5));
    }
}
