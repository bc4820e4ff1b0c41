//! Products of the rank-one groups `Z`, `Z/n`, `Q/Z` and `Q`, and
//! homomorphisms between them written as rational matrices.
//!
//! An element is a rational vector. Each coordinate kind fixes which lifts are
//! allowed (integers for `Z` and `Z/n`, rationals for `Q/Z` and `Q`) and which
//! ambiguity is quotiented out (`nZ` for `Z/n`, `Z` for `Q/Z`). A matrix entry
//! from kind `a` to kind `b` is admissible when it maps lifts to lifts and
//! ambiguity into ambiguity; that makes matrix products compose correctly.
//!
//! Character groups, Picard coordinates and rational models of structure
//! groups are all instances, so character maps, their duals and twists all
//! go through this one layer.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::hermite::{lattice_basis, reduce_against};
use super::rational::{clear_denominators, from_int, frac, lcm_of_denominators, mod_rational, QMatrix, Rational};
use super::solve::basis_matrix;
use super::{solve_integer_linear, FgaError, IntMatrix};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CoordKind {
    /// `Z`
    Integer,
    /// `Z/n`, `n > 1`
    Cyclic(BigInt),
    /// `Q/Z`
    Circle,
    /// `Q`
    Rational,
}

impl CoordKind {
    pub fn has_integral_lift(&self) -> bool {
        matches!(self, CoordKind::Integer | CoordKind::Cyclic(_))
    }

    /// Generator of the ambiguity ideal, `None` when there is none.
    pub fn modulus(&self) -> Option<BigInt> {
        match self {
            CoordKind::Cyclic(n) => Some(n.clone()),
            CoordKind::Circle => Some(BigInt::from(1)),
            CoordKind::Integer | CoordKind::Rational => None,
        }
    }

    /// Kind of the dual coordinate under Pontryagin-style duality of the
    /// rational models: `Z <-> Q/Z`, `Z/n <-> Z/n`, `Q <-> Q`.
    pub fn dual(&self) -> CoordKind {
        match self {
            CoordKind::Integer => CoordKind::Circle,
            CoordKind::Circle => CoordKind::Integer,
            k => k.clone(),
        }
    }

    fn cyclic_order(&self) -> BigInt {
        match self {
            CoordKind::Cyclic(n) => n.clone(),
            _ => BigInt::from(1),
        }
    }

    pub fn normalize(&self, x: &Rational) -> Result<Rational, FgaError> {
        if self.has_integral_lift() && !x.is_integer() {
            return Err(FgaError::InvalidElement(format!(
                "{x} is not an integer lift for a {self:?} coordinate"
            )));
        }
        Ok(match self.modulus() {
            Some(m) => mod_rational(x, &m),
            None => x.clone(),
        })
    }

    /// Admissibility of a matrix entry from `self` into `out`, returning the
    /// normalized entry.
    fn admit_entry(&self, out: &CoordKind, e: &Rational) -> Result<Rational, FgaError> {
        if e.is_zero() {
            return Ok(e.clone());
        }
        let bad = |why: &str| {
            Err(FgaError::NotWellDefined(format!(
                "entry {e} from {self:?} to {out:?}: {why}"
            )))
        };
        match (self.has_integral_lift(), out.has_integral_lift()) {
            (false, true) => return bad("divisible source into a discrete lift"),
            (true, true) if !e.is_integer() => return bad("non-integral entry"),
            _ => {}
        }
        if let Some(n) = self.modulus() {
            let scaled = e * from_int(&n);
            match out.modulus() {
                None => return bad("torsion source into a torsion-free target"),
                Some(m) => {
                    if !(scaled / from_int(&m)).is_integer() {
                        return bad("order of the image does not divide the source order");
                    }
                }
            }
        }
        Ok(match (self.has_integral_lift(), out.modulus()) {
            (true, Some(m)) => mod_rational(e, &m),
            _ => e.clone(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MixedGroup {
    kinds: Vec<CoordKind>,
}

impl MixedGroup {
    pub fn new(kinds: Vec<CoordKind>) -> Result<Self, FgaError> {
        for k in &kinds {
            if let CoordKind::Cyclic(n) = k {
                if *n <= BigInt::from(1) {
                    return Err(FgaError::InvalidGroup(format!("cyclic order {n} must exceed 1")));
                }
            }
        }
        Ok(MixedGroup { kinds })
    }

    pub fn kinds(&self) -> &[CoordKind] {
        &self.kinds
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn product(&self, other: &MixedGroup) -> MixedGroup {
        let mut kinds = self.kinds.clone();
        kinds.extend(other.kinds.iter().cloned());
        MixedGroup { kinds }
    }

    pub fn dual(&self) -> MixedGroup {
        MixedGroup {
            kinds: self.kinds.iter().map(CoordKind::dual).collect(),
        }
    }

    pub fn zero(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.len()]
    }

    pub fn normalize(&self, x: &[Rational]) -> Result<Vec<Rational>, FgaError> {
        if x.len() != self.len() {
            return Err(FgaError::DimensionMismatch(format!(
                "element of length {} for a group with {} coordinates",
                x.len(),
                self.len()
            )));
        }
        x.iter().zip(&self.kinds).map(|(v, k)| k.normalize(v)).collect()
    }

    pub fn add(&self, a: &[Rational], b: &[Rational]) -> Result<Vec<Rational>, FgaError> {
        if a.len() != b.len() {
            return Err(FgaError::DimensionMismatch("summands of different length".into()));
        }
        let s: Vec<Rational> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        self.normalize(&s)
    }

    pub fn neg(&self, a: &[Rational]) -> Result<Vec<Rational>, FgaError> {
        let s: Vec<Rational> = a.iter().map(|x| -x).collect();
        self.normalize(&s)
    }

    fn indices(&self, integral: bool) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.kinds[i].has_integral_lift() == integral)
            .collect()
    }

    /// Coordinates with integer lifts (`Z`, `Z/n`).
    pub fn discrete_indices(&self) -> Vec<usize> {
        self.indices(true)
    }

    /// Coordinates with rational lifts (`Q/Z`, `Q`).
    pub fn divisible_indices(&self) -> Vec<usize> {
        self.indices(false)
    }
}

/// Solution set of `f(x) == y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedSolution {
    pub particular: Vec<Rational>,
    pub kernel: KernelDescription,
}

/// `ker f` as the subgroup generated by `generators` plus the rational span of
/// `rational_basis` (vectors supported on divisible coordinates with exact
/// image zero).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct KernelDescription {
    pub generators: Vec<Vec<Rational>>,
    pub rational_basis: Vec<Vec<Rational>>,
    /// For sources with only integral-lift coordinates: Hermite basis of the
    /// lattice of lifts mapping to zero. Empty otherwise.
    pub lift_lattice: Vec<Vec<BigInt>>,
}

impl KernelDescription {
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty() && self.rational_basis.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedHom {
    source: MixedGroup,
    target: MixedGroup,
    matrix: QMatrix,
}

impl MixedHom {
    pub fn new(source: MixedGroup, target: MixedGroup, matrix: QMatrix) -> Result<Self, FgaError> {
        if matrix.rows() != target.len() || matrix.cols() != source.len() {
            return Err(FgaError::DimensionMismatch(format!(
                "matrix {}x{} for a hom between groups of size {} and {}",
                matrix.rows(),
                matrix.cols(),
                source.len(),
                target.len()
            )));
        }
        let mut m = matrix;
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let e = source.kinds[j].admit_entry(&target.kinds[i], &m[(i, j)])?;
                m[(i, j)] = e;
            }
        }
        Ok(MixedHom {
            source,
            target,
            matrix: m,
        })
    }

    pub fn zero(source: &MixedGroup, target: &MixedGroup) -> Self {
        MixedHom {
            source: source.clone(),
            target: target.clone(),
            matrix: QMatrix::zeros(target.len(), source.len()),
        }
    }

    pub fn identity(g: &MixedGroup) -> Self {
        MixedHom::new(g.clone(), g.clone(), QMatrix::identity(g.len())).expect("identity")
    }

    pub fn source(&self) -> &MixedGroup {
        &self.source
    }

    pub fn target(&self) -> &MixedGroup {
        &self.target
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.matrix
    }

    pub fn apply(&self, x: &[Rational]) -> Result<Vec<Rational>, FgaError> {
        let x = self.source.normalize(x)?;
        self.target.normalize(&self.matrix.mul_vec(&x))
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &MixedHom) -> Result<MixedHom, FgaError> {
        if inner.target != self.source {
            return Err(FgaError::GroupMismatch(
                "inner target differs from outer source".into(),
            ));
        }
        MixedHom::new(
            inner.source.clone(),
            self.target.clone(),
            self.matrix.mul(&inner.matrix)?,
        )
    }

    /// Block concatenation of homs out of a product: `(x, y) ↦ f(x) + g(y)`.
    pub fn hstack(&self, other: &MixedHom) -> Result<MixedHom, FgaError> {
        if self.target != other.target {
            return Err(FgaError::GroupMismatch("hstack targets differ".into()));
        }
        let a = self.source.len();
        let m = QMatrix::from_fn(self.target.len(), a + other.source.len(), |i, j| {
            if j < a {
                self.matrix[(i, j)].clone()
            } else {
                other.matrix[(i, j - a)].clone()
            }
        });
        MixedHom::new(self.source.product(&other.source), self.target.clone(), m)
    }

    /// Dual hom on character groups, `χ ↦ χ ∘ self`, under the pairing
    /// `<χ, h> = Σ χ_i h_i / n_i mod 1` (`n_i` the cyclic order, else 1).
    pub fn dual(&self) -> Result<MixedHom, FgaError> {
        let src = self.source.dual();
        let tgt = self.target.dual();
        let m = QMatrix::from_fn(self.source.len(), self.target.len(), |i, o| {
            let ni = self.source.kinds[i].cyclic_order();
            let no = self.target.kinds[o].cyclic_order();
            &self.matrix[(o, i)] * from_int(&ni) / from_int(&no)
        });
        MixedHom::new(tgt, src, m)
    }

    /// All `x` with `self(x) == y`, or `None` if `y` is not in the image.
    pub fn preimage(&self, y: &[Rational]) -> Result<Option<MixedSolution>, FgaError> {
        let y = self.target.normalize(y)?;
        let zi = self.source.discrete_indices();
        let qi = self.source.divisible_indices();
        let rows = self.target.len();
        let aux: Vec<(usize, BigInt)> = (0..rows)
            .filter_map(|o| self.target.kinds[o].modulus().map(|m| (o, m)))
            .collect();

        // E x_I + R x_Q = y with x_I = (x_Z, z) integral and x_Q rational.
        let ni = zi.len() + aux.len();
        let e = QMatrix::from_fn(rows, ni, |o, j| {
            if j < zi.len() {
                self.matrix[(o, zi[j])].clone()
            } else {
                let (row, m) = &aux[j - zi.len()];
                if *row == o {
                    -from_int(m)
                } else {
                    Rational::zero()
                }
            }
        });
        let r = self.matrix.select_columns(&qi);

        // Eliminate x_Q with an integral basis of the left null space of R.
        let proj: Vec<Vec<BigInt>> = if qi.is_empty() {
            (0..rows)
                .map(|i| (0..rows).map(|j| BigInt::from(u8::from(i == j))).collect())
                .collect()
        } else {
            r.left_nullspace().iter().map(|v| clear_denominators(v)).collect()
        };
        let mut sys_rows = Vec::with_capacity(proj.len());
        let mut rhs = Vec::with_capacity(proj.len());
        for p in &proj {
            let pq: Vec<Rational> = p.iter().map(from_int).collect();
            let row: Vec<Rational> = (0..ni)
                .map(|j| {
                    pq.iter()
                        .enumerate()
                        .fold(Rational::zero(), |acc, (o, c)| acc + c * &e[(o, j)])
                })
                .collect();
            let b = pq.iter().zip(&y).fold(Rational::zero(), |acc, (c, v)| acc + c * v);
            let scale = from_int(&lcm_of_denominators(row.iter().chain(std::iter::once(&b))));
            sys_rows.push(row.iter().map(|v| (v * &scale).to_integer()).collect::<Vec<_>>());
            rhs.push((b * scale).to_integer());
        }
        let a = IntMatrix::from_fn(sys_rows.len(), ni, |i, j| sys_rows[i][j].clone());
        let Some(sol) = solve_integer_linear(&a, &rhs)? else {
            return Ok(None);
        };

        let complete = |xi: &[BigInt], target: &[Rational]| -> Vec<Rational> {
            let xi_q: Vec<Rational> = xi.iter().map(from_int).collect();
            let ex = e.mul_vec(&xi_q);
            let resid: Vec<Rational> = target.iter().zip(&ex).map(|(t, v)| t - v).collect();
            let xq = r
                .solve(&resid)
                .expect("left null space elimination guarantees consistency");
            let mut x = vec![Rational::zero(); self.source.len()];
            for (k, &idx) in zi.iter().enumerate() {
                x[idx] = from_int(&xi[k]);
            }
            for (k, &idx) in qi.iter().enumerate() {
                x[idx] = xq[k].clone();
            }
            x
        };

        let zero_target = self.target.zero();
        let rational_basis: Vec<Vec<Rational>> = r
            .nullspace()
            .into_iter()
            .map(|v| {
                let mut x = vec![Rational::zero(); self.source.len()];
                for (k, &idx) in qi.iter().enumerate() {
                    x[idx] = v[k].clone();
                }
                x
            })
            .collect();

        let (particular, generators, lift_lattice) = if qi.is_empty() {
            // Canonical: Hermite basis of the lift lattice, particular reduced.
            let lifts: Vec<Vec<BigInt>> = sol
                .kernel_basis
                .iter()
                .map(|k| k[..zi.len()].to_vec())
                .collect();
            let basis = lattice_basis(&lifts, zi.len());
            let h = basis_matrix(&basis, zi.len());
            let p = reduce_against(&h, &sol.particular[..zi.len()]);
            let mut gens = Vec::new();
            for b in &basis {
                let g = self.source.normalize(&b.iter().map(from_int).collect::<Vec<_>>())?;
                if g.iter().any(|v| !v.is_zero()) {
                    gens.push(g);
                }
            }
            let p = self.source.normalize(&p.iter().map(from_int).collect::<Vec<_>>())?;
            (p, gens, basis)
        } else {
            let p = self.source.normalize(&complete(&sol.particular, &y))?;
            let mut gens = Vec::new();
            for k in &sol.kernel_basis {
                let g = self.source.normalize(&complete(k, &zero_target))?;
                if g.iter().any(|v| !v.is_zero()) && !gens.contains(&g) {
                    gens.push(g);
                }
            }
            (p, gens, Vec::new())
        };

        debug_assert_eq!(self.apply(&particular)?, y);
        Ok(Some(MixedSolution {
            particular,
            kernel: KernelDescription {
                generators,
                rational_basis,
                lift_lattice,
            },
        }))
    }

    pub fn kernel(&self) -> KernelDescription {
        self.preimage(&self.target.zero())
            .expect("zero has the right shape")
            .expect("zero is always in the image")
            .kernel
    }

    /// Rows and columns restricted to the given index lists.
    fn block(&self, rows: &[usize], cols: &[usize]) -> QMatrix {
        self.matrix.select_rows(rows).select_columns(cols)
    }

    fn restrict(&self, src: &[usize], tgt: &[usize]) -> MixedHom {
        let s = MixedGroup {
            kinds: src.iter().map(|&i| self.source.kinds[i].clone()).collect(),
        };
        let t = MixedGroup {
            kinds: tgt.iter().map(|&i| self.target.kinds[i].clone()).collect(),
        };
        MixedHom {
            source: s,
            target: t,
            matrix: self.block(tgt, src),
        }
    }

    /// Bijectivity for an endomorphism. Divisible coordinates never map into
    /// discrete ones, so the matrix is block triangular and it suffices to
    /// check the discrete block and the divisible block separately.
    pub fn is_automorphism(&self) -> bool {
        self.inverse().is_ok()
    }

    pub fn inverse(&self) -> Result<MixedHom, FgaError> {
        if self.source != self.target {
            return Err(FgaError::NotInvertible("source and target differ".into()));
        }
        let g = &self.source;
        let d = g.discrete_indices();
        let q = g.divisible_indices();
        let not_inv = |why: &str| Err(FgaError::NotInvertible(why.to_string()));

        // Discrete block: bijective iff trivial kernel and every generator hit.
        let f_dd = self.restrict(&d, &d);
        if !f_dd.kernel().is_trivial() {
            return not_inv("discrete block has a kernel");
        }
        let mut g_dd_cols = Vec::with_capacity(d.len());
        for k in 0..d.len() {
            let mut e = vec![Rational::zero(); d.len()];
            e[k] = Rational::from_integer(1.into());
            match f_dd.preimage(&e)? {
                Some(s) => g_dd_cols.push(s.particular),
                None => return not_inv("discrete block is not surjective"),
            }
        }
        let g_dd = QMatrix::from_fn(d.len(), d.len(), |i, j| g_dd_cols[j][i].clone());

        // Divisible block: Q/Z columns must act unimodularly, Q columns
        // invertibly; the rational inverse then has admissible entries.
        let circles: Vec<usize> = q
            .iter()
            .copied()
            .filter(|&i| g.kinds[i] == CoordKind::Circle)
            .collect();
        let circle_block = self.block(&circles, &circles);
        let det_ok = {
            let ints = IntMatrix::from_fn(circles.len(), circles.len(), |i, j| {
                circle_block[(i, j)].to_integer()
            });
            ints.is_unimodular()
        };
        if !det_ok {
            return not_inv("circle block is not unimodular");
        }
        let f_qq = self.block(&q, &q);
        let Some(g_qq) = f_qq.inverse() else {
            return not_inv("divisible block is singular");
        };
        let f_qd = self.block(&q, &d);
        let g_qd = g_qq.mul(&f_qd)?.mul(&g_dd)?;

        let n = g.len();
        let mut m = QMatrix::zeros(n, n);
        for (a, &i) in d.iter().enumerate() {
            for (b, &j) in d.iter().enumerate() {
                m[(i, j)] = g_dd[(a, b)].clone();
            }
        }
        for (a, &i) in q.iter().enumerate() {
            for (b, &j) in q.iter().enumerate() {
                m[(i, j)] = g_qq[(a, b)].clone();
            }
            for (b, &j) in d.iter().enumerate() {
                m[(i, j)] = -g_qd[(a, b)].clone();
            }
        }
        let inv = MixedHom::new(g.clone(), g.clone(), m)?;
        debug_assert_eq!(inv.compose(self)?, MixedHom::identity(g));
        Ok(inv)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.entries().iter().all(Zero::is_zero)
    }
}

/// Fractional part helper re-exported for callers that build circle
/// coordinates by hand.
pub fn circle_point(x: &Rational) -> Rational {
    frac(x)
}

/// Largest absolute numerator or denominator in a matrix, a cheap size
/// measure used by search heuristics.
pub fn height(m: &QMatrix) -> BigInt {
    m.entries()
        .iter()
        .map(|x| x.numer().abs().max(x.denom().abs()))
        .max()
        .unwrap_or_default()
}
