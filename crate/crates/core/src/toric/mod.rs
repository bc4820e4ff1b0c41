//! Toric varieties from fans: smoothness and completeness checks, the class
//! group via the divisor sequence `0 -> Z^d -> Z^t -> Cl -> 0`, and the Cox
//! quotient as a principal bundle.
//!
//! Homogeneous coordinates are indexed by rays.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::bundles::{
    bundle_from_lambda, rigidity_solve_with_radius, BundleError, CharacterMap, PrincipalBundle, Provenance,
    RigidityOutcome, StructureGroupDesc,
};
use crate::fga::{
    hermite_normal_form, smith_normal_form, FgaElement, FgaError, FgaGroup, FgaHom, IntMatrix, MixedHom, QMatrix,
    Rational,
};
use crate::picard::ManifoldDescriptor;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ToricError {
    #[error("invalid fan: {0}")]
    InvalidFan(String),
    #[error("fan is not smooth and complete: {0:?}")]
    NotSmoothComplete(FanReport),
    #[error("target does not match the toric variety: {0}")]
    Mismatch(String),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Fga(#[from] FgaError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<BigInt>>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Rays must be primitive and distinct, every cone index in range, and
    /// every ray used by some cone. Cone index lists are sorted.
    pub fn new(dim: usize, rays: Vec<Vec<BigInt>>, max_cones: Vec<Vec<usize>>) -> Result<Fan, ToricError> {
        let bad = |s: String| Err(ToricError::InvalidFan(s));
        if dim == 0 {
            return bad("dimension must be positive".into());
        }
        for (i, r) in rays.iter().enumerate() {
            if r.len() != dim {
                return bad(format!("ray {i} has {} coordinates, expected {dim}", r.len()));
            }
            let g = r.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            if !g.is_one() {
                return bad(format!("ray {i} is not primitive"));
            }
            if rays[..i].contains(r) {
                return bad(format!("ray {i} repeats an earlier ray"));
            }
        }
        let mut used = vec![false; rays.len()];
        let mut cones = Vec::with_capacity(max_cones.len());
        for (c, cone) in max_cones.iter().enumerate() {
            let mut cone = cone.clone();
            cone.sort_unstable();
            if cone.is_empty() {
                return bad(format!("cone {c} is empty"));
            }
            if cone.windows(2).any(|w| w[0] == w[1]) {
                return bad(format!("cone {c} repeats a ray"));
            }
            for &i in &cone {
                if i >= rays.len() {
                    return bad(format!("cone {c} refers to missing ray {i}"));
                }
                used[i] = true;
            }
            if cones.contains(&cone) {
                return bad(format!("cone {c} is listed twice"));
            }
            cones.push(cone);
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return bad(format!("ray {i} lies in no cone"));
        }
        Ok(Fan {
            dim,
            rays,
            max_cones: cones,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn ray_count(&self) -> usize {
        self.rays.len()
    }

    /// `t × d`, one row per ray.
    pub fn ray_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.rays.len(), self.dim, |i, j| self.rays[i][j].clone())
    }

    fn cone_matrix(&self, cone: &[usize]) -> IntMatrix {
        IntMatrix::from_fn(cone.len(), self.dim, |i, j| self.rays[cone[i]][j].clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FanReport {
    pub simplicial: bool,
    pub smooth: bool,
    pub complete: bool,
    pub failures: Vec<String>,
}

impl FanReport {
    pub fn passes(&self) -> bool {
        self.simplicial && self.smooth && self.complete
    }
}

fn rational_matrix(m: &IntMatrix) -> QMatrix {
    QMatrix::from_fn(m.rows(), m.cols(), |i, j| Rational::from_integer(m[(i, j)].clone()))
}

/// Normal vector of the hyperplane spanned by `rows` (`d-1` independent
/// vectors in `Z^d`).
fn facet_normal(rows: &IntMatrix) -> Vec<Rational> {
    rational_matrix(rows).nullspace().into_iter().next().expect("corank one")
}

fn dot(a: &[Rational], b: &[BigInt]) -> Rational {
    a.iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x * Rational::from_integer(y.clone()))
}

pub fn check_smooth_complete(f: &Fan) -> FanReport {
    let mut r = FanReport {
        simplicial: true,
        smooth: true,
        complete: true,
        failures: Vec::new(),
    };
    let d = f.dim;
    for cone in &f.max_cones {
        let m = f.cone_matrix(cone);
        let snf = smith_normal_form(&m);
        if snf.rank() < cone.len() {
            r.simplicial = false;
            r.failures.push(format!("cone {cone:?} is not simplicial (unsupported)"));
            continue;
        }
        if snf.diagonal().iter().any(|x| !x.is_one()) {
            r.smooth = false;
            r.failures.push(format!("cone {cone:?} is not smooth"));
        }
        if cone.len() != d {
            r.complete = false;
            r.failures.push(format!("cone {cone:?} is not full-dimensional"));
        }
    }
    if !r.simplicial {
        r.smooth = false;
        r.complete = false;
        return r;
    }
    if !r.complete {
        return r;
    }

    // Facet pairing: every facet in exactly two cones, on opposite sides.
    let mut facets: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
    for (c, cone) in f.max_cones.iter().enumerate() {
        for skip in 0..cone.len() {
            let facet: Vec<usize> = cone.iter().enumerate().filter(|&(k, _)| k != skip).map(|(_, &i)| i).collect();
            facets.entry(facet).or_default().push((c, cone[skip]));
        }
    }
    for (facet, owners) in &facets {
        if owners.len() != 2 {
            r.complete = false;
            r.failures.push(format!("facet {facet:?} lies in {} maximal cones", owners.len()));
            continue;
        }
        let n = if facet.is_empty() {
            vec![Rational::one()]
        } else {
            facet_normal(&f.cone_matrix(facet))
        };
        let s0 = dot(&n, &f.rays[owners[0].1]);
        let s1 = dot(&n, &f.rays[owners[1].1]);
        if (s0.is_positive() && s1.is_positive()) || (s0.is_negative() && s1.is_negative()) {
            r.complete = false;
            r.failures.push(format!("cones across facet {facet:?} overlap"));
        }
    }
    if !r.complete {
        return r;
    }

    // Covering degree: a generic point lies in exactly one open cone.
    let inverses: Vec<QMatrix> = f
        .max_cones
        .iter()
        .map(|c| rational_matrix(&f.cone_matrix(c)).transpose().inverse().expect("simplicial"))
        .collect();
    for base in [1009i64, 7919, 104_729, 1_299_709] {
        let point: Vec<Rational> = (0..d)
            .map(|i| Rational::from_integer(BigInt::from(base).pow(i as u32) * if i % 2 == 0 { 1 } else { -1 }))
            .collect();
        let mut generic = true;
        let mut hits = 0;
        for inv in &inverses {
            let coeffs = inv.mul_vec(&point);
            if coeffs.iter().any(Zero::is_zero) {
                generic = false;
                break;
            }
            if coeffs.iter().all(Signed::is_positive) {
                hits += 1;
            }
        }
        if generic {
            if hits != 1 {
                r.complete = false;
                r.failures.push(format!("a generic point lies in {hits} maximal cones"));
            }
            return r;
        }
    }
    r.complete = false;
    r.failures.push("no generic test point found".into());
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxData {
    pub class_group: FgaGroup,
    /// `Z^t -> Cl`, ray `ρ` to the class of `D_ρ`.
    pub quotient_map: FgaHom,
    pub canonical_class: FgaElement,
    pub h_dim: usize,
    /// Unimodular change from the Smith basis of the free part of `Cl` to the
    /// Hermite-normalized one used in `quotient_map`.
    pub basis_change: IntMatrix,
}

pub fn cox_data(f: &Fan) -> Result<CoxData, ToricError> {
    let report = check_smooth_complete(f);
    if !report.passes() {
        return Err(ToricError::NotSmoothComplete(report));
    }
    let r = f.ray_matrix();
    let t = f.ray_count();
    let snf = smith_normal_form(&r);
    let diag = snf.diagonal();
    let rank = snf.rank();
    let free_rows: Vec<Vec<BigInt>> = (rank..t).map(|i| snf.u.row(i).to_vec()).collect();
    let free = IntMatrix::from_fn(free_rows.len(), t, |i, j| free_rows[i][j].clone());
    let (h, w) = hermite_normal_form(&free);
    let torsion: Vec<usize> = (0..rank).filter(|&i| !diag[i].is_one()).collect();
    let factors: Vec<BigInt> = torsion.iter().map(|&i| diag[i].clone()).collect();
    let class_group = FgaGroup::new(t - rank, factors)?;
    let q = IntMatrix::from_fn(class_group.generator_count(), t, |i, j| {
        if i < h.rows() {
            h[(i, j)].clone()
        } else {
            snf.u[(torsion[i - h.rows()], j)].clone()
        }
    });
    let quotient_map = FgaHom::new(FgaGroup::free(t), class_group.clone(), q)?;
    let minus_ones = FgaGroup::free(t).element(&vec![BigInt::from(-1); t], &[])?;
    let canonical_class = quotient_map.apply(&minus_ones)?;
    Ok(CoxData {
        class_group,
        quotient_map,
        canonical_class,
        h_dim: t - f.dim,
        basis_change: w,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoxCertificate {
    pub lambda_isomorphism: bool,
    pub canonical_in_image: bool,
    pub rigidity_identity: bool,
    /// Restriction of characters of `(C^×)^t` to `H`, in Picard coordinates.
    pub cox_map: IntMatrix,
    pub cox_kernel_rank: usize,
}

impl CoxCertificate {
    pub fn all_pass(&self) -> bool {
        self.lambda_isomorphism && self.canonical_in_image && self.rigidity_identity
    }
}

/// The Cox quotient `C^t \ Z -> X` as a principal `H`-bundle with
/// `Ĥ = Cl(X)`, checked against `target`.
pub fn audin_cox_bundle(f: &Fan, target: &ManifoldDescriptor) -> Result<(PrincipalBundle, CoxCertificate), ToricError> {
    let cox = cox_data(f)?;
    let mismatch = |s: String| Err(ToricError::Mismatch(s));
    let cl = &cox.class_group;
    if target.dim != f.dim {
        return mismatch(format!("dimension {} vs fan dimension {}", target.dim, f.dim));
    }
    if target.ns_free_rank != cl.free_rank() || target.ns_torsion != cl.torsion_subgroup() {
        return mismatch(format!(
            "Picard group Z^{} + {} vs class group {cl}",
            target.ns_free_rank, target.ns_torsion
        ));
    }
    if target.pic0_dim != 0 || !target.pi1_ab.is_trivial() {
        return mismatch("toric varieties are simply connected with trivial Pic₀".into());
    }
    let k = target.pic_group().normalize(&target.canonical_class).map_err(ToricError::Fga)?;
    if k.free != cox.canonical_class.free_part() || k.torsion != cox.canonical_class.torsion_part() {
        return mismatch(format!("canonical class {k} vs {:?}", cox.canonical_class.coords()));
    }

    let p = cl.free_rank();
    let group = StructureGroupDesc::torus(p);
    let pic = target.pic_group();
    let hom = MixedHom::new(group.character_group(), pic.mixed(), QMatrix::identity(p))?;
    let char_map = CharacterMap::new(group, target.clone(), hom, 0)?;
    let bundle = PrincipalBundle::new(
        format!("cox({})", target.name),
        char_map,
        Provenance::Custom { label: "audin-cox".into() },
    );

    let lambda_isomorphism = bundle.char_map.hom().is_automorphism();
    let canonical_in_image = bundle.char_map.preimage(&target.canonical_class)?.is_some();
    let reference = bundle_from_lambda(target, &bundle.char_map)?;
    let rigidity_identity = matches!(
        rigidity_solve_with_radius(&bundle, &reference, 0)?,
        RigidityOutcome::Isomorphic { ref xi, .. } if *xi == IntMatrix::identity(p)
    );
    let cox_map = cox.quotient_map.matrix().clone();
    let cox_kernel_rank = cox.quotient_map.kernel().free_rank();
    Ok((
        bundle,
        CoxCertificate {
            lambda_isomorphism,
            canonical_in_image,
            rigidity_identity,
            cox_map,
            cox_kernel_rank,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fan(d: usize, rays: &[&[i64]], cones: &[&[usize]]) -> Result<Fan, ToricError> {
        Fan::new(
            d,
            rays.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            cones.iter().map(|c| c.to_vec()).collect(),
        )
    }

    fn p2() -> Fan {
        fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2], &[0, 2]]).unwrap()
    }

    #[test]
    fn projective_plane() {
        let r = check_smooth_complete(&p2());
        assert!(r.passes(), "{r:?}");
        let c = cox_data(&p2()).unwrap();
        assert_eq!(c.class_group, FgaGroup::free(1));
        assert_eq!(c.canonical_class.coords(), &[BigInt::from(-3)][..]);
        assert_eq!(c.h_dim, 1);
    }

    #[test]
    fn missing_cone_is_incomplete() {
        let f = fan(2, &[&[1, 0], &[0, 1], &[-1, -1]], &[&[0, 1], &[1, 2]]).unwrap();
        let r = check_smooth_complete(&f);
        assert!(r.smooth && !r.complete);
    }

    #[test]
    fn singular_cone() {
        let f = fan(2, &[&[1, 0], &[1, 2]], &[&[0, 1]]).unwrap();
        let r = check_smooth_complete(&f);
        assert!(!r.smooth);
    }

    #[test]
    fn overlapping_cones_are_caught() {
        // Two copies of the first quadrant's halves glued twice around.
        let f = fan(
            2,
            &[&[1, 0], &[0, 1], &[-1, 0], &[0, -1], &[1, 1]],
            &[&[0, 1], &[1, 2], &[2, 3], &[3, 0], &[0, 4], &[4, 1]],
        )
        .unwrap();
        assert!(!check_smooth_complete(&f).complete);
    }

    #[test]
    fn rejects_bad_fans() {
        assert!(fan(2, &[&[2, 0]], &[&[0]]).is_err());
        assert!(fan(2, &[&[1, 0], &[1, 0]], &[&[0, 1]]).is_err());
        assert!(fan(2, &[&[1, 0], &[0, 1]], &[&[0]]).is_err());
        assert!(fan(2, &[&[1, 0]], &[&[3]]).is_err());
    }

    #[test]
    fn p1_is_complete() {
        let f = fan(1, &[&[1], &[-1]], &[&[0], &[1]]).unwrap();
        assert!(check_smooth_complete(&f).passes());
        let c = cox_data(&f).unwrap();
        assert_eq!(c.canonical_class.coords(), &[BigInt::from(-2)][..]);
    }
}
