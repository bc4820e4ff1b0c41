//! Picard data of a compact complex manifold, taken as input rather than
//! computed: Néron-Severi rank and torsion, the Pic₀ torus, π₁ abelianized.

mod catalog;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bundles::CharacterMap;
use crate::fga::rational::QMatrix;
use crate::fga::{CoordKind, FgaError, FgaGroup, MixedGroup, MixedHom, Rational};

pub use catalog::{catalog, catalog_names, lookup};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PicardError {
    #[error("Pic₀ realization requires Kähler hypothesis")]
    NotKahler,
    #[error("descriptor {name} is inconsistent: {violations:?}")]
    Invalid { name: String, violations: Vec<String> },
    #[error(transparent)]
    Fga(#[from] FgaError),
}

/// Line-bundle class: NS free coordinates, NS torsion coordinates, and a
/// rational point of Pic₀ in `[0,1)^{2g}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct PicElement {
    pub free: Vec<BigInt>,
    pub torsion: Vec<BigInt>,
    pub pic0: Vec<Rational>,
}

impl PicElement {
    pub fn new(free: Vec<BigInt>, torsion: Vec<BigInt>, pic0: Vec<Rational>) -> Self {
        PicElement { free, torsion, pic0 }
    }

    pub fn is_zero(&self) -> bool {
        self.free.iter().all(Zero::is_zero)
            && self.torsion.iter().all(Zero::is_zero)
            && self.pic0.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for PicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(", ");
        write!(f, "({})", join(self.free.iter().map(|x| x.to_string()).collect()))?;
        if !self.torsion.is_empty() {
            write!(f, " tor ({})", join(self.torsion.iter().map(|x| x.to_string()).collect()))?;
        }
        if !self.pic0.is_empty() {
            write!(f, " pic0 ({})", join(self.pic0.iter().map(|x| x.to_string()).collect()))?;
        }
        Ok(())
    }
}

/// Shape of `Pic(X) = Z^p + T + (Q/Z)^{2g}` (rational points of Pic₀ only).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PicGroup {
    pub free_rank: usize,
    pub torsion: FgaGroup,
    pub pic0_dim: usize,
}

impl PicGroup {
    pub fn mixed(&self) -> MixedGroup {
        let mut kinds = vec![CoordKind::Integer; self.free_rank];
        kinds.extend(
            self.torsion
                .invariant_factors()
                .iter()
                .map(|n| CoordKind::Cyclic(n.clone())),
        );
        kinds.extend(std::iter::repeat(CoordKind::Circle).take(2 * self.pic0_dim));
        MixedGroup::new(kinds).expect("invariant factors exceed 1")
    }

    pub fn coordinate_count(&self) -> usize {
        self.free_rank + self.torsion.torsion_rank() + 2 * self.pic0_dim
    }

    pub fn torsion_offset(&self) -> usize {
        self.free_rank
    }

    pub fn pic0_offset(&self) -> usize {
        self.free_rank + self.torsion.torsion_rank()
    }

    pub fn to_coords(&self, x: &PicElement) -> Result<Vec<Rational>, FgaError> {
        if x.free.len() != self.free_rank
            || x.torsion.len() != self.torsion.torsion_rank()
            || x.pic0.len() != 2 * self.pic0_dim
        {
            return Err(FgaError::DimensionMismatch(format!(
                "class with shape ({}, {}, {}) in a Picard group of shape ({}, {}, {})",
                x.free.len(),
                x.torsion.len(),
                x.pic0.len(),
                self.free_rank,
                self.torsion.torsion_rank(),
                2 * self.pic0_dim
            )));
        }
        let mut v: Vec<Rational> = x.free.iter().chain(&x.torsion).map(|n| Rational::from_integer(n.clone())).collect();
        v.extend(x.pic0.iter().cloned());
        self.mixed().normalize(&v)
    }

    pub fn from_coords(&self, v: &[Rational]) -> Result<PicElement, FgaError> {
        let v = self.mixed().normalize(v)?;
        let t = self.torsion_offset();
        let z = self.pic0_offset();
        Ok(PicElement {
            free: v[..t].iter().map(|x| x.to_integer()).collect(),
            torsion: v[t..z].iter().map(|x| x.to_integer()).collect(),
            pic0: v[z..].to_vec(),
        })
    }

    pub fn normalize(&self, x: &PicElement) -> Result<PicElement, FgaError> {
        self.from_coords(&self.to_coords(x)?)
    }

    pub fn zero(&self) -> PicElement {
        PicElement {
            free: vec![BigInt::zero(); self.free_rank],
            torsion: vec![BigInt::zero(); self.torsion.torsion_rank()],
            pic0: vec![Rational::zero(); 2 * self.pic0_dim],
        }
    }

    pub fn add(&self, a: &PicElement, b: &PicElement) -> Result<PicElement, FgaError> {
        let s = self.mixed().add(&self.to_coords(a)?, &self.to_coords(b)?)?;
        self.from_coords(&s)
    }

    pub fn neg(&self, a: &PicElement) -> Result<PicElement, FgaError> {
        let s = self.mixed().neg(&self.to_coords(a)?)?;
        self.from_coords(&s)
    }

    pub fn scale(&self, a: &PicElement, k: &BigInt) -> Result<PicElement, FgaError> {
        let k = Rational::from_integer(k.clone());
        let s: Vec<Rational> = self.to_coords(a)?.iter().map(|x| x * &k).collect();
        self.from_coords(&s)
    }

    /// Class with a single unit coordinate.
    pub fn basis_class(&self, i: usize) -> PicElement {
        let mut v = vec![Rational::zero(); self.coordinate_count()];
        v[i] = Rational::from_integer(1.into());
        self.from_coords(&v).expect("unit vector")
    }
}

/// Unitary character of `π₁(X)_ab = Z^q + T₁`: exponents in `[0,1)` on the
/// free part, and the torsion part encoded as an element of `T₁` via
/// `χ_k(1) = exp(2πik/n)` on each `Z/n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pi1Character {
    pub free_values: Vec<Rational>,
    pub torsion_values: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ManifoldDescriptor {
    pub name: String,
    pub dim: usize,
    pub kahler: bool,
    pub ns_free_rank: usize,
    pub ns_torsion: FgaGroup,
    pub pic0_dim: usize,
    pub pi1_ab: FgaGroup,
    pub omega1c_dim: usize,
    pub canonical_class: PicElement,
}

impl ManifoldDescriptor {
    pub fn pic_group(&self) -> PicGroup {
        PicGroup {
            free_rank: self.ns_free_rank,
            torsion: self.ns_torsion.clone(),
            pic0_dim: self.pic0_dim,
        }
    }

    pub fn pi1_free_rank(&self) -> usize {
        self.pi1_ab.free_rank()
    }

    pub fn pi1_torsion(&self) -> FgaGroup {
        self.pi1_ab.torsion_subgroup()
    }

    /// `[K_X]` in Picard coordinates.
    pub fn canonical_coords(&self) -> Result<Vec<Rational>, FgaError> {
        self.pic_group().to_coords(&self.canonical_class)
    }

    /// Minimal number of generators of the full NS group, torsion included.
    pub fn ns_generator_count(&self) -> usize {
        self.ns_free_rank + self.ns_torsion.torsion_rank()
    }

    pub fn require_valid(&self) -> Result<(), PicardError> {
        let violations = validate(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(PicardError::Invalid {
                name: self.name.clone(),
                violations,
            })
        }
    }
}

/// Consistency relations between the Picard data, π₁ and holomorphic forms.
pub fn validate(m: &ManifoldDescriptor) -> Vec<String> {
    let mut out = Vec::new();
    if !m.ns_torsion.is_finite() {
        out.push("ns_torsion must be a finite group".to_string());
    }
    if m.kahler && m.pi1_free_rank() != 2 * m.pic0_dim {
        out.push(format!(
            "kahler: pi1 free rank {} must equal 2 * pic0_dim = {}",
            m.pi1_free_rank(),
            2 * m.pic0_dim
        ));
    }
    if m.kahler && m.omega1c_dim != m.pic0_dim {
        out.push(format!(
            "kahler: omega1c_dim {} must equal pic0_dim {}",
            m.omega1c_dim, m.pic0_dim
        ));
    }
    if m.ns_torsion.torsion_subgroup() != m.pi1_torsion() {
        out.push(format!(
            "ns torsion {} must be isomorphic to the pi1 torsion {}",
            m.ns_torsion.torsion_subgroup(),
            m.pi1_torsion()
        ));
    }
    let pic = m.pic_group();
    match pic.to_coords(&m.canonical_class) {
        Err(e) => out.push(format!("canonical class: {e}")),
        Ok(v) => {
            if pic.from_coords(&v).as_ref() != Ok(&m.canonical_class) {
                out.push("canonical class is not in reduced form".to_string());
            }
        }
    }
    out
}

/// Character map of `X̃ -> X`, a principal `π₁(X)`-bundle: torsion
/// characters go to NS torsion, free unitary characters to rational Pic₀,
/// and the non-unitary directions form a kernel of the recorded dimension.
pub fn universal_cover_character_map(m: &ManifoldDescriptor) -> Result<CharacterMap, PicardError> {
    if !m.kahler {
        return Err(PicardError::NotKahler);
    }
    m.require_valid()?;
    let group = crate::bundles::StructureGroupDesc::pi1(m.pi1_ab.clone());
    let source = group.character_group();
    let pic = m.pic_group();
    let target = pic.mixed();
    // Source: [T₁ torsion | (Q/Z)^q]; target: [Z^p | NS torsion | (Q/Z)^{2g}].
    let t = m.ns_torsion.torsion_rank();
    let q = m.pi1_free_rank();
    let matrix = QMatrix::from_fn(target.len(), source.len(), |i, j| {
        let hit = if j < t {
            i == pic.torsion_offset() + j
        } else {
            i == pic.pic0_offset() + (j - t)
        };
        Rational::from_integer(BigInt::from(u8::from(hit)))
    });
    debug_assert_eq!(source.len(), t + q);
    let hom = MixedHom::new(source, target, matrix)?;
    Ok(CharacterMap::new(group, m.clone(), hom, m.omega1c_dim)?)
}

impl From<crate::bundles::BundleError> for PicardError {
    fn from(e: crate::bundles::BundleError) -> Self {
        match e {
            crate::bundles::BundleError::Fga(f) => PicardError::Fga(f),
            other => PicardError::Invalid {
                name: "character map".into(),
                violations: vec![other.to_string()],
            },
        }
    }
}
