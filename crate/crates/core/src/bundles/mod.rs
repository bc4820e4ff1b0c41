//! Principal bundles over a fixed base, identified with their character maps.

mod ops;
mod rigidity;
mod surjective;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::fga::{CoordKind, FgaError, FgaGroup, FgaHom, IntMatrix, MixedGroup, MixedHom, QMatrix, Rational};
use crate::picard::{ManifoldDescriptor, PicElement, PicardError};

pub use ops::{
    adjunction_character, bundle_from_lambda, direct_sum, induced_bundle, obstruction_check, rank1_roots,
    twist_bundle, whitney_sum_bundle, CyStructureSet, Roots,
};
pub use rigidity::{rigidity_solve, rigidity_solve_with_radius, search_radius_from_env, RigidityOutcome, DEFAULT_SEARCH_RADIUS};
pub use surjective::{
    construct_surjective_bundle, default_pic0_samples, surjectivity_certificate, GeneratorCheck,
    SurjectivityCertificate,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BundleError {
    #[error(transparent)]
    Fga(#[from] FgaError),
    #[error("invalid base: {0}")]
    Base(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl From<PicardError> for BundleError {
    fn from(e: PicardError) -> Self {
        match e {
            PicardError::Fga(f) => BundleError::Fga(f),
            other => BundleError::Base(other.to_string()),
        }
    }
}

/// Abelian structure group `π × (C^×)^a × C^b × G₀` with `π` a finitely
/// generated abelian discrete factor and `G₀` a Cousin group (which has no
/// characters).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct StructureGroupDesc {
    torus_rank: usize,
    vector_rank: usize,
    cousin_dim: usize,
    pi1_factor: Option<FgaGroup>,
}

impl StructureGroupDesc {
    pub fn new(torus_rank: usize, vector_rank: usize, cousin_dim: usize, pi1_factor: Option<FgaGroup>) -> Self {
        StructureGroupDesc {
            torus_rank,
            vector_rank,
            cousin_dim,
            pi1_factor: pi1_factor.filter(|g| !g.is_trivial()),
        }
    }

    pub fn torus(rank: usize) -> Self {
        Self::new(rank, 0, 0, None)
    }

    pub fn pi1(group: FgaGroup) -> Self {
        Self::new(0, 0, 0, Some(group))
    }

    pub fn torus_rank(&self) -> usize {
        self.torus_rank
    }

    pub fn vector_rank(&self) -> usize {
        self.vector_rank
    }

    pub fn cousin_dim(&self) -> usize {
        self.cousin_dim
    }

    pub fn pi1_factor(&self) -> Option<&FgaGroup> {
        self.pi1_factor.as_ref()
    }

    fn pi1_invariants(&self) -> &[BigInt] {
        self.pi1_factor.as_ref().map_or(&[], |g| g.invariant_factors())
    }

    pub fn pi1_torsion_rank(&self) -> usize {
        self.pi1_invariants().len()
    }

    pub fn pi1_free_rank(&self) -> usize {
        self.pi1_factor.as_ref().map_or(0, FgaGroup::free_rank)
    }

    pub fn is_pure_torus(&self) -> bool {
        self.vector_rank == 0 && self.cousin_dim == 0 && self.pi1_factor.is_none()
    }

    /// Every representable structure group is abelian, so `χ_𝔥` is trivial.
    pub fn is_abelian(&self) -> bool {
        true
    }

    /// Offsets of the torsion, circle and vector blocks in character (and
    /// model) coordinates.
    pub fn torsion_offset(&self) -> usize {
        self.torus_rank
    }

    pub fn circle_offset(&self) -> usize {
        self.torus_rank + self.pi1_torsion_rank()
    }

    pub fn vector_offset(&self) -> usize {
        self.circle_offset() + self.pi1_free_rank()
    }

    pub fn coordinate_count(&self) -> usize {
        self.vector_offset() + self.vector_rank
    }

    fn kinds(&self, torus: CoordKind, pi_free: CoordKind) -> MixedGroup {
        let mut kinds = vec![torus; self.torus_rank];
        kinds.extend(self.pi1_invariants().iter().map(|n| CoordKind::Cyclic(n.clone())));
        kinds.extend(std::iter::repeat(pi_free).take(self.pi1_free_rank()));
        kinds.extend(std::iter::repeat(CoordKind::Rational).take(self.vector_rank));
        MixedGroup::new(kinds).expect("canonical invariant factors")
    }

    /// Rational model of the character group:
    /// `Z^a + T + (Q/Z)^q + Q^b`.
    pub fn character_group(&self) -> MixedGroup {
        self.kinds(CoordKind::Integer, CoordKind::Circle)
    }

    /// Rational model of the group itself: torsion points of the torus,
    /// the discrete factor, and rational points of `C^b`:
    /// `(Q/Z)^a + T + Z^q + Q^b`.
    pub fn model_group(&self) -> MixedGroup {
        self.kinds(CoordKind::Circle, CoordKind::Integer)
    }
}

/// A character, in character-group coordinates.
pub type Character = Vec<Rational>;

/// `λ: Ĥ -> Pic(X)`, together with the dimension of the part of the
/// kernel made of non-unitary characters (not represented as elements).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterMap {
    group: StructureGroupDesc,
    target: ManifoldDescriptor,
    hom: MixedHom,
    continuous_kernel_dim: usize,
}

impl CharacterMap {
    pub fn new(
        group: StructureGroupDesc,
        target: ManifoldDescriptor,
        hom: MixedHom,
        continuous_kernel_dim: usize,
    ) -> Result<Self, BundleError> {
        if hom.source() != &group.character_group() {
            return Err(BundleError::Mismatch("hom source is not the character group".into()));
        }
        if hom.target() != &target.pic_group().mixed() {
            return Err(BundleError::Mismatch("hom target is not the Picard group of the base".into()));
        }
        if group.is_pure_torus() && continuous_kernel_dim != 0 {
            return Err(BundleError::Mismatch(
                "a torus has no non-unitary character directions".into(),
            ));
        }
        Ok(CharacterMap {
            group,
            target,
            hom,
            continuous_kernel_dim,
        })
    }

    /// From the three blocks: `free_block` (`p × a`, torus characters to NS
    /// free coordinates), `torsion_block` (NS torsion rows, columns over
    /// torus then π-torsion characters) and `pic0_block` (`2g ×` all
    /// characters). Other entries vanish by admissibility.
    pub fn from_blocks(
        group: StructureGroupDesc,
        target: ManifoldDescriptor,
        free_block: &IntMatrix,
        torsion_block: &IntMatrix,
        pic0_block: &QMatrix,
        continuous_kernel_dim: usize,
    ) -> Result<Self, BundleError> {
        let pic = target.pic_group();
        let a = group.torus_rank();
        let ta = group.circle_offset();
        let n = group.coordinate_count();
        let (p, t, g2) = (pic.free_rank, pic.torsion.torsion_rank(), 2 * pic.pic0_dim);
        let shape = |name: &str, r: usize, c: usize, er: usize, ec: usize| {
            if r != er || c != ec {
                Err(BundleError::Mismatch(format!(
                    "{name} is {r}x{c}, expected {er}x{ec}"
                )))
            } else {
                Ok(())
            }
        };
        shape("free_block", free_block.rows(), free_block.cols(), p, a)?;
        shape("torsion_block", torsion_block.rows(), torsion_block.cols(), t, ta)?;
        shape("pic0_block", pic0_block.rows(), pic0_block.cols(), g2, n)?;
        let m = QMatrix::from_fn(p + t + g2, n, |i, j| {
            if i < p {
                if j < a {
                    Rational::from_integer(free_block[(i, j)].clone())
                } else {
                    Rational::zero()
                }
            } else if i < p + t {
                if j < ta {
                    Rational::from_integer(torsion_block[(i - p, j)].clone())
                } else {
                    Rational::zero()
                }
            } else {
                pic0_block[(i - p - t, j)].clone()
            }
        });
        let hom = MixedHom::new(group.character_group(), pic.mixed(), m)?;
        CharacterMap::new(group, target, hom, continuous_kernel_dim)
    }

    pub fn group(&self) -> &StructureGroupDesc {
        &self.group
    }

    pub fn target(&self) -> &ManifoldDescriptor {
        &self.target
    }

    pub fn hom(&self) -> &MixedHom {
        &self.hom
    }

    pub fn continuous_kernel_dim(&self) -> usize {
        self.continuous_kernel_dim
    }

    pub fn free_block(&self) -> IntMatrix {
        let p = self.target.ns_free_rank;
        let m = self.hom.matrix();
        IntMatrix::from_fn(p, self.group.torus_rank(), |i, j| m[(i, j)].to_integer())
    }

    pub fn torsion_block_matrix(&self) -> IntMatrix {
        let p = self.target.ns_free_rank;
        let t = self.target.ns_torsion.torsion_rank();
        let m = self.hom.matrix();
        IntMatrix::from_fn(t, self.group.circle_offset(), |i, j| m[(p + i, j)].to_integer())
    }

    /// Torus and π-torsion characters to NS torsion, as a hom of finitely
    /// generated groups.
    pub fn torsion_block(&self) -> Result<FgaHom, BundleError> {
        let source = FgaGroup::new(self.group.torus_rank(), self.group.pi1_invariants().to_vec())?;
        Ok(FgaHom::new(
            source,
            self.target.ns_torsion.clone(),
            self.torsion_block_matrix(),
        )?)
    }

    pub fn pic0_block(&self) -> QMatrix {
        let pic = self.target.pic_group();
        let rows: Vec<usize> = (pic.pic0_offset()..pic.coordinate_count()).collect();
        self.hom.matrix().select_rows(&rows)
    }

    pub fn apply(&self, chi: &[Rational]) -> Result<PicElement, BundleError> {
        let v = self.hom.apply(chi)?;
        Ok(self.target.pic_group().from_coords(&v)?)
    }

    /// Image of the `i`-th basis character.
    pub fn column_class(&self, i: usize) -> PicElement {
        let pic = self.target.pic_group();
        pic.from_coords(&self.hom.matrix().column(i)).expect("columns are admissible")
    }

    pub fn preimage(&self, class: &PicElement) -> Result<Option<crate::fga::MixedSolution>, BundleError> {
        let y = self.target.pic_group().to_coords(class)?;
        Ok(self.hom.preimage(&y)?)
    }
}

/// How a bundle was produced; parents are referred to by name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    WhitneySum,
    UniversalCover,
    Induced { parent: String },
    Twist { parent: String },
    DirectSum { parts: Vec<String> },
    Custom { label: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalBundle {
    pub name: String,
    pub char_map: CharacterMap,
    pub provenance: Provenance,
}

impl PrincipalBundle {
    pub fn new(name: impl Into<String>, char_map: CharacterMap, provenance: Provenance) -> Self {
        PrincipalBundle {
            name: name.into(),
            char_map,
            provenance,
        }
    }

    pub fn group(&self) -> &StructureGroupDesc {
        self.char_map.group()
    }

    pub fn base(&self) -> &ManifoldDescriptor {
        self.char_map.target()
    }
}

/// Homomorphism of structure groups, acting on their rational models.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupHom {
    source: StructureGroupDesc,
    target: StructureGroupDesc,
    map: MixedHom,
}

impl GroupHom {
    pub fn new(source: StructureGroupDesc, target: StructureGroupDesc, matrix: QMatrix) -> Result<Self, BundleError> {
        let map = MixedHom::new(source.model_group(), target.model_group(), matrix)?;
        Ok(GroupHom { source, target, map })
    }

    pub fn identity(g: &StructureGroupDesc) -> Self {
        GroupHom {
            source: g.clone(),
            target: g.clone(),
            map: MixedHom::identity(&g.model_group()),
        }
    }

    pub fn source(&self) -> &StructureGroupDesc {
        &self.source
    }

    pub fn target(&self) -> &StructureGroupDesc {
        &self.target
    }

    pub fn map(&self) -> &MixedHom {
        &self.map
    }

    /// `self ∘ inner`
    pub fn compose(&self, inner: &GroupHom) -> Result<GroupHom, BundleError> {
        if inner.target != self.source {
            return Err(BundleError::Mismatch("inner target differs from outer source".into()));
        }
        Ok(GroupHom {
            source: inner.source.clone(),
            target: self.target.clone(),
            map: self.map.compose(&inner.map)?,
        })
    }

    /// `χ ↦ χ ∘ self` on character groups.
    pub fn dual(&self) -> Result<MixedHom, BundleError> {
        Ok(self.map.dual()?)
    }

    pub fn inverse(&self) -> Result<GroupHom, BundleError> {
        if self.source != self.target {
            return Err(BundleError::Precondition("not an endomorphism".into()));
        }
        Ok(GroupHom {
            source: self.source.clone(),
            target: self.target.clone(),
            map: self.map.inverse()?,
        })
    }

    pub fn is_automorphism(&self) -> bool {
        self.source == self.target && self.map.is_automorphism()
    }
}
