//! Connected abelian structure groups `(C^×)^a × C^b × G₀` and when they
//! carry a CY bundle with surjective character map.

use num_bigint::BigInt;

use crate::bundles::{
    direct_sum, induced_bundle, BundleError, CharacterMap, GroupHom, PrincipalBundle, Provenance, StructureGroupDesc,
};
use crate::fga::{MixedGroup, MixedHom, QMatrix, Rational};
use crate::picard::{universal_cover_character_map, ManifoldDescriptor};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RmGroup {
    pub torus_rank: usize,
    pub vector_rank: usize,
    pub cousin_label: String,
    pub cousin_dim: usize,
}

impl RmGroup {
    pub fn new(torus_rank: usize, vector_rank: usize, cousin_dim: usize) -> Self {
        RmGroup {
            torus_rank,
            vector_rank,
            cousin_label: if cousin_dim == 0 { String::new() } else { "G0".into() },
            cousin_dim,
        }
    }

    pub fn structure_group(&self) -> StructureGroupDesc {
        StructureGroupDesc::new(self.torus_rank, self.vector_rank, self.cousin_dim, None)
    }
}

/// `Ĝ = Z^a` (torus) plus a `b`-dimensional continuous part; the Cousin
/// factor has no characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterGroupDesc {
    pub lattice_rank: usize,
    pub continuous_dim: usize,
    pub cousin_contribution: usize,
    pub model: MixedGroup,
}

pub fn character_group(g: &RmGroup) -> CharacterGroupDesc {
    CharacterGroupDesc {
        lattice_rank: g.torus_rank,
        continuous_dim: g.vector_rank,
        cousin_contribution: 0,
        model: g.structure_group().character_group(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sufficient,
    Insufficient(String),
    Unknown(String),
}

/// Torus rank needed: generators of the whole NS group, torsion included.
pub fn required_torus_rank(base: &ManifoldDescriptor) -> usize {
    base.ns_generator_count()
}

pub fn sufficiency_check(g: &RmGroup, base: &ManifoldDescriptor) -> Result<Verdict, BundleError> {
    if !base.kahler {
        return Err(BundleError::Precondition("Pic₀ realization requires Kähler hypothesis".into()));
    }
    base.require_valid()?;
    let p = required_torus_rank(base);
    let q = base.pi1_free_rank();
    if g.torus_rank < p {
        // C^b and G₀ contribute only divisible subgroups of Pic, which meet
        // the finitely generated NS group trivially.
        return Ok(Verdict::Insufficient(format!(
            "NS needs {p} generators but the torus has rank {}",
            g.torus_rank
        )));
    }
    if g.vector_rank < q {
        return Ok(Verdict::Unknown(format!(
            "vector rank {} is below the π₁ free rank {q}; only sufficiency is known",
            g.vector_rank
        )));
    }
    Ok(Verdict::Sufficient)
}

/// `P ⊕ (X × padding)` where `P` is the `(C^×)^p × C^q`-bundle: its first
/// `p` torus characters go to NS generators (negated free generators, then
/// torsion generators), the `C^q` block is induced from the universal cover
/// and reaches rational Pic₀, and padding characters map to zero.
pub fn build_abelian_cy_bundle(g: &RmGroup, base: &ManifoldDescriptor) -> Result<PrincipalBundle, BundleError> {
    match sufficiency_check(g, base)? {
        Verdict::Sufficient => {}
        v => return Err(BundleError::Precondition(format!("group is not known to suffice: {v:?}"))),
    }
    let pic = base.pic_group();
    let p_free = base.ns_free_rank;
    let p = required_torus_rank(base);
    let q = base.pi1_free_rank();

    let torus_group = StructureGroupDesc::torus(g.torus_rank);
    let m = QMatrix::from_fn(pic.coordinate_count(), g.torus_rank, |i, j| {
        let v = if j >= p || i != j {
            0
        } else if j < p_free {
            -1
        } else {
            1
        };
        Rational::from_integer(BigInt::from(v))
    });
    let torus = PrincipalBundle::new(
        "ns-generators",
        CharacterMap::new(
            torus_group.clone(),
            base.clone(),
            MixedHom::new(torus_group.character_group(), pic.mixed(), m)?,
            0,
        )?,
        Provenance::WhitneySum,
    );

    let vector = if q > 0 {
        let cover = PrincipalBundle::new("universal-cover", universal_cover_character_map(base)?, Provenance::UniversalCover);
        // π₁ -> Z^q -> C^q (projection, inclusion), then pad by C^{b-q} × G₀.
        let target = StructureGroupDesc::new(0, g.vector_rank, g.cousin_dim, None);
        let src = cover.group().clone();
        let shift = src.circle_offset();
        let f = QMatrix::from_fn(target.coordinate_count(), src.coordinate_count(), |i, j| {
            Rational::from_integer(BigInt::from(u8::from(j >= shift && i == j - shift)))
        });
        Some(induced_bundle(&cover, &GroupHom::new(src, target, f)?)?)
    } else if g.vector_rank > 0 || g.cousin_dim > 0 {
        let target = StructureGroupDesc::new(0, g.vector_rank, g.cousin_dim, None);
        let hom = MixedHom::zero(&target.character_group(), &pic.mixed());
        Some(PrincipalBundle::new(
            "padding",
            CharacterMap::new(target, base.clone(), hom, 0)?,
            Provenance::Custom { label: "trivial".into() },
        ))
    } else {
        None
    };
    let mut out = match vector {
        Some(v) => direct_sum(&torus, &v)?,
        None => torus,
    };
    out.name = format!("rm({},{},{})", g.torus_rank, g.vector_rank, g.cousin_dim);
    Ok(out)
}
