
use super::ops::direct_sum;
use super::{BundleError, Character, CharacterMap, PrincipalBundle, Provenance, StructureGroupDesc};
use crate::fga::rational::{frac, rat};
use crate::fga::{MixedHom, QMatrix, Rational};
use crate::picard::{universal_cover_character_map, ManifoldDescriptor, PicElement};

/// `π₁(X)_ab × (C^×)^p`-bundle: the torus block is `L_1^× ⊕ ... ⊕ L_p^×`
/// with `L_i` the negated NS generators (`O(-1)^×` on projective space),
/// summed with the universal cover.
pub fn construct_surjective_bundle(base: &ManifoldDescriptor) -> Result<PrincipalBundle, BundleError> {
    if !base.kahler {
        return Err(BundleError::Precondition("Pic₀ realization requires Kähler hypothesis".into()));
    }
    base.require_valid()?;
    let pic = base.pic_group();
    let p = base.ns_free_rank;
    let group = StructureGroupDesc::torus(p);
    let m = QMatrix::from_fn(pic.coordinate_count(), p, |i, j| {
        if i == j {
            rat(-1, 1)
        } else {
            rat(0, 1)
        }
    });
    let torus = PrincipalBundle::new(
        "ns-generators",
        CharacterMap::new(group.clone(), base.clone(), MixedHom::new(group.character_group(), pic.mixed(), m)?, 0)?,
        Provenance::WhitneySum,
    );
    let mut out = if base.pi1_ab.is_trivial() {
        torus
    } else {
        let cover = PrincipalBundle::new("universal-cover", universal_cover_character_map(base)?, Provenance::UniversalCover);
        direct_sum(&torus, &cover)?
    };
    out.name = format!("surjective({})", base.name);
    Ok(out)
}

/// One target class with the preimage found for it, if any.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorCheck {
    pub target: PicElement,
    pub preimage: Option<Character>,
}

impl GeneratorCheck {
    pub fn ok(&self) -> bool {
        self.preimage.is_some()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurjectivityCertificate {
    pub free_generators: Vec<GeneratorCheck>,
    pub torsion_generators: Vec<GeneratorCheck>,
    pub pic0_samples: Vec<GeneratorCheck>,
    /// The divisible characters span the Pic₀ coordinates over `Q`.
    pub pic0_rank_ok: bool,
    pub kernel_dim: usize,
    pub expected_kernel_dim: usize,
}

impl SurjectivityCertificate {
    pub fn all_pass(&self) -> bool {
        self.free_generators.iter().all(GeneratorCheck::ok)
            && self.torsion_generators.iter().all(GeneratorCheck::ok)
            && self.pic0_samples.iter().all(GeneratorCheck::ok)
            && self.pic0_rank_ok
            && self.kernel_dim == self.expected_kernel_dim
    }
}

/// Fixed rational points of `(Q/Z)^{2g}` with assorted denominators.
pub fn default_pic0_samples(pic0_dim: usize, count: usize) -> Vec<Vec<Rational>> {
    (0..count)
        .map(|j| {
            (0..2 * pic0_dim)
                .map(|i| {
                    let d = (j + 2 * i + 2) as i64;
                    frac(&rat((j * j + 3 * i + 1) as i64, d))
                })
                .collect()
        })
        .collect()
}

pub fn surjectivity_certificate(
    b: &PrincipalBundle,
    pic0_samples: &[Vec<Rational>],
) -> Result<SurjectivityCertificate, BundleError> {
    let base = b.base();
    let pic = base.pic_group();
    let lambda = &b.char_map;
    let check = |target: PicElement| -> Result<GeneratorCheck, BundleError> {
        let preimage = lambda.preimage(&target)?.map(|s| s.particular);
        Ok(GeneratorCheck { target, preimage })
    };
    let free_generators = (0..pic.free_rank)
        .map(|i| check(pic.basis_class(i)))
        .collect::<Result<_, _>>()?;
    let torsion_generators = (0..pic.torsion.torsion_rank())
        .map(|i| check(pic.basis_class(pic.torsion_offset() + i)))
        .collect::<Result<_, _>>()?;
    let pic0_samples = pic0_samples
        .iter()
        .map(|s| {
            let mut c = pic.zero();
            c.pic0 = s.clone();
            check(pic.normalize(&c)?)
        })
        .collect::<Result<_, _>>()?;
    let g = b.group();
    let divisible: Vec<usize> = (g.circle_offset()..g.coordinate_count()).collect();
    let pic0_rank_ok = lambda.pic0_block().select_columns(&divisible).rank() == 2 * base.pic0_dim;
    Ok(SurjectivityCertificate {
        free_generators,
        torsion_generators,
        pic0_samples,
        pic0_rank_ok,
        kernel_dim: lambda.continuous_kernel_dim(),
        expected_kernel_dim: base.omega1c_dim,
    })
}
