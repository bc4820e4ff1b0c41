use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{BundleError, Character, CharacterMap, GroupHom, PrincipalBundle, Provenance, StructureGroupDesc};
use crate::fga::{KernelDescription, QMatrix};
use crate::picard::{ManifoldDescriptor, PicElement};

/// Largest `|K|` whose divisors are enumerated by trial division.
const MAX_ROOT_TARGET: u64 = 1_000_000_000_000;

fn torus_bundle(base: &ManifoldDescriptor, classes: &[PicElement]) -> Result<CharacterMap, BundleError> {
    let pic = base.pic_group();
    let mut cols = Vec::with_capacity(classes.len());
    for c in classes {
        cols.push(pic.to_coords(c)?);
    }
    let group = StructureGroupDesc::torus(classes.len());
    let m = QMatrix::from_fn(pic.coordinate_count(), classes.len(), |i, j| cols[j][i].clone());
    let hom = crate::fga::MixedHom::new(group.character_group(), pic.mixed(), m)?;
    CharacterMap::new(group, base.clone(), hom, 0)
}

/// `L_1^× ⊕ ... ⊕ L_t^×`, whose `i`-th basis character maps to `L_i`.
pub fn whitney_sum_bundle(base: &ManifoldDescriptor, classes: &[PicElement]) -> Result<PrincipalBundle, BundleError> {
    if classes.is_empty() {
        return Err(BundleError::Precondition("a Whitney sum needs at least one class".into()));
    }
    let names: Vec<String> = classes.iter().map(|c| format!("[{c}]")).collect();
    Ok(PrincipalBundle::new(
        names.join("+"),
        torus_bundle(base, classes)?,
        Provenance::WhitneySum,
    ))
}

/// The characters `χ` with `λ(χ) = [K_X]`: a coset of `ker λ` when
/// nonempty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyStructureSet {
    pub solvable: bool,
    pub particular: Option<Character>,
    pub kernel: KernelDescription,
    pub continuous_kernel_dim: usize,
}

pub fn obstruction_check(b: &PrincipalBundle) -> Result<CyStructureSet, BundleError> {
    let lambda = &b.char_map;
    let k = b.base().canonical_class.clone();
    let continuous_kernel_dim = lambda.continuous_kernel_dim();
    Ok(match lambda.preimage(&k)? {
        Some(sol) => CyStructureSet {
            solvable: true,
            particular: Some(sol.particular),
            kernel: sol.kernel,
            continuous_kernel_dim,
        },
        None => CyStructureSet {
            solvable: false,
            particular: None,
            kernel: lambda.hom().kernel(),
            continuous_kernel_dim,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Roots {
    /// `K_X = 0`: every `k` works with the trivial root.
    All { root: PicElement },
    /// Pairs `(k, L)` with `K_X = kL`.
    Finite(Vec<(BigInt, PicElement)>),
}

/// Roots of `K_X` on a base with `Pic = Z` (up to Pic₀ with `K` in NS).
pub fn rank1_roots(base: &ManifoldDescriptor) -> Result<Roots, BundleError> {
    if base.ns_free_rank != 1 {
        return Err(BundleError::Precondition(format!(
            "NS free rank must be 1, got {}",
            base.ns_free_rank
        )));
    }
    if !base.ns_torsion.is_trivial() {
        return Err(BundleError::Precondition("NS torsion must be trivial".into()));
    }
    let pic = base.pic_group();
    let k = pic.normalize(&base.canonical_class)?;
    if k.pic0.iter().any(|x| !x.is_zero()) {
        return Err(BundleError::Precondition("K_X must have zero Pic₀ part".into()));
    }
    let kv = &k.free[0];
    if kv.is_zero() {
        return Ok(Roots::All { root: pic.zero() });
    }
    let n = kv
        .abs()
        .to_u64()
        .filter(|&n| n <= MAX_ROOT_TARGET)
        .ok_or_else(|| BundleError::Unsupported(format!("|K| = {} is too large to factor", kv.abs())))?;
    let mut divisors = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            divisors.push(d);
            if d * d != n {
                divisors.push(n / d);
            }
        }
        d += 1;
    }
    divisors.sort_unstable();
    let mut out = Vec::with_capacity(2 * divisors.len());
    for d in divisors {
        for k in [BigInt::from(d), -BigInt::from(d)] {
            let mut root = pic.zero();
            root.free[0] = kv.div_floor(&k);
            out.push((k, root));
        }
    }
    Ok(Roots::Finite(out))
}

/// The torus bundle whose character map is `lambda`.
pub fn bundle_from_lambda(base: &ManifoldDescriptor, lambda: &CharacterMap) -> Result<PrincipalBundle, BundleError> {
    if !lambda.group().is_pure_torus() {
        return Err(BundleError::Unsupported("only (C^×)^p structure groups".into()));
    }
    if lambda.target() != base {
        return Err(BundleError::Mismatch("character map targets a different base".into()));
    }
    let classes: Vec<PicElement> = (0..lambda.group().torus_rank()).map(|i| lambda.column_class(i)).collect();
    Ok(PrincipalBundle::new(
        "from-lambda",
        torus_bundle(base, &classes)?,
        Provenance::WhitneySum,
    ))
}

/// Bundle induced along `f: H -> K`; its character map is `λ ∘ f̂`.
pub fn induced_bundle(b: &PrincipalBundle, f: &GroupHom) -> Result<PrincipalBundle, BundleError> {
    if f.source() != b.group() {
        return Err(BundleError::Mismatch("hom source is not the bundle's structure group".into()));
    }
    let dual = f.dual()?;
    let hom = b.char_map.hom().compose(&dual)?;
    let target = f.target().clone();
    let continuous = if target.is_pure_torus() {
        0
    } else {
        // Non-unitary kernel directions live over the free part of π; only
        // the part reached by f̂ survives.
        let h = b.group();
        let q = h.pi1_free_rank();
        let rows: Vec<usize> = (h.circle_offset()..h.vector_offset()).collect();
        let r = dual.matrix().select_rows(&rows).rank();
        b.char_map.continuous_kernel_dim().saturating_sub(q - r)
    };
    let char_map = CharacterMap::new(target, b.base().clone(), hom, continuous)?;
    Ok(PrincipalBundle::new(
        format!("induced({})", b.name),
        char_map,
        Provenance::Induced { parent: b.name.clone() },
    ))
}

/// `M^σ`: the action precomposed with `σ`, so `λ_{M^σ} = λ_M ∘ (σ⁻¹)^`.
pub fn twist_bundle(b: &PrincipalBundle, sigma: &GroupHom) -> Result<PrincipalBundle, BundleError> {
    if sigma.source() != b.group() || sigma.target() != b.group() {
        return Err(BundleError::Mismatch("twist must be an automorphism of the structure group".into()));
    }
    let inv = sigma
        .inverse()
        .map_err(|e| BundleError::Precondition(format!("not an automorphism: {e}")))?;
    let hom = b.char_map.hom().compose(&inv.dual()?)?;
    let char_map = CharacterMap::new(
        b.group().clone(),
        b.base().clone(),
        hom,
        b.char_map.continuous_kernel_dim(),
    )?;
    Ok(PrincipalBundle::new(
        format!("twist({})", b.name),
        char_map,
        Provenance::Twist { parent: b.name.clone() },
    ))
}

/// The character `χ·χ_𝔥` with `K_X = L_{χχ_𝔥}`; `χ_𝔥` is trivial here.
pub fn adjunction_character(b: &PrincipalBundle, cy: &CyStructureSet) -> Result<Character, BundleError> {
    assert!(b.group().is_abelian(), "adjunction character needs the adjoint character of a non-abelian group");
    let chi = match (&cy.particular, cy.solvable) {
        (Some(chi), true) => chi.clone(),
        _ => return Err(BundleError::Precondition("no CY structure: K_X is not in the image".into())),
    };
    let img = b.char_map.apply(&chi)?;
    let k = b.base().pic_group().normalize(&b.base().canonical_class)?;
    if img != k {
        return Err(BundleError::Mismatch("character does not map to K_X".into()));
    }
    Ok(chi)
}

/// Fibre product over the base, with structure group the product.
pub fn direct_sum(a: &PrincipalBundle, b: &PrincipalBundle) -> Result<PrincipalBundle, BundleError> {
    if a.base() != b.base() {
        return Err(BundleError::Mismatch("summands live over different bases".into()));
    }
    let (ga, gb) = (a.group(), b.group());
    if ga.pi1_factor().is_some() && gb.pi1_factor().is_some() {
        return Err(BundleError::Unsupported("two discrete factors in one sum".into()));
    }
    let pi1 = ga.pi1_factor().or(gb.pi1_factor()).cloned();
    let group = StructureGroupDesc::new(
        ga.torus_rank() + gb.torus_rank(),
        ga.vector_rank() + gb.vector_rank(),
        ga.cousin_dim() + gb.cousin_dim(),
        pi1,
    );
    // Column sources in the canonical coordinate order of the product.
    let range = |s, e| (s..e).collect::<Vec<usize>>();
    let mut cols: Vec<(bool, usize)> = Vec::new();
    cols.extend(range(0, ga.torus_rank()).into_iter().map(|j| (false, j)));
    cols.extend(range(0, gb.torus_rank()).into_iter().map(|j| (true, j)));
    for (second, g) in [(false, ga), (true, gb)] {
        if g.pi1_factor().is_some() {
            cols.extend(range(g.torsion_offset(), g.vector_offset()).into_iter().map(|j| (second, j)));
        }
    }
    cols.extend(range(ga.vector_offset(), ga.coordinate_count()).into_iter().map(|j| (false, j)));
    cols.extend(range(gb.vector_offset(), gb.coordinate_count()).into_iter().map(|j| (true, j)));
    let (ma, mb) = (a.char_map.hom().matrix(), b.char_map.hom().matrix());
    let m = QMatrix::from_fn(ma.rows(), cols.len(), |i, j| {
        let (second, c) = cols[j];
        if second { mb[(i, c)].clone() } else { ma[(i, c)].clone() }
    });
    let hom = crate::fga::MixedHom::new(group.character_group(), a.char_map.hom().target().clone(), m)?;
    let dim = a.char_map.continuous_kernel_dim() + b.char_map.continuous_kernel_dim();
    Ok(PrincipalBundle::new(
        format!("{}+{}", a.name, b.name),
        CharacterMap::new(group, a.base().clone(), hom, dim)?,
        Provenance::DirectSum {
            parts: vec![a.name.clone(), b.name.clone()],
        },
    ))
}
