//! Helpers shared by the integration tests: random admissible data and
//! independent evaluation oracles.
#![allow(dead_code)]

use std::path::PathBuf;

use cybundle::bundles::{CharacterMap, PrincipalBundle, Provenance, StructureGroupDesc};
use cybundle::fga::{CoordKind, FgaGroup, MixedGroup, MixedHom, QMatrix, Rational};
use cybundle::picard::{ManifoldDescriptor, PicElement};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let d = [1, 2, 3, 4, 6][rng.gen_range(0..5)];
    q(rng.gen_range(-6..=6), d)
}

/// A random entry admissible from kind `a` into kind `b`.
pub fn random_entry<R: Rng>(rng: &mut R, a: &CoordKind, b: &CoordKind) -> Rational {
    use CoordKind::{Circle, Cyclic, Integer};
    let z = |rng: &mut R| q(rng.gen_range(-4..=4), 1);
    match (a, b) {
        (Integer, Integer) | (Integer, Cyclic(_)) | (Circle, Circle) => z(rng),
        (Integer, Circle) | (Integer, CoordKind::Rational) | (CoordKind::Rational, Circle) | (CoordKind::Rational, CoordKind::Rational) => random_rational(rng),
        (Cyclic(n), Cyclic(m)) => {
            let step = m / n.gcd(m);
            Rational::from_integer(step * BigInt::from(rng.gen_range(-3..=3)))
        }
        (Cyclic(n), Circle) => Rational::new(BigInt::from(rng.gen_range(-5..=5)), n.clone()),
        _ => Rational::zero(),
    }
}

pub fn random_hom<R: Rng>(rng: &mut R, src: &MixedGroup, tgt: &MixedGroup) -> MixedHom {
    let m = QMatrix::from_fn(tgt.len(), src.len(), |i, j| random_entry(rng, &src.kinds()[j], &tgt.kinds()[i]));
    MixedHom::new(src.clone(), tgt.clone(), m).expect("admissible by construction")
}

pub fn random_element<R: Rng>(rng: &mut R, g: &MixedGroup) -> Vec<Rational> {
    let v: Vec<Rational> = g
        .kinds()
        .iter()
        .map(|k| match k {
            CoordKind::Integer | CoordKind::Cyclic(_) => q(rng.gen_range(-7..=7), 1),
            _ => random_rational(rng),
        })
        .collect();
    g.normalize(&v).unwrap()
}

/// `<χ, h> = Σ χ_i h_i / n_i mod 1` between a character-group element and a
/// model-group element.
pub fn pairing(kinds: &[CoordKind], chi: &[Rational], h: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for ((k, c), x) in kinds.iter().zip(chi).zip(h) {
        let n = match k {
            CoordKind::Cyclic(n) => Rational::from_integer(n.clone()),
            _ => Rational::one(),
        };
        s += c * x / n;
    }
    s.clone() - s.floor()
}

pub fn random_structure_group<R: Rng>(rng: &mut R) -> StructureGroupDesc {
    let pi1 = if rng.gen_bool(0.5) {
        let t: Vec<BigInt> = match rng.gen_range(0..3) {
            0 => vec![],
            1 => big(&[2]),
            _ => big(&[3]),
        };
        Some(FgaGroup::new(rng.gen_range(0..=2), t).unwrap())
    } else {
        None
    };
    StructureGroupDesc::new(rng.gen_range(0..=2), rng.gen_range(0..=1), 0, pi1)
}

/// Small Kähler descriptor with random NS rank, NS torsion, Pic₀ and `K`.
pub fn random_descriptor<R: Rng>(rng: &mut R) -> ManifoldDescriptor {
    let p = rng.gen_range(0..=2);
    let torsion = match rng.gen_range(0..4) {
        0 | 1 => FgaGroup::trivial(),
        2 => FgaGroup::new(0, big(&[2])).unwrap(),
        _ => FgaGroup::new(0, big(&[2, 4])).unwrap(),
    };
    let g = rng.gen_range(0..=1);
    let mut m = ManifoldDescriptor {
        name: "random".into(),
        dim: 2,
        kahler: true,
        ns_free_rank: p,
        ns_torsion: torsion.clone(),
        pic0_dim: g,
        pi1_ab: FgaGroup::new(2 * g, torsion.invariant_factors().to_vec()).unwrap(),
        omega1c_dim: g,
        canonical_class: PicElement::default(),
    };
    m.canonical_class = random_class(rng, &m);
    m
}

pub fn random_class<R: Rng>(rng: &mut R, m: &ManifoldDescriptor) -> PicElement {
    let pic = m.pic_group();
    let v = random_element(rng, &pic.mixed());
    pic.from_coords(&v).unwrap()
}

pub fn torus_bundle(base: &ManifoldDescriptor, classes: &[PicElement]) -> PrincipalBundle {
    cybundle::bundles::whitney_sum_bundle(base, classes).unwrap()
}

pub fn bundle_with_map(group: StructureGroupDesc, base: &ManifoldDescriptor, hom: MixedHom, dim: usize) -> PrincipalBundle {
    let dim = if group.is_pure_torus() { 0 } else { dim };
    PrincipalBundle::new(
        "random",
        CharacterMap::new(group, base.clone(), hom, dim).unwrap(),
        Provenance::Custom { label: "test".into() },
    )
}

/// `λ` of a torus bundle evaluated in machine integers: Picard coordinates
/// are scaled by `scale` so that Pic₀ entries become integers mod `scale`.
pub struct FastLambda {
    columns: Vec<Vec<i128>>,
    moduli: Vec<i128>,
    pub scale: i128,
}

impl FastLambda {
    pub fn new(b: &PrincipalBundle, extra: &[&PicElement]) -> FastLambda {
        let pic = b.base().pic_group();
        let m = b.char_map.hom().matrix();
        let mut scale = BigInt::one();
        for x in m.entries() {
            scale = scale.lcm(x.denom());
        }
        for e in extra {
            for x in &e.pic0 {
                scale = scale.lcm(x.denom());
            }
        }
        let s = Rational::from_integer(scale.clone());
        let to = |x: &Rational| -> i128 { i128::try_from((x * &s).to_integer()).unwrap() };
        let columns = (0..m.cols()).map(|j| m.column(j).iter().map(to).collect()).collect();
        let sc = i128::try_from(scale).unwrap();
        let moduli = pic
            .mixed()
            .kinds()
            .iter()
            .map(|k| match k {
                CoordKind::Cyclic(n) => i128::try_from(n.clone()).unwrap() * sc,
                CoordKind::Circle => sc,
                _ => 0,
            })
            .collect();
        FastLambda {
            columns,
            moduli,
            scale: sc,
        }
    }

    fn reduce(&self, v: &mut [i128]) {
        for (x, m) in v.iter_mut().zip(&self.moduli) {
            if *m != 0 {
                *x = x.rem_euclid(*m);
            }
        }
    }

    pub fn eval(&self, chi: &[i64]) -> Vec<i128> {
        let mut v = vec![0i128; self.moduli.len()];
        for (c, col) in chi.iter().zip(&self.columns) {
            for (x, y) in v.iter_mut().zip(col) {
                *x += i128::from(*c) * y;
            }
        }
        self.reduce(&mut v);
        v
    }

    pub fn encode(&self, b: &PrincipalBundle, class: &PicElement) -> Vec<i128> {
        let s = Rational::from_integer(BigInt::from(self.scale));
        let y = b.base().pic_group().to_coords(class).unwrap();
        let mut v: Vec<i128> = y.iter().map(|x| i128::try_from((x * &s).to_integer()).unwrap()).collect();
        self.reduce(&mut v);
        v
    }
}

/// Calls `f` on every point of `[-r, r]^n`.
pub fn for_each_in_box(n: usize, r: i64, mut f: impl FnMut(&[i64])) {
    let mut c = vec![-r; n];
    loop {
        f(&c);
        let mut i = 0;
        while i < n {
            if c[i] < r {
                c[i] += 1;
                break;
            }
            c[i] = -r;
            i += 1;
        }
        if i == n {
            return;
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}
