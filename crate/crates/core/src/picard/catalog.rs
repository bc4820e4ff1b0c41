use num_bigint::BigInt;

use super::{ManifoldDescriptor, PicElement};
use crate::fga::{FgaGroup, Rational};

const MAX_PARAM: usize = 64;

fn ints(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn zeros_q(n: usize) -> Vec<Rational> {
    vec![Rational::from_integer(0.into()); n]
}

pub fn projective_space(n: usize) -> ManifoldDescriptor {
    ManifoldDescriptor {
        name: format!("P{n}"),
        dim: n,
        kahler: true,
        ns_free_rank: 1,
        ns_torsion: FgaGroup::trivial(),
        pic0_dim: 0,
        pi1_ab: FgaGroup::trivial(),
        omega1c_dim: 0,
        canonical_class: PicElement::new(ints(&[-(n as i64 + 1)]), vec![], vec![]),
    }
}

/// Generic complex torus of dimension `g`: NS rank 0.
pub fn complex_torus(g: usize) -> ManifoldDescriptor {
    ManifoldDescriptor {
        name: format!("torusG{g}"),
        dim: g,
        kahler: true,
        ns_free_rank: 0,
        ns_torsion: FgaGroup::trivial(),
        pic0_dim: g,
        pi1_ab: FgaGroup::free(2 * g),
        omega1c_dim: g,
        canonical_class: PicElement::new(vec![], vec![], zeros_q(2 * g)),
    }
}

/// Compact Riemann surface of genus `g`, NS generated by a degree-one class.
pub fn curve(g: usize) -> ManifoldDescriptor {
    ManifoldDescriptor {
        name: format!("curveG{g}"),
        dim: 1,
        kahler: true,
        ns_free_rank: 1,
        ns_torsion: FgaGroup::trivial(),
        pic0_dim: g,
        pi1_ab: FgaGroup::free(2 * g),
        omega1c_dim: g,
        canonical_class: PicElement::new(ints(&[2 * g as i64 - 2]), vec![], zeros_q(2 * g)),
    }
}

/// Hirzebruch surface `F_a` in the divisor basis `(D1, D2)` of the fan with
/// rays `(1,0), (0,1), (-1,a), (0,-1)`.
pub fn hirzebruch(a: usize) -> ManifoldDescriptor {
    ManifoldDescriptor {
        name: format!("hirzebruch-{a}"),
        dim: 2,
        kahler: true,
        ns_free_rank: 2,
        ns_torsion: FgaGroup::trivial(),
        pic0_dim: 0,
        pi1_ab: FgaGroup::trivial(),
        omega1c_dim: 0,
        canonical_class: PicElement::new(ints(&[-(2 + a as i64), -2]), vec![], vec![]),
    }
}

pub fn p1xp1() -> ManifoldDescriptor {
    ManifoldDescriptor {
        name: "P1xP1".into(),
        ..hirzebruch(0)
    }
}

/// Surface profile with `T₁ = Z/2` matching NS torsion, `K` the torsion class.
pub fn enriques_like() -> ManifoldDescriptor {
    let z2 = FgaGroup::from_orders(0, &ints(&[2]));
    ManifoldDescriptor {
        name: "enriques-like".into(),
        dim: 2,
        kahler: true,
        ns_free_rank: 10,
        ns_torsion: z2.clone(),
        pic0_dim: 0,
        pi1_ab: z2,
        omega1c_dim: 0,
        canonical_class: PicElement::new(vec![BigInt::from(0); 10], ints(&[1]), vec![]),
    }
}

pub fn catalog_names() -> Vec<String> {
    let mut v: Vec<String> = (1..=4).map(|n| format!("P{n}")).collect();
    v.extend(["torusG1", "torusG2", "curveG2", "P1xP1"].map(String::from));
    v.extend((0..=3).map(|a| format!("hirzebruch-{a}")));
    v.push("enriques-like".into());
    v
}

pub fn catalog() -> Vec<ManifoldDescriptor> {
    catalog_names()
        .iter()
        .map(|n| lookup(n).expect("catalog names resolve"))
        .collect()
}

fn param(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok().filter(|&n| n <= MAX_PARAM)
}

/// Resolves a built-in name. Besides the fixed catalog, the families
/// `P<n>`, `torusG<g>` (or `torus<g>`), `curveG<g>` and `hirzebruch-<a>`
/// accept any parameter up to 64.
pub fn lookup(name: &str) -> Option<ManifoldDescriptor> {
    match name {
        "P1xP1" => return Some(p1xp1()),
        "enriques-like" => return Some(enriques_like()),
        _ => {}
    }
    if let Some(a) = name.strip_prefix("hirzebruch-").and_then(param) {
        return Some(hirzebruch(a));
    }
    if let Some(g) = name.strip_prefix("torusG").and_then(param) {
        return (g > 0).then(|| complex_torus(g));
    }
    if let Some(g) = name.strip_prefix("torus").and_then(param) {
        return (g > 0).then(|| complex_torus(g));
    }
    if let Some(g) = name.strip_prefix("curveG").and_then(param) {
        return Some(curve(g));
    }
    if let Some(n) = name.strip_prefix('P').and_then(param) {
        return (n > 0).then(|| projective_space(n));
    }
    None
}
