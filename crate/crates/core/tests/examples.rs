//! Worked examples: projective spaces, curves, tori, toric surfaces.

mod common;

use common::*;
use cybundle::bundles::{
    adjunction_character, bundle_from_lambda, construct_surjective_bundle, induced_bundle, obstruction_check,
    rank1_roots, rigidity_solve_with_radius, twist_bundle, whitney_sum_bundle, GroupHom, RigidityOutcome, Roots,
};
use cybundle::fga::{FgaGroup, IntMatrix, QMatrix};
use cybundle::picard::{lookup, universal_cover_character_map, validate, PicElement};
use cybundle::rm::{build_abelian_cy_bundle, character_group, sufficiency_check, RmGroup, Verdict};
use cybundle::toric::{audin_cox_bundle, Fan};
use num_bigint::BigInt;
use num_traits::Zero;

fn o(n: i64) -> PicElement {
    PicElement::new(vec![BigInt::from(n)], vec![], vec![])
}

fn p2_fan() -> Fan {
    Fan::new(
        2,
        vec![big(&[1, 0]), big(&[0, 1]), big(&[-1, -1])],
        vec![vec![0, 1], vec![1, 2], vec![0, 2]],
    )
    .unwrap()
}

#[test]
fn descriptors() {
    let c2 = lookup("curveG2").unwrap();
    assert!(validate(&c2).is_empty());
    assert_eq!(c2.canonical_class.free, big(&[2]));
    let mut bad = c2.clone();
    bad.omega1c_dim = 1;
    assert_eq!(validate(&bad).len(), 1);
    for n in 1..=4 {
        let p = lookup(&format!("P{n}")).unwrap();
        assert!(validate(&p).is_empty());
        assert_eq!(p.canonical_class.free, big(&[-(n + 1)]));
    }
    let t = lookup("torusG2").unwrap();
    assert_eq!((t.ns_free_rank, t.pic0_dim), (0, 2));
    assert!(validate(&t).is_empty());
    let e = lookup("enriques-like").unwrap();
    assert_eq!(e.ns_torsion, FgaGroup::new(0, big(&[2])).unwrap());
    assert_eq!(e.pi1_ab, e.ns_torsion);
}

#[test]
fn universal_cover_reaches_torsion_and_pic0() {
    for name in ["enriques-like", "torusG1", "torusG2", "curveG2"] {
        let base = lookup(name).unwrap();
        let lam = universal_cover_character_map(&base).unwrap();
        let tb = lam.torsion_block().unwrap();
        assert!(tb.is_surjective(), "{name}");
        // Free characters act bijectively on rational Pic₀ points.
        let g = lam.group();
        let cols: Vec<usize> = (g.circle_offset()..g.vector_offset()).collect();
        let block = lam.pic0_block().select_columns(&cols);
        assert_eq!(block.rank(), 2 * base.pic0_dim, "{name}");
        assert_eq!(block.rows(), block.cols(), "{name}");
    }
}

#[test]
fn whitney_sums_on_projective_space() {
    let base = lookup("P3").unwrap();
    let b = whitney_sum_bundle(&base, &[o(-1), o(-1)]).unwrap();
    for (k, l) in [(0, 0), (2, -5), (-3, 1)] {
        let img = b.char_map.apply(&[q(k, 1), q(l, 1)]).unwrap();
        assert_eq!(img, o(-k - l));
    }
    let l = o(5);
    let b = whitney_sum_bundle(&base, &[l.clone(), base.canonical_class.clone()]).unwrap();
    assert_eq!(b.char_map.apply(&[q(1, 1), q(0, 1)]).unwrap(), l);
    let z = whitney_sum_bundle(&base, &[o(0)]).unwrap();
    assert!(z.char_map.hom().is_zero());
}

#[test]
fn obstruction_examples() {
    let p3 = lookup("P3").unwrap();
    assert!(!obstruction_check(&whitney_sum_bundle(&p3, &[o(-3)]).unwrap()).unwrap().solvable);
    assert!(!obstruction_check(&whitney_sum_bundle(&p3, &[o(0)]).unwrap()).unwrap().solvable);
    assert!(obstruction_check(&whitney_sum_bundle(&p3, &[o(-2)]).unwrap()).unwrap().solvable);
}

#[test]
fn roots_examples() {
    let Roots::Finite(r) = rank1_roots(&lookup("P1").unwrap()).unwrap() else { panic!() };
    let ks: Vec<BigInt> = r.iter().map(|(k, _)| k.clone()).collect();
    assert_eq!(ks, big(&[1, -1, 2, -2]));
    let mut flat = lookup("P1").unwrap();
    flat.canonical_class = o(0);
    assert!(matches!(rank1_roots(&flat).unwrap(), Roots::All { .. }));
}

#[test]
fn rigidity_examples() {
    let base = lookup("P4").unwrap();
    let m = whitney_sum_bundle(&base, &[o(-1)]).unwrap();
    match rigidity_solve_with_radius(&m, &m, 10).unwrap() {
        RigidityOutcome::Isomorphic { xi, .. } => assert_eq!(xi, IntMatrix::identity(1)),
        other => panic!("{other:?}"),
    }
    let n = whitney_sum_bundle(&base, &[o(2)]).unwrap();
    assert!(matches!(rigidity_solve_with_radius(&m, &n, 10).unwrap(), RigidityOutcome::NotIsomorphic { .. }));
    let b = lookup("P2").unwrap();
    let m2 = whitney_sum_bundle(&b, &[o(-1), o(-1)]).unwrap();
    let n2 = whitney_sum_bundle(&b, &[o(-1), o(0)]).unwrap();
    assert!(matches!(rigidity_solve_with_radius(&m2, &n2, 10).unwrap(), RigidityOutcome::Isomorphic { .. }));
}

#[test]
fn bundle_from_lambda_round_trip() {
    let base = lookup("P2").unwrap();
    let b = whitney_sum_bundle(&base, &[o(-1), o(-1)]).unwrap();
    let back = bundle_from_lambda(&base, &b.char_map).unwrap();
    assert_eq!(back.char_map, b.char_map);
    assert!(obstruction_check(&back).unwrap().solvable);
    let z = whitney_sum_bundle(&base, &[o(0), o(0)]).unwrap();
    let zb = bundle_from_lambda(&base, &z.char_map).unwrap();
    assert!((0..2).all(|i| zb.char_map.column_class(i).is_zero()));
}

#[test]
fn surjective_examples() {
    let p2 = construct_surjective_bundle(&lookup("P2").unwrap()).unwrap();
    assert_eq!(p2.group().torus_rank(), 1);
    assert!(p2.char_map.hom().is_automorphism());
    let c2 = lookup("curveG2").unwrap();
    let b = construct_surjective_bundle(&c2).unwrap();
    assert_eq!((b.group().torus_rank(), b.group().pi1_free_rank()), (1, 4));
    let cy = obstruction_check(&b).unwrap();
    assert!(cy.solvable);
    assert_eq!(b.char_map.apply(cy.particular.as_ref().unwrap()).unwrap().free, big(&[2]));
    assert_eq!(cy.continuous_kernel_dim, 2);
    let t = construct_surjective_bundle(&lookup("torusG1").unwrap()).unwrap();
    assert_eq!(t.group().torus_rank(), 0);
    assert_eq!(t.group().pi1_free_rank(), 2);
}

#[test]
fn induced_and_twisted_examples() {
    let base = lookup("curveG2").unwrap();
    let b = construct_surjective_bundle(&base).unwrap();
    let id = GroupHom::identity(b.group());
    assert_eq!(induced_bundle(&b, &id).unwrap().char_map, b.char_map);
    assert_eq!(twist_bundle(&b, &id).unwrap().char_map, b.char_map);

    let p = lookup("P1xP1").unwrap();
    let m = whitney_sum_bundle(&p, &[PicElement::new(big(&[1, 0]), vec![], vec![]), PicElement::new(big(&[0, 1]), vec![], vec![])]).unwrap();
    let s = QMatrix::from_fn(2, 2, |i, j| q([[1, 1], [0, 1]][i][j], 1));
    let sigma = GroupHom::new(m.group().clone(), m.group().clone(), s).unwrap();
    let once = twist_bundle(&m, &sigma).unwrap();
    let back = twist_bundle(&once, &sigma.inverse().unwrap()).unwrap();
    assert_eq!(back.char_map, m.char_map);
}

#[test]
fn adjunction_examples() {
    let base = lookup("P2").unwrap();
    let b = whitney_sum_bundle(&base, &[o(-1), o(-1)]).unwrap();
    let cy = obstruction_check(&b).unwrap();
    assert_eq!(adjunction_character(&b, &cy).unwrap(), vec![q(0, 1), q(3, 1)]);
    let k = whitney_sum_bundle(&base, &[base.canonical_class.clone()]).unwrap();
    let cy = obstruction_check(&k).unwrap();
    assert_eq!(adjunction_character(&k, &cy).unwrap(), vec![q(1, 1)]);
}

#[test]
fn toric_examples() {
    let (b, cert) = audin_cox_bundle(&p2_fan(), &lookup("P2").unwrap()).unwrap();
    assert!(cert.all_pass());
    assert_eq!(cert.cox_kernel_rank, 2);
    assert_eq!(cert.cox_map, IntMatrix::from_rows(&[vec![1, 1, 1]]));
    assert!(obstruction_check(&b).unwrap().solvable);
    assert!(audin_cox_bundle(&p2_fan(), &lookup("P3").unwrap()).is_err());
}

#[test]
fn rm_examples() {
    assert_eq!(character_group(&RmGroup::new(1, 0, 0)).model.len(), 1);
    assert_eq!(character_group(&RmGroup::new(0, 1, 0)).continuous_dim, 1);
    assert_eq!(character_group(&RmGroup::new(0, 0, 3)).model.len(), 0);

    // The rm bundle on P^n and the Audin-Cox bundle differ by the sign twist.
    let p2 = lookup("P2").unwrap();
    let rm = build_abelian_cy_bundle(&RmGroup::new(1, 0, 0), &p2).unwrap();
    let (cox, _) = audin_cox_bundle(&p2_fan(), &p2).unwrap();
    match rigidity_solve_with_radius(&rm, &cox, 10).unwrap() {
        RigidityOutcome::Isomorphic { xi, .. } => assert_eq!(xi, IntMatrix::from_rows(&[vec![-1]])),
        other => panic!("{other:?}"),
    }

    let t = lookup("torusG1").unwrap();
    assert_eq!(sufficiency_check(&RmGroup::new(0, 2, 0), &t).unwrap(), Verdict::Sufficient);
    let b = build_abelian_cy_bundle(&RmGroup::new(0, 2, 0), &t).unwrap();
    let cy = obstruction_check(&b).unwrap();
    assert!(cy.solvable && cy.particular.unwrap().iter().all(Zero::is_zero));
    let img = b.char_map.apply(&[q(1, 3), q(-1, 2)]).unwrap();
    assert_eq!(img.pic0, vec![q(1, 3), q(1, 2)]);
    assert_eq!(b.char_map.hom().source().len(), 2);
}
