mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use cybundle::bundles::{
    construct_surjective_bundle, induced_bundle, obstruction_check, rank1_roots, rigidity_solve_with_radius,
    surjectivity_certificate, twist_bundle, whitney_sum_bundle, GroupHom, RigidityOutcome, Roots,
};
use cybundle::fga::{hermite_normal_form, reduce_against, smith_normal_form, IntMatrix, MixedHom, QMatrix, Rational};
use cybundle::picard::{catalog, lookup, PicElement};
use cybundle::rm::{build_abelian_cy_bundle, sufficiency_check, RmGroup, Verdict};
use cybundle::toric::{audin_cox_bundle, check_smooth_complete, cox_data};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn o(n: i64) -> PicElement {
    PicElement::new(vec![BigInt::from(n)], vec![], vec![])
}

fn criterion_1() -> Outcome {
    for d in 1..=4i64 {
        let base = lookup(&format!("P{d}")).unwrap();
        let Roots::Finite(roots) = rank1_roots(&base).map_err(|e| e.to_string())? else {
            return Err(format!("P{d}: K reported trivial"));
        };
        let mut got: Vec<i64> = roots.iter().map(|(k, _)| i64::try_from(k).unwrap()).collect();
        for (k, l) in &roots {
            ensure!(k * &l.free[0] == BigInt::from(-(d + 1)), "P{d}: {k} * {l} != K");
        }
        let mut want: Vec<i64> = (1..=d + 1).filter(|k| (d + 1) % k == 0).flat_map(|k| [k, -k]).collect();
        got.sort_unstable();
        want.sort_unstable();
        ensure!(got == want, "P{d}: got {got:?}, want {want:?}");
    }
    Ok("P1..P4 roots are the ± divisors of d+1".into())
}

fn criterion_2() -> Outcome {
    for n in 1..=4i64 {
        let base = lookup(&format!("P{n}")).unwrap();
        let b = whitney_sum_bundle(&base, &[o(-1), o(-1)]).unwrap();
        let cy = obstruction_check(&b).map_err(|e| e.to_string())?;
        ensure!(cy.solvable, "P{n}: not solvable");
        let part: Vec<BigInt> = cy.particular.unwrap().iter().map(Rational::to_integer).collect();
        let lattice = cy.kernel.lift_lattice.clone();
        ensure!(lattice == vec![big(&[1, -1])], "P{n}: kernel basis {lattice:?}");
        let h = IntMatrix::from_fn(1, 2, |_, j| lattice[0][j].clone());
        for k in -12..=12i64 {
            for l in -12..=12i64 {
                let brute = -k - l == -(n + 1);
                let diff = [BigInt::from(k) - &part[0], BigInt::from(l) - &part[1]];
                let member = reduce_against(&h, &diff).iter().all(Zero::is_zero);
                ensure!(brute == member, "P{n}: ({k},{l}) brute {brute} coset {member}");
            }
        }
    }
    Ok("coset {(l, n+1-l)} for n = 1..4 over |k|,|l| <= 12".into())
}

fn criterion_3() -> Outcome {
    for d in 1..=4 {
        let base = lookup(&format!("P{d}")).unwrap();
        let m = whitney_sum_bundle(&base, &[o(-1)]).unwrap();
        let n = whitney_sum_bundle(&base, &[o(1)]).unwrap();
        let RigidityOutcome::Isomorphic { xi, xi_dual } =
            rigidity_solve_with_radius(&m, &n, 10).map_err(|e| e.to_string())?
        else {
            return Err(format!("P{d}: not isomorphic"));
        };
        ensure!(xi == IntMatrix::from_rows(&[vec![-1]]), "P{d}: xi = {xi:?}");
        let sigma = GroupHom::new(
            n.group().clone(),
            n.group().clone(),
            QMatrix::from_fn(1, 1, |_, _| Rational::from_integer(xi_dual[(0, 0)].clone())),
        )
        .map_err(|e| e.to_string())?;
        let t = twist_bundle(&n, &sigma).map_err(|e| e.to_string())?;
        ensure!(t.char_map.hom() == m.char_map.hom(), "P{d}: twisted map differs");
    }
    Ok("xi = (-1) and the twist by xi^ matches on P1..P4".into())
}

fn is_hermite(h: &IntMatrix) -> bool {
    let mut last: Option<usize> = None;
    let mut seen_zero = false;
    for i in 0..h.rows() {
        match h.row(i).iter().position(|x| !x.is_zero()) {
            None => seen_zero = true,
            Some(c) => {
                if seen_zero || last.is_some_and(|l| c <= l) || !h[(i, c)].is_positive() {
                    return false;
                }
                if (0..i).any(|k| h[(k, c)].is_negative() || h[(k, c)] >= h[(i, c)]) {
                    return false;
                }
                last = Some(c);
            }
        }
    }
    true
}

fn criterion_4() -> Outcome {
    let mut rng = rng(4);
    for trial in 0..1000 {
        let (r, c) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let a = IntMatrix::from_fn(r, c, |_, _| BigInt::from(rng.gen_range(-20..=20)));
        let s = smith_normal_form(&a);
        ensure!(s.u.mul(&a).unwrap().mul(&s.v).unwrap() == s.d, "trial {trial}: u a v != d");
        ensure!(s.u.is_unimodular() && s.v.is_unimodular(), "trial {trial}: SNF transform not unimodular");
        for i in 0..r {
            for j in 0..c {
                ensure!(i == j || s.d[(i, j)].is_zero(), "trial {trial}: d not diagonal");
            }
        }
        let diag = s.diagonal();
        ensure!(diag.iter().all(|x| !x.is_negative()), "trial {trial}: negative invariant");
        for w in diag.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            ensure!(ok, "trial {trial}: divisibility chain broken at {:?}", w);
        }
        let (h, u) = hermite_normal_form(&a);
        ensure!(u.mul(&a).unwrap() == h, "trial {trial}: u a != h");
        ensure!(u.is_unimodular(), "trial {trial}: HNF transform not unimodular");
        ensure!(is_hermite(&h), "trial {trial}: HNF shape violated");
    }
    Ok("1000 matrices up to 8x8".into())
}

fn criterion_5() -> Outcome {
    let mut rng = rng(5);
    let mut solvable = 0;
    for trial in 0..200 {
        let mut base = random_descriptor(&mut rng);
        let p = rng.gen_range(1..=3);
        let classes: Vec<PicElement> = (0..p).map(|_| random_class(&mut rng, &base)).collect();
        if rng.gen_bool(0.5) {
            let b0 = torus_bundle(&base, &classes);
            let chi: Vec<Rational> = (0..p).map(|_| q(rng.gen_range(-10..=10), 1)).collect();
            base.canonical_class = b0.char_map.apply(&chi).unwrap();
        }
        let b = torus_bundle(&base, &classes);
        let lam = FastLambda::new(&b, &[&base.canonical_class]);
        let k = lam.encode(&b, &base.canonical_class);
        let cy = obstruction_check(&b).map_err(|e| e.to_string())?;
        let part: Option<Vec<BigInt>> = cy.particular.as_ref().map(|v| v.iter().map(Rational::to_integer).collect());
        let lattice = &cy.kernel.lift_lattice;
        let h = IntMatrix::from_fn(lattice.len(), p, |i, j| lattice[i][j].clone());
        let mut found = false;
        let mut failure = None;
        for_each_in_box(p, 10, |x| {
            if failure.is_some() {
                return;
            }
            let brute = lam.eval(x) == k;
            found |= brute;
            let member = part.as_ref().is_some_and(|part| {
                let diff: Vec<BigInt> = x.iter().zip(part).map(|(a, b)| BigInt::from(*a) - b).collect();
                reduce_against(&h, &diff).iter().all(Zero::is_zero)
            });
            if brute != member {
                failure = Some(format!("trial {trial}: χ = {x:?} brute {brute} coset {member}"));
            }
        });
        if let Some(f) = failure {
            return Err(f);
        }
        ensure!(!found || cy.solvable, "trial {trial}: brute force found a solution");
        if let Some(part) = &part {
            let chi: Vec<Rational> = part.iter().map(|x| Rational::from_integer(x.clone())).collect();
            let img = b.char_map.apply(&chi).unwrap();
            ensure!(img == base.pic_group().normalize(&base.canonical_class).unwrap(), "trial {trial}: particular misses K");
        }
        solvable += usize::from(cy.solvable);
    }
    Ok(format!("200 bundles, {solvable} solvable"))
}

fn criterion_6() -> Outcome {
    let dir = golden_dir().join("toric");
    let mut names: Vec<_> = std::fs::read_dir(&dir).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    names.sort();
    ensure!(names.len() == 8, "expected 8 golden files, found {}", names.len());
    for path in &names {
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        let v: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        let fan = cybundle::json::parse_fan(&v["fan"].to_string()).map_err(|e| format!("{name}: {e}"))?;
        let e = &v["expected"];
        let report = check_smooth_complete(&fan);
        ensure!(report.smooth == e["smooth"].as_bool().unwrap(), "{name}: smooth verdict");
        ensure!(report.complete == e["complete"].as_bool().unwrap(), "{name}: complete verdict");
        let cox = cox_data(&fan).map_err(|e| format!("{name}: {e}"))?;
        let t = fan.ray_count();
        ensure!(cox.class_group.free_rank() == t - fan.dim(), "{name}: rank != t - d");
        ensure!(
            cox.class_group.free_rank() as u64 == e["class_group"]["free_rank"].as_u64().unwrap(),
            "{name}: class group rank"
        );
        let tors: Vec<BigInt> = e["class_group"]["torsion"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap().into()).collect();
        ensure!(cox.class_group.invariant_factors() == &tors[..], "{name}: class group torsion");
        let canon: Vec<BigInt> = e["canonical"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap().into()).collect();
        ensure!(cox.canonical_class.coords() == &canon[..], "{name}: K = {:?}", cox.canonical_class.coords());
        ensure!(cox.h_dim as u64 == e["h_dim"].as_u64().unwrap(), "{name}: h_dim");
        let target = lookup(v["target"].as_str().unwrap()).unwrap();
        let (_, cert) = audin_cox_bundle(&fan, &target).map_err(|e| format!("{name}: {e}"))?;
        ensure!(cert.all_pass() == e["certificate"].as_bool().unwrap(), "{name}: certificate {cert:?}");
        ensure!(
            cert.cox_kernel_rank as u64 == e["cox_kernel_rank"].as_u64().unwrap(),
            "{name}: Cox kernel rank"
        );
    }
    Ok(format!("{} fans", names.len()))
}

fn criterion_7() -> Outcome {
    let mut rng = rng(7);
    let mut checked = 0;
    for base in catalog().into_iter().filter(|m| m.kahler) {
        let b = construct_surjective_bundle(&base).map_err(|e| format!("{}: {e}", base.name))?;
        let samples: Vec<Vec<Rational>> = (0..20)
            .map(|_| (0..2 * base.pic0_dim).map(|_| q(rng.gen_range(-50..=50), rng.gen_range(1..=12))).collect())
            .collect();
        let cert = surjectivity_certificate(&b, &samples).map_err(|e| e.to_string())?;
        let pic = base.pic_group();
        let checks = cert.free_generators.iter().chain(&cert.torsion_generators).chain(&cert.pic0_samples);
        for c in checks {
            let pre = c.preimage.as_ref().ok_or_else(|| format!("{}: no preimage of {}", base.name, c.target))?;
            let img = b.char_map.apply(pre).unwrap();
            ensure!(img == pic.normalize(&c.target).unwrap(), "{}: preimage of {} is wrong", base.name, c.target);
        }
        ensure!(cert.torsion_generators.len() == base.ns_torsion.torsion_rank(), "{}: torsion generators", base.name);
        ensure!(cert.pic0_rank_ok, "{}: Pic₀ block rank", base.name);
        ensure!(cert.kernel_dim == base.omega1c_dim, "{}: kernel dim {}", base.name, cert.kernel_dim);
        ensure!(cert.all_pass(), "{}: certificate", base.name);
        checked += 1;
    }
    Ok(format!("{checked} Kähler catalog entries"))
}

fn criterion_8() -> Outcome {
    let mut rng = rng(8);
    for trial in 0..100 {
        let base = random_descriptor(&mut rng);
        let g0 = random_structure_group(&mut rng);
        let g1 = random_structure_group(&mut rng);
        let g2 = random_structure_group(&mut rng);
        let lambda = random_hom(&mut rng, &g0.character_group(), &base.pic_group().mixed());
        let b = bundle_with_map(g0.clone(), &base, lambda, g0.vector_rank());
        let h = GroupHom::new(g0.clone(), g1.clone(), random_hom(&mut rng, &g0.model_group(), &g1.model_group()).matrix().clone())
            .map_err(|e| e.to_string())?;
        let g = GroupHom::new(g1.clone(), g2.clone(), random_hom(&mut rng, &g1.model_group(), &g2.model_group()).matrix().clone())
            .map_err(|e| e.to_string())?;

        // The dual is characterized by the pairing.
        for f in [&h, &g] {
            let fd = f.dual().map_err(|e| e.to_string())?;
            let (src, tgt) = (f.source().model_group(), f.target().model_group());
            for _ in 0..5 {
                let chi = random_element(&mut rng, &f.target().character_group());
                let x = random_element(&mut rng, &src);
                let lhs = pairing(src.kinds(), &fd.apply(&chi).unwrap(), &x);
                let rhs = pairing(tgt.kinds(), &chi, &f.map().apply(&x).unwrap());
                ensure!(lhs == rhs, "trial {trial}: pairing mismatch");
            }
        }
        let bh = induced_bundle(&b, &h).map_err(|e| e.to_string())?;
        let product = b.char_map.hom().matrix().mul(h.dual().unwrap().matrix()).unwrap();
        let blockwise = MixedHom::new(g1.character_group(), base.pic_group().mixed(), product).map_err(|e| e.to_string())?;
        ensure!(bh.char_map.hom() == &blockwise, "trial {trial}: λ ∘ ĥ differs");
        let chained = induced_bundle(&bh, &g).map_err(|e| e.to_string())?;
        let direct = induced_bundle(&b, &g.compose(&h).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure!(chained.char_map.hom() == direct.char_map.hom(), "trial {trial}: induction is not functorial");
    }
    Ok("100 composable pairs".into())
}

fn criterion_9() -> Outcome {
    for n in 1..=4 {
        let base = lookup(&format!("P{n}")).unwrap();
        let v = sufficiency_check(&RmGroup::new(1, 0, 0), &base).map_err(|e| e.to_string())?;
        ensure!(v == Verdict::Sufficient, "P{n}: {v:?}");
        let b = build_abelian_cy_bundle(&RmGroup::new(1, 0, 0), &base).map_err(|e| e.to_string())?;
        ensure!(obstruction_check(&b).unwrap().solvable, "P{n}: bundle is not CY");
    }
    let c2 = lookup("curveG2").unwrap();
    let v = sufficiency_check(&RmGroup::new(1, 4, 0), &c2).map_err(|e| e.to_string())?;
    ensure!(v == Verdict::Sufficient, "curveG2 (1,4): {v:?}");
    let b = build_abelian_cy_bundle(&RmGroup::new(1, 4, 0), &c2).map_err(|e| e.to_string())?;
    ensure!(obstruction_check(&b).unwrap().solvable, "curveG2 (1,4): bundle is not CY");
    let v = sufficiency_check(&RmGroup::new(1, 3, 0), &c2).map_err(|e| e.to_string())?;
    ensure!(matches!(v, Verdict::Unknown(_)), "curveG2 (1,3): {v:?}");
    Ok("P1..P4 (1,0), curveG2 (1,4) and (1,3)".into())
}

fn main() -> ExitCode {
    let criteria: [(fn() -> Outcome, u64); 9] = [
        (criterion_1, 1),
        (criterion_2, 1),
        (criterion_3, 1),
        (criterion_4, 30),
        (criterion_5, 60),
        (criterion_6, 5),
        (criterion_7, 5),
        (criterion_8, 10),
        (criterion_9, 1),
    ];
    let mut failed = 0;
    for (i, (f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(*limit);
        let result = match result {
            Ok(s) if elapsed > limit => Err(format!("{s}, but exceeded {limit:?}")),
            r => r,
        };
        match result {
            Ok(s) => println!("criterion {}: PASS ({:.3}s) {s}", i + 1, elapsed.as_secs_f64()),
            Err(s) => {
                failed += 1;
                println!("criterion {}: FAIL ({:.3}s) {s}", i + 1, elapsed.as_secs_f64());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
