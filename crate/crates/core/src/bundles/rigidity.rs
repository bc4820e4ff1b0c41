use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};

use super::{BundleError, PrincipalBundle};
use crate::fga::{IntMatrix, QMatrix, Rational};

pub const DEFAULT_SEARCH_RADIUS: u32 = 10;

/// Candidate assemblies examined before the search gives up.
const SEARCH_BUDGET: u64 = 2_000_000;

pub fn search_radius_from_env() -> u32 {
    std::env::var("CYBUNDLE_SEARCH_RADIUS")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEARCH_RADIUS)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RigidityOutcome {
    /// `λ_N ∘ xi = λ_M`; `xi_dual = xi^{-T}` is the twist on `H`.
    Isomorphic { xi: IntMatrix, xi_dual: IntMatrix },
    NotIsomorphic { reason: String },
    /// No unimodular assembly with kernel coefficients up to `radius`.
    Undecided { radius: u32 },
    Unsupported { reason: String },
}

pub fn rigidity_solve(m: &PrincipalBundle, n: &PrincipalBundle) -> Result<RigidityOutcome, BundleError> {
    rigidity_solve_with_radius(m, n, search_radius_from_env())
}

fn found(xi: IntMatrix) -> RigidityOutcome {
    let q = QMatrix::from_fn(xi.rows(), xi.cols(), |i, j| Rational::from_integer(xi[(i, j)].clone()));
    let inv = q.inverse().expect("unimodular");
    let xi_dual = IntMatrix::from_fn(xi.rows(), xi.cols(), |i, j| inv[(j, i)].to_integer());
    RigidityOutcome::Isomorphic { xi, xi_dual }
}

fn not_iso(reason: impl Into<String>) -> RigidityOutcome {
    RigidityOutcome::NotIsomorphic { reason: reason.into() }
}

pub fn rigidity_solve_with_radius(
    m: &PrincipalBundle,
    n: &PrincipalBundle,
    radius: u32,
) -> Result<RigidityOutcome, BundleError> {
    if m.base() != n.base() {
        return Err(BundleError::Mismatch("bundles live over different bases".into()));
    }
    if m.group() != n.group() {
        return Err(BundleError::Mismatch("bundles have different structure groups".into()));
    }
    if !m.group().is_pure_torus() {
        return Ok(RigidityOutcome::Unsupported {
            reason: "rigidity is only decided for (C^×)^p structure groups".into(),
        });
    }
    let p = m.group().torus_rank();
    let (lm, ln) = (&m.char_map, &n.char_map);

    let mut particulars = Vec::with_capacity(p);
    let mut lattice = Vec::new();
    for j in 0..p {
        let Some(sol) = ln.preimage(&lm.column_class(j))? else {
            return Ok(not_iso(format!("λ_M(e_{j}) is not in the image of λ_N")));
        };
        particulars.push(sol.particular.iter().map(Rational::to_integer).collect::<Vec<_>>());
        lattice = sol.kernel.lift_lattice;
    }
    let assemble = |cols: &[Vec<BigInt>]| IntMatrix::from_fn(p, p, |i, j| cols[j][i].clone());

    if lattice.is_empty() {
        let xi = assemble(&particulars);
        return Ok(if xi.is_unimodular() {
            found(xi)
        } else {
            not_iso(format!("the unique solution has determinant {}", xi.determinant()?))
        });
    }
    for j in 0..p {
        if lm.preimage(&ln.column_class(j))?.is_none() {
            return Ok(not_iso("the images of λ_M and λ_N differ"));
        }
    }
    if p == 1 {
        let y = lm.column_class(0);
        for s in [1i64, -1] {
            if ln.apply(&[Rational::from_integer(BigInt::from(s))])? == y {
                return Ok(found(IntMatrix::from_rows(&[vec![s]])));
            }
        }
        return Ok(not_iso("neither ±1 intertwines the maps"));
    }
    Ok(search(&particulars, &lattice, radius).map_or(RigidityOutcome::Undecided { radius }, |xi| found(xi)))
}

fn to_small(v: &[BigInt]) -> Option<Vec<i128>> {
    v.iter()
        .map(|x| x.to_i128().filter(|x| x.abs() < (1i128 << 40)))
        .collect()
}

/// Determinant by fraction-free elimination; `None` on overflow.
fn det_i128(mut a: Vec<Vec<i128>>) -> Option<i128> {
    let n = a.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            let Some(s) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return Some(0);
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].checked_mul(a[k][k])?.checked_sub(a[i][k].checked_mul(a[k][j])?)?;
                a[i][j] = v / prev;
            }
        }
        prev = a[k][k];
    }
    Some(sign * a[n - 1][n - 1])
}

/// Shell search over kernel coefficients `c_{j,l}`, `max |c| = 0, 1, ...`.
fn search(particulars: &[Vec<BigInt>], lattice: &[Vec<BigInt>], radius: u32) -> Option<IntMatrix> {
    let p = particulars.len();
    let k = lattice.len();
    let ps: Vec<Vec<i128>> = particulars.iter().map(|v| to_small(v)).collect::<Option<_>>()?;
    let ls: Vec<Vec<i128>> = lattice.iter().map(|v| to_small(v)).collect::<Option<_>>()?;
    let unknowns = p * k;
    let mut budget = SEARCH_BUDGET;
    for r in 0..=i128::from(radius) {
        let mut c = vec![-r; unknowns];
        loop {
            if c.iter().any(|x| x.abs() == r) {
                if budget == 0 {
                    return None;
                }
                budget -= 1;
                // Row-major: rows are columns of xi.
                let cols: Vec<Vec<i128>> = (0..p)
                    .map(|j| {
                        (0..p)
                            .map(|i| ps[j][i] + (0..k).map(|l| c[j * k + l] * ls[l][i]).sum::<i128>())
                            .collect()
                    })
                    .collect();
                if let Some(d) = det_i128(cols.clone()) {
                    if d.abs() == 1 {
                        return Some(IntMatrix::from_fn(p, p, |i, j| BigInt::from(cols[j][i])));
                    }
                }
            }
            // Odometer step.
            let mut idx = 0;
            loop {
                if idx == unknowns {
                    break;
                }
                if c[idx] < r {
                    c[idx] += 1;
                    break;
                }
                c[idx] = -r;
                idx += 1;
            }
            if idx == unknowns {
                break;
            }
        }
    }
    None
}
