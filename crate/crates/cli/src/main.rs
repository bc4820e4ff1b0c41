use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cybundle::bundles::{
    construct_surjective_bundle, default_pic0_samples, obstruction_check, rank1_roots, rigidity_solve_with_radius,
    surjectivity_certificate, PrincipalBundle, RigidityOutcome, Roots, DEFAULT_SEARCH_RADIUS,
};
use cybundle::fga::{FgaGroup, Rational};
use cybundle::json::{self as cj, JsonError};
use cybundle::picard::{catalog, lookup, validate, ManifoldDescriptor, PicElement};
use cybundle::rm::{build_abelian_cy_bundle, required_torus_rank, sufficiency_check, Verdict};
use cybundle::toric::{audin_cox_bundle, check_smooth_complete, cox_data, Fan};

mod render;

use render::{fmt_ints, fmt_rationals, Report};

#[derive(Parser, Debug)]
#[command(name = "cybundle", version, about = "Character maps of principal bundles over compact complex manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in manifolds.
    Catalog,
    /// Check the consistency relations of a manifold descriptor.
    Validate {
        #[arg(long)]
        manifold: String,
    },
    /// Decide whether K_X lies in the image of the character map.
    Obstruct {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        bundle: PathBuf,
    },
    /// All CY structures: a coset of the kernel of the character map.
    CyStructures {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        bundle: PathBuf,
    },
    /// Search for xi with λ_N ∘ xi = λ_M; pass M and N as two --bundle flags.
    Rigidity {
        #[arg(long)]
        manifold: String,
        #[arg(long, num_args = 1, required = true)]
        bundle: Vec<PathBuf>,
        /// Bound on kernel coefficients in the unimodular search.
        #[arg(long, env = "CYBUNDLE_SEARCH_RADIUS", default_value_t = DEFAULT_SEARCH_RADIUS)]
        radius: u32,
    },
    /// CY bundle with surjective character map and its certificate.
    ConstructSurjective {
        #[arg(long)]
        manifold: String,
        /// Rational Pic₀ points to test.
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
    /// Class group, canonical class and Audin-Cox bundle of a fan.
    ToricCox {
        #[arg(long)]
        fan: PathBuf,
        /// Descriptor to check against; derived from the fan when omitted.
        #[arg(long)]
        manifold: Option<String>,
    },
    /// Whether (C^×)^a × C^b × G₀ carries a CY bundle with surjective map.
    RmCheck {
        #[arg(long)]
        manifold: String,
        #[arg(long)]
        group: PathBuf,
    },
    /// Pairs (k, L) with K_X = kL on a base with Pic = Z.
    Roots {
        #[arg(long)]
        manifold: String,
    },
}

#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
    position: Option<(usize, usize)>,
}

impl Failure {
    fn new(kind: &'static str, message: impl ToString) -> Self {
        Failure {
            kind,
            message: message.to_string(),
            position: None,
        }
    }

    fn value(&self) -> Value {
        let mut v = json!({ "kind": self.kind, "message": self.message });
        if let Some((line, column)) = self.position {
            v["line"] = json!(line);
            v["column"] = json!(column);
        }
        json!({ "error": v })
    }
}

fn json_failure(what: &Path, e: JsonError) -> Failure {
    match e {
        JsonError::Syntax { line, column, message } => Failure {
            kind: "json",
            message: format!("{}: {message}", what.display()),
            position: Some((line, column)),
        },
        JsonError::Invalid(m) => Failure::new("invalid", format!("{}: {m}", what.display())),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new("io", format!("{}: {e}", path.display())))
}

fn load_manifold(spec: &str) -> Result<ManifoldDescriptor, Failure> {
    if let Some(m) = lookup(spec) {
        return Ok(m);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Failure::new("io", format!("{spec:?} is neither a catalog name nor a file")));
    }
    cj::parse_manifold(&read(path)?).map_err(|e| json_failure(path, e))
}

fn load_bundle(path: &Path, base: &ManifoldDescriptor) -> Result<PrincipalBundle, Failure> {
    cj::parse_bundle(&read(path)?, Some(base)).map_err(|e| json_failure(path, e))
}

fn load_fan(path: &Path) -> Result<Fan, Failure> {
    cj::parse_fan(&read(path)?).map_err(|e| json_failure(path, e))
}

fn domain(e: impl ToString) -> Failure {
    Failure::new("domain", e)
}

fn class_text(x: &PicElement) -> String {
    x.to_string()
}

fn run(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Catalog => {
            let all = catalog();
            let mut r = Report::new(json!({ "manifolds": all.iter().map(cj::manifold_value).collect::<Vec<_>>() }));
            for m in &all {
                r.line(format!(
                    "{:<14} dim {}  NS Z^{} + {}  Pic0 dim {}  K = {}",
                    m.name,
                    m.dim,
                    m.ns_free_rank,
                    m.ns_torsion,
                    m.pic0_dim,
                    class_text(&m.canonical_class)
                ));
            }
            Ok(r)
        }
        Command::Validate { manifold } => {
            let m = load_manifold(manifold)?;
            let violations = validate(&m);
            if !violations.is_empty() {
                return Err(Failure::new("invalid", format!("{}: {}", m.name, violations.join("; "))));
            }
            let mut r = Report::new(json!({ "manifold": m.name, "valid": true, "violations": [] }));
            r.line(format!("{}: valid", m.name));
            Ok(r)
        }
        Command::Obstruct { manifold, bundle } => {
            let base = load_manifold(manifold)?;
            let b = load_bundle(bundle, &base)?;
            let cy = obstruction_check(&b).map_err(domain)?;
            let mut r = Report::new(json!({
                "bundle": b.name,
                "canonical": cj::pic_element_value(&base.canonical_class),
                "solvable": cy.solvable,
                "particular": cy.particular.as_deref().map(cj::rationals_value),
            }));
            match &cy.particular {
                Some(chi) => r.line(format!("solvable: K_X = λ({})", fmt_rationals(chi))),
                None => r.line("not solvable: K_X is not in the image of λ".to_string()),
            }
            Ok(r)
        }
        Command::CyStructures { manifold, bundle } => {
            let base = load_manifold(manifold)?;
            let b = load_bundle(bundle, &base)?;
            let cy = obstruction_check(&b).map_err(domain)?;
            let k = &cy.kernel;
            let mut r = Report::new(json!({
                "bundle": b.name,
                "solvable": cy.solvable,
                "particular": cy.particular.as_deref().map(cj::rationals_value),
                "kernel": {
                    "generators": k.generators.iter().map(|v| cj::rationals_value(v)).collect::<Vec<_>>(),
                    "rational_basis": k.rational_basis.iter().map(|v| cj::rationals_value(v)).collect::<Vec<_>>(),
                    "lift_lattice": k.lift_lattice.iter().map(|v| cj::ints_value(v)).collect::<Vec<_>>(),
                },
                "continuous_kernel_dim": cy.continuous_kernel_dim,
            }));
            let Some(chi) = &cy.particular else {
                r.line("no CY structures: K_X is not in the image of λ".to_string());
                return Ok(r);
            };
            let gens: Vec<String> = k.generators.iter().map(|v| fmt_rationals(v)).collect();
            let span: Vec<String> = k.generators.iter().map(|v| format!(" + Z·{}", fmt_rationals(v))).collect();
            r.line(format!("coset: {}{}", fmt_rationals(chi), span.concat()));
            r.line(format!("particular: {}", fmt_rationals(chi)));
            r.line(format!("kernel generators: {{{}}}", gens.join(", ")));
            if !k.rational_basis.is_empty() {
                let qs: Vec<String> = k.rational_basis.iter().map(|v| fmt_rationals(v)).collect();
                r.line(format!("rational kernel directions: {{{}}}", qs.join(", ")));
            }
            r.line(format!("continuous kernel dimension: {}", cy.continuous_kernel_dim));
            Ok(r)
        }
        Command::Rigidity { manifold, bundle, radius } => {
            let [m_path, n_path] = bundle.as_slice() else {
                return Err(Failure::new("usage", "rigidity needs exactly two --bundle arguments"));
            };
            let base = load_manifold(manifold)?;
            let (m, n) = (load_bundle(m_path, &base)?, load_bundle(n_path, &base)?);
            let outcome = rigidity_solve_with_radius(&m, &n, *radius).map_err(domain)?;
            let (v, text) = match &outcome {
                RigidityOutcome::Isomorphic { xi, xi_dual } => (
                    json!({ "outcome": "isomorphic", "xi": cj::int_matrix_value(xi), "xi_dual": cj::int_matrix_value(xi_dual) }),
                    format!("isomorphic up to twist: xi = {}, xi^ = {}", render::fmt_matrix(xi), render::fmt_matrix(xi_dual)),
                ),
                RigidityOutcome::NotIsomorphic { reason } => (
                    json!({ "outcome": "not-isomorphic", "reason": reason }),
                    format!("not isomorphic: {reason}"),
                ),
                RigidityOutcome::Undecided { radius } => (
                    json!({ "outcome": "undecided", "radius": radius }),
                    format!("undecided: no unimodular xi with kernel coefficients up to {radius}"),
                ),
                RigidityOutcome::Unsupported { reason } => (
                    json!({ "outcome": "unsupported", "reason": reason }),
                    format!("unsupported: {reason}"),
                ),
            };
            let mut r = Report::new(v);
            r.line(text);
            Ok(r)
        }
        Command::ConstructSurjective { manifold, samples } => {
            let base = load_manifold(manifold)?;
            let b = construct_surjective_bundle(&base).map_err(domain)?;
            let points = default_pic0_samples(base.pic0_dim, *samples);
            let cert = surjectivity_certificate(&b, &points).map_err(domain)?;
            let check = |c: &cybundle::bundles::GeneratorCheck| {
                json!({ "target": cj::pic_element_value(&c.target), "preimage": c.preimage.as_deref().map(cj::rationals_value) })
            };
            let mut r = Report::new(json!({
                "bundle": cj::bundle_value(&b),
                "certificate": {
                    "free_generators": cert.free_generators.iter().map(check).collect::<Vec<_>>(),
                    "torsion_generators": cert.torsion_generators.iter().map(check).collect::<Vec<_>>(),
                    "pic0_samples": cert.pic0_samples.iter().map(check).collect::<Vec<_>>(),
                    "pic0_rank_ok": cert.pic0_rank_ok,
                    "kernel_dim": cert.kernel_dim,
                    "expected_kernel_dim": cert.expected_kernel_dim,
                    "pass": cert.all_pass(),
                },
            }));
            let g = b.group();
            r.line(format!(
                "{}: group (C^×)^{} × π₁ab with π₁ab = {}",
                b.name,
                g.torus_rank(),
                g.pi1_factor().cloned().unwrap_or_else(FgaGroup::trivial)
            ));
            for c in cert.free_generators.iter().chain(&cert.torsion_generators) {
                let pre = c.preimage.as_deref().map_or("none".to_string(), fmt_rationals);
                r.line(format!("  {} <- {pre}", class_text(&c.target)));
            }
            let hit = cert.pic0_samples.iter().filter(|c| c.ok()).count();
            r.line(format!("  Pic₀ samples with preimages: {hit}/{}", cert.pic0_samples.len()));
            r.line(format!("  kernel dimension {} (expected {})", cert.kernel_dim, cert.expected_kernel_dim));
            r.line(format!("certificate: {}", if cert.all_pass() { "pass" } else { "FAIL" }));
            Ok(r)
        }
        Command::ToricCox { fan, manifold } => {
            let f = load_fan(fan)?;
            let report = check_smooth_complete(&f);
            let fan_report = json!({
                "simplicial": report.simplicial,
                "smooth": report.smooth,
                "complete": report.complete,
                "failures": report.failures,
            });
            if !report.passes() {
                return Err(Failure::new("domain", format!("fan is not smooth and complete: {}", report.failures.join("; "))));
            }
            let cox = cox_data(&f).map_err(domain)?;
            let target = match manifold {
                Some(s) => load_manifold(s)?,
                None => toric_descriptor(&f, &cox),
            };
            let (b, cert) = audin_cox_bundle(&f, &target).map_err(domain)?;
            let mut r = Report::new(json!({
                "fan": fan_report,
                "class_group": {
                    "free_rank": cox.class_group.free_rank(),
                    "torsion": cj::ints_value(cox.class_group.invariant_factors()),
                },
                "canonical": cj::ints_value(cox.canonical_class.coords()),
                "h_dim": cox.h_dim,
                "quotient_map": cj::int_matrix_value(cox.quotient_map.matrix()),
                "bundle": cj::bundle_value(&b),
                "certificate": {
                    "lambda_isomorphism": cert.lambda_isomorphism,
                    "canonical_in_image": cert.canonical_in_image,
                    "rigidity_identity": cert.rigidity_identity,
                    "cox_kernel_rank": cert.cox_kernel_rank,
                    "pass": cert.all_pass(),
                },
            }));
            r.line("fan: simplicial, smooth, complete".to_string());
            r.line(format!("Cl = {}", cox.class_group));
            r.line(format!("K = {}", fmt_ints(cox.canonical_class.coords())));
            r.line(format!("H = (C^×)^{}", cox.h_dim));
            r.line(format!("Cox map: {}", render::fmt_matrix(cox.quotient_map.matrix())));
            r.line(format!("certificate: {}", if cert.all_pass() { "pass" } else { "FAIL" }));
            Ok(r)
        }
        Command::RmCheck { manifold, group } => {
            let base = load_manifold(manifold)?;
            let g = cj::parse_group(&read(group)?).map_err(|e| json_failure(group, e))?;
            let verdict = sufficiency_check(&g, &base).map_err(domain)?;
            let (name, reason) = match &verdict {
                Verdict::Sufficient => ("sufficient", String::new()),
                Verdict::Insufficient(s) => ("insufficient", s.clone()),
                Verdict::Unknown(s) => ("unknown", s.clone()),
            };
            let mut v = json!({
                "group": cj::group_value(&g),
                "required": { "torus_rank": required_torus_rank(&base), "vector_rank": base.pi1_free_rank() },
                "verdict": name,
                "reason": reason,
            });
            let mut lines = vec![format!(
                "(C^×)^{} × C^{} × G₀(dim {}) over {}: {name}",
                g.torus_rank, g.vector_rank, g.cousin_dim, base.name
            )];
            if !reason.is_empty() {
                lines.push(format!("  {reason}"));
            }
            if verdict == Verdict::Sufficient {
                let b = build_abelian_cy_bundle(&g, &base).map_err(domain)?;
                let cy = obstruction_check(&b).map_err(domain)?;
                v["bundle"] = cj::bundle_value(&b);
                v["cy_solvable"] = json!(cy.solvable);
                lines.push(format!("  bundle {} is CY: {}", b.name, cy.solvable));
            }
            let mut r = Report::new(v);
            for l in lines {
                r.line(l);
            }
            Ok(r)
        }
        Command::Roots { manifold } => {
            let base = load_manifold(manifold)?;
            let mut r;
            match rank1_roots(&base).map_err(domain)? {
                Roots::All { root } => {
                    r = Report::new(json!({ "all": true, "root": cj::pic_element_value(&root) }));
                    r.line("K_X = 0: every k, with root the trivial class".to_string());
                }
                Roots::Finite(list) => {
                    r = Report::new(json!({
                        "all": false,
                        "roots": list.iter().map(|(k, l)| json!({ "k": cj::int_value(k), "root": cj::pic_element_value(l) })).collect::<Vec<_>>(),
                    }));
                    let ks: Vec<String> = list.iter().map(|(k, _)| k.to_string()).collect();
                    r.line(format!("k ∈ {{{}}}", ks.join(", ")));
                    for (k, l) in &list {
                        r.line(format!("  K = {k}·{}", class_text(l)));
                    }
                }
            }
            Ok(r)
        }
    }
}

/// The descriptor a smooth complete toric variety is forced to have.
fn toric_descriptor(f: &Fan, cox: &cybundle::toric::CoxData) -> ManifoldDescriptor {
    let cl = &cox.class_group;
    let p = cl.free_rank();
    let coords = cox.canonical_class.coords();
    ManifoldDescriptor {
        name: "toric".into(),
        dim: f.dim(),
        kahler: true,
        ns_free_rank: p,
        ns_torsion: cl.torsion_subgroup(),
        pic0_dim: 0,
        pi1_ab: FgaGroup::trivial(),
        omega1c_dim: 0,
        canonical_class: PicElement::new(coords[..p].to_vec(), coords[p..].to_vec(), Vec::<Rational>::new()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(report) => {
            match cli.format {
                Format::Text => print!("{}", report.text()),
                Format::Json => println!("{}", serde_json::to_string_pretty(&report.json).expect("serializable")),
            }
            ExitCode::SUCCESS
        }
        Err(f) if f.kind == "usage" => {
            eprintln!("error: {}", f.message);
            ExitCode::from(2)
        }
        Err(f) => {
            eprintln!("{}", f.value());
            ExitCode::from(1)
        }
    }
}
