//! JSON formats for manifolds, fans, structure groups and bundles.
//!
//! Integers are JSON numbers, or decimal strings when they do not fit in an
//! `i64`. Rationals are `["num", "den"]` string pairs. Parsers reject
//! oversized inputs before doing any arithmetic.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bundles::{CharacterMap, PrincipalBundle, Provenance, StructureGroupDesc};
use crate::fga::{FgaGroup, IntMatrix, QMatrix, Rational};
use crate::picard::{ManifoldDescriptor, PicElement};
use crate::rm::RmGroup;
use crate::toric::Fan;

/// Upper bound for ranks, dimensions and list lengths.
pub const MAX_RANK: usize = 1024;
pub const MAX_RAYS: usize = 256;
pub const MAX_FAN_DIM: usize = 32;
pub const MAX_CONES: usize = 4096;
/// Longest accepted decimal string for one integer.
pub const MAX_DIGITS: usize = 2048;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("invalid document: {0}")]
    Invalid(String),
}

impl From<serde_json::Error> for JsonError {
    fn from(e: serde_json::Error) -> Self {
        JsonError::Syntax {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

fn invalid<T>(s: impl Into<String>) -> Result<T, JsonError> {
    Err(JsonError::Invalid(s.into()))
}

#[derive(Deserialize, Serialize, Clone, Debug)]
#[serde(untagged)]
enum IntDto {
    Num(i64),
    Str(String),
}

fn int(x: &IntDto) -> Result<BigInt, JsonError> {
    match x {
        IntDto::Num(n) => Ok(BigInt::from(*n)),
        IntDto::Str(s) => {
            if s.len() > MAX_DIGITS {
                return invalid("integer string too long");
            }
            let body = s.strip_prefix('-').unwrap_or(s);
            if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
                return invalid(format!("not a decimal integer: {s:?}"));
            }
            s.parse().map_err(|_| JsonError::Invalid(format!("not a decimal integer: {s:?}")))
        }
    }
}

fn ints(xs: &[IntDto]) -> Result<Vec<BigInt>, JsonError> {
    cap(xs.len(), "integer list")?;
    xs.iter().map(int).collect()
}

fn rational(x: &[String; 2]) -> Result<Rational, JsonError> {
    let n = int(&IntDto::Str(x[0].clone()))?;
    let d = int(&IntDto::Str(x[1].clone()))?;
    if d.is_zero() {
        return invalid("zero denominator");
    }
    Ok(Rational::new(n, d))
}

fn cap(n: usize, what: &str) -> Result<usize, JsonError> {
    if n > MAX_RANK {
        invalid(format!("{what} of size {n} exceeds the limit {MAX_RANK}"))
    } else {
        Ok(n)
    }
}

pub fn int_value(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(n) => json!(n),
        Err(_) => json!(x.to_string()),
    }
}

pub fn ints_value(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_value).collect())
}

pub fn rational_value(x: &Rational) -> Value {
    json!([x.numer().to_string(), x.denom().to_string()])
}

pub fn rationals_value(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(rational_value).collect())
}

pub fn int_matrix_value(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| ints_value(m.row(i))).collect())
}

pub fn rational_matrix_value(m: &QMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| rationals_value(m.row(i))).collect())
}

fn torsion_group(factors: &[IntDto], what: &str) -> Result<FgaGroup, JsonError> {
    FgaGroup::new(0, ints(factors)?).map_err(|e| JsonError::Invalid(format!("{what}: {e}")))
}

#[derive(Deserialize, Serialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct PicDto {
    #[serde(default)]
    free: Vec<IntDto>,
    #[serde(default)]
    torsion: Vec<IntDto>,
    #[serde(default)]
    pic0: Vec<[String; 2]>,
}

impl PicDto {
    fn build(&self) -> Result<PicElement, JsonError> {
        cap(self.pic0.len(), "pic0 list")?;
        Ok(PicElement::new(
            ints(&self.free)?,
            ints(&self.torsion)?,
            self.pic0.iter().map(rational).collect::<Result<_, _>>()?,
        ))
    }
}

pub fn pic_element_value(x: &PicElement) -> Value {
    json!({
        "free": ints_value(&x.free),
        "torsion": ints_value(&x.torsion),
        "pic0": rationals_value(&x.pic0),
    })
}

#[derive(Deserialize, Serialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct ManifoldDto {
    name: String,
    dim: usize,
    kahler: bool,
    ns_free_rank: usize,
    #[serde(default)]
    ns_torsion: Vec<IntDto>,
    pic0_dim: usize,
    pi1_free_rank: usize,
    #[serde(default)]
    pi1_torsion: Vec<IntDto>,
    omega1c_dim: usize,
    canonical: PicDto,
}

impl ManifoldDto {
    fn build(&self) -> Result<ManifoldDescriptor, JsonError> {
        for (n, what) in [
            (self.dim, "dim"),
            (self.ns_free_rank, "ns_free_rank"),
            (self.pic0_dim, "pic0_dim"),
            (self.pi1_free_rank, "pi1_free_rank"),
            (self.omega1c_dim, "omega1c_dim"),
        ] {
            cap(n, what)?;
        }
        if self.name.len() > 256 {
            return invalid("name too long");
        }
        let t = torsion_group(&self.pi1_torsion, "pi1_torsion")?;
        Ok(ManifoldDescriptor {
            name: self.name.clone(),
            dim: self.dim,
            kahler: self.kahler,
            ns_free_rank: self.ns_free_rank,
            ns_torsion: torsion_group(&self.ns_torsion, "ns_torsion")?,
            pic0_dim: self.pic0_dim,
            pi1_ab: FgaGroup::new(self.pi1_free_rank, t.invariant_factors().to_vec()).expect("canonical"),
            omega1c_dim: self.omega1c_dim,
            canonical_class: self.canonical.build()?,
        })
    }
}

pub fn parse_manifold(text: &str) -> Result<ManifoldDescriptor, JsonError> {
    manifold_from_value(serde_json::from_str(text)?)
}

fn manifold_from_value(v: Value) -> Result<ManifoldDescriptor, JsonError> {
    let dto: ManifoldDto = serde_json::from_value(v)?;
    dto.build()
}

pub fn manifold_value(m: &ManifoldDescriptor) -> Value {
    json!({
        "name": m.name,
        "dim": m.dim,
        "kahler": m.kahler,
        "ns_free_rank": m.ns_free_rank,
        "ns_torsion": ints_value(m.ns_torsion.invariant_factors()),
        "pic0_dim": m.pic0_dim,
        "pi1_free_rank": m.pi1_ab.free_rank(),
        "pi1_torsion": ints_value(m.pi1_ab.invariant_factors()),
        "omega1c_dim": m.omega1c_dim,
        "canonical": pic_element_value(&m.canonical_class),
    })
}

#[derive(Deserialize, Serialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct FanDto {
    dim: usize,
    rays: Vec<Vec<IntDto>>,
    max_cones: Vec<Vec<usize>>,
}

pub fn parse_fan(text: &str) -> Result<Fan, JsonError> {
    let dto: FanDto = serde_json::from_str(text)?;
    if dto.dim > MAX_FAN_DIM {
        return invalid(format!("fan dimension {} exceeds {MAX_FAN_DIM}", dto.dim));
    }
    if dto.rays.len() > MAX_RAYS {
        return invalid(format!("{} rays exceed {MAX_RAYS}", dto.rays.len()));
    }
    if dto.max_cones.len() > MAX_CONES || dto.max_cones.iter().any(|c| c.len() > MAX_FAN_DIM) {
        return invalid("too many cones or cone too large");
    }
    let rays = dto.rays.iter().map(|r| ints(r)).collect::<Result<Vec<_>, _>>()?;
    if rays.iter().flatten().any(|x| x.bits() > 64) {
        return invalid("ray coordinates must fit in 64 bits");
    }
    Fan::new(dto.dim, rays, dto.max_cones).map_err(|e| JsonError::Invalid(e.to_string()))
}

pub fn fan_value(f: &Fan) -> Value {
    json!({
        "dim": f.dim(),
        "rays": f.rays().iter().map(|r| ints_value(r)).collect::<Vec<_>>(),
        "max_cones": f.max_cones(),
    })
}

#[derive(Deserialize, Serialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct RmGroupDto {
    torus_rank: usize,
    vector_rank: usize,
    #[serde(default)]
    cousin_dim: usize,
}

pub fn parse_group(text: &str) -> Result<RmGroup, JsonError> {
    let dto: RmGroupDto = serde_json::from_str(text)?;
    cap(dto.torus_rank, "torus_rank")?;
    cap(dto.vector_rank, "vector_rank")?;
    cap(dto.cousin_dim, "cousin_dim")?;
    Ok(RmGroup::new(dto.torus_rank, dto.vector_rank, dto.cousin_dim))
}

pub fn group_value(g: &RmGroup) -> Value {
    json!({"torus_rank": g.torus_rank, "vector_rank": g.vector_rank, "cousin_dim": g.cousin_dim})
}

#[derive(Deserialize, Serialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct Pi1Dto {
    free_rank: usize,
    #[serde(default)]
    torsion: Vec<IntDto>,
}

#[derive(Deserialize, Serialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct StructureGroupDto {
    torus_rank: usize,
    #[serde(default)]
    vector_rank: usize,
    #[serde(default)]
    cousin_dim: usize,
    #[serde(default)]
    pi1_factor: Option<Pi1Dto>,
}

impl StructureGroupDto {
    fn build(&self) -> Result<StructureGroupDesc, JsonError> {
        cap(self.torus_rank, "torus_rank")?;
        cap(self.vector_rank, "vector_rank")?;
        cap(self.cousin_dim, "cousin_dim")?;
        let pi1 = match &self.pi1_factor {
            None => None,
            Some(p) => {
                cap(p.free_rank, "pi1 free_rank")?;
                let t = torsion_group(&p.torsion, "pi1 torsion")?;
                Some(FgaGroup::new(p.free_rank, t.invariant_factors().to_vec()).expect("canonical"))
            }
        };
        Ok(StructureGroupDesc::new(self.torus_rank, self.vector_rank, self.cousin_dim, pi1))
    }
}

pub fn structure_group_value(g: &StructureGroupDesc) -> Value {
    json!({
        "torus_rank": g.torus_rank(),
        "vector_rank": g.vector_rank(),
        "cousin_dim": g.cousin_dim(),
        "pi1_factor": g.pi1_factor().map(|p| json!({
            "free_rank": p.free_rank(),
            "torsion": ints_value(p.invariant_factors()),
        })),
    })
}

#[derive(Deserialize, Serialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct CharMapDto {
    free_block: Vec<Vec<IntDto>>,
    torsion_block: Vec<Vec<IntDto>>,
    pic0_block: Vec<Vec<[String; 2]>>,
    #[serde(default)]
    continuous_kernel_dim: usize,
}

#[derive(Deserialize, Serialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct FullBundleDto {
    name: String,
    group: StructureGroupDto,
    base: Value,
    char_map: CharMapDto,
    #[serde(default = "custom_provenance")]
    provenance: Provenance,
}

fn custom_provenance() -> Provenance {
    Provenance::Custom { label: "input".into() }
}

#[derive(Deserialize, Serialize, Clone, Debug)]
#[serde(deny_unknown_fields)]
struct WhitneyDto {
    classes: Vec<PicDto>,
}

fn int_matrix(rows: &[Vec<IntDto>], r: usize, c: usize, what: &str) -> Result<IntMatrix, JsonError> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return invalid(format!("{what} must be {r}x{c}"));
    }
    let data: Vec<Vec<BigInt>> = rows.iter().map(|row| ints(row)).collect::<Result<_, _>>()?;
    Ok(IntMatrix::from_fn(r, c, |i, j| data[i][j].clone()))
}

fn rational_matrix(rows: &[Vec<[String; 2]>], r: usize, c: usize, what: &str) -> Result<QMatrix, JsonError> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return invalid(format!("{what} must be {r}x{c}"));
    }
    let data: Vec<Vec<Rational>> = rows
        .iter()
        .map(|row| row.iter().map(rational).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    Ok(QMatrix::from_fn(r, c, |i, j| data[i][j].clone()))
}

/// A full bundle document, or `{"classes": [...]}` for a Whitney sum over
/// `base`.
pub fn parse_bundle(text: &str, base: Option<&ManifoldDescriptor>) -> Result<PrincipalBundle, JsonError> {
    let v: Value = serde_json::from_str(text)?;
    let is_whitney = v.as_object().is_some_and(|o| o.contains_key("classes"));
    if is_whitney {
        let dto: WhitneyDto = serde_json::from_value(v)?;
        cap(dto.classes.len(), "class list")?;
        let Some(base) = base else {
            return invalid("a list of classes needs a base manifold");
        };
        let classes: Vec<PicElement> = dto.classes.iter().map(PicDto::build).collect::<Result<_, _>>()?;
        return crate::bundles::whitney_sum_bundle(base, &classes).map_err(|e| JsonError::Invalid(e.to_string()));
    }
    let dto: FullBundleDto = serde_json::from_value(v)?;
    let group = dto.group.build()?;
    let own_base = manifold_from_value(dto.base.clone())?;
    if let Some(b) = base {
        if *b != own_base {
            return invalid("bundle base differs from the given manifold");
        }
    }
    let pic = own_base.pic_group();
    let (p, t, g2) = (pic.free_rank, pic.torsion.torsion_rank(), 2 * pic.pic0_dim);
    cap(group.coordinate_count(), "character group")?;
    let cm = &dto.char_map;
    let free = int_matrix(&cm.free_block, p, group.torus_rank(), "free_block")?;
    let tors = int_matrix(&cm.torsion_block, t, group.circle_offset(), "torsion_block")?;
    let pic0 = rational_matrix(&cm.pic0_block, g2, group.coordinate_count(), "pic0_block")?;
    let char_map = CharacterMap::from_blocks(group, own_base, &free, &tors, &pic0, cm.continuous_kernel_dim)
        .map_err(|e| JsonError::Invalid(e.to_string()))?;
    Ok(PrincipalBundle::new(dto.name, char_map, dto.provenance))
}

pub fn bundle_value(b: &PrincipalBundle) -> Value {
    let cm = &b.char_map;
    json!({
        "name": b.name,
        "group": structure_group_value(b.group()),
        "base": manifold_value(b.base()),
        "char_map": {
            "free_block": int_matrix_value(&cm.free_block()),
            "torsion_block": int_matrix_value(&cm.torsion_block_matrix()),
            "pic0_block": rational_matrix_value(&cm.pic0_block()),
            "continuous_kernel_dim": cm.continuous_kernel_dim(),
        },
        "provenance": serde_json::to_value(&b.provenance).expect("plain enum"),
    })
}
