//! JSON file formats.
//!
//! Every number in a file is a rational string `"p/q"` (or `"p"`). Output is
//! built from `serde_json` maps, whose keys are sorted, so identical inputs
//! give identical bytes. Each `parse_*` accepts what the matching `emit_*`
//! writes.

use std::collections::{BTreeMap, BTreeSet};

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::arith::{format_rational, parse_rational, Dim, EpsPoly, Limit, Rational, RegulatedScalar};
use crate::cohomology::Cochain;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::reduced::{
    Constraint, ConstraintContext, ConstraintSystem, Monomial, QuadraticForm, ReducedSpace,
    StructureConstants,
};
use crate::transform::basis_tuples;

/// How regulated values are written.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum EpsPolicy {
    /// The exact rational function of `ε`.
    #[default]
    Generic,
    /// The value at `ε → 0`, or the leading pole term.
    Limit,
    /// The first three Laurent coefficients at `ε = 0`.
    Laurent,
}

impl std::str::FromStr for EpsPolicy {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(EpsPolicy::Generic),
            "limit" => Ok(EpsPolicy::Limit),
            "laurent" => Ok(EpsPolicy::Laurent),
            _ => Err(Error::Invalid(format!("unknown eps policy `{s}`"))),
        }
    }
}

fn decode<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        msg: e.inner().to_string(),
    })
}

fn schema(path: impl Into<String>, msg: impl Into<String>) -> Error {
    Error::Schema {
        path: path.into(),
        msg: msg.into(),
    }
}

fn rational_at(s: &str, path: &str) -> Result<Rational> {
    parse_rational(s).ok_or_else(|| schema(path, format!("`{s}` is not a rational \"p/q\"")))
}

fn rationals_out(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
}

/// Pretty JSON with a trailing newline.
pub fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values always serialize");
    s.push('\n');
    s
}

// ---------------------------------------------------------------- space

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    grades: Vec<GradeEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GradeEntry {
    dim: i64,
    fields: Vec<String>,
}

pub fn parse_space(text: &str) -> Result<ReducedSpace> {
    let file: SpaceFile = decode(text)?;
    let grades: Vec<(i64, Vec<String>)> = file.grades.into_iter().map(|g| (g.dim, g.fields)).collect();
    ReducedSpace::new(&grades)
}

pub fn emit_space(space: &ReducedSpace) -> Value {
    let grades: Vec<Value> = space
        .grades()
        .map(|(g, b)| {
            let labels: Vec<&str> = b.iter().map(|&i| space.label(i)).collect();
            json!({"dim": g, "fields": labels})
        })
        .collect();
    json!({ "grades": grades })
}

// ---------------------------------------------------------------- F

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FEntry {
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B")]
    b: String,
    #[serde(rename = "C")]
    c: String,
    value: String,
}

/// Reads `F^C_{AB}` entries and completes them under graded symmetry.
pub fn parse_structure_constants(text: &str, space: &ReducedSpace) -> Result<StructureConstants> {
    let entries: Vec<FEntry> = decode(text)?;
    let mut f = StructureConstants::new();
    for (i, e) in entries.iter().enumerate() {
        let v = rational_at(&e.value, &format!("[{i}].value"))?;
        let (a, b, c) = (space.index(&e.a)?, space.index(&e.b)?, space.index(&e.c)?);
        f.insert_completed(space, a, b, c, v)?;
    }
    Ok(f)
}

/// All stored entries, both orientations included.
pub fn emit_structure_constants(space: &ReducedSpace, f: &StructureConstants) -> Value {
    Value::Array(
        f.entries()
            .map(|(&(a, b, c), v)| {
                json!({
                    "A": space.label(a),
                    "B": space.label(b),
                    "C": space.label(c),
                    "value": format_rational(v),
                })
            })
            .collect(),
    )
}

// ---------------------------------------------------------------- gram

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GramFile {
    grades: Vec<GramEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GramEntry {
    dim: i64,
    matrix: Vec<Vec<String>>,
}

/// Per-grade square matrices. With a space, sizes are checked against it.
pub fn parse_gram(text: &str, space: Option<&ReducedSpace>) -> Result<QuadraticForm> {
    let file: GramFile = decode(text)?;
    let mut blocks = BTreeMap::new();
    for (gi, entry) in file.grades.iter().enumerate() {
        let path = format!("grades[{gi}]");
        let n = entry.matrix.len();
        if let Some(sp) = space {
            let want = sp.basis(entry.dim).len();
            if want != n {
                return Err(schema(
                    format!("{path}.matrix"),
                    format!("grade {} has {want} fields but the matrix has {n} rows", entry.dim),
                ));
            }
        }
        let mut rows = Vec::with_capacity(n);
        for (i, row) in entry.matrix.iter().enumerate() {
            if row.len() != n {
                return Err(schema(format!("{path}.matrix[{i}]"), format!("expected {n} entries")));
            }
            rows.push(
                row.iter()
                    .enumerate()
                    .map(|(j, s)| rational_at(s, &format!("{path}.matrix[{i}][{j}]")))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let m = Matrix::from_rows(rows);
        if m != m.transpose() {
            return Err(schema(format!("{path}.matrix"), "matrix is not symmetric"));
        }
        if blocks.insert(entry.dim, m).is_some() {
            return Err(schema(format!("{path}.dim"), format!("grade {} listed twice", entry.dim)));
        }
    }
    Ok(QuadraticForm { blocks })
}

pub fn emit_gram(g: &QuadraticForm) -> Value {
    let grades: Vec<Value> = g
        .blocks
        .iter()
        .map(|(d, m)| {
            let rows: Vec<Value> = m.to_rows().iter().map(|r| rationals_out(r)).collect();
            json!({"dim": d, "matrix": rows})
        })
        .collect();
    json!({ "grades": grades })
}

// ---------------------------------------------------------------- constraints

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintEntry {
    context: ContextEntry,
    monomials: Vec<MonomialEntry>,
    #[serde(rename = "epsOrder")]
    eps_order: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ContextEntry {
    #[serde(rename = "A")]
    a: String,
    #[serde(rename = "B")]
    b: String,
    #[serde(rename = "C")]
    c: String,
    #[serde(rename = "E")]
    e: String,
    m1: usize,
    m2: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MonomialEntry {
    coeff: String,
    vars: [[String; 3]; 2],
}

pub fn parse_constraints(text: &str, space: &ReducedSpace) -> Result<ConstraintSystem> {
    let entries: Vec<ConstraintEntry> = decode(text)?;
    let mut out = ConstraintSystem::default();
    let mut contexts = BTreeSet::new();
    for (i, e) in entries.into_iter().enumerate() {
        let ctx = &e.context;
        let context = ConstraintContext {
            a: space.index(&ctx.a)?,
            b: space.index(&ctx.b)?,
            c: space.index(&ctx.c)?,
            e: space.index(&ctx.e)?,
            m1: ctx.m1,
            m2: ctx.m2,
        };
        contexts.insert((context.a, context.b, context.c, context.e, context.m1, context.m2));
        let mut monomials = Vec::with_capacity(e.monomials.len());
        for (j, m) in e.monomials.iter().enumerate() {
            let coeff = rational_at(&m.coeff, &format!("[{i}].monomials[{j}].coeff"))?;
            let var = |v: &[String; 3]| -> Result<(usize, usize, usize)> {
                Ok((space.index(&v[0])?, space.index(&v[1])?, space.index(&v[2])?))
            };
            monomials.push(Monomial {
                coeff,
                vars: [var(&m.vars[0])?, var(&m.vars[1])?],
            });
        }
        out.constraints.push(Constraint {
            context,
            monomials,
            eps_order: e.eps_order,
        });
    }
    out.contexts = contexts.len();
    Ok(out)
}

fn context_out(space: &ReducedSpace, c: &ConstraintContext) -> Value {
    json!({
        "A": space.label(c.a),
        "B": space.label(c.b),
        "C": space.label(c.c),
        "E": space.label(c.e),
        "m1": c.m1,
        "m2": c.m2,
    })
}

fn var_out(space: &ReducedSpace, v: (usize, usize, usize)) -> Value {
    json!([space.label(v.0), space.label(v.1), space.label(v.2)])
}

pub fn emit_constraints(space: &ReducedSpace, sys: &ConstraintSystem) -> Value {
    Value::Array(
        sys.constraints
            .iter()
            .map(|c| {
                let monos: Vec<Value> = c
                    .monomials
                    .iter()
                    .map(|m| {
                        json!({
                            "coeff": format_rational(&m.coeff),
                            "vars": [var_out(space, m.vars[0]), var_out(space, m.vars[1])],
                        })
                    })
                    .collect();
                json!({
                    "context": context_out(space, &c.context),
                    "monomials": monos,
                    "epsOrder": c.eps_order,
                })
            })
            .collect(),
    )
}

/// Constraint violations as `{index, context, residual}`.
pub fn emit_violations(space: &ReducedSpace, sys: &ConstraintSystem, bad: &[(usize, Rational)]) -> Value {
    Value::Array(
        bad.iter()
            .map(|(i, r)| {
                json!({
                    "index": i,
                    "context": context_out(space, &sys.constraints[*i].context),
                    "residual": format_rational(r),
                })
            })
            .collect(),
    )
}

// ---------------------------------------------------------------- cochains

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CochainFile {
    degree: usize,
    sector: Vec<i64>,
    components: Vec<ComponentEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentEntry {
    fields: Vec<String>,
    m: Vec<usize>,
    value: Vec<String>,
}

fn cochain_from_file(file: CochainFile, space: &ReducedSpace, path: &str) -> Result<Cochain> {
    let mut c = Cochain::zero(file.degree, file.sector.iter().copied());
    for (i, comp) in file.components.into_iter().enumerate() {
        let p = format!("{path}components[{i}]");
        if comp.fields.len() != file.degree {
            return Err(schema(format!("{p}.fields"), format!("expected {} labels", file.degree)));
        }
        let fields = comp
            .fields
            .iter()
            .map(|l| space.index(l))
            .collect::<Result<Vec<_>>>()?;
        let grades: Vec<i64> = fields.iter().map(|&x| space.grade(x)).collect();
        if let Some(g) = grades.iter().find(|g| !c.sector.contains(g)) {
            return Err(schema(format!("{p}.fields"), format!("grade {g} is outside the sector")));
        }
        let dims: Vec<Dim> = grades.iter().map(|&g| Dim::int(g)).collect();
        let e = grades.iter().sum::<i64>() - file.degree as i64 + 1 - comp.m.iter().sum::<usize>() as i64;
        if comp.m.len() + 1 != file.degree.max(1) || !basis_tuples(&dims, e).contains(&comp.m) {
            return Err(schema(format!("{p}.m"), format!("{:?} is not an m-tuple for these fields", comp.m)));
        }
        let width = space.basis(e).len();
        if comp.value.len() != width {
            return Err(schema(
                format!("{p}.value"),
                format!("target grade {e} has {width} fields, got {} values", comp.value.len()),
            ));
        }
        let value = comp
            .value
            .iter()
            .enumerate()
            .map(|(j, s)| rational_at(s, &format!("{p}.value[{j}]")))
            .collect::<Result<Vec<_>>>()?;
        if c.components.insert((fields, comp.m), value).is_some() {
            return Err(schema(p, "duplicate component"));
        }
    }
    Ok(c.scaled(&Rational::from_integer(1.into())))
}

pub fn parse_cochain(text: &str, space: &ReducedSpace) -> Result<Cochain> {
    cochain_from_file(decode(text)?, space, "")
}

/// A JSON list of degree-2 cochains `Γ_1, Γ_2, …`.
pub fn parse_series(text: &str, space: &ReducedSpace) -> Result<Vec<Cochain>> {
    let files: Vec<CochainFile> = decode(text)?;
    files
        .into_iter()
        .enumerate()
        .map(|(i, f)| {
            if f.degree != 2 {
                return Err(schema(format!("[{i}].degree"), "series terms must have degree 2"));
            }
            cochain_from_file(f, space, &format!("[{i}]."))
        })
        .collect()
}

pub fn emit_cochain(space: &ReducedSpace, c: &Cochain) -> Value {
    let comps: Vec<Value> = c
        .components
        .iter()
        .filter(|(_, v)| v.iter().any(|x| *x != Rational::default()))
        .map(|((fields, m), v)| {
            let labels: Vec<&str> = fields.iter().map(|&x| space.label(x)).collect();
            json!({"fields": labels, "m": m, "value": rationals_out(v)})
        })
        .collect();
    json!({
        "degree": c.degree,
        "sector": c.sector.iter().collect::<Vec<_>>(),
        "components": comps,
    })
}

pub fn emit_series(space: &ReducedSpace, terms: &[Cochain]) -> Value {
    Value::Array(terms.iter().map(|c| emit_cochain(space, c)).collect())
}

// ---------------------------------------------------------------- regulated values

/// A regulated value under `policy`. Constants are always plain rational strings.
pub fn emit_regulated(v: &RegulatedScalar, policy: EpsPolicy) -> Value {
    if v.is_constant() {
        return Value::String(format_rational(&v.laurent_coeff(0)));
    }
    match policy {
        EpsPolicy::Generic => json!({
            "num": rationals_out(v.numerator().coeffs()),
            "den": rationals_out(v.denominator().coeffs()),
        }),
        EpsPolicy::Limit => match v.limit() {
            Limit::Finite(x) => Value::String(format_rational(&x)),
            Limit::Pole { order, leading } => json!({
                "poleOrder": order,
                "leading": format_rational(&leading),
            }),
        },
        EpsPolicy::Laurent => {
            let k = v.valuation().expect("constants handled above");
            let terms: Vec<Rational> = (k..k + 3).map(|o| v.laurent_coeff(o)).collect();
            json!({"valuation": k, "terms": rationals_out(&terms)})
        }
    }
}

/// Reads the generic form written by [`emit_regulated`].
pub fn parse_regulated(v: &Value) -> Result<RegulatedScalar> {
    let poly = |x: &Value, path: &str| -> Result<EpsPoly> {
        let arr = x.as_array().ok_or_else(|| schema(path, "expected an array"))?;
        arr.iter()
            .enumerate()
            .map(|(i, s)| {
                let p = format!("{path}[{i}]");
                rational_at(s.as_str().ok_or_else(|| schema(&p, "expected a string"))?, &p)
            })
            .collect::<Result<Vec<_>>>()
            .map(EpsPoly::from_coeffs)
    };
    match v {
        Value::String(s) => Ok(RegulatedScalar::constant(rational_at(s, "")?)),
        Value::Object(o) => {
            let num = poly(o.get("num").ok_or_else(|| schema("num", "missing"))?, "num")?;
            let den = poly(o.get("den").ok_or_else(|| schema("den", "missing"))?, "den")?;
            if den.is_zero() {
                return Err(schema("den", "zero denominator"));
            }
            Ok(RegulatedScalar::from_parts(num, den))
        }
        _ => Err(schema("", "expected a rational string or {num, den}")),
    }
}

/// `{rows, cols, entries}` for a labelled matrix of regulated values.
pub fn emit_labelled_matrix(
    rows: &[Vec<usize>],
    cols: &[Vec<usize>],
    m: &Matrix<RegulatedScalar>,
    policy: EpsPolicy,
) -> Value {
    let entries: Vec<Value> = (0..m.rows())
        .map(|i| Value::Array((0..m.cols()).map(|j| emit_regulated(&m[(i, j)], policy)).collect()))
        .collect();
    json!({"rows": rows, "cols": cols, "entries": entries})
}
