//! JSON wire formats for elements, horofunction specs, maps and reports.
//!
//! Floats are written with 17 significant digits; infinities as the strings
//! `"inf"` / `"-inf"` so documents stay valid JSON.

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Number, Value};

use crate::boundary::{HorofunctionSpec, LimitReport};
use crate::error::{Error, Result};
use crate::maps::{LinearTripleMap, MapReport, MobiusComposite};
use crate::space::{CMatrix, Element, TripleSpace, C64};
use crate::tripotent::Tripotent;

type Entry = [f64; 2];
type Block = Vec<Vec<Entry>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementWire {
    space: Vec<[usize; 2]>,
    blocks: Vec<Block>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpecWire {
    space: Vec<[usize; 2]>,
    tripotents: Vec<Vec<Block>>,
    lambdas: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case")]
enum MapKind {
    Linear,
    ConjugateLinear,
    MoebiusComposite,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapWire {
    kind: MapKind,
    domain: Vec<[usize; 2]>,
    codomain: Vec<[usize; 2]>,
    matrix: Block,
    #[serde(default)]
    conjugate: bool,
    #[serde(default)]
    pre: Vec<ElementWire>,
    #[serde(default)]
    post: Vec<ElementWire>,
}

/// A float as a JSON value with 17 significant digits.
pub fn number(x: f64) -> Value {
    if x.is_nan() {
        return Value::String("nan".into());
    }
    if x.is_infinite() {
        return Value::String(if x > 0.0 { "inf" } else { "-inf" }.into());
    }
    let n: Number = serde_json::from_str(&format!("{x:.16e}")).expect("formatted float parses");
    Value::Number(n)
}

/// Reads a float written by [`number`], accepting plain JSON numbers too.
pub fn read_number(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Invalid(format!("not a float: {n}"))),
        Value::String(s) => match s.as_str() {
            "inf" => Ok(f64::INFINITY),
            "-inf" => Ok(f64::NEG_INFINITY),
            "nan" => Ok(f64::NAN),
            other => Err(Error::Invalid(format!("not a float: {other:?}"))),
        },
        other => Err(Error::Invalid(format!("not a float: {other}"))),
    }
}

/// Pretty-printed document with a trailing newline.
pub fn to_document(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialise");
    s.push('\n');
    s
}

fn space_from_wire(space: &[[usize; 2]]) -> Result<TripleSpace> {
    TripleSpace::new(space.iter().map(|&[p, q]| (p, q)))
}

fn space_to_wire(space: &TripleSpace) -> Vec<[usize; 2]> {
    space.factors().iter().map(|f| [f.rows, f.cols]).collect()
}

fn matrix_from_wire(rows: &Block) -> Result<CMatrix> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Invalid("ragged matrix rows".into()));
    }
    Ok(CMatrix::from_fn(nrows, ncols, |i, j| {
        let [re, im] = rows[i][j];
        C64::new(re, im)
    }))
}

fn matrix_to_wire(m: &CMatrix) -> Block {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

fn blocks_from_wire(space: &TripleSpace, blocks: &[Block]) -> Result<Element> {
    if blocks.iter().flatten().flatten().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("non-finite entry".into()));
    }
    let blocks = blocks.iter().map(matrix_from_wire).collect::<Result<Vec<_>>>()?;
    Element::new(space.clone(), blocks)
}

fn element_from_wire(w: &ElementWire) -> Result<Element> {
    blocks_from_wire(&space_from_wire(&w.space)?, &w.blocks)
}

pub fn parse_element(text: &str) -> Result<Element> {
    element_from_wire(&serde_json::from_str(text)?)
}

fn element_wire(x: &Element) -> ElementWire {
    ElementWire {
        space: space_to_wire(x.space()),
        blocks: x.blocks().iter().map(matrix_to_wire).collect(),
    }
}

pub fn element_to_value(x: &Element) -> Value {
    serde_json::to_value(element_wire(x)).expect("elements serialise")
}

pub fn element_to_string(x: &Element) -> String {
    serde_json::to_string(&element_wire(x)).expect("elements serialise")
}

/// A minimal or general tripotent written as Element JSON.
pub fn parse_tripotent(text: &str, tol: f64) -> Result<Tripotent> {
    Tripotent::new(parse_element(text)?, tol)
}

pub fn parse_spec(text: &str, tol: f64) -> Result<HorofunctionSpec> {
    let w: SpecWire = serde_json::from_str(text)?;
    let space = space_from_wire(&w.space)?;
    let tripotents = w
        .tripotents
        .iter()
        .map(|b| Tripotent::new(blocks_from_wire(&space, b)?, tol))
        .collect::<Result<Vec<_>>>()?;
    HorofunctionSpec::new(tripotents, w.lambdas, tol)
}

pub fn spec_to_value(spec: &HorofunctionSpec) -> Value {
    json!({
        "space": space_to_wire(spec.space()),
        "tripotents": spec
            .tripotents()
            .iter()
            .map(|e| e.element().blocks().iter().map(matrix_to_wire).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "lambdas": spec.lambdas().iter().map(|&l| number(l)).collect::<Vec<_>>(),
    })
}

/// Parses Map JSON. Every kind becomes a [`MobiusComposite`]; `pre` points act
/// before the linear part and `post` points after it, in list order.
pub fn parse_map(text: &str) -> Result<MobiusComposite> {
    let w: MapWire = serde_json::from_str(text)?;
    let conjugate = match w.kind {
        MapKind::Linear => false,
        MapKind::ConjugateLinear => true,
        MapKind::MoebiusComposite => w.conjugate,
    };
    if !matches!(w.kind, MapKind::MoebiusComposite) && (!w.pre.is_empty() || !w.post.is_empty()) {
        return Err(Error::Invalid(
            "pre/post Möbius points need kind \"moebius_composite\"".into(),
        ));
    }
    let linear = LinearTripleMap::new(
        space_from_wire(&w.domain)?,
        space_from_wire(&w.codomain)?,
        matrix_from_wire(&w.matrix)?,
        conjugate,
    )?;
    let pre = w.pre.iter().map(element_from_wire).collect::<Result<Vec<_>>>()?;
    let post = w.post.iter().map(element_from_wire).collect::<Result<Vec<_>>>()?;
    MobiusComposite::new(pre, linear, post)
}

pub fn map_to_value(map: &MobiusComposite) -> Value {
    let kind = if !map.pre.is_empty() || !map.post.is_empty() {
        "moebius_composite"
    } else if map.linear.is_conjugate_linear() {
        "conjugate_linear"
    } else {
        "linear"
    };
    use crate::maps::BallMap;
    json!({
        "kind": kind,
        "domain": space_to_wire(map.domain()),
        "codomain": space_to_wire(map.codomain()),
        "matrix": matrix_to_wire(map.linear.matrix()),
        "conjugate": map.linear.is_conjugate_linear(),
        "pre": map.pre.iter().map(element_to_value).collect::<Vec<_>>(),
        "post": map.post.iter().map(element_to_value).collect::<Vec<_>>(),
    })
}

pub fn limit_report_to_value(r: &LimitReport) -> Value {
    json!({
        "value": number(r.value),
        "converged": r.converged,
        "divergent": r.divergent,
        "trace": r
            .trace
            .iter()
            .map(|p| json!({"t": number(p.t), "value": number(p.value)}))
            .collect::<Vec<_>>(),
    })
}

pub fn map_report_to_value(r: &MapReport) -> Value {
    let mut values = Map::new();
    for (k, v) in &r.values {
        values.insert(k.clone(), number(*v));
    }
    json!({
        "subject": r.subject,
        "seed": r.seed,
        "checks": r
            .checks
            .iter()
            .map(|c| json!({
                "name": c.name,
                "n_cases": c.n_cases,
                "max_residual": number(c.max_residual),
                "tolerance": number(c.tolerance),
                "passed": c.passed,
            }))
            .collect::<Vec<_>>(),
        "values": values,
        "verdict": r.verdict,
    })
}
