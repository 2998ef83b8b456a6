//! JSON encoding of lattices, actions and evidence.
//!
//! Integers whose magnitude exceeds 2⁵³ are written as decimal strings and
//! rationals as `"p/q"` strings; both forms are accepted on input. Object
//! keys come out sorted, so equal values always serialize to equal bytes.

use std::io::Read;

use k3lat::arith::{IntMatrix, RatMatrix};
use k3lat::catalog;
use k3lat::group::GroupAction;
use k3lat::lattice::Lattice;
use k3lat::pipelines::{Certificate, Evidence};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{Map, Value};

use crate::error::{input, CliError, Result};

const SAFE_INT: u64 = 1 << 53;

pub fn int(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.unsigned_abs() <= SAFE_INT => Value::from(v),
        _ => Value::String(x.to_string()),
    }
}

pub fn rat(x: &BigRational) -> Value {
    if x.denom().is_one() {
        Value::String(x.numer().to_string())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn int_vec(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn int_matrix(m: &IntMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| int_vec(m.row(i))).collect())
}

pub fn rat_matrix(m: &RatMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row(i).iter().map(rat).collect())).collect())
}

pub fn evidence(e: &Evidence) -> Value {
    match e {
        Evidence::Bool(b) => Value::Bool(*b),
        Evidence::Int(x) => int(x),
        Evidence::Rat(x) => rat(x),
        Evidence::Text(s) => Value::String(s.clone()),
        Evidence::List(xs) => Value::Array(xs.iter().map(evidence).collect()),
        Evidence::Map(m) => Value::Object(m.iter().map(|(k, v)| (k.clone(), evidence(v))).collect()),
    }
}

pub fn certificate(c: &Certificate) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), c.kind.as_str().into());
    m.insert("pass".into(), c.pass.into());
    m.insert("evidence".into(), Value::Object(c.evidence.iter().map(|(k, v)| (k.clone(), evidence(v))).collect()));
    Value::Object(m)
}

/// `{"name"?, "gram", "basis"?, "ambient"?}`.
pub fn lattice(l: &Lattice) -> Value {
    let mut m = Map::new();
    if let Some(n) = l.name() {
        m.insert("name".into(), n.into());
    }
    m.insert("gram".into(), int_matrix(l.gram()));
    if let (Some(b), Some(a)) = (l.basis(), l.ambient()) {
        m.insert("basis".into(), rat_matrix(b));
        m.insert("ambient".into(), lattice(a));
    }
    Value::Object(m)
}

/// Reads JSON from a path, or from stdin when the path is `-`.
pub fn read(path: &str) -> Result<Value> {
    let mut raw = String::new();
    let res = if path == "-" {
        std::io::stdin().read_to_string(&mut raw).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|s| raw = s)
    };
    res.map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&raw).map_err(|e| input(format!("{path}: {e}")))
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .or_else(|| n.as_u64().map(BigInt::from))
            .ok_or_else(|| input(format!("not an integer: {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| input(format!("not an integer: {s:?}"))),
        _ => Err(input(format!("expected an integer, got {v}"))),
    }
}

pub fn parse_rat(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) if s.contains('/') => {
            let (p, q) = s.split_once('/').expect("contains a slash");
            let p: BigInt = p.trim().parse().map_err(|_| input(format!("not a rational: {s:?}")))?;
            let q: BigInt = q.trim().parse().map_err(|_| input(format!("not a rational: {s:?}")))?;
            if q == BigInt::from(0) {
                return Err(input(format!("zero denominator: {s:?}")));
            }
            Ok(BigRational::new(p, q))
        }
        _ => parse_int(v).map(BigRational::from_integer),
    }
}

fn rows(v: &Value, what: &str) -> Result<Vec<Vec<Value>>> {
    let outer = v.as_array().ok_or_else(|| input(format!("{what} must be an array of rows")))?;
    outer.iter().map(|r| r.as_array().cloned().ok_or_else(|| input(format!("{what} rows must be arrays")))).collect()
}

fn width(rows: &[Vec<Value>], what: &str) -> Result<usize> {
    let w = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != w) {
        return Err(input(format!("{what} rows have different lengths")));
    }
    Ok(w)
}

pub fn parse_int_matrix(v: &Value, what: &str) -> Result<IntMatrix> {
    let rows = rows(v, what)?;
    let w = width(&rows, what)?;
    let data = rows.iter().map(|r| r.iter().map(parse_int).collect()).collect::<Result<Vec<Vec<_>>>>()?;
    Ok(IntMatrix::from_rows(data, w))
}

pub fn parse_rat_matrix(v: &Value, what: &str) -> Result<RatMatrix> {
    let rows = rows(v, what)?;
    let w = width(&rows, what)?;
    let data = rows.iter().map(|r| r.iter().map(parse_rat).collect()).collect::<Result<Vec<Vec<_>>>>()?;
    Ok(RatMatrix::from_rows(data, w))
}

/// Case-insensitive catalog lookup.
pub fn catalog_lattice(name: &str) -> Result<Lattice> {
    let n = catalog::NAMES.iter().find(|n| n.eq_ignore_ascii_case(name)).copied().unwrap_or(name);
    Ok(catalog::make(n)?)
}

/// Parses Lattice JSON. `{"catalog": NAME}` names a catalog lattice. A
/// `basis` without an `ambient` is read inside `default_ambient`.
pub fn parse_lattice(v: &Value, default_ambient: Option<&Lattice>) -> Result<Lattice> {
    let obj = v.as_object().ok_or_else(|| input("a lattice must be a JSON object"))?;
    if let Some(name) = obj.get("catalog") {
        let name = name.as_str().ok_or_else(|| input("catalog name must be a string"))?;
        return catalog_lattice(name);
    }
    let gram = obj.get("gram").map(|g| parse_int_matrix(g, "gram")).transpose()?;
    let mut l = match obj.get("basis") {
        Some(b) => {
            let amb = match obj.get("ambient") {
                Some(a) => parse_lattice(a, None)?,
                None => default_ambient.cloned().ok_or_else(|| input("basis given without an ambient"))?,
            };
            let basis = parse_rat_matrix(b, "basis")?;
            let basis = if basis.rows() == 0 { RatMatrix::zeros(0, amb.rank()) } else { basis };
            let l = Lattice::embedded(&amb, basis)?;
            if gram.as_ref().is_some_and(|g| g != l.gram()) {
                return Err(input("gram does not match the basis"));
            }
            l
        }
        None => {
            let g = gram.ok_or_else(|| input("a lattice needs a gram or a basis"))?;
            if !g.is_square() && g.rows() > 0 {
                return Err(input("gram must be square"));
            }
            Lattice::from_gram(g)?
        }
    };
    if let Some(n) = obj.get("name").and_then(Value::as_str) {
        l = l.with_name(n);
    }
    Ok(l)
}

pub fn parse_lattice_file(path: &str, default_ambient: Option<&Lattice>) -> Result<Lattice> {
    parse_lattice(&read(path)?, default_ambient)
}

fn perm24(v: &Value) -> Result<IntMatrix> {
    let image = v
        .as_array()
        .ok_or_else(|| input("perm24 must be an array"))?
        .iter()
        .map(|x| {
            x.as_u64().and_then(|x| usize::try_from(x).ok()).ok_or_else(|| input("perm24 entries must be indices"))
        })
        .collect::<Result<Vec<usize>>>()?;
    let p = catalog::Permutation::new(image)?;
    Ok(catalog::perm_isometry_on_leech(&p)?)
}

/// Parses Action JSON: `{"lattice", "generators"}` where each generator is
/// a matrix or `{"perm24": [...]}`, or a bare `{"perm24": [...]}`.
/// Permutations act on the catalog Leech lattice, which is also the default
/// lattice.
pub fn parse_action(v: &Value) -> Result<GroupAction> {
    let obj = v.as_object().ok_or_else(|| input("an action must be a JSON object"))?;
    let leech = catalog::make("Leech")?;
    if let Some(p) = obj.get("perm24") {
        return Ok(GroupAction::new(leech, vec![perm24(p)?])?);
    }
    let lattice = match obj.get("lattice") {
        Some(l) => parse_lattice(l, None)?,
        None => leech.clone(),
    };
    let gens = obj
        .get("generators")
        .and_then(Value::as_array)
        .ok_or_else(|| input("an action needs a generators array"))?
        .iter()
        .map(|g| match g.get("perm24") {
            Some(p) if lattice.gram() == leech.gram() => perm24(p),
            Some(_) => Err(input("perm24 generators act on the Leech lattice only")),
            None => parse_int_matrix(g, "generator"),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GroupAction::new(lattice, gens)?)
}

pub fn parse_action_file(path: &str) -> Result<GroupAction> {
    parse_action(&read(path)?)
}

/// Canonical text: pretty-printed with sorted keys and a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}
