//! JSON system-spec files with exact rational coefficients.
//!
//! A rational is an integer, a string (`"3"`, `"-1/2"`, `"0.25"`) or a
//! pair `[num, den]` whose entries are integers or integer strings.

use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::matrix::{Mat2, Poly, PolyMat2};
use crate::odeforms::{validate_system, FinalFormSpec, InterlacedSpec, SystemSpec, VectorField, FIELD_VARIABLES};
use crate::series::{MultiSeries, Rational};

pub const FORMAT_VERSION: u64 = 1;

fn err(path: &str, message: impl Into<String>) -> Error {
    Error::Parse { path: path.to_string(), message: message.into() }
}

fn parse_bigint(v: &Value, path: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigInt::from(i)),
            None => Err(err(path, "expected an integer")),
        },
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| err(path, format!("{s:?} is not an integer"))),
        _ => Err(err(path, "expected an integer")),
    }
}

/// Parses `"p"`, `"p/q"` or a decimal such as `"-0.125"`.
pub fn parse_rational_str(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        return (!q.is_zero()).then(|| Rational::new(p, q));
    }
    if let Some((ip, fp)) = s.split_once('.') {
        if fp.is_empty() || !fp.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = ip.starts_with('-');
        let ip = ip.trim_start_matches(['-', '+']);
        if !ip.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = BigInt::from_str(&format!("{}{fp}", if ip.is_empty() { "0" } else { ip })).ok()?;
        let den = num_traits::pow(BigInt::from(10), fp.len());
        let r = Rational::new(digits, den);
        return Some(if neg { -r } else { r });
    }
    BigInt::from_str(s).ok().map(Rational::from_integer)
}

pub fn parse_rational(v: &Value, path: &str) -> Result<Rational> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(Rational::from_integer(i.into())),
            None => Err(err(path, "floating-point input is not exact; use [num, den] or a decimal string")),
        },
        Value::String(s) => parse_rational_str(s).ok_or_else(|| err(path, format!("{s:?} is not a rational"))),
        Value::Array(a) => {
            if a.len() != 2 {
                return Err(err(path, format!("a rational pair needs 2 entries, found {}", a.len())));
            }
            let num = parse_bigint(&a[0], &format!("{path}[0]"))?;
            let den = parse_bigint(&a[1], &format!("{path}[1]"))?;
            if den.is_zero() {
                return Err(err(&format!("{path}[1]"), "zero denominator"));
            }
            Ok(Rational::new(num, den))
        }
        _ => Err(err(path, "expected a rational")),
    }
}

fn array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| err(path, "expected an array"))
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| err(path, format!("missing field {key:?}")))
}

fn parse_u32(v: &Value, path: &str) -> Result<u32> {
    v.as_i64().and_then(|i| u32::try_from(i).ok()).ok_or_else(|| err(path, "expected a nonnegative integer"))
}

pub fn parse_poly(v: &Value, path: &str) -> Result<Poly> {
    let a = array(v, path)?;
    let coeffs = a.iter().enumerate().map(|(k, c)| parse_rational(c, &format!("{path}[{k}]"))).collect::<Result<_>>()?;
    Ok(Poly::new(coeffs))
}

fn parse_field(obj: &Map<String, Value>) -> Result<VectorField> {
    let trunc = match obj.get("g_degree") {
        None | Some(Value::Null) => None,
        Some(v) => Some(parse_u32(v, "$.g_degree")?),
    };
    let mut g = [
        MultiSeries::with_vars(&FIELD_VARIABLES, [], trunc),
        MultiSeries::with_vars(&FIELD_VARIABLES, [], trunc),
    ];
    let terms = match obj.get("g") {
        None | Some(Value::Null) => return Ok(g),
        Some(v) => array(v, "$.g")?,
    };
    for (t, term) in terms.iter().enumerate() {
        let p = format!("$.g[{t}]");
        let o = term.as_object().ok_or_else(|| err(&p, "expected an object"))?;
        let ep = format!("{p}.exponents");
        let e = array(field(o, "exponents", &p)?, &ep)?;
        if e.len() != 3 {
            return Err(err(&ep, format!("expected [dx, d1, d2], found {} entries", e.len())));
        }
        let e: Vec<u32> = e.iter().enumerate().map(|(k, x)| parse_u32(x, &format!("{ep}[{k}]"))).collect::<Result<_>>()?;
        let cp = format!("{p}.coeff");
        let c = array(field(o, "coeff", &p)?, &cp)?;
        if c.len() != 2 {
            return Err(err(&cp, format!("expected one coefficient per component, found {}", c.len())));
        }
        for (i, gi) in g.iter_mut().enumerate() {
            gi.add_term(e.clone(), parse_rational(&c[i], &format!("{cp}[{i}]"))?);
        }
    }
    Ok(g)
}

/// Parses a spec document without validating it.
pub fn parse_spec_value(v: &Value) -> Result<SystemSpec> {
    let obj = v.as_object().ok_or_else(|| err("$", "expected an object"))?;
    if let Some(fv) = obj.get("format_version") {
        let n = fv.as_u64().ok_or_else(|| err("$.format_version", "expected an integer"))?;
        if n != FORMAT_VERSION {
            return Err(err("$.format_version", format!("unsupported version {n}")));
        }
    }
    let kind = field(obj, "kind", "$")?.as_str().ok_or_else(|| err("$.kind", "expected a string"))?;
    let q = parse_u32(field(obj, "q", "$")?, "$.q")?;
    let r = parse_u32(field(obj, "r", "$")?, "$.r")?;
    let a = parse_poly(field(obj, "a", "$")?, "$.a")?;
    let g = parse_field(obj)?;
    match kind {
        "interlaced" => {
            let b = parse_poly(field(obj, "b", "$")?, "$.b")?;
            let c = match obj.get("c") {
                None | Some(Value::Null) => [Poly::zero(), Poly::zero()],
                Some(cv) => {
                    let ca = array(cv, "$.c")?;
                    if ca.len() != 2 {
                        return Err(err("$.c", format!("expected two coefficient arrays, found {}", ca.len())));
                    }
                    [parse_poly(&ca[0], "$.c[0]")?, parse_poly(&ca[1], "$.c[1]")?]
                }
            };
            Ok(SystemSpec::Interlaced(InterlacedSpec { q, r, a, b, c, g }))
        }
        "finalform" => {
            let jv = array(field(obj, "J", "$")?, "$.J")?;
            if jv.len() != 2 {
                return Err(err("$.J", "expected a 2×2 array"));
            }
            let mut e: Vec<Vec<Poly>> = Vec::new();
            for (i, row) in jv.iter().enumerate() {
                let rp = format!("$.J[{i}]");
                let ra = array(row, &rp)?;
                if ra.len() != 2 {
                    return Err(err(&rp, "expected two entries"));
                }
                e.push(ra.iter().enumerate().map(|(k, x)| parse_poly(x, &format!("{rp}[{k}]"))).collect::<Result<_>>()?);
            }
            let entries = [[e[0][0].clone(), e[0][1].clone()], [e[1][0].clone(), e[1][1].clone()]];
            Ok(SystemSpec::FinalForm(FinalFormSpec { q, r, a, j: PolyMat2::from_entries(&entries), g }))
        }
        other => Err(err("$.kind", format!("unknown kind {other:?}, expected \"interlaced\" or \"finalform\""))),
    }
}

/// Parses and validates a spec document.
pub fn parse_spec_str(text: &str) -> Result<SystemSpec> {
    let v: Value = serde_json::from_str(text).map_err(|e| err("$", format!("invalid JSON at line {} column {}: {e}", e.line(), e.column())))?;
    let spec = parse_spec_value(&v)?;
    let report = validate_system(&spec);
    if !report.is_valid() {
        return Err(Error::Validation(Box::new(report)));
    }
    Ok(spec)
}

/// Reads, parses and validates a spec file.
pub fn parse_spec(path: impl AsRef<Path>) -> Result<SystemSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    parse_spec_str(&text)
}

fn bigint_value(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(i) if i.abs() < (1i64 << 53) => json!(i),
        _ => json!(b.to_string()),
    }
}

/// `[num, den]`, with entries beyond the exact `f64` range as strings.
pub fn rational_value(r: &Rational) -> Value {
    json!([bigint_value(r.numer()), bigint_value(r.denom())])
}

pub fn poly_value(p: &Poly) -> Value {
    let c: Vec<Value> = if p.is_zero() { vec![rational_value(&Rational::zero())] } else { p.coeffs().iter().map(rational_value).collect() };
    Value::Array(c)
}

fn field_value(g: &VectorField) -> Vec<Value> {
    let mut keys: Vec<&Vec<u32>> = g[0].terms().keys().chain(g[1].terms().keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter().map(|e| json!({"exponents": e, "coeff": [rational_value(&g[0].coeff(e)), rational_value(&g[1].coeff(e))]})).collect()
}

/// Serializes a spec in the file format.
pub fn spec_value(spec: &SystemSpec) -> Value {
    let mut o = Map::new();
    o.insert("format_version".into(), json!(FORMAT_VERSION));
    let (g, trunc) = match spec {
        SystemSpec::Interlaced(s) => {
            o.insert("kind".into(), json!("interlaced"));
            o.insert("q".into(), json!(s.q));
            o.insert("r".into(), json!(s.r));
            o.insert("a".into(), poly_value(&s.a));
            o.insert("b".into(), poly_value(&s.b));
            o.insert("c".into(), json!([poly_value(&s.c[0]), poly_value(&s.c[1])]));
            (&s.g, s.g.iter().filter_map(|x| x.trunc()).min())
        }
        SystemSpec::FinalForm(s) => {
            o.insert("kind".into(), json!("finalform"));
            o.insert("q".into(), json!(s.q));
            o.insert("r".into(), json!(s.r));
            o.insert("a".into(), poly_value(&s.a));
            let e = s.j.entries();
            o.insert("J".into(), json!([[poly_value(&e[0][0]), poly_value(&e[0][1])], [poly_value(&e[1][0]), poly_value(&e[1][1])]]));
            (&s.g, s.g.iter().filter_map(|x| x.trunc()).min())
        }
    };
    o.insert("g".into(), Value::Array(field_value(g)));
    if let Some(d) = trunc {
        o.insert("g_degree".into(), json!(d));
    }
    Value::Object(o)
}

/// Parses a polynomial given as comma-separated rationals from degree 0,
/// e.g. `"0,1,1/2"`.
pub fn parse_poly_arg(s: &str) -> Result<Poly> {
    let coeffs = s
        .split(',')
        .enumerate()
        .map(|(k, t)| parse_rational_str(t).ok_or_else(|| err(&format!("--poly[{k}]"), format!("{t:?} is not a rational"))))
        .collect::<Result<_>>()?;
    Ok(Poly::new(coeffs))
}

/// Parses a relation `F(X, Z11, Z21, …)`:
/// `{"variables": [...], "terms": [{"exponents": [...], "coeff": r}], "degree": d}`.
pub fn parse_relation_value(v: &Value) -> Result<MultiSeries<Rational>> {
    let o = v.as_object().ok_or_else(|| err("$", "expected an object"))?;
    let vars: Vec<String> = array(field(o, "variables", "$")?, "$.variables")?
        .iter()
        .enumerate()
        .map(|(k, x)| x.as_str().map(str::to_string).ok_or_else(|| err(&format!("$.variables[{k}]"), "expected a string")))
        .collect::<Result<_>>()?;
    let trunc = match o.get("degree") {
        None | Some(Value::Null) => None,
        Some(d) => Some(parse_u32(d, "$.degree")?),
    };
    let mut f = MultiSeries::zero(vars.clone(), trunc);
    for (t, term) in array(field(o, "terms", "$")?, "$.terms")?.iter().enumerate() {
        let p = format!("$.terms[{t}]");
        let to = term.as_object().ok_or_else(|| err(&p, "expected an object"))?;
        let ep = format!("{p}.exponents");
        let e = array(field(to, "exponents", &p)?, &ep)?;
        if e.len() != vars.len() {
            return Err(err(&ep, format!("expected {} exponents, found {}", vars.len(), e.len())));
        }
        let e: Vec<u32> = e.iter().enumerate().map(|(k, x)| parse_u32(x, &format!("{ep}[{k}]"))).collect::<Result<_>>()?;
        f.add_term(e, parse_rational(field(to, "coeff", &p)?, &format!("{p}.coeff"))?);
    }
    Ok(f)
}

pub fn parse_relation(path: impl AsRef<Path>) -> Result<MultiSeries<Rational>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| err("$", format!("invalid JSON: {e}")))?;
    parse_relation_value(&v)
}

/// `[num, den]` pairs of a 2×2 rational matrix, row-major.
pub fn mat_value(m: &Mat2) -> Value {
    json!([[rational_value(m.get(0, 0)), rational_value(m.get(0, 1))], [rational_value(m.get(1, 0)), rational_value(m.get(1, 1))]])
}

/// Sign-aware text of a rational, `p/q` or `p`.
pub fn rational_text(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
