//! JSON schemas for every externally visible object.
//!
//! Groups are `{"factors": [...]}`; homomorphisms are row-major integer
//! matrices; polynomial maps carry their coefficients as `"num/den"` strings
//! keyed by multi-index; functions are arrays of `[re, im]` pairs in
//! row-major group order. Each top-level document carries a `schema` tag so
//! `verify` can dispatch.

use crate::abgroup::{FinAbGroup, SubgroupEmbedding};
use crate::error::{Error, Result};
use crate::gowers::{GroupFunction, C64};
use crate::hpoint::HPoint;
use crate::matrix::IntMat;
use crate::nilseq::{Nilsequence, OrbitForm};
use crate::orbit::LinearOrbit;
use crate::polymap::{multi_indices, MultiIndex, Poly, QPoly, RatVec, TPoly, TorusVec, ZmEl, ZmPoly};
use crate::rat::{format_rat, parse_rat, Rat};
use crate::torus::TorusPoint;
use serde_json::{json, Map, Value};

pub const GROUP_SCHEMA: &str = "nilext/group/v1";
pub const POLYMAP_SCHEMA: &str = "nilext/polymap/v1";
pub const ORBIT_SCHEMA: &str = "nilext/orbit/v1";
pub const NILSEQ_SCHEMA: &str = "nilext/nilseq/v1";
pub const FUNCTION_SCHEMA: &str = "nilext/function/v1";
pub const REPORT_SCHEMA: &str = "nilext/report/v1";

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| invalid(format!("missing field '{}'", key)))
}

fn as_i128(v: &Value) -> Result<i128> {
    if let Some(n) = v.as_i64() {
        return Ok(n as i128);
    }
    if let Some(s) = v.as_str() {
        return s.parse().map_err(|_| invalid("bad integer string"));
    }
    Err(invalid(format!("expected integer, got {}", v)))
}

fn int_vec(v: &Value) -> Result<Vec<i128>> {
    v.as_array()
        .ok_or_else(|| invalid("expected array"))?
        .iter()
        .map(as_i128)
        .collect()
}

pub fn group_to_json(g: &FinAbGroup) -> Value {
    json!({
        "schema": GROUP_SCHEMA,
        "factors": g.factors().iter().map(|&n| Value::from(n as i64)).collect::<Vec<_>>(),
    })
}

pub fn group_from_json(v: &Value) -> Result<FinAbGroup> {
    FinAbGroup::new(int_vec(get(v, "factors")?)?)
}

pub fn matrix_to_json(m: &IntMat) -> Value {
    let data: Vec<Value> = (0..m.rows())
        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
        .map(|(i, j)| Value::from(m[(i, j)] as i64))
        .collect();
    json!({"rows": m.rows(), "cols": m.cols(), "data": data})
}

pub fn matrix_from_json(v: &Value) -> Result<IntMat> {
    let rows = as_i128(get(v, "rows")?)? as usize;
    let cols = as_i128(get(v, "cols")?)? as usize;
    let data = int_vec(get(v, "data")?)?;
    if data.len() != rows * cols {
        return Err(invalid("matrix data length mismatch"));
    }
    let mut m = IntMat::zero(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = data[i * cols + j];
        }
    }
    Ok(m)
}

fn rat_value(q: &Rat) -> Value {
    Value::String(format_rat(q))
}

fn rat_from(v: &Value) -> Result<Rat> {
    match v {
        Value::String(s) => parse_rat(s).ok_or_else(|| invalid(format!("bad rational '{}'", s))),
        Value::Number(_) => as_i128(v).map(Rat::from_integer),
        _ => Err(invalid("expected rational")),
    }
}

/// One of `rational`, `torus` or `zm` polynomial maps.
pub enum AnyPoly {
    Rational(QPoly),
    Torus(TPoly),
    Zm(ZmPoly),
}

pub fn qpoly_to_json(p: &QPoly, k: u32) -> Value {
    poly_to_json_impl(
        p.arity(),
        k,
        json!({"kind": "rational", "d": p.shape()}),
        p.coeffs()
            .map(|(w, c)| (w.clone(), c.0.iter().map(rat_value).collect::<Vec<_>>())),
    )
}

pub fn tpoly_to_json(p: &TPoly, k: u32) -> Value {
    poly_to_json_impl(
        p.arity(),
        k,
        json!({"kind": "torus", "d": p.shape()}),
        p.coeffs().map(|(w, c)| {
            (
                w.clone(),
                c.0.iter().map(|t| rat_value(&t.value())).collect::<Vec<_>>(),
            )
        }),
    )
}

pub fn zmpoly_to_json(p: &ZmPoly, k: u32) -> Value {
    poly_to_json_impl(
        p.arity(),
        k,
        json!({"kind": "zm", "m": *p.shape() as i64}),
        p.coeffs()
            .map(|(w, c)| (w.clone(), vec![Value::from(c.value as i64)])),
    )
}

fn poly_to_json_impl<I: Iterator<Item = (MultiIndex, Vec<Value>)>>(
    r: usize,
    k: u32,
    target: Value,
    coeffs: I,
) -> Value {
    let coeffs: Vec<Value> = coeffs
        .map(|(w, a)| {
            let a_val = if a.len() == 1 {
                a.into_iter().next().unwrap()
            } else {
                Value::Array(a)
            };
            json!({"w": w.0, "a": a_val})
        })
        .collect();
    json!({
        "schema": POLYMAP_SCHEMA,
        "r": r,
        "k": k,
        "target": target,
        "coeffs": coeffs,
    })
}

fn coeff_entries(v: &Value, r: usize) -> Result<Vec<(MultiIndex, Vec<Value>)>> {
    let mut out = Vec::new();
    for entry in get(v, "coeffs")?
        .as_array()
        .ok_or_else(|| invalid("coeffs must be an array"))?
    {
        let w: Vec<u32> = get(entry, "w")?
            .as_array()
            .ok_or_else(|| invalid("w must be an array"))?
            .iter()
            .map(|x| as_i128(x).map(|n| n as u32))
            .collect::<Result<_>>()?;
        if w.len() != r {
            return Err(invalid("multi-index arity mismatch"));
        }
        let a = get(entry, "a")?;
        let parts = match a {
            Value::Array(items) => items.clone(),
            other => vec![other.clone()],
        };
        out.push((MultiIndex(w), parts));
    }
    Ok(out)
}

pub fn poly_from_json(v: &Value) -> Result<AnyPoly> {
    let r = as_i128(get(v, "r")?)? as usize;
    let k = as_i128(get(v, "k")?)? as u32;
    let target = get(v, "target")?;
    let kind = get(target, "kind")?
        .as_str()
        .ok_or_else(|| invalid("target.kind must be a string"))?;
    let entries = coeff_entries(v, r)?;
    for (w, _) in &entries {
        if w.total() > k {
            return Err(invalid(format!(
                "coefficient index {:?} exceeds degree bound {}",
                w.0, k
            )));
        }
    }
    match kind {
        "rational" => {
            let d = as_i128(get(target, "d")?)? as usize;
            let mut p: QPoly = Poly::zero(r, d);
            for (w, parts) in entries {
                if parts.len() != d {
                    return Err(invalid("coefficient dimension mismatch"));
                }
                let vals: Vec<Rat> = parts.iter().map(rat_from).collect::<Result<_>>()?;
                p.set_coeff(w, RatVec(vals));
            }
            Ok(AnyPoly::Rational(p))
        }
        "torus" => {
            let d = as_i128(get(target, "d")?)? as usize;
            let mut p: TPoly = Poly::zero(r, d);
            for (w, parts) in entries {
                if parts.len() != d {
                    return Err(invalid("coefficient dimension mismatch"));
                }
                let vals: Vec<TorusPoint> = parts
                    .iter()
                    .map(|x| rat_from(x).map(TorusPoint::new))
                    .collect::<Result<_>>()?;
                p.set_coeff(w, TorusVec(vals));
            }
            Ok(AnyPoly::Torus(p))
        }
        "zm" => {
            let m = as_i128(get(target, "m")?)?;
            let mut p: ZmPoly = Poly::zero(r, m);
            for (w, parts) in entries {
                if parts.len() != 1 {
                    return Err(invalid("zm coefficients are scalars"));
                }
                p.set_coeff(w, ZmEl::new(as_i128(&parts[0])?, m));
            }
            Ok(AnyPoly::Zm(p))
        }
        other => Err(invalid(format!("unknown target kind '{}'", other))),
    }
}

pub fn tpoly_from_json(v: &Value) -> Result<TPoly> {
    match poly_from_json(v)? {
        AnyPoly::Torus(p) => Ok(p),
        _ => Err(invalid("expected a torus-valued polynomial map")),
    }
}

pub fn hpoint_to_json(h: &HPoint) -> Value {
    json!({
        "poly": qpoly_to_json(h.poly(), h.poly().total_degree()),
        "shift": h.shift().iter().map(rat_value).collect::<Vec<_>>(),
    })
}

pub fn hpoint_from_json(v: &Value) -> Result<HPoint> {
    let AnyPoly::Rational(poly) = poly_from_json(get(v, "poly")?)? else {
        return Err(invalid("hpoint poly must be rational-valued"));
    };
    let shift: Vec<Rat> = get(v, "shift")?
        .as_array()
        .ok_or_else(|| invalid("shift must be an array"))?
        .iter()
        .map(rat_from)
        .collect::<Result<_>>()?;
    if shift.len() != poly.arity() {
        return Err(invalid("shift length must match poly arity"));
    }
    Ok(HPoint::new(poly, shift))
}

pub fn orbit_to_json(o: &LinearOrbit) -> Value {
    json!({
        "schema": ORBIT_SCHEMA,
        "domain": group_to_json(o.domain()),
        "degree": o.degree(),
        "base": hpoint_to_json(o.base()),
        "gens": o.gens().iter().map(hpoint_to_json).collect::<Vec<_>>(),
    })
}

pub fn orbit_from_json(v: &Value) -> Result<LinearOrbit> {
    let domain = group_from_json(get(v, "domain")?)?;
    let degree = as_i128(get(v, "degree")?)? as u32;
    let base = hpoint_from_json(get(v, "base")?)?;
    let gens: Vec<HPoint> = get(v, "gens")?
        .as_array()
        .ok_or_else(|| invalid("gens must be an array"))?
        .iter()
        .map(hpoint_from_json)
        .collect::<Result<_>>()?;
    LinearOrbit::new(domain, base, gens, degree)
}

pub fn nilseq_to_json(n: &Nilsequence) -> Value {
    let orbit = match n.form() {
        OrbitForm::Poly(p) => json!({"form": "poly", "poly": tpoly_to_json(p, p.total_degree())}),
        OrbitForm::Linear(o) => json!({"form": "linear", "orbit": orbit_to_json(o)}),
    };
    json!({
        "schema": NILSEQ_SCHEMA,
        "domain": group_to_json(n.domain()),
        "orbit": orbit,
        "weights": n.weights().iter().map(|&w| Value::from(w as i64)).collect::<Vec<_>>(),
    })
}

pub fn nilseq_from_json(v: &Value) -> Result<Nilsequence> {
    let domain = group_from_json(get(v, "domain")?)?;
    let weights = int_vec(get(v, "weights")?)?;
    let orbit = get(v, "orbit")?;
    let form = get(orbit, "form")?
        .as_str()
        .ok_or_else(|| invalid("orbit.form must be a string"))?;
    match form {
        "poly" => {
            let p = tpoly_from_json(get(orbit, "poly")?)?;
            let n = Nilsequence::from_phase(&domain, p)?;
            if weights != n.weights() {
                return Err(invalid("poly-form nilsequence weights must be all ones"));
            }
            Ok(n)
        }
        "linear" => {
            let o = orbit_from_json(get(orbit, "orbit")?)?;
            if o.domain() != &domain {
                return Err(invalid("orbit domain does not match nilsequence domain"));
            }
            Nilsequence::from_linear(o, weights)
        }
        other => Err(invalid(format!("unknown orbit form '{}'", other))),
    }
}

pub fn function_to_json(f: &GroupFunction) -> Value {
    json!({
        "schema": FUNCTION_SCHEMA,
        "group": group_to_json(f.group()),
        "values": f
            .values()
            .iter()
            .map(|z| json!([z.re, z.im]))
            .collect::<Vec<_>>(),
    })
}

pub fn function_from_json(v: &Value) -> Result<GroupFunction> {
    let group = group_from_json(get(v, "group")?)?;
    let values: Vec<C64> = get(v, "values")?
        .as_array()
        .ok_or_else(|| invalid("values must be an array"))?
        .iter()
        .map(|pair| {
            let arr = pair.as_array().ok_or_else(|| invalid("value must be [re, im]"))?;
            if arr.len() != 2 {
                return Err(invalid("value must be [re, im]"));
            }
            let re = arr[0].as_f64().ok_or_else(|| invalid("re must be a number"))?;
            let im = arr[1].as_f64().ok_or_else(|| invalid("im must be a number"))?;
            Ok(C64::new(re, im))
        })
        .collect::<Result<_>>()?;
    GroupFunction::new(group, values)
}

pub fn embedding_to_json(e: &SubgroupEmbedding) -> Value {
    json!({
        "sub": group_to_json(e.sub()),
        "amb": group_to_json(e.amb()),
        "map": matrix_to_json(e.map()),
    })
}

pub fn embedding_from_json(v: &Value) -> Result<SubgroupEmbedding> {
    let sub = group_from_json(get(v, "sub")?)?;
    let amb = group_from_json(get(v, "amb")?)?;
    let map = matrix_from_json(get(v, "map")?)?;
    SubgroupEmbedding::new(sub, amb, map)
}

/// Deterministic canonical string (serde_json sorts object keys).
pub fn canonical_string(v: &Value) -> String {
    serde_json::to_string(v).expect("value serializes")
}

/// Schema-dispatched consistency check; returns the list of checks performed.
pub fn verify_document(v: &Value) -> Result<Vec<String>> {
    let schema = get(v, "schema")?
        .as_str()
        .ok_or_else(|| invalid("schema must be a string"))?;
    let mut checks = Vec::new();
    match schema {
        GROUP_SCHEMA => {
            let g = group_from_json(v)?;
            checks.push(format!("group factors valid ({:?})", g.factors()));
            let dec = g.canonical_decomposition();
            dec.iso.validate().map_err(|e| {
                Error::Identity(format!("canonical decomposition isomorphism: {}", e))
            })?;
            checks.push(format!(
                "canonical decomposition {:?} with valid isomorphisms",
                dec.invariant_factors()
            ));
            let again = dec.canonical.canonical_decomposition();
            if again.invariant_factors() != dec.invariant_factors() {
                return Err(Error::Identity(
                    "canonical decomposition is not idempotent".into(),
                ));
            }
            checks.push("canonical decomposition idempotent".into());
        }
        POLYMAP_SCHEMA => {
            let p = poly_from_json(v)?;
            let (arity, degree) = match &p {
                AnyPoly::Rational(p) => (p.arity(), p.total_degree()),
                AnyPoly::Torus(p) => (p.arity(), p.total_degree()),
                AnyPoly::Zm(p) => (p.arity(), p.total_degree()),
            };
            checks.push(format!("polynomial map parsed: arity {}, degree {}", arity, degree));
            let k = as_i128(get(v, "k")?)? as u32;
            let count = multi_indices(arity, k).len();
            checks.push(format!("degree bound {} admits {} coefficients", k, count));
        }
        ORBIT_SCHEMA => {
            let o = orbit_from_json(v)?;
            o.validate()?;
            checks.push(format!(
                "orbit valid: {} commuting generators, lattice powers confirmed",
                o.gens().len()
            ));
        }
        NILSEQ_SCHEMA => {
            let n = nilseq_from_json(v)?;
            checks.push(format!(
                "nilsequence valid on {:?}, degree {}, fiber dimension {}",
                n.domain(),
                n.degree(),
                n.fiber_dim()
            ));
            if let OrbitForm::Linear(o) = n.form() {
                o.validate()?;
                checks.push("linear orbit invariants confirmed".into());
            }
        }
        FUNCTION_SCHEMA => {
            let f = function_from_json(v)?;
            checks.push(format!(
                "function table complete on {:?} ({} values, max modulus {:.6})",
                f.group(),
                f.values().len(),
                f.max_modulus()
            ));
        }
        other => return Err(invalid(format!("unknown schema '{}'", other))),
    }
    Ok(checks)
}

/// Convenience wrapper keeping object key order deterministic.
pub fn sorted_object(entries: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, val) in entries {
        map.insert(k.to_string(), val);
    }
    Value::Object(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::linearize;
    use crate::rat::rat;

    #[test]
    fn group_round_trip() {
        let g = FinAbGroup::new(vec![4, 2, 9]).unwrap();
        let v = group_to_json(&g);
        assert_eq!(group_from_json(&v).unwrap(), g);
    }

    #[test]
    fn scalar_coefficients_serialize_as_plain_strings() {
        let p: TPoly = Poly::from_coeffs(
            2,
            1usize,
            [(
                MultiIndex(vec![1, 1]),
                TorusVec(vec![TorusPoint::new(rat(1, 2))]),
            )],
        );
        let v = tpoly_to_json(&p, 2);
        assert_eq!(v["coeffs"][0]["a"], Value::String("1/2".into()));
        let back = tpoly_from_json(&v).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn orbit_round_trip_preserves_validation() {
        let domain = FinAbGroup::new(vec![4, 3]).unwrap();
        let p: TPoly = Poly::from_coeffs(
            2,
            1usize,
            [
                (MultiIndex(vec![2, 0]), TorusVec(vec![TorusPoint::new(rat(1, 2))])),
                (MultiIndex(vec![0, 1]), TorusVec(vec![TorusPoint::new(rat(1, 3))])),
            ],
        );
        let orbit = linearize(&p, &domain).unwrap();
        let v = orbit_to_json(&orbit);
        let back = orbit_from_json(&v).unwrap();
        assert_eq!(back, orbit);
        assert!(verify_document(&v).is_ok());
    }

    #[test]
    fn nilseq_round_trip_both_forms() {
        let domain = FinAbGroup::cyclic(6);
        let p: TPoly = Poly::from_coeffs(
            1,
            1usize,
            [(MultiIndex(vec![1]), TorusVec(vec![TorusPoint::new(rat(1, 6))]))],
        );
        let n = Nilsequence::from_phase(&domain, p).unwrap();
        let v = nilseq_to_json(&n);
        let back = nilseq_from_json(&v).unwrap();
        for z in domain.elements() {
            assert_eq!(back.torus_value(&z), n.torus_value(&z));
        }
        let lin = n.linearized().unwrap();
        let v2 = nilseq_to_json(&lin);
        let back2 = nilseq_from_json(&v2).unwrap();
        for z in domain.elements() {
            assert_eq!(back2.torus_value(&z), n.torus_value(&z));
        }
        assert!(verify_document(&v2).is_ok());
    }

    #[test]
    fn function_round_trip() {
        let g = FinAbGroup::new(vec![2, 3]).unwrap();
        let f = GroupFunction::from_fn(&g, |x| {
            C64::new(x.coords()[0] as f64, x.coords()[1] as f64 / 3.0)
        });
        let v = function_to_json(&f);
        let back = function_from_json(&v).unwrap();
        for i in 0..6 {
            assert_eq!(back.at(i), f.at(i));
        }
    }

    #[test]
    fn verify_rejects_unknown_schema() {
        assert!(verify_document(&json!({"schema": "nilext/bogus/v1"})).is_err());
    }

    #[test]
    fn canonical_strings_have_sorted_keys() {
        let v = json!({"b": 1, "a": 2});
        assert_eq!(canonical_string(&v), r#"{"a":2,"b":1}"#);
    }
}
