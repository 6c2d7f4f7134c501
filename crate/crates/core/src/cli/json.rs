//! JSON forms of scalars, series, operators and Grassmannian points.
//!
//! Infinite precision bounds are written as `null`. Terms are sorted by
//! (|x|, x lexicographic, d anti-lexicographic).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::str::FromStr;

use serde_json::{json, Map, Value};

use crate::coeffs::{Idx, PowerSeries, Scalar, INF, MAX_VARS};
use crate::error::{Error, Result};
use crate::opcore::{Kind, Mono, Operator, Precision};
use crate::sato::{SchurPair, SubspaceW};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Parsing context: an optional cyclotomic field every scalar is lifted into, and the
/// x-degree used to expand rational coefficients when the operator gives none.
#[derive(Clone, Copy, Debug, Default)]
pub struct Codec {
    pub field: Option<u32>,
    pub expand_to: Option<i64>,
}

pub fn bound_to_json(v: i64) -> Value {
    if v >= INF / 2 {
        Value::Null
    } else if v <= -INF / 2 {
        json!("-inf")
    } else {
        json!(v)
    }
}

fn bound_from_json(v: Option<&Value>) -> Result<i64> {
    match v {
        None | Some(Value::Null) => Ok(INF),
        Some(Value::String(s)) if s == "-inf" => Ok(-INF),
        Some(x) => x.as_i64().ok_or_else(|| perr(format!("bad precision bound {x}"))),
    }
}

pub fn idx_to_json(i: &Idx, n: usize) -> Value {
    json!(i.to_vec(n))
}

pub fn idx_from_json(v: &Value, n: usize) -> Result<Idx> {
    let a = v.as_array().ok_or_else(|| perr("multi-index must be an array"))?;
    if a.len() != n {
        return Err(perr(format!("multi-index of length {} in {n} variables", a.len())));
    }
    let vals: Vec<i64> = a.iter().map(|x| x.as_i64().ok_or_else(|| perr("multi-index entries must be integers"))).collect::<Result<_>>()?;
    Idx::from_slice(&vals)
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    Value::String(s.to_string())
}

impl Codec {
    pub fn scalar(&self, v: &Value) -> Result<Scalar> {
        let s = match v {
            Value::String(s) => Scalar::from_str(s)?,
            Value::Number(x) => Scalar::from_i64(x.as_i64().ok_or_else(|| perr(format!("non-integer number {x}; use \"p/q\"")))?),
            _ => return Err(perr(format!("bad scalar {v}"))),
        };
        match self.field {
            Some(k) if k > 1 => s.lift_to(k),
            _ => Ok(s),
        }
    }

    pub fn series(&self, v: &Value) -> Result<PowerSeries> {
        let n = get_n(v)?;
        let prec = bound_from_json(v.get("prec"))?;
        let mut terms = Vec::new();
        for t in get_array(v, "terms")? {
            let x = idx_from_json(t.get("x").ok_or_else(|| perr("series term needs x"))?, n)?;
            terms.push((x, self.scalar(t.get("c").ok_or_else(|| perr("series term needs c"))?)?));
        }
        Ok(PowerSeries::from_terms(n, prec, terms))
    }

    pub fn operator(&self, v: &Value) -> Result<Operator> {
        let n = get_n(v)?;
        let kind = Kind::from_str(v.get("kind").and_then(Value::as_str).ok_or_else(|| perr("operator needs a kind"))?)?;
        let p = v.get("prec");
        let mut prec = Precision {
            x_deg: bound_from_json(p.and_then(|p| p.get("x_deg")))?,
            dn_tail: bound_from_json(p.and_then(|p| p.get("dn_tail")))?,
            total: bound_from_json(p.and_then(|p| p.get("total")))?,
        };
        let mut terms = Vec::new();
        if v.get("terms").is_some() {
            for t in get_array(v, "terms")? {
                let x = idx_from_json(t.get("x").ok_or_else(|| perr("term needs x"))?, n)?;
                let d = idx_from_json(t.get("d").ok_or_else(|| perr("term needs d"))?, n)?;
                terms.push((Mono::new(x, d), self.scalar(t.get("c").ok_or_else(|| perr("term needs c"))?)?));
            }
        }
        // rational coefficients num/den in front of d^k, expanded through x_deg
        if let Some(rs) = v.get("rational") {
            if prec.x_deg >= INF {
                prec.x_deg = self.expand_to.ok_or_else(|| perr("rational coefficients need a finite x_deg or --prec-x"))?;
            }
            for r in rs.as_array().ok_or_else(|| perr("rational must be an array"))? {
                let d = idx_from_json(r.get("d").ok_or_else(|| perr("rational term needs d"))?, n)?;
                let num = self.series(r.get("num").ok_or_else(|| perr("rational term needs num"))?)?;
                let den = self.series(r.get("den").ok_or_else(|| perr("rational term needs den"))?)?;
                let f = PowerSeries::from_rational(&num, &den, prec.x_deg)?;
                terms.extend(f.terms().iter().map(|(x, c)| (Mono::new(*x, d), c.clone())));
            }
        }
        let ord_bound = match v.get("ord_bound") {
            None | Some(Value::Null) => terms.iter().map(|(m, _)| m.ord()).max().unwrap_or(-INF),
            Some(x) => bound_from_json(Some(x))?,
        };
        let dn_bound = match kind {
            Kind::DSym | Kind::PiHat => None,
            _ => Some(terms.iter().map(|(m, _)| m.d.get(n - 1)).max().unwrap_or(0)),
        };
        Ok(Operator::from_terms(n, kind, prec, ord_bound, dn_bound, terms))
    }

    pub fn operators(&self, v: &Value) -> Result<Vec<Operator>> {
        v.as_array().ok_or_else(|| perr("expected an array of operators"))?.iter().map(|o| self.operator(o)).collect()
    }

    pub fn subspace(&self, v: &Value) -> Result<SubspaceW> {
        let mu = v.get("mu").and_then(Value::as_i64).ok_or_else(|| perr("subspace needs mu"))?;
        let cutoff = v.get("cutoff").and_then(Value::as_i64).ok_or_else(|| perr("subspace needs cutoff"))?;
        let mut basis = BTreeMap::new();
        let mut n = None;
        for b in get_array(v, "basis")? {
            let op = self.operator(b.get("op").ok_or_else(|| perr("basis entry needs op"))?)?;
            let nn = op.nvars();
            if *n.get_or_insert(nn) != nn {
                return Err(perr("basis elements in different variable counts"));
            }
            basis.insert(idx_from_json(b.get("k").ok_or_else(|| perr("basis entry needs k"))?, nn)?, op);
        }
        let n = n.ok_or_else(|| perr("empty basis"))?;
        SubspaceW::new(n, mu, basis, cutoff)
    }

    pub fn pair(&self, v: &Value) -> Result<SchurPair> {
        let a = self.operators(v.get("a").ok_or_else(|| perr("pair needs a"))?)?;
        let w = self.subspace(v.get("w").ok_or_else(|| perr("pair needs w"))?)?;
        let mut p = SchurPair::new(a, w)?;
        p.rank_hint = v.get("rank_hint").and_then(Value::as_u64).map(|r| r as usize);
        Ok(p)
    }
}

fn get_n(v: &Value) -> Result<usize> {
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| perr("missing variable count n"))? as usize;
    if n == 0 || n > MAX_VARS {
        return Err(perr(format!("n = {n} outside 1..={MAX_VARS}")));
    }
    Ok(n)
}

fn get_array<'a>(v: &'a Value, key: &str) -> Result<&'a Vec<Value>> {
    v.get(key).and_then(Value::as_array).ok_or_else(|| perr(format!("missing array '{key}'")))
}

fn cmp_lex(a: &Idx, b: &Idx, n: usize) -> Ordering {
    a.to_vec(n).cmp(&b.to_vec(n))
}

pub fn series_to_json(f: &PowerSeries) -> Value {
    let n = f.nvars();
    let mut ts: Vec<(&Idx, &Scalar)> = f.terms().iter().collect();
    ts.sort_by(|a, b| a.0.total().cmp(&b.0.total()).then_with(|| cmp_lex(a.0, b.0, n)));
    let terms: Vec<Value> = ts.into_iter().map(|(x, c)| json!({"x": idx_to_json(x, n), "c": scalar_to_json(c)})).collect();
    json!({"n": n, "prec": bound_to_json(f.prec()), "terms": terms})
}

pub fn precision_to_json(p: &Precision) -> Value {
    json!({"x_deg": bound_to_json(p.x_deg), "dn_tail": bound_to_json(p.dn_tail), "total": bound_to_json(p.total)})
}

pub fn operator_to_json(p: &Operator) -> Value {
    let n = p.nvars();
    let mut ts: Vec<(&Mono, &Scalar)> = p.terms().iter().collect();
    ts.sort_by(|a, b| {
        a.0.x.total().cmp(&b.0.x.total()).then_with(|| cmp_lex(&a.0.x, &b.0.x, n)).then_with(|| a.0.d.cmp_antilex(&b.0.d))
    });
    let terms: Vec<Value> =
        ts.into_iter().map(|(m, c)| json!({"x": idx_to_json(&m.x, n), "d": idx_to_json(&m.d, n), "c": scalar_to_json(c)})).collect();
    json!({
        "n": n,
        "kind": p.kind().to_string(),
        "prec": precision_to_json(&p.prec()),
        "ord_bound": bound_to_json(p.ord_bound()),
        "terms": terms,
    })
}

pub fn subspace_to_json(w: &SubspaceW) -> Value {
    let basis: Vec<Value> = w.basis.iter().map(|(k, op)| json!({"k": idx_to_json(k, w.n), "op": operator_to_json(op)})).collect();
    json!({"n": w.n, "mu": w.mu, "cutoff": w.cutoff, "basis": basis})
}

pub fn pair_to_json(p: &SchurPair) -> Value {
    let mut m = Map::new();
    m.insert("a".into(), Value::Array(p.a_generators.iter().map(operator_to_json).collect()));
    m.insert("w".into(), subspace_to_json(&p.w));
    m.insert("rank_hint".into(), p.rank_hint.map(|r| json!(r)).unwrap_or(Value::Null));
    Value::Object(m)
}
