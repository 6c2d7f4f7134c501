//! Slices, the projection to constant coefficients and the diamond action of F.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::coeffs::{sat_add, sat_sub, Idx, Scalar, INF};
use crate::error::{Error, Result};
use crate::opcore::kind::Kind;
use crate::opcore::mul::mul;
use crate::opcore::operator::{Mono, Operator};
use crate::opcore::precision::Precision;

/// P_(i) = i! * (coefficient block at x^i), a constant-coefficient operator.
pub fn slice(p: &Operator, i: &Idx) -> Result<Operator> {
    let e = i.total();
    if e > p.prec.x_deg {
        return Err(Error::PrecisionExhausted(format!("slice of x-degree {e} beyond exact degree {}", p.prec.x_deg)));
    }
    let f = Scalar::from_bigint(i.factorial());
    let tail = if p.kind.is_differential() { INF } else { p.prec.dn_tail.min(sat_sub(p.prec.total, e)) };
    let n = p.n;
    let ob = sat_add(p.ord_bound, e);
    let db = p.dn_bound.unwrap_or(ob);
    let it = p.terms.iter().filter(|(m, _)| m.x == *i).map(|(m, c)| (Mono::new(Idx::zero(), m.d), c * &f));
    Ok(Operator::from_terms(n, Kind::VElem, Precision { x_deg: INF, dn_tail: tail, total: INF }, ob, Some(db), it))
}

/// All slices with |i| <= v.
pub fn slices(p: &Operator, v: i64) -> Result<BTreeMap<Idx, Operator>> {
    let mut out = BTreeMap::new();
    for i in crate::coeffs::idx::indices_up_to(p.n, v) {
        out.insert(i, slice(p, &i)?);
    }
    Ok(out)
}

/// pi(P): the x-free part, as an element of V_n.
pub fn project_pi(p: &Operator) -> Result<Operator> {
    slice(p, &Idx::zero())
}

/// d^a diamond P = sum_{i <= a} binom(a, i) d^{a-i} P_(i).
pub fn diamond_mono(a: &Idx, p: &Operator) -> Result<Operator> {
    let n = p.n;
    if a.get(n - 1) < 0 || !a.is_nonneg() {
        return Err(Error::KindIncompatible("diamond needs a polynomial in the derivatives".into()));
    }
    if p.kind == Kind::VElem {
        let d = Operator::d_mono(n, *a, Scalar::one());
        return mul(&d, p);
    }
    let mut acc: Option<Operator> = None;
    for i in crate::coeffs::idx::indices_below(n, a) {
        if i.total() > p.prec.x_deg {
            return Err(Error::PrecisionExhausted(format!("diamond by a derivative of degree {} needs x-degree {}", a.total(), i.total())));
        }
        let s = slice(p, &i)?;
        let d = Operator::d_mono(n, a.sub(&i), Scalar::from_bigint(a.binom(&i)));
        let t = mul(&d, &s)?;
        acc = Some(match acc {
            None => t,
            Some(x) => x.add(&t)?,
        });
    }
    Ok(acc.expect("indices_below always contains zero"))
}

/// f diamond P for f in F (a constant-coefficient differential polynomial).
pub fn diamond(f: &Operator, p: &Operator) -> Result<Operator> {
    if f.n != p.n {
        return Err(Error::DimensionMismatch("diamond operands".into()));
    }
    if f.kind != Kind::VElem || f.terms.keys().any(|m| !m.d.is_nonneg()) || f.prec.dn_tail < INF {
        return Err(Error::KindIncompatible("left operand of diamond must lie in F".into()));
    }
    let mut acc = Operator::zero(p.n, Kind::VElem, Precision::EXACT);
    for (m, c) in &f.terms {
        acc = acc.add(&diamond_mono(&m.d, p)?.scale(c))?;
    }
    Ok(acc)
}

/// Reassemble sum_i x^i S_(i) / i! from constant-coefficient slices.
///
/// The region is the largest one consistent with the slice tails; the x-degree is
/// the largest v with every slice of degree <= v present.
pub fn from_slices(n: usize, sl: &BTreeMap<Idx, Operator>, v: i64) -> Result<Operator> {
    let mut tail_at: BTreeMap<i64, i64> = BTreeMap::new();
    let mut terms = Vec::new();
    for (i, s) in sl {
        let e = i.total();
        if e > v {
            continue;
        }
        if s.kind != Kind::VElem || s.n != n {
            return Err(Error::KindIncompatible("slices must be constant-coefficient".into()));
        }
        let t = tail_at.entry(e).or_insert(INF);
        *t = (*t).min(s.prec.dn_tail);
        let inv = BigRational::new(1.into(), i.factorial());
        for (m, c) in &s.terms {
            terms.push((Mono::new(*i, m.d), c.mul_rat(&inv)));
        }
    }
    for e in 0..=v {
        if !tail_at.contains_key(&e) && !crate::coeffs::idx::indices_of_total(n, e).is_empty() {
            return Err(Error::PrecisionExhausted(format!("missing slices of degree {e}")));
        }
    }
    let all_exact = tail_at.values().all(|t| *t >= INF);
    let polynomial = terms.iter().all(|(m, _)| m.d.is_nonneg());
    let (kind, prec) = if all_exact && polynomial {
        (Kind::DSym, Precision::x_only(v))
    } else {
        let big_n = tail_at.values().copied().max().unwrap_or(INF);
        let w = tail_at.iter().map(|(e, t)| sat_add(*t, *e)).min().unwrap_or(INF);
        (Kind::PiHat, Precision { x_deg: v, dn_tail: big_n, total: w })
    };
    let ob = terms.iter().map(|(m, _)| m.ord()).max().unwrap_or(-INF);
    Ok(Operator::from_terms(n, kind, prec, ob, None, terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn slice_examples() {
        let p = mul(&Operator::x(2, 0), &Operator::d(2, 1, 1)).unwrap();
        let s = slice(&p, &Idx::unit(0)).unwrap();
        assert!(s.agrees_with(&Operator::d(2, 1, 1)));
        let one = Operator::one(2, Kind::VElem);
        let dx = diamond(&Operator::d(1, 0, 1), &Operator::x(1, 0)).unwrap();
        assert!(dx.agrees_with(&Operator::one(1, Kind::VElem)));
        assert!(diamond(&one, &p).unwrap().is_zero());
    }

    #[test]
    fn reassembly() {
        let x = Operator::x(2, 0);
        let p = mul(&mul(&x, &x).unwrap(), &Operator::d(2, 1, 2)).unwrap().add(&Operator::d(2, 0, 1)).unwrap().truncate(Precision::x_only(4));
        let sl = slices(&p, 4).unwrap();
        let q = from_slices(2, &sl, 4).unwrap();
        assert_eq!(q.terms(), p.terms());
    }
}
