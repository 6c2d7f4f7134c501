//! Regularity, units of the symmetric completion and their inverses.

use std::collections::BTreeMap;

use crate::coeffs::idx::{indices_of_total, indices_up_to};
use crate::coeffs::{Idx, Scalar, INF};
use crate::error::{Error, Result};
use crate::opcore::diamond::{diamond_mono, from_slices};
use crate::opcore::kind::Kind;
use crate::opcore::linalg::{velem_row, Echelon, GradedKey, Row};
use crate::opcore::mul::mul;
use crate::opcore::operator::{Mono, Operator};
use crate::opcore::orders::{ord, symbol};
use crate::opcore::precision::Precision;

fn restrict_tail(row: Row<GradedKey>, n: usize, tail: i64) -> Row<GradedKey> {
    row.into_iter().filter(|(k, _)| k.0.get(n - 1) >= -tail).collect()
}

/// Linear independence of {d^k diamond sigma(P) : |k| = m} for every m <= p.
pub fn is_regular_up_to(p: &Operator, deg: i64) -> Result<bool> {
    if deg > p.prec.x_deg {
        return Err(Error::PrecisionExhausted(format!("regularity to degree {deg} needs x-degree {deg}, have {}", p.prec.x_deg)));
    }
    if p.is_zero() {
        return Ok(false);
    }
    let s = symbol(p);
    let n = p.n;
    for m in 0..=deg {
        let ks = indices_of_total(n, m);
        let mut imgs = Vec::with_capacity(ks.len());
        for k in &ks {
            imgs.push(diamond_mono(k, &s)?);
        }
        let tail = imgs.iter().map(|o| o.prec.dn_tail).min().unwrap_or(INF);
        let mut e = Echelon::new();
        for o in &imgs {
            if e.insert(restrict_tail(velem_row(o), n, tail)).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// ord(P) = 0 and sigma(P) regular through degree `deg`.
pub fn is_unit(p: &Operator, deg: i64) -> Result<bool> {
    if ord(p) != Some(0) || p.ord_bound > 0 {
        return Ok(false);
    }
    is_regular_up_to(p, deg)
}

/// S with d^k diamond S = w_k, via S_(k) = sum_{i <= k} binom(k, i) (-d)^{k-i} w_i.
pub fn operator_from_diamonds(n: usize, w: &BTreeMap<Idx, Operator>, cutoff: i64) -> Result<Operator> {
    let mut sl = BTreeMap::new();
    for k in indices_up_to(n, cutoff) {
        let mut acc = Operator::zero(n, Kind::VElem, Precision::EXACT);
        for i in crate::coeffs::idx::indices_below(n, &k) {
            let wi = w.get(&i).ok_or_else(|| Error::PrecisionExhausted(format!("missing diamond value at {:?}", i.to_vec(n))))?;
            let sign = if (k.total() - i.total()) % 2 == 0 { 1 } else { -1 };
            let c = Scalar::from_bigint(k.binom(&i) * sign);
            let d = Operator::d_mono(n, k.sub(&i), c);
            acc = acc.add(&mul(&d, wi)?)?;
        }
        sl.insert(k, acc);
    }
    from_slices(n, &sl, cutoff)
}

/// Inverse of a unit.
///
/// Differential units are inverted through the diamond action on F; pseudodifferential
/// ones must have the form c(1 + S) with S of negative d_n-order and ord(S) <= 0.
pub fn invert_unit_op(p: &Operator) -> Result<Operator> {
    let n = p.n;
    if p.effective_kind().is_differential() {
        let v = p.prec.x_deg;
        if v >= INF {
            return invert_exact_polynomial(p);
        }
        if !is_unit(p, v)? {
            return Err(Error::NotAUnit("ord is not 0 or the symbol is not regular".into()));
        }
        let mut e: Echelon<GradedKey> = Echelon::new();
        let basis = indices_up_to(n, v);
        for a in &basis {
            e.insert(velem_row(&diamond_mono(a, p)?));
        }
        let mut w = BTreeMap::new();
        for j in &basis {
            let mut target = Row::new();
            target.insert(GradedKey(*j), Scalar::one());
            let comb = e.express(&target).ok_or_else(|| Error::NotAUnit("diamond map is not onto".into()))?;
            let terms = comb.iter().map(|(id, c)| (Mono::new(Idx::zero(), basis[*id]), c.clone()));
            w.insert(*j, Operator::from_terms(n, Kind::VElem, Precision::EXACT, 0, Some(v), terms));
        }
        let r = operator_from_diamonds(n, &w, v)?;
        let kind = if p.kind == Kind::VElem { Kind::DSym } else { p.kind.join(Kind::DSym) };
        return Ok(r.with_kind(kind)?.with_bounds(0, None));
    }
    // pseudodifferential: c (1 + S)
    let c = p.dn_coefficient(0);
    if crate::opcore::orders::ord_n(p)? != Some(0) || !c.is_constant_coefficient() || c.len() != 1 {
        return Err(Error::NotAUnit("leading d_n coefficient is not a nonzero constant".into()));
    }
    let c0 = c.coeff(&Mono::new(Idx::zero(), Idx::zero()));
    if c0.is_zero() {
        return Err(Error::NotAUnit("leading d_n coefficient is not a nonzero constant".into()));
    }
    let cinv = c0.inv()?;
    let one = Operator::one(n, p.kind);
    let s = p.scale(&cinv).sub(&one)?;
    if s.ord_bound > 0 {
        return Err(Error::NotAUnit("perturbation has positive ord".into()));
    }
    let s = s.with_bounds(0, Some(-1));
    let q = p.prec.dn_tail.min(p.prec.total);
    if q >= INF {
        return Err(Error::PrecisionExhausted("an infinite inverse needs a finite d_n tail".into()));
    }
    let ms = s.neg();
    let mut acc = one.clone();
    let mut pw = one;
    for _ in 0..q.max(0) {
        pw = mul(&pw, &ms)?;
        if pw.is_zero() && pw.prec.dn_tail >= q && pw.prec.total >= q {
            break;
        }
        acc = acc.add(&pw)?;
    }
    let cap = Precision { x_deg: INF, dn_tail: q, total: INF };
    let kind = p.kind;
    let r = acc.truncate(cap).scale(&cinv);
    let r = Operator::from_terms(n, kind, r.prec, 0, Some(0), r.terms);
    Ok(r)
}

/// Exact differential polynomial units are the nonzero constants.
fn invert_exact_polynomial(p: &Operator) -> Result<Operator> {
    if p.len() == 1 {
        if let Some((m, c)) = p.terms.iter().next() {
            if *m == Mono::new(Idx::zero(), Idx::zero()) {
                return Ok(Operator::constant(p.n, p.kind, c.inv()?));
            }
        }
    }
    Err(Error::NotAUnit("exact differential polynomial with non-constant terms; truncate it first".into()))
}

/// Residual exactness of P * Q - 1 on its sound region.
pub fn is_inverse_pair(p: &Operator, q: &Operator) -> Result<bool> {
    let one = Operator::one(p.n, Kind::VElem);
    let r = mul(p, q)?.sub(&one)?;
    Ok(r.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_plus_euler() {
        let e = mul(&Operator::x(1, 0), &Operator::d(1, 0, 1)).unwrap();
        let p = Operator::one(1, Kind::DSym).add(&e).unwrap().truncate(Precision::x_only(6)).with_kind(Kind::DSym).unwrap();
        assert!(is_regular_up_to(&p, 6).unwrap());
        let q = invert_unit_op(&p).unwrap();
        assert!(is_inverse_pair(&p, &q).unwrap());
        assert!(is_inverse_pair(&q, &p).unwrap());
    }

    #[test]
    fn x_is_not_regular() {
        let x = Operator::x(1, 0).truncate(Precision::x_only(3));
        assert!(!is_regular_up_to(&x, 2).unwrap());
    }

    #[test]
    fn geometric_inverse() {
        let s = mul(&Operator::x(2, 0), &Operator::d(2, 1, -1)).unwrap();
        let p = Operator::one(2, Kind::EHat).add(&s).unwrap().truncate(Precision::boxed(6, 6));
        let q = invert_unit_op(&p).unwrap();
        // 1 - x1 d2^-1 + x1^2 d2^-2 - ...
        let m = Mono::new(Idx::from_slice(&[2, 0]).unwrap(), Idx::from_slice(&[0, -2]).unwrap());
        assert_eq!(q.coeff(&m), Scalar::one());
        let r = mul(&p, &q).unwrap().sub(&Operator::one(2, Kind::EHat)).unwrap();
        assert!(r.is_zero());
        assert!(r.prec().x_deg >= 5);
    }
}
