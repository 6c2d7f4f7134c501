//! Normal-ordered multiplication with sound truncation.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::coeffs::{sat_sub, Idx, Scalar, INF};
use crate::error::{Error, Result};
use crate::opcore::kind::Kind;
use crate::opcore::operator::{Mono, Operator};
use crate::opcore::precision::Precision;

/// Exactness region of P*Q from the regions and bounds of the factors.
pub fn product_precision(p: &Operator, q: &Operator) -> Result<Precision> {
    let (vp, np, wp) = (p.prec.x_deg, p.prec.dn_tail, p.prec.total);
    let (vq, nq, wq) = (q.prec.x_deg, q.prec.dn_tail, q.prec.total);
    let dp = p.ord_bound;
    let mut v = vp.min(sat_sub(vq, dp));
    let mut n = INF;
    let mut w = INF;
    if p.may_have_negative() {
        let lq = q.dn_bound.ok_or_else(|| {
            Error::KindIncompatible("right factor has unbounded d_n degree after a pseudodifferential left factor".into())
        })?;
        w = w.min(sat_sub(sat_sub(vq, dp), lq));
        n = n.min(sat_sub(np, lq));
        w = w.min(sat_sub(wp, lq));
    }
    if q.may_have_negative() {
        match p.dn_bound {
            Some(lp) => n = n.min(sat_sub(nq, lp)),
            None => w = w.min(sat_sub(nq, dp)),
        }
        w = w.min(sat_sub(wq, dp));
    }
    if v >= INF / 2 {
        v = INF;
    }
    Ok(Precision { x_deg: v, dn_tail: n, total: w })
}

fn small_binom(top: i64, m: i64) -> Option<i128> {
    // generalized binomial for small arguments
    let mut num: i128 = 1;
    let mut den: i128 = 1;
    for j in 0..m {
        num = num.checked_mul((top - j) as i128)?;
        den = den.checked_mul((j + 1) as i128)?;
        let g = gcd(num.abs(), den);
        num /= g;
        den /= g;
    }
    Some(num / den)
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a.max(1)
}

fn falling(j: i64, m: i64) -> Option<i128> {
    let mut acc: i128 = 1;
    for r in 0..m {
        acc = acc.checked_mul((j - r) as i128)?;
    }
    Some(acc)
}

fn leibniz_factor(k: &Idx, j: &Idx, m: &Idx, n: usize) -> BigInt {
    let mut acc: i128 = 1;
    let mut ok = true;
    for r in 0..n {
        let mr = m.get(r);
        if mr == 0 {
            continue;
        }
        match (small_binom(k.get(r), mr), falling(j.get(r), mr)) {
            (Some(b), Some(f)) => match acc.checked_mul(b).and_then(|x| x.checked_mul(f)) {
                Some(x) => acc = x,
                None => {
                    ok = false;
                    break;
                }
            },
            _ => {
                ok = false;
                break;
            }
        }
    }
    if ok {
        return BigInt::from(acc);
    }
    let mut big = BigInt::one();
    for r in 0..n {
        let mr = m.get(r);
        if mr == 0 {
            continue;
        }
        big *= crate::coeffs::scalar::binom(k.get(r), mr);
        let mut f = BigInt::one();
        for s in 0..mr {
            f *= BigInt::from(j.get(r) - s);
        }
        big *= f;
    }
    big
}

/// P * Q in normal order, truncated to the sound region.
pub fn mul(p: &Operator, q: &Operator) -> Result<Operator> {
    if p.n != q.n {
        return Err(Error::DimensionMismatch(format!("operators in {} and {} variables", p.n, q.n)));
    }
    let n = p.n;
    let kind = if p.kind == Kind::VElem && q.kind == Kind::VElem {
        Kind::VElem
    } else {
        p.effective_kind().product(q.effective_kind())?
    };
    let prec = product_precision(p, q)?.normalized(kind);
    if prec.is_exhausted() && kind != Kind::VElem {
        return Err(Error::PrecisionExhausted(format!(
            "product of operators with ord bound {} and x-degree {} / {}",
            p.ord_bound, p.prec.x_deg, q.prec.x_deg
        )));
    }
    let ord_bound = p.ord_bound.saturating_add(q.ord_bound).max(-INF);
    let dn_bound = match (p.dn_bound, q.dn_bound) {
        (Some(a), Some(b)) => Some(a.saturating_add(b).max(-INF)),
        _ => None,
    };
    let mut acc: HashMap<Mono, Scalar> = HashMap::new();
    let last = n - 1;
    let mut mbox = [0i64; crate::coeffs::MAX_VARS];
    for (mp, cp) in &p.terms {
        let ei = mp.x.total();
        if ei > prec.x_deg {
            continue;
        }
        let k = mp.d;
        for (mq, cq) in &q.terms {
            let j = mq.x;
            let l = mq.d;
            // per-axis upper limits for the number of derivatives moved past x^j
            let mut msum = 0;
            for r in 0..n {
                let kr = k.get(r);
                let jr = j.get(r);
                mbox[r] = if kr < 0 { jr } else { kr.min(jr) };
                msum += mbox[r];
            }
            let e0 = ei + j.total();
            if e0 - msum > prec.x_deg {
                continue;
            }
            let t0 = k.get(last) + l.get(last);
            let c0 = cp * cq;
            let base_x = mp.x.add(&j);
            let base_d = k.add(&l);
            // odometer over 0 <= m <= mbox
            let mut m = Idx::zero();
            loop {
                let mt = m.total();
                let e = e0 - mt;
                let t = t0 - m.get(last);
                if prec.contains(e, t) {
                    let f = leibniz_factor(&k, &j, &m, n);
                    if !f.is_zero() {
                        let mono = Mono::new(base_x.sub(&m), base_d.sub(&m));
                        let v = c0.mul_int(&f);
                        match acc.get_mut(&mono) {
                            Some(x) => *x = &*x + &v,
                            None => {
                                acc.insert(mono, v);
                            }
                        }
                    }
                }
                // advance
                let mut r = 0;
                loop {
                    if r == n {
                        break;
                    }
                    if m.get(r) < mbox[r] {
                        m.set(r, m.get(r) + 1);
                        break;
                    }
                    m.set(r, 0);
                    r += 1;
                }
                if r == n {
                    break;
                }
            }
        }
    }
    Ok(Operator::from_map(n, kind, prec, ord_bound, dn_bound, acc))
}

/// P^e for e >= 0.
pub fn pow(p: &Operator, e: u32) -> Result<Operator> {
    let mut acc = Operator::one(p.n, if p.kind == Kind::VElem { Kind::VElem } else { p.effective_kind() });
    for _ in 0..e {
        acc = mul(&acc, p)?;
    }
    Ok(acc)
}

/// [P, Q] = PQ - QP.
pub fn commutator(p: &Operator, q: &Operator) -> Result<Operator> {
    mul(p, q)?.sub(&mul(q, p)?)
}

/// Product of a chain of operators, left to right.
pub fn mul_chain(ops: &[&Operator]) -> Result<Operator> {
    let mut it = ops.iter();
    let first = it.next().ok_or_else(|| Error::DimensionMismatch("empty product".into()))?;
    let mut acc = (*first).clone();
    for o in it {
        acc = mul(&acc, o)?;
    }
    Ok(acc)
}
