use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeffs::{Idx, Scalar};
use crate::error::{Error, Result};
use crate::opcore::{mul, Kind, Mono, Operator, Precision};
use crate::special_ops::{integrator, root_of_unity_op};

/// Q = sum over (j, a) of coeff * prod_t D_t(a_t) * prod_t A_{k_t; j_t, q_t},
/// where D(a) = d_q^a for a >= 0 and the integral to the power -a otherwise.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub n: usize,
    pub constraints: Vec<(usize, u32)>,
    /// Keyed by (j tuple, a tuple); coefficients are free of the constrained variables.
    pub terms: BTreeMap<(Vec<i64>, Vec<i64>), Operator>,
    /// x-degree through which the coefficients are exact.
    pub x_deg: i64,
}

/// m! / (m - t)! for t <= m (t may be negative).
fn falling_ratio(m: i64, t: i64) -> BigRational {
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    if t >= 0 {
        for s in 0..t {
            num *= BigInt::from(m - s);
        }
    } else {
        for s in 1..=-t {
            den *= BigInt::from(m + s);
        }
    }
    BigRational::new(num, den)
}

type Coefficients = BTreeMap<(i64, i64), Operator>;

/// One constraint [d_q^k, Q] = 0: coefficients keyed by (j, a), with their x-degree.
fn decompose_one(qop: &Operator, q: usize, k: u32) -> Result<(Coefficients, i64)> {
    let n = qop.nvars();
    let v = qop.prec().x_deg;
    let kk = k as i64;
    let need = 2 * kk - 2;
    if v < need {
        return Err(Error::PrecisionExhausted(format!("decomposition against d^{k} needs x-degree {need}, have {v}")));
    }
    let vout = v - need;
    let d = qop.ord_bound();
    // blocks keyed by the exponents in the other variables
    let mut blocks: BTreeMap<(Idx, Idx), BTreeMap<(i64, i64), Scalar>> = BTreeMap::new();
    for (m, c) in qop.terms() {
        let io = m.x.with(q, 0);
        let lo = m.d.with(q, 0);
        blocks.entry((io, lo)).or_default().insert((m.x.get(q), m.d.get(q)), c.clone());
    }
    let zeta = |e: i64| Scalar::zeta(k, e);
    let kinv = BigRational::new(1.into(), BigInt::from(kk));
    let mut out: BTreeMap<(i64, i64), Vec<(Mono, Scalar)>> = BTreeMap::new();
    for ((io, lo), b) in &blocks {
        let vb = v - io.total();
        if vb < need {
            continue;
        }
        let amin = -(kk - 1);
        let amax = d - lo.total() + io.total();
        for (i, l) in b.keys() {
            let a = l - i;
            if a < amin || a > amax {
                return Err(Error::NotCommuting(format!("monomial x^{i} d^{l} in a block lies outside the admissible range")));
            }
        }
        for a in amin..=amax {
            let dval = |m: i64| -> Scalar {
                let mut acc = Scalar::zero();
                for ((i, l), c) in b {
                    if l - i != a || *l > m {
                        continue;
                    }
                    acc = &acc + &c.mul_rat(&falling_ratio(m, *l));
                }
                acc.mul_rat(&(BigRational::from_integer(1.into()) / falling_ratio(m, a)))
            };
            let m0 = a.max(0);
            let samples: Vec<(i64, Scalar)> = (0..kk).map(|r| (m0 + r, dval(m0 + r))).collect();
            let mut cs = Vec::with_capacity(k as usize);
            for j in 0..kk {
                let mut acc = Scalar::zero();
                for (m, dv) in &samples {
                    acc = &acc + &(&zeta(-j * m) * dv);
                }
                cs.push(acc.mul_rat(&kinv));
            }
            // remaining exact samples must follow the same periodic pattern
            let mut m = m0 + kk;
            while m - a <= vb {
                let mut pred = Scalar::zero();
                for (j, c) in cs.iter().enumerate() {
                    pred = &pred + &(&zeta(j as i64 * m) * c);
                }
                if pred != dval(m) {
                    return Err(Error::NotCommuting(format!("coefficient pattern at d-shift {a} is not {k}-periodic")));
                }
                m += 1;
            }
            for (j, c) in cs.into_iter().enumerate() {
                if !c.is_zero() {
                    out.entry((j as i64, a)).or_default().push((Mono::new(*io, *lo), c));
                }
            }
        }
    }
    let res = out
        .into_iter()
        .map(|(key, terms)| {
            let op = Operator::from_terms(n, Kind::DSym, Precision::x_only(vout), d - key.1, None, terms);
            (key, op)
        })
        .collect();
    Ok((res, vout))
}

/// Decompose Q against the constraints [d_{q_t}^{k_t}, Q] = 0, axis by axis.
pub fn centralizer_decompose(qop: &Operator, constraints: &[(usize, u32)]) -> Result<Decomposition> {
    let n = qop.nvars();
    if !qop.effective_kind().is_differential() {
        return Err(Error::KindIncompatible("centralizer decomposition needs a differential operator".into()));
    }
    for (q, k) in constraints {
        if *q >= n || *k == 0 {
            return Err(Error::DimensionMismatch("constraint axis or power out of range".into()));
        }
    }
    let mut cur: BTreeMap<(Vec<i64>, Vec<i64>), Operator> = BTreeMap::new();
    cur.insert((vec![], vec![]), qop.clone());
    let mut x_deg = qop.prec().x_deg;
    for (q, k) in constraints {
        let mut next = BTreeMap::new();
        for ((js, as_), c) in &cur {
            let (parts, v) = decompose_one(c, *q, *k)?;
            x_deg = x_deg.min(v);
            for ((j, a), op) in parts {
                let mut js2 = js.clone();
                js2.push(j);
                let mut as2 = as_.clone();
                as2.push(a);
                next.insert((js2, as2), op);
            }
        }
        cur = next;
        if cur.is_empty() {
            x_deg = x_deg.min(qop.prec().x_deg - 2 * (*k as i64) + 2);
        }
    }
    // with every variable constrained the coefficients are scalars, hence exact
    if (0..n).all(|q| constraints.iter().any(|(c, _)| *c == q)) {
        for op in cur.values_mut() {
            if op.terms().keys().all(|m| m.x == Idx::zero() && m.d == Idx::zero()) {
                let c = op.coeff(&Mono::new(Idx::zero(), Idx::zero()));
                *op = Operator::constant(n, Kind::DSym, c);
            }
        }
    }
    Ok(Decomposition { n, constraints: constraints.to_vec(), terms: cur, x_deg })
}

/// Rebuild the operator from its decomposition, exact through x-degree `v`.
pub fn reassemble(dec: &Decomposition, v: i64) -> Result<Operator> {
    let n = dec.n;
    let mut acc = Operator::zero(n, Kind::DSym, Precision::x_only(v));
    for ((js, as_), c) in &dec.terms {
        let mut t = c.truncate(Precision::x_only(v));
        for (t_i, (q, _)) in dec.constraints.iter().enumerate() {
            let a = as_[t_i];
            let f = if a >= 0 {
                Operator::d(n, *q, a)
            } else {
                let int = integrator(n, *q, v + 1);
                let mut p = int.clone();
                for _ in 1..-a {
                    p = mul(&p, &int)?;
                }
                p
            };
            t = mul(&t, &f)?;
        }
        for (t_i, (q, k)) in dec.constraints.iter().enumerate() {
            t = mul(&t, &root_of_unity_op(n, *k, js[t_i], *q, v + 2 * (*k as i64))?)?;
        }
        acc = acc.add(&t)?;
    }
    Ok(acc.truncate(Precision::x_only(v)))
}
