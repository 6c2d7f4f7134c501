//! Named operators of the symmetric completion and the Abhyankar inversion formula.

mod abhyankar;

pub use abhyankar::{abhyankar_inverse, abhyankar_inverse_weighted, abhyankar_transport, jacobian, AbhyankarMode};

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::coeffs::idx::indices_up_to;
use crate::coeffs::{Idx, PowerSeries, Scalar, INF};
use crate::error::{Error, Result};
use crate::opcore::{Kind, Mono, Operator, Precision};

/// sum_a u^a / a! d^a with coefficients written to the left.
///
/// Acts on series as f(x) -> f(x + u). Exact through x-degree `v` (capped by the
/// precision of the u_i).
pub fn shift_operator(u: &[PowerSeries], v: i64) -> Result<Operator> {
    let n = u.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("empty shift vector".into()));
    }
    for ui in u {
        if ui.nvars() != n {
            return Err(Error::DimensionMismatch("shift components must live in n variables".into()));
        }
        if !ui.coeff(&Idx::zero()).is_zero() {
            return Err(Error::NotNilpotentShift);
        }
    }
    let v = u.iter().map(|s| s.prec()).min().unwrap_or(INF).min(v);
    if v >= INF {
        return Err(Error::PrecisionExhausted("shift operators are infinite sums; give a finite x-degree".into()));
    }
    let mut pw: BTreeMap<Idx, PowerSeries> = BTreeMap::new();
    pw.insert(Idx::zero(), PowerSeries::one(n).with_prec(v));
    let mut terms = Vec::new();
    for a in indices_up_to(n, v) {
        if a != Idx::zero() {
            let r = (0..n).find(|&r| a.get(r) > 0).expect("nonzero index");
            let prev = pw[&a.sub(&Idx::unit(r))].clone();
            let next = prev.mul(&u[r])?.truncate(v);
            pw.insert(a, next);
        }
        let inv = BigRational::new(1.into(), a.factorial());
        for (k, c) in pw[&a].terms() {
            terms.push((Mono::new(*k, a), c.mul_rat(&inv)));
        }
    }
    Ok(Operator::from_terms(n, Kind::DSym, Precision::x_only(v), 0, None, terms).with_bounds(0, None))
}

/// delta_i = exp(-x_i * d_i), which sets x_i = 0.
pub fn delta(n: usize, i: usize, v: i64) -> Result<Operator> {
    let mut u: Vec<PowerSeries> = (0..n).map(|_| PowerSeries::zero(n, INF)).collect();
    u[i] = PowerSeries::var(n, i).neg();
    shift_operator(&u, v)
}

/// Integration in x_i: sum_k x_i^{k+1} (-d_i)^k / (k+1)!.
pub fn integrator(n: usize, i: usize, v: i64) -> Operator {
    let mut terms = Vec::new();
    for k in 0..v.max(0) {
        let sign = if k % 2 == 0 { 1 } else { -1 };
        let c = Scalar::from_i64(sign).mul_rat(&BigRational::new(1.into(), crate::coeffs::scalar::factorial(k + 1)));
        terms.push((Mono::new(Idx::unit(i).with(i, k + 1), Idx::zero().with(i, k)), c));
    }
    Operator::from_terms(n, Kind::DSym, Precision::x_only(v), -1, None, terms).with_bounds(-1, None)
}

/// A_{k;i,q} = exp((zeta_k^i - 1) x_q * d_q): scales x_q by zeta_k^i.
pub fn root_of_unity_op(n: usize, k: u32, i: i64, q: usize, v: i64) -> Result<Operator> {
    if k == 0 {
        return Err(Error::DimensionMismatch("root of unity of order 0".into()));
    }
    let z = &Scalar::zeta(k, i) - &Scalar::one();
    let mut terms = Vec::new();
    let mut zp = Scalar::one();
    for m in 0..=v.max(0) {
        let c = zp.mul_rat(&BigRational::new(1.into(), crate::coeffs::scalar::factorial(m)));
        terms.push((Mono::new(Idx::zero().with(q, m), Idx::zero().with(q, m)), c));
        zp = &zp * &z;
    }
    Ok(Operator::from_terms(n, Kind::DSym, Precision::x_only(v), 0, None, terms).with_bounds(0, None))
}

/// Determinant of a square scalar matrix by elimination.
pub fn determinant(c: &[Vec<Scalar>]) -> Result<Scalar> {
    let n = c.len();
    let mut a: Vec<Vec<Scalar>> = c.to_vec();
    if a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch("matrix is not square".into()));
    }
    let mut det = Scalar::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Ok(Scalar::zero());
        };
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col].clone();
        det = &det * &p;
        let pinv = p.inv()?;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] * &pinv;
            for j in col..n {
                let t = &f * &a[col][j];
                a[r][j] = &a[r][j] - &t;
            }
        }
    }
    Ok(det)
}

/// S = c0 * exp(sum_i u_i * d_i) with u = (C^T - I) x, so that S^{-1} d_i S = sum_j c_ij d_j.
pub fn linear_change_conjugator(c: &[Vec<Scalar>], c0: &Scalar, v: i64) -> Result<Operator> {
    let n = c.len();
    if determinant(c)?.is_zero() {
        return Err(Error::SingularMatrix);
    }
    if c0.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let u: Vec<PowerSeries> = (0..n)
        .map(|i| {
            let it = (0..n).map(|j| {
                let mut s = c[j][i].clone();
                if i == j {
                    s = &s - &Scalar::one();
                }
                (Idx::unit(j), s)
            });
            PowerSeries::from_terms(n, INF, it)
        })
        .collect();
    Ok(shift_operator(&u, v)?.scale(c0))
}

#[cfg(test)]
mod tests;
