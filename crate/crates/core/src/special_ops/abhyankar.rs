use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::coeffs::idx::indices_up_to;
use crate::coeffs::{Idx, PowerSeries, Scalar, INF};
use crate::error::{Error, Result};

/// Whether the Jacobian determinant must be 1 or is used as a weight.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum AbhyankarMode {
    Strict,
    Weighted,
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    fn rec(k: usize, p: &mut Vec<usize>, sign: i64, out: &mut Vec<(Vec<usize>, i64)>) {
        if k == p.len() {
            out.push((p.clone(), sign));
            return;
        }
        for j in k..p.len() {
            p.swap(k, j);
            rec(k + 1, p, if j == k { sign } else { -sign }, out);
            p.swap(k, j);
        }
    }
    rec(0, &mut p, 1, &mut out);
    out
}

/// det(d_i F_j) truncated to degree `deg`.
pub fn jacobian(f: &[PowerSeries], deg: i64) -> Result<PowerSeries> {
    let n = f.len();
    let jm: Vec<Vec<PowerSeries>> = (0..n).map(|i| (0..n).map(|j| f[j].partial_derivative(i).truncate(deg)).collect()).collect();
    let mut acc = PowerSeries::zero(n, deg);
    for (p, s) in permutations(n) {
        let mut t = PowerSeries::constant(n, Scalar::from_i64(s)).with_prec(deg);
        for i in 0..n {
            t = t.mul(&jm[i][p[i]])?.truncate(deg);
            if t.is_zero() {
                break;
            }
        }
        acc = acc.add(&t)?;
    }
    Ok(acc)
}

fn perturbation(f: &[PowerSeries]) -> Result<Vec<PowerSeries>> {
    let n = f.len();
    let mut h = Vec::with_capacity(n);
    for (i, fi) in f.iter().enumerate() {
        if fi.nvars() != n {
            return Err(Error::DimensionMismatch("map components must live in n variables".into()));
        }
        let hi = PowerSeries::var(n, i).sub(fi)?;
        if hi.terms().keys().any(|k| k.total() < 2) {
            return Err(Error::ValuationTooLow);
        }
        h.push(hi);
    }
    Ok(h)
}

fn check_jacobian(f: &[PowerSeries], deg: i64) -> Result<PowerSeries> {
    jacobian(f, deg)
}

/// sum_p d^p/p! (t * H^p) through degree `deg` for each t in `targets`.
fn good_sum(h: &[PowerSeries], targets: &[PowerSeries], deg: i64) -> Result<Vec<PowerSeries>> {
    let n = h.len();
    let vt = targets.iter().map(|t| t.safe_valuation()).min().unwrap_or(0).max(0);
    let pmax = (deg - vt).max(0);
    let mut hp: BTreeMap<Idx, PowerSeries> = BTreeMap::new();
    hp.insert(Idx::zero(), PowerSeries::one(n));
    let mut out: Vec<PowerSeries> = targets.iter().map(|_| PowerSeries::zero(n, deg)).collect();
    for p in indices_up_to(n, pmax) {
        let cap = deg + p.total();
        if p != Idx::zero() {
            let r = (0..n).find(|&r| p.get(r) > 0).expect("nonzero index");
            let prev = &hp[&p.sub(&Idx::unit(r))];
            let next = prev.truncate(cap).mul(&h[r].truncate(cap))?.truncate(cap);
            hp.insert(p, next);
        }
        let hpp = &hp[&p];
        if hpp.is_zero() && hpp.prec() >= cap {
            continue;
        }
        let inv = BigRational::new(1.into(), p.factorial());
        for (t, o) in targets.iter().zip(out.iter_mut()) {
            let mut s = t.truncate(cap).mul(hpp)?.truncate(cap);
            for i in 0..n {
                for _ in 0..p.get(i) {
                    s = s.partial_derivative(i);
                }
            }
            let s = PowerSeries::from_terms(n, s.prec(), s.terms().iter().map(|(k, c)| (*k, c.mul_rat(&inv))));
            *o = o.add(&s)?;
        }
    }
    Ok(out.into_iter().map(|o| o.truncate(deg)).collect())
}

fn inverse_impl(f: &[PowerSeries], deg: i64, mode: AbhyankarMode) -> Result<Vec<PowerSeries>> {
    let n = f.len();
    let h = perturbation(f)?;
    let j = check_jacobian(f, deg)?;
    let one = PowerSeries::one(n);
    let w = match mode {
        AbhyankarMode::Strict => {
            if !j.eq_up_to(&one, deg - 1) {
                return Err(Error::JacobianNotOne(deg));
            }
            one.with_prec(INF)
        }
        AbhyankarMode::Weighted => j,
    };
    let targets: Vec<PowerSeries> = (0..n).map(|i| PowerSeries::var(n, i).mul(&w)).collect::<Result<_>>()?;
    good_sum(&h, &targets, deg)
}

/// G_i = sum_p d^p/p! (x_i H^p) for F = X - H with j(F) = 1; exact through degree `deg`.
pub fn abhyankar_inverse(f: &[PowerSeries], deg: i64) -> Result<Vec<PowerSeries>> {
    inverse_impl(f, deg, AbhyankarMode::Strict)
}

/// Variant for j(F) != 1: G_i = sum_p d^p/p! (x_i j(F) H^p).
pub fn abhyankar_inverse_weighted(f: &[PowerSeries], deg: i64) -> Result<Vec<PowerSeries>> {
    inverse_impl(f, deg, AbhyankarMode::Weighted)
}

/// Recover U from U(F): U = sum_p d^p/p! (U(F) w H^p), where w is 1 or j(F).
pub fn abhyankar_transport(uf: &PowerSeries, f: &[PowerSeries], deg: i64, mode: AbhyankarMode) -> Result<PowerSeries> {
    let n = f.len();
    if uf.nvars() != n {
        return Err(Error::DimensionMismatch("series and map differ in variable count".into()));
    }
    let h = perturbation(f)?;
    let j = check_jacobian(f, deg)?;
    let t = match mode {
        AbhyankarMode::Strict => {
            if !j.eq_up_to(&PowerSeries::one(n), deg - 1) {
                return Err(Error::JacobianNotOne(deg));
            }
            uf.clone()
        }
        AbhyankarMode::Weighted => uf.truncate(deg + deg).mul(&j)?,
    };
    Ok(good_sum(&h, &[t], deg)?.remove(0))
}
