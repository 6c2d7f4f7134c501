use std::collections::BTreeMap;

use crate::coeffs::idx::indices_of_total;
use crate::coeffs::{Idx, Scalar, INF};
use crate::error::{Error, Result};
use crate::opcore::{commutator, from_slices, is_regular_up_to, is_unit, mul, ord, slice, Kind, Operator, Precision};

fn check_order(p: &Operator, k: i64) -> Result<()> {
    if k <= 0 || ord(p) != Some(k) || p.ord_bound() > k {
        return Err(Error::OrderMismatch(format!("expected ord {k}, found {:?}", ord(p))));
    }
    Ok(())
}

/// Core recursion for S with S * P_e = d_{i_e}^{k_e} * S for every equation e.
///
/// Slices S_(j) with j_{i_e} >= k_e for some e come from
/// S_(j) = (S P_e)_(j - k_e e_i) - sum_{r < k_e} binom(k_e, r) d_i^{k_e - r} S_(j - (k_e - r) e_i);
/// the first such e is used and the others are checked. Remaining slices are 0 (and S_(0) = 1).
fn solve(eqs: &[(&Operator, usize, i64)], cert: i64) -> Result<Operator> {
    let n = eqs[0].0.nvars();
    for (p, i, k) in eqs {
        if p.nvars() != n || *i >= n {
            return Err(Error::DimensionMismatch("conjugation data".into()));
        }
        check_order(p, *k)?;
        let deg = cert.min(p.prec().x_deg);
        if !is_regular_up_to(p, deg)? {
            return Err(Error::NotRegular(format!("symbol not regular through degree {deg}")));
        }
    }
    let vmax = eqs.iter().map(|(p, _, k)| crate::coeffs::sat_add(p.prec().x_deg, *k)).min().unwrap_or(INF);
    if vmax >= INF {
        return Err(Error::PrecisionExhausted("conjugation needs operators with finite x-degree".into()));
    }
    let mut sl: BTreeMap<Idx, Operator> = BTreeMap::new();
    sl.insert(Idx::zero(), Operator::one(n, Kind::VElem));
    for g in 1..=vmax {
        // products of the known part of S with each P_e, exact through degree g - k_e
        let mut prods: Vec<Option<Operator>> = Vec::with_capacity(eqs.len());
        for (p, _, k) in eqs {
            let lim = g - k;
            if lim < 0 {
                prods.push(None);
                continue;
            }
            let s_known = from_slices(n, &sl, lim)?.with_kind(Kind::DSym)?.with_bounds(0, None);
            let pt = p.truncate(Precision::x_only(lim));
            prods.push(Some(mul(&s_known, &pt)?));
        }
        for jp in indices_of_total(n, g) {
            let mut value: Option<Operator> = None;
            for (e, (_, i, k)) in eqs.iter().enumerate() {
                if jp.get(*i) < *k {
                    continue;
                }
                let sp = prods[e].as_ref().expect("product available when the slice is determined");
                let j = jp.sub(&Idx::unit(*i).with(*i, *k));
                let mut acc = slice(sp, &j)?;
                for r in 0..*k {
                    let idx = j.add(&Idx::zero().with(*i, r));
                    let s = &sl[&idx];
                    let c = Scalar::from_bigint(crate::coeffs::scalar::binom(*k, r));
                    let d = Operator::d_mono(n, Idx::zero().with(*i, k - r), c);
                    acc = acc.sub(&mul(&d, s)?)?;
                }
                match &value {
                    None => value = Some(acc),
                    Some(v) => {
                        if !v.sub(&acc)?.is_zero() {
                            return Err(Error::CompatibilityFailure(format!("slice {:?} is overdetermined inconsistently", jp.to_vec(n))));
                        }
                    }
                }
            }
            let v = value.unwrap_or_else(|| Operator::zero(n, Kind::VElem, Precision::EXACT));
            sl.insert(jp, v);
        }
    }
    let s = from_slices(n, &sl, vmax)?.with_kind(Kind::DSym)?.with_bounds(0, None);
    if !is_unit(&s, cert.min(vmax))? {
        return Err(Error::NotRegular("conjugator is not a unit at the certification degree".into()));
    }
    Ok(s)
}

/// S with ord 0, S_(0) = 1 and S * P * S^{-1} = d_i^k.
pub fn conjugate_to_power(p: &Operator, i: usize, k: i64, cert: i64) -> Result<Operator> {
    solve(&[(p, i, k)], cert)
}

/// One S with S * P_i * S^{-1} = d_i^{k_i} for all i.
pub fn joint_conjugate(ps: &[Operator], ks: &[i64], cert: i64) -> Result<Operator> {
    if ps.is_empty() || ps.len() != ks.len() || ps.len() != ps[0].nvars() {
        return Err(Error::DimensionMismatch("joint conjugation needs one operator and one power per variable".into()));
    }
    for a in 0..ps.len() {
        for b in a + 1..ps.len() {
            if !commutator(&ps[a], &ps[b])?.is_zero() {
                return Err(Error::NotCommuting(format!("P{} and P{}", a + 1, b + 1)));
            }
        }
    }
    let eqs: Vec<(&Operator, usize, i64)> = ps.iter().zip(ks.iter()).enumerate().map(|(i, (p, k))| (p, i, *k)).collect();
    solve(&eqs, cert)
}
