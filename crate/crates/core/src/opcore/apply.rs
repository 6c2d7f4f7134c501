//! Action of differential operators on power series.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::coeffs::{sat_sub, Idx, PowerSeries, Scalar};
use crate::error::{Error, Result};
use crate::opcore::operator::Operator;

/// P(f) for a differential operator P.
pub fn apply(p: &Operator, f: &PowerSeries) -> Result<PowerSeries> {
    if p.n != f.nvars() {
        return Err(Error::DimensionMismatch(format!("operator in {} variables, series in {}", p.n, f.nvars())));
    }
    if !p.effective_kind().is_differential() {
        return Err(Error::KindIncompatible(format!("{} does not act on power series", p.kind)));
    }
    let v = p.prec.x_deg.min(sat_sub(f.prec(), p.ord_bound.max(0)));
    if v < 0 {
        return Err(Error::PrecisionExhausted("series too short for the operator order".into()));
    }
    let n = p.n;
    let mut acc: HashMap<Idx, Scalar> = HashMap::new();
    for (m, c) in &p.terms {
        if m.x.total() > v {
            continue;
        }
        for (j, a) in f.terms() {
            if !m.d.le(j) {
                continue;
            }
            let e = m.x.add(j).sub(&m.d);
            if e.total() > v {
                continue;
            }
            let mut fall = BigInt::from(1);
            for r in 0..n {
                for s in 0..m.d.get(r) {
                    fall *= BigInt::from(j.get(r) - s);
                }
            }
            let t = (c * a).mul_int(&fall);
            match acc.get_mut(&e) {
                Some(x) => *x = &*x + &t,
                None => {
                    acc.insert(e, t);
                }
            }
        }
    }
    Ok(PowerSeries::from_terms(n, v, acc))
}
