//! Conjugation of regular operators to constant-coefficient powers and the
//! decomposition of centralizers of d_q^k over roots-of-unity operators.

mod centralizer;
mod conjugate;

pub use centralizer::{centralizer_decompose, reassemble, Decomposition};
pub use conjugate::{conjugate_to_power, joint_conjugate};

use crate::coeffs::{Idx, PowerSeries, Scalar};
use crate::error::Result;
use crate::opcore::{mul, Kind, Operator, Precision};

/// Expansion of c/(x_1+1)^e as a series through degree `v`.
fn inverse_power(c: i64, e: u32, v: i64) -> Result<PowerSeries> {
    let base = PowerSeries::from_terms(1, crate::coeffs::INF, [(Idx::zero(), Scalar::one()), (Idx::unit(0), Scalar::one())]);
    let den = base.pow(e)?;
    PowerSeries::from_rational(&PowerSeries::constant(1, Scalar::from_i64(c)), &den, v)
}

/// The commuting pair L = d^2 - 2/(x+1)^2, P = 4d^3 - 12/(x+1)^2 d + 12/(x+1)^3,
/// with coefficients expanded through x-degree `v`.
pub fn wallenberg_pair(v: i64) -> Result<(Operator, Operator)> {
    let d = |e: i64| Operator::d(1, 0, e);
    let f = |s: PowerSeries| Operator::from_series(&s);
    let l = d(2).add(&f(inverse_power(-2, 2, v)?))?;
    let p = d(3)
        .scale(&Scalar::from_i64(4))
        .add(&mul(&f(inverse_power(-12, 2, v)?), &d(1))?)?
        .add(&f(inverse_power(12, 3, v)?))?;
    let fix = |o: Operator, k: i64| -> Result<Operator> { Ok(o.truncate(Precision::x_only(v)).with_kind(Kind::DSym)?.with_bounds(k, None)) };
    Ok((fix(l, 2)?, fix(p, 3)?))
}
