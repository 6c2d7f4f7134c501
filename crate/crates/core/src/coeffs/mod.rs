//! Exact scalars, exponent vectors and truncated power series.

pub mod idx;
pub mod scalar;
pub mod series;

pub use idx::{Idx, MAX_VARS};
pub use scalar::Scalar;
pub use series::PowerSeries;

/// Sentinel for an unbounded precision bound.
pub const INF: i64 = 1 << 40;

/// Addition that keeps `INF` absorbing.
#[inline]
pub fn sat_add(a: i64, b: i64) -> i64 {
    if a >= INF || b >= INF {
        INF
    } else {
        (a + b).min(INF)
    }
}

/// `a - b` where an infinite `a` stays infinite and an infinite `b` gives `-INF`.
#[inline]
pub fn sat_sub(a: i64, b: i64) -> i64 {
    if a >= INF {
        INF
    } else if b >= INF {
        -INF
    } else {
        a - b
    }
}
