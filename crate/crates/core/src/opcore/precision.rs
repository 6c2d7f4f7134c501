use crate::coeffs::{sat_add, INF};
use crate::opcore::kind::Kind;

/// Exactness region of a truncated operator.
///
/// A monomial x^i d^k with e = |i| and t = k_n is exact when `e <= x_deg`,
/// `t >= -dn_tail` and `e - t <= total`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Precision {
    pub x_deg: i64,
    pub dn_tail: i64,
    pub total: i64,
}

impl Precision {
    pub const EXACT: Precision = Precision { x_deg: INF, dn_tail: INF, total: INF };

    /// The box region e <= v, t >= -n.
    pub fn boxed(v: i64, n: i64) -> Self {
        Precision { x_deg: v, dn_tail: n, total: sat_add(v, n) }
    }

    pub fn x_only(v: i64) -> Self {
        Precision { x_deg: v, dn_tail: INF, total: INF }
    }

    pub fn meet(&self, o: &Precision) -> Precision {
        Precision {
            x_deg: self.x_deg.min(o.x_deg),
            dn_tail: self.dn_tail.min(o.dn_tail),
            total: self.total.min(o.total),
        }
    }

    /// Canonical form of the region for operators of the given kind.
    pub fn normalized(self, kind: Kind) -> Precision {
        let cap = |v: i64| if v >= INF / 2 { INF } else { v };
        let (x, n, w) = (cap(self.x_deg), cap(self.dn_tail), cap(self.total));
        if kind.is_differential() {
            // only t >= 0 occurs; folding the diagonal bound into x_deg shrinks the region
            let x = x.min(w).min(if n < 0 { -1 } else { INF });
            Precision { x_deg: x, dn_tail: INF, total: INF }
        } else if kind == Kind::VElem {
            Precision { x_deg: INF, dn_tail: n.min(w), total: INF }
        } else {
            Precision { x_deg: x, dn_tail: n, total: w.min(sat_add(x, n)) }
        }
    }

    #[inline]
    pub fn contains(&self, e: i64, t: i64) -> bool {
        e <= self.x_deg && t >= -self.dn_tail && e - t <= self.total
    }

    /// Whether the region contains the box e <= v, t >= -n.
    pub fn covers_box(&self, v: i64, n: i64) -> bool {
        self.x_deg >= v && self.dn_tail >= n && self.total >= sat_add(v, n)
    }

    /// Largest x-degree known exactly in the d_n-column t, or -1.
    pub fn x_deg_at(&self, t: i64) -> i64 {
        if t < -self.dn_tail {
            return -1;
        }
        self.x_deg.min(sat_add(self.total, t)).max(-1)
    }

    pub fn is_exhausted(&self) -> bool {
        self.x_deg < 0
    }
}
