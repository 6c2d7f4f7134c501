//! Order functions, symbols and the Gamma-order predicates.

use std::cmp::Ordering;

use crate::coeffs::{Idx, Scalar};
use crate::error::{Error, Result};
use crate::opcore::kind::Kind;
use crate::opcore::operator::{Mono, Operator};

/// ord(P) = max |k| - |i| over stored monomials; None for zero.
pub fn ord(p: &Operator) -> Option<i64> {
    p.terms.keys().map(|m| m.ord()).max()
}

/// Largest d_n exponent with a nonzero coefficient.
pub fn ord_n(p: &Operator) -> Result<Option<i64>> {
    if p.kind == Kind::DSym {
        return Err(Error::KindIncompatible("ord_n is not defined on DSym".into()));
    }
    let n = p.n;
    Ok(p.terms.keys().map(|m| m.d.get(n - 1)).max())
}

/// Coefficient of the top d_n power (free of d_n).
pub fn ht_n(p: &Operator) -> Result<Operator> {
    match ord_n(p)? {
        Some(s) => Ok(p.dn_coefficient(s)),
        None => Ok(Operator::zero(p.n, Kind::DHatN, p.prec)),
    }
}

/// Monomials with |k| - |i| = m.
pub fn homogeneous_component(p: &Operator, m: i64) -> Operator {
    let mut r = p.clone();
    r.terms.retain(|k, _| k.ord() == m);
    r
}

/// Highest symbol: the homogeneous component of maximal ord.
pub fn symbol(p: &Operator) -> Operator {
    match ord(p) {
        Some(m) => homogeneous_component(p, m),
        None => p.clone(),
    }
}

/// Gamma-order together with how far the claim can be trusted.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaInfo {
    pub order: Idx,
    pub monic: bool,
    /// False when higher d_n columns might exist beyond the stored terms.
    pub certified: bool,
    /// x-degree through which the leading coefficient is exact.
    pub x_deg: i64,
}

/// Anti-lexicographically largest d-exponent in the support, with its coefficient series.
pub fn gamma_order(p: &Operator) -> Result<GammaInfo> {
    let n = p.n;
    let top = p
        .terms
        .keys()
        .map(|m| m.d)
        .max_by(|a, b| a.cmp_antilex(b))
        .ok_or_else(|| Error::GammaUndefined("zero operator".into()))?;
    let lead: Vec<(&Mono, &Scalar)> = p.terms.iter().filter(|(m, _)| m.d == top).collect();
    let monic = lead.len() == 1 && lead[0].0.x == Idx::zero() && lead[0].1.is_one();
    let certified = match p.dn_bound {
        Some(b) => b == top.get(n - 1),
        None => false,
    };
    Ok(GammaInfo { order: top, monic, certified, x_deg: p.prec.x_deg_at(top.get(n - 1)) })
}

pub fn is_monic_gamma(p: &Operator) -> bool {
    gamma_order(p).map(|g| g.monic).unwrap_or(false)
}

/// ord(P) <= |ord_Gamma(P)|.
pub fn satisfies_a1(p: &Operator) -> Result<bool> {
    let g = gamma_order(p)?;
    Ok(ord(p).unwrap_or(i64::MIN) <= g.order.total())
}

/// Per-operator findings of the quasi-ellipticity test.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiEllipticEntry {
    pub gamma: Option<Idx>,
    pub shape_ok: bool,
    pub ord_matches: bool,
    pub monic: bool,
    pub certified_x_deg: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuasiEllipticReport {
    pub entries: Vec<QuasiEllipticEntry>,
}

impl QuasiEllipticReport {
    pub fn passes(&self) -> bool {
        self.entries.iter().all(|e| e.shape_ok && e.ord_matches && e.monic)
    }

    /// The l_i of the shapes (0,..,1,..,l_i) and (0,..,l_n).
    pub fn ls(&self) -> Option<Vec<i64>> {
        let n = self.entries.len();
        self.entries.iter().map(|e| e.gamma.map(|g| g.get(n - 1))).collect()
    }
}

/// Conditions 1-4 of monic formal quasi-ellipticity, operator by operator.
pub fn check_quasi_elliptic(ps: &[Operator]) -> QuasiEllipticReport {
    let n = ps.len();
    let entries = ps
        .iter()
        .enumerate()
        .map(|(i, p)| match gamma_order(p) {
            Err(_) => QuasiEllipticEntry { gamma: None, shape_ok: false, ord_matches: false, monic: false, certified_x_deg: -1 },
            Ok(g) => {
                let ln = g.order.get(n - 1);
                let shape_ok = p.n == n
                    && (0..n - 1).all(|r| g.order.get(r) == if r == i { 1 } else { 0 })
                    && if i == n - 1 { ln > 0 } else { ln >= 0 };
                let ord_matches = ord(p) == Some(g.order.total());
                QuasiEllipticEntry { gamma: Some(g.order), shape_ok, ord_matches, monic: g.monic, certified_x_deg: g.x_deg }
            }
        })
        .collect();
    QuasiEllipticReport { entries }
}

/// Anti-lex comparison of Gamma-orders.
pub fn cmp_gamma(a: &Idx, b: &Idx) -> Ordering {
    a.cmp_antilex(b)
}
