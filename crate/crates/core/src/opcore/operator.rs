use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::coeffs::{Idx, PowerSeries, Scalar, INF};
use crate::error::{Error, Result};
use crate::opcore::kind::Kind;
use crate::opcore::precision::Precision;

/// Normal-ordered monomial x^x d^d (x on the left).
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono {
    pub x: Idx,
    pub d: Idx,
}

impl Mono {
    pub fn new(x: Idx, d: Idx) -> Self {
        Mono { x, d }
    }

    /// |k| - |i|
    #[inline]
    pub fn ord(&self) -> i64 {
        self.d.total() - self.x.total()
    }
}

impl Ord for Mono {
    fn cmp(&self, o: &Self) -> Ordering {
        self.x
            .total()
            .cmp(&o.x.total())
            .then_with(|| self.x.cmp(&o.x))
            .then_with(|| self.d.cmp_antilex(&o.d))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// A truncated operator: sparse monomial map plus the data needed to keep
/// exactness claims sound (kind, exactness region, ord bound, d_n-degree bound).
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    pub(crate) n: usize,
    pub(crate) kind: Kind,
    pub(crate) terms: BTreeMap<Mono, Scalar>,
    pub(crate) prec: Precision,
    pub(crate) ord_bound: i64,
    pub(crate) dn_bound: Option<i64>,
}

impl Operator {
    /// Build from monomials, dropping zeros and anything outside the exactness region.
    ///
    /// `ord_bound` and `dn_bound` are raised to cover the stored terms.
    pub fn from_terms<I>(n: usize, kind: Kind, prec: Precision, ord_bound: i64, dn_bound: Option<i64>, it: I) -> Operator
    where
        I: IntoIterator<Item = (Mono, Scalar)>,
    {
        let mut acc: HashMap<Mono, Scalar> = HashMap::new();
        for (m, c) in it {
            match acc.get_mut(&m) {
                Some(v) => *v = &*v + &c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Operator::from_map(n, kind, prec, ord_bound, dn_bound, acc)
    }

    pub(crate) fn from_map(
        n: usize,
        kind: Kind,
        prec: Precision,
        ord_bound: i64,
        dn_bound: Option<i64>,
        acc: HashMap<Mono, Scalar>,
    ) -> Operator {
        let prec = prec.normalized(kind);
        let mut terms = BTreeMap::new();
        let mut ob = ord_bound;
        let mut db = dn_bound;
        for (m, c) in acc {
            if c.is_zero() || !prec.contains(m.x.total(), m.d.get(n - 1)) {
                continue;
            }
            ob = ob.max(m.ord());
            if let Some(b) = db.as_mut() {
                *b = (*b).max(m.d.get(n - 1));
            }
            terms.insert(m, c);
        }
        let dn_bound = if kind == Kind::DHatN { Some(0) } else { db };
        Operator { n, kind, terms, prec, ord_bound: ob, dn_bound }
    }

    pub fn zero(n: usize, kind: Kind, prec: Precision) -> Operator {
        Operator::from_terms(n, kind, prec, -INF, Some(-INF), std::iter::empty())
    }

    pub fn constant(n: usize, kind: Kind, c: Scalar) -> Operator {
        Operator::from_terms(n, kind, Precision::EXACT, 0, Some(0), [(Mono::new(Idx::zero(), Idx::zero()), c)])
    }

    pub fn one(n: usize, kind: Kind) -> Operator {
        Operator::constant(n, kind, Scalar::one())
    }

    /// d_i^e (0-based axis); negative e only on the last axis.
    pub fn d(n: usize, i: usize, e: i64) -> Operator {
        let d = Idx::zero().with(i, e);
        let dn = if i == n - 1 { e } else { 0 };
        Operator::from_terms(n, Kind::VElem, Precision::EXACT, e, Some(dn), [(Mono::new(Idx::zero(), d), Scalar::one())])
    }

    /// Constant-coefficient monomial c d^k.
    pub fn d_mono(n: usize, k: Idx, c: Scalar) -> Operator {
        Operator::from_terms(n, Kind::VElem, Precision::EXACT, k.total(), Some(k.get(n - 1)), [(Mono::new(Idx::zero(), k), c)])
    }

    /// Multiplication by x_i.
    pub fn x(n: usize, i: usize) -> Operator {
        Operator::from_terms(n, Kind::DHatN, Precision::EXACT, -1, Some(0), [(Mono::new(Idx::unit(i), Idx::zero()), Scalar::one())])
    }

    /// Multiplication by a power series.
    pub fn from_series(f: &PowerSeries) -> Operator {
        let v = f.valuation().unwrap_or_else(|| crate::coeffs::sat_add(f.prec(), 1));
        Operator::from_terms(
            f.nvars(),
            Kind::DHatN,
            Precision::x_only(f.prec()),
            -v,
            Some(0),
            f.terms().iter().map(|(k, c)| (Mono::new(*k, Idx::zero()), c.clone())),
        )
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn prec(&self) -> Precision {
        self.prec
    }

    pub fn ord_bound(&self) -> i64 {
        self.ord_bound
    }

    pub fn dn_bound(&self) -> Option<i64> {
        self.dn_bound
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Kind used when combining: an exact constant-coefficient polynomial behaves like DHat.
    pub fn effective_kind(&self) -> Kind {
        if self.kind == Kind::VElem && self.prec.dn_tail >= INF && self.terms.keys().all(|m| m.d.get(self.n - 1) >= 0) {
            Kind::DHat
        } else {
            self.kind
        }
    }

    /// Whether unknown or stored monomials may carry negative d_n powers.
    pub fn may_have_negative(&self) -> bool {
        self.effective_kind().allows_negative()
    }

    fn check_n(&self, o: &Operator) -> Result<()> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch(format!("operators in {} and {} variables", self.n, o.n)));
        }
        Ok(())
    }

    fn join_kind(&self, o: &Operator) -> Kind {
        if self.kind == Kind::VElem && o.kind == Kind::VElem {
            Kind::VElem
        } else {
            self.effective_kind().join(o.effective_kind())
        }
    }

    pub fn add(&self, o: &Operator) -> Result<Operator> {
        self.check_n(o)?;
        let kind = self.join_kind(o);
        let prec = self.prec.meet(&o.prec);
        let dn = match (self.dn_bound, o.dn_bound) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
        let it = self.terms.iter().chain(o.terms.iter()).map(|(m, c)| (*m, c.clone()));
        Ok(Operator::from_terms(self.n, kind, prec, self.ord_bound.max(o.ord_bound), dn, it))
    }

    pub fn sub(&self, o: &Operator) -> Result<Operator> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Operator {
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = -&*c;
        }
        r
    }

    pub fn scale(&self, s: &Scalar) -> Operator {
        if s.is_zero() {
            return Operator::zero(self.n, self.kind, self.prec);
        }
        let mut r = self.clone();
        for c in r.terms.values_mut() {
            *c = &*c * s;
        }
        r
    }

    /// Shrink the exactness region.
    pub fn truncate(&self, p: Precision) -> Operator {
        let prec = self.prec.meet(&p).normalized(self.kind);
        let n = self.n;
        let mut r = self.clone();
        r.prec = prec;
        r.terms.retain(|m, _| prec.contains(m.x.total(), m.d.get(n - 1)));
        r
    }

    /// Same terms reinterpreted in another kind (checked against the stored terms only).
    pub fn with_kind(&self, kind: Kind) -> Result<Operator> {
        let n = self.n;
        for m in self.terms.keys() {
            let bad = (kind != Kind::VElem && kind != Kind::EHat && kind != Kind::PiHat && m.d.get(n - 1) < 0)
                || (kind == Kind::DHatN && m.d.get(n - 1) != 0)
                || (kind == Kind::VElem && m.x.total() != 0);
            if bad {
                return Err(Error::KindIncompatible(format!("term outside {kind}")));
            }
        }
        let dn = if kind == Kind::DSym || kind == Kind::PiHat {
            self.dn_bound
        } else {
            Some(self.dn_bound.unwrap_or_else(|| self.terms.keys().map(|m| m.d.get(n - 1)).max().unwrap_or(0)))
        };
        let prec = if kind.is_differential() && self.kind.allows_negative() {
            // only the t >= 0 columns survive; x-exactness there is capped by the diagonal bound
            Precision::x_only(self.prec.x_deg.min(self.prec.total).min(if self.prec.dn_tail < 0 { -1 } else { INF }))
        } else {
            self.prec
        };
        let r = Operator::from_terms(n, kind, prec, self.ord_bound, dn, self.terms.iter().map(|(m, c)| (*m, c.clone())));
        if r.prec.is_exhausted() {
            return Err(Error::PrecisionExhausted(format!("no exact region left after conversion to {kind}")));
        }
        Ok(r)
    }

    /// Override the recorded bounds (used when theory supplies sharper ones).
    pub fn with_bounds(mut self, ord_bound: i64, dn_bound: Option<i64>) -> Operator {
        let actual = self.terms.keys().map(|m| m.ord()).max().unwrap_or(ord_bound);
        self.ord_bound = ord_bound.max(actual);
        if let Some(b) = dn_bound {
            let n = self.n;
            let top = self.terms.keys().map(|m| m.d.get(n - 1)).max().unwrap_or(b);
            self.dn_bound = Some(b.max(top));
        } else if matches!(self.kind, Kind::DSym | Kind::PiHat) {
            self.dn_bound = None;
        }
        self
    }

    /// Coefficient-wise comparison on the common exactness region.
    pub fn agrees_with(&self, o: &Operator) -> bool {
        let p = self.prec.meet(&o.prec);
        let n = self.n;
        let inside = |m: &Mono| p.contains(m.x.total(), m.d.get(n - 1));
        let a = self.terms.iter().filter(|(m, _)| inside(m));
        let b = o.terms.iter().filter(|(m, _)| inside(m));
        a.eq(b)
    }

    /// True when the exactness region covers the box (v, tail) and no stored term lies in it.
    pub fn vanishes_on_box(&self, v: i64, tail: i64) -> bool {
        let n = self.n;
        let boxed = Precision::boxed(v, tail);
        let region_ok = if self.kind.is_differential() {
            self.prec.x_deg >= v
        } else if self.kind == Kind::VElem {
            self.prec.dn_tail >= tail
        } else {
            self.prec.covers_box(v, tail)
        };
        region_ok && !self.terms.keys().any(|m| boxed.contains(m.x.total(), m.d.get(n - 1)))
    }

    /// Monomials with total x-degree equal to q.
    pub fn partial_slice(&self, q: i64) -> Operator {
        let mut r = self.clone();
        r.terms.retain(|m, _| m.x.total() == q);
        r
    }

    /// Restrict to x_i = 0 (drop monomials containing x_i).
    pub fn at_x_zero(&self, i: usize) -> Operator {
        let mut r = self.clone();
        r.terms.retain(|m, _| m.x.get(i) == 0);
        r
    }

    /// Coefficient of d_n^s as an operator free of d_n.
    pub fn dn_coefficient(&self, s: i64) -> Operator {
        let n = self.n;
        let prec = Precision::x_only(self.prec.x_deg_at(s));
        let it = self.terms.iter().filter(|(m, _)| m.d.get(n - 1) == s).map(|(m, c)| (Mono::new(m.x, m.d.with(n - 1, 0)), c.clone()));
        Operator::from_terms(n, Kind::DHatN, prec, self.ord_bound - s, Some(0), it)
    }

    /// c * d_n^s for an operator c free of d_n.
    pub fn times_dn(&self, s: i64) -> Result<Operator> {
        let n = self.n;
        if self.terms.keys().any(|m| m.d.get(n - 1) != 0) {
            return Err(Error::KindIncompatible("times_dn expects a d_n-free operator".into()));
        }
        let kind = if self.kind == Kind::VElem {
            Kind::VElem
        } else if s < 0 {
            Kind::EHat
        } else {
            Kind::DHat
        };
        let x = self.prec.x_deg;
        let prec = if kind == Kind::VElem {
            Precision::EXACT
        } else if s < 0 {
            // exact in the single column t = s up to x-degree x
            Precision { x_deg: x, dn_tail: INF, total: crate::coeffs::sat_add(x, -s) }
        } else {
            Precision::x_only(x)
        };
        let it = self.terms.iter().map(|(m, c)| (Mono::new(m.x, m.d.with(n - 1, s)), c.clone()));
        Ok(Operator::from_terms(n, kind, prec, self.ord_bound + s, Some(s), it))
    }

    /// Power series of the coefficient block at d^0 (x-only part).
    pub fn function_part(&self) -> PowerSeries {
        let prec = self.prec.x_deg_at(0);
        PowerSeries::from_terms(self.n, prec, self.terms.iter().filter(|(m, _)| m.d == Idx::zero()).map(|(m, c)| (m.x, c.clone())))
    }

    /// Whether every stored monomial is free of x.
    pub fn is_constant_coefficient(&self) -> bool {
        self.terms.keys().all(|m| m.x == Idx::zero())
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (j, (m, c)) in self.terms.iter().enumerate() {
            if j > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for i in 0..self.n {
                match m.x.get(i) {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    e => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
            for i in 0..self.n {
                match m.d.get(i) {
                    0 => {}
                    1 => write!(f, "*d{}", i + 1)?,
                    e => write!(f, "*d{}^{}", i + 1, e)?,
                }
            }
        }
        Ok(())
    }
}
