//! Truncated multivariate power series over exact scalars.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coeffs::idx::Idx;
use crate::coeffs::scalar::Scalar;
use crate::coeffs::{sat_add, INF};
use crate::error::{Error, Result};

/// Element of K[[x_1..x_n]] known exactly up to total degree `prec`.
///
/// `prec == INF` marks an exact polynomial.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    n: usize,
    terms: BTreeMap<Idx, Scalar>,
    prec: i64,
}

impl PowerSeries {
    pub fn zero(n: usize, prec: i64) -> Self {
        PowerSeries { n, terms: BTreeMap::new(), prec }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        PowerSeries::from_terms(n, INF, [(Idx::zero(), c)])
    }

    pub fn one(n: usize) -> Self {
        PowerSeries::constant(n, Scalar::one())
    }

    /// The coordinate function x_i (0-based).
    pub fn var(n: usize, i: usize) -> Self {
        PowerSeries::from_terms(n, INF, [(Idx::unit(i), Scalar::one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (Idx, Scalar)>>(n: usize, prec: i64, it: I) -> Self {
        let mut terms: BTreeMap<Idx, Scalar> = BTreeMap::new();
        for (k, c) in it {
            if k.total() > prec {
                continue;
            }
            match terms.get_mut(&k) {
                Some(v) => *v = &*v + &c,
                None => {
                    terms.insert(k, c);
                }
            }
        }
        terms.retain(|_, c| !c.is_zero());
        PowerSeries { n, terms, prec }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn terms(&self) -> &BTreeMap<Idx, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &Idx) -> Scalar {
        self.terms.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Minimal total degree of a stored term; None for the zero series.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().map(|k| k.total()).min()
    }

    /// A lower bound for the true valuation that is safe to use in precision formulas.
    pub fn safe_valuation(&self) -> i64 {
        self.valuation().unwrap_or_else(|| sat_add(self.prec, 1))
    }

    pub fn truncate(&self, deg: i64) -> Self {
        let prec = self.prec.min(deg);
        PowerSeries {
            n: self.n,
            terms: self.terms.iter().filter(|(k, _)| k.total() <= prec).map(|(k, c)| (*k, c.clone())).collect(),
            prec,
        }
    }

    pub fn with_prec(mut self, prec: i64) -> Self {
        self.prec = self.prec.min(prec);
        let p = self.prec;
        self.terms.retain(|k, _| k.total() <= p);
        self
    }

    fn check_n(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::DimensionMismatch(format!("series in {} and {} variables", self.n, o.n)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_n(o)?;
        let prec = self.prec.min(o.prec);
        let it = self.terms.iter().chain(o.terms.iter()).map(|(k, c)| (*k, c.clone()));
        Ok(PowerSeries::from_terms(self.n, prec, it))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        PowerSeries { n: self.n, terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(), prec: self.prec }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        PowerSeries::from_terms(self.n, self.prec, self.terms.iter().map(|(k, c)| (*k, c * s)))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        self.check_n(o)?;
        let prec = sat_add(self.prec, o.safe_valuation()).min(sat_add(o.prec, self.safe_valuation()));
        let mut acc: BTreeMap<Idx, Scalar> = BTreeMap::new();
        for (a, ca) in &self.terms {
            let da = a.total();
            if da > prec {
                continue;
            }
            for (b, cb) in &o.terms {
                if da + b.total() > prec {
                    continue;
                }
                let k = a.add(b);
                let v = ca * cb;
                match acc.get_mut(&k) {
                    Some(x) => *x = &*x + &v,
                    None => {
                        acc.insert(k, v);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(PowerSeries { n: self.n, terms: acc, prec })
    }

    pub fn pow(&self, e: u32) -> Result<Self> {
        let mut acc = PowerSeries::one(self.n);
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn partial_derivative(&self, i: usize) -> Self {
        let it = self.terms.iter().filter(|(k, _)| k.get(i) > 0).map(|(k, c)| {
            let e = k.get(i);
            (k.with(i, e - 1), c.mul_int(&BigInt::from(e)))
        });
        PowerSeries::from_terms(self.n, sat_add(self.prec, -1), it)
    }

    /// Primitive in x_i with zero constant of integration.
    pub fn antiderivative(&self, i: usize) -> Self {
        let it = self.terms.iter().map(|(k, c)| {
            let e = k.get(i) + 1;
            (k.with(i, e), c.mul_rat(&BigRational::new(BigInt::from(1), BigInt::from(e))))
        });
        PowerSeries::from_terms(self.n, sat_add(self.prec, 1), it)
    }

    /// Substitute x_i = 0.
    pub fn at_zero(&self, i: usize) -> Self {
        PowerSeries::from_terms(self.n, self.prec, self.terms.iter().filter(|(k, _)| k.get(i) == 0).map(|(k, c)| (*k, c.clone())))
    }

    /// f(g_1, .., g_m) for a series f in m variables and inner series without constant terms.
    pub fn compose(&self, g: &[PowerSeries]) -> Result<Self> {
        if g.len() != self.n {
            return Err(Error::DimensionMismatch(format!("compose needs {} inner series, got {}", self.n, g.len())));
        }
        let m = g.first().map(|s| s.n).unwrap_or(self.n);
        for gi in g {
            if gi.n != m {
                return Err(Error::DimensionMismatch("inner series differ in variable count".into()));
            }
            if !gi.coeff(&Idx::zero()).is_zero() {
                return Err(Error::CompositionNotNilpotent);
            }
        }
        let vg = g.iter().map(|s| s.safe_valuation()).min().unwrap_or(INF).max(1);
        let pg = g.iter().map(|s| s.prec).min().unwrap_or(INF);
        let vf = self.safe_valuation();
        let from_f = if self.prec >= INF { INF } else { sat_add((self.prec + 1).saturating_mul(vg), -1) };
        let from_g = sat_add(pg, (vf - 1).max(0).saturating_mul(vg));
        let prec = from_f.min(from_g);
        if prec >= INF && self.prec >= INF && pg >= INF {
            // exact polynomial composition
        } else if prec >= INF {
            return Err(Error::PrecisionExhausted("composition precision is unbounded".into()));
        }
        let mut powers: Vec<Vec<PowerSeries>> = g.iter().map(|s| vec![PowerSeries::one(m).with_prec(prec), s.truncate(prec)]).collect();
        let mut out = PowerSeries::zero(m, prec);
        let mut acc: BTreeMap<Idx, Scalar> = BTreeMap::new();
        for (p, c) in &self.terms {
            if p.total().saturating_mul(vg) > prec {
                continue;
            }
            let mut term = PowerSeries::constant(m, c.clone()).with_prec(prec);
            for i in 0..self.n {
                let e = p.get(i) as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().unwrap().mul(&g[i])?.truncate(prec);
                    powers[i].push(next);
                }
                if e > 0 {
                    term = term.mul(&powers[i][e])?.truncate(prec);
                }
            }
            for (k, v) in term.terms {
                match acc.get_mut(&k) {
                    Some(x) => *x = &*x + &v,
                    None => {
                        acc.insert(k, v);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        out.terms = acc;
        Ok(out)
    }

    /// Multiplicative inverse of a series with nonzero constant term.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = self.coeff(&Idx::zero());
        if c0.is_zero() {
            return Err(Error::NotAUnit("series has zero constant term".into()));
        }
        let prec = self.prec;
        if prec >= INF && self.terms.len() > 1 {
            return Err(Error::PrecisionExhausted("inverse of a polynomial needs a finite precision".into()));
        }
        let c0inv = c0.inv()?;
        // f = c0 (1 + h), 1/f = c0^{-1} sum (-h)^m
        let h = self.scale(&c0inv).sub(&PowerSeries::one(self.n))?;
        let mh = h.neg();
        let mut acc = PowerSeries::one(self.n).with_prec(prec);
        let mut power = PowerSeries::one(self.n).with_prec(prec);
        let hv = h.safe_valuation().max(1);
        let mut m = 1;
        while m * hv <= prec && !mh.is_zero() {
            power = power.mul(&mh)?.truncate(prec);
            acc = acc.add(&power)?;
            m += 1;
        }
        Ok(acc.scale(&c0inv).with_prec(prec))
    }

    /// exp(f) for a series without constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeff(&Idx::zero()).is_zero() {
            return Err(Error::CompositionNotNilpotent);
        }
        let prec = self.prec;
        if prec >= INF && !self.is_zero() {
            return Err(Error::PrecisionExhausted("exponential of a polynomial needs a finite precision".into()));
        }
        let mut acc = PowerSeries::one(self.n).with_prec(prec);
        let mut power = PowerSeries::one(self.n).with_prec(prec);
        let hv = self.safe_valuation().max(1);
        let mut m: i64 = 1;
        while m * hv <= prec && !self.is_zero() {
            power = power.mul(self)?.truncate(prec).scale(&Scalar::ratio(1, m));
            acc = acc.add(&power)?;
            m += 1;
        }
        Ok(acc.with_prec(prec))
    }

    /// Equality of all coefficients of degree at most `deg`.
    pub fn eq_up_to(&self, o: &Self, deg: i64) -> bool {
        let a = self.truncate(deg);
        let b = o.truncate(deg);
        a.terms == b.terms
    }

    /// Expansion of num/den to degree `deg`; den must have nonzero constant term.
    pub fn from_rational(num: &PowerSeries, den: &PowerSeries, deg: i64) -> Result<Self> {
        let d = den.truncate(deg).with_prec(deg);
        let inv = d.invert_unit()?;
        Ok(num.truncate(deg).with_prec(deg).mul(&inv)?.truncate(deg))
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut keys: Vec<&Idx> = self.terms.keys().collect();
        keys.sort_by(|a, b| a.cmp_graded(b));
        if keys.is_empty() {
            write!(f, "0")?;
        }
        for (j, k) in keys.iter().enumerate() {
            if j > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", self.terms[*k])?;
            for i in 0..self.n {
                match k.get(i) {
                    0 => {}
                    1 => write!(f, "*x{}", i + 1)?,
                    e => write!(f, "*x{}^{}", i + 1, e)?,
                }
            }
        }
        if self.prec < INF {
            write!(f, " + O(deg {})", self.prec + 1)?;
        }
        Ok(())
    }
}
