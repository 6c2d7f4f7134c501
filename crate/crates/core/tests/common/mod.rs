//! Seeded random generators shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ssk::coeffs::{Idx, PowerSeries, Scalar, INF};
use ssk::opcore::{Kind, Mono, Operator, Precision};

pub struct Gen {
    pub rng: ChaCha8Rng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    /// A nonzero rational with small numerator and denominator.
    pub fn scalar(&mut self) -> Scalar {
        let mut p = self.int(-4, 4);
        if p == 0 {
            p = 1;
        }
        let q = if self.coin(0.3) { self.int(2, 3) } else { 1 };
        Scalar::ratio(p, q)
    }

    pub fn idx(&mut self, n: usize, lo: &[i64], hi: &[i64]) -> Idx {
        let v: Vec<i64> = (0..n).map(|i| self.int(lo[i], hi[i])).collect();
        Idx::from_slice(&v).unwrap()
    }

    /// Exponent with entries in 0..=max and total at most `max`.
    pub fn small_idx(&mut self, n: usize, max: i64) -> Idx {
        loop {
            let i = self.idx(n, &vec![0; n], &vec![max; n]);
            if i.total() <= max {
                return i;
            }
        }
    }

    /// A polynomial with terms of degree lo..=hi.
    pub fn poly(&mut self, n: usize, lo: i64, hi: i64, terms: usize) -> PowerSeries {
        let mut ts = Vec::new();
        for _ in 0..terms {
            let e = self.small_idx(n, hi);
            if e.total() >= lo {
                ts.push((e, self.scalar()));
            }
        }
        PowerSeries::from_terms(n, INF, ts)
    }

    /// Default exactness region used for random operators of a kind.
    pub fn region(kind: Kind) -> Precision {
        match kind {
            Kind::VElem => Precision { x_deg: INF, dn_tail: 5, total: INF },
            Kind::DHatN | Kind::DHat | Kind::DSym => Precision::x_only(6),
            Kind::EHat | Kind::PiHat => Precision::boxed(6, 5),
        }
    }

    /// A random operator of the given kind with at most `terms` monomials.
    pub fn operator(&mut self, n: usize, kind: Kind, terms: usize) -> Operator {
        let (dn_lo, dn_hi) = match kind {
            Kind::VElem | Kind::EHat | Kind::PiHat => (-2, 2),
            Kind::DHat | Kind::DSym => (0, 2),
            Kind::DHatN => (0, 0),
        };
        let mut ts = Vec::new();
        for _ in 0..self.int(1, terms as i64) {
            let x = if kind == Kind::VElem { Idx::zero() } else { self.small_idx(n, 2) };
            let mut d = self.small_idx(n, 2);
            d = d.with(n - 1, self.int(dn_lo, dn_hi));
            ts.push((Mono::new(x, d), self.scalar()));
        }
        Self::assemble(n, kind, Self::region(kind), ts)
    }

    /// Operator with bounds read off the (exact, finite) term list.
    pub fn assemble(n: usize, kind: Kind, prec: Precision, ts: Vec<(Mono, Scalar)>) -> Operator {
        let ob = ts.iter().map(|(m, _)| m.ord()).max().unwrap_or(-INF);
        let dn = match kind {
            Kind::DSym | Kind::PiHat => None,
            _ => Some(ts.iter().map(|(m, _)| m.d.get(n - 1)).max().unwrap_or(0)),
        };
        Operator::from_terms(n, kind, prec, ob, dn, ts)
    }

    /// 1 + S_- with S_- a few monomials c x^a d_n^{-q}, q in 1..=max_q.
    pub fn monic_unit(&mut self, n: usize, terms: usize, max_q: i64, region: Precision) -> Operator {
        let mut ts = vec![(Mono::new(Idx::zero(), Idx::zero()), Scalar::one())];
        for _ in 0..terms {
            let x = self.small_idx(n, 2);
            let q = self.int(1, max_q);
            ts.push((Mono::new(x, Idx::zero().with(n - 1, -q)), self.scalar()));
        }
        Self::assemble(n, Kind::EHat, region, ts)
    }
}
