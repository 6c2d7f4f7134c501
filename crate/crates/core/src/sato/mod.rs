//! Points of the Sato Grassmannian, Sato operators and Schur pairs.

mod operators;
mod pairs;
mod spectral;

pub use operators::{build_sato_general, build_sato_monic, membership_f, sato_transport, unit_factorize, BasisChoice};
pub use pairs::{analytical_rank, construction1, construction2, RankReport, SchurPair};
pub use spectral::{solve_spectral, SpectralSolution};

use std::cmp::Ordering;
use std::collections::BTreeMap;

use crate::coeffs::idx::{binomial_count, indices_up_to};
use crate::coeffs::{Idx, Scalar, INF};
use crate::error::{Error, Result};
use crate::opcore::linalg::{Echelon, GradedKey, Row};
use crate::opcore::orders::{ord, symbol};
use crate::opcore::{Kind, Mono, Operator, Precision};

/// Exponent ordered anti-lexicographically (d_n compared first).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AntiLexKey(pub Idx);

impl Ord for AntiLexKey {
    fn cmp(&self, o: &Self) -> Ordering {
        self.0.cmp_antilex(&o.0)
    }
}

impl PartialOrd for AntiLexKey {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Coefficient row of a constant-coefficient operator, cut at d_n >= -tail.
pub(crate) fn graded_row(p: &Operator, tail: i64) -> Row<GradedKey> {
    let n = p.nvars();
    p.terms().iter().filter(|(m, _)| m.d.get(n - 1) >= -tail).map(|(m, c)| (GradedKey(m.d), c.clone())).collect()
}

pub(crate) fn antilex_row(p: &Operator, tail: i64) -> Row<AntiLexKey> {
    let n = p.nvars();
    p.terms().iter().filter(|(m, _)| m.d.get(n - 1) >= -tail).map(|(m, c)| (AntiLexKey(m.d), c.clone())).collect()
}

pub(crate) fn velem_from<K: Ord + Clone, F: Fn(&K) -> Idx>(n: usize, row: &Row<K>, tail: i64, key: F) -> Operator {
    let ob = row.keys().map(|k| key(k).total()).max().unwrap_or(0);
    let db = row.keys().map(|k| key(k).get(n - 1)).max().unwrap_or(0);
    let prec = Precision { x_deg: INF, dn_tail: tail, total: INF };
    Operator::from_terms(n, Kind::VElem, prec, ob, Some(db), row.iter().map(|(k, c)| (Mono::new(Idx::zero(), key(k)), c.clone())))
}

/// A point W of the Sato Grassmannian Gr_mu, given by a basis w_k with ord(w_k) = mu + |k|.
#[derive(Clone, Debug)]
pub struct SubspaceW {
    pub n: usize,
    pub mu: i64,
    pub basis: BTreeMap<Idx, Operator>,
    pub cutoff: i64,
    /// Common exactness region of the basis elements.
    pub prec: Precision,
}

impl SubspaceW {
    /// Validate the order condition and the graded independence of the symbols.
    pub fn new(n: usize, mu: i64, basis: BTreeMap<Idx, Operator>, cutoff: i64) -> Result<SubspaceW> {
        if cutoff < 0 {
            return Err(Error::HilbertViolation("negative cutoff".into()));
        }
        let mut tail = INF;
        for k in indices_up_to(n, cutoff) {
            let w = basis.get(&k).ok_or_else(|| Error::HilbertViolation(format!("missing basis element {:?}", k.to_vec(n))))?;
            if w.kind() != Kind::VElem || w.nvars() != n {
                return Err(Error::KindIncompatible("basis elements must be constant-coefficient".into()));
            }
            tail = tail.min(w.prec().dn_tail);
        }
        let basis: BTreeMap<Idx, Operator> = basis.into_iter().filter(|(k, _)| k.total() <= cutoff).collect();
        let w = SubspaceW { n, mu, basis, cutoff, prec: Precision { x_deg: INF, dn_tail: tail, total: INF } };
        w.check_hilbert()?;
        Ok(w)
    }

    /// W = F with basis d^k.
    pub fn free(n: usize, cutoff: i64) -> SubspaceW {
        let basis = indices_up_to(n, cutoff).into_iter().map(|k| (k, Operator::d_mono(n, k, Scalar::one()))).collect();
        SubspaceW { n, mu: 0, basis, cutoff, prec: Precision::EXACT }
    }

    pub fn tail(&self) -> i64 {
        self.prec.dn_tail
    }

    fn check_hilbert(&self) -> Result<()> {
        let n = self.n;
        for m in 0..=self.cutoff {
            let tail = self.basis.iter().filter(|(k, _)| k.total() == m).map(|(_, w)| w.prec().dn_tail).min().unwrap_or(INF);
            let mut e: Echelon<GradedKey> = Echelon::new();
            for (k, w) in self.basis.iter().filter(|(k, _)| k.total() == m) {
                if ord(w) != Some(self.mu + m) {
                    return Err(Error::HilbertViolation(format!("ord(w_{:?}) = {:?}, expected {}", k.to_vec(n), ord(w), self.mu + m)));
                }
                if e.insert(graded_row(&symbol(w), tail)).is_none() {
                    return Err(Error::HilbertViolation(format!("symbols of degree {} are dependent", self.mu + m)));
                }
            }
        }
        Ok(())
    }

    /// Shortest tail among w_k with |k| <= m.
    pub fn tail_upto(&self, m: i64) -> i64 {
        self.basis.iter().filter(|(k, _)| k.total() <= m).map(|(_, w)| w.prec().dn_tail).min().unwrap_or(INF)
    }

    /// Echelon form of the span of w_k with |k| <= m, rows cut at the common tail.
    pub(crate) fn span_upto(&self, m: i64, tail: i64) -> Echelon<GradedKey> {
        let mut e = Echelon::new();
        for (_, w) in self.basis.iter().filter(|(k, _)| k.total() <= m) {
            e.insert(graded_row(w, tail));
        }
        e
    }

    /// Whether v lies in W at precision (needs ord(v) <= mu + cutoff).
    pub fn contains(&self, v: &Operator) -> Result<bool> {
        let Some(o) = ord(v) else { return Ok(true) };
        let m = o - self.mu;
        if m < 0 {
            return Ok(false);
        }
        if m > self.cutoff {
            return Err(Error::PrecisionExhausted(format!("membership of an element of ord {o} beyond cutoff {}", self.cutoff)));
        }
        let tail = self.tail_upto(m).min(v.prec().dn_tail);
        Ok(self.span_upto(m, tail).contains(&graded_row(v, tail)))
    }

    /// dim W_k, read off the certificate.
    pub fn hilbert_function(&self, k: i64) -> Option<usize> {
        let m = k - self.mu;
        if m < 0 {
            Some(0)
        } else if m > self.cutoff {
            None
        } else {
            Some(binomial_count(self.n, m))
        }
    }

    /// Supp(W): the leading anti-lexicographic terms of an echelon basis of W.
    pub fn support(&self) -> SubspaceW {
        let n = self.n;
        let mut e: Echelon<AntiLexKey> = Echelon::new();
        for w in self.basis.values() {
            e.insert(antilex_row(w, w.prec().dn_tail));
        }
        let mut lts: Vec<Idx> = e.pivots().map(|k| k.0).collect();
        lts.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp_antilex(b)));
        let mut ks = indices_up_to(n, self.cutoff);
        ks.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| a.cmp_antilex(b)));
        let basis = ks.into_iter().zip(lts).map(|(k, d)| (k, Operator::d_mono(n, d, Scalar::one()))).collect();
        SubspaceW { n, mu: self.mu, basis, cutoff: self.cutoff, prec: Precision::EXACT }
    }

    /// Supp(W) = F through the cutoff.
    pub fn has_full_support(&self) -> bool {
        let s = self.support();
        s.basis.len() == binomial_count(self.n, self.cutoff)
            && s.basis.values().all(|w| w.terms().keys().all(|m| m.d.is_nonneg() && m.d.total() <= self.cutoff))
            && self.mu == 0
    }
}
