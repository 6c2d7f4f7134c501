//! Schur pairs (A, W): the two constructions linking them to commuting operator rings,
//! and the analytical rank.

use crate::coeffs::idx::{binomial_count, indices_up_to};
use crate::coeffs::INF;
use crate::error::{Error, Result};
use crate::opcore::linalg::{Echelon, GradedKey};
use crate::opcore::orders::{check_quasi_elliptic, ord};
use crate::opcore::{commutator, mul, Kind, Operator, Precision};
use crate::sato::operators::{invert_monic, point_of};
use crate::sato::{build_sato_monic, graded_row, SubspaceW};
use crate::schur_hat::schur_conjugator;

/// A ring of constant-coefficient operators (by generators) stabilizing W from the right.
#[derive(Clone, Debug)]
pub struct SchurPair {
    pub a_generators: Vec<Operator>,
    pub w: SubspaceW,
    pub rank_hint: Option<usize>,
}

impl SchurPair {
    pub fn new(a_generators: Vec<Operator>, w: SubspaceW) -> Result<SchurPair> {
        let p = SchurPair { a_generators, w, rank_hint: None };
        p.certify()?;
        Ok(p)
    }

    /// W a contained in W for every generator, through the cutoff.
    pub fn certify(&self) -> Result<()> {
        let n = self.w.n;
        for (i, a) in self.a_generators.iter().enumerate() {
            if a.kind() != Kind::VElem || a.nvars() != n {
                return Err(Error::KindIncompatible(format!("generator {} is not constant-coefficient", i + 1)));
            }
            let Some(o) = ord(a) else { continue };
            for (k, wk) in &self.w.basis {
                if k.total() + o.max(0) > self.w.cutoff {
                    continue;
                }
                if !self.w.contains(&mul(wk, a)?)? {
                    return Err(Error::NotStabilizing(format!("w_{:?} a_{} is outside W", k.to_vec(n), i + 1)));
                }
            }
        }
        Ok(())
    }
}

fn check_commuting(gens: &[Operator]) -> Result<()> {
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let c = commutator(&gens[i], &gens[j])?;
            if !c.is_zero() {
                return Err(Error::NotCommuting(format!("generators {} and {}", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

/// (A, W) from a commuting ring whose first n generators form a monic quasi-elliptic tuple.
///
/// A = T B T^{-1} with T from the Schur conjugator, and W = F diamond T^{-1} through `cutoff`.
pub fn construction1(gens: &[Operator], tail: i64, cutoff: i64) -> Result<SchurPair> {
    let Some(first) = gens.first() else {
        return Err(Error::NotQuasiElliptic("no generators".into()));
    };
    let n = first.nvars();
    if gens.len() < n {
        return Err(Error::NotQuasiElliptic(format!("need {n} generators for the tuple")));
    }
    // the ring is differential of finite order, so DSym inputs are read as DHat
    let gens: Vec<Operator> = gens.iter().map(|g| if g.kind() == Kind::DSym { g.with_kind(Kind::DHat) } else { Ok(g.clone()) }).collect::<Result<_>>()?;
    let gens = &gens[..];
    let tuple = &gens[..n];
    if !check_quasi_elliptic(tuple).passes() {
        return Err(Error::NotQuasiElliptic("the leading tuple fails the monic shape conditions".into()));
    }
    check_commuting(gens)?;
    let (t, t_inv) = schur_conjugator(tuple, tail)?;
    let mut a = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        let c = mul(&mul(&t, g)?, &t_inv)?;
        if !c.is_constant_coefficient() {
            return Err(Error::NotCommuting(format!("generator {} keeps x-dependent terms after conjugation", i + 1)));
        }
        let o = ord(&c).unwrap_or(0);
        let c = c.with_kind(Kind::VElem)?.truncate(Precision { x_deg: INF, dn_tail: tail, total: INF });
        a.push(c.with_bounds(o, None));
    }
    let w = point_of(&t_inv, 0, cutoff)?;
    if !w.has_full_support() {
        return Err(Error::SupportNotFull("F diamond T^{-1} has a defective support".into()));
    }
    SchurPair::new(a, w)
}

/// B = S_0 A S_0^{-1} with S_0 the monic Sato operator of W.
pub fn construction2(pair: &SchurPair) -> Result<Vec<Operator>> {
    let s0 = build_sato_monic(&pair.w)?;
    let s0_inv = invert_monic(&s0)?;
    let mut out = Vec::with_capacity(pair.a_generators.len());
    for a in &pair.a_generators {
        let b = mul(&mul(&s0, a)?, &s0_inv)?;
        let o = ord(&b).unwrap_or(0);
        out.push(b.with_kind(Kind::DSym)?.with_bounds(o, None));
    }
    Ok(out)
}

/// Budgeted analytical rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub rank: usize,
    /// The chosen generators span W up to a codimension that no longer grows at the budget.
    pub exact: bool,
    pub budget: i64,
}

/// A K-basis of A in ord <= top, from monomials in the generators.
fn ring_basis(gens: &[Operator], top: i64) -> Result<Vec<(i64, Operator)>> {
    let n = gens.first().map(|g| g.nvars()).unwrap_or(1);
    let mut ords = Vec::with_capacity(gens.len());
    for (i, g) in gens.iter().enumerate() {
        match ord(g) {
            Some(o) if o > 0 => ords.push(o),
            _ => return Err(Error::OrderMismatch(format!("generator {} must have positive ord", i + 1))),
        }
    }
    let mut monos = vec![(0i64, Operator::one(n, Kind::VElem))];
    for (g, o) in gens.iter().zip(&ords) {
        let mut next = Vec::new();
        for (d, m) in &monos {
            let mut d = *d;
            let mut m = m.clone();
            next.push((d, m.clone()));
            while d + o <= top {
                m = mul(&m, g)?;
                d += o;
                next.push((d, m.clone()));
            }
        }
        monos = next;
    }
    monos.sort_by_key(|(d, _)| *d);
    let tail = monos.iter().map(|(_, m)| m.prec().dn_tail).min().unwrap_or(INF);
    let mut e: Echelon<GradedKey> = Echelon::new();
    Ok(monos.into_iter().filter(|(_, m)| e.insert(graded_row(m, tail)).is_some()).collect())
}

/// Rank of the products g a with ord <= top, and whether they were independent.
fn product_rank(gs: &[Operator], abasis: &[(i64, Operator)], top: i64) -> Result<(usize, bool)> {
    let mut prods = Vec::new();
    for g in gs {
        let og = ord(g).unwrap_or(0);
        for (o, a) in abasis {
            if og + o <= top {
                prods.push(mul(g, a)?);
            }
        }
    }
    let tail = prods.iter().map(|p| p.prec().dn_tail).min().unwrap_or(INF);
    let mut e: Echelon<GradedKey> = Echelon::new();
    let mut count = 0;
    for p in &prods {
        if e.insert(graded_row(p, tail)).is_some() {
            count += 1;
        }
    }
    Ok((count, count == prods.len()))
}

/// Number of basis elements of W independent over A within `budget` degrees above mu.
///
/// Candidates w_k with |k| <= budget/2 are added greedily while the products w a of
/// ord <= mu + budget stay linearly independent.
pub fn analytical_rank(pair: &SchurPair, budget: i64) -> Result<RankReport> {
    let w = &pair.w;
    if budget < 0 || budget > w.cutoff {
        return Err(Error::BudgetExhausted(format!("budget {budget} outside the certified cutoff {}", w.cutoff)));
    }
    let top = w.mu + budget;
    let abasis = ring_basis(&pair.a_generators, budget)?;
    let mut chosen: Vec<Operator> = Vec::new();
    // a candidate near the budget meets too few products to expose a relation
    for k in indices_up_to(w.n, budget / 2) {
        let mut cand = chosen.clone();
        cand.push(w.basis[&k].clone());
        if product_rank(&cand, &abasis, top)?.1 {
            chosen = cand;
        }
    }
    let codim = |d: i64| -> Result<usize> {
        let (r, _) = product_rank(&chosen, &abasis, d)?;
        Ok(binomial_count(w.n, d - w.mu) - r)
    };
    let exact = budget >= 1 && codim(top)? == codim(top - 1)?;
    Ok(RankReport { rank: chosen.len(), exact, budget })
}
