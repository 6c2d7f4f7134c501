//! Sato operators of Grassmannian points, their unit factorization and the transport L_S.

use std::collections::BTreeMap;

use crate::coeffs::idx::{indices_below, indices_of_total, indices_up_to};
use crate::coeffs::{Idx, Scalar, INF};
use crate::error::{Error, Result};
use crate::opcore::linalg::{Echelon, GradedKey, Row};
use crate::opcore::orders::ord;
use crate::opcore::{diamond_mono, from_slices, invert_unit_op, mul, operator_from_diamonds, Kind, Mono, Operator, Precision};
use crate::sato::{antilex_row, graded_row, velem_from, AntiLexKey, SubspaceW};

/// How build_sato_general picks the basis w_k it matches against d^k.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum BasisChoice {
    /// Use the basis stored in W.
    AsGiven,
    /// Reduced echelon representatives of W_m modulo W_{m-1}, matched to d^k in graded order.
    #[default]
    Canonical,
}

fn canonical_basis(w: &SubspaceW) -> BTreeMap<Idx, Operator> {
    let n = w.n;
    let tail = w.tail();
    let mut lower: Echelon<GradedKey> = Echelon::new();
    let mut out = BTreeMap::new();
    for m in 0..=w.cutoff {
        let mut grade: Echelon<GradedKey> = Echelon::new();
        let rows: Vec<Row<GradedKey>> = w.basis.iter().filter(|(k, _)| k.total() == m).map(|(_, v)| graded_row(v, tail)).collect();
        for r in &rows {
            let mut r = r.clone();
            lower.reduce(&mut r, &mut Default::default());
            grade.insert(r);
        }
        let reps: Vec<Row<GradedKey>> = grade.rref().into_values().map(|(r, _)| r).collect();
        let mut ks = indices_of_total(n, m);
        ks.sort_by(|a, b| a.cmp_antilex(b));
        for (k, r) in ks.into_iter().zip(reps) {
            out.insert(k, velem_from(n, &r, tail, |g: &GradedKey| g.0));
        }
        for r in rows {
            lower.insert(r);
        }
    }
    out
}

/// S of ord mu with d^k diamond S = w_k for |k| <= cutoff.
pub fn build_sato_general(w: &SubspaceW, choice: BasisChoice) -> Result<Operator> {
    let basis = match choice {
        BasisChoice::AsGiven => w.basis.clone(),
        BasisChoice::Canonical => canonical_basis(w),
    };
    let s = operator_from_diamonds(w.n, &basis, w.cutoff)?;
    let mu = w.mu;
    Ok(s.with_bounds(mu, None))
}

/// The normalized basis w_k = d^k + (terms with negative d_n power).
fn normalized_basis(w: &SubspaceW) -> Result<BTreeMap<Idx, Operator>> {
    let n = w.n;
    if w.mu != 0 {
        return Err(Error::SupportNotFull(format!("mu = {} is not 0", w.mu)));
    }
    let originals: Vec<&Operator> = w.basis.values().collect();
    let mut e: Echelon<AntiLexKey> = Echelon::new();
    for v in &originals {
        e.insert(antilex_row(v, v.prec().dn_tail));
    }
    let red = e.rref();
    let mut out = BTreeMap::new();
    for k in indices_up_to(n, w.cutoff) {
        let (row, comb) = red.get(&AntiLexKey(k)).ok_or_else(|| Error::SupportNotFull(format!("d^{:?} is not a leading term", k.to_vec(n))))?;
        // a reduced row is exact down to the shortest tail among the rows it combines
        let tail = comb.keys().map(|id| originals[*id].prec().dn_tail).min().unwrap_or(INF);
        let row: Row<AntiLexKey> = row.iter().filter(|(j, _)| j.0.get(n - 1) >= -tail).map(|(j, c)| (*j, c.clone())).collect();
        if row.keys().any(|j| j.0 != k && j.0.get(n - 1) >= 0) {
            return Err(Error::SupportNotFull(format!("basis at {:?} cannot be normalized", k.to_vec(n))));
        }
        out.insert(k, velem_from(n, &row, tail, |a: &AntiLexKey| a.0));
    }
    if red.len() != out.len() {
        return Err(Error::SupportNotFull("leading terms outside F".into()));
    }
    Ok(out)
}

/// The unique Sato operator S_0 = 1 + S_- of a full-support point with mu = 0.
pub fn build_sato_monic(w: &SubspaceW) -> Result<Operator> {
    let n = w.n;
    let nb = normalized_basis(w)?;
    let mut sl: BTreeMap<Idx, Operator> = BTreeMap::new();
    sl.insert(Idx::zero(), nb[&Idx::zero()].clone());
    for m in 1..=w.cutoff {
        for k in indices_of_total(n, m) {
            let mut known = Operator::zero(n, Kind::VElem, Precision::EXACT);
            for i in indices_below(n, &k) {
                if i == k {
                    continue;
                }
                let d = Operator::d_mono(n, k.sub(&i), Scalar::from_bigint(k.binom(&i)));
                known = known.add(&mul(&d, &sl[&i])?)?;
            }
            let mut target = Operator::zero(n, Kind::VElem, Precision::EXACT);
            for (mono, c) in known.terms() {
                if mono.d.get(n - 1) < 0 {
                    continue;
                }
                let wj = nb.get(&mono.d).ok_or_else(|| Error::HilbertViolation(format!("monomial {:?} beyond the cutoff", mono.d.to_vec(n))))?;
                target = target.add(&wj.scale(c))?;
            }
            let s_k = target.sub(&known)?;
            debug_assert!(s_k.terms().keys().all(|mm| mm.d.get(n - 1) < 0));
            sl.insert(k, s_k);
        }
    }
    let s = from_slices(n, &sl, w.cutoff)?;
    if s.kind() == Kind::DSym {
        return Ok(s.with_bounds(0, None));
    }
    Ok(s.with_kind(Kind::EHat)?.with_bounds(0, Some(0)))
}

/// Every slice lies in F: no stored monomial carries a negative d_n power.
pub fn membership_f(p: &Operator) -> bool {
    let n = p.nvars();
    p.terms().keys().all(|m| m.d.get(n - 1) >= 0)
}

/// The point F diamond S through x-degree `cutoff`.
pub(crate) fn point_of(s: &Operator, mu: i64, cutoff: i64) -> Result<SubspaceW> {
    let n = s.nvars();
    let mut basis = BTreeMap::new();
    for k in indices_up_to(n, cutoff) {
        basis.insert(k, diamond_mono(&k, s)?);
    }
    SubspaceW::new(n, mu, basis, cutoff)
}

pub(crate) fn invert_monic(s0: &Operator) -> Result<Operator> {
    if s0.kind() == Kind::DSym && s0.len() == 1 && s0.coeff(&Mono::new(Idx::zero(), Idx::zero())).is_one() {
        return Ok(s0.clone());
    }
    invert_unit_op(s0)
}

/// S = U S_0 with U a unit of the symmetric completion and S_0 monic.
pub fn unit_factorize(s: &Operator) -> Result<(Operator, Operator)> {
    let v = s.prec().x_deg;
    if v >= INF {
        return Err(Error::PrecisionExhausted("factorization needs a finite x-degree".into()));
    }
    let w = point_of(s, 0, v)?;
    let s0 = build_sato_monic(&w)?;
    let u = mul(s, &invert_monic(&s0)?)?;
    let u = if u.kind() == Kind::DSym { u } else { u.with_kind(Kind::DSym)? };
    Ok((u.with_bounds(0, None), s0))
}

/// L = L_S(f) with S f = L S, for f stabilizing W = F diamond S.
pub fn sato_transport(s: &Operator, f: &Operator) -> Result<Operator> {
    let n = s.nvars();
    if f.kind() != Kind::VElem || f.nvars() != n {
        return Err(Error::KindIncompatible("transport needs a constant-coefficient f".into()));
    }
    let Some(a) = ord(f) else {
        return Ok(Operator::zero(n, Kind::DSym, Precision::x_only(s.prec().x_deg)));
    };
    let v = s.prec().x_deg;
    if v >= INF {
        return Err(Error::PrecisionExhausted("transport needs S with a finite x-degree".into()));
    }
    let top = v;
    let m = top - a.max(0);
    if m < 0 {
        return Err(Error::PrecisionExhausted(format!("S is exact through x-degree {v}, f has ord {a}")));
    }
    let basis_ks = indices_up_to(n, top);
    let mut rows = Vec::with_capacity(basis_ks.len());
    for j in &basis_ks {
        rows.push(diamond_mono(j, s)?);
    }
    let mut targets = BTreeMap::new();
    for k in indices_up_to(n, m) {
        targets.insert(k, mul(&diamond_mono(&k, s)?, f)?);
    }
    let tail = rows.iter().chain(targets.values()).map(|o| o.prec().dn_tail).min().unwrap_or(INF);
    let mut e: Echelon<GradedKey> = Echelon::new();
    for r in &rows {
        e.insert(graded_row(r, tail));
    }
    let mut w = BTreeMap::new();
    for (k, t) in &targets {
        let comb = e
            .express(&graded_row(t, tail))
            .ok_or_else(|| Error::NotStabilizing(format!("d^{:?} diamond (S f) is outside F diamond S", k.to_vec(n))))?;
        let terms = comb.iter().map(|(id, c)| (Mono::new(Idx::zero(), basis_ks[*id]), c.clone()));
        w.insert(*k, Operator::from_terms(n, Kind::VElem, Precision::EXACT, a.max(0) + k.total(), Some(a.max(0) + k.total()), terms));
    }
    let l = operator_from_diamonds(n, &w, m)?;
    Ok(l.with_bounds(a, None))
}
