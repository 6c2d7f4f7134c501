//! Roots, normalization and dressing of quasi-elliptic tuples in the
//! pseudodifferential ring, and the embedding of their centralizer into
//! constant-coefficient operators.

use std::collections::BTreeMap;

use crate::coeffs::{sat_add, Idx, PowerSeries, Scalar, INF};
use crate::error::{Error, Result};
use crate::opcore::orders::{check_quasi_elliptic, gamma_order};
use crate::opcore::{commutator, invert_unit_op, mul, pow, Kind, Mono, Operator, Precision};

#[cfg(test)]
mod tests;

/// Coefficient-wise x_i-derivative, [d_i, P].
pub fn coeff_derivative(p: &Operator, i: usize) -> Result<Operator> {
    commutator(&Operator::d(p.nvars(), i, 1), p)
}

/// Coefficient-wise antiderivative in x_i with zero constant of integration.
fn coeff_antiderivative(p: &Operator, i: usize) -> Operator {
    let prec = p.prec();
    let it = p.terms().iter().map(|(m, c)| {
        let e = m.x.get(i) + 1;
        (Mono::new(m.x.with(i, e), m.d), c.mul_rat(&num_rational::BigRational::new(1.into(), e.into())))
    });
    let prec = Precision { x_deg: sat_add(prec.x_deg, 1), dn_tail: prec.dn_tail, total: sat_add(prec.total, 1) };
    Operator::from_terms(p.nvars(), p.kind(), prec, p.ord_bound() - 1, p.dn_bound(), it)
}

fn as_ehat(p: &Operator) -> Result<Operator> {
    if p.kind() == Kind::EHat {
        Ok(p.clone())
    } else {
        p.with_kind(Kind::EHat)
    }
}

fn gamma_shape(n: usize, i: usize, l: i64) -> Idx {
    let g = Idx::zero().with(n - 1, l);
    if i + 1 < n {
        g.with(i, 1)
    } else {
        g
    }
}

fn check_monic_shape(p: &Operator, i: usize, l: i64) -> Result<()> {
    let n = p.nvars();
    let g = gamma_order(p)?;
    if g.order != gamma_shape(n, i, l) {
        return Err(Error::GammaShapeMismatch(format!("expected {:?}, found {:?}", gamma_shape(n, i, l).to_vec(n), g.order.to_vec(n))));
    }
    if !g.monic {
        return Err(Error::NotMonic(format!("leading coefficient at {:?}", g.order.to_vec(n))));
    }
    Ok(())
}

/// The monic L = d_n + u_0 + u_{-1} d_n^{-1} + ... with L^l = P, through `tail` negative columns.
///
/// Column -j of L is solved from the d_n^{l-1-j} coefficient of L^l, which is l u_{-j}
/// plus terms in the columns already found.
pub fn nth_root(p: &Operator, l: u32, tail: i64) -> Result<Operator> {
    let n = p.nvars();
    let li = l as i64;
    if l == 0 {
        return Err(Error::GammaShapeMismatch("root of order 0".into()));
    }
    check_monic_shape(p, n - 1, li)?;
    let p = as_ehat(p)?;
    let mut terms: BTreeMap<Mono, Scalar> = BTreeMap::new();
    terms.insert(Mono::new(Idx::zero(), Idx::unit(n - 1)), Scalar::one());
    let (mut xd, mut total) = (INF, INF);
    let inv_l = Scalar::ratio(1, li);
    let mut reached = -1;
    for j in 0..=tail {
        // columns below -j are zero for now; they do not reach column l-1-j of L^l
        let cur = Operator::from_terms(n, Kind::EHat, Precision { x_deg: xd, dn_tail: INF, total }, 1, Some(1), terms.clone());
        let col = li - 1 - j;
        let known = if l == 1 { Operator::zero(n, Kind::DHatN, Precision::EXACT) } else { pow(&cur, l)?.dn_coefficient(col) };
        let target = p.dn_coefficient(col);
        let u = target.sub(&known)?.scale(&inv_l);
        let ex = u.prec().x_deg.min(target.prec().x_deg).min(known.prec().x_deg);
        if ex < 0 {
            break;
        }
        for (m, c) in u.terms() {
            if m.x.total() <= ex {
                terms.insert(Mono::new(m.x, m.d.with(n - 1, -j)), c.clone());
            }
        }
        if j == 0 {
            xd = xd.min(ex);
        }
        total = total.min(sat_add(ex, j));
        reached = j;
    }
    if reached < 0 {
        return Err(Error::PrecisionExhausted("no column of the root is determined".into()));
    }
    let prec = Precision { x_deg: xd, dn_tail: reached, total };
    Ok(Operator::from_terms(n, Kind::EHat, prec, 1, Some(1), terms))
}

/// L^{-1} for a monic root L = d_n + lower terms.
pub fn invert_root(lop: &Operator, tail: i64) -> Result<Operator> {
    let n = lop.nvars();
    let dinv = Operator::d(n, n - 1, -1);
    let unit = mul(&dinv, lop)?.truncate(Precision { x_deg: INF, dn_tail: tail, total: INF });
    mul(&invert_unit_op(&unit)?, &dinv)
}

/// L_i = P_i L^{-l_i}.
pub fn quotient_root(pi: &Operator, lop: &Operator, li: u32, tail: i64) -> Result<Operator> {
    let n = pi.nvars();
    let i = (0..n.saturating_sub(1))
        .find(|&r| gamma_order(pi).map(|g| g.order.get(r) == 1).unwrap_or(false))
        .ok_or_else(|| Error::GammaShapeMismatch("no axis i < n with Gamma entry 1".into()))?;
    check_monic_shape(pi, i, li as i64)?;
    check_monic_shape(lop, n - 1, 1)?;
    let inv = invert_root(lop, tail)?;
    let r = mul(&as_ehat(pi)?, &pow(&inv, li)?)?;
    Ok(r.truncate(Precision { x_deg: INF, dn_tail: tail, total: INF }))
}

/// exp(A) for a nilpotent-in-x operator whose terms commute with each other.
fn exp_commuting(a: &Operator) -> Result<Operator> {
    let n = a.nvars();
    let v = a.prec().x_deg;
    if v >= INF && !a.is_zero() {
        return Err(Error::PrecisionExhausted("exponential needs a finite x-precision".into()));
    }
    let one = Operator::one(n, a.kind()).truncate(a.prec());
    let mut acc = one.clone();
    let mut pw = one;
    for m in 1..=v.max(0) {
        pw = mul(&pw, a)?.scale(&Scalar::ratio(1, m));
        if pw.is_zero() {
            break;
        }
        acc = acc.add(&pw)?;
    }
    Ok(acc)
}

/// Output of [`normalize`]: P'_i = (f S)^{-1} P_i (f S).
#[derive(Clone, Debug)]
pub struct Normalized {
    pub f: PowerSeries,
    pub s: Operator,
    pub s_inv: Operator,
    pub ops: Vec<Operator>,
    pub ls: Vec<i64>,
}

fn conj_by_series(p: &Operator, f: &PowerSeries, finv: &PowerSeries) -> Result<Operator> {
    mul(&mul(&Operator::from_series(finv), p)?, &Operator::from_series(f))
}

fn check_commuting(ps: &[Operator]) -> Result<()> {
    for a in 0..ps.len() {
        for b in a + 1..ps.len() {
            let c = commutator(&ps[a], &ps[b])?;
            if !c.is_zero() {
                return Err(Error::NotCommuting(format!("[P{}, P{}] has {} nonzero terms", a + 1, b + 1, c.len())));
            }
        }
    }
    Ok(())
}

/// Conjugate a monic formally quasi-elliptic tuple into normalized form.
///
/// First a function f removes the x-dependent part of each d_i d_n^{l_i} coefficient,
/// then S = exp(-int p_{n,l_n-1}/l_n dx_n) clears the d_n^{l_n-1} coefficient of P_n.
pub fn normalize(ps: &[Operator]) -> Result<Normalized> {
    let n = ps.first().map(|p| p.nvars()).ok_or_else(|| Error::DimensionMismatch("empty tuple".into()))?;
    if ps.len() != n {
        return Err(Error::DimensionMismatch(format!("{} operators in {n} variables", ps.len())));
    }
    let report = check_quasi_elliptic(ps);
    if !report.passes() {
        return Err(Error::NotQuasiElliptic("Gamma shape, A1 equality or monicity fails".into()));
    }
    let ls = report.ls().unwrap_or_default();
    check_commuting(ps)?;
    let mut cur: Vec<Operator> = ps.iter().map(as_ehat).collect::<Result<_>>()?;
    let vmin = cur.iter().map(|p| p.prec().x_deg).min().unwrap_or(INF);
    let mut f = PowerSeries::one(n).with_prec(vmin);
    for i in 0..n - 1 {
        let lead = cur[i].dn_coefficient(ls[i]);
        let g = lead.sub(&Operator::d(n, i, 1))?;
        if g.terms().keys().any(|m| m.d != Idx::zero()) {
            return Err(Error::NotQuasiElliptic(format!("coefficient of d_{} d_n^{} is not d_{} plus a function", i + 1, ls[i], i + 1)));
        }
        let g = g.function_part();
        if g.is_zero() {
            continue;
        }
        let fi = g.antiderivative(i).with_prec(g.prec()).neg().exp()?;
        let fiinv = fi.invert_unit()?;
        cur = cur.iter().map(|p| conj_by_series(p, &fi, &fiinv)).collect::<Result<_>>()?;
        f = f.mul(&fi)?;
    }
    let ln = ls[n - 1];
    let p = cur[n - 1].dn_coefficient(ln - 1);
    let (s, s_inv) = if p.is_zero() {
        (Operator::one(n, Kind::DHatN), Operator::one(n, Kind::DHatN))
    } else {
        if p.terms().keys().any(|m| (0..n - 1).any(|r| m.x.get(r) != 0)) {
            return Err(Error::NotCommuting(format!("coefficient of d_n^{} depends on x_1..x_(n-1)", ln - 1)));
        }
        let a = coeff_antiderivative(&p, n - 1).scale(&Scalar::ratio(-1, ln));
        let a = a.truncate(Precision::x_only(p.prec().x_deg));
        let s = exp_commuting(&a)?;
        let sinv = exp_commuting(&a.neg())?;
        cur = cur.iter().map(|q| mul(&mul(&sinv, q)?, &s)).collect::<Result<_>>()?;
        (s, sinv)
    };
    Ok(Normalized { f, s: s.with_bounds(0, Some(0)), s_inv: s_inv.with_bounds(0, Some(0)), ops: cur, ls })
}

/// Solve d_i(s) = G_i from the full gradient, with s(0) = 0.
///
/// Uses m s_m = sum_j x_j (G_j)_{m-1} on the homogeneous x-degree components.
fn integrate_gradient(grad: &[Operator]) -> Result<Operator> {
    let n = grad.len();
    let v = grad.iter().map(|g| sat_add(g.prec().x_deg, 1)).min().unwrap_or(INF);
    let top = grad.iter().flat_map(|g| g.terms().keys().map(|m| m.x.total() + 1)).max().unwrap_or(0);
    let mut acc = Operator::zero(n, Kind::DHatN, Precision::x_only(v));
    for m in 1..=v.min(top) {
        for (j, g) in grad.iter().enumerate() {
            let part = g.partial_slice(m - 1);
            if part.is_zero() {
                continue;
            }
            let xj = mul(&Operator::x(n, j), &part)?.scale(&Scalar::ratio(1, m));
            acc = acc.add(&xj)?;
        }
    }
    Ok(acc.truncate(Precision::x_only(v)))
}

/// Formal derivative of a symbol in d_r.
fn symbol_derivative(p: &Operator, r: usize) -> Operator {
    let it = p.terms().iter().filter(|(m, _)| m.d.get(r) != 0).map(|(m, c)| {
        let e = m.d.get(r);
        (Mono::new(m.x, m.d.with(r, e - 1)), c.mul_int(&e.into()))
    });
    Operator::from_terms(p.nvars(), p.kind(), p.prec(), p.ord_bound() - 1, p.dn_bound(), it)
}

/// [v, s] for v free of x_1..x_{n-1} and d_n, given the x'-derivatives of s.
///
/// v s - s v = sum over beta != 0 of D^beta(s) v^(beta) / beta!, with D^beta(s)
/// read off the gradient.
fn commutator_from_gradient(v: &Operator, grad: &[Operator]) -> Result<Operator> {
    let n = v.nvars();
    let mut acc = Operator::zero(n, Kind::DHatN, Precision::EXACT);
    // frontier of (beta, D^beta s, v^(beta) / beta!) with beta != 0
    let mut layer: Vec<(Idx, Operator, Operator)> = Vec::new();
    for r in 0..n - 1 {
        let vb = symbol_derivative(v, r);
        if !vb.is_zero() {
            layer.push((Idx::unit(r), grad[r].clone(), vb));
        }
    }
    while !layer.is_empty() {
        let mut next = Vec::new();
        for (beta, ds, vb) in &layer {
            acc = acc.add(&mul(ds, vb)?)?;
            // extend beta only on axes >= its first nonzero axis, so each beta appears once
            let first = (0..n - 1).find(|&r| beta.get(r) != 0).unwrap_or(0);
            for r in 0..=first {
                let e = beta.get(r) + 1;
                let vb2 = symbol_derivative(vb, r).scale(&Scalar::ratio(1, e));
                if vb2.is_zero() {
                    continue;
                }
                next.push((beta.with(r, e), coeff_derivative(ds, r)?, vb2));
            }
        }
        layer = next;
    }
    Ok(acc)
}

/// The monic S = 1 + S_- with S^{-1} d_i S = L_i (i < n) and S^{-1} (d_n + v_{n,0}) S = L_n.
///
/// Writing S = sum s_q d_n^{-q}, the d_n^{-k} column of d_i S = S L_i reads
/// d_i(s_k) = [S_{<k} (L_i - d_i)]_{-k}; the last axis adds [v_{n,0}, S] terms.
/// Each s_k is recovered from this gradient with s_k(0) = 0.
pub fn dressing_operator(ls: &[Operator], tail: i64) -> Result<Operator> {
    let n = ls.first().map(|p| p.nvars()).ok_or_else(|| Error::DimensionMismatch("empty tuple".into()))?;
    if ls.len() != n {
        return Err(Error::DimensionMismatch(format!("{} operators in {n} variables", ls.len())));
    }
    let mut rest = Vec::with_capacity(n);
    for (i, l) in ls.iter().enumerate() {
        check_monic_shape(l, i, if i + 1 == n { 1 } else { 0 })?;
        let l = as_ehat(l)?;
        let top = l.terms().keys().map(|m| m.d.get(n - 1)).max().unwrap_or(0);
        let lead = l.dn_coefficient(top);
        let ok = if i + 1 == n {
            top == 1 && lead.sub(&Operator::one(n, Kind::DHatN))?.is_zero()
        } else {
            top == 0 && lead.sub(&Operator::d(n, i, 1))?.is_zero()
        };
        if !ok {
            return Err(Error::NotQuasiElliptic(format!("L{} is not almost normalized", i + 1)));
        }
        rest.push(l.sub(&Operator::d(n, i, 1))?);
    }
    let v0 = ls[n - 1].dn_coefficient(0);
    if v0.terms().keys().any(|m| (0..n - 1).any(|r| m.x.get(r) != 0)) {
        return Err(Error::SystemInconsistent("v_{n,0} depends on x_1..x_(n-1)".into()));
    }
    rest[n - 1] = rest[n - 1].sub(&v0)?;
    let v0 = as_ehat(&v0)?;
    let mut terms: BTreeMap<Mono, Scalar> = BTreeMap::new();
    terms.insert(Mono::new(Idx::zero(), Idx::zero()), Scalar::one());
    let mut total = INF;
    let mut reached = 0;
    for k in 1..=tail {
        // columns below -k are zero for now; they do not reach column -k
        let cur = Operator::from_terms(n, Kind::EHat, Precision { x_deg: INF, dn_tail: INF, total }, 0, Some(0), terms.clone());
        let mut grad = Vec::with_capacity(n);
        for (i, r) in rest.iter().enumerate() {
            let mut g = mul(&cur, r)?;
            if i + 1 == n && !v0.is_zero() {
                g = g.sub(&commutator(&v0, &cur)?)?;
            }
            grad.push(g.dn_coefficient(-k));
        }
        if !v0.is_zero() {
            let br = commutator_from_gradient(&v0.dn_coefficient(0), &grad[..n - 1])?;
            grad[n - 1] = grad[n - 1].sub(&br)?;
        }
        if grad.iter().any(|g| g.prec().x_deg < 0) {
            break;
        }
        let s = integrate_gradient(&grad)?;
        for (j, g) in grad.iter().enumerate() {
            let check = coeff_derivative(&s, j)?.sub(g)?;
            if !check.is_zero() {
                return Err(Error::SystemInconsistent(format!("d_{}(s_{k}) disagrees with the other equations", j + 1)));
            }
        }
        let ex = s.prec().x_deg;
        for (m, c) in s.terms() {
            terms.insert(Mono::new(m.x, m.d.with(n - 1, -k)), c.clone());
        }
        total = total.min(sat_add(ex, k));
        reached = k;
    }
    let prec = Precision { x_deg: INF, dn_tail: reached, total };
    Ok(Operator::from_terms(n, Kind::EHat, prec, 0, Some(0), terms))
}

/// Result of embedding a centralizer element into constant coefficients.
#[derive(Clone, Debug)]
pub struct Embedding {
    /// Q' = T Q T^{-1}.
    pub q: Operator,
    /// The conjugator T = S (f S_0)^{-1}.
    pub t: Operator,
    pub t_inv: Operator,
}

/// Conjugate Q, commuting with the tuple, into constant coefficients.
pub fn centralizer_to_constants(q: &Operator, ps: &[Operator], tail: i64) -> Result<Embedding> {
    for (i, p) in ps.iter().enumerate() {
        let c = commutator(q, p)?;
        if !c.is_zero() {
            return Err(Error::NotCommuting(format!("[Q, P{}] has {} nonzero terms", i + 1, c.len())));
        }
    }
    let (t, t_inv) = schur_conjugator(ps, tail)?;
    let qp = mul(&mul(&t, q)?, &t_inv)?;
    if !qp.is_constant_coefficient() {
        return Err(Error::NotCommuting("conjugated operator keeps x-dependent terms".into()));
    }
    let qp = qp.truncate(Precision { x_deg: INF, dn_tail: tail, total: INF });
    Ok(Embedding { q: qp, t, t_inv })
}

/// T with T P_i T^{-1} = d_i d_n^{l_i} (and d_n^{l_n}), from normalize, roots and dressing.
pub fn schur_conjugator(ps: &[Operator], tail: i64) -> Result<(Operator, Operator)> {
    let n = ps.len();
    let nz = normalize(ps)?;
    let ln = nz.ls[n - 1] as u32;
    let root = nth_root(&nz.ops[n - 1], ln, tail)?;
    let mut roots = Vec::with_capacity(n);
    for i in 0..n - 1 {
        roots.push(quotient_root(&nz.ops[i], &root, nz.ls[i] as u32, tail)?);
    }
    roots.push(root);
    let s1 = dressing_operator(&roots, tail)?;
    let s1_inv = invert_unit_op(&s1.truncate(Precision { x_deg: INF, dn_tail: tail, total: INF }))?;
    let fop = Operator::from_series(&nz.f);
    let finv = Operator::from_series(&nz.f.invert_unit()?);
    let c = mul(&fop, &nz.s)?;
    let c_inv = mul(&nz.s_inv, &finv)?;
    let t = mul(&s1, &c_inv)?;
    let t_inv = mul(&c, &s1_inv)?;
    Ok((t, t_inv))
}
