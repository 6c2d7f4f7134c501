//! Truncated joint eigenspaces Q(f) = chi(Q) f of commuting differential operators.

use crate::coeffs::idx::indices_up_to;
use crate::coeffs::{Idx, PowerSeries, Scalar, INF};
use crate::error::{Error, Result};
use crate::opcore::linalg::{Echelon, GradedKey, Row};
use crate::opcore::{apply, commutator, Operator};

#[derive(Clone, Debug)]
pub struct SpectralSolution {
    /// Basis of the kernel, as series known through degree `out_deg`.
    pub basis: Vec<PowerSeries>,
    pub out_deg: i64,
    /// The kernel dimension agrees with the one computed at `out_deg - 1`.
    pub stabilized: bool,
}

fn kernel(gens: &[Operator], chi: &[Scalar], n: usize, out_deg: i64) -> Result<Vec<Row<GradedKey>>> {
    let unknowns: Vec<GradedKey> = indices_up_to(n, out_deg).into_iter().map(GradedKey).collect();
    let mut e: Echelon<GradedKey> = Echelon::new();
    for (q, c) in gens.iter().zip(chi) {
        let dq = q.terms().keys().map(|m| m.d.total()).max().unwrap_or(0);
        let top = (out_deg - dq).min(q.prec().x_deg);
        if top < 0 {
            continue;
        }
        // column u holds the coefficients of Q(x^u) - c x^u through degree `top`
        let mut rows: std::collections::BTreeMap<Idx, Row<GradedKey>> = Default::default();
        for u in &unknowns {
            let mono = PowerSeries::from_terms(n, INF, [(u.0, Scalar::one())]);
            let img = apply(q, &mono)?.sub(&mono.scale(c))?;
            for (e_idx, v) in img.terms() {
                if e_idx.total() <= top {
                    rows.entry(*e_idx).or_default().insert(*u, v.clone());
                }
            }
        }
        for r in rows.into_values() {
            e.insert(r);
        }
    }
    Ok(e.nullspace(&unknowns))
}

/// Basis of {f : Q(f) = chi(Q) f for every generator Q}, truncated at degree `out_deg`.
///
/// Equations are imposed only in degrees where every unknown they involve is present.
pub fn solve_spectral(gens: &[Operator], chi: &[Scalar], out_deg: i64) -> Result<SpectralSolution> {
    let Some(first) = gens.first() else {
        return Err(Error::DimensionMismatch("no generators".into()));
    };
    if gens.len() != chi.len() {
        return Err(Error::DimensionMismatch(format!("{} generators, {} character values", gens.len(), chi.len())));
    }
    let n = first.nvars();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            if !commutator(&gens[i], &gens[j])?.is_zero() {
                return Err(Error::NotCommuting(format!("generators {} and {}", i + 1, j + 1)));
            }
        }
    }
    let ker = kernel(gens, chi, n, out_deg)?;
    let stabilized = out_deg >= 1 && kernel(gens, chi, n, out_deg - 1)?.len() == ker.len();
    let basis = ker.into_iter().map(|r| PowerSeries::from_terms(n, out_deg, r.into_iter().map(|(k, v)| (k.0, v)))).collect();
    Ok(SpectralSolution { basis, out_deg, stabilized })
}
