//! Joint eigenfunctions of commuting operators as truncated series.

use ssk::coeffs::Scalar;
use ssk::opcore::{Kind, Operator};
use ssk::sato::solve_spectral;
use ssk::schur_sym::wallenberg_pair;

fn main() -> ssk::Result<()> {
    let d2 = Operator::d(1, 0, 2).with_kind(Kind::DSym)?;
    let sol = solve_spectral(&[d2], &[Scalar::from_i64(4)], 8)?;
    println!("d^2 f = 4 f: dimension {}", sol.basis.len());
    for f in &sol.basis {
        println!("  {f}");
    }

    // the spectral curve of the Wallenberg ring is P^2 = 16 L^3
    let (l, p) = wallenberg_pair(12)?;
    for (a, b) in [(4, 32), (4, 31)] {
        let sol = solve_spectral(&[l.clone(), p.clone()], &[Scalar::from_i64(a), Scalar::from_i64(b)], 10)?;
        println!("L f = {a} f, P f = {b} f: dimension {}", sol.basis.len());
    }
    Ok(())
}
