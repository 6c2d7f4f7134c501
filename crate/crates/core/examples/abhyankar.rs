//! Compositional inverses of power-series maps.

use ssk::coeffs::{Idx, PowerSeries, Scalar, INF};
use ssk::special_ops::{abhyankar_inverse, abhyankar_inverse_weighted, jacobian};

fn main() -> ssk::Result<()> {
    // F = (x + y^2, y) has Jacobian 1
    let f = vec![
        PowerSeries::from_terms(2, INF, [(Idx::unit(0), Scalar::one()), (Idx::from_slice(&[0, 2])?, Scalar::one())]),
        PowerSeries::var(2, 1),
    ];
    println!("j(F) = {}", jacobian(&f, 6)?);
    let g = abhyankar_inverse(&f, 6)?;
    for (i, gi) in g.iter().enumerate() {
        println!("G_{} = {gi}", i + 1);
        println!("  G_{}(F) = {}", i + 1, gi.compose(&f)?);
    }

    // x - x^2 has Jacobian 1 - 2x; the weighted formula still inverts it
    let h = PowerSeries::from_terms(1, INF, [(Idx::unit(0), Scalar::one()), (Idx::from_slice(&[2])?, Scalar::from_i64(-1))]);
    let inv = abhyankar_inverse_weighted(&[h], 9)?;
    println!("inverse of x - x^2: {}", inv[0]);
    Ok(())
}
