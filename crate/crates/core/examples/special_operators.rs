//! Shift, evaluation, integration, roots-of-unity and linear-change operators acting on series.

use ssk::coeffs::{Idx, PowerSeries, Scalar, INF};
use ssk::opcore::{apply, invert_unit_op, mul, Operator};
use ssk::special_ops::{delta, integrator, linear_change_conjugator, root_of_unity_op, shift_operator};

fn main() -> ssk::Result<()> {
    let f = PowerSeries::from_terms(1, INF, [(Idx::zero(), Scalar::one()), (Idx::unit(0), Scalar::from_i64(2)), (Idx::from_slice(&[3])?, Scalar::one())]);
    println!("f = {f}");
    let shift = shift_operator(&[PowerSeries::var(1, 0).pow(2)?], 6)?;
    println!("f(x + x^2) = {}", apply(&shift, &f)?);
    println!("f(0) = {}", apply(&delta(1, 0, 6)?, &f)?);
    println!("int f = {}", apply(&integrator(1, 0, 6), &f)?);
    let a = root_of_unity_op(1, 3, 1, 0, 6)?;
    println!("f(zeta_3 x) = {}", apply(&a, &f)?);

    // S^-1 d_i S = sum_j c_ij d_j for the swap of two variables
    let c = vec![vec![Scalar::zero(), Scalar::one()], vec![Scalar::one(), Scalar::zero()]];
    let s = linear_change_conjugator(&c, &Scalar::one(), 6)?;
    let d1 = mul(&mul(&invert_unit_op(&s)?, &Operator::d(2, 0, 1))?, &s)?;
    println!("S^-1 d_1 S = {}", d1);
    Ok(())
}
