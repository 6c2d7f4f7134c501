//! Regularity and invertibility of order-zero operators.

use ssk::coeffs::Scalar;
use ssk::opcore::{invert_unit_op, is_unit, mul, Kind, Operator, Precision};

fn main() -> ssk::Result<()> {
    let n = 1;
    let x = Operator::x(n, 0);
    let d = Operator::d(n, 0, 1);
    let xd = mul(&x, &d)?;
    let one = Operator::one(n, Kind::DSym);

    // 1 + x d acts on x^m by 1 + m, never zero
    let u = one.add(&xd)?.truncate(Precision::x_only(6));
    println!("1 + x d is a unit: {}", is_unit(&u, 6)?);
    let u_inv = invert_unit_op(&u)?;
    println!("(1 + x d)^-1 = {u_inv}");
    println!("product - 1 = {}", mul(&u, &u_inv)?.sub(&one)?);

    // 1 - x d kills x
    let v = one.sub(&xd)?.truncate(Precision::x_only(6));
    println!("1 - x d is a unit: {}", is_unit(&v, 6)?);
    // x d has order 0 but its reduction kills the constants
    println!("x d is a unit: {}", is_unit(&xd.truncate(Precision::x_only(6)), 6)?);
    let w = one.scale(&Scalar::from_i64(3)).add(&mul(&mul(&x, &x)?, &d)?)?.truncate(Precision::x_only(6));
    println!("3 + x^2 d is a unit: {}", is_unit(&w, 6)?);
    Ok(())
}
