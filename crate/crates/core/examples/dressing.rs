//! Undo a conjugation U^-1 d_n^2 U: take the square root, normalize and dress.

use ssk::coeffs::{Idx, Scalar};
use ssk::opcore::{invert_unit_op, mul, Kind, Mono, Operator, Precision};
use ssk::schur_hat::{dressing_operator, normalize, nth_root, schur_conjugator};

fn main() -> ssk::Result<()> {
    let n = 1;
    let region = Precision::boxed(14, 10);
    // U = 1 + x d^-1 + 2 x^2 d^-2
    let terms = [(0, 0, 1), (1, -1, 1), (2, -2, 2)]
        .map(|(x, d, c)| (Mono::new(Idx::from_slice(&[x]).unwrap(), Idx::from_slice(&[d]).unwrap()), Scalar::from_i64(c)));
    let u = Operator::from_terms(n, Kind::EHat, region, 0, Some(0), terms);
    let u_inv = invert_unit_op(&u)?;
    let p = mul(&mul(&u_inv, &Operator::d(n, 0, 2))?, &u)?;
    println!("P = U^-1 d^2 U = {}", p.truncate(Precision::boxed(3, 3)));

    let nz = normalize(std::slice::from_ref(&p))?;
    println!("l = {:?}, normalizing function f = {}", nz.ls, nz.f);
    let root = nth_root(&nz.ops[0], 2, 6)?;
    println!("L = sqrt(P) = {}", root.truncate(Precision::boxed(3, 3)));
    let s = dressing_operator(std::slice::from_ref(&root), 6)?;
    println!("dressing S = {}", s.truncate(Precision::boxed(3, 4)));

    let (t, t_inv) = schur_conjugator(std::slice::from_ref(&p), 6)?;
    let back = mul(&mul(&t, &p)?, &t_inv)?.sub(&Operator::d(n, 0, 2))?;
    println!("T P T^-1 - d^2 vanishes on the (5, 4) box: {}", back.vanishes_on_box(5, 4));
    Ok(())
}
