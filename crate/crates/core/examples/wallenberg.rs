//! Conjugate L = d^2 - 2/(x+1)^2 to d^2 and decompose its commuting partner P
//! over the roots-of-unity operators A_{2;j,1}.

use ssk::opcore::{invert_unit_op, mul, Operator, Precision};
use ssk::schur_sym::{centralizer_decompose, conjugate_to_power, wallenberg_pair};

fn main() -> ssk::Result<()> {
    let (l, p) = wallenberg_pair(12)?;
    println!("L = {}", l.truncate(Precision::x_only(3)));
    println!("P = {}", p.truncate(Precision::x_only(3)));

    let s = conjugate_to_power(&l, 0, 2, 8)?;
    let s_inv = invert_unit_op(&s)?;
    let check = mul(&mul(&s, &l)?, &s_inv)?.sub(&Operator::d(1, 0, 2))?;
    println!("S L S^-1 - d^2 = {check}  (exact through x-degree {})", check.prec().x_deg);

    let q = mul(&mul(&s, &p)?, &s_inv)?;
    let dec = centralizer_decompose(&q, &[(0, 2)])?;
    for ((j, a), c) in &dec.terms {
        let what = match a[0] {
            a if a >= 0 => format!("d^{a}"),
            a => format!("int^{}", -a),
        };
        println!("c_{} gets {} * {what}", j[0], c);
    }
    Ok(())
}
