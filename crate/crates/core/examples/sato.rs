//! A point W = F diamond S of the Sato Grassmannian, its monic Sato operator,
//! unit factorization and the transport L_S.

use std::collections::BTreeMap;

use ssk::coeffs::idx::indices_up_to;
use ssk::coeffs::{Idx, Scalar, INF};
use ssk::opcore::{diamond_mono, mul, Kind, Mono, Operator, Precision};
use ssk::sato::{build_sato_monic, sato_transport, unit_factorize, SubspaceW};

fn main() -> ssk::Result<()> {
    let n = 1;
    let cutoff = 5;
    let mono = |x: i64, d: i64| Mono::new(Idx::from_slice(&[x]).unwrap(), Idx::from_slice(&[d]).unwrap());
    let s = Operator::from_terms(n, Kind::EHat, Precision { x_deg: INF, dn_tail: 8, total: INF }, 0, Some(0), [
        (mono(0, 0), Scalar::one()),
        (mono(1, -1), Scalar::from_i64(1)),
        (mono(0, -2), Scalar::ratio(1, 2)),
    ]);
    let basis: BTreeMap<Idx, Operator> = indices_up_to(n, cutoff).into_iter().map(|k| (k, diamond_mono(&k, &s).unwrap())).collect();
    for (k, w) in basis.iter().take(3) {
        println!("w_{} = {w}", k.get(0));
    }
    let w = SubspaceW::new(n, 0, basis, cutoff)?;
    println!("full support: {}", w.has_full_support());
    let s0 = build_sato_monic(&w)?;
    println!("S0 = {s0}");

    // a left unit does not change the point; factorization splits it off again
    let u = Operator::one(n, Kind::DSym).add(&mul(&Operator::x(n, 0), &Operator::d(n, 0, 1))?)?.truncate(Precision::x_only(cutoff));
    let (u2, s02) = unit_factorize(&mul(&u, &s0)?)?;
    println!("U = {u2}, S0 again: {}", s02.agrees_with(&s0));

    // d^2 does not stabilize this W, the constants do
    let two = Operator::constant(n, Kind::VElem, Scalar::from_i64(2));
    println!("L_S(2) = {}", sato_transport(&s0, &two)?);
    println!("L_S(d^2): {:?}", sato_transport(&s0, &Operator::d(n, 0, 2).with_kind(Kind::VElem)?).err());
    Ok(())
}
