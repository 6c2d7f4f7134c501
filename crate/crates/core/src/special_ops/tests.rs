use super::*;
use crate::opcore::{apply, mul};

fn s(n: usize, terms: &[(&[i64], i64)]) -> PowerSeries {
    PowerSeries::from_terms(n, INF, terms.iter().map(|(k, c)| (Idx::from_slice(k).unwrap(), Scalar::from_i64(*c))))
}

#[test]
fn shift_by_x2() {
    let u = vec![s(2, &[(&[0, 1], 1)]), PowerSeries::zero(2, INF)];
    let p = shift_operator(&u, 6).unwrap();
    let f = s(2, &[(&[2, 0], 1)]);
    let r = apply(&p, &f).unwrap();
    let want = s(2, &[(&[2, 0], 1), (&[1, 1], 2), (&[0, 2], 1)]);
    assert!(r.eq_up_to(&want, 6));
}

#[test]
fn delta_sets_zero() {
    let d = delta(2, 0, 6).unwrap();
    let f = s(2, &[(&[2, 0], 1), (&[0, 1], 3), (&[1, 1], 5)]);
    let r = apply(&d, &f).unwrap();
    assert!(r.eq_up_to(&s(2, &[(&[0, 1], 3)]), 6));
}

#[test]
fn integration_identities() {
    let v = 8;
    let int = integrator(1, 0, v);
    let r = apply(&int, &s(1, &[(&[2], 1)])).unwrap();
    assert_eq!(r.coeff(&Idx::from_slice(&[3]).unwrap()), Scalar::ratio(1, 3));
    assert_eq!(r.terms().len(), 1);
    let d = Operator::d(1, 0, 1);
    let di = mul(&d, &int).unwrap();
    assert!(di.sub(&Operator::one(1, Kind::DSym)).unwrap().is_zero());
    let id = mul(&int, &d).unwrap().add(&delta(1, 0, v).unwrap()).unwrap();
    assert!(id.sub(&Operator::one(1, Kind::DSym)).unwrap().is_zero());
    assert!(id.prec().x_deg >= v - 1);
}

#[test]
fn roots_of_unity_relations() {
    let v = 8;
    let a1 = root_of_unity_op(1, 3, 1, 0, v).unwrap();
    let a2 = root_of_unity_op(1, 3, 2, 0, v).unwrap();
    let prod = mul(&a1, &a2).unwrap();
    assert!(prod.sub(&Operator::one(1, Kind::DSym)).unwrap().is_zero());
    let a11 = mul(&a1, &a1).unwrap();
    assert!(a11.sub(&a2).unwrap().is_zero());
    // d^2 A = zeta^2 A d^2
    let d2 = Operator::d(1, 0, 2);
    let lhs = mul(&d2, &a1).unwrap();
    let rhs = mul(&a1, &d2).unwrap().scale(&Scalar::zeta(3, 2));
    assert!(lhs.sub(&rhs).unwrap().is_zero());
    let par = root_of_unity_op(1, 2, 1, 0, v).unwrap();
    let f = s(1, &[(&[1], 1), (&[2], 1), (&[3], 1)]);
    let r = apply(&par, &f).unwrap();
    assert!(r.eq_up_to(&s(1, &[(&[1], -1), (&[2], 1), (&[3], -1)]), v));
}

fn mat(v: &[&[i64]]) -> Vec<Vec<Scalar>> {
    v.iter().map(|r| r.iter().map(|x| Scalar::from_i64(*x)).collect()).collect()
}

#[test]
fn linear_change() {
    let v = 6;
    let c = mat(&[&[1, 1], &[0, 1]]);
    let sop = linear_change_conjugator(&c, &Scalar::one(), v).unwrap();
    let cinv = mat(&[&[1, -1], &[0, 1]]);
    let sinv = linear_change_conjugator(&cinv, &Scalar::one(), v).unwrap();
    let id = mul(&sop, &sinv).unwrap();
    assert!(id.sub(&Operator::one(2, Kind::DSym)).unwrap().is_zero());
    let conj = mul(&mul(&sinv, &Operator::d(2, 0, 1)).unwrap(), &sop).unwrap();
    let want = Operator::d(2, 0, 1).add(&Operator::d(2, 1, 1)).unwrap();
    assert!(conj.sub(&want).unwrap().is_zero());
    assert!(conj.prec().x_deg >= v - 1);
    assert!(matches!(linear_change_conjugator(&mat(&[&[1, 2], &[2, 4]]), &Scalar::one(), v), Err(Error::SingularMatrix)));
}

#[test]
fn linear_change_composition() {
    let v = 5;
    let c1 = mat(&[&[1, 1], &[0, 1]]);
    let c2 = mat(&[&[2, 0], &[1, 1]]);
    let c12 = mat(&[&[3, 1], &[1, 1]]);
    let a = linear_change_conjugator(&c1, &Scalar::one(), v).unwrap();
    let b = linear_change_conjugator(&c2, &Scalar::one(), v).unwrap();
    let ab = linear_change_conjugator(&c12, &Scalar::one(), v).unwrap();
    assert!(mul(&a, &b).unwrap().sub(&ab).unwrap().is_zero());
}

/// Solve G(F) = x degree by degree (one variable).
fn undetermined_inverse(f: &PowerSeries, deg: i64) -> PowerSeries {
    let mut g = PowerSeries::var(1, 0).with_prec(deg);
    for d in 2..=deg {
        let comp = g.compose(&[f.truncate(deg)]).unwrap();
        let c = comp.coeff(&Idx::from_slice(&[d]).unwrap());
        let corr = PowerSeries::from_terms(1, deg, [(Idx::from_slice(&[d]).unwrap(), -c)]);
        g = g.add(&corr).unwrap();
    }
    g
}

#[test]
fn catalan_inverse() {
    let f = s(1, &[(&[1], 1), (&[2], -1)]);
    assert!(matches!(abhyankar_inverse(std::slice::from_ref(&f), 10), Err(Error::JacobianNotOne(10))));
    let g = abhyankar_inverse_weighted(std::slice::from_ref(&f), 10).unwrap();
    let cat = [0, 1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862];
    for (d, c) in cat.iter().enumerate() {
        assert_eq!(g[0].coeff(&Idx::from_slice(&[d as i64]).unwrap()), Scalar::from_i64(*c));
    }
    assert!(g[0].eq_up_to(&undetermined_inverse(&f, 10), 10));
}

#[test]
fn triangular_inverse() {
    let f = vec![s(2, &[(&[1, 0], 1), (&[0, 2], 1)]), s(2, &[(&[0, 1], 1)])];
    let g = abhyankar_inverse(&f, 8).unwrap();
    assert!(g[0].eq_up_to(&s(2, &[(&[1, 0], 1), (&[0, 2], -1)]), 8));
    assert!(g[1].eq_up_to(&s(2, &[(&[0, 1], 1)]), 8));
}

#[test]
fn weighted_inverse_two_vars() {
    let f = vec![s(2, &[(&[1, 0], 1), (&[1, 1], 1)]), s(2, &[(&[0, 1], 1), (&[2, 0], 1), (&[0, 2], -1)])];
    let g = abhyankar_inverse_weighted(&f, 7).unwrap();
    let gf: Vec<PowerSeries> = g.iter().map(|gi| gi.compose(&f).unwrap()).collect();
    assert!(gf[0].eq_up_to(&PowerSeries::var(2, 0), 7));
    assert!(gf[1].eq_up_to(&PowerSeries::var(2, 1), 7));
}

#[test]
fn transport_recovers() {
    let f = s(1, &[(&[1], 1), (&[2], -1)]);
    let uf = f.mul(&f).unwrap();
    let u = abhyankar_transport(&uf, &[f], 8, AbhyankarMode::Weighted).unwrap();
    assert!(u.eq_up_to(&s(1, &[(&[2], 1)]), 8));
}
