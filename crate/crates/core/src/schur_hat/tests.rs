use super::*;
use crate::opcore::ord;

fn dm(n: usize, k: &[i64]) -> Operator {
    Operator::d_mono(n, Idx::from_slice(k).unwrap(), Scalar::one())
}

fn xop(n: usize, i: usize) -> Operator {
    Operator::x(n, i)
}

fn boxed(v: i64, t: i64) -> Precision {
    Precision::boxed(v, t)
}

#[test]
fn root_of_pure_power() {
    let p = dm(2, &[0, 2]);
    let l = nth_root(&p, 2, 4).unwrap();
    assert!(l.sub(&dm(2, &[0, 1])).unwrap().is_zero());
    assert!(l.prec().covers_box(INF / 2, 4));
}

#[test]
fn root_of_square() {
    // (d + x)^2 = d^2 + 2x d + x^2 + 1
    let l0 = dm(1, &[1]).add(&xop(1, 0)).unwrap();
    let p = mul(&l0, &l0).unwrap().truncate(Precision::x_only(10));
    let l = nth_root(&p, 2, 5).unwrap();
    let r = l.sub(&l0).unwrap();
    assert!(r.is_zero(), "{r}");
    assert!(r.prec().x_deg_at(-5) >= 0);
    assert_eq!(l.coeff(&Mono::new(Idx::unit(0), Idx::zero())), Scalar::one());
}

#[test]
fn root_recovers_conjugated_power() {
    // U = 1 + x1 d2^{-1}, P = U^{-1} d2^2 U, root U^{-1} d2 U
    let n = 2;
    let cap = boxed(12, 8);
    let u = Operator::one(n, Kind::EHat).add(&mul(&xop(n, 0), &dm(n, &[0, -1])).unwrap()).unwrap().truncate(cap);
    let uinv = invert_unit_op(&u).unwrap();
    let p = mul(&mul(&uinv, &dm(n, &[0, 2])).unwrap(), &u).unwrap();
    let want = mul(&mul(&uinv, &dm(n, &[0, 1])).unwrap(), &u).unwrap();
    let l = nth_root(&p, 2, 6).unwrap();
    let r = l.sub(&want).unwrap();
    assert!(r.is_zero(), "{r}");
    assert!(r.prec().covers_box(3, 3), "{:?}", r.prec());
    let back = pow(&l, 2).unwrap().sub(&p).unwrap();
    assert!(back.is_zero());
}

#[test]
fn quotient_of_product() {
    let l1 = quotient_root(&dm(2, &[1, 1]), &dm(2, &[0, 1]), 1, 4).unwrap();
    assert!(l1.sub(&dm(2, &[1, 0])).unwrap().is_zero());
    // construct L1 L2^2 and recover L1
    let n = 2;
    let a = dm(n, &[1, 0]).add(&mul(&xop(n, 1), &dm(n, &[0, -1])).unwrap()).unwrap().truncate(boxed(10, 6));
    let b = dm(n, &[0, 1]).truncate(boxed(10, 6));
    let p = mul(&a, &pow(&b, 2).unwrap()).unwrap();
    let q = quotient_root(&p, &b, 2, 6).unwrap();
    assert!(q.sub(&a).unwrap().is_zero());
}

#[test]
fn normalize_constant_drift() {
    // d^2 + 6 d -> d^2 - 9 with S = exp(-3x)
    let p = dm(1, &[2]).add(&dm(1, &[1]).scale(&Scalar::from_i64(6))).unwrap().with_kind(Kind::DHat).unwrap().truncate(Precision::x_only(8));
    let nz = normalize(&[p]).unwrap();
    let want = dm(1, &[2]).sub(&Operator::constant(1, Kind::VElem, Scalar::from_i64(9))).unwrap();
    let r = nz.ops[0].sub(&want).unwrap();
    assert!(r.is_zero(), "{r}");
    assert_eq!(nz.s.coeff(&Mono::new(Idx::unit(0), Idx::zero())), Scalar::from_i64(-3));
    assert_eq!(nz.s.coeff(&Mono::new(Idx::from_slice(&[2]).unwrap(), Idx::zero())), Scalar::ratio(9, 2));
}

#[test]
fn normalize_already_normal() {
    let ps = [dm(2, &[1, 1]), dm(2, &[0, 2])];
    let nz = normalize(&ps).unwrap();
    assert!(nz.f.sub(&PowerSeries::one(2)).unwrap().is_zero());
    assert!(nz.s.sub(&Operator::one(2, Kind::DHatN)).unwrap().is_zero());
}

#[test]
fn normalize_removes_function_defect() {
    // P1 = f^{-1} (d1 d2) f, P2 = f^{-1} d2^2 f with f = exp(x1)
    let n = 2;
    let v = 8;
    let f = PowerSeries::var(n, 0).with_prec(v).exp().unwrap();
    let finv = f.invert_unit().unwrap();
    let conj = |p: &Operator| mul(&mul(&Operator::from_series(&finv), p).unwrap(), &Operator::from_series(&f)).unwrap();
    let ps = [conj(&dm(n, &[1, 1])), conj(&dm(n, &[0, 2]))];
    let nz = normalize(&ps).unwrap();
    assert!(nz.ops[0].sub(&dm(n, &[1, 1])).unwrap().is_zero(), "{}", nz.ops[0]);
    assert!(nz.ops[1].sub(&dm(n, &[0, 2])).unwrap().is_zero());
}

#[test]
fn dressing_single_step() {
    // L = d + x d^{-1}: the first factor of S^{-1} is 1 + s_1 d^{-1} with s_1 = -x^2/2
    let l = dm(1, &[1]).add(&mul(&xop(1, 0), &dm(1, &[-1])).unwrap()).unwrap().truncate(boxed(12, 6));
    let s = dressing_operator(std::slice::from_ref(&l), 6).unwrap();
    let x2 = Mono::new(Idx::from_slice(&[2]).unwrap(), Idx::from_slice(&[-1]).unwrap());
    assert_eq!(s.coeff(&x2), Scalar::ratio(1, 2));
    let sinv = invert_unit_op(&s).unwrap();
    assert_eq!(sinv.coeff(&x2), Scalar::ratio(-1, 2));
    let r = mul(&mul(&sinv, &dm(1, &[1])).unwrap(), &s).unwrap().sub(&l).unwrap();
    assert!(r.is_zero(), "{r}");
    assert!(r.prec().covers_box(3, 3), "{:?}", r.prec());
    assert_eq!(ord(&s), Some(0));
}

#[test]
fn dressing_of_trivial_tuple() {
    let s = dressing_operator(&[dm(2, &[1, 0]), dm(2, &[0, 1])], 4).unwrap();
    assert!(s.sub(&Operator::one(2, Kind::EHat)).unwrap().is_zero());
}

#[test]
fn dressing_two_variables() {
    let n = 2;
    let cap = boxed(14, 8);
    let s_minus = mul(&xop(n, 0), &dm(n, &[0, -1])).unwrap().add(&mul(&mul(&xop(n, 1), &xop(n, 1)).unwrap(), &dm(n, &[0, -2])).unwrap()).unwrap();
    let u = Operator::one(n, Kind::EHat).add(&s_minus).unwrap().truncate(cap);
    let uinv = invert_unit_op(&u).unwrap();
    let ls: Vec<Operator> = (0..n).map(|i| mul(&mul(&uinv, &Operator::d(n, i, 1)).unwrap(), &u).unwrap()).collect();
    let s = dressing_operator(&ls, 6).unwrap();
    let sinv = invert_unit_op(&s).unwrap();
    for i in 0..n {
        let r = mul(&mul(&sinv, &Operator::d(n, i, 1)).unwrap(), &s).unwrap().sub(&ls[i]).unwrap();
        assert!(r.is_zero());
        assert!(r.prec().covers_box(2, 2), "{:?}", r.prec());
    }
}

#[test]
fn centralizer_of_pure_powers() {
    let ps = [dm(2, &[1, 1]), dm(2, &[0, 2])];
    let e = centralizer_to_constants(&ps[1], &ps, 4).unwrap();
    assert!(e.q.sub(&dm(2, &[0, 2])).unwrap().is_zero());
}

#[test]
fn centralizer_rejects_non_commuting() {
    let ps = [dm(1, &[2])];
    let q = xop(1, 0);
    assert!(matches!(centralizer_to_constants(&q, &ps, 4), Err(Error::NotCommuting(_))));
}

#[test]
fn centralizer_of_conjugated_tuple() {
    // U = exp(x1) (1 + x2 d2^{-1}); P_i = U^{-1} model_i U, Q = U^{-1} d2^3 U
    let n = 2;
    let cap = boxed(14, 8);
    let f = PowerSeries::var(n, 0).with_prec(14).exp().unwrap();
    let fo = Operator::from_series(&f);
    let fi = Operator::from_series(&f.invert_unit().unwrap());
    let t = Operator::one(n, Kind::EHat).add(&mul(&xop(n, 1), &dm(n, &[0, -1])).unwrap()).unwrap().truncate(cap);
    let u = mul(&fo, &t).unwrap();
    let uinv = mul(&invert_unit_op(&t).unwrap(), &fi).unwrap();
    let conj = |m: &Operator| mul(&mul(&uinv, m).unwrap(), &u).unwrap();
    let ps = [conj(&dm(n, &[1, 1])), conj(&dm(n, &[0, 2]))];
    let q = conj(&dm(n, &[0, 3]));
    let e = centralizer_to_constants(&q, &ps, 6).unwrap();
    assert!(e.q.is_constant_coefficient());
    assert!(e.q.sub(&dm(n, &[0, 3])).unwrap().is_zero(), "{}", e.q);
    assert!(e.q.prec().covers_box(0, 3), "{:?}", e.q.prec());
}
