//! Property tests for the algebraic invariants of scalars, series and operators.

mod common;

use proptest::prelude::*;

use common::Gen;
use ssk::cli::json::{operator_to_json, series_to_json, Codec};
use ssk::coeffs::idx::indices_up_to;
use ssk::coeffs::{Idx, PowerSeries, Scalar, INF};
use ssk::opcore::{commutator, diamond_mono, from_slices, invert_unit_op, mul, ord, slices, Kind, Mono, Operator, Precision};
use ssk::sato::{build_sato_monic, sato_transport, SubspaceW};

fn rational() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=7).prop_map(|(p, q)| Scalar::ratio(p, q))
}

/// a_0 + a_1 z + ... in Q(z), z a primitive 5th root of unity.
fn cyclotomic() -> impl Strategy<Value = Scalar> {
    prop::collection::vec(-5i64..=5, 4).prop_map(|cs| {
        cs.iter().enumerate().fold(Scalar::zero().lift_to(5).unwrap(), |acc, (i, c)| &acc + &(&Scalar::zeta(5, i as i64) * &Scalar::from_i64(*c)))
    })
}

fn scalar() -> impl Strategy<Value = Scalar> {
    prop_oneof![rational(), cyclotomic()]
}

fn series(n: usize, prec: i64) -> impl Strategy<Value = PowerSeries> {
    any::<u64>().prop_map(move |seed| Gen::new(seed).poly(n, 0, 3, 5).with_prec(prec))
}

/// P plus random terms outside its exact region that respect its ord and d_n bounds.
fn perturb(g: &mut Gen, p: &Operator) -> Operator {
    let n = p.nvars();
    let r = p.prec();
    let kind = p.kind();
    let mut terms: Vec<(Mono, Scalar)> = p.terms().iter().map(|(m, c)| (*m, c.clone())).collect();
    let top = p.dn_bound().unwrap_or(3);
    for _ in 0..40 {
        let x = if kind == Kind::VElem { Idx::zero() } else { g.small_idx(n, r.x_deg.min(8) + 2) };
        let lo = match kind {
            Kind::DSym | Kind::DHat => 0,
            Kind::DHatN => 0,
            _ => -r.dn_tail.min(8) - 3,
        };
        let hi = if kind == Kind::DHatN { 0 } else { top };
        if lo > hi {
            continue;
        }
        let d = g.small_idx(n, 3).with(n - 1, g.int(lo, hi));
        let m = Mono::new(x, d);
        if !r.contains(x.total(), d.get(n - 1)) && m.ord() <= p.ord_bound() {
            terms.push((m, g.scalar()));
        }
    }
    Operator::from_terms(n, kind, Precision::EXACT, p.ord_bound(), p.dn_bound(), terms)
}

fn kind() -> impl Strategy<Value = Kind> {
    prop::sample::select(Kind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_field_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        let back: Scalar = a.to_string().parse().unwrap();
        prop_assert_eq!(back.lift_to(a.field_order()).unwrap(), a);
    }

    #[test]
    fn series_ring_laws(f in series(2, 7), g in series(2, 7), h in series(2, 7)) {
        let fg = f.mul(&g).unwrap();
        prop_assert!(fg.eq_up_to(&g.mul(&f).unwrap(), 6));
        prop_assert!(fg.mul(&h).unwrap().eq_up_to(&f.mul(&g.mul(&h).unwrap()).unwrap(), 6));
        // Leibniz rule
        let lhs = fg.partial_derivative(0);
        let rhs = f.partial_derivative(0).mul(&g).unwrap().add(&f.mul(&g.partial_derivative(0)).unwrap()).unwrap();
        prop_assert!(lhs.eq_up_to(&rhs, 5));
        prop_assert!(f.antiderivative(1).partial_derivative(1).eq_up_to(&f, 6));
    }

    #[test]
    fn series_unit_inverse(f in series(2, 8), c in rational()) {
        prop_assume!(!c.is_zero());
        let u = f.sub(&PowerSeries::constant(2, f.coeff(&Idx::zero()))).unwrap().add(&PowerSeries::constant(2, c)).unwrap();
        let prod = u.mul(&u.invert_unit().unwrap()).unwrap();
        prop_assert!(prod.eq_up_to(&PowerSeries::one(2), 8));
    }

    #[test]
    fn series_composition_with_identity(f in series(2, 6)) {
        let id = [PowerSeries::var(2, 0), PowerSeries::var(2, 1)];
        prop_assert!(f.compose(&id).unwrap().eq_up_to(&f, 6));
    }

    #[test]
    fn operator_associativity(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.int(1, 2) as usize;
        let (p, q, r) = (g.operator(n, Kind::DHat, 3), g.operator(n, Kind::EHat, 3), g.operator(n, Kind::EHat, 3));
        let left = mul(&mul(&p, &q).unwrap(), &r).unwrap();
        let right = mul(&p, &mul(&q, &r).unwrap()).unwrap();
        prop_assert!(left.agrees_with(&right));
    }

    #[test]
    fn jacobi_identity(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.int(1, 2) as usize;
        let (a, b, c) = (g.operator(n, Kind::DHat, 3), g.operator(n, Kind::DHat, 3), g.operator(n, Kind::DHat, 3));
        let t = |x: &Operator, y: &Operator, z: &Operator| commutator(x, &commutator(y, z).unwrap()).unwrap();
        let sum = t(&a, &b, &c).add(&t(&b, &c, &a)).unwrap().add(&t(&c, &a, &b)).unwrap();
        prop_assert!(sum.is_zero());
    }

    #[test]
    fn ord_is_subadditive(seed in any::<u64>(), k in kind()) {
        let mut g = Gen::new(seed);
        let n = g.int(1, 3) as usize;
        let right = if k == Kind::PiHat { Kind::EHat } else { k };
        let (p, q) = (g.operator(n, k, 4), g.operator(n, right, 4));
        if let (Some(a), Some(b), Some(c)) = (ord(&p), ord(&q), ord(&mul(&p, &q).unwrap())) {
            prop_assert!(c <= a + b);
        }
    }

    /// Terms outside the inputs' exact regions cannot change the product inside its region.
    #[test]
    fn product_precision_is_sound(seed in any::<u64>(), k in kind()) {
        let mut g = Gen::new(seed);
        let n = g.int(1, 3) as usize;
        let right = if k == Kind::PiHat { Kind::EHat } else { k };
        let (p, q) = (g.operator(n, k, 4), g.operator(n, right, 4));
        let pq = mul(&p, &q).unwrap();
        let wide = mul(&perturb(&mut g, &p), &perturb(&mut g, &q)).unwrap();
        prop_assert!(wide.agrees_with(&pq));
    }

    #[test]
    fn slices_reassemble(seed in any::<u64>(), k in kind()) {
        let mut g = Gen::new(seed);
        let n = g.int(1, 3) as usize;
        let p = g.operator(n, k, 5);
        let v = p.prec().x_deg.min(6);
        let back = from_slices(n, &slices(&p, v).unwrap(), v).unwrap();
        prop_assert!(back.agrees_with(&p));
    }

    #[test]
    fn monic_unit_inverse(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.int(1, 2) as usize;
        let u = g.monic_unit(n, 3, 2, Precision::boxed(6, 6));
        let ui = invert_unit_op(&u).unwrap();
        let r = mul(&u, &ui).unwrap().sub(&Operator::one(n, Kind::EHat)).unwrap();
        prop_assert!(r.is_zero());
    }

    /// S_0 is determined by W = F diamond S_0, and left units do not change the point.
    #[test]
    fn sato_bijectivity_and_unit_absorption(seed in any::<u64>()) {
        let mut g = Gen::new(seed);
        let n = g.int(1, 2) as usize;
        let cutoff = 4;
        let s = g.monic_unit(n, 3, 2, Precision { x_deg: INF, dn_tail: 10, total: INF });
        let ks = indices_up_to(n, cutoff);
        let basis = ks.iter().map(|k| (*k, diamond_mono(k, &s).unwrap())).collect();
        let w = SubspaceW::new(n, 0, basis, cutoff).unwrap();
        prop_assert!(build_sato_monic(&w).unwrap().agrees_with(&s));
        let x = Operator::x(n, 0);
        let u = Operator::one(n, Kind::DSym).add(&mul(&x, &Operator::d(n, n - 1, 1)).unwrap().scale(&g.scalar()));
        let c = g.scalar();
        let u = u.unwrap().add(&mul(&x, &x).unwrap().scale(&c)).unwrap().truncate(Precision::x_only(cutoff));
        prop_assume!(ssk::opcore::is_unit(&u, cutoff).unwrap());
        let us = mul(&u, &s.truncate(Precision::boxed(cutoff, 10))).unwrap();
        for k in &ks {
            prop_assert!(w.contains(&diamond_mono(k, &us).unwrap()).unwrap());
        }
    }

    /// For W = F the monic Sato operator is 1 and L_S is the identity.
    #[test]
    fn transport_of_free_point_is_identity(a in -3i64..=3, b in -3i64..=3) {
        let w = SubspaceW::free(1, 6);
        let s = build_sato_monic(&w).unwrap().truncate(Precision::x_only(6));
        let f = Operator::d(1, 0, 2).scale(&Scalar::from_i64(a)).add(&Operator::constant(1, Kind::VElem, Scalar::from_i64(b))).unwrap().with_kind(Kind::VElem).unwrap();
        let l = sato_transport(&s, &f).unwrap();
        prop_assert!(l.agrees_with(&f.with_kind(Kind::PiHat).unwrap()));
    }

    #[test]
    fn json_round_trip(seed in any::<u64>(), k in kind()) {
        let mut g = Gen::new(seed);
        let n = g.int(1, 3) as usize;
        let p = g.operator(n, k, 5);
        let back = Codec::default().operator(&operator_to_json(&p)).unwrap();
        prop_assert_eq!(back.kind(), p.kind());
        prop_assert_eq!(back.prec(), p.prec());
        prop_assert_eq!(back.terms(), p.terms());
        let f = g.poly(n, 0, 3, 4).with_prec(5);
        let fb = Codec::default().series(&series_to_json(&f)).unwrap();
        prop_assert_eq!(fb.terms(), f.terms());
        prop_assert_eq!(fb.prec(), f.prec());
    }
}
