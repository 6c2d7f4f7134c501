//! Exact scalars: rationals and elements of cyclotomic fields Q(zeta_k).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Coefficients of the k-th cyclotomic polynomial, constant term first.
pub fn cyclotomic_poly(k: u32) -> Vec<i64> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<i64>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&k) {
        return p.clone();
    }
    assert!(k >= 1, "cyclotomic order must be positive");
    // x^k - 1 divided by every Phi_d, d a proper divisor of k
    let mut num = vec![0i64; k as usize + 1];
    num[0] = -1;
    num[k as usize] = 1;
    for d in 1..k {
        if k.is_multiple_of(d) {
            num = exact_div(&num, &cyclotomic_poly(d));
        }
    }
    cache.lock().unwrap().insert(k, num.clone());
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = num.len() - 1 - dd;
    let mut q = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        q[i] = c;
        for j in 0..=dd {
            rem[i + j] -= c * den[j];
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Euler's totient, equal to the degree of the k-th cyclotomic polynomial.
pub fn totient(k: u32) -> usize {
    cyclotomic_poly(k).len() - 1
}

/// Element of Q(zeta_k) in the power basis, reduced modulo Phi_k.
#[derive(Clone, Debug)]
pub struct Cyclo {
    k: u32,
    c: Vec<BigRational>,
}

impl Cyclo {
    pub fn order(&self) -> u32 {
        self.k
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    fn reduce(k: u32, mut a: Vec<BigRational>) -> Scalar {
        let phi = cyclotomic_poly(k);
        let deg = phi.len() - 1;
        let mut i = a.len();
        while i > deg {
            i -= 1;
            if a[i].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut a[i], BigRational::zero());
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    a[i - deg + j] -= &c * BigRational::from_integer(BigInt::from(pj));
                }
            }
        }
        a.resize(deg, BigRational::zero());
        if a.iter().skip(1).all(|x| x.is_zero()) {
            Scalar::Rat(a.into_iter().next().unwrap_or_else(BigRational::zero))
        } else {
            Scalar::Cyc(Cyclo { k, c: a })
        }
    }

    /// Rewrite in Q(zeta_m) for a multiple m of the order.
    fn lift(&self, m: u32) -> Vec<BigRational> {
        debug_assert!(m.is_multiple_of(self.k));
        let step = (m / self.k) as usize;
        let mut a = vec![BigRational::zero(); step * self.c.len().max(1)];
        for (i, ci) in self.c.iter().enumerate() {
            a[i * step] = ci.clone();
        }
        a
    }
}

/// An exact scalar: a rational number or a cyclotomic field element.
#[derive(Clone, Debug)]
pub enum Scalar {
    Rat(BigRational),
    Cyc(Cyclo),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Rat(BigRational::one())
    }

    pub fn from_i64(v: i64) -> Self {
        Scalar::Rat(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_bigint(v: BigInt) -> Self {
        Scalar::Rat(BigRational::from_integer(v))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Rat(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// zeta_k^e for a primitive k-th root of unity.
    pub fn zeta(k: u32, e: i64) -> Self {
        let e = e.rem_euclid(k as i64) as usize;
        let mut a = vec![BigRational::zero(); e + 1];
        a[e] = BigRational::one();
        Cyclo::reduce(k, a)
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Cyc(_) => false,
        }
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Scalar::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rat(r) => Some(r),
            Scalar::Cyc(_) => None,
        }
    }

    /// Order of the smallest cyclotomic field this representation lives in (1 for rationals).
    pub fn field_order(&self) -> u32 {
        match self {
            Scalar::Rat(_) => 1,
            Scalar::Cyc(c) => c.k,
        }
    }

    fn coords(&self, m: u32) -> Vec<BigRational> {
        match self {
            Scalar::Rat(r) => vec![r.clone()],
            Scalar::Cyc(c) => c.lift(m),
        }
    }

    fn common_order(a: &Scalar, b: &Scalar) -> u32 {
        let (x, y) = (a.field_order(), b.field_order());
        x.lcm(&y)
    }

    pub fn mul_int(&self, f: &BigInt) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r * BigRational::from_integer(f.clone())),
            Scalar::Cyc(c) => {
                if f.is_zero() {
                    return Scalar::zero();
                }
                let fr = BigRational::from_integer(f.clone());
                Scalar::Cyc(Cyclo { k: c.k, c: c.c.iter().map(|x| x * &fr).collect() })
            }
        }
    }

    pub fn mul_rat(&self, f: &BigRational) -> Scalar {
        match self {
            Scalar::Rat(r) => Scalar::Rat(r * f),
            Scalar::Cyc(c) => {
                if f.is_zero() {
                    return Scalar::zero();
                }
                Scalar::Cyc(Cyclo { k: c.k, c: c.c.iter().map(|x| x * f).collect() })
            }
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        match self {
            Scalar::Rat(r) => {
                if r.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Scalar::Rat(r.recip()))
                }
            }
            Scalar::Cyc(c) => {
                // solve a * b = 1 using the multiplication matrix of a
                let d = c.c.len();
                let mut cols: Vec<Vec<BigRational>> = Vec::with_capacity(d);
                for j in 0..d {
                    let mut e = vec![BigRational::zero(); j + 1];
                    e[j] = BigRational::one();
                    let basis = Cyclo::reduce(c.k, e);
                    let prod = &Scalar::Cyc(c.clone()) * &basis;
                    let mut v = prod.coords(c.k);
                    v.resize(d, BigRational::zero());
                    cols.push(v);
                }
                let mut rhs = vec![BigRational::zero(); d];
                rhs[0] = BigRational::one();
                let sol = solve_dense(cols, rhs).ok_or(Error::DivisionByZero)?;
                Ok(Cyclo::reduce(c.k, sol))
            }
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Lift into Q(zeta_m); `m` must be a multiple of the current order.
    pub fn lift_to(&self, m: u32) -> Result<Scalar> {
        let k = self.field_order();
        if !m.is_multiple_of(k) {
            return Err(Error::IncompatibleCyclotomicOrders(k, m));
        }
        Ok(self.clone())
    }
}

/// Solve a dense square system given by columns; None if singular.
fn solve_dense(cols: Vec<Vec<BigRational>>, rhs: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let d = rhs.len();
    let mut m: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            let mut row: Vec<BigRational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(rhs[i].clone());
            row
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=d {
                    let t = &f * &m[col][c];
                    m[r][c] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[d].clone()).collect())
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => a == b,
            (Scalar::Cyc(a), Scalar::Cyc(b)) if a.k == b.k => a.c == b.c,
            (Scalar::Cyc(_), Scalar::Cyc(_)) => (self - other).is_zero(),
            _ => false,
        }
    }
}

impl Eq for Scalar {}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            _ => {
                let m = Scalar::common_order(self, rhs);
                let mut a = self.coords(m);
                let b = rhs.coords(m);
                if a.len() < b.len() {
                    a.resize(b.len(), BigRational::zero());
                }
                for (x, y) in a.iter_mut().zip(b.iter()) {
                    *x += y;
                }
                Cyclo::reduce(m, a)
            }
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Cyc(c) => Scalar::Cyc(Cyclo { k: c.k, c: c.c.iter().map(|x| -x).collect() }),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        match (self, rhs) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Rat(a), s) | (s, Scalar::Rat(a)) => s.mul_rat(a),
            _ => {
                let m = Scalar::common_order(self, rhs);
                let a = self.coords(m);
                let b = rhs.coords(m);
                let mut out = vec![BigRational::zero(); a.len() + b.len()];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if !y.is_zero() {
                            out[i + j] += x * y;
                        }
                    }
                }
                Cyclo::reduce(m, out)
            }
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::from_i64(v)
    }
}

impl From<BigRational> for Scalar {
    fn from(v: BigRational) -> Self {
        Scalar::Rat(v)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rat(r) => write!(f, "{}", fmt_rat(r)),
            Scalar::Cyc(c) => {
                let parts: Vec<String> = c.c.iter().map(fmt_rat).collect();
                write!(f, "cyc({})[{}]", c.k, parts.join(","))
            }
        }
    }
}

fn parse_rat(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scalar> {
        let s = s.trim();
        if let Some(rest) = s.strip_prefix("cyc(") {
            let bad = || Error::Parse(format!("bad cyclotomic literal '{s}'"));
            let (k, rest) = rest.split_once(')').ok_or_else(bad)?;
            let k: u32 = k.trim().parse().map_err(|_| bad())?;
            if k == 0 {
                return Err(bad());
            }
            let body = rest.trim().strip_prefix('[').and_then(|r| r.strip_suffix(']')).ok_or_else(bad)?;
            let coeffs: Vec<BigRational> = if body.trim().is_empty() {
                Vec::new()
            } else {
                body.split(',').map(parse_rat).collect::<Result<_>>()?
            };
            if coeffs.len() > totient(k) {
                return Err(bad());
            }
            Ok(Cyclo::reduce(k, coeffs))
        } else {
            Ok(Scalar::Rat(parse_rat(s)?))
        }
    }
}

/// Binomial coefficient with an arbitrary integer top entry.
pub fn binom(top: i64, m: i64) -> BigInt {
    if m < 0 {
        return BigInt::zero();
    }
    if top >= 0 && m > top {
        return BigInt::zero();
    }
    let mut acc = BigInt::one();
    for j in 0..m {
        acc *= BigInt::from(top - j);
    }
    let mut fact = BigInt::one();
    for j in 2..=m {
        fact *= BigInt::from(j);
    }
    acc / fact
}

pub fn factorial(m: i64) -> BigInt {
    let mut acc = BigInt::one();
    for j in 2..=m {
        acc *= BigInt::from(j);
    }
    acc
}

/// Sign helper for readable output.
pub fn is_negative_rational(s: &Scalar) -> bool {
    matches!(s, Scalar::Rat(r) if r.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_sum() {
        assert_eq!(&Scalar::ratio(1, 2) + &Scalar::ratio(1, 3), Scalar::ratio(5, 6));
    }

    #[test]
    fn zeta2_squared_is_one() {
        let z = Scalar::zeta(2, 1);
        assert_eq!(&z * &z, Scalar::one());
        assert_eq!(z, Scalar::from_i64(-1));
    }

    #[test]
    fn zeta4_plus_cube_vanishes() {
        let s = &Scalar::zeta(4, 1) + &Scalar::zeta(4, 3);
        assert!(s.is_zero());
    }

    #[test]
    fn cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(totient(12), 4);
    }

    #[test]
    fn mixed_orders_lift() {
        let a = Scalar::zeta(4, 1);
        let b = Scalar::zeta(8, 2);
        assert_eq!(a, b);
        let c = &Scalar::zeta(3, 1) * &Scalar::zeta(4, 1);
        assert_eq!(c.pow(12), Scalar::one());
        assert_eq!(c.field_order(), 12);
    }

    #[test]
    fn cyclotomic_inverse() {
        let a = &Scalar::zeta(5, 1) + &Scalar::from_i64(2);
        let b = a.inv().unwrap();
        assert_eq!(&a * &b, Scalar::one());
        assert_eq!(Scalar::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["5/6", "-3", "cyc(3)[1,1/2]"] {
            let v: Scalar = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        let v: Scalar = "cyc(4)[2,0]".parse().unwrap();
        assert_eq!(v.to_string(), "2");
    }

    #[test]
    fn generalized_binomial() {
        assert_eq!(binom(-1, 3), BigInt::from(-1));
        assert_eq!(binom(-2, 2), BigInt::from(3));
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(2, 5), BigInt::zero());
    }
}
