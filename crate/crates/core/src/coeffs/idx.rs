//! Small fixed-width exponent vectors shared by series and operators.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::One;

use crate::coeffs::scalar::binom;
use crate::error::{Error, Result};

/// Largest supported number of variables.
pub const MAX_VARS: usize = 6;

/// Exponent vector; entries past the variable count are always zero.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, Default, PartialOrd, Ord)]
pub struct Idx(pub [i16; MAX_VARS]);

impl Idx {
    pub fn zero() -> Self {
        Idx([0; MAX_VARS])
    }

    pub fn unit(i: usize) -> Self {
        let mut a = [0; MAX_VARS];
        a[i] = 1;
        Idx(a)
    }

    pub fn from_slice(v: &[i64]) -> Result<Self> {
        if v.len() > MAX_VARS {
            return Err(Error::DimensionMismatch(format!("at most {MAX_VARS} variables supported")));
        }
        let mut a = [0i16; MAX_VARS];
        for (slot, &x) in a.iter_mut().zip(v) {
            *slot = i16::try_from(x).map_err(|_| Error::Parse(format!("exponent {x} out of range")))?;
        }
        Ok(Idx(a))
    }

    pub fn to_vec(&self, n: usize) -> Vec<i64> {
        self.0[..n].iter().map(|&x| x as i64).collect()
    }

    #[inline]
    pub fn get(&self, i: usize) -> i64 {
        self.0[i] as i64
    }

    #[inline]
    pub fn set(&mut self, i: usize, v: i64) {
        self.0[i] = v as i16;
    }

    #[inline]
    pub fn total(&self) -> i64 {
        self.0.iter().map(|&x| x as i64).sum()
    }

    #[inline]
    pub fn add(&self, o: &Idx) -> Idx {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(o.0.iter()) {
            *x += *y;
        }
        Idx(a)
    }

    #[inline]
    pub fn sub(&self, o: &Idx) -> Idx {
        let mut a = self.0;
        for (x, y) in a.iter_mut().zip(o.0.iter()) {
            *x -= *y;
        }
        Idx(a)
    }

    pub fn with(&self, i: usize, v: i64) -> Idx {
        let mut a = *self;
        a.set(i, v);
        a
    }

    /// Componentwise comparison.
    pub fn le(&self, o: &Idx) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&a| a >= 0)
    }

    /// Product of factorials of the entries (entries must be nonnegative).
    pub fn factorial(&self) -> BigInt {
        let mut acc = BigInt::one();
        for &a in self.0.iter() {
            for j in 2..=a as i64 {
                acc *= BigInt::from(j);
            }
        }
        acc
    }

    /// Multi-index binomial coefficient prod binom(self_r, o_r).
    pub fn binom(&self, o: &Idx) -> BigInt {
        let mut acc = BigInt::one();
        for (a, b) in self.0.iter().zip(o.0.iter()) {
            if *b != 0 {
                acc *= binom(*a as i64, *b as i64);
            }
        }
        acc
    }

    /// Anti-lexicographic comparison: the last coordinate is the most significant.
    pub fn cmp_antilex(&self, o: &Idx) -> Ordering {
        for i in (0..MAX_VARS).rev() {
            match self.0[i].cmp(&o.0[i]) {
                Ordering::Equal => continue,
                c => return c,
            }
        }
        Ordering::Equal
    }

    /// Graded order: total degree, then lexicographic.
    pub fn cmp_graded(&self, o: &Idx) -> Ordering {
        self.total().cmp(&o.total()).then_with(|| self.0.cmp(&o.0))
    }
}

/// All nonnegative multi-indices in `n` variables with total `m`, in lexicographic order.
pub fn indices_of_total(n: usize, m: i64) -> Vec<Idx> {
    let mut out = Vec::new();
    if m < 0 {
        return out;
    }
    let mut cur = Idx::zero();
    fill(n, 0, m, &mut cur, &mut out);
    out.sort();
    out
}

fn fill(n: usize, pos: usize, left: i64, cur: &mut Idx, out: &mut Vec<Idx>) {
    if n == 0 {
        if left == 0 {
            out.push(*cur);
        }
        return;
    }
    if pos == n - 1 {
        cur.set(pos, left);
        out.push(*cur);
        cur.set(pos, 0);
        return;
    }
    for v in 0..=left {
        cur.set(pos, v);
        fill(n, pos + 1, left - v, cur, out);
    }
    cur.set(pos, 0);
}

/// All nonnegative multi-indices with total at most `m`, graded order.
pub fn indices_up_to(n: usize, m: i64) -> Vec<Idx> {
    (0..=m).flat_map(|d| indices_of_total(n, d)).collect()
}

/// All multi-indices `j` with `0 <= j <= a` componentwise (first `n` entries).
pub fn indices_below(n: usize, a: &Idx) -> Vec<Idx> {
    let mut out = vec![Idx::zero()];
    for i in 0..n {
        let top = a.get(i);
        let mut next = Vec::with_capacity(out.len() * (top.max(0) as usize + 1));
        for base in &out {
            for v in 0..=top.max(0) {
                next.push(base.with(i, v));
            }
        }
        out = next;
    }
    out
}

pub fn binomial_count(n: usize, m: i64) -> usize {
    // C(n + m, n)
    if m < 0 {
        return 0;
    }
    let mut acc: u128 = 1;
    for j in 1..=n as u128 {
        acc = acc * (m as u128 + j) / j;
    }
    acc as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_counts() {
        assert_eq!(indices_of_total(3, 2).len(), 6);
        assert_eq!(indices_up_to(2, 3).len(), binomial_count(2, 3));
        assert_eq!(indices_below(2, &Idx::from_slice(&[1, 2]).unwrap()).len(), 6);
    }

    #[test]
    fn antilex() {
        let a = Idx::from_slice(&[5, 0]).unwrap();
        let b = Idx::from_slice(&[0, 1]).unwrap();
        assert_eq!(a.cmp_antilex(&b), Ordering::Less);
    }
}
