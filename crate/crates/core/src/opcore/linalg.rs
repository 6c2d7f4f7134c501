//! Sparse row echelon forms over exact scalars.

use std::collections::BTreeMap;

use crate::coeffs::{Idx, Scalar};
use crate::error::Result;
use crate::opcore::operator::Operator;

pub type Row<K> = BTreeMap<K, Scalar>;

/// Combination of the originally inserted rows, keyed by insertion id.
pub type Comb = BTreeMap<usize, Scalar>;

fn axpy<K: Ord + Clone>(row: &mut Row<K>, c: &Scalar, other: &Row<K>) {
    for (k, v) in other {
        let t = c * v;
        match row.get_mut(k) {
            Some(x) => {
                *x = &*x + &t;
                if x.is_zero() {
                    row.remove(k);
                }
            }
            None => {
                row.insert(k.clone(), t);
            }
        }
    }
}

/// Echelon basis with pivot = largest key of each row, pivot coefficient 1.
#[derive(Clone, Debug, Default)]
pub struct Echelon<K: Ord + Clone> {
    rows: BTreeMap<K, (Row<K>, Comb)>,
    inserted: usize,
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Echelon { rows: BTreeMap::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Eliminate every pivot key from `row`; `comb` tracks row = input + sum comb[id] * original[id].
    pub fn reduce(&self, row: &mut Row<K>, comb: &mut Comb) {
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => row.keys().next_back().cloned(),
                Some(c) => row.range(..c.clone()).next_back().map(|(k, _)| k.clone()),
            };
            let Some(k) = next else { break };
            if let Some((pr, pc)) = self.rows.get(&k) {
                let c = -row[&k].clone();
                axpy(row, &c, pr);
                axpy(comb, &c, pc);
            }
            cursor = Some(k);
        }
    }

    /// Insert a row; returns its new pivot when it is independent of the current span.
    pub fn insert(&mut self, mut row: Row<K>) -> Option<K> {
        let id = self.inserted;
        self.inserted += 1;
        let mut comb = Comb::new();
        comb.insert(id, Scalar::one());
        self.reduce(&mut row, &mut comb);
        let (k, lead) = row.iter().next_back().map(|(k, v)| (k.clone(), v.clone()))?;
        let inv = lead.inv().expect("nonzero pivot");
        for v in row.values_mut() {
            *v = &*v * &inv;
        }
        for v in comb.values_mut() {
            *v = &*v * &inv;
        }
        self.rows.insert(k.clone(), (row, comb));
        Some(k)
    }

    /// Write `target` as a combination of inserted rows, if it lies in the span.
    pub fn express(&self, target: &Row<K>) -> Option<Comb> {
        let mut row = target.clone();
        let mut comb = Comb::new();
        self.reduce(&mut row, &mut comb);
        if !row.is_empty() {
            return None;
        }
        Some(comb.into_iter().map(|(k, v)| (k, -v)).collect())
    }

    pub fn contains(&self, target: &Row<K>) -> bool {
        let mut row = target.clone();
        let mut comb = Comb::new();
        self.reduce(&mut row, &mut comb);
        row.is_empty()
    }

    /// Reduced rows keyed by pivot: every pivot column appears in exactly one row.
    pub fn rref(&self) -> BTreeMap<K, (Row<K>, Comb)> {
        let mut done: BTreeMap<K, (Row<K>, Comb)> = BTreeMap::new();
        for (k, (r, c)) in &self.rows {
            let mut row = r.clone();
            let mut comb = c.clone();
            let tmp = Echelon { rows: done.clone(), inserted: 0 };
            // the pivot itself is not a key of `done`, so only lower entries are cleared
            tmp.reduce(&mut row, &mut comb);
            done.insert(k.clone(), (row, comb));
        }
        done
    }

    /// Kernel of the map sending unknown u to column u of the inserted equations.
    pub fn nullspace(&self, unknowns: &[K]) -> Vec<Row<K>> {
        let red = self.rref();
        let mut out = Vec::new();
        for f in unknowns {
            if red.contains_key(f) {
                continue;
            }
            let mut v = Row::new();
            v.insert(f.clone(), Scalar::one());
            for (p, (row, _)) in &red {
                if let Some(c) = row.get(f) {
                    v.insert(p.clone(), -c.clone());
                }
            }
            out.push(v);
        }
        out
    }
}

/// Key for constant-coefficient monomials: ord first, then anti-lexicographic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GradedKey(pub Idx);

impl Ord for GradedKey {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.total().cmp(&o.0.total()).then_with(|| self.0.cmp_antilex(&o.0))
    }
}

impl PartialOrd for GradedKey {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// Coefficient vector of a constant-coefficient operator.
pub fn velem_row(p: &Operator) -> Row<GradedKey> {
    p.terms().iter().map(|(m, c)| (GradedKey(m.d), c.clone())).collect()
}

/// Constant-coefficient operator from a coefficient vector.
pub fn row_to_velem(n: usize, row: &Row<GradedKey>, tail: i64) -> Operator {
    use crate::opcore::kind::Kind;
    use crate::opcore::operator::Mono;
    use crate::opcore::precision::Precision;
    let ob = row.keys().map(|k| k.0.total()).max().unwrap_or(0);
    let db = row.keys().map(|k| k.0.get(n - 1)).max().unwrap_or(0);
    Operator::from_terms(
        n,
        Kind::VElem,
        Precision { x_deg: crate::coeffs::INF, dn_tail: tail, total: crate::coeffs::INF },
        ob,
        Some(db),
        row.iter().map(|(k, c)| (Mono::new(Idx::zero(), k.0), c.clone())),
    )
}

/// Rank of a family of constant-coefficient operators.
pub fn rank_of(ops: &[Operator]) -> Result<usize> {
    let mut e = Echelon::new();
    for o in ops {
        e.insert(velem_row(o));
    }
    Ok(e.rank())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[(u32, i64)]) -> Row<u32> {
        v.iter().map(|(k, c)| (*k, Scalar::from_i64(*c))).collect()
    }

    #[test]
    fn rank_and_express() {
        let mut e = Echelon::new();
        assert!(e.insert(row(&[(0, 1), (1, 1)])).is_some());
        assert!(e.insert(row(&[(1, 1), (2, 1)])).is_some());
        assert!(e.insert(row(&[(0, 1), (2, 1)])).is_some());
        assert!(e.insert(row(&[(0, 2), (1, 2)])).is_none());
        assert_eq!(e.rank(), 3);
        let c = e.express(&row(&[(0, 1), (1, 2), (2, 1)])).unwrap();
        // x0 + 2 x1 + x2 = r0 + r1
        assert_eq!(c.get(&0).cloned().unwrap_or_else(Scalar::zero), Scalar::one());
        assert_eq!(c.get(&1).cloned().unwrap_or_else(Scalar::zero), Scalar::one());
        assert!(c.get(&2).map(|s| s.is_zero()).unwrap_or(true));
    }

    #[test]
    fn nullspace_of_single_equation() {
        let mut e = Echelon::new();
        e.insert(row(&[(0, 1), (1, -1)]));
        let ns = e.nullspace(&[0, 1, 2]);
        assert_eq!(ns.len(), 2);
    }
}
