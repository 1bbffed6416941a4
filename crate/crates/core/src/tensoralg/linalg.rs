//! Sparse exact linear algebra: a semi-echelon basis with optional tracking
//! of how each stored row was combined from the inserted vectors.

use std::collections::BTreeMap;
use std::ops::Bound;

use crate::exactnum::CycNum;

pub type SparseVec<K> = BTreeMap<K, CycNum>;

/// `acc += c * v`, dropping entries that cancel.
pub fn axpy<K: Ord + Clone>(acc: &mut SparseVec<K>, c: &CycNum, v: &SparseVec<K>) {
    if c.is_zero() {
        return;
    }
    for (k, x) in v {
        add_entry(acc, k.clone(), c * x);
    }
}

pub fn add_entry<K: Ord>(acc: &mut SparseVec<K>, k: K, c: CycNum) {
    if c.is_zero() {
        return;
    }
    match acc.entry(k) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get() + &c;
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

pub fn scale<K: Ord + Clone>(v: &SparseVec<K>, c: &CycNum) -> SparseVec<K> {
    if c.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (k.clone(), c * x)).collect()
}

#[derive(Clone, Debug)]
struct Row<K> {
    vec: SparseVec<K>,
    comb: SparseVec<usize>,
}

/// Result of inserting a vector into an [`Echelon`].
#[derive(Clone, Debug)]
pub enum Insert<K> {
    /// The vector was independent; its pivot key is returned.
    New(K),
    /// The vector was dependent; the combination of inserted ids summing to
    /// zero is returned (the new vector's id carries coefficient 1).
    Dependent(SparseVec<usize>),
}

/// A semi-echelon basis: every row has a distinct leading key, normalised to 1.
#[derive(Clone, Debug)]
pub struct Echelon<K> {
    rows: BTreeMap<K, Row<K>>,
    inserted: usize,
    order: u32,
}

impl<K: Ord + Clone> Echelon<K> {
    /// `order` is the cyclotomic order used for freshly created constants.
    pub fn new(order: u32) -> Self {
        Echelon { rows: BTreeMap::new(), inserted: 0, order }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn basis(&self) -> impl Iterator<Item = &SparseVec<K>> {
        self.rows.values().map(|r| &r.vec)
    }

    fn reduce_with(&self, v: &mut SparseVec<K>, comb: &mut SparseVec<usize>) {
        let mut cursor: Option<K> = None;
        loop {
            let lower = match &cursor {
                None => Bound::Unbounded,
                Some(k) => Bound::Excluded(k.clone()),
            };
            let hit = v
                .range((lower, Bound::Unbounded))
                .find(|(k, _)| self.rows.contains_key(*k))
                .map(|(k, c)| (k.clone(), c.clone()));
            let Some((k, c)) = hit else { break };
            let row = &self.rows[&k];
            let neg = -&c;
            axpy(v, &neg, &row.vec);
            axpy(comb, &neg, &row.comb);
            cursor = Some(k);
        }
    }

    /// Remainder of `v` after reduction against the stored rows.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut v = v.clone();
        let mut comb = SparseVec::new();
        self.reduce_with(&mut v, &mut comb);
        v
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    pub fn insert(&mut self, v: SparseVec<K>) -> Insert<K> {
        let id = self.inserted;
        self.inserted += 1;
        let mut v = v;
        let mut comb = SparseVec::new();
        comb.insert(id, CycNum::one(self.order));
        self.reduce_with(&mut v, &mut comb);
        match v.keys().next().cloned() {
            None => Insert::Dependent(comb),
            Some(p) => {
                let inv = v[&p].invert().expect("nonzero pivot");
                let vec = scale(&v, &inv);
                let comb = scale(&comb, &inv);
                self.rows.insert(p.clone(), Row { vec, comb });
                Insert::New(p)
            }
        }
    }

    /// Expresses `v` as a combination of the inserted vectors, if it lies in
    /// their span.
    pub fn solve(&self, v: &SparseVec<K>) -> Option<SparseVec<usize>> {
        let mut v = v.clone();
        let mut comb = SparseVec::new();
        self.reduce_with(&mut v, &mut comb);
        if v.is_empty() {
            Some(comb.into_iter().map(|(k, c)| (k, -c)).collect())
        } else {
            None
        }
    }
}

/// Kernel of the linear map sending the `i`-th unit vector to `images[i]`.
///
/// Returns a basis of the kernel, each vector expressed over the source
/// indices `0..images.len()`.
pub fn kernel<K: Ord + Clone>(images: &[SparseVec<K>], order: u32) -> Vec<SparseVec<usize>> {
    let mut ech = Echelon::new(order);
    let mut out = Vec::new();
    for img in images {
        if let Insert::Dependent(c) = ech.insert(img.clone()) {
            out.push(c);
        }
    }
    out
}

/// Rank of a family of sparse vectors.
pub fn rank<K: Ord + Clone>(vectors: &[SparseVec<K>], order: u32) -> usize {
    let mut ech = Echelon::new(order);
    for v in vectors {
        ech.insert(v.clone());
    }
    ech.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(entries: &[(u32, i64)]) -> SparseVec<u32> {
        entries.iter().map(|&(k, c)| (k, CycNum::from_int(1, c))).filter(|(_, c)| !c.is_zero()).collect()
    }

    #[test]
    fn kernel_and_rank() {
        let imgs = vec![v(&[(0, 1), (1, 2)]), v(&[(0, 2), (1, 4)]), v(&[(2, 1)])];
        assert_eq!(rank(&imgs, 1), 2);
        let ker = kernel(&imgs, 1);
        assert_eq!(ker.len(), 1);
        // 2*e0 - e1 is in the kernel
        let k = &ker[0];
        assert_eq!(k[&1], CycNum::one(1));
        assert_eq!(k[&0], CycNum::from_int(1, -2));
    }

    #[test]
    fn solve_expresses_in_span() {
        let mut e = Echelon::new(1);
        e.insert(v(&[(0, 1), (1, 1)]));
        e.insert(v(&[(1, 1), (2, 1)]));
        let target = v(&[(0, 1), (1, 2), (2, 1)]);
        let c = e.solve(&target).unwrap();
        assert_eq!(c[&0], CycNum::one(1));
        assert_eq!(c[&1], CycNum::one(1));
        assert!(e.solve(&v(&[(3, 1)])).is_none());
    }
}
