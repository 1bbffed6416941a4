//! Subspaces given by an arbitrary (not necessarily coordinate) basis.

use std::collections::BTreeMap;

use super::algebra::{render, BasisLabel, FinAlgebra, LinMap};
use super::linalg::{Echelon, Insert, SparseVec};
use super::tensor::{Key, Tensor};
use crate::error::{Error, Result};
use crate::exactnum::CycNum;

/// A subspace of a larger space with a chosen basis `vecs`.
///
/// Small index `i` stands for `vecs[i]`. Coordinates of an ambient vector
/// are found by exact elimination.
#[derive(Clone, Debug)]
pub struct Frame {
    vecs: Vec<Tensor>,
    ech: Echelon<u32>,
}

fn as_sparse(t: &Tensor) -> SparseVec<u32> {
    t.terms().iter().map(|(k, c)| (k[0], c.clone())).collect()
}

impl Frame {
    /// Fails when the vectors are linearly dependent.
    pub fn new(vecs: Vec<Tensor>, order: u32) -> Result<Self> {
        let mut ech = Echelon::new(order);
        for (i, v) in vecs.iter().enumerate() {
            if let Insert::Dependent(_) = ech.insert(as_sparse(v)) {
                return Err(Error::Precondition(format!("frame vector {i} is dependent")));
            }
        }
        Ok(Frame { vecs, ech })
    }

    /// The frame of the coordinate vectors with the given ambient indices.
    pub fn coordinate(indices: &[u32], order: u32) -> Self {
        let vecs = indices.iter().map(|&i| Tensor::monomial(&[i], CycNum::one(order))).collect();
        Frame::new(vecs, order).expect("distinct coordinate vectors")
    }

    pub fn dim(&self) -> usize {
        self.vecs.len()
    }

    pub fn vector(&self, i: usize) -> &Tensor {
        &self.vecs[i]
    }

    pub fn vectors(&self) -> &[Tensor] {
        &self.vecs
    }

    /// Coordinates of an arity-1 ambient element, or `None` outside the span.
    pub fn coords(&self, t: &Tensor) -> Option<Tensor> {
        let comb = self.ech.solve(&as_sparse(t))?;
        let mut out = Tensor::zero(1);
        for (i, c) in comb {
            out.add_term([i as u32].into_iter().collect(), c);
        }
        Some(out)
    }

    /// Ambient image of a small element placed in slot `slot`.
    pub fn push_slot(&self, t: &Tensor, slot: usize) -> Tensor {
        LinMap::new(1, self.vecs.clone()).apply_slot(t, slot)
    }

    pub fn push(&self, t: &Tensor) -> Tensor {
        let mut out = t.clone();
        for s in 0..t.arity() {
            out = self.push_slot(&out, s);
        }
        out
    }

    /// Rewrites slot `slot` of `t` in frame coordinates, or `None` when some
    /// slice along that slot leaves the span.
    pub fn pull_slot(&self, t: &Tensor, slot: usize) -> Option<Tensor> {
        let mut slices: BTreeMap<Key, Tensor> = BTreeMap::new();
        for (k, c) in t.terms() {
            let mut rest = k.clone();
            let i = rest.remove(slot);
            slices.entry(rest).or_insert_with(|| Tensor::zero(1)).add_term([i].into_iter().collect(), c.clone());
        }
        let mut out = Tensor::zero(t.arity());
        for (rest, v) in slices {
            for (ik, c) in self.coords(&v)?.terms() {
                let mut key = rest.clone();
                key.insert(slot, ik[0]);
                out.add_term(key, c.clone());
            }
        }
        Some(out)
    }

    pub fn pull(&self, t: &Tensor) -> Option<Tensor> {
        let mut out = t.clone();
        for s in 0..t.arity() {
            out = self.pull_slot(&out, s)?;
        }
        Some(out)
    }

    pub fn pull_or_err(&self, big: &[&FinAlgebra], what: &str, t: &Tensor) -> Result<Tensor> {
        self.pull(t).ok_or_else(|| Error::Closure { what: what.to_string(), image: render(big, t) })
    }

    /// The subalgebra spanned by the frame, or a closure error naming the
    /// first product that leaves it.
    pub fn restrict_algebra(&self, big: &FinAlgebra, name: &str, labels: Vec<BasisLabel>) -> Result<FinAlgebra> {
        let d = self.dim();
        let mut table = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let p = big.mul(&self.vecs[i], &self.vecs[j]);
                let what = format!("{} · {}", labels[i], labels[j]);
                table.push(self.pull_or_err(&[big], &what, &p)?.as_vec());
            }
        }
        let unit = self.pull_or_err(&[big], "1", &big.unit())?.as_vec();
        Ok(FinAlgebra::new(name, big.order(), labels, table, unit))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: i64) -> CycNum {
        CycNum::from_int(4, v)
    }

    #[test]
    fn coordinates_in_a_skew_frame() {
        let v0 = Tensor::from_vec(&[(0, c(1)), (1, c(1))]);
        let v1 = Tensor::from_vec(&[(1, c(1)), (2, c(-1))]);
        let f = Frame::new(vec![v0.clone(), v1.clone()], 4).unwrap();
        let x = &v0.scaled(&c(3)) - &v1;
        assert_eq!(f.coords(&x).unwrap(), Tensor::from_vec(&[(0, c(3)), (1, c(-1))]));
        assert!(f.coords(&Tensor::from_vec(&[(0, c(1))])).is_none());
        let two = v0.tensor(&v1);
        assert_eq!(f.pull(&two).unwrap(), Tensor::monomial(&[0, 1], c(1)));
        assert_eq!(f.push(&Tensor::monomial(&[0, 1], c(1))), two);
    }
}
