use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use super::linalg::{add_entry, SparseVec};
use crate::exactnum::CycNum;

/// Multi-index into a tensor power of labeled bases.
pub type Key = SmallVec<[u32; 4]>;

/// A sparse element of `B₁ ⊗ … ⊗ B_r` for labeled bases `B_i`.
///
/// Arity 0 tensors are scalars, arity 1 tensors are ordinary elements.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    arity: usize,
    terms: SparseVec<Key>,
}

impl Tensor {
    pub fn zero(arity: usize) -> Self {
        Tensor { arity, terms: BTreeMap::new() }
    }

    pub fn scalar(c: CycNum) -> Self {
        let mut t = Tensor::zero(0);
        t.add_term(Key::new(), c);
        t
    }

    /// The pure tensor of basis vectors `key` with coefficient `c`.
    pub fn monomial(key: &[u32], c: CycNum) -> Self {
        let mut t = Tensor::zero(key.len());
        t.add_term(Key::from_slice(key), c);
        t
    }

    /// Arity-1 element from sparse coordinates.
    pub fn from_vec(v: &[(u32, CycNum)]) -> Self {
        let mut t = Tensor::zero(1);
        for (k, c) in v {
            t.add_term(Key::from_slice(&[*k]), c.clone());
        }
        t
    }

    pub fn from_terms(arity: usize, terms: SparseVec<Key>) -> Self {
        debug_assert!(terms.keys().all(|k| k.len() == arity));
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Tensor { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &SparseVec<Key> {
        &self.terms
    }

    pub fn into_terms(self) -> SparseVec<Key> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &[u32]) -> Option<&CycNum> {
        self.terms.get(key)
    }

    pub fn add_term(&mut self, key: Key, c: CycNum) {
        debug_assert_eq!(key.len(), self.arity);
        add_entry(&mut self.terms, key, c);
    }

    pub fn add_scaled(&mut self, c: &CycNum, other: &Tensor) {
        debug_assert_eq!(self.arity, other.arity);
        if c.is_zero() {
            return;
        }
        for (k, x) in &other.terms {
            add_entry(&mut self.terms, k.clone(), c * x);
        }
    }

    pub fn scaled(&self, c: &CycNum) -> Tensor {
        let mut t = Tensor::zero(self.arity);
        t.add_scaled(c, self);
        t
    }

    /// The scalar value of an arity-0 tensor.
    pub fn scalar_value(&self, order: u32) -> CycNum {
        debug_assert_eq!(self.arity, 0);
        self.terms.values().next().cloned().unwrap_or_else(|| CycNum::zero(order))
    }

    /// Coordinates of an arity-1 tensor.
    pub fn as_vec(&self) -> Vec<(u32, CycNum)> {
        debug_assert_eq!(self.arity, 1);
        self.terms.iter().map(|(k, c)| (k[0], c.clone())).collect()
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Tensor) -> Tensor {
        let mut out = Tensor::zero(self.arity + other.arity);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut k = ka.clone();
                k.extend_from_slice(kb);
                out.add_term(k, ca * cb);
            }
        }
        out
    }

    /// Reorders slots: slot `i` of the result is slot `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.arity);
        let terms = self
            .terms
            .iter()
            .map(|(k, c)| (perm.iter().map(|&p| k[p]).collect::<Key>(), c.clone()))
            .collect();
        Tensor { arity: self.arity, terms }
    }
}

impl std::ops::Add<&Tensor> for &Tensor {
    type Output = Tensor;
    fn add(self, rhs: &Tensor) -> Tensor {
        let mut t = self.clone();
        for (k, c) in &rhs.terms {
            t.add_term(k.clone(), c.clone());
        }
        t
    }
}

impl std::ops::Sub<&Tensor> for &Tensor {
    type Output = Tensor;
    fn sub(self, rhs: &Tensor) -> Tensor {
        let mut t = self.clone();
        for (k, c) in &rhs.terms {
            t.add_term(k.clone(), -c);
        }
        t
    }
}

impl std::ops::Neg for &Tensor {
    type Output = Tensor;
    fn neg(self) -> Tensor {
        Tensor { arity: self.arity, terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tensor<{}>{{", self.arity)?;
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:?}: {}", k.as_slice(), c)?;
        }
        write!(f, "}}")
    }
}
