use std::collections::HashMap;

use super::algebra::{render, BasisLabel, FinAlgebra, LinMap};
use super::tensor::{Key, Tensor};
use crate::error::{Error, Result};
use crate::exactnum::CycNum;

/// A subspace spanned by a subset of the basis of a larger algebra.
///
/// Used for subalgebras whose basis is a subset of the ambient basis
/// (`A(H,s) ⊂ H`) and for identifications that send basis vectors to basis
/// vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SubBasis {
    to_big: Vec<u32>,
    from_big: HashMap<u32, u32>,
}

impl SubBasis {
    pub fn new(to_big: Vec<u32>) -> Self {
        let from_big = to_big.iter().enumerate().map(|(i, &b)| (b, i as u32)).collect();
        SubBasis { to_big, from_big }
    }

    pub fn dim(&self) -> usize {
        self.to_big.len()
    }

    pub fn big_index(&self, i: usize) -> usize {
        self.to_big[i] as usize
    }

    pub fn small_index(&self, big: usize) -> Option<usize> {
        self.from_big.get(&(big as u32)).map(|&i| i as usize)
    }

    /// Image of a small tensor in the ambient tensor power.
    pub fn push(&self, t: &Tensor) -> Tensor {
        let mut out = Tensor::zero(t.arity());
        for (k, c) in t.terms() {
            out.add_term(k.iter().map(|&i| self.to_big[i as usize]).collect(), c.clone());
        }
        out
    }

    /// Preimage of an ambient tensor, or `None` when some term leaves the
    /// subspace.
    pub fn pull(&self, t: &Tensor) -> Option<Tensor> {
        let mut out = Tensor::zero(t.arity());
        for (k, c) in t.terms() {
            let key: Option<Key> = k.iter().map(|i| self.from_big.get(i).copied()).collect();
            out.add_term(key?, c.clone());
        }
        Some(out)
    }

    /// Like [`pull`](Self::pull), with a closure error naming the element.
    pub fn pull_or_err(&self, big: &[&FinAlgebra], what: &str, t: &Tensor) -> Result<Tensor> {
        self.pull(t).ok_or_else(|| Error::Closure { what: what.to_string(), image: render(big, t) })
    }

    pub fn as_linmap(&self, order: u32) -> LinMap {
        LinMap::new(1, self.to_big.iter().map(|&b| Tensor::monomial(&[b], CycNum::one(order))).collect())
    }

    /// The subalgebra structure, failing if the span is not closed.
    pub fn restrict_algebra(&self, big: &FinAlgebra, name: &str, labels: Vec<BasisLabel>) -> Result<FinAlgebra> {
        assert_eq!(labels.len(), self.dim());
        let d = self.dim();
        let mut table = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let p = Tensor::from_vec(big.product(self.big_index(i), self.big_index(j)));
                let what = format!("{}·{}", big.label(self.big_index(i)), big.label(self.big_index(j)));
                table.push(self.pull_or_err(&[big], &what, &p)?.as_vec());
            }
        }
        let unit = self.pull_or_err(&[big], "unit", &big.unit())?.as_vec();
        Ok(FinAlgebra::new(name, big.order(), labels, table, unit))
    }

    /// Restricts a map on the ambient algebra whose image lies in the
    /// subspace (in every output slot).
    pub fn restrict_map(&self, big: &FinAlgebra, what: &str, map: &LinMap) -> Result<LinMap> {
        let algs = vec![big; map.out_arity()];
        let images = (0..self.dim())
            .map(|i| {
                let img = map.image(self.big_index(i));
                if map.out_arity() == 0 {
                    return Ok(img.clone());
                }
                self.pull_or_err(&algs, &format!("{what}({})", big.label(self.big_index(i))), img)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(LinMap::new(map.out_arity(), images))
    }
}
