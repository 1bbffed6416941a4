//! Right simplicity through the operator algebra `E ⊆ End(K)` generated by
//! right multiplications `R_k` and coaction components `L_f = (f⊗id)λ`.
//!
//! A subspace is a costable right ideal exactly when it is stable under all
//! generators, so `K` is right simple over the algebraic closure iff
//! `E = End(K)`. When a generator or a product of two generators has rank
//! one, say `u⊗φ`, then `E = End(K)` iff `E·u = K` and `φ·E = K*`; both are
//! spinning computations. Otherwise the closure is computed directly.

use serde::Serialize;

use super::ComodAlgebra;
use crate::exactnum::CycNum;
use crate::tensoralg::{linalg, Echelon, Insert, LinMap, SparseVec, Tensor};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum Certificate {
    /// `word` has rank one, its image spins to `K` and its functional
    /// cospins to `K*`, so `dim E = (dim K)²`.
    RankOne { word: String, dim_e: usize },
    /// `dim E` found by explicit closure.
    Closure { dim_e: usize },
    /// A proper nonzero subspace stable under every generator, given by a
    /// basis over the basis of `K`.
    InvariantSubspace { basis: Vec<Vec<(u32, String)>> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Simplicity {
    pub simple: bool,
    pub dim: usize,
    pub certificate: Certificate,
}

type Vector = SparseVec<u32>;

/// An operator on `K` stored by columns.
#[derive(Clone)]
struct Op {
    name: String,
    cols: Vec<Vector>,
}

impl Op {
    fn apply(&self, v: &Vector) -> Vector {
        let mut out = Vector::new();
        for (i, c) in v {
            linalg::axpy(&mut out, c, &self.cols[*i as usize]);
        }
        out
    }

    fn then(&self, after: &Op) -> Op {
        Op { name: format!("{}·{}", after.name, self.name), cols: self.cols.iter().map(|c| after.apply(c)).collect() }
    }

    fn transpose(&self) -> Op {
        let mut cols = vec![Vector::new(); self.cols.len()];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, c) in col {
                cols[*i as usize].insert(j as u32, c.clone());
            }
        }
        Op { name: format!("{}ᵀ", self.name), cols }
    }

    fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// `Some((u, φ))` when the operator equals `u⊗φ`.
    fn rank_one(&self, order: u32) -> Option<(Vector, Vector)> {
        let (j0, u) = self.cols.iter().enumerate().find(|(_, c)| !c.is_empty())?;
        let (&p, pc) = u.iter().next()?;
        let pinv = pc.invert().ok()?;
        let mut phi = Vector::new();
        for (j, col) in self.cols.iter().enumerate().skip(j0) {
            if col.is_empty() {
                continue;
            }
            let s = col.get(&p).map(|c| c * &pinv).unwrap_or_else(|| CycNum::zero(order));
            if s.is_zero() || linalg::scale(u, &s) != *col {
                return None;
            }
            phi.insert(j as u32, s);
        }
        Some((u.clone(), phi))
    }
}

/// `R_k` for every basis `k` of `K`, then `L_f` for every dual basis vector
/// `f` of `A`, in index order.
fn generators(k: &ComodAlgebra) -> Vec<Op> {
    let alg = &*k.alg;
    let d = alg.dim();
    let mut ops = Vec::new();
    for j in 0..d {
        let cols = (0..d).map(|i| alg.product(i, j).iter().map(|(x, c)| (*x, c.clone())).collect()).collect();
        ops.push(Op { name: format!("R[{}]", alg.label(j)), cols });
    }
    let da = k.over.dim();
    let mut lcols = vec![vec![Vector::new(); d]; da];
    for i in 0..d {
        for (key, c) in k.coaction.image(i).terms() {
            lcols[key[0] as usize][i].insert(key[1], c.clone());
        }
    }
    for (f, cols) in lcols.into_iter().enumerate() {
        let op = Op { name: format!("L[{}*]", k.over.alg.label(f)), cols };
        if !op.is_zero() {
            ops.push(op);
        }
    }
    ops
}

/// Smallest subspace containing `seeds` and stable under `ops`.
fn spin(seeds: &[Vector], ops: &[Op], order: u32) -> Vec<Vector> {
    let mut ech = Echelon::new(order);
    let mut basis = Vec::new();
    let mut queue: Vec<Vector> = Vec::new();
    for s in seeds {
        if let Insert::New(_) = ech.insert(s.clone()) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        for op in ops {
            let w = ech.reduce(&op.apply(&v));
            if !w.is_empty() {
                ech.insert(w.clone());
                queue.push(w);
            }
        }
        basis.push(v);
    }
    basis
}

fn render_basis(vs: &[Vector]) -> Vec<Vec<(u32, String)>> {
    vs.iter().map(|v| v.iter().map(|(i, c)| (*i, c.to_string())).collect()).collect()
}

/// Annihilator in `K` of a family of functionals.
fn annihilator(funcs: &[Vector], d: usize, order: u32) -> Vec<Vector> {
    let images: Vec<Vector> = (0..d)
        .map(|i| funcs.iter().enumerate().filter_map(|(r, f)| f.get(&(i as u32)).map(|c| (r as u32, c.clone()))).collect())
        .collect();
    linalg::kernel(&images, order).into_iter().map(|v| v.into_iter().map(|(i, c)| (i as u32, c)).collect()).collect()
}

/// Decides right simplicity with a certificate.
pub fn is_right_simple(k: &ComodAlgebra) -> Simplicity {
    let d = k.dim();
    let order = k.order();
    let ops = generators(k);
    let found = ops.iter().find_map(|op| op.rank_one(order).map(|r| (op.name.clone(), r))).or_else(|| {
        ops.iter().find_map(|a| ops.iter().find_map(|b| {
            let p = a.then(b);
            p.rank_one(order).map(|r| (p.name.clone(), r))
        }))
    });
    let Some((word, (u, phi))) = found else {
        let dim_e = operator_closure_dim(k);
        if dim_e == d * d {
            return Simplicity { simple: true, dim: d, certificate: Certificate::Closure { dim_e } };
        }
        let sub = (0..d)
            .map(|i| spin(&[[(i as u32, CycNum::one(order))].into_iter().collect()], &ops, order))
            .find(|s| s.len() < d)
            .unwrap_or_default();
        return Simplicity { simple: false, dim: d, certificate: Certificate::InvariantSubspace { basis: render_basis(&sub) } };
    };
    let span = spin(&[u], &ops, order);
    if span.len() < d {
        return Simplicity {
            simple: false,
            dim: d,
            certificate: Certificate::InvariantSubspace { basis: render_basis(&span) },
        };
    }
    let tops: Vec<Op> = ops.iter().map(Op::transpose).collect();
    let cospan = spin(&[phi], &tops, order);
    if cospan.len() < d {
        let ann = annihilator(&cospan, d, order);
        return Simplicity { simple: false, dim: d, certificate: Certificate::InvariantSubspace { basis: render_basis(&ann) } };
    }
    Simplicity { simple: true, dim: d, certificate: Certificate::RankOne { word, dim_e: d * d } }
}

/// `dim E` by explicit closure of the identity under left multiplication by
/// the generators. Cost grows like `(dim K)⁴`; meant for small `K`.
pub fn operator_closure_dim(k: &ComodAlgebra) -> usize {
    let d = k.dim();
    let order = k.order();
    let ops = generators(k);
    let flat = |op: &Op| -> SparseVec<(u32, u32)> {
        op.cols.iter().enumerate().flat_map(|(j, c)| c.iter().map(move |(i, x)| ((j as u32, *i), x.clone()))).collect()
    };
    let id = Op { name: "1".into(), cols: (0..d).map(|i| [(i as u32, CycNum::one(order))].into_iter().collect()).collect() };
    let mut ech = Echelon::new(order);
    ech.insert(flat(&id));
    let mut queue = vec![id];
    while let Some(m) = queue.pop() {
        for g in &ops {
            let p = m.then(g);
            if let Insert::New(_) = ech.insert(flat(&p)) {
                queue.push(p);
            }
        }
    }
    ech.rank()
}

/// The coaction components `L_f` as maps, for callers that need them.
pub fn coaction_components(k: &ComodAlgebra) -> Vec<LinMap> {
    let d = k.dim();
    (0..k.over.dim())
        .map(|f| {
            let images = (0..d)
                .map(|i| {
                    let mut t = Tensor::zero(1);
                    for (key, c) in k.coaction.image(i).terms() {
                        if key[0] as usize == f {
                            t.add_term([key[1]].into_iter().collect(), c.clone());
                        }
                    }
                    t
                })
                .collect();
            LinMap::new(1, images)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::quasihopf::group_hopf;
    use crate::tensoralg::{BasisLabel, FinAlgebra, SubBasis};

    fn c(n: u32, v: i64) -> CycNum {
        CycNum::from_int(n, v)
    }

    /// `kC₂ ⊂ kC₄` with `λ(e_f) = f⊗e_f`.
    fn kc2_in_kc4() -> ComodAlgebra {
        let a = group_hopf(4, "g", 4);
        let sub = SubBasis::new(vec![0, 2]);
        let labels = vec![BasisLabel::Named("e_1".into()), BasisLabel::Named("e_g2".into())];
        let alg = sub.restrict_algebra(&a.base.alg, "kC2", labels).unwrap();
        let coaction = LinMap::new(2, vec![Tensor::monomial(&[0, 0], c(4, 1)), Tensor::monomial(&[2, 1], c(4, 1))]);
        ComodAlgebra::with_trivial_associator(a.base.clone(), Arc::new(alg), coaction)
    }

    /// `k[x]/(x²)` with `λ(x) = 1⊗x` over `kC₂`.
    fn dual_numbers() -> ComodAlgebra {
        let a = group_hopf(2, "g", 2);
        let labels = vec![BasisLabel::Named("1".into()), BasisLabel::Named("x".into())];
        let table = vec![vec![(0, c(2, 1))], vec![(1, c(2, 1))], vec![(1, c(2, 1))], vec![]];
        let alg = FinAlgebra::new("k[x]/(x²)", 2, labels, table, vec![(0, c(2, 1))]);
        let coaction = LinMap::new(2, vec![Tensor::monomial(&[0, 0], c(2, 1)), Tensor::monomial(&[0, 1], c(2, 1))]);
        ComodAlgebra::with_trivial_associator(a.base.clone(), Arc::new(alg), coaction)
    }

    #[test]
    fn group_subalgebra_is_simple() {
        let k = kc2_in_kc4();
        let s = is_right_simple(&k);
        assert!(s.simple);
        assert!(matches!(s.certificate, Certificate::RankOne { dim_e: 4, .. }));
        assert_eq!(operator_closure_dim(&k), 4);
    }

    #[test]
    fn dual_numbers_with_trivial_coaction_are_not_simple() {
        let k = dual_numbers();
        let s = is_right_simple(&k);
        assert!(!s.simple);
        match s.certificate {
            Certificate::InvariantSubspace { basis } => {
                assert_eq!(basis.len(), 1);
                assert_eq!(basis[0][0].0, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(operator_closure_dim(&k) < 4);
    }
}
