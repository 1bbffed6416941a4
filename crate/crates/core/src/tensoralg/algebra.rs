use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use super::linalg::{Echelon, Insert, SparseVec};
use super::tensor::{Key, Tensor};
use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::report::{CheckRecord, VerificationReport};

/// Label of a basis vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BasisLabel {
    /// `symbol^exp` in a cyclic group algebra.
    Group { symbol: String, exp: u32 },
    /// A PBW monomial `var_1^{e_1} … var_θ^{e_θ} · symbol^group`.
    Pbw { var: String, exps: Vec<u32>, symbol: String, group: u32 },
    /// `x # h^i` in a crossed product.
    Smash(Box<BasisLabel>, u32),
    Tensor(Vec<BasisLabel>),
    Named(String),
}

fn power(f: &mut fmt::Formatter<'_>, base: &str, e: u32) -> fmt::Result {
    match e {
        0 => Ok(()),
        1 => write!(f, "{base}"),
        _ => write!(f, "{base}^{e}"),
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Group { symbol, exp } => {
                if *exp == 0 {
                    write!(f, "1")
                } else {
                    power(f, symbol, *exp)
                }
            }
            BasisLabel::Pbw { var, exps, symbol, group } => {
                if *group == 0 && exps.iter().all(|&e| e == 0) {
                    return write!(f, "1");
                }
                for (i, &e) in exps.iter().enumerate() {
                    power(f, &format!("{var}{}", i + 1), e)?;
                }
                power(f, symbol, *group)
            }
            BasisLabel::Smash(inner, i) => write!(f, "{inner}#h^{i}"),
            BasisLabel::Tensor(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "⊗")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            BasisLabel::Named(s) => write!(f, "{s}"),
        }
    }
}

/// A finite-dimensional unital algebra given by sparse structure constants.
#[derive(Clone, PartialEq)]
pub struct FinAlgebra {
    name: String,
    order: u32,
    labels: Vec<BasisLabel>,
    table: Vec<Vec<(u32, CycNum)>>,
    unit: Vec<(u32, CycNum)>,
}

impl fmt::Debug for FinAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FinAlgebra({}, dim {})", self.name, self.dim())
    }
}

impl FinAlgebra {
    /// `table[i * dim + j]` holds the coordinates of `x_i x_j`.
    pub fn new(
        name: impl Into<String>,
        order: u32,
        labels: Vec<BasisLabel>,
        table: Vec<Vec<(u32, CycNum)>>,
        unit: Vec<(u32, CycNum)>,
    ) -> Self {
        assert_eq!(table.len(), labels.len() * labels.len());
        let table = table
            .into_iter()
            .map(|v| v.into_iter().filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        FinAlgebra { name: name.into(), order, labels, table, unit }
    }

    /// Builds the table from a product function on basis indices.
    pub fn from_fn<F>(name: impl Into<String>, order: u32, labels: Vec<BasisLabel>, unit: Vec<(u32, CycNum)>, f: F) -> Self
    where
        F: Fn(usize, usize) -> Vec<(u32, CycNum)> + Sync,
    {
        let d = labels.len();
        let table = (0..d * d).into_par_iter().map(|ij| f(ij / d, ij % d)).collect();
        Self::new(name, order, labels, table, unit)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Cyclotomic order of the structure constants.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &BasisLabel {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &BasisLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn product(&self, i: usize, j: usize) -> &[(u32, CycNum)] {
        &self.table[i * self.dim() + j]
    }

    pub fn unit(&self) -> Tensor {
        Tensor::from_vec(&self.unit)
    }

    pub fn basis(&self, i: usize) -> Tensor {
        Tensor::monomial(&[i as u32], CycNum::one(self.order))
    }

    pub fn one(&self) -> CycNum {
        CycNum::one(self.order)
    }

    pub fn zero(&self) -> CycNum {
        CycNum::zero(self.order)
    }

    pub fn mul(&self, x: &Tensor, y: &Tensor) -> Tensor {
        mul_in(&[self], x, y)
    }

    /// Equal structure constants and unit, ignoring names and labels.
    pub fn same_structure(&self, other: &FinAlgebra) -> bool {
        self.table == other.table && self.unit == other.unit
    }

    pub fn with_labels(mut self, name: impl Into<String>, labels: Vec<BasisLabel>) -> FinAlgebra {
        assert_eq!(labels.len(), self.labels.len());
        self.name = name.into();
        self.labels = labels;
        self
    }

    /// Copy with `delta` added to the coefficient of `x_k` in `x_i x_j`.
    pub fn perturbed(&self, i: usize, j: usize, k: usize, delta: CycNum) -> FinAlgebra {
        let mut out = self.clone();
        let idx = i * self.dim() + j;
        let mut v: SparseVec<u32> = out.table[idx].iter().cloned().collect();
        super::linalg::add_entry(&mut v, k as u32, delta);
        out.table[idx] = v.into_iter().collect();
        out
    }

    /// The tensor product algebra with lexicographically ordered basis.
    pub fn tensor_product(a: &FinAlgebra, b: &FinAlgebra) -> FinAlgebra {
        let (da, db) = (a.dim(), b.dim());
        let labels = (0..da * db)
            .map(|ij| BasisLabel::Tensor(vec![a.labels[ij / db].clone(), b.labels[ij % db].clone()]))
            .collect();
        let unit = a.unit().tensor(&b.unit());
        let unit = unit.terms().iter().map(|(k, c)| (k[0] * db as u32 + k[1], c.clone())).collect();
        Self::from_fn(format!("{}⊗{}", a.name, b.name), a.order, labels, unit, |x, y| {
            let mut out = Vec::new();
            for (k1, c1) in a.product(x / db, y / db) {
                for (k2, c2) in b.product(x % db, y % db) {
                    out.push((k1 * db as u32 + k2, c1 * c2));
                }
            }
            out
        })
    }
}

/// Product in `A_1 ⊗ … ⊗ A_r`, computed factorwise from the structure
/// constants of each `A_i`.
pub fn mul_in(algs: &[&FinAlgebra], x: &Tensor, y: &Tensor) -> Tensor {
    let r = algs.len();
    debug_assert_eq!(x.arity(), r);
    debug_assert_eq!(y.arity(), r);
    let mut out = Tensor::zero(r);
    let mut partial: Vec<(Key, CycNum)> = Vec::new();
    let mut next: Vec<(Key, CycNum)> = Vec::new();
    for (ka, ca) in x.terms() {
        for (kb, cb) in y.terms() {
            partial.clear();
            partial.push((Key::new(), ca * cb));
            for s in 0..r {
                next.clear();
                let prod = algs[s].product(ka[s] as usize, kb[s] as usize);
                if prod.is_empty() {
                    break;
                }
                for (key, c) in &partial {
                    for (k, pc) in prod {
                        let mut nk = key.clone();
                        nk.push(*k);
                        next.push((nk, c * pc));
                    }
                }
                std::mem::swap(&mut partial, &mut next);
            }
            if partial.first().is_some_and(|(k, _)| k.len() == r) {
                for (k, c) in partial.drain(..) {
                    out.add_term(k, c);
                }
            }
        }
    }
    out
}

/// Product of several factors, left to right.
pub fn mul_all(algs: &[&FinAlgebra], factors: &[&Tensor]) -> Tensor {
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = mul_in(algs, &acc, f);
    }
    acc
}

/// Unit of `A_1 ⊗ … ⊗ A_r`.
pub fn unit_in(algs: &[&FinAlgebra]) -> Tensor {
    let mut t = Tensor::scalar(CycNum::one(algs.first().map_or(1, |a| a.order())));
    for a in algs {
        t = t.tensor(&a.unit());
    }
    t
}

/// Human-readable rendering of a tensor with basis labels.
pub fn render(algs: &[&FinAlgebra], t: &Tensor) -> String {
    const MAX_TERMS: usize = 48;
    if t.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (k, c) in t.terms().iter().take(MAX_TERMS) {
        let lbl: Vec<String> = k.iter().zip(algs).map(|(&i, a)| a.label(i as usize).to_string()).collect();
        let coeff = if c.is_one() { String::new() } else { format!("({c})·") };
        parts.push(format!("{coeff}{}", lbl.join("⊗")));
    }
    let mut s = parts.join(" + ");
    if t.len() > MAX_TERMS {
        s.push_str(&format!(" + … ({} more terms)", t.len() - MAX_TERMS));
    }
    let order = t.terms().values().map(|c| c.order()).max().unwrap_or(1);
    if order > 2 {
        s.push_str(&format!(" [z=ζ{order}]"));
    }
    s
}

/// A linear map given by the images of the source basis vectors.
///
/// Images are tensors of a fixed arity, so one type covers counits (arity
/// 0), endomorphisms (arity 1), comultiplications and coactions (arity 2).
#[derive(Clone, Debug, PartialEq)]
pub struct LinMap {
    out_arity: usize,
    images: Vec<Tensor>,
}

impl LinMap {
    pub fn new(out_arity: usize, images: Vec<Tensor>) -> Self {
        assert!(images.iter().all(|t| t.arity() == out_arity));
        LinMap { out_arity, images }
    }

    pub fn identity(dim: usize, order: u32) -> Self {
        LinMap::new(1, (0..dim).map(|i| Tensor::monomial(&[i as u32], CycNum::one(order))).collect())
    }

    pub fn source_dim(&self) -> usize {
        self.images.len()
    }

    pub fn out_arity(&self) -> usize {
        self.out_arity
    }

    pub fn image(&self, i: usize) -> &Tensor {
        &self.images[i]
    }

    pub fn images(&self) -> &[Tensor] {
        &self.images
    }

    /// Applies the map to an arity-1 element.
    pub fn apply(&self, x: &Tensor) -> Tensor {
        self.apply_slot(x, 0)
    }

    /// Applies the map to slot `slot` of `t`, splicing the image slots in.
    pub fn apply_slot(&self, t: &Tensor, slot: usize) -> Tensor {
        let new_arity = t.arity() - 1 + self.out_arity;
        let mut out = Tensor::zero(new_arity);
        for (k, c) in t.terms() {
            let img = &self.images[k[slot] as usize];
            for (ik, ic) in img.terms() {
                let mut nk = Key::with_capacity(new_arity);
                nk.extend_from_slice(&k[..slot]);
                nk.extend_from_slice(ik);
                nk.extend_from_slice(&k[slot + 1..]);
                out.add_term(nk, c * ic);
            }
        }
        out
    }

    /// `after ∘ self` for endomorphism-like (arity-1) maps.
    pub fn then(&self, after: &LinMap) -> LinMap {
        assert_eq!(self.out_arity, 1);
        LinMap::new(after.out_arity, self.images.iter().map(|t| after.apply(t)).collect())
    }

    /// Copy with `delta·x_k` added to the image of `x_i` (arity-1 maps).
    pub fn perturbed(&self, i: usize, key: &[u32], delta: CycNum) -> LinMap {
        let mut out = self.clone();
        out.images[i].add_term(Key::from_slice(key), delta);
        out
    }
}

/// Applies `maps[s]` (when present) to slot `s` of `t`, for every slot.
pub fn apply_each(t: &Tensor, maps: &[Option<&LinMap>]) -> Tensor {
    assert_eq!(maps.len(), t.arity());
    let mut out = t.clone();
    for (s, m) in maps.iter().enumerate().rev() {
        if let Some(m) = m {
            out = m.apply_slot(&out, s);
        }
    }
    out
}

/// Exhaustive associativity and unit-law check over all basis tuples.
pub fn verify_algebra(a: &FinAlgebra) -> VerificationReport {
    let mut report = VerificationReport::new();
    let d = a.dim();
    let algs = [a];
    let bad = (0..d).into_par_iter().find_map_first(|i| {
        for j in 0..d {
            let xij = Tensor::from_vec(a.product(i, j));
            for k in 0..d {
                let lhs = a.mul(&xij, &a.basis(k));
                let xjk = Tensor::from_vec(a.product(j, k));
                let rhs = a.mul(&a.basis(i), &xjk);
                if lhs != rhs {
                    return Some((i, j, k, lhs, rhs));
                }
            }
        }
        None
    });
    match bad {
        None => report.push(CheckRecord::pass("associativity")),
        Some((i, j, k, l, r)) => report.push(
            CheckRecord::fail(
                "associativity",
                format!("(x_i,x_j,x_k) = ({}, {}, {})", a.label(i), a.label(j), a.label(k)),
            )
            .with_sides(render(&algs, &l), render(&algs, &r)),
        ),
    }
    let unit = a.unit();
    let mut left = None;
    let mut right = None;
    for i in 0..d {
        let b = a.basis(i);
        if left.is_none() && a.mul(&unit, &b) != b {
            left = Some(i);
        }
        if right.is_none() && a.mul(&b, &unit) != b {
            right = Some(i);
        }
    }
    report.expect("unit_left", left.is_none(), || format!("x = {}", a.label(left.unwrap())));
    report.expect("unit_right", right.is_none(), || format!("x = {}", a.label(right.unwrap())));
    report
}

/// Checks that `f: A → B_1⊗…⊗B_r` is unital and multiplicative on basis pairs.
pub fn verify_algebra_map(
    name: &str,
    f: &LinMap,
    src: &FinAlgebra,
    dst: &[&FinAlgebra],
) -> VerificationReport {
    let mut report = VerificationReport::new();
    let d = src.dim();
    let bad = (0..d).into_par_iter().find_map_first(|i| {
        for j in 0..d {
            let lhs = f.apply(&Tensor::from_vec(src.product(i, j)));
            let rhs = mul_in(dst, f.image(i), f.image(j));
            if lhs != rhs {
                return Some((i, j, lhs, rhs));
            }
        }
        None
    });
    match bad {
        None => report.push(CheckRecord::pass(format!("{name}_multiplicative"))),
        Some((i, j, l, r)) => report.push(
            CheckRecord::fail(
                format!("{name}_multiplicative"),
                format!("(x,y) = ({}, {})", src.label(i), src.label(j)),
            )
            .with_sides(render(dst, &l), render(dst, &r)),
        ),
    }
    let fu = f.apply(&src.unit());
    let u = unit_in(dst);
    if fu == u {
        report.push(CheckRecord::pass(format!("{name}_unital")));
    } else {
        report.push(CheckRecord::fail(format!("{name}_unital"), "1").with_sides(render(dst, &fu), render(dst, &u)));
    }
    report
}

/// Inverse of `u` in `A_1 ⊗ … ⊗ A_r`.
///
/// The minimal polynomial of `u` is found by a Krylov sequence of powers of
/// `u`; a nonzero constant term yields the inverse as a polynomial in `u`,
/// a zero constant term proves that `u` is a zero divisor. Both products
/// `u·v` and `v·u` are rechecked before returning.
pub fn invert_element(algs: &[&FinAlgebra], u: &Tensor) -> Result<Tensor> {
    let order = algs.first().map_or(1, |a| a.order());
    let one = unit_in(algs);
    let bound: usize = algs.iter().map(|a| a.dim()).product::<usize>() + 1;
    let mut powers = vec![one.clone()];
    let mut ech: Echelon<Key> = Echelon::new(order);
    ech.insert(one.terms().clone());
    loop {
        let next = mul_in(algs, powers.last().unwrap(), u);
        if powers.len() > bound {
            return Err(Error::NotInvertible("minimal polynomial search did not terminate".into()));
        }
        match ech.insert(next.terms().clone()) {
            Insert::New(_) => powers.push(next),
            Insert::Dependent(comb) => {
                // Σ comb[i] u^i = 0 with comb[k] = 1 for k = powers.len().
                let a0 = comb.get(&0).cloned().unwrap_or_else(|| CycNum::zero(order));
                if a0.is_zero() {
                    return Err(Error::NotInvertible(format!(
                        "zero divisor (minimal polynomial has zero constant term): {}",
                        render(algs, u)
                    )));
                }
                // u · Σ_{i≥1} comb[i] u^{i-1} = -a0
                let k = powers.len();
                let mut v = Tensor::zero(u.arity());
                for i in 1..=k {
                    if let Some(c) = comb.get(&i) {
                        let p = if i - 1 < powers.len() { powers[i - 1].clone() } else { unreachable!() };
                        v.add_scaled(c, &p);
                    }
                }
                let f = (-&a0).invert()?;
                let v = v.scaled(&f);
                if mul_in(algs, u, &v) != one || mul_in(algs, &v, u) != one {
                    return Err(Error::NotInvertible(format!("inverse check failed for {}", render(algs, u))));
                }
                return Ok(v);
            }
        }
    }
}

/// One factor of an iterated product computed by [`contract`].
#[derive(Clone, Copy)]
pub enum Piece<'a> {
    /// The basis vector in the given slot of the contracted tensor, optionally
    /// sent through an endomorphism first.
    Slot(usize, Option<&'a LinMap>),
    Elem(&'a Tensor),
}

/// `Σ c · p_1 p_2 … p_n` over the terms `c·(a_1⊗…⊗a_r)` of `t`, all products
/// taken in `alg`. Expressions such as `S(h₁)αh₂` or `Φ¹βS(Φ²)αΦ³` are built
/// this way.
pub fn contract(alg: &FinAlgebra, t: &Tensor, pieces: &[Piece<'_>]) -> Tensor {
    let mut out = Tensor::zero(1);
    for (k, c) in t.terms() {
        let mut acc = Tensor::monomial(&[], c.clone()).tensor(&alg.unit());
        for p in pieces {
            let rhs = match p {
                Piece::Slot(s, None) => alg.basis(k[*s] as usize),
                Piece::Slot(s, Some(m)) => m.image(k[*s] as usize).clone(),
                Piece::Elem(e) => (*e).clone(),
            };
            acc = alg.mul(&acc, &rhs);
            if acc.is_zero() {
                break;
            }
        }
        out = &out + &acc;
    }
    out
}

/// `r` copies of the same algebra, for tensor-power products.
pub fn power_of(alg: &FinAlgebra, r: usize) -> Vec<&FinAlgebra> {
    vec![alg; r]
}

/// Shared handle used by structures that reference an algebra.
pub type AlgRef = Arc<FinAlgebra>;

#[cfg(test)]
mod tests {
    use super::*;

    /// kC_n with basis g^0..g^{n-1}.
    fn cyclic(n: usize) -> FinAlgebra {
        let labels = (0..n as u32).map(|e| BasisLabel::Group { symbol: "g".into(), exp: e }).collect();
        FinAlgebra::from_fn("kC", n as u32, labels, vec![(0, CycNum::one(n as u32))], move |i, j| {
            vec![(((i + j) % n) as u32, CycNum::one(n as u32))]
        })
    }

    #[test]
    fn group_algebra_verifies() {
        let a = cyclic(4);
        assert!(verify_algebra(&a).all_passed());
        let x = a.basis(1);
        let y = a.basis(3);
        assert_eq!(a.mul(&x, &y), a.unit());
    }

    #[test]
    fn perturbed_table_fails_with_witness() {
        let a = cyclic(3).perturbed(1, 1, 0, CycNum::one(3));
        let r = verify_algebra(&a);
        let f = r.get("associativity").unwrap();
        assert!(!f.passed());
        assert!(f.witness.as_ref().unwrap().contains("g"));
    }

    #[test]
    fn tensor_basics() {
        let a = cyclic(2);
        let zero = Tensor::zero(1);
        assert!(zero.tensor(&a.basis(1)).is_zero());
        let t = a.basis(0).tensor(&a.basis(1));
        assert_eq!(t.terms().keys().next().unwrap().as_slice(), &[0, 1]);
    }

    #[test]
    fn explicit_tensor_product_matches_factorwise_product() {
        let a = cyclic(3);
        let b = cyclic(2);
        let ab = FinAlgebra::tensor_product(&a, &b);
        assert!(verify_algebra(&ab).all_passed());
        for x in 0..6 {
            for y in 0..6 {
                let lhs = Tensor::from_vec(ab.product(x, y));
                let tx = a.basis(x / 2).tensor(&b.basis(x % 2));
                let ty = a.basis(y / 2).tensor(&b.basis(y % 2));
                let p = mul_in(&[&a, &b], &tx, &ty);
                let flat: Vec<(u32, CycNum)> = p.terms().iter().map(|(k, c)| (k[0] * 2 + k[1], c.clone())).collect();
                assert_eq!(lhs, Tensor::from_vec(&flat));
            }
        }
    }

    #[test]
    fn invert_group_elements_and_detect_zero_divisors() {
        let a = cyclic(4);
        let g = a.basis(1);
        let inv = invert_element(&[&a], &g).unwrap();
        assert_eq!(inv, a.basis(3));
        // 1 + g^2 is a zero divisor in kC_4: (1+g^2)(1-g^2) = 0
        let u = &a.unit() + &a.basis(2);
        assert!(invert_element(&[&a], &u).is_err());
        let unit = a.unit();
        assert_eq!(invert_element(&[&a], &unit).unwrap(), unit);
    }
}
