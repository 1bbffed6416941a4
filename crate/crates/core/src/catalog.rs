//! The families `A(W,F,ξ,α)` over `H` and `Â(W,ξ,α)` over `A(H,s)`,
//! compatibility of their parameters, and enumeration of compatible data.
//!
//! `F = ⟨χ^{n/|F|}⟩ ⊆ C_n`, and `e_{χ^a}` is written with the `χ`-exponent
//! `a`. The basis `v^r e_{χ^a}` (with `r` ranging over exponent vectors of
//! the generators in `W`) has index `pbw(r)·|F| + a/(n/|F|)`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::comodalg::{
    decompose_comod_crossed_product, hat_subalgebra, rebase, twist_comodule_algebra, ComodAlgebra, ComodDecomposition,
};
use crate::crossed::IsoCheck;
use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::pointed::{Ahs, PbwIndex, PointedDatum, PointedHopf, TwistedPointed};
use crate::tensoralg::{mul_in, BasisLabel, FinAlgebra, LinMap, Tensor};

/// Parameters `(F, W, ξ, α)` over a quantum linear space datum.
#[derive(Clone, Debug, PartialEq)]
pub struct QlsComodDatum {
    pub base: PointedDatum,
    pub f_order: u32,
    /// Generator indices (0-based), sorted.
    pub w: Vec<usize>,
    /// `ξ_i` for every generator.
    pub xi: Vec<CycNum>,
    /// `alpha[i][j] = α_{ij}`, used for `i < j` only.
    pub alpha: Vec<Vec<CycNum>>,
}

impl QlsComodDatum {
    /// `ξ = 0`, `α = 0`.
    pub fn zero(base: PointedDatum, f_order: u32, w: Vec<usize>) -> Self {
        let n = base.n();
        let t = base.theta();
        QlsComodDatum {
            xi: vec![CycNum::zero(n); t],
            alpha: vec![vec![CycNum::zero(n); t]; t],
            base,
            f_order,
            w,
        }
    }

    pub fn n(&self) -> u32 {
        self.base.n()
    }

    /// `n/|F|`, the exponent of the generator of `F`.
    pub fn step(&self) -> u32 {
        self.n() / self.f_order
    }

    pub fn in_f(&self, a: u32) -> bool {
        a.is_multiple_of(self.step())
    }

    /// `χ`-exponent of `g_i = χ^{-b_i}`.
    pub fn g_exp(&self, i: usize) -> u32 {
        let n = self.n();
        (n - self.base.b(i) % n) % n
    }

    /// `χ_i(χ^a) = q^{d_i a}`.
    pub fn char_value(&self, i: usize, a: u32) -> CycNum {
        self.base.q(self.base.d(i) as i64 * a as i64)
    }

    pub fn in_w(&self, i: usize) -> bool {
        self.w.contains(&i)
    }

    pub fn pbw(&self) -> PbwIndex {
        PbwIndex::new(self.w.iter().map(|&i| self.base.nilpotency(i)).collect())
    }

    pub fn dim(&self) -> usize {
        self.pbw().count() * self.f_order as usize
    }

    /// `d`-weighted degree `Σ r_i d_i` of each basis element.
    pub fn weighted_degrees(&self) -> Vec<u32> {
        let pbw = self.pbw();
        let f = self.f_order as usize;
        (0..self.dim())
            .map(|x| pbw.exps(x / f).iter().zip(&self.w).map(|(&r, &i)| r * self.base.d(i)).sum())
            .collect()
    }

    fn nonzero_count(&self) -> usize {
        let t = self.base.theta();
        self.xi.iter().filter(|c| !c.is_zero()).count()
            + (0..t).flat_map(|i| (i + 1..t).map(move |j| (i, j))).filter(|&(i, j)| !self.alpha[i][j].is_zero()).count()
    }
}

impl fmt::Display for QlsComodDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w: Vec<String> = self.w.iter().map(|i| (i + 1).to_string()).collect();
        let xi: Vec<String> = self.xi.iter().map(|c| c.to_string()).collect();
        write!(f, "F=C{} W={{{}}} ξ=({})", self.f_order, w.join(","), xi.join(","))?;
        let t = self.base.theta();
        for i in 0..t {
            for j in i + 1..t {
                write!(f, " α{}{}={}", i + 1, j + 1, self.alpha[i][j])?;
            }
        }
        Ok(())
    }
}

fn xi_allowed(d: &QlsComodDatum, i: usize) -> Option<String> {
    let n = d.n();
    let ni = d.base.nilpotency(i);
    if !d.in_w(i) {
        return Some(format!("ξ_{} ≠ 0 with {} ∉ W", i + 1, i + 1));
    }
    if !d.in_f(d.g_exp(i) * ni % n) {
        return Some(format!("(parameters1) ξ_{} ≠ 0 but g_{}^{ni} ∉ F", i + 1, i + 1));
    }
    if !d.char_value(i, d.step()).pow(ni as i64).map(|c| c.is_one()).unwrap_or(false) {
        return Some(format!("(parameters1) ξ_{} ≠ 0 but χ_{}^{ni} is nontrivial on F", i + 1, i + 1));
    }
    None
}

fn alpha_allowed(d: &QlsComodDatum, i: usize, j: usize) -> Option<String> {
    let n = d.n();
    if !d.in_w(i) || !d.in_w(j) {
        return Some(format!("α_{}{} ≠ 0 with a generator outside W", i + 1, j + 1));
    }
    if !d.in_f((d.g_exp(i) + d.g_exp(j)) % n) {
        return Some(format!("(parameters2) α_{}{} ≠ 0 but g_{}g_{} ∉ F", i + 1, j + 1, i + 1, j + 1));
    }
    if !(&d.char_value(i, d.step()) * &d.char_value(j, d.step())).is_one() {
        return Some(format!("(parameters2) α_{}{} ≠ 0 but χ_{}χ_{} is nontrivial on F", i + 1, j + 1, i + 1, j + 1));
    }
    None
}

/// Every violated compatibility condition; empty iff compatible.
pub fn validate_compat(d: &QlsComodDatum) -> Vec<String> {
    let mut out = Vec::new();
    let n = d.n();
    let t = d.base.theta();
    if d.f_order == 0 || !n.is_multiple_of(d.f_order) {
        out.push(format!("|F| = {} does not divide {n}", d.f_order));
        return out;
    }
    if d.w.iter().any(|&i| i >= t) || d.w.windows(2).any(|p| p[0] >= p[1]) {
        out.push(format!("W = {:?} must be a sorted subset of 0..{t}", d.w));
    }
    if d.xi.len() != t || d.alpha.len() != t || d.alpha.iter().any(|r| r.len() != t) {
        out.push(format!("ξ needs {t} entries and α a {t}×{t} matrix"));
        return out;
    }
    let all = d.xi.iter().chain(d.alpha.iter().flatten());
    if all.clone().any(|c| c.order() != n) {
        out.push(format!("parameters must lie in Q(ζ_{n})"));
    }
    for i in 0..t {
        if !d.xi[i].is_zero() {
            out.extend(xi_allowed(d, i));
        }
        for j in 0..t {
            if j <= i && !d.alpha[i][j].is_zero() {
                out.push(format!("α_{}{} is below the diagonal", i + 1, j + 1));
            }
            if j > i && !d.alpha[i][j].is_zero() {
                out.extend(alpha_allowed(d, i, j));
            }
        }
    }
    out
}

/// `Σ c · v^exps e_{χ^a}` as a map from `(exps over W, a)`.
type Normal = Vec<(Vec<u32>, u32, CycNum)>;

/// Normal forms of words in the generators `v_i`, by rewriting descents with
/// (relations2), full runs with (relations3), and moving each produced `e_f`
/// to the right with (relations1).
struct Rewriter<'a> {
    d: &'a QlsComodDatum,
    memo: Mutex<HashMap<Vec<usize>, Arc<Normal>>>,
}

impl<'a> Rewriter<'a> {
    fn new(d: &'a QlsComodDatum) -> Self {
        Rewriter { d, memo: Mutex::new(HashMap::new()) }
    }

    /// Factor from moving `e_{χ^a}` rightwards across `word`.
    fn pass_right(&self, a: u32, word: &[usize]) -> CycNum {
        let e: i64 = word.iter().map(|&k| self.d.base.d(k) as i64).sum();
        self.d.base.q(e * a as i64)
    }

    fn add_shifted(&self, out: &mut Normal, part: &Normal, shift: u32, c: &CycNum) {
        let n = self.d.n();
        for (e, a, x) in part {
            out.push((e.clone(), (a + shift) % n, x * c));
        }
    }

    fn normal(&self, word: &[usize]) -> Arc<Normal> {
        if let Some(r) = self.memo.lock().unwrap().get(word) {
            return Arc::clone(r);
        }
        let r = Arc::new(self.compute(word));
        self.memo.lock().unwrap().insert(word.to_vec(), Arc::clone(&r));
        r
    }

    fn compute(&self, word: &[usize]) -> Normal {
        let d = self.d;
        let n = d.n();
        let mut out = Normal::new();
        if let Some(p) = (0..word.len().saturating_sub(1)).find(|&p| word[p] > word[p + 1]) {
            let (i, j) = (word[p + 1], word[p]);
            // v_j v_i = q_{ij}⁻¹ v_i v_j − q_{ij}⁻¹ α_{ij} e_{g_i g_j}
            let qinv = d.base.q(-(d.base.braiding_exp(i, j) as i64));
            let mut swapped = word.to_vec();
            swapped.swap(p, p + 1);
            self.add_shifted(&mut out, &self.normal(&swapped), 0, &qinv);
            let al = &d.alpha[i][j];
            if !al.is_zero() {
                let h = (d.g_exp(i) + d.g_exp(j)) % n;
                let rest: Vec<usize> = word[..p].iter().chain(&word[p + 2..]).copied().collect();
                let c = -(&(&qinv * al) * &self.pass_right(h, &word[p + 2..]));
                self.add_shifted(&mut out, &self.normal(&rest), h, &c);
            }
            return combine(out);
        }
        let mut p = 0;
        while p < word.len() {
            let i = word[p];
            let len = word[p..].iter().take_while(|&&k| k == i).count();
            let ni = d.base.nilpotency(i) as usize;
            if len >= ni {
                let xi = &d.xi[i];
                if xi.is_zero() {
                    return out;
                }
                let h = d.g_exp(i) * ni as u32 % n;
                let rest: Vec<usize> = word[..p].iter().chain(&word[p + ni..]).copied().collect();
                let c = xi * &self.pass_right(h, &word[p + ni..]);
                self.add_shifted(&mut out, &self.normal(&rest), h, &c);
                return combine(out);
            }
            p += len;
        }
        let exps = d.w.iter().map(|&i| word.iter().filter(|&&k| k == i).count() as u32).collect();
        out.push((exps, 0, CycNum::one(n)));
        out
    }
}

fn combine(terms: Normal) -> Normal {
    let mut map: std::collections::BTreeMap<(Vec<u32>, u32), CycNum> = Default::default();
    for (e, a, c) in terms {
        let n = c.order();
        let slot = map.entry((e, a)).or_insert_with(|| CycNum::zero(n));
        *slot = &*slot + &c;
    }
    map.into_iter().filter(|(_, c)| !c.is_zero()).map(|((e, a), c)| (e, a, c)).collect()
}

fn word_of(d: &QlsComodDatum, exps: &[u32]) -> Vec<usize> {
    d.w.iter().zip(exps).flat_map(|(&i, &r)| std::iter::repeat_n(i, r as usize)).collect()
}

fn family_labels(d: &QlsComodDatum) -> Vec<BasisLabel> {
    let pbw = d.pbw();
    let f = d.f_order as usize;
    (0..d.dim())
        .map(|x| {
            let mut exps = vec![0; d.base.theta()];
            for (&i, &r) in d.w.iter().zip(&pbw.exps(x / f)) {
                exps[i] = r;
            }
            BasisLabel::Pbw { var: "v".into(), exps, symbol: "e_χ".into(), group: (x % f) as u32 * d.step() }
        })
        .collect()
}

/// The algebra `A(W,F,ξ,α)` with its PBW basis.
pub fn family_algebra(d: &QlsComodDatum) -> Result<FinAlgebra> {
    let v = validate_compat(d);
    if !v.is_empty() {
        return Err(Error::Incompatible(v));
    }
    let n = d.n();
    let pbw = d.pbw();
    let f = d.f_order as usize;
    let step = d.step();
    let rw = Rewriter::new(d);
    let mut stray = Mutex::new(None);
    let alg = FinAlgebra::from_fn(
        format!("A(W,C{},ξ,α)", d.f_order),
        n,
        family_labels(d),
        vec![(0, CycNum::one(n))],
        |x, y| {
            let (r, a) = (pbw.exps(x / f), (x % f) as u32 * step);
            let (t, c) = (pbw.exps(y / f), (y % f) as u32 * step);
            let mut word = word_of(d, &r);
            let right = word_of(d, &t);
            let factor = rw.pass_right(a, &right);
            word.extend(right);
            let mut out = Vec::new();
            for (e, h, k) in rw.normal(&word).iter() {
                let g = (h + a + c) % n;
                if !g.is_multiple_of(step) {
                    *stray.lock().unwrap() = Some(g);
                    continue;
                }
                out.push(((pbw.index(e) * f + (g / step) as usize) as u32, k * &factor));
            }
            out.sort_by_key(|p| p.0);
            out
        },
    );
    if let Some(g) = stray.get_mut().unwrap().take() {
        return Err(Error::Closure { what: "rewriting left F".into(), image: format!("e_χ^{g}") });
    }
    Ok(alg)
}

/// `A(W,F,ξ,α)` over `H` with `λ(v_i) = x_i⊗1 + g_i⊗v_i`, `λ(e_f) = f⊗e_f`
/// and trivial associator.
pub fn build_family(d: &QlsComodDatum, h: &PointedHopf) -> Result<ComodAlgebra> {
    if h.datum != d.base {
        return Err(Error::Precondition("H was built from a different datum".into()));
    }
    let alg = Arc::new(family_algebra(d)?);
    let big = h.alg();
    let m2 = [big, &*alg];
    let pbw = d.pbw();
    let f = d.f_order as usize;
    let unit_k = alg.unit();
    let gen: Vec<Tensor> = d
        .w
        .iter()
        .enumerate()
        .map(|(pos, &i)| {
            let mut e = vec![0; d.w.len()];
            e[pos] = 1;
            let v = alg.basis(pbw.index(&e) * f);
            &h.x(i).tensor(&unit_k) + &h.chi_pow(-(d.base.b(i) as i64)).tensor(&v)
        })
        .collect();
    let images = (0..alg.dim())
        .into_par_iter()
        .map(|x| {
            let a = (x % f) as u32 * d.step();
            let mut out = h.chi_pow(a as i64).tensor(&alg.basis(x % f));
            for (pos, &r) in pbw.exps(x / f).iter().enumerate().rev() {
                for _ in 0..r {
                    out = mul_in(&m2, &gen[pos], &out);
                }
            }
            out
        })
        .collect();
    Ok(ComodAlgebra::with_trivial_associator(h.hopf.base.clone(), alg, LinMap::new(2, images)))
}

/// Sends the `H` slot `slot` of `t`, which must lie in `kF`, to `K` through
/// `f ↦ e_f`, and the `K`-index of `e_f` to the last position.
fn group_leg_into_k(d: &QlsComodDatum, t: &Tensor, slot: usize) -> Result<Tensor> {
    let n = d.n();
    let mut out = Tensor::zero(t.arity());
    for (key, c) in t.terms() {
        let a = key[slot];
        if a >= n || !d.in_f(a) {
            return Err(Error::Closure { what: "group leg outside kF".into(), image: format!("index {a}") });
        }
        let mut nk = key.clone();
        nk[slot] = a / d.step();
        out.add_term(nk, c.clone());
    }
    Ok(out)
}

/// `(K, J_sλJ_s⁻¹, Φ_s(J_s⊗1))` over `H`, with `J_s` in `H⊗K` through
/// `χ^{ma} ↦ e_{χ^{ma}}`. Requires `⟨σ⟩ ⊆ F`.
pub fn lambda_js(k: &ComodAlgebra, d: &QlsComodDatum, tp: &TwistedPointed) -> Result<ComodAlgebra> {
    let m = d.base.m();
    if !d.f_order.is_multiple_of(m) {
        return Err(Error::Precondition(format!("⟨σ⟩ ⊄ F for |F| = {}", d.f_order)));
    }
    let jk = group_leg_into_k(d, &tp.twist.value, 1)?;
    let jk_inv = group_leg_into_k(d, &tp.twist.inverse, 1)?;
    let m2 = k.algs(1);
    let images = k.coaction.images().par_iter().map(|l| mul_in(&m2, &mul_in(&m2, &jk, l), &jk_inv)).collect();
    let m3 = k.algs(2);
    let phi = group_leg_into_k(d, &tp.hj.base.assoc, 2)?;
    let phi_inv = group_leg_into_k(d, &tp.hj.base.assoc_inv, 2)?;
    let one_k = k.alg.unit();
    let assoc = mul_in(&m3, &phi, &tp.twist.value.tensor(&one_k));
    let assoc_inv = mul_in(&m3, &tp.twist.inverse.tensor(&one_k), &phi_inv);
    Ok(ComodAlgebra { over: k.over.clone(), alg: Arc::clone(&k.alg), coaction: LinMap::new(2, images), assoc, assoc_inv })
}

/// `(K^{J_s}, λ^{J_s}, Φ_s)` over `H_{J_s}`.
pub fn twisted_family(k: &ComodAlgebra, d: &QlsComodDatum, tp: &TwistedPointed) -> Result<ComodAlgebra> {
    Ok(twist_comodule_algebra(&lambda_js(k, d, tp)?, &tp.twist))
}

/// `Â(W,ξ,α)`: the algebra of `A(W,C_p,ξ,α)` with `λ̂ = J_sλJ_s⁻¹`, over
/// `A(H,s)` with associator `Φ_s`.
pub fn build_hat_family(d: &QlsComodDatum, h: &PointedHopf, tp: &TwistedPointed, ahs: &Ahs) -> Result<ComodAlgebra> {
    let m = d.base.m();
    if !(2..m).all(|x| !m.is_multiple_of(x)) || m < 2 {
        return Err(Error::Precondition(format!("m = {m} is not prime")));
    }
    if d.f_order != m {
        return Err(Error::Precondition(format!("|F| = {} but the hat family needs F = C_{m}", d.f_order)));
    }
    let k = build_family(d, h)?;
    let l = twisted_family(&k, d, tp)?;
    let hat = hat_subalgebra(&l, &ahs.quasi, &ahs.iota)?;
    if hat.frame.dim() != k.dim() {
        let pbw = d.pbw();
        let f = d.f_order as usize;
        let gens = d.w.iter().enumerate().map(|(pos, _)| {
            let mut e = vec![0; d.w.len()];
            e[pos] = 1;
            pbw.index(&e) * f
        });
        let bad = gens
            .chain(0..f)
            .find(|&x| hat.frame.coords(&l.alg.basis(x)).is_none())
            .map(|x| l.alg.label(x).to_string())
            .unwrap_or_default();
        return Err(Error::Closure { what: format!("λ^J_s({bad}) in A(H,s)⊗K"), image: l.render(l.coaction.image(0)) });
    }
    Ok(hat.comod)
}

/// Splits `(K^{J_s}, λ^{J_s}, Φ_s)` for `K = A(W,F,ξ,α)` with `⟨σ⟩ ⊆ F` as
/// `K̂#F̂` over `A(H,s)#C_m`: the grading of `v^r e_{χ^a}` is `a mod m`,
/// `F̂ = F/⟨σ⟩` and the sections are `u_{h^i} = e_{χ^i}`.
pub fn decompose_twisted_family(d: &QlsComodDatum, iso: &IsoCheck) -> Result<ComodDecomposition> {
    let m = d.base.m();
    if !d.f_order.is_multiple_of(m) {
        return Err(Error::Precondition(format!("⟨σ⟩ ⊄ F for |F| = {}", d.f_order)));
    }
    let k = build_family(d, &iso.h)?;
    let l = rebase(&twisted_family(&k, d, &iso.twisted)?, &iso.product.qb)?;
    let f = d.f_order as usize;
    let step = d.step();
    let grading: Vec<u32> = (0..l.dim()).map(|x| (x % f) as u32 * step % m).collect();
    let f_hat = d.f_order / m;
    let l_step = m / f_hat;
    let sections = (0..f_hat).map(|j| l.alg.basis((j * l_step / step) as usize)).collect::<Vec<_>>();
    decompose_comod_crossed_product(&l, &iso.system, &iso.product, &grading, f_hat, &sections)
}

/// Divisors of `n` in increasing order.
fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|x| n.is_multiple_of(*x)).collect()
}

/// All `(F, W)` and all 0/1 patterns of `(ξ, α)` that pass
/// [`validate_compat`], with nonzero values set to 1 and at most
/// `max_nonzero` nonzero parameters. Ordered by `|F|`, then `W` as a bitmask,
/// then the pattern as a bitmask over `ξ_1, …, ξ_θ, α_12, α_13, …`.
pub fn enumerate_compatible(base: &PointedDatum, max_nonzero: Option<usize>) -> Vec<QlsComodDatum> {
    let n = base.n();
    let t = base.theta();
    let positions: Vec<(usize, usize)> =
        (0..t).map(|i| (i, i)).chain((0..t).flat_map(|i| (i + 1..t).map(move |j| (i, j)))).collect();
    let mut out = Vec::new();
    for f in divisors(n) {
        for mask in 0u32..(1 << t) {
            let w: Vec<usize> = (0..t).filter(|i| mask >> i & 1 == 1).collect();
            let zero = QlsComodDatum::zero(base.clone(), f, w.clone());
            let free: Vec<(usize, usize)> = positions
                .iter()
                .copied()
                .filter(|&(i, j)| if i == j { xi_allowed(&zero, i).is_none() } else { alpha_allowed(&zero, i, j).is_none() })
                .collect();
            for pat in 0u32..(1 << free.len()) {
                let mut d = zero.clone();
                for (b, &(i, j)) in free.iter().enumerate() {
                    if pat >> b & 1 == 1 {
                        if i == j {
                            d.xi[i] = CycNum::one(n);
                        } else {
                            d.alpha[i][j] = CycNum::one(n);
                        }
                    }
                }
                if max_nonzero.is_some_and(|b| d.nonzero_count() > b) || !validate_compat(&d).is_empty() {
                    continue;
                }
                out.push(d);
            }
        }
    }
    out
}
