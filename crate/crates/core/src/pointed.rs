//! The pointed Hopf algebra `H = B(V)#kC_{m²}` of a quantum linear space,
//! its twist `J_s`, the twisted quasi-Hopf algebra `H_{J_s}` and the basic
//! quasi-Hopf subalgebra `A(H,s)`.
//!
//! Conventions: `q = ζ_{m²}`, `σ = χ^m`, `g_i = χ^{-b_i}`,
//! `χ x_i χ⁻¹ = q^{d_i} x_i`, `Δ(x_i) = x_i⊗1 + g_i⊗x_i` and
//! `x_i x_j = q_{ij} x_j x_i` for `i < j` with `q_{ij} = q^{-b_i d_j}`.
//! Basis vectors are PBW monomials `x₁^{r₁}…x_θ^{r_θ}·χ^a` (group part
//! rightmost), indexed by `pbw_index(r)·n + a`.

use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::quasihopf::{group_hopf, twist_hopf, QuasiBialgebra, QuasiHopf, Twist};
use crate::report::{CheckRecord, VerificationReport};
use crate::tensoralg::{
    invert_element, mul_in, power_of, BasisLabel, FinAlgebra, LinMap, SubBasis, Tensor,
};

/// Validated datum `(m, d, b, s)` of a quantum linear space over `C_{m²}`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct PointedDatum {
    m: u32,
    d: Vec<u32>,
    b: Vec<u32>,
    s: u32,
    nilp: Vec<u32>,
}

fn rem(x: i64, n: u32) -> u32 {
    x.rem_euclid(n as i64) as u32
}

impl PointedDatum {
    /// Validates the datum; every violated invariant is listed in the error.
    pub fn new(m: u32, d: &[i64], b: &[i64], s: u32) -> Result<Self> {
        let v = Self::violations(m, d, b, s);
        if !v.is_empty() {
            return Err(Error::InvalidDatum(v));
        }
        let n = m * m;
        let d: Vec<u32> = d.iter().map(|&x| rem(x, n)).collect();
        let b: Vec<u32> = b.iter().map(|&x| rem(x, n)).collect();
        let nilp = d.iter().zip(&b).map(|(&di, &bi)| order_of(n, rem(-(bi as i64 * di as i64), n))).collect();
        Ok(PointedDatum { m, d, b, s, nilp })
    }

    pub fn violations(m: u32, d: &[i64], b: &[i64], s: u32) -> Vec<String> {
        let mut out = Vec::new();
        if m < 2 {
            out.push(format!("m = {m}: need m ≥ 2 so that 1 ≤ s ≤ m−1 is possible"));
            return out;
        }
        if d.len() != b.len() {
            out.push(format!("d has {} entries but b has {}", d.len(), b.len()));
            return out;
        }
        if s < 1 || s >= m {
            out.push(format!("s = {s} outside 1 ≤ s ≤ m−1 = {}", m - 1));
        }
        let n = m as i64 * m as i64;
        for i in 0..d.len() {
            if (b[i] - s as i64 * d[i]).rem_euclid(m as i64) != 0 {
                out.push(format!("s ∉ Υ(H): b_{0} ≢ s·d_{0} (mod m) for i = {0}", i + 1));
            }
            if (b[i] * d[i]).rem_euclid(n) == 0 {
                out.push(format!("N_{0} infinite: q^(-b_{0}·d_{0}) = 1 for i = {0}", i + 1));
            }
        }
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                if (b[j] * d[i] + b[i] * d[j]).rem_euclid(n) != 0 {
                    out.push(format!(
                        "quantum linear space condition fails: b_{j1}d_{i1} + b_{i1}d_{j1} ≢ 0 (mod m²) for (i,j) = ({i1},{j1})",
                        i1 = i + 1,
                        j1 = j + 1
                    ));
                }
            }
        }
        out
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// `n = m²`, the order of `χ` and of `q`.
    pub fn n(&self) -> u32 {
        self.m * self.m
    }

    pub fn theta(&self) -> usize {
        self.d.len()
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    /// `d_i` reduced mod `m²`, with `i` zero-based.
    pub fn d(&self, i: usize) -> u32 {
        self.d[i]
    }

    pub fn b(&self, i: usize) -> u32 {
        self.b[i]
    }

    /// `N_i`, the order of `q^{-b_i d_i}`.
    pub fn nilpotency(&self, i: usize) -> u32 {
        self.nilp[i]
    }

    pub fn nilpotencies(&self) -> &[u32] {
        &self.nilp
    }

    /// Exponent `e` with `q_{ij} = q^e`, i.e. `-b_i d_j mod m²`.
    pub fn braiding_exp(&self, i: usize, j: usize) -> u32 {
        rem(-(self.b[i] as i64 * self.d[j] as i64), self.n())
    }

    /// `q^k` in `Q(ζ_{m²})`.
    pub fn q(&self, k: i64) -> CycNum {
        CycNum::root_of_unity(self.n(), k)
    }

    /// The same datum with another `s`.
    pub fn with_s(&self, s: u32) -> Result<Self> {
        let d: Vec<i64> = self.d.iter().map(|&x| x as i64).collect();
        let b: Vec<i64> = self.b.iter().map(|&x| x as i64).collect();
        PointedDatum::new(self.m, &d, &b, s)
    }

    pub fn pbw_count(&self) -> usize {
        self.nilp.iter().map(|&x| x as usize).product()
    }
}

/// Multiplicative order of `q^k` with `q` of order `n`.
fn order_of(n: u32, k: u32) -> u32 {
    n / n.gcd(&k)
}

impl fmt::Display for PointedDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(",");
        write!(f, "m={} d=({}) b=({}) s={}", self.m, list(&self.d), list(&self.b), self.s)
    }
}

/// Mixed-radix indexing of PBW exponent vectors `0 ≤ r_i < N_i`,
/// lexicographic with `r_1` most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PbwIndex {
    radix: Vec<u32>,
}

impl PbwIndex {
    pub fn new(radix: Vec<u32>) -> Self {
        PbwIndex { radix }
    }

    pub fn count(&self) -> usize {
        self.radix.iter().map(|&x| x as usize).product()
    }

    pub fn index(&self, exps: &[u32]) -> usize {
        exps.iter().zip(&self.radix).fold(0, |acc, (&e, &r)| acc * r as usize + e as usize)
    }

    pub fn exps(&self, mut idx: usize) -> Vec<u32> {
        let mut out = vec![0; self.radix.len()];
        for (slot, &r) in out.iter_mut().zip(&self.radix).rev() {
            *slot = (idx % r as usize) as u32;
            idx /= r as usize;
        }
        out
    }

    pub fn radix(&self) -> &[u32] {
        &self.radix
    }
}

/// Coefficient and result of `(x^r χ^a)(x^t χ^c)` in `H`, or `None` when the
/// product vanishes. Group exponents are taken mod `n` by the caller.
pub fn pbw_product(datum: &PointedDatum, r: &[u32], a: u32, t: &[u32], c: u32) -> Option<(i64, Vec<u32>, u32)> {
    let n = datum.n() as i64;
    let mut exps = Vec::with_capacity(r.len());
    for i in 0..r.len() {
        let e = r[i] + t[i];
        if e >= datum.nilpotency(i) {
            return None;
        }
        exps.push(e);
    }
    // χ^a x^t = q^{a Σ d_i t_i} x^t χ^a
    let mut k: i64 = a as i64 * (0..t.len()).map(|i| datum.d(i) as i64 * t[i] as i64).sum::<i64>();
    // x_j^{r_j} x_i^{t_i} = q^{b_i d_j r_j t_i} x_i^{t_i} x_j^{r_j} for i < j
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            k += datum.b(i) as i64 * datum.d(j) as i64 * r[j] as i64 * t[i] as i64;
        }
    }
    Some((k.rem_euclid(n), exps, ((a + c) as i64 % n) as u32))
}

/// `H = B(V)#kC_{m²}` with its Hopf structure and index helpers.
#[derive(Clone, Debug)]
pub struct PointedHopf {
    pub datum: PointedDatum,
    pub hopf: QuasiHopf,
    pub pbw: PbwIndex,
}

impl PointedHopf {
    pub fn alg(&self) -> &FinAlgebra {
        &self.hopf.base.alg
    }

    pub fn n(&self) -> u32 {
        self.datum.n()
    }

    pub fn index(&self, exps: &[u32], a: u32) -> usize {
        self.pbw.index(exps) * self.n() as usize + (a % self.n()) as usize
    }

    /// `(exps, a)` of a basis index.
    pub fn decompose(&self, idx: usize) -> (Vec<u32>, u32) {
        let n = self.n() as usize;
        (self.pbw.exps(idx / n), (idx % n) as u32)
    }

    /// PBW degree `Σ r_i` of each basis vector.
    pub fn degrees(&self) -> Vec<u32> {
        (0..self.alg().dim()).map(|i| self.decompose(i).0.iter().sum()).collect()
    }

    pub fn chi_pow(&self, k: i64) -> Tensor {
        let zero = vec![0; self.datum.theta()];
        self.alg().basis(self.index(&zero, rem(k, self.n())))
    }

    /// `x_i` with zero-based `i`.
    pub fn x(&self, i: usize) -> Tensor {
        let mut e = vec![0; self.datum.theta()];
        e[i] = 1;
        self.alg().basis(self.index(&e, 0))
    }

    /// `1_i = (1/m²) Σ_k q^{-ki} χ^k`.
    pub fn idem(&self, i: i64) -> Tensor {
        let n = self.n();
        cyclic_idempotent(n, n, 1, i, |k| self.chi_pow(k as i64))
    }

    /// `𝟙_j = (1/m) Σ_l q^{-mlj} σ^l`.
    pub fn idem_sigma(&self, j: i64) -> Tensor {
        let m = self.datum.m();
        cyclic_idempotent(self.n(), m, m, j, |l| self.chi_pow((m * l) as i64))
    }

    /// `C_m`-grading `x^r χ^a ↦ a mod m`.
    pub fn cm_grading(&self) -> Vec<u32> {
        (0..self.alg().dim()).map(|i| self.decompose(i).1 % self.datum.m()).collect()
    }
}

/// `(1/count) Σ_l ζ^{-step·l·j} g^l` with `ζ = ζ_order`, where `elem(l) = g^l`.
pub fn cyclic_idempotent(order: u32, count: u32, step: u32, j: i64, elem: impl Fn(u32) -> Tensor) -> Tensor {
    let inv = CycNum::from_ratio(order, 1, count as i64);
    let mut out = Tensor::zero(1);
    for l in 0..count {
        let c = &inv * &CycNum::root_of_unity(order, -(step as i64) * l as i64 * j);
        out.add_scaled(&c, &elem(l));
    }
    out
}

/// Primitive idempotents of `kC_n`.
#[derive(Clone, Debug)]
pub struct Idempotents {
    pub hopf: QuasiHopf,
    /// `1_i`, `0 ≤ i < n`.
    pub chi: Vec<Tensor>,
    /// `𝟙_j` in `k⟨σ⟩`, `σ = χ^m`, present when `n = m²`.
    pub sigma: Option<Vec<Tensor>>,
}

pub fn primitive_idempotents(n: u32) -> Idempotents {
    let hopf = group_hopf(n, "χ", n);
    let alg = &hopf.base.alg;
    let chi = (0..n as i64).map(|i| cyclic_idempotent(n, n, 1, i, |k| alg.basis(k as usize))).collect();
    let m = (n as f64).sqrt().round() as u32;
    let sigma = (m * m == n).then(|| {
        (0..m as i64).map(|j| cyclic_idempotent(n, m, m, j, |l| alg.basis((m * l) as usize))).collect()
    });
    Idempotents { hopf, chi, sigma }
}

fn pbw_label(exps: Vec<u32>, symbol: &str, group: u32) -> BasisLabel {
    BasisLabel::Pbw { var: "x".into(), exps, symbol: symbol.into(), group }
}

/// Builds `H` by the closed product formula for PBW monomials.
pub fn build_bosonization(datum: &PointedDatum) -> PointedHopf {
    let n = datum.n();
    let theta = datum.theta();
    let pbw = PbwIndex::new(datum.nilpotencies().to_vec());
    let dim = pbw.count() * n as usize;
    let decompose = |idx: usize| (pbw.exps(idx / n as usize), (idx % n as usize) as u32);
    let labels = (0..dim).map(|i| {
        let (e, a) = decompose(i);
        pbw_label(e, "χ", a)
    });
    let labels: Vec<BasisLabel> = labels.collect();
    let one = CycNum::one(n);
    let alg = Arc::new(FinAlgebra::from_fn("H", n, labels, vec![(0, one.clone())], |i, j| {
        let (r, a) = decompose(i);
        let (t, c) = decompose(j);
        match pbw_product(datum, &r, a, &t, c) {
            None => vec![],
            Some((k, e, g)) => vec![((pbw.index(&e) * n as usize + g as usize) as u32, datum.q(k))],
        }
    }));
    let h = PointedHopf {
        datum: datum.clone(),
        hopf: QuasiHopf {
            base: QuasiBialgebra::with_trivial_associator(
                Arc::clone(&alg),
                LinMap::new(2, vec![]),
                LinMap::new(0, vec![]),
            ),
            antipode: LinMap::new(1, vec![]),
            alpha: alg.unit(),
            beta: alg.unit(),
        },
        pbw,
    };
    let a2 = [&*alg, &*alg];
    let chi = h.chi_pow(1);
    let chi_inv = h.chi_pow(-1);
    let delta_chi = chi.tensor(&chi);
    let delta_x: Vec<Tensor> = (0..theta)
        .map(|i| &h.x(i).tensor(&alg.unit()) + &h.chi_pow(-(datum.b(i) as i64)).tensor(&h.x(i)))
        .collect();
    let s_x: Vec<Tensor> =
        (0..theta).map(|i| -&alg.mul(&h.chi_pow(datum.b(i) as i64), &h.x(i))).collect();

    let comult: Vec<Tensor> = (0..dim)
        .into_par_iter()
        .map(|idx| {
            let (r, a) = h.decompose(idx);
            let mut acc = alg.unit().tensor(&alg.unit());
            for (i, &ri) in r.iter().enumerate() {
                for _ in 0..ri {
                    acc = mul_in(&a2, &acc, &delta_x[i]);
                }
            }
            for _ in 0..a {
                acc = mul_in(&a2, &acc, &delta_chi);
            }
            acc
        })
        .collect();
    let counit = (0..dim)
        .map(|idx| {
            let (r, _) = h.decompose(idx);
            if r.iter().all(|&e| e == 0) {
                Tensor::scalar(one.clone())
            } else {
                Tensor::zero(0)
            }
        })
        .collect();
    // S(x^r χ^a) = S(χ)^a S(x_θ)^{r_θ} … S(x_1)^{r_1}
    let antipode: Vec<Tensor> = (0..dim)
        .into_par_iter()
        .map(|idx| {
            let (r, a) = h.decompose(idx);
            let mut acc = alg.unit();
            for _ in 0..a {
                acc = alg.mul(&acc, &chi_inv);
            }
            for i in (0..theta).rev() {
                for _ in 0..r[i] {
                    acc = alg.mul(&acc, &s_x[i]);
                }
            }
            acc
        })
        .collect();
    let base = QuasiBialgebra::with_trivial_associator(alg, LinMap::new(2, comult), LinMap::new(0, counit));
    let u = base.alg.unit();
    PointedHopf { hopf: QuasiHopf { base, antipode: LinMap::new(1, antipode), alpha: u.clone(), beta: u }, ..h }
}

/// `J_s = Σ_{i,j} c(i,j)^s 1_i⊗1_j` with `c(i,j) = q^{j(i−i′)}`, built from
/// the double sum, with its inverse `Σ c(i,j)^{−s} 1_i⊗1_j`.
pub fn build_js(h: &PointedHopf, s: u32) -> Result<Twist> {
    let m = h.datum.m();
    if s < 1 || s >= m {
        return Err(Error::Precondition(format!("s = {s} outside 1 ≤ s ≤ m−1 = {}", m as i64 - 1)));
    }
    let n = h.n() as i64;
    let idems: Vec<Tensor> = (0..n).map(|i| h.idem(i)).collect();
    let mut j = Tensor::zero(2);
    let mut jinv = Tensor::zero(2);
    for i in 0..n {
        let ip = i % m as i64;
        for jj in 0..n {
            let e = s as i64 * jj * (i - ip);
            let t = idems[i as usize].tensor(&idems[jj as usize]);
            j.add_scaled(&h.datum.q(e), &t);
            jinv.add_scaled(&h.datum.q(-e), &t);
        }
    }
    Twist::with_inverse(&h.hopf.base, j, jinv)
}

/// `Σ_{i,j,k<m} ω_s(i,j,k) 𝟙_i⊗𝟙_j⊗𝟙_k` with
/// `ω_s(i,j,k) = q^{sk(j+i−(j+i)′)}`, given the idempotents `𝟙_j`.
pub fn dassociator_closed_form(datum: &PointedDatum, s: u32, idem_sigma: &[Tensor]) -> Tensor {
    let m = datum.m() as i64;
    let mut out = Tensor::zero(3);
    for i in 0..m {
        for j in 0..m {
            let ij = i + j - (i + j) % m;
            for k in 0..m {
                let w = datum.q(s as i64 * k * ij);
                let t = idem_sigma[i as usize].tensor(&idem_sigma[j as usize]).tensor(&idem_sigma[k as usize]);
                out.add_scaled(&w, &t);
            }
        }
    }
    out
}

/// The displayed two-sum expression for `Δ_{J_s}(x_i)`, read literally
/// (the second inner sum's running index is `y`).
pub fn delta_js_display(h: &PointedHopf, s: u32, i: usize) -> Tensor {
    let m = h.datum.m() as i64;
    let d = h.datum.d(i) as i64;
    let b = h.datum.b(i) as i64;
    let dp = d % m;
    let x = h.x(i);
    let s = s as i64;
    let mut out = Tensor::zero(2);
    for y in 0..m {
        out.add_scaled(&h.datum.q(b * y), &h.idem_sigma(y).tensor(&x));
    }
    for z in 0..m {
        for y in 0..m {
            let e = if y < m - dp { (dp - d) * s * z } else { (dp + m - d) * s * z };
            let left = h.alg().mul(&x, &h.idem_sigma(y));
            out.add_scaled(&h.datum.q(e), &left.tensor(&h.idem_sigma(z)));
        }
    }
    out
}

/// `Δ_{J_s}(x_i)` as obtained by expanding `J_s Δ(x_i) J_s⁻¹` by hand:
/// `Σ_y q^{−b_i y} 𝟙_y⊗x_i + Σ_{y,z} q^{sz(d_i−d_i′+m[y ≥ m−d_i′])} x_i𝟙_y⊗𝟙_z`.
pub fn delta_js_expanded(h: &PointedHopf, s: u32, i: usize) -> Tensor {
    let m = h.datum.m() as i64;
    let d = h.datum.d(i) as i64;
    let b = h.datum.b(i) as i64;
    let dp = d % m;
    let x = h.x(i);
    let s = s as i64;
    let mut out = Tensor::zero(2);
    for y in 0..m {
        out.add_scaled(&h.datum.q(-b * y), &h.idem_sigma(y).tensor(&x));
    }
    for z in 0..m {
        for y in 0..m {
            let carry = if y >= m - dp { m } else { 0 };
            let e = s * z * (d - dp + carry);
            let left = h.alg().mul(&x, &h.idem_sigma(y));
            out.add_scaled(&h.datum.q(e), &left.tensor(&h.idem_sigma(z)));
        }
    }
    out
}

/// `H_{J_s}` with both the antipode data of the twisting formulas and an
/// equivalent normalized antipode with `α = 1`.
#[derive(Clone, Debug)]
pub struct TwistedPointed {
    pub s: u32,
    pub twist: Twist,
    /// `(S, α_{J_s}, β_{J_s})`.
    pub hj: QuasiHopf,
    /// `(α_J⁻¹ S(·) α_J, 1, β_J α_J)`, which maps `A(H,s)` into itself.
    pub hj_normalized: QuasiHopf,
}

/// Twists `H` by `J_s` and normalizes the antipode.
pub fn build_twisted(h: &PointedHopf, s: u32) -> Result<TwistedPointed> {
    let twist = build_js(h, s)?;
    let hj = twist_hopf(&h.hopf, &twist)?;
    let hj_normalized = normalize_antipode(&hj)?;
    Ok(TwistedPointed { s, twist, hj, hj_normalized })
}

/// `(uS(·)u⁻¹, uα, βu⁻¹)` with `u = α⁻¹`, an antipode with `α = 1`.
pub fn normalize_antipode(h: &QuasiHopf) -> Result<QuasiHopf> {
    let alg = h.alg();
    let u = invert_element(&[alg], &h.alpha)?;
    let images = h.antipode.images().iter().map(|img| alg.mul(&alg.mul(&u, img), &h.alpha)).collect();
    Ok(QuasiHopf {
        base: h.base.clone(),
        antipode: LinMap::new(1, images),
        alpha: alg.unit(),
        beta: alg.mul(&h.beta, &h.alpha),
    })
}

/// `A(H,s)` together with its embedding into `H_{J_s}`.
#[derive(Clone, Debug)]
pub struct Ahs {
    pub datum: PointedDatum,
    pub quasi: QuasiBialgebra,
    /// Present when the normalized antipode of `H_{J_s}` preserves `A(H,s)`.
    pub hopf: Option<QuasiHopf>,
    /// `ι`, mapping `x^r σ^a ↦ x^r χ^{ma}`.
    pub iota: SubBasis,
    /// Closure findings: which antipode data restrict to `A(H,s)`.
    pub closure: VerificationReport,
    pub pbw: PbwIndex,
}

impl Ahs {
    pub fn alg(&self) -> &FinAlgebra {
        &self.quasi.alg
    }

    pub fn m(&self) -> u32 {
        self.datum.m()
    }

    pub fn index(&self, exps: &[u32], a: u32) -> usize {
        self.pbw.index(exps) * self.m() as usize + (a % self.m()) as usize
    }

    pub fn decompose(&self, idx: usize) -> (Vec<u32>, u32) {
        let m = self.m() as usize;
        (self.pbw.exps(idx / m), (idx % m) as u32)
    }

    pub fn sigma_pow(&self, l: i64) -> Tensor {
        let zero = vec![0; self.datum.theta()];
        self.alg().basis(self.index(&zero, rem(l, self.m())))
    }

    pub fn x(&self, i: usize) -> Tensor {
        let mut e = vec![0; self.datum.theta()];
        e[i] = 1;
        self.alg().basis(self.index(&e, 0))
    }

    /// `𝟙_j` inside `A(H,s)`.
    pub fn idem_sigma(&self, j: i64) -> Tensor {
        let m = self.m();
        cyclic_idempotent(self.datum.n(), m, m, j, |l| self.sigma_pow(l as i64))
    }

    pub fn idem_sigma_all(&self) -> Vec<Tensor> {
        (0..self.m() as i64).map(|j| self.idem_sigma(j)).collect()
    }

    pub fn degrees(&self) -> Vec<u32> {
        (0..self.alg().dim()).map(|i| self.decompose(i).0.iter().sum()).collect()
    }
}

/// Builds `A(H,s)` as the span of `x^r σ^a` inside `H_{J_s}`.
pub fn build_ahs(h: &PointedHopf, tw: &TwistedPointed) -> Result<Ahs> {
    let m = h.datum.m();
    let theta = h.datum.theta();
    let pbw = h.pbw.clone();
    let dim = pbw.count() * m as usize;
    let to_big: Vec<u32> = (0..dim)
        .map(|i| {
            let e = pbw.exps(i / m as usize);
            h.index(&e, m * (i % m as usize) as u32) as u32
        })
        .collect();
    let iota = SubBasis::new(to_big);
    let labels = (0..dim).map(|i| pbw_label(pbw.exps(i / m as usize), "σ", (i % m as usize) as u32)).collect();
    let big = h.alg();
    let alg = Arc::new(iota.restrict_algebra(big, "A(H,s)", labels)?);
    let hj = &tw.hj.base;
    let comult = iota.restrict_map(big, "Δ_J", &hj.comult)?;
    let counit = iota.restrict_map(big, "ε", &hj.counit)?;
    let b3 = power_of(big, 3);
    let assoc = iota.pull_or_err(&b3, "Φ_s", &hj.assoc)?;
    let assoc_inv = iota.pull_or_err(&b3, "Φ_s⁻¹", &hj.assoc_inv)?;
    let quasi = QuasiBialgebra::with_inverse(alg, comult, counit, assoc, assoc_inv)?;

    let mut closure = VerificationReport::new();
    let check = |closure: &mut VerificationReport, name: &str, t: &Tensor| {
        let ok = iota.pull(t).is_some();
        closure.expect(name, ok, || format!("{} ∉ A(H,s)", crate::tensoralg::render(&[big], t)));
        ok
    };
    for i in 0..theta {
        check(&mut closure, &format!("S_J(x{}) ∈ A(H,s)", i + 1), &tw.hj.s(&h.x(i)));
    }
    check(&mut closure, "α_J ∈ A(H,s)", &tw.hj.alpha);
    check(&mut closure, "β_J ∈ A(H,s)", &tw.hj.beta);
    let norm = &tw.hj_normalized;
    let mut closed = true;
    for i in 0..dim {
        closed &= iota.pull(norm.antipode.image(iota.big_index(i))).is_some();
    }
    closure.expect("normalized S maps A(H,s) into itself", closed, || "some S(x) leaves A(H,s)".into());
    let beta_ok = check(&mut closure, "normalized β ∈ A(H,s)", &norm.beta);
    let hopf = if closed && beta_ok {
        let antipode = iota.restrict_map(big, "S", &norm.antipode)?;
        let beta = iota.pull(&norm.beta).expect("checked");
        let u = quasi.alg.unit();
        Some(QuasiHopf { base: quasi.clone(), antipode, alpha: u, beta })
    } else {
        None
    };
    Ok(Ahs { datum: h.datum.clone(), quasi, hopf, iota, closure, pbw })
}

/// Checks that `grading` makes `A` a `C_g`-crossed product: `Φ`, `α`, `β`
/// of degree 0, graded products, an invertible element in each component,
/// `Δ(A_σ) ⊆ A_σ⊗A_σ` and, when an antipode is given, `S(A_σ) ⊆ A_{σ⁻¹}`.
pub fn verify_crossed_grading(
    a: &QuasiBialgebra,
    antipode: Option<&QuasiHopf>,
    grading: &[u32],
    g: u32,
) -> VerificationReport {
    let mut report = VerificationReport::new();
    let alg = &*a.alg;
    let d = alg.dim();
    let label = |i: u32| alg.label(i as usize).to_string();
    let all_in = |t: &Tensor, deg: u32| t.terms().keys().all(|k| k.iter().all(|&i| grading[i as usize] == deg));
    let bad_term = |t: &Tensor, deg: u32| {
        t.terms().keys().find(|k| k.iter().any(|&i| grading[i as usize] != deg)).map(|k| {
            k.iter().map(|&i| label(i)).collect::<Vec<_>>().join("⊗")
        })
    };
    report.expect("assoc_in_identity_component", all_in(&a.assoc, 0), || {
        format!("Φ term {}", bad_term(&a.assoc, 0).unwrap())
    });
    let bad = (0..d).into_par_iter().find_map_first(|i| {
        (0..d).find_map(|j| {
            let deg = (grading[i] + grading[j]) % g;
            let p = Tensor::from_vec(alg.product(i, j));
            bad_term(&p, deg).map(|t| format!("({}, {}) ↦ {t}", alg.label(i), alg.label(j)))
        })
    });
    report.expect("graded_product", bad.is_none(), || bad.clone().unwrap());
    let mut missing = None;
    for deg in 0..g {
        let found = (0..d).filter(|&i| grading[i] == deg).any(|i| invert_element(&[alg], &alg.basis(i)).is_ok());
        if !found && missing.is_none() {
            missing = Some(deg);
        }
    }
    report.expect("invertible_in_each_component", missing.is_none(), || {
        format!("no invertible basis element of degree {}", missing.unwrap())
    });
    let bad = (0..d).find_map(|i| bad_term(a.comult.image(i), grading[i]).map(|t| format!("Δ({}) ∋ {t}", alg.label(i))));
    report.expect("comult_graded", bad.is_none(), || bad.clone().unwrap());
    if let Some(h) = antipode {
        let bad = (0..d).find_map(|i| {
            bad_term(h.antipode.image(i), (g - grading[i]) % g).map(|t| format!("S({}) ∋ {t}", alg.label(i)))
        });
        report.expect("antipode_graded", bad.is_none(), || bad.clone().unwrap());
        let ok = all_in(&h.alpha, 0) && all_in(&h.beta, 0);
        report.expect("alpha_beta_in_identity_component", ok, || "α or β not of degree 0".into());
    }
    report.push(CheckRecord::pass("grading_defined").with_detail(format!("C_{g}, dim {d}")));
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasihopf::{verify_quasibialgebra, verify_quasihopf};
    use crate::tensoralg::verify_algebra;

    fn running() -> PointedDatum {
        PointedDatum::new(2, &[1], &[1], 1).unwrap()
    }

    #[test]
    fn datum_validation_names_violations() {
        assert_eq!(running().nilpotency(0), 4);
        let e = PointedDatum::new(2, &[1, 1], &[1, 1], 1).unwrap_err();
        assert!(matches!(e, Error::InvalidDatum(ref v) if v.iter().any(|s| s.contains("quantum linear space"))));
        assert!(PointedDatum::new(1, &[], &[], 1).is_err());
        assert!(PointedDatum::new(2, &[2], &[2], 1).is_err());
    }

    #[test]
    fn pbw_index_roundtrip() {
        let p = PbwIndex::new(vec![3, 4, 2]);
        for i in 0..p.count() {
            assert_eq!(p.index(&p.exps(i)), i);
        }
    }

    #[test]
    fn running_datum_bosonization() {
        let h = build_bosonization(&running());
        assert_eq!(h.alg().dim(), 16);
        assert!(verify_algebra(h.alg()).all_passed());
        // χ·x₁ = q·x₁χ
        let lhs = h.alg().mul(&h.chi_pow(1), &h.x(0));
        let x_chi = h.alg().basis(h.index(&[1], 1));
        assert_eq!(lhs, x_chi.scaled(&h.datum.q(1)));
        let r = verify_quasibialgebra(&h.hopf.base);
        assert!(r.all_passed(), "{r}");
        let r = verify_quasihopf(&h.hopf);
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn theta_zero_is_group_algebra() {
        let h = build_bosonization(&PointedDatum::new(2, &[], &[], 1).unwrap());
        assert_eq!(h.alg().dim(), 4);
        assert!(verify_quasihopf(&h.hopf).all_passed());
    }

    #[test]
    fn idempotents_of_kc4() {
        let id = primitive_idempotents(4);
        let alg = &id.hopf.base.alg;
        assert!(alg.mul(&id.chi[0], &id.chi[1]).is_zero());
        let mut sum = Tensor::zero(1);
        for e in &id.chi {
            sum = &sum + e;
        }
        assert_eq!(sum, alg.unit());
        let half = CycNum::from_ratio(4, 1, 2);
        let expected = &alg.basis(0).scaled(&half) + &alg.basis(2).scaled(&half);
        assert_eq!(id.sigma.as_ref().unwrap()[0], expected);
        let one = primitive_idempotents(1);
        assert_eq!(one.chi.len(), 1);
        assert_eq!(one.chi[0], one.hopf.base.alg.unit());
    }

    #[test]
    fn sigma_idempotents_are_sums_of_chi_idempotents() {
        let datum = PointedDatum::new(3, &[1], &[1], 1).unwrap();
        let h = build_bosonization(&datum);
        for j in 0..3 {
            let mut sum = Tensor::zero(1);
            for a in (0..9).filter(|a| a % 3 == j) {
                sum = &sum + &h.idem(a);
            }
            assert_eq!(sum, h.idem_sigma(j));
        }
    }

    #[test]
    fn js_has_closed_form_and_is_counital() {
        let h = build_bosonization(&running());
        let j = build_js(&h, 1).unwrap();
        // J_s = Σ_i 1_i ⊗ σ^{s·t(i)}, i = i′ + m·t(i)
        let mut closed = Tensor::zero(2);
        for i in 0..4 {
            closed = &closed + &h.idem(i).tensor(&h.chi_pow(2 * (i / 2)));
        }
        assert_eq!(j.value, closed);
        assert_eq!(h.hopf.base.eps_at(&j.value, 0), h.alg().unit());
        assert!(build_js(&h, 0).is_err());
    }

    #[test]
    fn ahs_running_datum() {
        let h = build_bosonization(&running());
        let tw = build_twisted(&h, 1).unwrap();
        let a = build_ahs(&h, &tw).unwrap();
        assert_eq!(a.alg().dim(), 8);
        assert!(verify_algebra(a.alg()).all_passed());
        let r = verify_quasibialgebra(&a.quasi);
        assert!(r.all_passed(), "{r}");
        // ω₁(1,1,1) = q^{1·(1+1−0)} = −1
        let idem = a.idem_sigma_all();
        let e = idem[1].tensor(&idem[1]).tensor(&idem[1]);
        let coeff = a.quasi.mul(3, &a.quasi.assoc, &e);
        assert_eq!(coeff, e.scaled(&CycNum::from_int(4, -1)));
        let hopf = a.hopf.as_ref().expect("normalized antipode restricts");
        let r = verify_quasihopf(hopf);
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn twisted_associator_matches_closed_form() {
        for (m, d, b, s) in [(2u32, 1i64, 1i64, 1u32), (3, 1, 2, 2), (3, 2, 2, 1)] {
            let datum = PointedDatum::new(m, &[d], &[b], s).unwrap();
            let h = build_bosonization(&datum);
            let idem: Vec<Tensor> = (0..m as i64).map(|j| h.idem_sigma(j)).collect();
            let tw = build_twisted(&h, datum.s()).unwrap();
            let s = datum.s();
            if m == 2 {
                assert_eq!(tw.hj.base.assoc, dassociator_closed_form(&datum, s, &idem));
            } else {
                // dJ_s carries the cocycle exponent of opposite sign
                assert_eq!(tw.hj.base.assoc, dassociator_closed_form(&datum, m - s, &idem));
            }
        }
    }

    #[test]
    fn delta_js_expanded_matches_twist() {
        for (m, d, b) in [(2u32, 1i64, 1i64), (3, 1, 2), (3, 4, 2)] {
            let datum = PointedDatum::new(m, &[d], &[b], (b.rem_euclid(m as i64)) as u32).unwrap();
            let h = build_bosonization(&datum);
            let tw = build_twisted(&h, datum.s()).unwrap();
            let actual = tw.hj.base.delta(&h.x(0));
            assert_eq!(actual, delta_js_expanded(&h, datum.s(), 0));
        }
    }

    #[test]
    fn crossed_grading_on_twisted_algebra() {
        let h = build_bosonization(&running());
        let tw = build_twisted(&h, 1).unwrap();
        let g = h.cm_grading();
        let r = verify_crossed_grading(&tw.hj_normalized.base, Some(&tw.hj_normalized), &g, 2);
        assert!(r.all_passed(), "{r}");
        let mut bad = g.clone();
        bad[1] = 0;
        assert!(!verify_crossed_grading(&tw.hj.base, None, &bad, 2).all_passed());
        let kc4 = build_bosonization(&PointedDatum::new(2, &[], &[], 1).unwrap());
        let r = verify_crossed_grading(&kc4.hopf.base, Some(&kc4.hopf), &kc4.cm_grading(), 2);
        assert!(r.all_passed(), "{r}");
    }
}
