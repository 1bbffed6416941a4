//! Crossed systems over a quasi-Hopf algebra indexed by a finite cyclic
//! group `C_g = {h^0, …, h^{g−1}}`, crossed products `A#C_g`, crossed-system
//! antipodes and the decomposition of graded quasi-Hopf algebras.
//!
//! Group elements are exponents `0 ≤ i < g`. The basis vector `a_k # h^i`
//! of `A#C_g` has index `k·g + i`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pointed::{Ahs, PointedDatum, PointedHopf, TwistedPointed};
use crate::quasihopf::{
    verify_quasibialgebra, verify_quasihopf, verify_twisted_hom, QuasiBialgebra, QuasiHopf, Twist, TwistedHom,
};
use crate::report::{CheckRecord, VerificationReport};
use crate::tensoralg::{
    contract, invert_element, linalg, mul_all, mul_in, render, verify_algebra_map, BasisLabel, FinAlgebra,
    LinMap, Piece, SubBasis, Tensor,
};

/// `(σ_*, J_σ)` for each `σ ∈ C_g` and `θ_{(σ,τ)}` for each pair.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossedSystem {
    pub order: u32,
    pub base: QuasiBialgebra,
    pub actions: Vec<TwistedHom>,
    /// `theta[σ][τ]`.
    pub theta: Vec<Vec<Tensor>>,
}

/// `υ_σ` for each `σ ∈ C_g`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossedAntipode {
    pub upsilon: Vec<Tensor>,
}

impl CrossedSystem {
    pub fn trivial(base: QuasiBialgebra, order: u32) -> Self {
        let id = TwistedHom::identity(&base);
        let one = base.alg.unit();
        CrossedSystem {
            order,
            actions: vec![id; order as usize],
            theta: vec![vec![one; order as usize]; order as usize],
            base,
        }
    }

    fn mul(&self, s: u32, t: u32) -> u32 {
        (s + t) % self.order
    }

    fn inv(&self, s: u32) -> u32 {
        (self.order - s) % self.order
    }

    pub fn act(&self, s: u32, a: &Tensor) -> Tensor {
        self.actions[s as usize].f.apply(a)
    }

    pub fn th(&self, s: u32, t: u32) -> &Tensor {
        &self.theta[s as usize][t as usize]
    }

    /// `θ_{(σ,τ)} = θ_{(τ,σ)}` for all pairs.
    pub fn is_symmetric(&self) -> bool {
        (0..self.order).all(|s| (0..self.order).all(|t| self.th(s, t) == self.th(t, s)))
    }
}

fn group_pairs(g: u32) -> impl Iterator<Item = (u32, u32)> {
    (0..g).flat_map(move |s| (0..g).map(move |t| (s, t)))
}

/// Checks each `(σ_*, J_σ)` with (tw1)–(tw4), then (i)–(vi); reports the
/// symmetry of `θ` as a detail.
pub fn verify_crossed_system(cs: &CrossedSystem) -> VerificationReport {
    let mut report = VerificationReport::new();
    let a = &cs.base;
    let alg = &*a.alg;
    let g = cs.order;
    let one = alg.unit();
    for (i, act) in cs.actions.iter().enumerate() {
        report.absorb(&format!("twisted_hom[h^{i}]"), verify_twisted_hom(act, a, a));
    }
    let bad = group_pairs(g).find(|&(s, t)| a.eps(cs.th(s, t)) != alg.one());
    report.expect("(i)", bad.is_none(), || format!("(σ,τ) = {:?}", bad.unwrap()));

    let ok = cs.actions[0] == TwistedHom::identity(a);
    report.expect("(ii)", ok, || "σ = h^0".into());

    let bad = group_pairs(g).collect::<Vec<_>>().into_par_iter().find_map_first(|(s, t)| {
        let th = cs.th(s, t);
        (0..alg.dim()).find_map(|k| {
            let x = alg.basis(k);
            let l = alg.mul(th, &cs.act(cs.mul(s, t), &x));
            let r = alg.mul(&cs.act(s, &cs.act(t, &x)), th);
            (l != r).then_some((s, t, k, l, r))
        })
    });
    match bad {
        None => report.push(CheckRecord::pass("(iii)")),
        Some((s, t, k, l, r)) => report.push(
            CheckRecord::fail("(iii)", format!("(σ,τ) = (h^{s}, h^{t}), a = {}", alg.label(k)))
                .with_sides(render(&[alg], &l), render(&[alg], &r)),
        ),
    }

    let mut bad4 = None;
    'outer: for (s, t) in group_pairs(g) {
        for r in 0..g {
            let l = alg.mul(cs.th(s, t), cs.th(cs.mul(s, t), r));
            let rr = alg.mul(&cs.act(s, cs.th(t, r)), cs.th(s, cs.mul(t, r)));
            if l != rr {
                bad4 = Some((s, t, r, l, rr));
                break 'outer;
            }
        }
    }
    match bad4 {
        None => report.push(CheckRecord::pass("(iv)")),
        Some((s, t, r, l, rr)) => report.push(
            CheckRecord::fail("(iv)", format!("(σ,τ,ρ) = (h^{s}, h^{t}, h^{r})"))
                .with_sides(render(&[alg], &l), render(&[alg], &rr)),
        ),
    }

    let bad = (0..g).find(|&s| cs.th(0, s) != &one || cs.th(s, 0) != &one);
    report.expect("(v)", bad.is_none(), || format!("σ = h^{}", bad.unwrap()));

    let a2 = a.algs(2);
    let bad = group_pairs(g).find_map(|(s, t)| {
        let th = cs.th(s, t);
        let l = mul_in(&a2, &a.delta(th), &cs.actions[cs.mul(s, t) as usize].j.value);
        let act = &cs.actions[s as usize];
        let r = mul_all(&a2, &[&act.j.value, &act.f_all(&cs.actions[t as usize].j.value), &th.tensor(th)]);
        (l != r).then_some((s, t, l, r))
    });
    match bad {
        None => report.push(CheckRecord::pass("(vi)")),
        Some((s, t, l, r)) => report.push(
            CheckRecord::fail("(vi)", format!("(σ,τ) = (h^{s}, h^{t})")).with_sides(render(&a2, &l), render(&a2, &r)),
        ),
    }
    report.push(CheckRecord::pass("symmetry_flag").with_detail(format!("θ symmetric: {}", cs.is_symmetric())));
    report
}

/// `A#C_g` with its index helpers.
#[derive(Clone, Debug)]
pub struct CrossedProduct {
    pub qb: QuasiBialgebra,
    pub order: u32,
    pub base_dim: usize,
}

impl CrossedProduct {
    pub fn index(&self, k: usize, s: u32) -> usize {
        k * self.order as usize + s as usize
    }

    /// `a # h^s` for an element `a` of the base.
    pub fn embed(&self, a: &Tensor, s: u32) -> Tensor {
        let mut out = Tensor::zero(1);
        for (k, c) in a.terms() {
            out.add_term([self.index(k[0] as usize, s) as u32].into_iter().collect(), c.clone());
        }
        out
    }
}

fn smash_index(t: &Tensor, g: u32, s: u32) -> Tensor {
    let mut out = Tensor::zero(t.arity());
    for (k, c) in t.terms() {
        out.add_term(k.iter().map(|&i| i * g + s).collect(), c.clone());
    }
    out
}

/// Builds `A#C_g` without verification.
pub fn crossed_product_unchecked(cs: &CrossedSystem) -> CrossedProduct {
    let a = &cs.base;
    let alg = &*a.alg;
    let g = cs.order;
    let gu = g as usize;
    let d = alg.dim();
    let labels = (0..d * gu).map(|i| BasisLabel::Smash(Box::new(alg.label(i / gu).clone()), (i % gu) as u32)).collect();
    let unit = smash_index(&alg.unit(), g, 0).as_vec();
    let prod = FinAlgebra::from_fn(format!("{}#C{g}", alg.name()), alg.order(), labels, unit, |x, y| {
        let (k, s) = (x / gu, (x % gu) as u32);
        let (l, t) = (y / gu, (y % gu) as u32);
        let p = alg.mul(&alg.mul(&alg.basis(k), &cs.act(s, &alg.basis(l))), cs.th(s, t));
        smash_index(&p, g, cs.mul(s, t)).as_vec()
    });
    let a2 = a.algs(2);
    let comult = (0..d * gu)
        .into_par_iter()
        .map(|x| {
            let (k, s) = (x / gu, (x % gu) as u32);
            let dj = mul_in(&a2, a.comult.image(k), &cs.actions[s as usize].j.value);
            smash_index(&dj, g, s)
        })
        .collect();
    let counit = (0..d * gu).map(|x| a.counit.image(x / gu).clone()).collect();
    let qb = QuasiBialgebra {
        alg: Arc::new(prod),
        comult: LinMap::new(2, comult),
        counit: LinMap::new(0, counit),
        assoc: smash_index(&a.assoc, g, 0),
        assoc_inv: smash_index(&a.assoc_inv, g, 0),
    };
    CrossedProduct { qb, order: g, base_dim: d }
}

/// Builds `A#C_g` and verifies it is a quasi-bialgebra.
pub fn crossed_product(cs: &CrossedSystem) -> Result<CrossedProduct> {
    let out = crossed_product_unchecked(cs);
    let rep = verify_quasibialgebra(&out.qb);
    if !rep.all_passed() {
        return Err(Error::Verification(format!("crossed product fails:\n{rep}")));
    }
    Ok(out)
}

/// Checks the four antipode equations of a crossed system.
pub fn verify_crossed_antipode(cs: &CrossedSystem, h: &QuasiHopf, ups: &CrossedAntipode) -> VerificationReport {
    let mut report = VerificationReport::new();
    let alg = h.alg();
    let g = cs.order;
    let s_map = &h.antipode;
    let u = &ups.upsilon;
    let inv: Vec<Option<Tensor>> = u.iter().map(|x| invert_element(&[alg], x).ok()).collect();
    let bad = (0..g).find(|&s| inv[s as usize].is_none());
    report.expect("upsilon_invertible", bad.is_none(), || format!("σ = h^{}", bad.unwrap()));
    if bad.is_some() {
        return report;
    }
    let mut push = |name: &str, found: Option<(String, Tensor, Tensor)>| match found {
        None => report.push(CheckRecord::pass(name)),
        Some((w, l, r)) => {
            report.push(CheckRecord::fail(name, w).with_sides(render(&[alg], &l), render(&[alg], &r)))
        }
    };
    let eq1 = group_pairs(g).find_map(|(s, t)| {
        let st = cs.mul(s, t);
        let l = alg.mul(&u[st as usize], &cs.act(st, &s_map.apply(cs.th(s, t))));
        let r = mul_all(&[alg], &[&u[t as usize], &cs.act(cs.inv(t), &u[s as usize]), cs.th(cs.inv(t), cs.inv(s))]);
        (l != r).then(|| (format!("(σ,τ) = (h^{s}, h^{t})"), l, r))
    });
    push("upsilon_eq1", eq1);
    let eq2 = (0..g).find_map(|s| {
        let ui = inv[s as usize].as_ref().unwrap();
        (0..alg.dim()).find_map(|k| {
            let x = alg.basis(k);
            let l = mul_all(&[alg], &[ui, &s_map.apply(&x), &u[s as usize]]);
            let r = cs.act(cs.inv(s), &s_map.apply(&cs.act(s, &x)));
            (l != r).then(|| (format!("σ = h^{s}, x = {}", alg.label(k)), l, r))
        })
    });
    push("upsilon_eq2", eq2);
    let eq3 = (0..g).find_map(|s| {
        let j = &cs.actions[s as usize].j.value;
        let inner = contract(alg, j, &[Piece::Slot(0, Some(s_map)), Piece::Elem(&h.alpha), Piece::Slot(1, None)]);
        let l = mul_all(&[alg], &[&u[s as usize], &cs.act(cs.inv(s), &inner), cs.th(cs.inv(s), s)]);
        (l != h.alpha).then(|| (format!("σ = h^{s}"), l, h.alpha.clone()))
    });
    push("upsilon_eq3", eq3);
    let eq4 = (0..g).find_map(|s| {
        let act = &cs.actions[s as usize];
        let mut l = Tensor::zero(1);
        for (k, c) in act.j.value.terms() {
            let tail = mul_all(
                &[alg],
                &[&h.beta, &u[s as usize], &cs.act(cs.inv(s), &s_map.apply(&alg.basis(k[1] as usize)))],
            );
            let term = mul_all(&[alg], &[&alg.basis(k[0] as usize), &act.f.apply(&tail), cs.th(s, cs.inv(s))]);
            l.add_scaled(c, &term);
        }
        (l != h.beta).then(|| (format!("σ = h^{s}"), l, h.beta.clone()))
    });
    push("upsilon_eq4", eq4);
    report
}

/// `(S, α#e, β#e)` with `S(x#σ) = υ_σ(σ⁻¹)_*(S(x))#σ⁻¹`, after checking
/// the four antipode equations.
pub fn attach_crossed_antipode(
    cs: &CrossedSystem,
    product: &CrossedProduct,
    h: &QuasiHopf,
    ups: &CrossedAntipode,
) -> Result<QuasiHopf> {
    let rep = verify_crossed_antipode(cs, h, ups);
    if let Some(f) = rep.failures().next() {
        return Err(Error::Verification(format!(
            "crossed antipode fails {} at {}",
            f.name,
            f.witness.clone().unwrap_or_default()
        )));
    }
    let alg = h.alg();
    let g = cs.order;
    let images = (0..product.qb.dim())
        .map(|x| {
            let (k, s) = (x / g as usize, (x % g as usize) as u32);
            let si = cs.inv(s);
            let v = alg.mul(&ups.upsilon[s as usize], &cs.act(si, &h.antipode.apply(&alg.basis(k))));
            product.embed(&v, si)
        })
        .collect();
    Ok(QuasiHopf {
        base: product.qb.clone(),
        antipode: LinMap::new(1, images),
        alpha: product.embed(&h.alpha, 0),
        beta: product.embed(&h.beta, 0),
    })
}

/// The `C_m` system on `A(H,s)`: `(h^i)_*(a) = χ^{i′}aχ^{−i′}` computed in
/// `H`, `J_{h^i} = 1⊗1`, `θ_{(i,j)} = σ^{((i+j)−(i+j)′)/m}`.
///
/// `θ_{(i,j)} = σ` exactly when `i + j ≥ m`, including the boundary `i + j = m`.
pub fn canonical_cm_system(ahs: &Ahs, h: &PointedHopf) -> Result<CrossedSystem> {
    let m = ahs.m();
    let big = h.alg();
    let mut actions = Vec::new();
    for i in 0..m {
        let c = h.chi_pow(i as i64);
        let ci = h.chi_pow(-(i as i64));
        let images = (0..ahs.alg().dim())
            .map(|k| {
                let img = mul_all(&[big], &[&c, &big.basis(ahs.iota.big_index(k)), &ci]);
                ahs.iota.pull_or_err(&[big], &format!("(h^{i})_*({})", ahs.alg().label(k)), &img)
            })
            .collect::<Result<Vec<_>>>()?;
        actions.push(TwistedHom { f: LinMap::new(1, images), j: Twist::trivial(&ahs.quasi) });
    }
    let theta = (0..m)
        .map(|i| (0..m).map(|j| ahs.sigma_pow(((i + j) - (i + j) % m) as i64 / m as i64)).collect())
        .collect();
    Ok(CrossedSystem { order: m, base: ahs.quasi.clone(), actions, theta })
}

/// Checks that `φ: src → dst` is a bijective quasi-bialgebra morphism:
/// rank, multiplicativity on all basis pairs, comultiplicativity on all
/// basis elements, counit and associator.
pub fn verify_quasi_iso(phi: &LinMap, src: &QuasiBialgebra, dst: &QuasiBialgebra) -> VerificationReport {
    let mut report = VerificationReport::new();
    let rank = linalg::rank(&phi.images().iter().map(|t| t.terms().clone()).collect::<Vec<_>>(), src.order());
    let bij = rank == src.dim() && src.dim() == dst.dim();
    report.expect("phi_bijective", bij, || format!("rank {rank}, dims {} → {}", src.dim(), dst.dim()));
    report.absorb("", verify_algebra_map("phi", phi, &src.alg, &[&dst.alg]));
    let both = |t: &Tensor| {
        let mut out = t.clone();
        for s in (0..t.arity()).rev() {
            out = phi.apply_slot(&out, s);
        }
        out
    };
    let d2 = dst.algs(2);
    let bad = (0..src.dim()).into_par_iter().find_map_first(|k| {
        let l = dst.delta(phi.image(k));
        let r = both(src.comult.image(k));
        (l != r).then_some((k, l, r))
    });
    match bad {
        None => report.push(CheckRecord::pass("phi_comultiplicative")),
        Some((k, l, r)) => report.push(
            CheckRecord::fail("phi_comultiplicative", format!("x = {}", src.alg.label(k)))
                .with_sides(render(&d2, &l), render(&d2, &r)),
        ),
    }
    let bad = (0..src.dim()).find(|&k| dst.eps(phi.image(k)) != src.eps(&src.alg.basis(k)));
    report.expect("phi_counit", bad.is_none(), || format!("x = {}", src.alg.label(bad.unwrap())));
    let pa = both(&src.assoc);
    let d3 = dst.algs(3);
    if pa == dst.assoc {
        report.push(CheckRecord::pass("phi_associator"));
    } else {
        report.push(CheckRecord::fail("phi_associator", "Φ").with_sides(render(&d3, &pa), render(&d3, &dst.assoc)));
    }
    report
}

/// `φ(a#h^i) = ι(a)χ^{i′}`.
pub fn phi_map(ahs: &Ahs, h: &PointedHopf, product: &CrossedProduct) -> LinMap {
    let g = product.order as usize;
    let images = (0..product.qb.dim())
        .map(|x| {
            let (k, i) = (x / g, x % g);
            h.alg().mul(&h.alg().basis(ahs.iota.big_index(k)), &h.chi_pow(i as i64))
        })
        .collect();
    LinMap::new(1, images)
}

/// Everything involved in `A(H,s)#C_m ≅ H_{J_s}`.
#[derive(Clone, Debug)]
pub struct IsoCheck {
    pub h: PointedHopf,
    pub twisted: TwistedPointed,
    pub ahs: Ahs,
    pub system: CrossedSystem,
    pub product: CrossedProduct,
    pub phi: LinMap,
    pub report: VerificationReport,
}

/// Builds `H`, `H_{J_s}`, `A(H,s)`, the canonical system and its crossed
/// product, and checks that `φ` is an isomorphism.
pub fn verify_iso_ahs_h(datum: &PointedDatum) -> Result<IsoCheck> {
    let h = crate::pointed::build_bosonization(datum);
    let twisted = crate::pointed::build_twisted(&h, datum.s())?;
    let ahs = crate::pointed::build_ahs(&h, &twisted)?;
    let system = canonical_cm_system(&ahs, &h)?;
    let mut report = VerificationReport::new();
    report.absorb("system", verify_crossed_system(&system));
    let product = crossed_product(&system)?;
    let phi = phi_map(&ahs, &h, &product);
    report.absorb("phi", verify_quasi_iso(&phi, &product.qb, &twisted.hj.base));
    Ok(IsoCheck { h, twisted, ahs, system, product, phi, report })
}

/// Result of splitting a `C_g`-crossed product `A` as `A_e#C_g`.
#[derive(Clone, Debug)]
pub struct Decomposition {
    pub sub: SubBasis,
    pub system: CrossedSystem,
    /// `ψ(b#σ) = b·t_σ`.
    pub iso: LinMap,
    /// `B = A_e` with the restricted antipode and `υ_σ = S(t_σ)t_{σ⁻¹}⁻¹`,
    /// when an antipode was supplied.
    pub antipode: Option<(QuasiHopf, CrossedAntipode)>,
    pub report: VerificationReport,
}

/// Splits `A = ⊕ A_σ` (basis-homogeneous grading) as `A_e#C_g` using the
/// sections `t_σ`. With `normalize`, each `t_σ` is rescaled so that
/// `ε(t_σ) = 1`.
pub fn decompose_crossed_product(
    a: &QuasiBialgebra,
    antipode: Option<&QuasiHopf>,
    grading: &[u32],
    g: u32,
    sections: &[Tensor],
    normalize: bool,
) -> Result<Decomposition> {
    let alg = &*a.alg;
    let mut problems = Vec::new();
    let grep = crate::pointed::verify_crossed_grading(a, antipode, grading, g);
    for f in grep.failures() {
        problems.push(format!("grading: {} at {}", f.name, f.witness.clone().unwrap_or_default()));
    }
    if sections.len() != g as usize {
        problems.push(format!("{} sections for a group of order {g}", sections.len()));
    }
    if !problems.is_empty() {
        return Err(Error::Precondition(problems.join("; ")));
    }
    let mut t: Vec<Tensor> = sections.to_vec();
    for (s, ts) in t.iter_mut().enumerate() {
        if ts.terms().keys().any(|k| grading[k[0] as usize] != s as u32) {
            problems.push(format!("t_(h^{s}) is not homogeneous of degree {s}"));
        }
        let e = a.eps(ts);
        if !e.is_one() {
            if normalize && !e.is_zero() {
                *ts = ts.scaled(&e.invert()?);
            } else {
                problems.push(format!("ε(t_(h^{s})) = {e} ≠ 1"));
            }
        }
    }
    if t[0] != alg.unit() {
        problems.push("t_e ≠ 1".into());
    }
    let t_inv: Vec<Option<Tensor>> = t.iter().map(|x| invert_element(&[alg], x).ok()).collect();
    for (s, ti) in t_inv.iter().enumerate() {
        if ti.is_none() {
            problems.push(format!("t_(h^{s}) is not invertible"));
        }
    }
    if !problems.is_empty() {
        return Err(Error::Precondition(problems.join("; ")));
    }
    let t_inv: Vec<Tensor> = t_inv.into_iter().map(Option::unwrap).collect();

    let sub = SubBasis::new((0..alg.dim() as u32).filter(|&i| grading[i as usize] == 0).collect());
    let labels = (0..sub.dim()).map(|i| alg.label(sub.big_index(i)).clone()).collect();
    let b_alg = Arc::new(sub.restrict_algebra(alg, &format!("{}_e", alg.name()), labels)?);
    let a3 = a.algs(3);
    let b = QuasiBialgebra {
        alg: b_alg,
        comult: sub.restrict_map(alg, "Δ", &a.comult)?,
        counit: sub.restrict_map(alg, "ε", &a.counit)?,
        assoc: sub.pull_or_err(&a3, "Φ", &a.assoc)?,
        assoc_inv: sub.pull_or_err(&a3, "Φ⁻¹", &a.assoc_inv)?,
    };
    let a2 = a.algs(2);
    let mut actions = Vec::new();
    for s in 0..g as usize {
        let images = (0..sub.dim())
            .map(|k| {
                let img = mul_all(&[alg], &[&t[s], &alg.basis(sub.big_index(k)), &t_inv[s]]);
                sub.pull_or_err(&[alg], "t_σ a t_σ⁻¹", &img)
            })
            .collect::<Result<Vec<_>>>()?;
        let j = mul_in(&a2, &a.delta(&t[s]), &t_inv[s].tensor(&t_inv[s]));
        let jinv = mul_in(&a2, &t[s].tensor(&t[s]), &a.delta(&t_inv[s]));
        let j = Twist { value: sub.pull_or_err(&a2, "J_σ", &j)?, inverse: sub.pull_or_err(&a2, "J_σ⁻¹", &jinv)? };
        actions.push(TwistedHom { f: LinMap::new(1, images), j });
    }
    let mut theta = Vec::new();
    for s in 0..g {
        let mut row = Vec::new();
        for tt in 0..g {
            let st = ((s + tt) % g) as usize;
            let th = mul_all(&[alg], &[&t[s as usize], &t[tt as usize], &t_inv[st]]);
            row.push(sub.pull_or_err(&[alg], "θ", &th)?);
        }
        theta.push(row);
    }
    let system = CrossedSystem { order: g, base: b.clone(), actions, theta };
    let mut report = VerificationReport::new();
    report.absorb("system", verify_crossed_system(&system));
    let product = crossed_product_unchecked(&system);
    let gu = g as usize;
    let iso = LinMap::new(
        1,
        (0..product.qb.dim()).map(|x| alg.mul(&alg.basis(sub.big_index(x / gu)), &t[x % gu])).collect(),
    );
    report.absorb("iso", verify_quasi_iso(&iso, &product.qb, a));

    let antipode = match antipode {
        None => None,
        Some(h) => {
            let s_b = sub.restrict_map(alg, "S", &h.antipode)?;
            let hb = QuasiHopf {
                base: b.clone(),
                antipode: s_b,
                alpha: sub.pull_or_err(&[alg], "α", &h.alpha)?,
                beta: sub.pull_or_err(&[alg], "β", &h.beta)?,
            };
            let ups = (0..gu)
                .map(|s| {
                    let v = alg.mul(&h.antipode.apply(&t[s]), &t_inv[(gu - s) % gu]);
                    sub.pull_or_err(&[alg], "υ_σ", &v)
                })
                .collect::<Result<Vec<_>>>()?;
            Some((hb, CrossedAntipode { upsilon: ups }))
        }
    };
    Ok(Decomposition { sub, system, iso, antipode, report })
}

/// Convenience: verify the crossed product of a system with attached antipode.
pub fn verify_crossed_hopf(cs: &CrossedSystem, h: &QuasiHopf, ups: &CrossedAntipode) -> Result<VerificationReport> {
    let product = crossed_product(cs)?;
    let hopf = attach_crossed_antipode(cs, &product, h, ups)?;
    Ok(verify_quasihopf(&hopf))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::CycNum;
    use crate::quasihopf::group_hopf;

    fn running() -> PointedDatum {
        PointedDatum::new(2, &[1], &[1], 1).unwrap()
    }

    #[test]
    fn trivial_system_gives_tensor_product() {
        let h = group_hopf(3, "g", 3);
        let cs = CrossedSystem::trivial(h.base.clone(), 2);
        assert!(verify_crossed_system(&cs).all_passed());
        let p = crossed_product(&cs).unwrap();
        let k2 = group_hopf(2, "h", 3);
        let t = FinAlgebra::tensor_product(&h.base.alg, &k2.base.alg);
        assert!(p.qb.alg.same_structure(&t));
        let ups = CrossedAntipode { upsilon: vec![h.base.alg.unit(); 2] };
        let r = verify_crossed_hopf(&cs, &h, &ups).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn canonical_system_and_iso_running_datum() {
        let iso = verify_iso_ahs_h(&running()).unwrap();
        assert!(iso.report.all_passed(), "{}", iso.report);
        assert!(iso.system.is_symmetric());
        assert_eq!(iso.product.qb.dim(), 16);
        assert_eq!(iso.system.th(1, 1), &iso.ahs.sigma_pow(1));
        // (x₁#h)(x₁#h) = q^{d₁} x₁²σ # 1
        let p = &iso.product;
        let xh = p.embed(&iso.ahs.x(0), 1);
        let lhs = p.qb.alg.mul(&xh, &xh);
        let x2s = iso.ahs.alg().basis(iso.ahs.index(&[2], 1));
        assert_eq!(lhs, p.embed(&x2s, 0).scaled(&CycNum::root_of_unity(4, 1)));
        // φ(1#h) = χ and φ on A#{e} is ι
        assert_eq!(iso.phi.image(p.index(0, 1)), &iso.h.chi_pow(1));
        for k in 0..iso.ahs.alg().dim() {
            assert_eq!(iso.phi.image(p.index(k, 0)), &iso.h.alg().basis(iso.ahs.iota.big_index(k)));
        }
    }

    #[test]
    fn m3_theta_boundary() {
        let datum = PointedDatum::new(3, &[1], &[1], 1).unwrap();
        let h = crate::pointed::build_bosonization(&datum);
        let tw = crate::pointed::build_twisted(&h, 1).unwrap();
        let ahs = crate::pointed::build_ahs(&h, &tw).unwrap();
        let cs = canonical_cm_system(&ahs, &h).unwrap();
        assert_eq!(cs.th(1, 1), &ahs.alg().unit());
        assert_eq!(cs.th(1, 2), &ahs.sigma_pow(1));
        assert_eq!(cs.actions[0], TwistedHom::identity(&ahs.quasi));
        let r = verify_crossed_system(&cs);
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn perturbed_theta_fails_iii() {
        let iso = verify_iso_ahs_h(&running()).unwrap();
        let mut cs = iso.system.clone();
        // x₁ + 1 is a unit that does not commute with x₁σ
        let u = &iso.ahs.x(0) + &iso.ahs.alg().unit();
        cs.theta[1][1] = u;
        let r = verify_crossed_system(&cs);
        assert!(!r.passed("(iii)"));
    }

    #[test]
    fn decompose_twisted_h_recovers_canonical_system() {
        let iso = verify_iso_ahs_h(&running()).unwrap();
        let hj = &iso.twisted.hj_normalized;
        let t: Vec<Tensor> = (0..2).map(|i| iso.h.chi_pow(i)).collect();
        let dec = decompose_crossed_product(&hj.base, Some(hj), &iso.h.cm_grading(), 2, &t, false).unwrap();
        assert!(dec.report.all_passed(), "{}", dec.report);
        assert_eq!(dec.sub, iso.ahs.iota);
        assert!(dec.system.base.alg.same_structure(iso.ahs.alg()));
        assert_eq!(dec.system.actions, iso.system.actions);
        assert_eq!(dec.system.theta, iso.system.theta);
        let (hb, ups) = dec.antipode.unwrap();
        let r = verify_crossed_antipode(&dec.system, &hb, &ups);
        assert!(r.all_passed(), "{r}");
        let r = verify_crossed_hopf(&dec.system, &hb, &ups).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn decompose_group_algebra_and_reject_unnormalized_section() {
        let h = group_hopf(4, "χ", 4);
        let grading: Vec<u32> = (0..4).map(|i| i % 2).collect();
        let t = vec![h.base.alg.unit(), h.base.alg.basis(1)];
        let dec = decompose_crossed_product(&h.base, Some(&h), &grading, 2, &t, false).unwrap();
        assert!(dec.report.all_passed(), "{}", dec.report);
        assert_eq!(dec.system.base.dim(), 2);
        // θ_{(h,h)} = χ·χ·1 = σ
        assert_eq!(dec.system.th(1, 1), &dec.system.base.alg.basis(1));
        let two = CycNum::from_int(4, 2);
        let bad = vec![h.base.alg.unit(), h.base.alg.basis(1).scaled(&two)];
        assert!(decompose_crossed_product(&h.base, Some(&h), &grading, 2, &bad, false).is_err());
        assert!(decompose_crossed_product(&h.base, Some(&h), &grading, 2, &bad, true).is_ok());
    }
}
