//! Quasi-bialgebras, quasi-Hopf algebras, twists and twisted homomorphisms,
//! with exact verifiers for every axiom.
//!
//! Elements of `A^{⊗r}` are arity-`r` [`Tensor`]s over the basis of `A`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactnum::CycNum;
use crate::report::{CheckRecord, VerificationReport};
use crate::tensoralg::{
    contract, invert_element, mul_all, mul_in, power_of, render, unit_in, verify_algebra_map, AlgRef, BasisLabel,
    FinAlgebra, LinMap, Piece, Tensor,
};

/// `(A, Δ, ε, Φ)` with `Φ⁻¹` stored alongside.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiBialgebra {
    pub alg: AlgRef,
    pub comult: LinMap,
    pub counit: LinMap,
    pub assoc: Tensor,
    pub assoc_inv: Tensor,
}

/// A quasi-bialgebra with antipode data `(S, α, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiHopf {
    pub base: QuasiBialgebra,
    pub antipode: LinMap,
    pub alpha: Tensor,
    pub beta: Tensor,
}

/// An invertible counital element of `A⊗A`.
#[derive(Clone, Debug, PartialEq)]
pub struct Twist {
    pub value: Tensor,
    pub inverse: Tensor,
}

/// A pair `(f, J)` with `f: A₁ → A₂` and `J ∈ A₂⊗A₂` invertible.
#[derive(Clone, Debug, PartialEq)]
pub struct TwistedHom {
    pub f: LinMap,
    pub j: Twist,
}

impl QuasiBialgebra {
    /// Computes and stores `Φ⁻¹`.
    pub fn new(alg: AlgRef, comult: LinMap, counit: LinMap, assoc: Tensor) -> Result<Self> {
        let assoc_inv = invert_element(&power_of(&alg, 3), &assoc)?;
        Ok(QuasiBialgebra { alg, comult, counit, assoc, assoc_inv })
    }

    /// An ordinary bialgebra: `Φ = 1⊗1⊗1`.
    pub fn with_trivial_associator(alg: AlgRef, comult: LinMap, counit: LinMap) -> Self {
        let one = unit_in(&power_of(&alg, 3));
        QuasiBialgebra { alg, comult, counit, assoc: one.clone(), assoc_inv: one }
    }

    /// Uses a known inverse after checking `ΦΦ⁻¹ = Φ⁻¹Φ = 1`.
    pub fn with_inverse(alg: AlgRef, comult: LinMap, counit: LinMap, assoc: Tensor, assoc_inv: Tensor) -> Result<Self> {
        check_inverse(&alg, 3, &assoc, &assoc_inv)?;
        Ok(QuasiBialgebra { alg, comult, counit, assoc, assoc_inv })
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn order(&self) -> u32 {
        self.alg.order()
    }

    pub fn algs(&self, r: usize) -> Vec<&FinAlgebra> {
        power_of(&self.alg, r)
    }

    /// `Δ(x)` for an element `x` of `A`.
    pub fn delta(&self, x: &Tensor) -> Tensor {
        self.comult.apply(x)
    }

    pub fn eps(&self, x: &Tensor) -> CycNum {
        self.counit.apply(x).scalar_value(self.order())
    }

    /// Applies `Δ` to slot `slot` of an element of `A^{⊗r}`.
    pub fn delta_at(&self, t: &Tensor, slot: usize) -> Tensor {
        self.comult.apply_slot(t, slot)
    }

    pub fn eps_at(&self, t: &Tensor, slot: usize) -> Tensor {
        self.counit.apply_slot(t, slot)
    }

    pub fn unit(&self, r: usize) -> Tensor {
        unit_in(&self.algs(r))
    }

    pub fn mul(&self, r: usize, x: &Tensor, y: &Tensor) -> Tensor {
        mul_in(&self.algs(r), x, y)
    }

    pub fn render(&self, t: &Tensor) -> String {
        render(&self.algs(t.arity()), t)
    }
}

fn check_inverse(alg: &FinAlgebra, r: usize, x: &Tensor, y: &Tensor) -> Result<()> {
    let algs = power_of(alg, r);
    let one = unit_in(&algs);
    if mul_in(&algs, x, y) != one || mul_in(&algs, y, x) != one {
        return Err(Error::NotInvertible(format!("supplied inverse is wrong for {}", render(&algs, x))));
    }
    Ok(())
}

fn push_eq(report: &mut VerificationReport, name: &str, algs: &[&FinAlgebra], witness: &str, lhs: &Tensor, rhs: &Tensor) {
    if lhs == rhs {
        report.push(CheckRecord::pass(name));
    } else {
        report.push(CheckRecord::fail(name, witness).with_sides(render(algs, lhs), render(algs, rhs)));
    }
}

/// First basis index `i` (in order) with `lhs(i) != rhs(i)`.
fn first_basis_failure<F>(dim: usize, f: F) -> Option<(usize, Tensor, Tensor)>
where
    F: Fn(usize) -> (Tensor, Tensor) + Sync,
{
    (0..dim).into_par_iter().find_map_first(|i| {
        let (l, r) = f(i);
        (l != r).then_some((i, l, r))
    })
}

fn push_basis_law<F>(report: &mut VerificationReport, name: &str, alg: &FinAlgebra, arity: usize, f: F)
where
    F: Fn(usize) -> (Tensor, Tensor) + Sync,
{
    match first_basis_failure(alg.dim(), f) {
        None => report.push(CheckRecord::pass(name)),
        Some((i, l, r)) => {
            let algs = power_of(alg, arity);
            report.push(
                CheckRecord::fail(name, format!("h = {}", alg.label(i))).with_sides(render(&algs, &l), render(&algs, &r)),
            )
        }
    }
}

/// Checks that `Δ` and `ε` are algebra maps and (q1)–(q4).
pub fn verify_quasibialgebra(a: &QuasiBialgebra) -> VerificationReport {
    let mut report = VerificationReport::new();
    let alg = &*a.alg;
    report.absorb("", verify_algebra_map("delta", &a.comult, alg, &a.algs(2)));
    report.absorb("", verify_algebra_map("eps", &a.counit, alg, &[]));

    let a3 = a.algs(3);
    push_basis_law(&mut report, "q1", alg, 3, |i| {
        let d = a.comult.image(i);
        let dl = a.delta_at(d, 0);
        let dr = a.delta_at(d, 1);
        (mul_in(&a3, &a.assoc, &dl), mul_in(&a3, &dr, &a.assoc))
    });
    push_basis_law(&mut report, "q2_right_counit", alg, 1, |i| {
        let d = a.comult.image(i);
        (a.eps_at(d, 1), a.alg.basis(i))
    });
    push_basis_law(&mut report, "q2_left_counit", alg, 1, |i| {
        let d = a.comult.image(i);
        (a.eps_at(d, 0), a.alg.basis(i))
    });

    let a4 = a.algs(4);
    let phi = &a.assoc;
    let one = a.alg.unit();
    let lhs = mul_all(&a4, &[&one.tensor(phi), &a.delta_at(phi, 1), &phi.tensor(&one)]);
    let rhs = mul_in(&a4, &a.delta_at(phi, 2), &a.delta_at(phi, 0));
    push_eq(&mut report, "q3", &a4, "Φ", &lhs, &rhs);

    let mid = a.eps_at(phi, 1);
    push_eq(&mut report, "q4", &a.algs(2), "Φ", &mid, &a.unit(2));

    let inv_ok = mul_in(&a3, phi, &a.assoc_inv) == a.unit(3) && mul_in(&a3, &a.assoc_inv, phi) == a.unit(3);
    report.expect("assoc_invertible", inv_ok, || "stored Φ⁻¹".into());
    report
}

impl QuasiHopf {
    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn alg(&self) -> &FinAlgebra {
        &self.base.alg
    }

    /// `S(x)` for an element `x` of `A`.
    pub fn s(&self, x: &Tensor) -> Tensor {
        self.antipode.apply(x)
    }
}

/// Checks (q5), (q6) and that `S` is a unital algebra anti-morphism.
pub fn verify_quasihopf(h: &QuasiHopf) -> VerificationReport {
    let mut report = VerificationReport::new();
    let a = &h.base;
    let alg = &*a.alg;
    let s = &h.antipode;
    let d = alg.dim();

    let anti = (0..d).into_par_iter().find_map_first(|i| {
        (0..d).find_map(|j| {
            let l = s.apply(&Tensor::from_vec(alg.product(i, j)));
            let r = alg.mul(s.image(j), s.image(i));
            (l != r).then_some((i, j, l, r))
        })
    });
    match anti {
        None => report.push(CheckRecord::pass("antipode_anti_multiplicative")),
        Some((i, j, l, r)) => report.push(
            CheckRecord::fail("antipode_anti_multiplicative", format!("(x,y) = ({}, {})", alg.label(i), alg.label(j)))
                .with_sides(render(&[alg], &l), render(&[alg], &r)),
        ),
    }
    let su = s.apply(&alg.unit());
    push_eq(&mut report, "antipode_unital", &[alg], "1", &su, &alg.unit());

    push_basis_law(&mut report, "q5_alpha", alg, 1, |i| {
        let lhs = contract(alg, a.comult.image(i), &[Piece::Slot(0, Some(s)), Piece::Elem(&h.alpha), Piece::Slot(1, None)]);
        (lhs, h.alpha.scaled(&a.eps(&alg.basis(i))))
    });
    push_basis_law(&mut report, "q5_beta", alg, 1, |i| {
        let lhs = contract(alg, a.comult.image(i), &[Piece::Slot(0, None), Piece::Elem(&h.beta), Piece::Slot(1, Some(s))]);
        (lhs, h.beta.scaled(&a.eps(&alg.basis(i))))
    });

    let one = alg.unit();
    let l1 = contract(
        alg,
        &a.assoc,
        &[Piece::Slot(0, None), Piece::Elem(&h.beta), Piece::Slot(1, Some(s)), Piece::Elem(&h.alpha), Piece::Slot(2, None)],
    );
    push_eq(&mut report, "q6_phi", &[alg], "Φ¹βS(Φ²)αΦ³", &l1, &one);
    let l2 = contract(
        alg,
        &a.assoc_inv,
        &[Piece::Slot(0, Some(s)), Piece::Elem(&h.alpha), Piece::Slot(1, None), Piece::Elem(&h.beta), Piece::Slot(2, Some(s))],
    );
    push_eq(&mut report, "q6_phi_inverse", &[alg], "S(Φ⁻¹)αΦ⁻²βS(Φ⁻³)", &l2, &one);
    report
}

impl Twist {
    /// Inverts `J` and checks `(ε⊗id)(J) = 1 = (id⊗ε)(J)`.
    pub fn new(a: &QuasiBialgebra, value: Tensor) -> Result<Self> {
        let inverse = invert_element(&a.algs(2), &value)?;
        let t = Twist { value, inverse };
        t.check_counital(a)?;
        Ok(t)
    }

    pub fn with_inverse(a: &QuasiBialgebra, value: Tensor, inverse: Tensor) -> Result<Self> {
        check_inverse(&a.alg, 2, &value, &inverse)?;
        let t = Twist { value, inverse };
        t.check_counital(a)?;
        Ok(t)
    }

    pub fn trivial(a: &QuasiBialgebra) -> Self {
        Twist { value: a.unit(2), inverse: a.unit(2) }
    }

    pub fn inverted(&self) -> Twist {
        Twist { value: self.inverse.clone(), inverse: self.value.clone() }
    }

    fn check_counital(&self, a: &QuasiBialgebra) -> Result<()> {
        let one = a.alg.unit();
        if a.eps_at(&self.value, 0) != one || a.eps_at(&self.value, 1) != one {
            return Err(Error::Precondition(format!("twist is not counital: {}", a.render(&self.value))));
        }
        Ok(())
    }
}

/// `(1⊗J)(id⊗Δ)(J) Φ (Δ⊗id)(J⁻¹)(J⁻¹⊗1)` together with its inverse.
pub fn twisted_associator(a: &QuasiBialgebra, j: &Twist) -> (Tensor, Tensor) {
    let a3 = a.algs(3);
    let one = a.alg.unit();
    let phi = mul_all(
        &a3,
        &[&one.tensor(&j.value), &a.delta_at(&j.value, 1), &a.assoc, &a.delta_at(&j.inverse, 0), &j.inverse.tensor(&one)],
    );
    let inv = mul_all(
        &a3,
        &[&j.value.tensor(&one), &a.delta_at(&j.value, 0), &a.assoc_inv, &a.delta_at(&j.inverse, 1), &one.tensor(&j.inverse)],
    );
    (phi, inv)
}

/// `(A_J, Δ_J, ε, Φ_J)` without verification.
pub fn twist_unchecked(a: &QuasiBialgebra, j: &Twist) -> QuasiBialgebra {
    let a2 = a.algs(2);
    let images = a.comult.images().par_iter().map(|d| mul_all(&a2, &[&j.value, d, &j.inverse])).collect();
    let (assoc, assoc_inv) = twisted_associator(a, j);
    QuasiBialgebra {
        alg: Arc::clone(&a.alg),
        comult: LinMap::new(2, images),
        counit: a.counit.clone(),
        assoc,
        assoc_inv,
    }
}

/// Twists a quasi-bialgebra and verifies the result.
pub fn twist(a: &QuasiBialgebra, j: &Twist) -> Result<QuasiBialgebra> {
    let out = twist_unchecked(a, j);
    let rep = verify_quasibialgebra(&out);
    if !rep.all_passed() {
        return Err(Error::Verification(format!("twisted structure fails:\n{rep}")));
    }
    Ok(out)
}

/// Twists a quasi-Hopf algebra, keeping `S` and transforming `α`, `β`.
pub fn twist_hopf(h: &QuasiHopf, j: &Twist) -> Result<QuasiHopf> {
    Ok(twist_hopf_with(h, j, twist(&h.base, j)?))
}

pub fn twist_hopf_unchecked(h: &QuasiHopf, j: &Twist) -> QuasiHopf {
    twist_hopf_with(h, j, twist_unchecked(&h.base, j))
}

fn twist_hopf_with(h: &QuasiHopf, j: &Twist, base: QuasiBialgebra) -> QuasiHopf {
    let alg = h.alg();
    let s = &h.antipode;
    let alpha = contract(alg, &j.inverse, &[Piece::Slot(0, Some(s)), Piece::Elem(&h.alpha), Piece::Slot(1, None)]);
    let beta = contract(alg, &j.value, &[Piece::Slot(0, None), Piece::Elem(&h.beta), Piece::Slot(1, Some(s))]);
    QuasiHopf { base, antipode: s.clone(), alpha, beta }
}

impl TwistedHom {
    pub fn identity(a: &QuasiBialgebra) -> Self {
        TwistedHom { f: LinMap::identity(a.dim(), a.order()), j: Twist::trivial(a) }
    }

    /// `f^{⊗r}` applied to an element of `A₁^{⊗r}`.
    pub fn f_all(&self, t: &Tensor) -> Tensor {
        let mut out = t.clone();
        for s in (0..t.arity()).rev() {
            out = self.f.apply_slot(&out, s);
        }
        out
    }
}

/// Checks that `f` is an algebra map and (tw1)–(tw4).
pub fn verify_twisted_hom(h: &TwistedHom, a1: &QuasiBialgebra, a2: &QuasiBialgebra) -> VerificationReport {
    let mut report = VerificationReport::new();
    report.absorb("", verify_algebra_map("f", &h.f, &a1.alg, &[&a2.alg]));
    let j = &h.j.value;
    let one = a2.alg.unit();
    let a3 = a2.algs(3);
    let lhs = mul_all(&a3, &[&a2.assoc, &a2.delta_at(j, 0), &j.tensor(&one)]);
    let rhs = mul_all(&a3, &[&a2.delta_at(j, 1), &one.tensor(j), &h.f_all(&a1.assoc)]);
    push_eq(&mut report, "tw1", &a3, "Φ", &lhs, &rhs);

    let ok2 = a2.eps_at(j, 0) == one && a2.eps_at(j, 1) == one;
    report.expect("tw2", ok2, || format!("J = {}", a2.render(j)));

    let bad3 = (0..a1.dim()).find(|&i| a2.eps(h.f.image(i)) != a1.eps(&a1.alg.basis(i)));
    report.expect("tw3", bad3.is_none(), || format!("a = {}", a1.alg.label(bad3.unwrap())));

    let a22 = a2.algs(2);
    push_basis_law(&mut report, "tw4", &a1.alg, 2, |i| {
        let l = mul_in(&a22, &a2.delta(h.f.image(i)), j);
        let r = mul_in(&a22, j, &h.f_all(a1.comult.image(i)));
        (l, r)
    });
    let inv_ok = mul_in(&a22, j, &h.j.inverse) == a2.unit(2) && mul_in(&a22, &h.j.inverse, j) == a2.unit(2);
    report.expect("j_invertible", inv_ok, || "stored J⁻¹".into());
    report
}

/// `(g∘f, J_g (g⊗g)(J_f))`.
pub fn compose_twisted_homs(g: &TwistedHom, f: &TwistedHom, a3: &QuasiBialgebra) -> TwistedHom {
    let algs = a3.algs(2);
    let value = mul_in(&algs, &g.j.value, &g.f_all(&f.j.value));
    let inverse = mul_in(&algs, &g.f_all(&f.j.inverse), &g.j.inverse);
    TwistedHom { f: f.f.then(&g.f), j: Twist { value, inverse } }
}

/// The Hopf algebra `kC_n` with `Δ(g) = g⊗g`, `S(g) = g⁻¹`, over `Q(ζ_order)`.
pub fn group_hopf(n: u32, symbol: &str, order: u32) -> QuasiHopf {
    let labels = (0..n).map(|e| BasisLabel::Group { symbol: symbol.into(), exp: e }).collect();
    let one = CycNum::one(order);
    let o = one.clone();
    let alg = Arc::new(FinAlgebra::from_fn(format!("kC{n}"), order, labels, vec![(0, one.clone())], move |i, j| {
        vec![(((i + j) % n as usize) as u32, o.clone())]
    }));
    let comult = LinMap::new(2, (0..n).map(|i| Tensor::monomial(&[i, i], one.clone())).collect());
    let counit = LinMap::new(0, (0..n).map(|_| Tensor::scalar(one.clone())).collect());
    let antipode = LinMap::new(1, (0..n).map(|i| Tensor::monomial(&[(n - i) % n], one.clone())).collect());
    let base = QuasiBialgebra::with_trivial_associator(alg, comult, counit);
    let u = base.alg.unit();
    QuasiHopf { base, antipode, alpha: u.clone(), beta: u }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_algebra_is_hopf() {
        let h = group_hopf(4, "g", 4);
        let r = verify_quasibialgebra(&h.base);
        assert!(r.all_passed(), "{r}");
        let r = verify_quasihopf(&h);
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn trivial_twist_changes_nothing() {
        let h = group_hopf(3, "g", 3);
        let t = twist_hopf(&h, &Twist::trivial(&h.base)).unwrap();
        assert_eq!(t, h);
    }

    #[test]
    fn identity_twisted_hom_and_composition_units() {
        let h = group_hopf(4, "g", 4);
        let id = TwistedHom::identity(&h.base);
        assert!(verify_twisted_hom(&id, &h.base, &h.base).all_passed());
        // inversion g ↦ g⁻¹ is a Hopf automorphism of kC₄
        let inv = TwistedHom { f: h.antipode.clone(), j: Twist::trivial(&h.base) };
        assert!(verify_twisted_hom(&inv, &h.base, &h.base).all_passed());
        assert_eq!(compose_twisted_homs(&id, &inv, &h.base), inv);
        assert_eq!(compose_twisted_homs(&inv, &id, &h.base), inv);
    }

    #[test]
    fn non_counital_element_is_rejected_as_twist() {
        let h = group_hopf(2, "g", 2);
        let g = h.base.alg.basis(1);
        let j = g.tensor(&h.base.alg.unit());
        assert!(Twist::new(&h.base, j).is_err());
    }
}
