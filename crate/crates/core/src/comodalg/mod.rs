//! Left comodule algebras `(K, λ, Φ_λ)` over quasi-bialgebras.
//!
//! Mixed tensors are keyed slot by slot: `λ(x)` lives in `A⊗K`, `Φ_λ` in
//! `A⊗A⊗K`, and the first comodule-algebra identity in `A⊗A⊗A⊗K`.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quasihopf::{twist_unchecked, QuasiBialgebra, Twist};
use crate::report::{CheckRecord, VerificationReport};
use crate::tensoralg::{
    invert_element, mul_all, mul_in, render, unit_in, verify_algebra_map, AlgRef, FinAlgebra, LinMap, SubBasis, Tensor,
};

pub mod crossed;
pub mod extend;
pub mod loewy;
pub mod simple;

pub use crossed::{
    comod_crossed_product, compose_twisted_endos, decompose_comod_crossed_product, hat_subalgebra,
    verify_comod_iso, verify_comod_twisted_endo, verify_f_crossed_system, ComodDecomposition, ComodTwistedEndo,
    FCrossedSystem, Hat,
};
pub use extend::extend_by_cp;
pub use loewy::{cross_check_simplicity, loewy_filtration, Loewy};
pub use simple::{is_right_simple, operator_closure_dim, Certificate, Simplicity};

#[derive(Clone, Debug, PartialEq)]
pub struct ComodAlgebra {
    pub over: QuasiBialgebra,
    pub alg: AlgRef,
    /// `λ: K → A⊗K`.
    pub coaction: LinMap,
    pub assoc: Tensor,
    pub assoc_inv: Tensor,
}

impl ComodAlgebra {
    /// Inverts `Φ_λ` in `A⊗A⊗K`.
    pub fn new(over: QuasiBialgebra, alg: AlgRef, coaction: LinMap, assoc: Tensor) -> Result<Self> {
        let assoc_inv = invert_element(&[&*over.alg, &*over.alg, &*alg], &assoc)?;
        Ok(ComodAlgebra { over, alg, coaction, assoc, assoc_inv })
    }

    /// `Φ_λ = 1⊗1⊗1`.
    pub fn with_trivial_associator(over: QuasiBialgebra, alg: AlgRef, coaction: LinMap) -> Self {
        let one = unit_in(&[&*over.alg, &*over.alg, &*alg]);
        ComodAlgebra { over, alg, coaction, assoc: one.clone(), assoc_inv: one }
    }

    /// `(A, Δ, Φ)`.
    pub fn regular(over: &QuasiBialgebra) -> Self {
        ComodAlgebra {
            alg: Arc::clone(&over.alg),
            coaction: over.comult.clone(),
            assoc: over.assoc.clone(),
            assoc_inv: over.assoc_inv.clone(),
            over: over.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn order(&self) -> u32 {
        self.alg.order()
    }

    /// `[A, …, A, K]` with `r` copies of `A`.
    pub fn algs(&self, r: usize) -> Vec<&FinAlgebra> {
        let mut v = vec![&*self.over.alg; r];
        v.push(&*self.alg);
        v
    }

    pub fn lambda(&self, x: &Tensor) -> Tensor {
        self.coaction.apply(x)
    }

    /// `λ` applied to the `K` slot (the last one) of a mixed tensor.
    pub fn lambda_last(&self, t: &Tensor) -> Tensor {
        self.coaction.apply_slot(t, t.arity() - 1)
    }

    pub fn render(&self, t: &Tensor) -> String {
        render(&self.algs(t.arity() - 1), t)
    }
}

fn push_eq(report: &mut VerificationReport, name: &str, algs: &[&FinAlgebra], witness: &str, lhs: &Tensor, rhs: &Tensor) {
    if lhs == rhs {
        report.push(CheckRecord::pass(name));
    } else {
        report.push(CheckRecord::fail(name, witness).with_sides(render(algs, lhs), render(algs, rhs)));
    }
}

/// First basis element `x` of `K` with `lhs(x) != rhs(x)`, reported in `algs`.
fn push_basis_law<F>(report: &mut VerificationReport, name: &str, k: &FinAlgebra, algs: &[&FinAlgebra], f: F)
where
    F: Fn(usize) -> (Tensor, Tensor) + Sync,
{
    let bad = (0..k.dim()).into_par_iter().find_map_first(|i| {
        let (l, r) = f(i);
        (l != r).then_some((i, l, r))
    });
    match bad {
        None => report.push(CheckRecord::pass(name)),
        Some((i, l, r)) => report.push(
            CheckRecord::fail(name, format!("x = {}", k.label(i))).with_sides(render(algs, &l), render(algs, &r)),
        ),
    }
}

/// Checks that `λ` is an algebra map and (comod-alg1)–(comod-alg3).
///
/// Coassociativity of `λ` is never assumed. Whether `(ε⊗id)λ = id` holds is
/// reported as a detail only.
pub fn verify_comodule_algebra(k: &ComodAlgebra) -> VerificationReport {
    let mut report = VerificationReport::new();
    let a = &k.over;
    let alg = &*k.alg;
    report.absorb("", verify_algebra_map("lambda", &k.coaction, alg, &k.algs(1)));

    let m4 = k.algs(3);
    let one_a = a.alg.unit();
    let one_k = alg.unit();
    let phi = &k.assoc;
    let lhs = mul_all(&m4, &[&one_a.tensor(phi), &a.delta_at(phi, 1), &a.assoc.tensor(&one_k)]);
    let rhs = mul_in(&m4, &k.lambda_last(phi), &a.delta_at(phi, 0));
    push_eq(&mut report, "comod_alg1", &m4, "Φ_λ", &lhs, &rhs);

    let m2 = k.algs(1);
    push_eq(&mut report, "comod_alg2", &m2, "Φ_λ", &a.eps_at(phi, 1), &unit_in(&m2));

    let m3 = k.algs(2);
    push_basis_law(&mut report, "comod_alg3", alg, &m3, |i| {
        let l = k.coaction.image(i);
        (mul_in(&m3, phi, &a.delta_at(l, 0)), mul_in(&m3, &k.lambda_last(l), phi))
    });

    let inv_ok = mul_in(&m3, phi, &k.assoc_inv) == unit_in(&m3) && mul_in(&m3, &k.assoc_inv, phi) == unit_in(&m3);
    report.expect("assoc_invertible", inv_ok, || "stored Φ_λ⁻¹".into());

    let counital = (0..alg.dim()).all(|i| a.eps_at(k.coaction.image(i), 0) == alg.basis(i));
    report.push(CheckRecord::pass("counit_flag").with_detail(format!("(ε⊗id)λ = id: {counital}")));
    report
}

/// `(K, λ, Φ_λ(J⁻¹⊗1))` over `A_J`.
pub fn twist_comodule_algebra(k: &ComodAlgebra, j: &Twist) -> ComodAlgebra {
    let over = twist_unchecked(&k.over, j);
    let m3 = k.algs(2);
    let one_k = k.alg.unit();
    let assoc = mul_in(&m3, &k.assoc, &j.inverse.tensor(&one_k));
    let assoc_inv = mul_in(&m3, &j.value.tensor(&one_k), &k.assoc_inv);
    ComodAlgebra { over, alg: Arc::clone(&k.alg), coaction: k.coaction.clone(), assoc, assoc_inv }
}

/// `x ↦ U λ(x) U⁻¹` for an invertible `U ∈ A⊗K`, with a new associator.
pub fn conjugate_coaction(k: &ComodAlgebra, u: &Tensor, u_inv: &Tensor, assoc: Tensor) -> Result<ComodAlgebra> {
    let m2 = k.algs(1);
    if mul_in(&m2, u, u_inv) != unit_in(&m2) {
        return Err(Error::NotInvertible(format!("conjugating element {}", render(&m2, u))));
    }
    let images = k.coaction.images().par_iter().map(|l| mul_all(&m2, &[u, l, u_inv])).collect();
    ComodAlgebra::new(k.over.clone(), Arc::clone(&k.alg), LinMap::new(2, images), assoc)
}

/// Pulls each slot of `t` through its own sub-basis.
pub(crate) fn pull_mixed(subs: &[&SubBasis], t: &Tensor) -> Option<Tensor> {
    let mut out = Tensor::zero(t.arity());
    for (k, c) in t.terms() {
        let key = k.iter().zip(subs).map(|(&i, s)| s.small_index(i as usize).map(|x| x as u32)).collect::<Option<_>>()?;
        out.add_term(key, c.clone());
    }
    Some(out)
}

/// Same comodule algebra viewed over `over`, which must have the same
/// structure tensors as the current base (labels may differ).
pub fn rebase(k: &ComodAlgebra, over: &QuasiBialgebra) -> Result<ComodAlgebra> {
    let same = k.over.alg.same_structure(&over.alg)
        && k.over.comult == over.comult
        && k.over.counit == over.counit
        && k.over.assoc == over.assoc;
    if !same {
        return Err(Error::Precondition("rebase target differs from the current base".into()));
    }
    Ok(ComodAlgebra { over: over.clone(), ..k.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointed::{build_bosonization, build_js, PointedDatum};
    use crate::quasihopf::group_hopf;

    #[test]
    fn regular_comodule_algebra_passes() {
        let h = build_bosonization(&PointedDatum::new(2, &[1], &[1], 1).unwrap());
        let rep = verify_comodule_algebra(&ComodAlgebra::regular(&h.hopf.base));
        assert!(rep.all_passed(), "{rep}");
    }

    #[test]
    fn perturbed_associator_fails_first_identity() {
        let g = group_hopf(2, "g", 2);
        let mut k = ComodAlgebra::regular(&g.base);
        let extra = Tensor::monomial(&[1, 1, 1], CycNum::from_int(2, 1));
        k.assoc = &k.assoc + &extra;
        let rep = verify_comodule_algebra(&k);
        assert!(!rep.passed("comod_alg1"));
    }

    #[test]
    fn twisting_regular_matches_twisted_base() {
        let h = build_bosonization(&PointedDatum::new(2, &[1], &[1], 1).unwrap());
        let j = build_js(&h, 1).unwrap();
        let reg = ComodAlgebra::regular(&h.hopf.base);
        let t = twist_comodule_algebra(&reg, &j);
        let rep = verify_comodule_algebra(&t);
        assert!(rep.all_passed(), "{rep}");
        let id = twist_comodule_algebra(&reg, &Twist::trivial(&h.hopf.base));
        assert_eq!(id, reg);
    }

    use crate::exactnum::CycNum;
}
