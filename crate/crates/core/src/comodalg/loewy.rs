//! The filtration of a comodule algebra induced by a radical grading of `A`,
//! its associated graded comodule algebra and the degree-zero part.
//!
//! `K_i = λ⁻¹(A_{≤i}⊗K)` where `A_{≤i}` is the span of basis vectors of
//! degree at most `i`. This is increasing, `K_0` is the part with coaction
//! in `A[0]⊗K`, and `K_top = K`.

use std::sync::Arc;

use super::simple::is_right_simple;
use super::{pull_mixed, verify_comodule_algebra, ComodAlgebra};
use crate::error::{Error, Result};
use crate::quasihopf::QuasiBialgebra;
use crate::report::{CheckRecord, VerificationReport};
use crate::tensoralg::{linalg, BasisLabel, Echelon, FinAlgebra, Frame, Insert, LinMap, SparseVec, SubBasis, Tensor};

#[derive(Clone, Debug)]
pub struct Loewy {
    /// Dimensions of `K_0 ⊆ K_1 ⊆ … ⊆ K_top`.
    pub level_dims: Vec<usize>,
    /// A basis of `K` adapted to the filtration; vector `i` lies in level
    /// `level_of[i]` and not below.
    pub adapted: Frame,
    pub level_of: Vec<usize>,
    pub graded: ComodAlgebra,
    pub a0: QuasiBialgebra,
    pub a0_sub: SubBasis,
    /// `K[0]` over `A[0]`.
    pub degree0: ComodAlgebra,
    pub report: VerificationReport,
}

fn check_grading(a: &QuasiBialgebra, deg: &[u32]) -> Result<()> {
    let alg = &*a.alg;
    if deg.len() != alg.dim() {
        return Err(Error::Precondition(format!("{} degrees for an algebra of dimension {}", deg.len(), alg.dim())));
    }
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            if let Some((k, _)) = alg.product(i, j).iter().find(|(k, _)| deg[*k as usize] != deg[i] + deg[j]) {
                return Err(Error::Precondition(format!(
                    "grading inconsistency: {}·{} has a term {} of the wrong degree",
                    alg.label(i),
                    alg.label(j),
                    alg.label(*k as usize)
                )));
            }
        }
        if let Some((k, _)) = a.comult.image(i).terms().iter().find(|(k, _)| deg[k[0] as usize] + deg[k[1] as usize] != deg[i]) {
            return Err(Error::Precondition(format!(
                "grading inconsistency: Δ({}) has a term {}⊗{}",
                alg.label(i),
                alg.label(k[0] as usize),
                alg.label(k[1] as usize)
            )));
        }
    }
    if a.assoc.terms().keys().any(|k| k.iter().any(|&x| deg[x as usize] != 0)) {
        return Err(Error::Precondition("grading inconsistency: Φ is not in degree 0".into()));
    }
    Ok(())
}

/// Splits `t` (arity 1 in the adapted frame) by level.
fn keep_level(t: &Tensor, level_of: &[usize], n: usize) -> (Tensor, bool) {
    let mut out = Tensor::zero(1);
    let mut above = false;
    for (k, c) in t.terms() {
        let l = level_of[k[0] as usize];
        if l == n {
            out.add_term(k.clone(), c.clone());
        } else if l > n {
            above = true;
        }
    }
    (out, above)
}

/// Computes the filtration, `gr K` over `A`, and `K[0]` over `A[0]`.
pub fn loewy_filtration(k: &ComodAlgebra, a_degree: &[u32]) -> Result<Loewy> {
    let a = &k.over;
    check_grading(a, a_degree)?;
    let alg = &*k.alg;
    let d = alg.dim();
    let order = k.order();
    let top = a_degree.iter().copied().max().unwrap_or(0) as usize;

    let mut ech: Echelon<u32> = Echelon::new(order);
    let mut vecs = Vec::new();
    let mut level_of = Vec::new();
    let mut level_dims = Vec::new();
    let mut labels = Vec::new();
    for lvl in 0..=top {
        let high = |i: usize| -> SparseVec<(u32, u32)> {
            k.coaction
                .image(i)
                .terms()
                .iter()
                .filter(|(key, _)| a_degree[key[0] as usize] as usize > lvl)
                .map(|(key, c)| ((key[0], key[1]), c.clone()))
                .collect()
        };
        let images: Vec<_> = (0..d).map(high).collect();
        let kernel = linalg::kernel(&images, order);
        let dim_level = kernel.len();
        let units = (0..d).filter(|&i| images[i].is_empty()).map(|i| (Some(i), [(i as u32, crate::exactnum::CycNum::one(order))].into_iter().collect::<SparseVec<u32>>()));
        let rest = kernel.into_iter().map(|v| (None, v.into_iter().map(|(i, c)| (i as u32, c)).collect()));
        for (unit, v) in units.chain(rest) {
            if ech.rank() == dim_level {
                break;
            }
            if let Insert::New(_) = ech.insert(v.clone()) {
                let t = Tensor::from_terms(1, v.into_iter().map(|(i, c)| ([i].into_iter().collect(), c)).collect());
                labels.push(match unit {
                    Some(i) => alg.label(i).clone(),
                    None => BasisLabel::Named(format!("k[{lvl}]_{}", vecs.len())),
                });
                vecs.push(t);
                level_of.push(lvl);
            }
        }
        level_dims.push(dim_level);
    }
    if vecs.len() != d {
        return Err(Error::Precondition(format!("filtration reaches dimension {} of {d}", vecs.len())));
    }
    let adapted = Frame::new(vecs, order)?;
    let mut report = VerificationReport::new();

    let mut mult_fail = None;
    let mut table = Vec::with_capacity(d * d);
    for p in 0..d {
        for q in 0..d {
            let z = alg.mul(adapted.vector(p), adapted.vector(q));
            let coords = adapted.coords(&z).expect("adapted frame spans K");
            let (kept, above) = keep_level(&coords, &level_of, level_of[p] + level_of[q]);
            if above && mult_fail.is_none() {
                mult_fail = Some(format!("({}, {})", labels[p], labels[q]));
            }
            table.push(kept.as_vec());
        }
    }
    report.expect("filtration_multiplicative", mult_fail.is_none(), || mult_fail.clone().unwrap());
    let unit_coords = adapted.coords(&alg.unit()).expect("adapted frame spans K");
    let (unit, _) = keep_level(&unit_coords, &level_of, 0);
    let gr_alg = Arc::new(FinAlgebra::new(format!("gr {}", alg.name()), order, labels.clone(), table, unit.as_vec()));

    let mut comod_fail = None;
    let mut images = Vec::with_capacity(d);
    for p in 0..d {
        let n = level_of[p];
        let lam = k.lambda(adapted.vector(p));
        let mut by_a: std::collections::BTreeMap<u32, Tensor> = Default::default();
        for (key, c) in lam.terms() {
            by_a.entry(key[0]).or_insert_with(|| Tensor::zero(1)).add_term([key[1]].into_iter().collect(), c.clone());
        }
        let mut img = Tensor::zero(2);
        for (ai, part) in by_a {
            let j = a_degree[ai as usize] as usize;
            let coords = adapted.coords(&part).expect("adapted frame spans K");
            if j > n {
                if !coords.is_zero() && comod_fail.is_none() {
                    comod_fail = Some(format!("x = {}, a = {}", labels[p], a.alg.label(ai as usize)));
                }
                continue;
            }
            let (kept, above) = keep_level(&coords, &level_of, n - j);
            if above && comod_fail.is_none() {
                comod_fail = Some(format!("x = {}, a = {}", labels[p], a.alg.label(ai as usize)));
            }
            for (kk, c) in kept.terms() {
                img.add_term([ai, kk[0]].into_iter().collect(), c.clone());
            }
        }
        images.push(img);
    }
    report.expect("filtr_comod", comod_fail.is_none(), || comod_fail.clone().unwrap());

    let mut phi_bar = Tensor::zero(3);
    let mut by_ab: std::collections::BTreeMap<(u32, u32), Tensor> = Default::default();
    for (key, c) in k.assoc.terms() {
        if a_degree[key[0] as usize] == 0 && a_degree[key[1] as usize] == 0 {
            by_ab.entry((key[0], key[1])).or_insert_with(|| Tensor::zero(1)).add_term([key[2]].into_iter().collect(), c.clone());
        }
    }
    for ((x, y), part) in by_ab {
        let (kept, _) = keep_level(&adapted.coords(&part).expect("adapted frame spans K"), &level_of, 0);
        for (kk, c) in kept.terms() {
            phi_bar.add_term([x, y, kk[0]].into_iter().collect(), c.clone());
        }
    }
    let graded = ComodAlgebra::new(a.clone(), gr_alg, LinMap::new(2, images), phi_bar)?;

    let a0_sub = SubBasis::new((0..a.dim() as u32).filter(|&i| a_degree[i as usize] == 0).collect());
    let a0_labels = (0..a0_sub.dim()).map(|i| a.alg.label(a0_sub.big_index(i)).clone()).collect();
    let a0_alg = Arc::new(a0_sub.restrict_algebra(&a.alg, &format!("{}[0]", a.alg.name()), a0_labels)?);
    let a3 = a.algs(3);
    let a0 = QuasiBialgebra {
        alg: a0_alg,
        comult: a0_sub.restrict_map(&a.alg, "Δ", &a.comult)?,
        counit: a0_sub.restrict_map(&a.alg, "ε", &a.counit)?,
        assoc: a0_sub.pull_or_err(&a3, "Φ", &a.assoc)?,
        assoc_inv: a0_sub.pull_or_err(&a3, "Φ⁻¹", &a.assoc_inv)?,
    };
    let k0_sub = SubBasis::new((0..d as u32).filter(|&i| level_of[i as usize] == 0).collect());
    let k0_labels = (0..k0_sub.dim()).map(|i| labels[k0_sub.big_index(i)].clone()).collect();
    let k0_alg = Arc::new(k0_sub.restrict_algebra(&graded.alg, &format!("{}[0]", alg.name()), k0_labels)?);
    let lam0 = (0..k0_sub.dim())
        .map(|i| {
            let img = graded.coaction.image(k0_sub.big_index(i));
            pull_mixed(&[&a0_sub, &k0_sub], img).ok_or_else(|| Error::Closure {
                what: format!("λ̄({}) in A[0]⊗K[0]", labels[k0_sub.big_index(i)]),
                image: graded.render(img),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let phi0 = pull_mixed(&[&a0_sub, &a0_sub, &k0_sub], &graded.assoc)
        .ok_or_else(|| Error::Closure { what: "Φ̄_λ in A[0]⊗A[0]⊗K[0]".into(), image: graded.render(&graded.assoc) })?;
    let degree0 = ComodAlgebra::new(a0.clone(), k0_alg, LinMap::new(2, lam0), phi0)?;
    report.push(CheckRecord::pass("level_dims").with_detail(format!("{level_dims:?}")));
    Ok(Loewy { level_dims, adapted, level_of, graded, a0, a0_sub, degree0, report })
}

/// Verdicts of `is_right_simple` on `K`, `gr K` and `K[0]`, which must agree.
pub fn cross_check_simplicity(k: &ComodAlgebra, a_degree: &[u32]) -> Result<VerificationReport> {
    let l = loewy_filtration(k, a_degree)?;
    let mut report = VerificationReport::new();
    report.absorb("loewy", l.report.clone());
    report.absorb("graded", verify_comodule_algebra(&l.graded));
    report.absorb("degree0", verify_comodule_algebra(&l.degree0));
    let vk = is_right_simple(k).simple;
    let vg = is_right_simple(&l.graded).simple;
    let v0 = is_right_simple(&l.degree0).simple;
    let detail = format!("K: {vk}, gr K: {vg}, K[0]: {v0}");
    report.expect("simplicity_agreement", vk == vg && vg == v0, || detail.clone());
    report.push(CheckRecord::pass("simplicity_verdicts").with_detail(detail));
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pointed::{build_bosonization, PointedDatum};

    #[test]
    fn regular_bosonization_filtration() {
        let h = build_bosonization(&PointedDatum::new(2, &[1], &[1], 1).unwrap());
        let k = ComodAlgebra::regular(&h.hopf.base);
        let l = loewy_filtration(&k, &h.degrees()).unwrap();
        assert!(l.report.all_passed(), "{}", l.report);
        assert_eq!(l.level_dims, vec![4, 8, 12, 16]);
        assert_eq!(l.degree0.dim(), 4);
        assert_eq!(l.a0.dim(), 4);
        let r = cross_check_simplicity(&k, &h.degrees()).unwrap();
        assert!(r.all_passed(), "{r}");
    }

    #[test]
    fn inconsistent_grading_is_rejected() {
        let h = build_bosonization(&PointedDatum::new(2, &[1], &[1], 1).unwrap());
        let k = ComodAlgebra::regular(&h.hopf.base);
        let mut deg = h.degrees();
        deg[h.index(&[1], 0)] = 0;
        assert!(matches!(loewy_filtration(&k, &deg), Err(Error::Precondition(_))));
    }
}
