//! Property tests for the structural invariants of each module.

use proptest::prelude::*;

use qhopf_core::catalog::{build_family, build_hat_family, enumerate_compatible, family_algebra, QlsComodDatum};
use qhopf_core::comodalg::{cross_check_simplicity, is_right_simple, loewy_filtration, verify_comodule_algebra};
use qhopf_core::crossed::{crossed_product, verify_iso_ahs_h};
use qhopf_core::pointed::{build_ahs, build_bosonization, build_js, build_twisted, dassociator_closed_form, PointedDatum};
use qhopf_core::quasihopf::{group_hopf, twist_unchecked, twisted_associator, verify_quasibialgebra, Twist};
use qhopf_core::tensoralg::{FinAlgebra, Tensor};
use qhopf_core::CycNum;

fn cyc(n: u32, coeffs: &[i64]) -> CycNum {
    let mut acc = CycNum::zero(n);
    for (k, &c) in coeffs.iter().enumerate() {
        acc += &(&CycNum::root_of_unity(n, k as i64) * &CycNum::from_int(n, c));
    }
    acc
}

fn order() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![1u32, 3, 4, 5, 8, 9, 12])
}

fn element(n: u32) -> impl Strategy<Value = CycNum> {
    prop::collection::vec(-6i64..=6, n as usize).prop_map(move |c| cyc(n, &c))
}

fn triple() -> impl Strategy<Value = (CycNum, CycNum, CycNum)> {
    order().prop_flat_map(|n| (element(n), element(n), element(n)))
}

/// Valid data with `dim H ≤ 64`.
fn small_datum() -> impl Strategy<Value = PointedDatum> {
    (prop::sample::select(vec![2u32, 3]), 0usize..=2, prop::collection::vec((1i64..9, 1i64..9), 2), 1u32..3)
        .prop_filter_map("invalid or too large", |(m, t, db, s)| {
            let d: Vec<i64> = db[..t].iter().map(|p| p.0).collect();
            let b: Vec<i64> = db[..t].iter().map(|p| p.1).collect();
            let dat = PointedDatum::new(m, &d, &b, s.min(m - 1)).ok()?;
            (dat.n() as usize * dat.pbw_count() <= 64).then_some(dat)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.invert().unwrap()).is_one());
        }
    }

    #[test]
    fn conjugate_roots_multiply_to_one(n in order(), k in 0i64..40) {
        let n64 = n as i64;
        prop_assert!((&CycNum::root_of_unity(n, k) * &CycNum::root_of_unity(n, n64 - k)).is_one());
    }

    #[test]
    fn tensor_product_constants(i in 0usize..8, j in 0usize..8, k in 0usize..4, l in 0usize..4) {
        let a = group_hopf(8, "g", 8).base.alg;
        let b = group_hopf(4, "h", 8).base.alg;
        let t = FinAlgebra::tensor_product(&a, &b);
        let x = a.basis(i).tensor(&b.basis(k));
        let y = a.basis(j).tensor(&b.basis(l));
        let prod = t.mul(&flatten(&x, b.dim()), &flatten(&y, b.dim()));
        let expect = flatten(&a.mul(&a.basis(i), &a.basis(j)).tensor(&b.mul(&b.basis(k), &b.basis(l))), b.dim());
        prop_assert_eq!(prod, expect);
    }
}

/// `e_i⊗e_k ↦ e_{i·dim B + k}`.
fn flatten(t: &Tensor, db: usize) -> Tensor {
    let mut out = Tensor::zero(1);
    for (key, c) in t.terms() {
        out.add_term([key[0] * db as u32 + key[1]].into_iter().collect(), c.clone());
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dimensions_and_associator(dat in small_datum()) {
        let h = build_bosonization(&dat);
        let m = dat.m() as usize;
        let prod: usize = (0..dat.theta()).map(|i| dat.nilpotency(i) as usize).product();
        prop_assert_eq!(h.alg().dim(), m * m * prod);
        let tp = build_twisted(&h, dat.s()).unwrap();
        let ahs = build_ahs(&h, &tp).unwrap();
        prop_assert_eq!(ahs.alg().dim(), m * prod);
        let (phi, _) = twisted_associator(&h.hopf.base, &tp.twist);
        let idem: Vec<Tensor> = (0..m as i64).map(|j| h.idem_sigma(j)).collect();
        let closed = dassociator_closed_form(&dat, dat.m() - dat.s(), &idem);
        prop_assert_eq!(phi, closed);
        prop_assert!(verify_quasibialgebra(&ahs.quasi).all_passed());
    }

    #[test]
    fn canonical_theta_and_crossed_dimension(dat in small_datum()) {
        let iso = verify_iso_ahs_h(&dat).unwrap();
        let m = dat.m();
        for i in 0..m {
            for j in 0..m {
                let want = if i + j < m { iso.ahs.alg().unit() } else { iso.ahs.sigma_pow(1) };
                prop_assert_eq!(iso.system.th(i, j), &want);
            }
        }
        let p = crossed_product(&iso.system).unwrap();
        prop_assert_eq!(p.qb.dim(), m as usize * iso.ahs.alg().dim());
        prop_assert!(iso.report.all_passed());
    }

    #[test]
    fn census_entries_and_their_graded_versions(idx in 0usize..35) {
        let dat = PointedDatum::new(2, &[1, 3], &[1, 1], 1).unwrap();
        let h = build_bosonization(&dat);
        let census = enumerate_compatible(&dat, None);
        let d = &census[idx];
        let k = build_family(d, &h).unwrap();
        prop_assert!(verify_comodule_algebra(&k).all_passed());
        prop_assert!(is_right_simple(&k).simple);
        let l = loewy_filtration(&k, &h.degrees()).unwrap();
        prop_assert!(l.report.passed("filtration_multiplicative"));
        prop_assert_eq!(l.degree0.dim(), d.f_order as usize);
        let g = QlsComodDatum::zero(dat.clone(), d.f_order, d.w.clone());
        let kg = build_family(&g, &h).unwrap();
        prop_assert!(verify_comodule_algebra(&kg).all_passed());
        prop_assert!(is_right_simple(&kg).simple);
        prop_assert_eq!(l.graded.dim(), kg.dim());
        prop_assert!(cross_check_simplicity(&k, &h.degrees()).unwrap().all_passed());
    }

    #[test]
    fn hat_algebra_is_the_cp_family_algebra(idx in 0usize..13) {
        let dat = PointedDatum::new(2, &[1, 3], &[1, 1], 1).unwrap();
        let h = build_bosonization(&dat);
        let tp = build_twisted(&h, 1).unwrap();
        let ahs = build_ahs(&h, &tp).unwrap();
        let census: Vec<_> = enumerate_compatible(&dat, None).into_iter().filter(|d| d.f_order == 2).collect();
        let d = &census[idx];
        let hat = build_hat_family(d, &h, &tp, &ahs).unwrap();
        prop_assert!(hat.alg.same_structure(&family_algebra(d).unwrap()));
        prop_assert!(verify_comodule_algebra(&hat).all_passed());
    }
}

#[test]
fn zero_parameter_family_is_the_subalgebra_of_h() {
    let dat = PointedDatum::new(2, &[1, 3], &[1, 1], 1).unwrap();
    let h = build_bosonization(&dat);
    let k = build_family(&QlsComodDatum::zero(dat, 4, vec![0, 1]), &h).unwrap();
    assert!(k.alg.same_structure(h.alg()));
    assert_eq!(k.coaction, h.hopf.base.comult);
}

#[test]
fn twisting_composes() {
    let dat = PointedDatum::new(3, &[], &[], 1).unwrap();
    let h = build_bosonization(&dat);
    let a = &h.hopf.base;
    let j = build_js(&h, 1).unwrap();
    let k = build_js(&h, 2).unwrap();
    let kj = Twist::new(a, a.mul(2, &k.value, &j.value)).unwrap();
    let twice = twist_unchecked(&twist_unchecked(a, &j), &k);
    let once = twist_unchecked(a, &kj);
    assert_eq!(twice.comult, once.comult);
    assert_eq!(twice.assoc, once.assoc);
}

#[test]
fn reports_are_deterministic() {
    let h = build_bosonization(&PointedDatum::new(2, &[1], &[1], 1).unwrap());
    let mut q = h.hopf.base.clone();
    q.assoc = &q.assoc + &Tensor::monomial(&[1, 2, 3], CycNum::one(4));
    assert_eq!(verify_quasibialgebra(&q), verify_quasibialgebra(&q));
    assert!(!verify_quasibialgebra(&q).all_passed());
}
