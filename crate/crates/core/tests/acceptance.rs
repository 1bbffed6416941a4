//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit status
//! when any criterion fails. Time limits are wall-clock seconds per
//! criterion; all identities are exact (zero tolerance).

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qhopf_core::catalog::{build_family, build_hat_family, decompose_twisted_family, enumerate_compatible, QlsComodDatum};
use qhopf_core::comodalg::{
    comod_crossed_product, compose_twisted_endos, cross_check_simplicity, hat_subalgebra, is_right_simple,
    verify_comod_iso, verify_comod_twisted_endo, verify_comodule_algebra, verify_f_crossed_system, Certificate,
    ComodAlgebra, FCrossedSystem,
};
use qhopf_core::crossed::{decompose_crossed_product, verify_crossed_system, verify_iso_ahs_h, verify_quasi_iso};
use qhopf_core::pointed::{
    build_ahs, build_bosonization, build_twisted, dassociator_closed_form, delta_js_display, PointedDatum,
};
use qhopf_core::quasihopf::{twisted_associator, verify_quasibialgebra, verify_quasihopf, QuasiBialgebra};
use qhopf_core::tensoralg::{verify_algebra, FinAlgebra, LinMap, SubBasis, Tensor};
use qhopf_core::{CycNum, VerificationReport};

const LIMIT_1: u64 = 10;
const LIMIT_2: u64 = 10;
const LIMIT_3: u64 = 10;
const LIMIT_4: u64 = 30;
const LIMIT_5: u64 = 30;
const LIMIT_6: u64 = 120;
const LIMIT_7: u64 = 60;
const LIMIT_8: u64 = 60;
const SEEDS_PER_VERIFIER: u64 = 8;

fn running() -> PointedDatum {
    PointedDatum::new(2, &[1], &[1], 1).unwrap()
}

fn extended() -> PointedDatum {
    PointedDatum::new(2, &[1, 3], &[1, 1], 1).unwrap()
}

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, notes: Vec::new() }
    }

    fn check(&mut self, what: &str, ok: bool) {
        self.ok &= ok;
        self.notes.push(format!("{what}: {}", if ok { "ok" } else { "FAILED" }));
    }

    fn report(&mut self, what: &str, r: &VerificationReport) {
        let ok = r.all_passed();
        self.check(what, ok);
        if let Some(f) = r.failures().next() {
            self.notes.push(format!("first failure {} at {}", f.name, f.witness.clone().unwrap_or_default()));
        }
    }
}

fn run(n: u32, limit: u64, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let mut out = f();
    let el = t.elapsed();
    let in_time = el < Duration::from_secs(limit);
    out.ok &= in_time;
    let status = if out.ok { "PASS" } else { "FAIL" };
    println!("criterion {n}: {status} ({:.2}s, limit {limit}s) {}", el.as_secs_f64(), out.notes.join("; "));
    out.ok
}

fn criterion1() -> Outcome {
    let mut o = Outcome::new();
    let h = build_bosonization(&running());
    o.check("dim H = 16", h.alg().dim() == 16);
    o.check("Φ = 1", h.hopf.base.assoc == h.hopf.base.unit(3));
    o.report("(q1)-(q6)", &verify_quasihopf(&h.hopf));
    o
}

fn criterion2() -> Outcome {
    let mut o = Outcome::new();
    let dat = running();
    let h = build_bosonization(&dat);
    let tp = build_twisted(&h, 1).unwrap();
    let (phi, _) = twisted_associator(&h.hopf.base, &tp.twist);
    let idem: Vec<Tensor> = (0..2).map(|j| h.idem_sigma(j)).collect();
    let closed = dassociator_closed_form(&dat, 1, &idem);
    o.check("Φ_J1 = closed form", phi == closed);
    o.report("H_J1 (q1)-(q6) with (α_J, β_J)", &verify_quasihopf(&tp.hj));
    o
}

/// `t` with `Δ` applied at `slot`, by direct expansion over terms.
fn naive_delta(a: &QuasiBialgebra, t: &Tensor, slot: usize) -> Tensor {
    let mut out = Tensor::zero(t.arity() + 1);
    for (key, c) in t.terms() {
        for (dk, dc) in a.comult.image(key[slot] as usize).terms() {
            let mut nk: Vec<u32> = key[..slot].to_vec();
            nk.extend(dk.iter().copied());
            nk.extend(key[slot + 1..].iter().copied());
            out.add_term(nk.into_iter().collect(), c * dc);
        }
    }
    out
}

/// Slotwise product by direct expansion over terms and structure constants.
fn naive_mul(alg: &FinAlgebra, x: &Tensor, y: &Tensor) -> Tensor {
    let r = x.arity();
    let mut out = Tensor::zero(r);
    for (kx, cx) in x.terms() {
        for (ky, cy) in y.terms() {
            let mut partial: Vec<(Vec<u32>, CycNum)> = vec![(Vec::new(), cx * cy)];
            for s in 0..r {
                let prod = alg.product(kx[s] as usize, ky[s] as usize);
                partial = partial
                    .iter()
                    .flat_map(|(k, c)| {
                        prod.iter().map(move |(z, v)| {
                            let mut nk = k.clone();
                            nk.push(*z);
                            (nk, c * v)
                        })
                    })
                    .collect();
            }
            for (k, c) in partial {
                out.add_term(k.into_iter().collect(), c);
            }
        }
    }
    out
}

fn criterion3() -> Outcome {
    let mut o = Outcome::new();
    let dat = running();
    let h = build_bosonization(&dat);
    let tp = build_twisted(&h, 1).unwrap();
    let ahs = build_ahs(&h, &tp).unwrap();
    o.check("dim A(H,1) = 8", ahs.alg().dim() == 8);
    let computed = tp.hj.base.delta(&h.x(0));
    let display = delta_js_display(&h, 1, 0);
    let same = computed == display;
    o.check("Δ_J1(x1) = displayed formula", same);
    if !same {
        let algs = tp.hj.base.algs(2);
        o.notes.push(format!(
            "computed {} vs displayed {}",
            qhopf_core::tensoralg::render(&algs, &computed),
            qhopf_core::tensoralg::render(&algs, &display)
        ));
    }
    o.report("A(H,1) (q1)-(q4) with Φ1", &verify_quasibialgebra(&ahs.quasi));
    let a = &ahs.quasi;
    let alg = &*a.alg;
    let phi = &a.assoc;
    let one = alg.unit();
    let lhs = naive_mul(alg, &naive_mul(alg, &one.tensor(phi), &naive_delta(a, phi, 1)), &phi.tensor(&one));
    let rhs = naive_mul(alg, &naive_delta(a, phi, 2), &naive_delta(a, phi, 0));
    o.check("pentagon by brute force", lhs == rhs);
    o
}

fn criterion4() -> Outcome {
    let mut o = Outcome::new();
    let iso = verify_iso_ahs_h(&running()).unwrap();
    o.report("canonical system (i)-(vi)", &verify_crossed_system(&iso.system));
    o.report("φ bijective algebra and coalgebra iso", &iso.report);
    let hj = &iso.twisted.hj_normalized;
    let t: Vec<Tensor> = (0..2).map(|i| iso.h.chi_pow(i)).collect();
    let dec = decompose_crossed_product(&hj.base, Some(hj), &iso.h.cm_grading(), 2, &t, false).unwrap();
    o.report("decomposition", &dec.report);
    let round = dec.sub == iso.ahs.iota
        && dec.system.base.alg.same_structure(iso.ahs.alg())
        && dec.system.actions == iso.system.actions
        && dec.system.theta == iso.system.theta;
    o.check("round trip to canonical system", round);
    o
}

fn constructed_fcs() -> (qhopf_core::crossed::IsoCheck, FCrossedSystem, QlsComodDatum) {
    let dat = extended();
    let iso = verify_iso_ahs_h(&dat).unwrap();
    let mut d = QlsComodDatum::zero(dat, 4, vec![0, 1]);
    d.xi = vec![CycNum::one(4), CycNum::one(4)];
    d.alpha[0][1] = CycNum::one(4);
    let dec = decompose_twisted_family(&d, &iso).unwrap();
    assert!(dec.report.all_passed(), "{}", dec.report);
    (iso, dec.fcs, d)
}

fn criterion5() -> Outcome {
    let mut o = Outcome::new();
    let (iso, fcs, _) = constructed_fcs();
    o.report("F-crossed system of K#F", &verify_f_crossed_system(&fcs));
    let k = &fcs.k;
    let f = fcs.f_order;
    let comp = |i: u32, j: u32| {
        let e = &fcs.endos;
        compose_twisted_endos(&e[i as usize], &e[j as usize], &iso.system, fcs.elem(i), fcs.elem(j), k).unwrap()
    };
    let mut axioms = true;
    let mut pairs = 0;
    for i in 0..f {
        for j in 0..f {
            axioms &= verify_comod_twisted_endo(&comp(i, j), k).all_passed();
            pairs += 1;
        }
    }
    o.check(&format!("composites satisfy the twisted-endomorphism axioms ({pairs} pairs)"), axioms);
    let mut assoc = true;
    let mut triples = 0;
    for i in 0..f {
        for j in 0..f {
            for r in 0..f {
                let (ij, jr) = ((i + j) % f, (j + r) % f);
                let e = |x: u32| &fcs.endos[x as usize];
                let left = compose_twisted_endos(&comp(i, j), e(r), &iso.system, fcs.elem(ij), fcs.elem(r), k).unwrap();
                let right = compose_twisted_endos(e(i), &comp(j, r), &iso.system, fcs.elem(i), fcs.elem(jr), k).unwrap();
                assoc &= left.fbar == right.fbar && left.jbar == right.jbar;
                triples += 1;
            }
        }
    }
    o.check(&format!("composition associates ({triples} triples)"), assoc);
    o
}

fn criterion6() -> Outcome {
    let mut o = Outcome::new();
    let dat = extended();
    let h = build_bosonization(&dat);
    let census = enumerate_compatible(&dat, None);
    o.check(&format!("census has {} entries", census.len()), !census.is_empty());
    let mut bad = Vec::new();
    for d in &census {
        let k = match build_family(d, &h) {
            Ok(k) => k,
            Err(e) => {
                bad.push(format!("{d}: {e}"));
                continue;
            }
        };
        if !verify_comodule_algebra(&k).all_passed() {
            bad.push(format!("{d}: axioms"));
        }
        let s = is_right_simple(&k);
        let dd = k.dim() * k.dim();
        let full = matches!(s.certificate, Certificate::RankOne { dim_e, .. } | Certificate::Closure { dim_e } if dim_e == dd);
        if !s.simple || !full {
            bad.push(format!("{d}: simplicity"));
        }
    }
    o.check("every entry builds, verifies and is right simple with dim E = (dim K)²", bad.is_empty());
    if !bad.is_empty() {
        o.notes.push(bad.join(", "));
    }
    let with_xi = census.iter().find(|d| d.f_order == 4 && d.xi.iter().any(|c| !c.is_zero())).unwrap();
    let k = build_family(with_xi, &h).unwrap();
    let r = cross_check_simplicity(&k, &h.degrees()).unwrap();
    o.report(&format!("three-way simplicity agreement for {with_xi}"), &r);
    o
}

fn same_comod(a: &ComodAlgebra, b: &ComodAlgebra) -> bool {
    a.alg.same_structure(&b.alg) && a.coaction == b.coaction && a.assoc == b.assoc
}

fn criterion7() -> Outcome {
    let mut o = Outcome::new();
    let (iso, fcs, d) = constructed_fcs();
    let mut r = d.clone();
    r.f_order = 2;
    let hat = build_hat_family(&r, &iso.h, &iso.twisted, &iso.ahs).unwrap();
    o.report("Â verifies", &verify_comodule_algebra(&hat));
    o.check("K̂ of the twisted family equals Â", same_comod(&fcs.k, &hat));
    let a_sub = SubBasis::new((0..iso.product.base_dim).map(|k| iso.product.index(k, 0) as u32).collect());
    let systems = [FCrossedSystem::trivial(iso.system.clone(), hat.clone()), fcs];
    for s in &systems {
        let kf = comod_crossed_product(s, &iso.product).unwrap();
        o.check(&format!("dim K#F = {}·{}", s.f_order, hat.dim()), kf.dim() == s.f_order as usize * hat.dim());
        o.report(&format!("K#F verifies (|F| = {})", s.f_order), &verify_comodule_algebra(&kf));
        let back = hat_subalgebra(&kf, &iso.system.base, &a_sub).unwrap();
        o.check(&format!("hat(K#F) = Â (|F| = {})", s.f_order), same_comod(&back.comod, &hat));
    }
    o
}

/// Adds `c·e_key` to the tensor.
fn bump(t: &Tensor, key: &[u32], c: i64, order: u32) -> Tensor {
    t + &Tensor::monomial(key, CycNum::from_int(order, c))
}

fn random_key(rng: &mut ChaCha8Rng, dims: &[usize]) -> Vec<u32> {
    dims.iter().map(|&d| rng.gen_range(0..d) as u32).collect()
}

fn perturb_map(rng: &mut ChaCha8Rng, map: &LinMap, src: usize, dims: &[usize], order: u32) -> LinMap {
    let i = rng.gen_range(0..src);
    let key = random_key(rng, dims);
    let c = rng.gen_range(1..4);
    let mut images = map.images().to_vec();
    images[i] = bump(&images[i], &key, c, order);
    LinMap::new(dims.len(), images)
}

fn detected(r: &VerificationReport) -> bool {
    r.failures().next().is_some_and(|f| f.witness.as_ref().is_some_and(|w| !w.is_empty()))
}

fn criterion8() -> Outcome {
    let mut o = Outcome::new();
    let iso = verify_iso_ahs_h(&running()).unwrap();
    let h = &iso.h;
    let hj = &iso.twisted.hj;
    let a = &iso.ahs.quasi;
    let n = 4;
    let dh = h.alg().dim();
    let da = a.dim();
    let mut d = QlsComodDatum::zero(running(), 4, vec![0]);
    d.xi[0] = CycNum::one(4);
    let fam = build_family(&d, h).unwrap();
    let dk = fam.dim();
    let (_, fcs, _) = constructed_fcs();
    let dec = decompose_twisted_family(&d, &iso).unwrap();
    let kf = comod_crossed_product(&dec.fcs, &iso.product).unwrap();
    let l = qhopf_core::comodalg::rebase(
        &qhopf_core::catalog::twisted_family(&fam, &d, &iso.twisted).unwrap(),
        &iso.product.qb,
    )
    .unwrap();

    type Control<'a> = (&'a str, Box<dyn Fn(&mut ChaCha8Rng) -> VerificationReport + 'a>);
    let controls: Vec<Control> = vec![
        ("algebra", Box::new(|rng| {
            let alg = &*a.alg;
            let (i, j) = (rng.gen_range(0..da), rng.gen_range(0..da));
            let z = rng.gen_range(0..da) as u32;
            let mut table: Vec<Vec<(u32, CycNum)>> = (0..da * da).map(|x| alg.product(x / da, x % da).to_vec()).collect();
            let e = &mut table[i * da + j];
            match e.iter_mut().find(|(k, _)| *k == z) {
                Some((_, c)) => *c = c.clone() + CycNum::one(n),
                None => e.push((z, CycNum::one(n))),
            }
            e.sort_by_key(|p| p.0);
            verify_algebra(&FinAlgebra::new("perturbed", n, alg.labels().to_vec(), table, alg.unit().as_vec()))
        })),
        ("quasi-bialgebra", Box::new(|rng| {
            let mut q = a.clone();
            q.comult = perturb_map(rng, &a.comult, da, &[da, da], n);
            verify_quasibialgebra(&q)
        })),
        ("quasi-Hopf", Box::new(|rng| {
            let mut q = hj.clone();
            q.antipode = perturb_map(rng, &hj.antipode, dh, &[dh], n);
            verify_quasihopf(&q)
        })),
        ("crossed system", Box::new(|rng| {
            let mut cs = iso.system.clone();
            let key = random_key(rng, &[da]);
            cs.theta[1][1] = bump(&cs.theta[1][1], &key, rng.gen_range(1..4), n);
            verify_crossed_system(&cs)
        })),
        ("quasi-iso", Box::new(|rng| {
            let phi = perturb_map(rng, &iso.phi, dh, &[dh], n);
            verify_quasi_iso(&phi, &iso.product.qb, &hj.base)
        })),
        ("comodule algebra", Box::new(|rng| {
            let mut k = fam.clone();
            k.coaction = perturb_map(rng, &fam.coaction, dk, &[dh, dk], n);
            verify_comodule_algebra(&k)
        })),
        ("twisted endomorphism", Box::new(|rng| {
            let mut e = fcs.endos[1].clone();
            let key = random_key(rng, &[fcs.k.over.dim(), fcs.k.dim()]);
            e.jbar = bump(&e.jbar, &key, rng.gen_range(1..4), n);
            verify_comod_twisted_endo(&e, &fcs.k)
        })),
        ("F-crossed system", Box::new(|rng| {
            let mut s = fcs.clone();
            let key = random_key(rng, &[s.k.dim()]);
            s.theta[1][1] = bump(&s.theta[1][1], &key, rng.gen_range(1..4), n);
            verify_f_crossed_system(&s)
        })),
        ("comodule-algebra iso", Box::new(|rng| {
            let psi = perturb_map(rng, &dec.iso, kf.dim(), &[l.dim()], n);
            verify_comod_iso(&psi, &kf, &l)
        })),
    ];
    for (name, f) in &controls {
        let mut hits = 0;
        for seed in 0..SEEDS_PER_VERIFIER {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            if detected(&f(&mut rng)) {
                hits += 1;
            }
        }
        o.check(&format!("{name} {hits}/{SEEDS_PER_VERIFIER}"), hits == SEEDS_PER_VERIFIER);
    }
    o
}

fn main() {
    let results = [
        run(1, LIMIT_1, criterion1),
        run(2, LIMIT_2, criterion2),
        run(3, LIMIT_3, criterion3),
        run(4, LIMIT_4, criterion4),
        run(5, LIMIT_5, criterion5),
        run(6, LIMIT_6, criterion6),
        run(7, LIMIT_7, criterion7),
        run(8, LIMIT_8, criterion8),
    ];
    let passed = results.iter().filter(|&&x| x).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
