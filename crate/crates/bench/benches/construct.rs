use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use qhopf_core::catalog::{build_family, QlsComodDatum};
use qhopf_core::crossed::verify_iso_ahs_h;
use qhopf_core::pointed::{build_ahs, build_bosonization, build_twisted};
use qhopf_core::quasihopf::{verify_quasibialgebra, verify_quasihopf};
use qhopf_core::{is_right_simple, CycNum, PointedDatum};

fn data() -> Vec<(&'static str, PointedDatum)> {
    vec![
        ("m2_t1", PointedDatum::new(2, &[1], &[1], 1).unwrap()),
        ("m2_t2", PointedDatum::new(2, &[1, 3], &[1, 1], 1).unwrap()),
        ("m3_t1", PointedDatum::new(3, &[1], &[1], 1).unwrap()),
    ]
}

fn cyclotomic(c: &mut Criterion) {
    let a = &CycNum::root_of_unity(12, 1) + &CycNum::from_ratio(12, 3, 7);
    let b = &CycNum::root_of_unity(12, 5) - &CycNum::from_int(12, 2);
    c.bench_function("cycnum/mul_q12", |bn| bn.iter(|| black_box(&a) * black_box(&b)));
    c.bench_function("cycnum/invert_q12", |bn| bn.iter(|| black_box(&a).invert().unwrap()));
}

fn hopf(c: &mut Criterion) {
    let mut g = c.benchmark_group("hopf");
    g.sample_size(10);
    for (name, d) in data() {
        g.bench_with_input(BenchmarkId::new("build", name), &d, |bn, d| bn.iter(|| build_bosonization(d)));
        let h = build_bosonization(&d);
        g.bench_with_input(BenchmarkId::new("verify", name), &h, |bn, h| {
            bn.iter(|| (verify_quasibialgebra(&h.hopf.base), verify_quasihopf(&h.hopf)))
        });
    }
    g.finish();
}

fn twisted(c: &mut Criterion) {
    let mut g = c.benchmark_group("twisted");
    g.sample_size(10);
    for (name, d) in data() {
        let h = build_bosonization(&d);
        g.bench_with_input(BenchmarkId::new("ahs", name), &h, |bn, h| {
            bn.iter(|| {
                let tp = build_twisted(h, h.datum.s()).unwrap();
                build_ahs(h, &tp).unwrap()
            })
        });
        g.bench_with_input(BenchmarkId::new("crossed_iso", name), &d, |bn, d| bn.iter(|| verify_iso_ahs_h(d).unwrap()));
    }
    g.finish();
}

fn comodule(c: &mut Criterion) {
    let mut g = c.benchmark_group("comodule");
    g.sample_size(10);
    let d = PointedDatum::new(2, &[1, 3], &[1, 1], 1).unwrap();
    let h = build_bosonization(&d);
    for f in [1u32, 2, 4] {
        let fam = QlsComodDatum::zero(d.clone(), f, vec![0, 1]);
        g.bench_with_input(BenchmarkId::new("build_family", f), &fam, |bn, fam| bn.iter(|| build_family(fam, &h).unwrap()));
        let k = build_family(&fam, &h).unwrap();
        g.bench_with_input(BenchmarkId::new("right_simple", f), &k, |bn, k| bn.iter(|| is_right_simple(k)));
    }
    g.finish();
}

criterion_group!(benches, cyclotomic, hopf, twisted, comodule);
criterion_main!(benches);
