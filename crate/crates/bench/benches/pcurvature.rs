use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pcurv::cartier::cartier_transform;
use pcurv::{DiffForm, Fq, MultiPoly};
use pcurv_bench::{log_generic, projective_log};

fn p_curvature(c: &mut Criterion) {
    let mut g = c.benchmark_group("p_curvature");
    for p in [5u64, 7, 11, 13] {
        let f = log_generic(p, 3);
        let v = f.koszul_generators().unwrap().remove(0);
        g.bench_with_input(BenchmarkId::from_parameter(p), &p, |b, _| b.iter(|| f.p_curvature(&v).unwrap()));
    }
    g.finish();
}

fn degeneracy(c: &mut Criterion) {
    let mut g = c.benchmark_group("degeneracy_divisor");
    g.sample_size(10);
    for p in [5u64, 7, 11] {
        let f = projective_log(p);
        g.bench_with_input(BenchmarkId::new("P3", p), &p, |b, _| b.iter(|| f.degeneracy_divisor().unwrap()));
    }
    g.finish();
}

fn cartier(c: &mut Criterion) {
    let mut g = c.benchmark_group("cartier");
    for p in [5u64, 7, 11] {
        let r = Fq::prime(p).unwrap();
        let x: Vec<_> = (0..3).map(|i| MultiPoly::var(&r, 3, i)).collect();
        // y^{p-1} dy + z^p x^{p-1} dx plus an exact term
        let w = DiffForm::dx(&r, 3, 1)
            .scale(&x[1].pow(p - 1))
            .add(&DiffForm::dx(&r, 3, 0).scale(&x[2].pow(p).mul(&x[0].pow(p - 1))))
            .add(&DiffForm::differential(&x[0].mul(&x[1]).mul(&x[2]).pow(3)));
        g.bench_with_input(BenchmarkId::new("polynomial", p), &p, |b, _| b.iter(|| cartier_transform(&w).unwrap()));
        let f = log_generic(p, 3);
        g.bench_with_input(BenchmarkId::new("foliation", p), &p, |b, _| b.iter(|| f.cartier_transform_foliation().unwrap()));
    }
    g.finish();
}

criterion_group!(benches, p_curvature, degeneracy, cartier);
criterion_main!(benches);
