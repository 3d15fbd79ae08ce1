use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use opcat::koszul::resolution_grop;
use opcat::liemod::representable_module;
use opcat::induction::induce_value;
use opcat::par;
use opcat::propcat::pbw_check;

fn modes() -> [(&'static str, bool); 2] {
    [("sequential", false), ("rayon", true)]
}

fn koszul(c: &mut Criterion) {
    let mut g = c.benchmark_group("koszul_resolution_d4_t3");
    g.sample_size(10);
    for (name, on) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &on, |b, &on| {
            par::set_enabled(on);
            b.iter(|| {
                let r = resolution_grop(black_box(4), black_box(3));
                black_box(r.augmented_homology())
            });
        });
    }
    g.finish();
}

fn pbw(c: &mut Criterion) {
    let mut g = c.benchmark_group("pbw_slice_5_3");
    g.sample_size(10);
    for (name, on) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &on, |b, &on| {
            par::set_enabled(on);
            b.iter(|| black_box(pbw_check(black_box(5), black_box(3))));
        });
    }
    g.finish();
}

fn induction(c: &mut Criterion) {
    let mut g = c.benchmark_group("induce_p3_t3");
    g.sample_size(10);
    let m = representable_module(3, 3);
    for (name, on) in modes() {
        g.bench_with_input(BenchmarkId::from_parameter(name), &on, |b, &on| {
            par::set_enabled(on);
            b.iter(|| black_box(induce_value(&m, black_box(3)).expect("PBW dimension")));
        });
    }
    g.finish();
}

criterion_group!(benches, koszul, pbw, induction);
criterion_main!(benches);
