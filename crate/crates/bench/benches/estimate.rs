use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use simisketch::{
    CmSimiSketch, CountSimiSketch, FormalSimiSketch, SalsaSimiSketch, SimilaritySketch,
};
use simisketch_bench::zipf_pair;

fn filled<S: SimilaritySketch>(mut s: S, items: &[simisketch::ItemId]) -> S {
    s.insert_all(items.iter().copied()).unwrap();
    s
}

fn estimate(c: &mut Criterion) {
    let (a, b) = zipf_pair(200_000, 20_000, 0.6);
    let mut group = c.benchmark_group("estimate");
    for kib in [10usize, 100, 2048] {
        let mem = kib * 1024;
        let (ca, cb) = (
            filled(CmSimiSketch::with_budget(mem, 1, 1).unwrap(), &a),
            filled(CmSimiSketch::with_budget(mem, 1, 1).unwrap(), &b),
        );
        group.bench_with_input(BenchmarkId::new("cm", kib), &kib, |bch, _| {
            bch.iter(|| black_box(ca.estimate(&cb).unwrap()))
        });
        let (na, nb) = (
            filled(CountSimiSketch::with_budget(mem, 1, 1).unwrap(), &a),
            filled(CountSimiSketch::with_budget(mem, 1, 1).unwrap(), &b),
        );
        group.bench_with_input(BenchmarkId::new("count", kib), &kib, |bch, _| {
            bch.iter(|| black_box(na.estimate(&nb).unwrap()))
        });
        let (fa, fb) = (
            filled(FormalSimiSketch::with_budget(mem, 1, 1).unwrap(), &a),
            filled(FormalSimiSketch::with_budget(mem, 1, 1).unwrap(), &b),
        );
        group.bench_with_input(BenchmarkId::new("formal", kib), &kib, |bch, _| {
            bch.iter(|| black_box(fa.estimate(&fb).unwrap()))
        });
        let (sa, sb) = (
            filled(SalsaSimiSketch::with_budget(mem, 1, 1).unwrap(), &a),
            filled(SalsaSimiSketch::with_budget(mem, 1, 1).unwrap(), &b),
        );
        group.bench_with_input(BenchmarkId::new("salsa", kib), &kib, |bch, _| {
            bch.iter(|| black_box(sa.estimate(&sb).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, estimate);
criterion_main!(benches);
