use criterion::{criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use simisketch::{
    CmSimiSketch, CountSimiSketch, Expander, FormalSimiSketch, MinHashSignature, SalsaSimiSketch,
    SetAdapted, SimilaritySketch,
};
use simisketch_bench::zipf_pair;

const MEMORY: usize = 100 * 1024;

fn insert(c: &mut Criterion) {
    let (stream, _) = zipf_pair(200_000, 20_000, 0.6);
    let mut group = c.benchmark_group("insert");
    group.throughput(Throughput::Elements(stream.len() as u64));

    macro_rules! bench {
        ($name:expr, $make:expr) => {
            group.bench_function($name, |b| {
                b.iter_batched(
                    || $make,
                    |mut s| {
                        s.insert_all(stream.iter().copied()).unwrap();
                        s
                    },
                    BatchSize::LargeInput,
                )
            });
        };
    }

    bench!("cm_k1", CmSimiSketch::with_budget(MEMORY, 1, 1).unwrap());
    bench!(
        "count_k1",
        CountSimiSketch::with_budget(MEMORY, 1, 1).unwrap()
    );
    bench!(
        "formal_k1",
        FormalSimiSketch::with_budget(MEMORY, 1, 1).unwrap()
    );
    bench!(
        "formal_k4",
        FormalSimiSketch::with_budget(MEMORY, 4, 1).unwrap()
    );
    bench!(
        "salsa_k1",
        SalsaSimiSketch::with_budget(MEMORY, 1, 1).unwrap()
    );
    group.sample_size(10);
    bench!(
        "minhash_k128",
        SetAdapted::new(Expander::exact(), MinHashSignature::new(128, 1))
    );
    group.finish();
}

criterion_group!(benches, insert);
criterion_main!(benches);
