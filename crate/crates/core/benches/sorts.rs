use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion, Throughput};
use pdq_core::bench::Algo;
use pdq_core::datagen::{generate, Dataset, DistributionSpec, ElementType, Kind};

fn sorts(c: &mut Criterion) {
    for (kind, ty) in [
        (Kind::Uniform, ElementType::Int64),
        (Kind::Mod8, ElementType::Int64),
        (Kind::Organ, ElementType::Int64),
        (Kind::Uniform, ElementType::Str),
    ] {
        let mut group = c.benchmark_group(format!("{kind}_{ty}"));
        for n in [1 << 12, 1 << 16] {
            let data = generate(&DistributionSpec::new(kind, n, ty, 1));
            group.throughput(Throughput::Elements(n as u64));
            for algo in Algo::ALL {
                group.bench_with_input(BenchmarkId::new(algo.name(), n), &data, |b, data| match data {
                    Dataset::Int64(v) => b.iter_batched_ref(|| v.clone(), |v| algo.sort(v), BatchSize::LargeInput),
                    Dataset::Str(v) => b.iter_batched_ref(|| v.clone(), |v| algo.sort(v), BatchSize::LargeInput),
                });
            }
        }
        group.finish();
    }
}

criterion_group!(benches, sorts);
criterion_main!(benches);
