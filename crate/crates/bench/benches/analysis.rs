use criterion::{black_box, criterion_group, criterion_main, BatchSize, Criterion, Throughput};
use morphkit::cache::{CacheConfig, CachedAnalyzer};
use morphkit_bench::Fixture;

fn analysis(c: &mut Criterion) {
    let fx = Fixture::new();
    let analyzer = fx.analyzer();
    let mut group = c.benchmark_group("analyze");
    group.throughput(Throughput::Elements(fx.queries.len() as u64));
    group.sample_size(20);

    group.bench_function("mixed/no-cache", |b| {
        b.iter(|| {
            for w in &fx.queries {
                black_box(analyzer.analyze(w).unwrap());
            }
        })
    });
    group.bench_function("mixed/lru-8192", |b| {
        b.iter_batched(
            || CachedAnalyzer::new(analyzer.clone(), CacheConfig::default()),
            |cached| {
                for w in &fx.queries {
                    black_box(cached.analyze(w).unwrap());
                }
            },
            BatchSize::LargeInput,
        )
    });
    let known: Vec<&str> = fx
        .entries
        .iter()
        .take(fx.queries.len())
        .map(|e| e.surface.as_str())
        .collect();
    group.bench_function("in-lexicon", |b| {
        b.iter(|| {
            for w in &known {
                black_box(analyzer.analyze(w).unwrap());
            }
        })
    });
    group.finish();
}

criterion_group!(benches, analysis);
criterion_main!(benches);
