use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use linrel::batch::{map_par, map_seq};
use linrel::{dissipative_decompose, sample, Relation, ToleranceConfig};

fn relations(count: usize, n: usize) -> Vec<Relation> {
    let cfg = ToleranceConfig::default();
    let mut rng = sample::rng(7);
    (0..count)
        .map(|_| sample::dissipative(n, &mut rng, &cfg))
        .collect()
}

fn classify(c: &mut Criterion) {
    let cfg = ToleranceConfig::default();
    let mut group = c.benchmark_group("classify");
    for n in [4, 12] {
        let batch = relations(64, n);
        group.bench_with_input(BenchmarkId::new("seq", n), &batch, |b, batch| {
            b.iter(|| map_seq(batch, |t| t.classify(&cfg)))
        });
        group.bench_with_input(BenchmarkId::new("par", n), &batch, |b, batch| {
            b.iter(|| map_par(batch, |t| t.classify(&cfg)))
        });
    }
    group.finish();
}

fn decompose(c: &mut Criterion) {
    let cfg = ToleranceConfig::default();
    let batch = relations(32, 10);
    let mut group = c.benchmark_group("dissipative_decompose");
    group.sample_size(20);
    group.bench_function("seq", |b| {
        b.iter(|| map_seq(&batch, |t| dissipative_decompose(t, &cfg).is_ok()))
    });
    group.bench_function("par", |b| {
        b.iter(|| map_par(&batch, |t| dissipative_decompose(t, &cfg).is_ok()))
    });
    group.finish();
}

criterion_group!(benches, classify, decompose);
criterion_main!(benches);
