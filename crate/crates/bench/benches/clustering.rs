use amsos_core::amsos::amsos;
use amsos_core::kmeans::lloyd;
use amsos_core::metrics::full_report;
use amsos_core::seeding::spss_seeds;
use amsos_core::{AmsosConfig, BuiltinMixture, KmeansConfig};
use amsos_bench::builtin;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn seeding(c: &mut Criterion) {
    let mut group = c.benchmark_group("spss_seeds");
    for id in BuiltinMixture::ALL {
        let data = builtin(id);
        let k = amsos_core::amsos::kmax_for(data.len()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(id), &data, |b, data| {
            b.iter(|| spss_seeds(black_box(data), k).unwrap())
        });
    }
    group.finish();
}

fn kmeans(c: &mut Criterion) {
    let data = builtin(BuiltinMixture::Synthetic4);
    let seeds = spss_seeds(&data, 28).unwrap();
    let config = KmeansConfig::default();
    c.bench_function("lloyd/synthetic4/k28", |b| {
        b.iter(|| lloyd(black_box(&data), &seeds, &config).unwrap())
    });
}

fn driver(c: &mut Criterion) {
    let mut group = c.benchmark_group("amsos");
    group.sample_size(10);
    for id in BuiltinMixture::ALL {
        let data = builtin(id);
        group.bench_with_input(BenchmarkId::from_parameter(id), &data, |b, data| {
            b.iter(|| amsos(black_box(data), &AmsosConfig::default()).unwrap())
        });
    }
    group.finish();
}

fn report(c: &mut Criterion) {
    let data = builtin(BuiltinMixture::Synthetic4);
    let result = amsos(&data, &AmsosConfig::default()).unwrap();
    let labels = data.labels().unwrap();
    c.bench_function("full_report/synthetic4", |b| {
        b.iter(|| full_report(black_box(&data), &result.partition, labels).unwrap())
    });
}

criterion_group!(benches, seeding, kmeans, driver, report);
criterion_main!(benches);
