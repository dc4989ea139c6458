use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use lognormal_cascade::cascade_measure::{convergence_diagnostic, measure_from_omega, measure_moments_mc};
use lognormal_cascade::cone::ConeSampler;
use lognormal_cascade::gaussian_field::GaussianSampler;
use lognormal_cascade::{CascadeParams, Execution, ModelKind, TimeGrid};

const MODES: [(&str, Execution); 2] = [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)];

fn dense_replicas(c: &mut Criterion) {
    let p = CascadeParams::nonstationary(0.1, 1.0).unwrap();
    let mut group = c.benchmark_group("dense_replicas");
    group.sample_size(10);
    for n in [256usize, 1024] {
        let grid = TimeGrid::new(0.0, 1.0, n).unwrap();
        let sampler = GaussianSampler::for_field(ModelKind::Nonstationary, &grid, &p).unwrap();
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| {
                    sampler.replicas(1, 64, exec, |_, w| {
                        measure_from_omega(&grid, w, &p).unwrap().total()
                    })
                })
            });
        }
    }
    group.finish();
}

fn cone_replicas(c: &mut Criterion) {
    let p = CascadeParams::stationary(0.2, 64.0, 1.0).unwrap();
    let grid = TimeGrid::new(0.0, 1.0, 1024).unwrap();
    let sampler = ConeSampler::new(ModelKind::Stationary, &grid, &p, 8).unwrap();
    let mut group = c.benchmark_group("cone_replicas");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| sampler.replicas(2, 32, exec, |_, w| black_box(w[0]))));
    }
    group.finish();
}

fn measure_moments(c: &mut Criterion) {
    let p = CascadeParams::nonstationary(0.2, 1.0 / 256.0).unwrap();
    let grid = TimeGrid::new(0.0, 1.0 / 256.0, 256).unwrap();
    let mut group = c.benchmark_group("measure_moments_mc");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| {
                measure_moments_mc(ModelKind::Nonstationary, &grid, &p, &[1.0, 2.0], &[64, 256], 200, 3, exec)
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn convergence(c: &mut Criterion) {
    let p = CascadeParams::nonstationary(0.1, 1.0).unwrap();
    let ells = [8.0 / 256.0, 4.0 / 256.0, 2.0 / 256.0];
    let mut group = c.benchmark_group("convergence_diagnostic");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| {
            b.iter(|| convergence_diagnostic(1.0, &ells, &p, 100, 4, 2, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, dense_replicas, cone_replicas, measure_moments, convergence);
criterion_main!(benches);
