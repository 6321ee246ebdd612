//! Sequential vs parallel execution on the data-parallel loops.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use specbox_core::certificate::{certify, grid_certify};
use specbox_core::enclosure::qnr_enclosure;
use specbox_core::linalg::{eigenvalues_general, operator_norm};
use specbox_core::qnr::{qnr_sample, QnrStrategy};
use specbox_core::sharpness::{construct, density_report, reference_samples, SharpnessSpec};
use specbox_core::{fixtures, Execution, Rect};

fn modes() -> Vec<(&'static str, Execution)> {
    let mut v = vec![("sequential", Execution::Sequential)];
    if Execution::default().is_parallel() {
        v.push(("parallel", Execution::default()));
    }
    v
}

fn grid(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let sp = fixtures::random_instance(&mut rng, 12, 10, 1.0).spectra().unwrap();
    let mut g = c.benchmark_group("grid_certify_100x50");
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| grid_certify(&sp, Rect::new(-3.0, 3.0, 0.05, 2.0), 100, 50, exec).unwrap())
        });
    }
    g.finish();
}

fn qnr(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let s = fixtures::random_instance(&mut rng, 20, 20, 1.0);
    let mut g = c.benchmark_group("qnr_sample_5000");
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| qnr_sample(&s, 5000, QnrStrategy::RandomUnit, 7, exec).unwrap())
        });
    }
    g.finish();
}

fn sharpness(c: &mut Criterion) {
    let spec = SharpnessSpec { a_lo: 0.0, a_hi: 2.0, d_lo: 1.0, d_hi: 3.0, b: 0.8, n: 1000, seed: 3 };
    let samples = reference_samples(&spec, 5000).unwrap();
    let mut g = c.benchmark_group("sharpness_n1000");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                let cons = construct(&spec, exec).unwrap();
                density_report(&cons, &samples, exec).unwrap()
            })
        });
    }
    g.finish();
}

fn soundness_batch(c: &mut Criterion) {
    let instances: Vec<_> = (0..16)
        .map(|k| fixtures::random_sized_instance(&mut ChaCha8Rng::seed_from_u64(k), 24))
        .collect();
    let mut g = c.benchmark_group("soundness_batch_16");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                exec.map_slice(&instances, |s| {
                    let sp = s.spectra().unwrap();
                    let region = qnr_enclosure(&sp);
                    let tol = 1e-8 * operator_norm(&s.assemble()).max(1.0);
                    eigenvalues_general(&s.assemble())
                        .unwrap()
                        .into_iter()
                        .filter(|z| z.im.abs() > tol)
                        .all(|z| region.contains_within(z, tol) && certify(&sp, z).unwrap().in_best)
                })
            })
        });
    }
    g.finish();
}

criterion_group!(benches, grid, qnr, sharpness, soundness_batch);
criterion_main!(benches);
