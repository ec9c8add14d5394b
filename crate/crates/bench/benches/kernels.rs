use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qeccov_core::covariance::{noncovariance, U1Spec};
use qeccov_core::haar::{
    first_factor_dephasing, haar_unitary, mc_average, sample_rng, Quantity, SeededEnsemble,
};
use qeccov_core::qec::{epsilon_closed_form, infidelity, CodeNoisePair};
use qeccov_core::random::{random_channel, random_hermitian, random_isometry};
use qeccov_core::KrausChannel;

fn pair(d_l: usize, d_a: usize, n: usize) -> CodeNoisePair {
    let mut rng = sample_rng(1, (d_l * 10 + d_a) as u64);
    let d_s = d_l * d_a;
    let w = random_isometry(d_l, d_s, &mut rng);
    CodeNoisePair::isometric(&w, random_channel(d_s, d_s, n, &mut rng)).unwrap()
}

fn infidelity_kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("infidelity");
    for (d_l, d_a) in [(2, 2), (2, 4), (4, 4)] {
        let p = pair(d_l, d_a, 4);
        let id = format!("dL{d_l}_dA{d_a}");
        g.bench_with_input(BenchmarkId::new("closed_form", &id), &p, |b, p| {
            b.iter(|| epsilon_closed_form(black_box(p)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("with_oracle", &id), &p, |b, p| {
            b.iter(|| infidelity(black_box(p)).unwrap())
        });
    }
    g.finish();
}

fn noncovariance_kernel(c: &mut Criterion) {
    let mut g = c.benchmark_group("noncovariance");
    for (d_l, d_s) in [(2, 4), (2, 8), (4, 8)] {
        let mut rng = sample_rng(2, d_s as u64);
        let ch = KrausChannel::from_isometry(&random_isometry(d_l, d_s, &mut rng));
        let spec = U1Spec::new(random_hermitian(d_l, &mut rng), random_hermitian(d_s, &mut rng)).unwrap();
        g.bench_function(format!("dL{d_l}_dS{d_s}"), |b| {
            b.iter(|| noncovariance(black_box(&ch), &spec).unwrap())
        });
    }
    g.finish();
}

fn haar_kernels(c: &mut Criterion) {
    let mut g = c.benchmark_group("haar");
    for d in [2, 4, 8, 16] {
        g.bench_function(BenchmarkId::new("unitary", d), |b| {
            let mut rng = sample_rng(3, d as u64);
            b.iter(|| haar_unitary(black_box(d), &mut rng))
        });
    }
    let q = Quantity::InfidelitySq {
        noise: first_factor_dephasing(4).unwrap(),
    };
    let ens = SeededEnsemble::new(2, 2, 7, 2000).unwrap();
    g.sample_size(10);
    g.bench_function("mc_average_2000", |b| {
        b.iter(|| mc_average(black_box(&q), &ens).unwrap())
    });
    g.finish();
}

criterion_group!(benches, infidelity_kernels, noncovariance_kernel, haar_kernels);
criterion_main!(benches);
