//! Benchmarks along the pipeline: quadrature-backed correlators, the two
//! discord routes, channel evolution and sudden-change detection.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use std::hint::black_box;

use qdx_core::{
    correlator_set, default_p_grid, detect_p_sc, discord_analytic, discord_numeric,
    evolve_two_qubit, trajectory_from_state, ChannelKind, GridSpec, ModelPoint, ParametrizedTime,
    QuadratureConfig, XState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn xy_state(lambda: f64, gamma: f64, r: usize) -> XState {
    let point = ModelPoint::xy(lambda, gamma, r).unwrap();
    let set = correlator_set(&point, &QuadratureConfig::default()).unwrap();
    XState::from_correlators(&set).unwrap()
}

fn bench_correlators(c: &mut Criterion) {
    let quad = QuadratureConfig::default();
    let mut group = c.benchmark_group("correlators");
    for (name, lambda, gamma, r) in [
        ("xy_r1", 0.7, 0.7, 1),
        ("xy_r2", 0.7, 0.7, 2),
        ("near_critical_r1", 0.99, 0.5, 1),
    ] {
        let point = ModelPoint::xy(lambda, gamma, r).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| correlator_set(black_box(&point), black_box(&quad)).unwrap())
        });
    }
    group.finish();
}

fn bench_measures(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut random_state = move || {
        XState::from_unit_box(
            [rng.gen(), rng.gen(), rng.gen()],
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        )
    };
    let mut group = c.benchmark_group("measures");
    group.bench_function("discord_analytic", |b| {
        b.iter_batched(
            &mut random_state,
            |x| discord_analytic(black_box(&x)),
            BatchSize::SmallInput,
        )
    });
    let x = xy_state(0.7, 0.7, 1);
    let coarse = GridSpec {
        n_theta: 37,
        n_phi: 19,
    };
    group.bench_function("discord_numeric_coarse_grid", |b| {
        b.iter(|| discord_numeric(black_box(&x), black_box(&coarse)))
    });
    group.finish();
}

fn bench_channels(c: &mut Criterion) {
    let x = xy_state(0.7, 0.7, 1);
    let p = ParametrizedTime::new(0.4).unwrap();
    let mut group = c.benchmark_group("channels");
    for kind in [ChannelKind::AmplitudeDamping, ChannelKind::BitPhaseFlip] {
        group.bench_function(format!("kraus_evolution_{kind}"), |b| {
            b.iter(|| evolve_two_qubit(black_box(&x), kind, p).unwrap())
        });
    }
    group.finish();
}

fn bench_dynamics(c: &mut Criterion) {
    let x = xy_state(0.7, 0.7, 1);
    let grid = default_p_grid();
    let mut group = c.benchmark_group("dynamics");
    group.sample_size(20);
    group.bench_function("trajectory_1001_points_bpf", |b| {
        b.iter(|| {
            trajectory_from_state(black_box(&x), None, ChannelKind::BitPhaseFlip, &grid).unwrap()
        })
    });
    group.bench_function("detect_p_sc_bpf", |b| {
        b.iter(|| detect_p_sc(black_box(&x), ChannelKind::BitPhaseFlip, None).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_correlators,
    bench_measures,
    bench_channels,
    bench_dynamics
);
criterion_main!(benches);
