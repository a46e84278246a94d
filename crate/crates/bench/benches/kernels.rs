use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gie_core::qcore::expm;
use gie_core::{
    concurrence, field_cycle, simulate_run, verify_no_go_with_threads, Complex64, CouplingMatrix,
    DephasedCycle, DephasingSpec, FockSpace, PhaseSet,
};

fn bench_expm(c: &mut Criterion) {
    let mut group = c.benchmark_group("expm");
    for n in [16, 64, 192] {
        let fock = FockSpace::new(n).unwrap();
        let a = fock.annihilation();
        let gen = (&a.adjoint() - &a) * Complex64::new(0.7, 0.0)
            + fock.number() * Complex64::new(0.0, 0.3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &gen, |b, m| {
            b.iter(|| expm(black_box(m)).unwrap())
        });
    }
    group.finish();
}

fn bench_cycle(c: &mut Criterion) {
    let mut group = c.benchmark_group("field_cycle");
    for w in [0.25, 0.05] {
        let xis = CouplingMatrix::maximal(w).unwrap();
        let fock = FockSpace::adaptive(xis.max().sqrt()).unwrap();
        group.bench_with_input(BenchmarkId::new("ideal", w), &w, |b, &w| {
            b.iter(|| field_cycle(black_box(&xis), w, &fock, 0.0).unwrap())
        });
    }
    let w = 0.25;
    let xis = CouplingMatrix::maximal(w).unwrap();
    let fock = FockSpace::adaptive(xis.max().sqrt()).unwrap();
    let cycle = DephasedCycle::new(&xis, w, &fock, 0.0).unwrap();
    group.bench_function("dephased_outcome", |b| {
        b.iter(|| {
            cycle
                .outcome(DephasingSpec::new(black_box(0.1)).unwrap())
                .unwrap()
        })
    });
    group.finish();
}

fn bench_nogo(c: &mut Criterion) {
    c.bench_function("nogo_100_trials", |b| {
        b.iter(|| verify_no_go_with_threads(100, 12, 2..=4, black_box(1), 1).unwrap())
    });
}

fn bench_concurrence(c: &mut Criterion) {
    let rho = simulate_run(&PhaseSet::from_delta(0.4, 1.3))
        .unwrap()
        .final_state
        .density_matrix();
    c.bench_function("concurrence", |b| {
        b.iter(|| concurrence(black_box(&rho)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_expm,
    bench_cycle,
    bench_nogo,
    bench_concurrence
);
criterion_main!(benches);
