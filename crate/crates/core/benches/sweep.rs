use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dh_core::density::{reconstruct_density_with, DensityMatrix};
use dh_core::par::Mode;
use dh_core::uniqueness::density_symmetries_with;
use dh_core::verify::{picture_equivalence_sweep, SweepConfig};
use dh_core::{evolve_circuit, Circuit, Gate};

const MODES: [(&str, Mode); 2] = [("sequential", Mode::Sequential), ("parallel", Mode::Parallel)];

fn sweep(c: &mut Criterion) {
    let cfg = SweepConfig { seed: 1, circuits: 40, max_qubits: 6, max_depth: 40, samples: 200 };
    let mut g = c.benchmark_group("oracle_sweep");
    g.sample_size(10);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &m| {
            b.iter(|| picture_equivalence_sweep(m, cfg).unwrap())
        });
    }
    g.finish();
}

fn symmetries(c: &mut Criterion) {
    let bell = evolve_circuit(&Circuit::from_gates(2, [Gate::h(0), Gate::cnot(0, 1)])).unwrap();
    let rho: DensityMatrix = reconstruct_density_with(Mode::Sequential, &bell, &[0, 1]).unwrap();
    let mut g = c.benchmark_group("bell_symmetries");
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &m| {
            b.iter(|| density_symmetries_with(m, &rho).unwrap())
        });
    }
    g.finish();
}

fn densities(c: &mut Criterion) {
    let gates = (0..6).map(Gate::h).chain((0..5).map(|q| Gate::cnot(q, q + 1)));
    let set = evolve_circuit(&Circuit::from_gates(6, gates)).unwrap();
    let qubits: Vec<usize> = (0..6).collect();
    let mut g = c.benchmark_group("reconstruct_6q");
    g.sample_size(20);
    for (name, mode) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &mode, |b, &m| {
            b.iter(|| reconstruct_density_with(m, &set, &qubits).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, sweep, symmetries, densities);
criterion_main!(benches);
