//! Randomized cross-checks of the descriptor path against the dense oracle.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{Circuit, Step};
use crate::descriptor::{evolve_circuit, DescriptorSet};
use crate::error::Result;
use crate::gates::{Gate, GateKind};
use crate::oracle::{expectation_dense, DenseState, TOL};
use crate::par::{self, Mode};
use crate::pauli::{PauliLetter, PauliSum};

/// Uniform gate kinds; two-qubit kinds only when `n ≥ 2`.
pub fn random_clifford_circuit<R: Rng + ?Sized>(rng: &mut R, n: usize, depth: usize) -> Circuit {
    let kinds: Vec<GateKind> = GateKind::ALL.iter().copied().filter(|k| n >= k.arity()).collect();
    let mut steps = Vec::with_capacity(depth);
    for _ in 0..depth {
        let kind = *kinds.choose(rng).expect("at least one kind");
        let mut qubits: Vec<usize> = (0..n).collect();
        qubits.shuffle(rng);
        qubits.truncate(kind.arity());
        steps.push(Step::Gate(Gate::new(kind, qubits).expect("distinct operands")));
    }
    Circuit::new(n, steps)
}

/// Independent stream `k` of a master seed.
pub fn case_rng(seed: u64, k: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(k);
    rng
}

fn random_indices<R: Rng + ?Sized>(rng: &mut R, n: usize, samples: usize) -> Vec<Vec<PauliLetter>> {
    let total = 1u64.checked_shl(2 * n as u32).unwrap_or(u64::MAX);
    if (samples as u64) >= total {
        return crate::oracle::all_letter_sequences(n);
    }
    (0..samples).map(|_| (0..n).map(|_| PauliLetter::from_index(rng.gen_range(0..4))).collect()).collect()
}

/// Largest `|⟨q_I⟩ − ⟨ψ|σ_I|ψ⟩|` over the given multi-indices.
pub fn oracle_deviation(set: &DescriptorSet, state: &DenseState, indices: &[Vec<PauliLetter>]) -> Result<f64> {
    let mut worst = 0.0f64;
    for idx in indices {
        let exact = set.expectation(idx)?;
        let (re, im) = exact.to_f64_pair();
        let dense = expectation_dense(state, &PauliSum::term(crate::dyadic::ComplexDyadic::ONE, idx.clone()))?;
        worst = worst.max((dense.re - re).abs()).max((dense.im - im).abs());
    }
    Ok(worst)
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseReport {
    pub qubits: usize,
    pub depth: usize,
    pub samples: usize,
    pub max_deviation: f64,
}

/// Evolves a circuit both ways and compares sampled expectations.
pub fn check_circuit<R: Rng + ?Sized>(rng: &mut R, circuit: &Circuit, samples: usize) -> Result<CaseReport> {
    let set = evolve_circuit(circuit)?;
    let state = DenseState::evolve(circuit);
    let indices = random_indices(rng, set.num_qubits(), samples);
    Ok(CaseReport {
        qubits: set.num_qubits(),
        depth: circuit.steps().len(),
        samples: indices.len(),
        max_deviation: oracle_deviation(&set, &state, &indices)?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub seed: u64,
    pub circuits: usize,
    pub samples: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub seed: u64,
    pub circuits: usize,
    pub max_qubits: usize,
    pub max_depth: usize,
    pub samples: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { seed: 0, circuits: 100, max_qubits: 6, max_depth: 40, samples: 200 }
    }
}

/// Random circuits with `1..=max_qubits` qubits and `1..=max_depth` gates.
pub fn picture_equivalence_sweep(mode: Mode, cfg: SweepConfig) -> Result<SweepReport> {
    let cases: Result<Vec<CaseReport>> = par::map_range(mode, cfg.circuits, |k| {
        let mut rng = case_rng(cfg.seed, k as u64);
        let n = rng.gen_range(1..=cfg.max_qubits);
        let depth = rng.gen_range(1..=cfg.max_depth);
        let circuit = random_clifford_circuit(&mut rng, n, depth);
        check_circuit(&mut rng, &circuit, cfg.samples)
    })
    .into_iter()
    .collect();
    let cases = cases?;
    let max_deviation = cases.iter().map(|c| c.max_deviation).fold(0.0, f64::max);
    Ok(SweepReport {
        seed: cfg.seed,
        circuits: cases.len(),
        samples: cases.iter().map(|c| c.samples).sum(),
        max_deviation,
        passed: max_deviation <= TOL,
    })
}
