//! Dense Schrödinger-picture reference simulator.
//!
//! Qubit 0 is the most significant bit of a basis index, matching the
//! left-to-right order of letters in a Pauli string. A circuit with steps
//! `t_0 … t_k` has `U = U_k ⋯ U_0`, and a descriptor component is
//! `U† σ U`. Everything here is floating point; exact values only appear
//! after [`conjugate`] snaps coefficients back to dyadics.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::circuit::{Circuit, Step};
use crate::dyadic::{ComplexDyadic, Dyadic};
use crate::error::{Error, Result};
use crate::gates::{Gate, GateKind};
use crate::pauli::{PauliLetter, PauliSum, I, X, Y, Z};

pub type C64 = Complex64;
pub type DenseOperator = DMatrix<C64>;

pub const TOL: f64 = 1e-9;
/// Largest denominator exponent accepted when snapping to dyadics.
pub const SNAP_MAX_EXP: u32 = 24;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn to_c64(z: &ComplexDyadic) -> C64 {
    let (re, im) = z.to_f64_pair();
    c(re, im)
}

/// `P|k⟩ = phase(k) |k ⊕ flip⟩` for a letter sequence.
fn string_action(letters: &[PauliLetter]) -> (usize, impl Fn(usize) -> C64 + '_) {
    let n = letters.len();
    let mut flip = 0usize;
    for (q, l) in letters.iter().enumerate() {
        if matches!(l, X | Y) {
            flip |= 1 << (n - 1 - q);
        }
    }
    let phase = move |k: usize| {
        let mut p = c(1.0, 0.0);
        for (q, l) in letters.iter().enumerate() {
            let bit = (k >> (n - 1 - q)) & 1;
            p *= match (l, bit) {
                (I, _) | (X, _) => c(1.0, 0.0),
                (Y, 0) => c(0.0, 1.0),
                (Y, _) => c(0.0, -1.0),
                (Z, 0) => c(1.0, 0.0),
                (Z, _) => c(-1.0, 0.0),
            };
        }
        p
    };
    (flip, phase)
}

/// Dense matrix of a Pauli sum.
pub fn pauli_sum_matrix(p: &PauliSum) -> DenseOperator {
    let n = p.num_qubits();
    let dim = 1usize << n;
    let mut m = DenseOperator::zeros(dim, dim);
    for (letters, coef) in p.terms() {
        let cf = to_c64(coef);
        let (flip, phase) = string_action(letters);
        for k in 0..dim {
            m[(k ^ flip, k)] += cf * phase(k);
        }
    }
    m
}

/// Single-qubit Pauli matrix.
pub fn letter_matrix(l: PauliLetter) -> DenseOperator {
    pauli_sum_matrix(&PauliSum::single(1, 0, l))
}

pub fn hadamard() -> DenseOperator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DenseOperator::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
}

pub fn phase_s() -> DenseOperator {
    DenseOperator::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])
}

/// Non-Clifford `T = diag(1, e^{iπ/4})`.
pub fn phase_t() -> DenseOperator {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    DenseOperator::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, s)])
}

/// `exp(-iθX/2)`.
pub fn rx(theta: f64) -> DenseOperator {
    let (s, co) = (theta / 2.0).sin_cos();
    DenseOperator::from_row_slice(2, 2, &[c(co, 0.0), c(0.0, -s), c(0.0, -s), c(co, 0.0)])
}

/// CNOT with the first qubit as control.
pub fn cnot_matrix() -> DenseOperator {
    let mut m = DenseOperator::zeros(4, 4);
    for (from, to) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        m[(to, from)] = c(1.0, 0.0);
    }
    m
}

/// Matrix of a gate kind on its own operands (first operand most significant).
pub fn gate_matrix(kind: GateKind) -> DenseOperator {
    match kind {
        GateKind::H => hadamard(),
        GateKind::X => letter_matrix(X),
        GateKind::Y => letter_matrix(Y),
        GateKind::Z => letter_matrix(Z),
        GateKind::S => phase_s(),
        GateKind::Cnot => cnot_matrix(),
        GateKind::Bell => {
            let h1 = hadamard().kronecker(&DenseOperator::identity(2, 2));
            h1 * cnot_matrix()
        }
    }
}

/// Embeds a `2^k × 2^k` operator acting on `qubits` into an `n`-qubit register.
pub fn embed(small: &DenseOperator, qubits: &[usize], n: usize) -> DenseOperator {
    let k = qubits.len();
    assert_eq!(small.nrows(), 1 << k);
    let dim = 1usize << n;
    let mut m = DenseOperator::zeros(dim, dim);
    let local = |idx: usize| -> usize { qubits.iter().fold(0, |acc, &q| (acc << 1) | ((idx >> (n - 1 - q)) & 1)) };
    let mask: usize = qubits.iter().map(|&q| 1usize << (n - 1 - q)).sum();
    for col in 0..dim {
        let lc = local(col);
        let rest = col & !mask;
        for lr in 0..(1usize << k) {
            let v = small[(lr, lc)];
            if v == c(0.0, 0.0) {
                continue;
            }
            let mut row = rest;
            for (j, &q) in qubits.iter().enumerate() {
                if (lr >> (k - 1 - j)) & 1 == 1 {
                    row |= 1 << (n - 1 - q);
                }
            }
            m[(row, col)] += v;
        }
    }
    m
}

/// Full-register unitary of one gate.
pub fn gate_unitary(gate: &Gate, n: usize) -> DenseOperator {
    embed(&gate_matrix(gate.kind()), gate.operands(), n)
}

/// `U = U_k ⋯ U_0` for the whole circuit; ancillas extend by `⊗ I`.
pub fn circuit_unitary(circuit: &Circuit) -> DenseOperator {
    let mut n = circuit.initial_qubits();
    let mut u = DenseOperator::identity(1 << n, 1 << n);
    for step in circuit.steps() {
        match step {
            Step::Gate(g) => u = gate_unitary(g, n) * u,
            Step::AddAncilla => {
                u = u.kronecker(&DenseOperator::identity(2, 2));
                n += 1;
            }
        }
    }
    u
}

fn unitarity_defect(u: &DenseOperator) -> f64 {
    let d = u.adjoint() * u - DenseOperator::identity(u.nrows(), u.ncols());
    d.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// All Pauli letter sequences on `n` qubits in canonical order.
pub fn all_letter_sequences(n: usize) -> Vec<Vec<PauliLetter>> {
    (0..(1usize << (2 * n)))
        .map(|idx| (0..n).map(|q| PauliLetter::from_index((idx >> (2 * (n - 1 - q))) & 3)).collect())
        .collect()
}

/// Projects a dense operator on the Pauli basis and snaps to dyadics.
pub fn decompose(m: &DenseOperator) -> Result<PauliSum> {
    let dim = m.nrows();
    let n = dim.trailing_zeros() as usize;
    let mut out = PauliSum::zero(n);
    for letters in all_letter_sequences(n) {
        // Tr(P M) / 2^n with P Hermitian
        let tr = {
            let (flip, phase) = string_action(&letters);
            (0..dim).map(|k| phase(k) * m[(k, k ^ flip)]).sum::<C64>() / dim as f64
        };
        if tr.norm() <= TOL {
            continue;
        }
        let re = Dyadic::snap(tr.re, SNAP_MAX_EXP, TOL).ok_or(Error::Residual((tr.re - tr.re.round()).abs()))?;
        let im = Dyadic::snap(tr.im, SNAP_MAX_EXP, TOL).ok_or(Error::Residual((tr.im - tr.im.round()).abs()))?;
        out = &out + &PauliSum::term(ComplexDyadic::new(re, im), letters);
    }
    let residual = (pauli_sum_matrix(&out) - m).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if residual > TOL {
        return Err(Error::Residual(residual));
    }
    Ok(out)
}

/// `U† P U`, projected back onto the Pauli basis with dyadic coefficients.
pub fn conjugate(u: &DenseOperator, p: &PauliSum) -> Result<PauliSum> {
    let dim = 1usize << p.num_qubits();
    if u.nrows() != dim || u.ncols() != dim {
        return Err(Error::DimensionMismatch { left: u.nrows().trailing_zeros() as usize, right: p.num_qubits() });
    }
    let defect = unitarity_defect(u);
    if defect > TOL {
        return Err(Error::NotUnitary(defect));
    }
    decompose(&(u.adjoint() * pauli_sum_matrix(p) * u))
}

/// A normalized state vector.
#[derive(Clone, Debug)]
pub struct DenseState {
    n: usize,
    amps: Vec<C64>,
}

impl DenseState {
    pub fn zero(n: usize) -> DenseState {
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[0] = c(1.0, 0.0);
        DenseState { n, amps }
    }

    /// Normalizes the given amplitudes; fails on a zero vector.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<DenseState> {
        let n = amps.len().trailing_zeros() as usize;
        assert_eq!(1 << n, amps.len(), "amplitude count must be a power of two");
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm <= TOL {
            return Err(Error::ZeroProbability(norm));
        }
        Ok(DenseState { n, amps: amps.into_iter().map(|a| a / norm).collect() })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Applies a small operator on `qubits` in place.
    pub fn apply_matrix(&mut self, small: &DenseOperator, qubits: &[usize]) {
        let n = self.n;
        let k = qubits.len();
        let mask: usize = qubits.iter().map(|&q| 1usize << (n - 1 - q)).sum();
        let spread = |local: usize, base: usize| -> usize {
            let mut idx = base;
            for (j, &q) in qubits.iter().enumerate() {
                if (local >> (k - 1 - j)) & 1 == 1 {
                    idx |= 1 << (n - 1 - q);
                }
            }
            idx
        };
        let mut out = self.amps.clone();
        for base in (0..self.amps.len()).filter(|b| b & mask == 0) {
            let local_in: Vec<C64> = (0..(1 << k)).map(|l| self.amps[spread(l, base)]).collect();
            for r in 0..(1 << k) {
                let mut acc = c(0.0, 0.0);
                for (l, v) in local_in.iter().enumerate() {
                    acc += small[(r, l)] * v;
                }
                out[spread(r, base)] = acc;
            }
        }
        self.amps = out;
    }

    pub fn apply_gate(&mut self, gate: &Gate) {
        self.apply_matrix(&gate_matrix(gate.kind()), gate.operands());
    }

    /// Appends a qubit in `|0⟩` as the new least significant bit.
    pub fn add_ancilla(&mut self) {
        let mut amps = vec![c(0.0, 0.0); self.amps.len() * 2];
        for (k, a) in self.amps.iter().enumerate() {
            amps[2 * k] = *a;
        }
        self.amps = amps;
        self.n += 1;
    }

    /// `|ψ⟩ = U|0…0⟩` for the circuit.
    pub fn evolve(circuit: &Circuit) -> DenseState {
        let mut s = DenseState::zero(circuit.initial_qubits());
        for step in circuit.steps() {
            match step {
                Step::Gate(g) => s.apply_gate(g),
                Step::AddAncilla => s.add_ancilla(),
            }
        }
        s
    }

    /// Outer product `|ψ⟩⟨ψ|`.
    pub fn density(&self) -> DenseOperator {
        let v = nalgebra::DVector::from_vec(self.amps.clone());
        &v * v.adjoint()
    }
}

/// `⟨ψ|P|ψ⟩`.
pub fn expectation_dense(state: &DenseState, p: &PauliSum) -> Result<C64> {
    if p.num_qubits() != state.n {
        return Err(Error::DimensionMismatch { left: state.n, right: p.num_qubits() });
    }
    let mut acc = c(0.0, 0.0);
    for (letters, coef) in p.terms() {
        let (flip, phase) = string_action(letters);
        let mut t = c(0.0, 0.0);
        for (k, a) in state.amps.iter().enumerate() {
            if *a == c(0.0, 0.0) {
                continue;
            }
            t += state.amps[k ^ flip].conj() * phase(k) * a;
        }
        acc += to_c64(coef) * t;
    }
    Ok(acc)
}

/// Projects `qubits` onto `outcome` (bit `j` for `qubits[j]`), returning the
/// renormalized remainder (remaining qubits in ascending order) and the
/// outcome probability.
pub fn conditional_state(state: &DenseState, qubits: &[usize], outcome: &[u8]) -> Result<(DenseState, f64)> {
    assert_eq!(qubits.len(), outcome.len());
    let n = state.n;
    if let Some(&q) = qubits.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange { index: q, n });
    }
    let rest: Vec<usize> = (0..n).filter(|q| !qubits.contains(q)).collect();
    let mut amps = vec![c(0.0, 0.0); 1 << rest.len()];
    for (k, a) in state.amps.iter().enumerate() {
        let matches = qubits.iter().zip(outcome).all(|(&q, &b)| ((k >> (n - 1 - q)) & 1) as u8 == b);
        if !matches {
            continue;
        }
        let idx = rest.iter().fold(0, |acc, &q| (acc << 1) | ((k >> (n - 1 - q)) & 1));
        amps[idx] = *a;
    }
    let p: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
    if p <= 1e-12 {
        return Err(Error::ZeroProbability(p));
    }
    if rest.is_empty() {
        return Ok((DenseState { n: 0, amps: vec![c(1.0, 0.0)] }, p));
    }
    let s = p.sqrt();
    Ok((DenseState { n: rest.len(), amps: amps.into_iter().map(|a| a / s).collect() }, p))
}

/// Reduced density matrix on `keep` (in the given order).
pub fn reduced_density(state: &DenseState, keep: &[usize]) -> DenseOperator {
    let n = state.n;
    let k = keep.len();
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();
    let local = |idx: usize, qs: &[usize]| qs.iter().fold(0, |acc, &q| (acc << 1) | ((idx >> (n - 1 - q)) & 1));
    let mut rho = DenseOperator::zeros(1 << k, 1 << k);
    for (i, ai) in state.amps.iter().enumerate() {
        if *ai == c(0.0, 0.0) {
            continue;
        }
        for (j, aj) in state.amps.iter().enumerate() {
            if local(i, &traced) != local(j, &traced) {
                continue;
            }
            rho[(local(i, keep), local(j, keep))] += ai * aj.conj();
        }
    }
    rho
}

/// Largest entrywise deviation between two operators.
pub fn max_deviation(a: &DenseOperator, b: &DenseOperator) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}
