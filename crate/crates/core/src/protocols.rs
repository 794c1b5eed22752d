//! Canned end-to-end constructions: decoherence and generalized
//! measurement, the ultimate-state chain, and entanglement swapping with
//! dependency tracing. Reports use 1-based qubit labels.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::circuit::{Circuit, Step};
use crate::density::{purity_condition, reconstruct_density, represent_on, DensityMatrix, PurityReport};
use crate::descriptor::{evolve_circuit, Descriptor, DescriptorSet};
use crate::dyadic::{ComplexDyadic, Dyadic};
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::oracle::all_letter_sequences;
use crate::pauli::{PauliLetter, PauliSum, I, X, Y, Z};
use crate::relative::{
    condition, measure, povm_sum_check, relative_descriptor_pair, ultimate_state_chain, RelativeContext,
};
use crate::uniqueness::{validate_basis, BasisReport};

fn one_based(s: &BTreeSet<usize>) -> BTreeSet<usize> {
    s.iter().map(|q| q + 1).collect()
}

fn labelled(supports: &[BTreeSet<usize>]) -> BTreeMap<usize, BTreeSet<usize>> {
    supports.iter().enumerate().map(|(a, s)| (a + 1, one_based(s))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepTrace {
    pub step: String,
    pub supports: BTreeMap<usize, BTreeSet<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DependencyReport {
    pub per_qubit: BTreeMap<usize, BTreeSet<usize>>,
    pub per_step: Vec<StepTrace>,
    pub locality_ok: bool,
    pub violations: Vec<String>,
}

impl DependencyReport {
    /// Support of qubit `a` (1-based label in, 1-based labels out).
    pub fn support_of(&self, a: usize) -> Option<&BTreeSet<usize>> {
        self.per_qubit.get(&a)
    }
}

/// A descriptor changes only when its own qubit is an operand, and its new
/// support lies within the supports the operands had before the step.
fn locality_violations(k: usize, step: &Step, before: &[BTreeSet<usize>], after: &[BTreeSet<usize>]) -> Vec<String> {
    let mut out = Vec::new();
    let ops: Vec<usize> = match step {
        Step::Gate(g) => g.operands().to_vec(),
        Step::AddAncilla => Vec::new(),
    };
    let reach: BTreeSet<usize> = ops.iter().flat_map(|&b| before[b].iter().copied()).collect();
    for (a, old) in before.iter().enumerate() {
        let new = &after[a];
        if new == old {
            continue;
        }
        if !ops.contains(&a) {
            out.push(format!("step {}: q{} changed without taking part in {step}", k + 1, a + 1));
        }
        if !new.is_subset(&reach) {
            out.push(format!("step {}: q{} gained support outside what the operands of {step} carried", k + 1, a + 1));
        }
    }
    for (a, new) in after.iter().enumerate().skip(before.len()) {
        if *new != BTreeSet::from([a]) {
            out.push(format!("step {}: new q{} does not start on itself", k + 1, a + 1));
        }
    }
    out
}

/// Supports of the set, and per step when the set still carries a history.
pub fn dependency_trace(set: &DescriptorSet) -> Result<DependencyReport> {
    let added = set.history().iter().filter(|s| matches!(s, Step::AddAncilla)).count();
    let initial = set.num_qubits() - added;
    let mut per_step = Vec::new();
    let mut violations = Vec::new();
    if !set.history().is_empty() {
        let mut cur = DescriptorSet::initial(initial)?;
        for (k, step) in set.history().iter().enumerate() {
            let next = cur.apply_step(step).map_err(|e| Error::Step { step: k, source: Box::new(e) })?;
            let (before, after) = (cur.supports(), next.supports());
            violations.extend(locality_violations(k, step, &before, &after));
            per_step.push(StepTrace { step: step.to_string(), supports: labelled(&after) });
            cur = next;
        }
    }
    Ok(DependencyReport {
        per_qubit: labelled(&set.supports()),
        per_step,
        locality_ok: violations.is_empty(),
        violations,
    })
}

pub fn dependency_trace_circuit(circuit: &Circuit) -> Result<DependencyReport> {
    dependency_trace(&evolve_circuit(circuit)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

impl BellState {
    /// Identifies a two-qubit density as one of the four Bell states.
    pub fn identify(rho: &DensityMatrix) -> Option<BellState> {
        if rho.num_qubits() != 2 {
            return None;
        }
        let one = ComplexDyadic::ONE;
        let c = |a, b| rho.coefficient(&[a, b]);
        let label = match (c(X, X), c(Z, Z)) {
            (xx, zz) if xx == one && zz == one => BellState::PhiPlus,
            (xx, zz) if xx == -one && zz == one => BellState::PhiMinus,
            (xx, zz) if xx == one && zz == -one => BellState::PsiPlus,
            (xx, zz) if xx == -one && zz == -one => BellState::PsiMinus,
            _ => return None,
        };
        let yy = c(Y, Y);
        let expected = match label {
            BellState::PhiPlus | BellState::PsiMinus => -one,
            BellState::PhiMinus | BellState::PsiPlus => one,
        };
        let rest_zero = rho.nonzero().iter().all(|(l, _)| matches!(l.as_slice(), [I, I] | [X, X] | [Y, Y] | [Z, Z]));
        (yy == expected && rest_zero).then_some(label)
    }
}

/// Density of `qubits` conditioned on a context over other qubits:
/// coefficients `⟨q_P F⟩ / ⟨F⟩`.
pub fn conditional_density(set: &DescriptorSet, qubits: &[usize], ctx: &RelativeContext) -> Result<DensityMatrix> {
    if qubits.iter().any(|q| ctx.targets().contains(q)) {
        return Err(Error::MalformedContext("conditioned qubits overlap the context".into()));
    }
    let f = ctx.factor(set)?;
    let norm = f.vacuum_expectation().re;
    if norm.is_zero() {
        return Err(Error::ZeroProbability(0.0));
    }
    let mut coeffs = Vec::new();
    for letters in all_letter_sequences(qubits.len()) {
        let picks: Vec<(usize, PauliLetter)> = qubits.iter().copied().zip(letters).collect();
        let v = set.product_of(&picks)?.try_mul(&f)?.vacuum_expectation();
        let scaled = v.checked_div_real(&norm).ok_or_else(|| Error::Inexact(format!("{v} / {norm}")))?;
        coeffs.push(scaled);
    }
    DensityMatrix::new(qubits.len(), coeffs)
}

/// `U† ρ U` for a gate `U` on the density's own qubits: each Pauli string
/// is replaced by its Heisenberg image.
pub fn heisenberg_density(rho: &DensityMatrix, gate: &Gate) -> Result<DensityMatrix> {
    let n = rho.num_qubits();
    let images = DescriptorSet::initial(n)?.apply(gate)?;
    let mut acc = PauliSum::zero(n);
    for (letters, v) in rho.nonzero() {
        acc = &acc + &images.product(&letters)?.scale(v);
    }
    DensityMatrix::from_entries(n, acc.terms().map(|(l, v)| (l.to_vec(), *v)))
}

/// Four Bell pairs, then `BELL(2,3)`, two ancillas, `CNOT(3→5)`, `CNOT(2→6)`.
pub fn swap_circuit() -> Circuit {
    let steps = vec![
        Step::Gate(Gate::h(0)),
        Step::Gate(Gate::cnot(0, 1)),
        Step::Gate(Gate::h(2)),
        Step::Gate(Gate::cnot(2, 3)),
        Step::Gate(Gate::bell(2, 1)),
        Step::AddAncilla,
        Step::AddAncilla,
        Step::Gate(Gate::cnot(2, 4)),
        Step::Gate(Gate::cnot(1, 5)),
    ];
    Circuit::new(4, steps)
}

#[derive(Clone, Debug, Serialize)]
pub struct PairDensity {
    pub pair: (usize, usize),
    pub density: DensityMatrix,
    pub purity: PurityReport,
    /// Both single-qubit marginals are `I/2`.
    pub marginals_mixed: bool,
    /// Every non-identity coefficient vanishes.
    pub uncorrelated: bool,
}

fn pair_density(set: &DescriptorSet, a: usize, b: usize) -> Result<PairDensity> {
    let density = reconstruct_density(set, &[a, b])?;
    let marginals_mixed =
        [a, b].iter().all(|&q| reconstruct_density(set, &[q]).map(|r| r.nonzero().len() == 1).unwrap_or(false));
    let uncorrelated = density.nonzero().len() == 1;
    Ok(PairDensity {
        pair: (a + 1, b + 1),
        purity: purity_condition(set, (a, b))?,
        density,
        marginals_mixed,
        uncorrelated,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RelativeBell {
    pub outcome: String,
    pub context: RelativeContext,
    pub probability: Dyadic,
    /// Descriptor components multiplied into the conditioning factor.
    pub consumed: Vec<String>,
    pub q1: Descriptor,
    pub q4: Descriptor,
    /// Conditioned `q1, q4` represented on the `(1,4)` factor space.
    pub reduced: DescriptorSet,
    pub basis: BasisReport,
    pub purity: PurityReport,
    pub density: DensityMatrix,
    /// Sign of the reduced `q'_1x` relative to outcome `00`.
    pub sign_1: i8,
    /// Sign of the reduced `q'_4z` relative to outcome `00`.
    pub sign_4: i8,
    pub bell: Option<BellState>,
    /// Label of the `(2,3)` pair conditioned on the same outcome, read in
    /// the Bell basis (the rotation undone).
    pub partner_bell: Option<BellState>,
}

fn relative_sign(a: &PauliSum, reference: &PauliSum) -> i8 {
    if a == reference {
        1
    } else if *a == reference.scale_int(-1) {
        -1
    } else {
        0
    }
}

fn relative_bell_on(set: &DescriptorSet) -> Result<Vec<RelativeBell>> {
    if set.num_qubits() != 6 {
        return Err(Error::UnsupportedSize { n: set.num_qubits(), supported: "the 6-qubit swap register" });
    }
    let mut out: Vec<RelativeBell> = Vec::with_capacity(4);
    for bits in [[0u8, 0], [0, 1], [1, 0], [1, 1]] {
        let ctx = RelativeContext::computational(vec![4, 5], &bits)?;
        let norm = ctx.factor(set)?.vacuum_expectation().re;
        let q1 = relative_descriptor_pair(set.descriptor(0), &ctx, set)?;
        let q4 = relative_descriptor_pair(set.descriptor(3), &ctx, set)?;
        let reduce = |d: &Descriptor| -> Result<Descriptor> {
            represent_on(d, &[0, 3]).try_map(|c| {
                let mut acc = PauliSum::zero(2);
                for (l, v) in c.terms() {
                    let v = v.checked_div_real(&norm).ok_or_else(|| Error::Inexact(format!("{v} / {norm}")))?;
                    acc = &acc + &PauliSum::term(v, l.to_vec());
                }
                Ok(acc)
            })
        };
        let reduced = DescriptorSet::from_descriptors(vec![reduce(&q1)?, reduce(&q4)?])?;
        let density = reconstruct_density(&reduced, &[0, 1])?;
        let partner = heisenberg_density(&conditional_density(set, &[1, 2], &ctx)?, &Gate::bell(1, 0))?;
        let (sign_1, sign_4) = match out.first() {
            None => (1, 1),
            Some(first) => (
                relative_sign(&reduced.descriptor(0).qx, &first.reduced.descriptor(0).qx),
                relative_sign(&reduced.descriptor(1).qz, &first.reduced.descriptor(1).qz),
            ),
        };
        out.push(RelativeBell {
            outcome: format!("{}{}", bits[0], bits[1]),
            probability: ctx.outcome_probability(set)?,
            consumed: vec!["q5z".into(), "q6z".into()],
            basis: validate_basis(&reduced)?,
            purity: purity_condition(&reduced, (0, 1))?,
            bell: BellState::identify(&density),
            partner_bell: BellState::identify(&partner),
            context: ctx,
            q1,
            q4,
            reduced,
            density,
            sign_1,
            sign_4,
        });
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct SwapResult {
    pub final_set: DescriptorSet,
    pub pair_densities: Vec<PairDensity>,
    pub relative_bell: Vec<RelativeBell>,
    pub dependency: DependencyReport,
    /// The four conditioned `q'_1` sum to `4 q_1`.
    pub povm_sum_holds: bool,
}

impl SwapResult {
    pub fn pair(&self, a: usize, b: usize) -> Option<&PairDensity> {
        self.pair_densities.iter().find(|p| p.pair == (a, b))
    }
}

pub const SWAP_PAIRS: [(usize, usize); 6] = [(1, 2), (3, 4), (1, 4), (2, 3), (3, 5), (2, 6)];

pub fn run_entanglement_swap() -> Result<SwapResult> {
    let final_set = evolve_circuit(&swap_circuit())?;
    let pair_densities =
        SWAP_PAIRS.iter().map(|&(a, b)| pair_density(&final_set, a - 1, b - 1)).collect::<Result<Vec<_>>>()?;
    let povm: Vec<RelativeContext> = [[0u8, 0], [0, 1], [1, 0], [1, 1]]
        .iter()
        .map(|b| RelativeContext::computational(vec![4, 5], b))
        .collect::<Result<_>>()?;
    let povm_sum_holds = povm_sum_check(final_set.descriptor(0), &povm, &final_set)?;
    Ok(SwapResult {
        relative_bell: relative_bell_on(&final_set)?,
        dependency: dependency_trace(&final_set)?,
        pair_densities,
        povm_sum_holds,
        final_set,
    })
}

/// The four `(5,6)`-conditioned `(1,4)` pairs of a swap run.
pub fn swap_relative_bell(result: &SwapResult) -> Result<Vec<RelativeBell>> {
    relative_bell_on(&result.final_set)
}

fn averages(set: &DescriptorSet) -> Vec<[Dyadic; 3]> {
    set.descriptors()
        .iter()
        .map(|d| {
            let [x, y, z] = d.components();
            [x.vacuum_expectation().re, y.vacuum_expectation().re, z.vacuum_expectation().re]
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct DecoherenceDemo {
    pub qubits: Vec<usize>,
    pub before: DensityMatrix,
    pub after: DensityMatrix,
    pub off_diagonal_zero: bool,
    pub diagonal_unchanged: bool,
}

/// A Bell pair measured by one ancilla per qubit.
pub fn run_decoherence_demo() -> Result<DecoherenceDemo> {
    let bell = evolve_circuit(&Circuit::from_gates(2, [Gate::h(0), Gate::cnot(0, 1)]))?;
    let after_set = crate::relative::decohere(&bell, &[0, 1])?;
    let before = reconstruct_density(&bell, &[0, 1])?;
    let after = reconstruct_density(&after_set, &[0, 1])?;
    let off_diagonal_zero = after.nonzero().iter().all(|(l, _)| l.iter().all(|&p| p == I || p == Z));
    Ok(DecoherenceDemo {
        qubits: vec![1, 2],
        diagonal_unchanged: before.diagonal() == after.diagonal(),
        before,
        after,
        off_diagonal_zero,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GeneralizedMeasurementDemo {
    pub preparation: Vec<Gate>,
    /// The system descriptor before the second qubit is added.
    pub system: Descriptor,
    /// After adding qubit 2 and rotating `(1,2)` with `H`, then `CNOT(1→2)`.
    pub rotated: DescriptorSet,
    /// `rotated` equals `q1 = (p_z X_2, -p_y X_2, p_x)`, `q2 = (X_2, p_x Y_2, p_x Z_2)`.
    pub shape_holds: bool,
    /// After `CNOT(1→3)` and `CNOT(2→4)` onto a fresh two-qubit ancilla.
    pub measured: DescriptorSet,
    /// `⟨q_x⟩, ⟨q_y⟩, ⟨q_z⟩` per qubit, before and after the ancilla.
    pub averages_before: Vec<[Dyadic; 3]>,
    pub averages_after: Vec<[Dyadic; 3]>,
    pub xy_zero: bool,
    pub z_preserved: bool,
    /// Qubit 1 with qubit 2 traced out: `(I + a·σ)/2`.
    pub marginal: DensityMatrix,
    pub decoherence: DecoherenceDemo,
}

/// Measures one system qubit in the Bell basis of itself and a fresh qubit.
pub fn run_generalized_measurement_demo(preparation: &[Gate]) -> Result<GeneralizedMeasurementDemo> {
    if let Some(g) = preparation.iter().find(|g| g.operands().iter().any(|&q| q != 0)) {
        return Err(Error::RotationOutsideSystem {
            system: 0,
            found: *g.operands().iter().find(|&&q| q != 0).expect("found"),
        });
    }
    let system_set = evolve_circuit(&Circuit::from_gates(1, preparation.iter().cloned()))?;
    let system = system_set.descriptor(0).clone();
    let rotated = system_set.add_ancilla().apply(&Gate::h(0))?.apply(&Gate::cnot(0, 1))?;

    let p = system.map(|c| c.extend(1));
    let x2 = PauliSum::single(2, 1, X);
    let op = |a: &PauliSum, b: &PauliSum| a.try_mul(b);
    let expected_1 = Descriptor::new(op(&p.qz, &x2)?, op(&p.qy, &x2)?.scale_int(-1), p.qx.clone());
    let expected_2 =
        Descriptor::new(x2.clone(), op(&p.qx, &PauliSum::single(2, 1, Y))?, op(&p.qx, &PauliSum::single(2, 1, Z))?);
    let shape_holds = rotated.descriptors() == [expected_1, expected_2];

    let measured = rotated.add_ancilla().add_ancilla().apply(&Gate::cnot(0, 2))?.apply(&Gate::cnot(1, 3))?;
    let averages_before = averages(&rotated);
    let averages_after = averages(&measured);
    let xy_zero = averages_after[..2].iter().all(|v| v[0].is_zero() && v[1].is_zero());
    let z_preserved = (0..2).all(|a| averages_after[a][2] == averages_before[a][2]);
    Ok(GeneralizedMeasurementDemo {
        preparation: preparation.to_vec(),
        system,
        marginal: reconstruct_density(&rotated, &[0])?,
        rotated,
        shape_holds,
        measured,
        averages_before,
        averages_after,
        xy_zero,
        z_preserved,
        decoherence: run_decoherence_demo()?,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainDemo {
    /// System `|0⟩+|1⟩` measured by an ancilla.
    pub measured: DescriptorSet,
    /// `q_1` relative to `|0⟩` and `|1⟩` of the ancilla.
    pub relative_zero: Descriptor,
    pub relative_one: Descriptor,
    pub relative_sum_holds: bool,
    /// The ancilla measured in turn by a third qubit.
    pub chained: DescriptorSet,
    /// The ancilla relative to `|0⟩` and `|1⟩` of the third qubit.
    pub plus: Descriptor,
    pub minus: Descriptor,
    pub chain_sum_holds: bool,
    /// Conditioning `q_1` on the third qubit reproduces the averages of
    /// conditioning it on the ancilla directly.
    pub consistent_with_ancilla: bool,
    pub relative_probabilities: Vec<[Dyadic; 2]>,
}

pub fn run_ultimate_chain_demo() -> Result<ChainDemo> {
    let prepared = evolve_circuit(&Circuit::from_gates(1, [Gate::h(0)]))?;
    let measured = measure(&prepared, 0)?;
    let q1 = measured.descriptor(0);
    let zero = RelativeContext::computational(vec![1], &[0])?;
    let one = RelativeContext::computational(vec![1], &[1])?;
    let relative_zero = condition(q1, &zero, &measured)?;
    let relative_one = condition(q1, &one, &measured)?;
    let relative_sum_holds = relative_zero.try_add(&relative_one)? == q1.scale_int(2);

    let chained = measure(&measured, 1)?;
    let chain = ultimate_state_chain(&chained, 1)?;
    let chain_sum_holds = chain.plus.try_add(&chain.minus)? == chained.descriptor(1).scale_int(2);

    let mut consistent = true;
    for (bit, direct) in [(0u8, &relative_zero), (1, &relative_one)] {
        let via_third = condition(chained.descriptor(0), &RelativeContext::computational(vec![2], &[bit])?, &chained)?;
        for (a, b) in via_third.components().iter().zip(direct.components()) {
            consistent &= a.vacuum_expectation() == b.vacuum_expectation();
        }
    }
    let relative_probabilities = vec![
        [zero.outcome_probability(&measured)?, one.outcome_probability(&measured)?],
        [
            RelativeContext::computational(vec![2], &[0])?.outcome_probability(&chained)?,
            RelativeContext::computational(vec![2], &[1])?.outcome_probability(&chained)?,
        ],
    ];
    Ok(ChainDemo {
        measured,
        relative_zero,
        relative_one,
        relative_sum_holds,
        chained,
        plus: chain.plus,
        minus: chain.minus,
        chain_sum_holds,
        consistent_with_ancilla: consistent,
        relative_probabilities,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{conditional_state, max_deviation, DenseState};

    fn d(x: &str, y: &str, z: &str) -> Descriptor {
        Descriptor::parse(x, y, z).unwrap()
    }

    #[test]
    fn swap_descriptors() {
        let r = run_entanglement_swap().unwrap();
        let expected = [
            d("ZXIIII", "-YXIIII", "XIIIII"),
            d("IXIIIX", "XYXIIX", "XZXIII"),
            d("IIXIXI", "IXYXXI", "IXZXII"),
            d("IIIXII", "IIXYII", "IIXZII"),
            d("IIIIXI", "IXZXYI", "IXZXZI"),
            d("IIIIIX", "XZXIIY", "XZXIIZ"),
        ];
        assert_eq!(r.final_set.descriptors(), expected);
    }

    #[test]
    fn swap_dependencies() {
        let r = run_entanglement_swap().unwrap();
        let dep = &r.dependency;
        assert!(dep.locality_ok, "{:?}", dep.violations);
        assert_eq!(dep.support_of(2).unwrap(), &BTreeSet::from([1, 2, 3, 6]));
        assert_eq!(dep.support_of(3).unwrap(), &BTreeSet::from([2, 3, 4, 5]));
        assert_eq!(dep.support_of(1).unwrap(), &BTreeSet::from([1, 2]));
        assert_eq!(dep.support_of(5), dep.support_of(3));
        assert_eq!(dep.support_of(6), dep.support_of(2));
        assert_eq!(dep.per_step.len(), 9);
    }

    #[test]
    fn swap_pairs() {
        let r = run_entanglement_swap().unwrap();
        for (a, b) in [(1, 2), (3, 4), (1, 4), (2, 3)] {
            let p = r.pair(a, b).unwrap();
            assert!(p.uncorrelated && p.marginals_mixed, "({a},{b})");
            assert_eq!(p.purity.sum, Dyadic::ZERO);
        }
        for (a, b) in [(3, 5), (2, 6)] {
            let p = r.pair(a, b).unwrap();
            assert!(!p.uncorrelated && p.marginals_mixed);
            assert_eq!(p.purity.sum, Dyadic::ONE);
        }
        assert!(r.povm_sum_holds);
    }

    #[test]
    fn swap_relative_bell_pairs() {
        let r = run_entanglement_swap().unwrap();
        let rb = &r.relative_bell;
        assert_eq!(rb.iter().map(|b| b.sign_1).collect::<Vec<_>>(), [1, 1, -1, -1]);
        assert_eq!(rb.iter().map(|b| b.sign_4).collect::<Vec<_>>(), [1, -1, 1, -1]);
        let first = &rb[0].reduced;
        assert_eq!(first.descriptor(0), &d("ZX", "-YX", "XI"));
        assert_eq!(first.descriptor(1), &d("IX", "XY", "XZ"));
        for b in rb {
            assert!(b.basis.well_formed, "{}: {:?}", b.outcome, b.basis.violations);
            assert_eq!(b.purity.sum, Dyadic::from_int(3));
            assert_eq!(b.probability, Dyadic::new(1, 2));
            assert!(b.bell.is_some());
            assert_eq!(b.bell, b.partner_bell, "{}", b.outcome);
        }
        let labels: BTreeSet<_> = rb.iter().map(|b| format!("{:?}", b.bell)).collect();
        assert_eq!(labels.len(), 4);
    }

    #[test]
    fn swap_conditionals_match_oracle() {
        let state = DenseState::evolve(&swap_circuit());
        let r = run_entanglement_swap().unwrap();
        for b in &r.relative_bell {
            let bits: Vec<u8> = b.outcome.bytes().map(|c| c - b'0').collect();
            let (rest, p) = conditional_state(&state, &[4, 5], &bits).unwrap();
            assert!((p - 0.25).abs() < 1e-12);
            let rho14 = crate::oracle::reduced_density(&rest, &[0, 3]);
            assert!(max_deviation(&rho14, &b.density.dense()) < 1e-9, "{}", b.outcome);
            let rho23 = crate::oracle::reduced_density(&rest, &[1, 2]);
            let exact = conditional_density(&r.final_set, &[1, 2], &b.context).unwrap();
            assert!(max_deviation(&rho23, &exact.dense()) < 1e-9);
        }
    }

    #[test]
    fn trace_of_fresh_and_cnot() {
        let fresh = dependency_trace(&DescriptorSet::initial(3).unwrap()).unwrap();
        assert!(fresh.per_step.is_empty());
        assert!((1..=3).all(|a| fresh.support_of(a) == Some(&BTreeSet::from([a]))));
        let c = dependency_trace_circuit(&Circuit::from_gates(2, [Gate::cnot(0, 1)])).unwrap();
        assert_eq!(c.support_of(1), Some(&BTreeSet::from([1, 2])));
        assert_eq!(c.support_of(2), Some(&BTreeSet::from([1, 2])));
    }

    #[test]
    fn bell_identification() {
        let phi = evolve_circuit(&Circuit::from_gates(2, [Gate::h(0), Gate::cnot(0, 1)])).unwrap();
        let rho = reconstruct_density(&phi, &[0, 1]).unwrap();
        assert_eq!(BellState::identify(&rho), Some(BellState::PhiPlus));
        let psi_minus = phi.apply(&Gate::x(0)).unwrap().apply(&Gate::z(0)).unwrap();
        let rho = reconstruct_density(&psi_minus, &[0, 1]).unwrap();
        assert_eq!(BellState::identify(&rho), Some(BellState::PsiMinus));
        assert_eq!(BellState::identify(&DensityMatrix::maximally_mixed(2).unwrap()), None);
    }

    #[test]
    fn generalized_measurement() {
        for prep in [vec![Gate::h(0)], vec![Gate::h(0), Gate::s(0)], vec![], vec![Gate::x(0)]] {
            let demo = run_generalized_measurement_demo(&prep).unwrap();
            assert!(demo.shape_holds, "{prep:?}");
            assert!(demo.xy_zero && demo.z_preserved);
        }
        let demo = run_generalized_measurement_demo(&[Gate::h(0)]).unwrap();
        // The x information of |+⟩ ends up in the z slot of qubit 1.
        assert_eq!(demo.averages_before[0], [Dyadic::ZERO, Dyadic::ZERO, Dyadic::ONE]);
        assert_eq!(demo.marginal.coefficient(&[Z]), ComplexDyadic::ONE);
        assert!(demo.decoherence.off_diagonal_zero && demo.decoherence.diagonal_unchanged);
        assert!(run_generalized_measurement_demo(&[Gate::h(1)]).is_err());
    }

    #[test]
    fn chain_demo() {
        let c = run_ultimate_chain_demo().unwrap();
        assert_eq!(c.measured.descriptor(1), &d("IX", "XY", "XZ"));
        assert_eq!(c.chained.descriptor(1), &d("IXX", "XYX", "XZI"));
        assert_eq!(c.chained.descriptor(2), &d("IIX", "XZY", "XZZ"));
        assert!(c.relative_sum_holds && c.chain_sum_holds && c.consistent_with_ancilla);
        let half = Dyadic::new(1, 1);
        assert_eq!(c.relative_probabilities, vec![[half, half], [half, half]]);
    }
}
