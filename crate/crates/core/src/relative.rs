//! Measurement by ancilla, and descriptors relative to a state (or POVM
//! element) of other qubits.
//!
//! A context on target qubits `T` is a raw table `t_P = Tr(E P)` for the
//! non-identity Pauli strings `P` on `T`, plus the weight `Tr E`. The
//! relative descriptor multiplies each component by
//! `F = 1 + Σ_P t_P q_P`, where `q_P` is the ordered product of the
//! targets' descriptor components. `F` is left unnormalized.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::circuit::Step;
use crate::descriptor::{Descriptor, DescriptorSet};
use crate::dyadic::{ComplexDyadic, Dyadic};
use crate::error::{Error, Result};
use crate::gates::{Gate, GateKind};
use crate::oracle::{self, TOL};
use crate::pauli::{letters_to_string, PauliLetter, PauliSum, I, Z};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeContext {
    targets: Vec<usize>,
    weight: Dyadic,
    table: BTreeMap<Vec<PauliLetter>, Dyadic>,
}

impl RelativeContext {
    /// Validated constructor. Zero entries are dropped.
    pub fn new(
        targets: Vec<usize>,
        weight: Dyadic,
        entries: impl IntoIterator<Item = (Vec<PauliLetter>, Dyadic)>,
    ) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::EmptySubset);
        }
        let distinct: BTreeSet<_> = targets.iter().collect();
        if distinct.len() != targets.len() {
            return Err(Error::MalformedContext("repeated target qubit".into()));
        }
        if weight <= Dyadic::ZERO {
            return Err(Error::MalformedContext(format!("weight {weight} must be positive")));
        }
        let k = targets.len();
        let mut table = BTreeMap::new();
        for (letters, v) in entries {
            if letters.len() != k {
                return Err(Error::MalformedContext(format!("entry {} has wrong length", letters_to_string(&letters))));
            }
            if letters.iter().all(|&l| l == I) {
                return Err(Error::MalformedContext("identity entry is the weight".into()));
            }
            if !v.is_zero() {
                table.insert(letters, v);
            }
        }
        let ctx = RelativeContext { targets, weight, table };
        let min = ctx.min_eigenvalue();
        if min < -TOL {
            return Err(Error::MalformedContext(format!("not positive semidefinite (eigenvalue {min:e})")));
        }
        Ok(ctx)
    }

    /// Projector onto a computational basis state; `bits[j]` for `targets[j]`.
    pub fn computational(targets: Vec<usize>, bits: &[u8]) -> Result<Self> {
        if bits.len() != targets.len() || bits.iter().any(|&b| b > 1) {
            return Err(Error::MalformedContext(format!("bad outcome {bits:?}")));
        }
        let k = targets.len();
        let entries = (1..1usize << k).map(|mask| {
            let mut letters = vec![I; k];
            let mut negative = false;
            for j in 0..k {
                if (mask >> (k - 1 - j)) & 1 == 1 {
                    letters[j] = Z;
                    negative ^= bits[j] == 1;
                }
            }
            (letters, if negative { Dyadic::MINUS_ONE } else { Dyadic::ONE })
        });
        RelativeContext::new(targets, Dyadic::ONE, entries)
    }

    /// The discarded (maximally mixed) state: every table entry zero.
    pub fn maximally_mixed(targets: Vec<usize>) -> Result<Self> {
        RelativeContext::new(targets, Dyadic::ONE, [])
    }

    /// Single-qubit context from a Bloch vector.
    pub fn bloch(target: usize, v: [Dyadic; 3]) -> Result<Self> {
        let entries = PauliLetter::NON_IDENTITY.iter().zip(v).map(|(&l, x)| (vec![l], x));
        RelativeContext::new(vec![target], Dyadic::ONE, entries)
    }

    /// Sub-normalized single-qubit element `w/2 (I + r·σ)`.
    pub fn element(target: usize, weight: Dyadic, r: [Dyadic; 3]) -> Result<Self> {
        let entries = PauliLetter::NON_IDENTITY.iter().zip(r).map(|(&l, x)| (vec![l], x * weight));
        RelativeContext::new(vec![target], weight, entries)
    }

    /// Context whose table is a real density's coefficients.
    pub fn from_density(targets: Vec<usize>, rho: &crate::density::DensityMatrix) -> Result<Self> {
        if rho.num_qubits() != targets.len() {
            return Err(Error::DimensionMismatch { left: targets.len(), right: rho.num_qubits() });
        }
        if !rho.is_hermitian() {
            return Err(Error::MalformedContext("complex table".into()));
        }
        let entries = rho.nonzero().into_iter().filter(|(l, _)| l.iter().any(|&x| x != I)).map(|(l, v)| (l, v.re));
        RelativeContext::new(targets, Dyadic::ONE, entries)
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn weight(&self) -> Dyadic {
        self.weight
    }

    pub fn table(&self) -> &BTreeMap<Vec<PauliLetter>, Dyadic> {
        &self.table
    }

    /// `E = 2^-k (w I + Σ t_P P)` as a Pauli sum on the targets.
    pub fn operator(&self) -> PauliSum {
        let k = self.targets.len();
        let mut e = PauliSum::identity(k).scale(self.weight.into());
        for (l, v) in &self.table {
            e = &e + &PauliSum::term((*v).into(), l.clone());
        }
        e.scale(ComplexDyadic::ONE.halve(k as u32))
    }

    fn min_eigenvalue(&self) -> f64 {
        let m = oracle::pauli_sum_matrix(&self.operator());
        nalgebra::SymmetricEigen::new(m).eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `F = 1 + Σ t_P q_P` on the partner register.
    pub fn factor(&self, partners: &DescriptorSet) -> Result<PauliSum> {
        let n = partners.num_qubits();
        if let Some(&q) = self.targets.iter().find(|&&q| q >= n) {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        let mut f = PauliSum::identity(n);
        for (letters, v) in &self.table {
            let picks: Vec<(usize, PauliLetter)> =
                self.targets.iter().zip(letters).filter(|(_, &l)| l != I).map(|(&q, &l)| (q, l)).collect();
            let mut p = PauliSum::identity(n);
            for (q, l) in picks {
                p = p.try_mul(&partners.descriptor(q).component(l))?;
            }
            f = &f + &p.scale((*v).into());
        }
        Ok(f)
    }

    /// `Tr(ρ E)` for the partner register's state.
    pub fn outcome_probability(&self, partners: &DescriptorSet) -> Result<Dyadic> {
        let f = self.factor(partners)?.vacuum_expectation().re;
        Ok((f - Dyadic::ONE + self.weight).halve(self.targets.len() as u32))
    }
}

impl Serialize for RelativeContext {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let targets: Vec<usize> = self.targets.iter().map(|q| q + 1).collect();
        let table: BTreeMap<String, Dyadic> = self.table.iter().map(|(l, v)| (letters_to_string(l), *v)).collect();
        let mut st = serializer.serialize_struct("RelativeContext", 3)?;
        st.serialize_field("targets", &targets)?;
        st.serialize_field("weight", &self.weight)?;
        st.serialize_field("table", &table)?;
        st.end()
    }
}

/// Multiplies every component of `d` by the context factor.
pub fn condition(d: &Descriptor, ctx: &RelativeContext, partners: &DescriptorSet) -> Result<Descriptor> {
    if d.num_qubits() != partners.num_qubits() {
        return Err(Error::DimensionMismatch { left: d.num_qubits(), right: partners.num_qubits() });
    }
    let f = ctx.factor(partners)?;
    d.try_map(|c| c.try_mul(&f))
}

/// Relative to a single partner qubit.
pub fn relative_descriptor(d: &Descriptor, ctx: &RelativeContext, partners: &DescriptorSet) -> Result<Descriptor> {
    if ctx.targets.len() != 1 {
        return Err(Error::MalformedContext(format!("expected 1 target, found {}", ctx.targets.len())));
    }
    condition(d, ctx, partners)
}

/// Relative to a pair of partner qubits.
pub fn relative_descriptor_pair(d: &Descriptor, ctx: &RelativeContext, partners: &DescriptorSet) -> Result<Descriptor> {
    if ctx.targets.len() != 2 {
        return Err(Error::MalformedContext(format!("expected 2 targets, found {}", ctx.targets.len())));
    }
    condition(d, ctx, partners)
}

/// `⟨q'_i⟩ / ⟨F⟩` for `i = x, y, z`: the conditioned, renormalized Bloch vector.
pub fn renormalized_bloch(d: &Descriptor, ctx: &RelativeContext, partners: &DescriptorSet) -> Result<[Dyadic; 3]> {
    let rel = condition(d, ctx, partners)?;
    let norm = ctx.factor(partners)?.vacuum_expectation().re;
    if norm.is_zero() {
        return Err(Error::ZeroProbability(0.0));
    }
    let mut out = [Dyadic::ZERO; 3];
    for (slot, c) in out.iter_mut().zip(rel.components()) {
        let v = c.vacuum_expectation().re;
        *slot = v.checked_div(&norm).ok_or_else(|| Error::Inexact(format!("{v} / {norm}")))?;
    }
    Ok(out)
}

/// Checks `Σ E_i = I`: weights sum to `2^k` and every table entry sums to 0.
pub fn check_resolution(povm: &[RelativeContext]) -> Result<()> {
    let first = povm.first().ok_or_else(|| Error::NotResolution("empty POVM".into()))?;
    if povm.iter().any(|c| c.targets != first.targets) {
        return Err(Error::NotResolution("elements act on different targets".into()));
    }
    let k = first.targets.len() as u32;
    let total = povm.iter().fold(Dyadic::ZERO, |acc, c| acc + c.weight);
    if total != Dyadic::from_int(1 << k) {
        return Err(Error::NotResolution(format!("weights sum to {total}")));
    }
    let mut sums: BTreeMap<&Vec<PauliLetter>, Dyadic> = BTreeMap::new();
    for c in povm {
        for (l, v) in &c.table {
            *sums.entry(l).or_insert(Dyadic::ZERO) += *v;
        }
    }
    if let Some((l, v)) = sums.iter().find(|(_, v)| !v.is_zero()) {
        return Err(Error::NotResolution(format!("{} entries sum to {v}", letters_to_string(l))));
    }
    Ok(())
}

/// Whether `Σ_i relative(d, E_i) = m·d` for an `m`-element POVM.
pub fn povm_sum_check(d: &Descriptor, povm: &[RelativeContext], partners: &DescriptorSet) -> Result<bool> {
    check_resolution(povm)?;
    let mut acc: Option<Descriptor> = None;
    for ctx in povm {
        let r = condition(d, ctx, partners)?;
        acc = Some(match acc {
            None => r,
            Some(a) => a.try_add(&r)?,
        });
    }
    Ok(acc.expect("non-empty") == d.scale_int(povm.len() as i64))
}

/// Adds an ancilla and applies `CNOT(system → ancilla)`.
pub fn measure(set: &DescriptorSet, system: usize) -> Result<DescriptorSet> {
    let n = set.num_qubits();
    if system >= n {
        return Err(Error::QubitOutOfRange { index: system, n });
    }
    set.add_ancilla().apply(&Gate::cnot(system, n))
}

/// Measures each listed qubit with its own ancilla.
pub fn decohere(set: &DescriptorSet, qubits: &[usize]) -> Result<DescriptorSet> {
    qubits.iter().try_fold(set.clone(), |s, &q| measure(&s, q))
}

/// Rotates the system with single-qubit gates, then measures it.
pub fn measure_in_basis(set: &DescriptorSet, system: usize, rotation: &[Gate]) -> Result<DescriptorSet> {
    let mut s = set.clone();
    for g in rotation {
        if let Some(&found) = g.operands().iter().find(|&&q| q != system) {
            return Err(Error::RotationOutsideSystem { system, found });
        }
        s = s.apply(g)?;
    }
    measure(&s, system)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChainResult {
    /// The qubit that measured the ancilla (0-based).
    pub third: usize,
    pub plus: Descriptor,
    pub minus: Descriptor,
}

/// Conditions the ancilla's descriptor on `|0⟩` and `|1⟩` of the later
/// qubit that measured it.
pub fn ultimate_state_chain(set: &DescriptorSet, ancilla: usize) -> Result<ChainResult> {
    let n = set.num_qubits();
    if ancilla >= n {
        return Err(Error::QubitOutOfRange { index: ancilla, n });
    }
    let added = set.history().iter().filter(|s| matches!(s, Step::AddAncilla)).count();
    let mut size = n - added;
    let mut allocated_after: Vec<usize> = Vec::new();
    let mut third = None;
    for step in set.history() {
        match step {
            Step::AddAncilla => {
                if size > ancilla {
                    allocated_after.push(size);
                }
                size += 1;
            }
            Step::Gate(g) if g.kind() == GateKind::Cnot => {
                let (c, t) = (g.operands()[0], g.operands()[1]);
                if c == ancilla && allocated_after.contains(&t) {
                    third = Some(t);
                    break;
                }
            }
            Step::Gate(_) => {}
        }
    }
    let third = third.ok_or(Error::ChainNotConstructed(ancilla))?;
    let d = set.descriptor(ancilla);
    let plus = condition(d, &RelativeContext::computational(vec![third], &[0])?, set)?;
    let minus = condition(d, &RelativeContext::computational(vec![third], &[1])?, set)?;
    Ok(ChainResult { third, plus, minus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::density::{diagonal_probabilities, reconstruct_density};
    use crate::pauli::{X, Y};

    fn plus_state() -> DescriptorSet {
        DescriptorSet::initial(1).unwrap().apply(&Gate::h(0)).unwrap()
    }

    fn d(n: i128, e: u32) -> Dyadic {
        Dyadic::new(n, e)
    }

    #[test]
    fn measure_zeroes_transverse_averages() {
        let before = plus_state();
        let after = measure(&before, 0).unwrap();
        let q = after.descriptor(0);
        assert_eq!(q.qx.vacuum_expectation(), ComplexDyadic::ZERO);
        assert_eq!(q.qy.vacuum_expectation(), ComplexDyadic::ZERO);
        assert_eq!(q.qz.vacuum_expectation(), before.descriptor(0).qz.vacuum_expectation());
        assert_eq!(*q, Descriptor::parse("1 * Z⊗X", "-1 * Y⊗X", "1 * X⊗I").unwrap());
        let anc = after.descriptor(1);
        assert_eq!(*anc, Descriptor::parse("1 * I⊗X", "1 * X⊗Y", "1 * X⊗Z").unwrap());
        assert_eq!(diagonal_probabilities(&after, &[0]).unwrap(), vec![Dyadic::HALF, Dyadic::HALF]);
    }

    #[test]
    fn decoherence() {
        let s = decohere(&plus_state(), &[0]).unwrap();
        let rho = reconstruct_density(&s, &[0]).unwrap();
        assert_eq!(rho, crate::density::DensityMatrix::maximally_mixed(1).unwrap());
        let twice = decohere(&s, &[0]).unwrap();
        assert_eq!(reconstruct_density(&twice, &[0]).unwrap(), rho);

        let bell = crate::evolve_circuit(&Circuit::from_gates(2, [Gate::h(0), Gate::cnot(0, 1)])).unwrap();
        let s = decohere(&bell, &[0, 1]).unwrap();
        let rho = reconstruct_density(&s, &[0, 1]).unwrap();
        assert_eq!(rho.diagonal(), vec![Dyadic::HALF, Dyadic::ZERO, Dyadic::ZERO, Dyadic::HALF]);
        assert_eq!(rho.nonzero().len(), 2);
    }

    #[test]
    fn rotated_measurement() {
        let s = measure_in_basis(&plus_state(), 0, &[Gate::h(0)]).unwrap();
        assert_eq!(diagonal_probabilities(&s, &[0]).unwrap(), vec![Dyadic::ONE, Dyadic::ZERO]);
        assert_eq!(measure_in_basis(&plus_state(), 0, &[]).unwrap(), measure(&plus_state(), 0).unwrap());
        let two = DescriptorSet::initial(2).unwrap();
        assert_eq!(measure_in_basis(&two, 0, &[Gate::h(1)]), Err(Error::RotationOutsideSystem { system: 0, found: 1 }));
    }

    #[test]
    fn relative_to_ancilla_states() {
        let s = measure(&plus_state(), 0).unwrap();
        let q1 = s.descriptor(0);
        let zero = RelativeContext::computational(vec![1], &[0]).unwrap();
        let one = RelativeContext::computational(vec![1], &[1]).unwrap();
        let p = relative_descriptor(q1, &zero, &s).unwrap();
        assert_eq!(p, Descriptor::parse("YY + ZX", "-YX + ZY", "IZ + XI").unwrap());
        let m = relative_descriptor(q1, &one, &s).unwrap();
        assert_eq!(m, Descriptor::parse("-YY + ZX", "-YX + -ZY", "-IZ + XI").unwrap());
        assert_eq!(p.try_add(&m).unwrap(), q1.scale_int(2));
        assert!(povm_sum_check(q1, &[zero.clone(), one], &s).unwrap());
        let mixed = RelativeContext::maximally_mixed(vec![1]).unwrap();
        assert_eq!(relative_descriptor(q1, &mixed, &s).unwrap(), *q1);
        assert_eq!(zero.outcome_probability(&s).unwrap(), Dyadic::HALF);
        assert_eq!(renormalized_bloch(q1, &zero, &s).unwrap(), [Dyadic::ZERO, Dyadic::ZERO, Dyadic::ONE]);
        assert!(relative_descriptor_pair(q1, &zero, &s).is_err());
    }

    #[test]
    fn context_validation() {
        assert!(RelativeContext::bloch(0, [Dyadic::ONE, Dyadic::ONE, Dyadic::ZERO]).is_err());
        assert!(RelativeContext::bloch(0, [Dyadic::HALF, Dyadic::HALF, Dyadic::HALF]).is_ok());
        assert!(RelativeContext::new(vec![0, 0], Dyadic::ONE, []).is_err());
        assert!(RelativeContext::new(vec![0], Dyadic::ONE, [(vec![X, Y], Dyadic::HALF)]).is_err());
        assert!(RelativeContext::new(vec![0], Dyadic::ONE, [(vec![I], Dyadic::HALF)]).is_err());
        assert!(RelativeContext::computational(vec![0], &[2]).is_err());
        let ident = RelativeContext::new(vec![0], Dyadic::from_int(2), []).unwrap();
        check_resolution(&[ident]).unwrap();
        let half = RelativeContext::element(0, Dyadic::HALF, [Dyadic::ZERO, Dyadic::ZERO, Dyadic::ONE]).unwrap();
        assert!(check_resolution(&[half]).is_err());
    }

    #[test]
    fn four_outcome_povm() {
        // ¼(I ± r·σ), ¼(I ± s·σ)
        let r = [d(1, 1), d(1, 1), d(1, 1)];
        let s = [d(-3, 2), Dyadic::ZERO, d(1, 1)];
        let neg = |v: [Dyadic; 3]| v.map(|x| -x);
        let povm: Vec<RelativeContext> =
            [r, neg(r), s, neg(s)].into_iter().map(|v| RelativeContext::element(1, Dyadic::HALF, v).unwrap()).collect();
        let set =
            crate::evolve_circuit(&Circuit::from_gates(2, [Gate::h(0), Gate::s(0), Gate::cnot(0, 1), Gate::h(1)]))
                .unwrap();
        assert!(povm_sum_check(set.descriptor(0), &povm, &set).unwrap());
    }

    #[test]
    fn chain() {
        let s = measure(&measure(&plus_state(), 0).unwrap(), 1).unwrap();
        let c = ultimate_state_chain(&s, 1).unwrap();
        assert_eq!(c.third, 2);
        assert_eq!(c.plus.try_add(&c.minus).unwrap(), s.descriptor(1).scale_int(2));
        assert_eq!(ultimate_state_chain(&s, 2), Err(Error::ChainNotConstructed(2)));
        assert_eq!(ultimate_state_chain(&measure(&plus_state(), 0).unwrap(), 1), Err(Error::ChainNotConstructed(1)));
    }
}
