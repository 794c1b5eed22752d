//! Per-qubit descriptors and their evolution.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::circuit::{Circuit, Step};
use crate::dyadic::ComplexDyadic;
use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::pauli::{PauliLetter, PauliSum, I, X, Y, Z};

/// The triple `(q_x, q_y, q_z)` for one qubit, on the full register.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct Descriptor {
    pub qx: PauliSum,
    pub qy: PauliSum,
    pub qz: PauliSum,
}

impl Descriptor {
    pub fn new(qx: PauliSum, qy: PauliSum, qz: PauliSum) -> Descriptor {
        Descriptor { qx, qy, qz }
    }

    /// Builds a descriptor with `q_y = i q_x q_z`.
    pub fn from_xz(qx: PauliSum, qz: PauliSum) -> Descriptor {
        let qy = (&qx * &qz).scale(ComplexDyadic::I);
        Descriptor { qx, qy, qz }
    }

    /// Parses three canonical sums.
    pub fn parse(x: &str, y: &str, z: &str) -> std::result::Result<Descriptor, crate::error::ParseValueError> {
        Ok(Descriptor { qx: x.parse()?, qy: y.parse()?, qz: z.parse()? })
    }

    /// `σ` on slot `a` of an `n`-qubit register.
    pub fn fresh(n: usize, a: usize) -> Descriptor {
        Descriptor { qx: PauliSum::single(n, a, X), qy: PauliSum::single(n, a, Y), qz: PauliSum::single(n, a, Z) }
    }

    pub fn num_qubits(&self) -> usize {
        self.qx.num_qubits()
    }

    /// Component by letter; `I` gives the identity.
    pub fn component(&self, letter: PauliLetter) -> PauliSum {
        match letter {
            I => PauliSum::identity(self.num_qubits()),
            X => self.qx.clone(),
            Y => self.qy.clone(),
            Z => self.qz.clone(),
        }
    }

    pub fn component_ref(&self, letter: PauliLetter) -> Option<&PauliSum> {
        match letter {
            I => None,
            X => Some(&self.qx),
            Y => Some(&self.qy),
            Z => Some(&self.qz),
        }
    }

    pub fn components(&self) -> [&PauliSum; 3] {
        [&self.qx, &self.qy, &self.qz]
    }

    pub fn map(&self, mut f: impl FnMut(&PauliSum) -> PauliSum) -> Descriptor {
        Descriptor { qx: f(&self.qx), qy: f(&self.qy), qz: f(&self.qz) }
    }

    pub fn try_map(&self, mut f: impl FnMut(&PauliSum) -> Result<PauliSum>) -> Result<Descriptor> {
        Ok(Descriptor { qx: f(&self.qx)?, qy: f(&self.qy)?, qz: f(&self.qz)? })
    }

    /// Union of the supports of the three components.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut s = self.qx.support();
        s.extend(self.qy.support());
        s.extend(self.qz.support());
        s
    }

    /// Whether `q_y = i q_x q_z` holds exactly.
    pub fn y_invariant_holds(&self) -> bool {
        (&self.qx * &self.qz).scale(ComplexDyadic::I) == self.qy
    }

    pub fn is_hermitian(&self) -> bool {
        self.components().iter().all(|c| c.is_hermitian())
    }

    pub fn scale_int(&self, k: i64) -> Descriptor {
        self.map(|c| c.scale_int(k))
    }

    pub fn try_add(&self, other: &Descriptor) -> Result<Descriptor> {
        Ok(Descriptor {
            qx: self.qx.try_add(&other.qx)?,
            qy: self.qy.try_add(&other.qy)?,
            qz: self.qz.try_add(&other.qz)?,
        })
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.qx, self.qy, self.qz)
    }
}

/// Descriptors for every qubit of a register plus the log of steps that
/// produced them. The reference state is always `|0…0⟩`.
#[derive(Clone, Debug, Serialize)]
pub struct DescriptorSet {
    n: usize,
    descriptors: Vec<Descriptor>,
    history: Vec<Step>,
}

impl PartialEq for DescriptorSet {
    /// Compares descriptors only, not history.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.descriptors == other.descriptors
    }
}

impl Eq for DescriptorSet {}

impl DescriptorSet {
    /// Fresh register: descriptor `a` is `σ` in slot `a`.
    pub fn initial(n: usize) -> Result<DescriptorSet> {
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        Ok(DescriptorSet { n, descriptors: (0..n).map(|a| Descriptor::fresh(n, a)).collect(), history: Vec::new() })
    }

    /// Wraps explicit descriptors; all components must act on `descriptors.len()` qubits.
    pub fn from_descriptors(descriptors: Vec<Descriptor>) -> Result<DescriptorSet> {
        let n = descriptors.len();
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        for d in &descriptors {
            for c in d.components() {
                if c.num_qubits() != n {
                    return Err(Error::DimensionMismatch { left: n, right: c.num_qubits() });
                }
            }
        }
        Ok(DescriptorSet { n, descriptors, history: Vec::new() })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn descriptors(&self) -> &[Descriptor] {
        &self.descriptors
    }

    pub fn descriptor(&self, a: usize) -> &Descriptor {
        &self.descriptors[a]
    }

    pub fn history(&self) -> &[Step] {
        &self.history
    }

    /// Applies one gate by substitution: each operand component becomes its
    /// rule image evaluated on the operands' current components.
    pub fn apply(&self, gate: &Gate) -> Result<DescriptorSet> {
        gate.validate(self.n)?;
        let rule = gate.kind().rule();
        let ops = gate.operands();
        let mut next = self.descriptors.clone();
        for (slot, &q) in ops.iter().enumerate() {
            let mut comps = Vec::with_capacity(3);
            for letter in PauliLetter::NON_IDENTITY {
                let image = rule.image(slot, letter);
                let mut acc: Option<PauliSum> = None;
                for (j, &l) in image.letters[..rule.arity].iter().enumerate() {
                    if let Some(c) = self.descriptors[ops[j]].component_ref(l) {
                        acc = Some(match acc {
                            None => c.clone(),
                            Some(a) => a.try_mul(c)?,
                        });
                    }
                }
                let value = acc.unwrap_or_else(|| PauliSum::identity(self.n));
                comps.push(if image.sign < 0 { value.scale_int(-1) } else { value });
            }
            let qz = comps.pop().unwrap();
            let qy = comps.pop().unwrap();
            let qx = comps.pop().unwrap();
            next[q] = Descriptor { qx, qy, qz };
        }
        let mut history = self.history.clone();
        history.push(Step::Gate(gate.clone()));
        Ok(DescriptorSet { n: self.n, descriptors: next, history })
    }

    /// Appends a fresh qubit in `|0⟩`; existing components gain an identity slot.
    pub fn add_ancilla(&self) -> DescriptorSet {
        let n = self.n + 1;
        let mut descriptors: Vec<Descriptor> = self.descriptors.iter().map(|d| d.map(|c| c.extend(1))).collect();
        descriptors.push(Descriptor::fresh(n, n - 1));
        let mut history = self.history.clone();
        history.push(Step::AddAncilla);
        DescriptorSet { n, descriptors, history }
    }

    pub fn apply_step(&self, step: &Step) -> Result<DescriptorSet> {
        match step {
            Step::Gate(g) => self.apply(g),
            Step::AddAncilla => Ok(self.add_ancilla()),
        }
    }

    /// Folds the circuit's steps over this set.
    pub fn run(&self, circuit: &Circuit) -> Result<DescriptorSet> {
        let mut set = self.clone();
        for (k, step) in circuit.steps().iter().enumerate() {
            set = set.apply_step(step).map_err(|e| Error::Step { step: k + 1, source: Box::new(e) })?;
        }
        Ok(set)
    }

    /// Ordered product `q_{1,i1} · q_{2,i2} · …`; `I` entries are skipped.
    pub fn product(&self, indices: &[PauliLetter]) -> Result<PauliSum> {
        if indices.len() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: indices.len() });
        }
        let mut acc: Option<PauliSum> = None;
        for (a, &l) in indices.iter().enumerate() {
            if let Some(c) = self.descriptors[a].component_ref(l) {
                acc = Some(match acc {
                    None => c.clone(),
                    Some(p) => p.try_mul(c)?,
                });
            }
        }
        Ok(acc.unwrap_or_else(|| PauliSum::identity(self.n)))
    }

    /// Vacuum expectation of the ordered descriptor product.
    pub fn expectation(&self, indices: &[PauliLetter]) -> Result<ComplexDyadic> {
        Ok(self.product(indices)?.vacuum_expectation())
    }

    /// Product of components of selected qubits, `(qubit, letter)` pairs in order.
    pub fn product_of(&self, picks: &[(usize, PauliLetter)]) -> Result<PauliSum> {
        let mut indices = vec![I; self.n];
        for &(q, l) in picks {
            if q >= self.n {
                return Err(Error::QubitOutOfRange { index: q, n: self.n });
            }
            indices[q] = l;
        }
        self.product(&indices)
    }

    /// Replaces the descriptors, keeping the history.
    pub fn with_descriptors(&self, descriptors: Vec<Descriptor>) -> Result<DescriptorSet> {
        let mut out = DescriptorSet::from_descriptors(descriptors)?;
        out.history = self.history.clone();
        Ok(out)
    }

    /// Per-qubit support sets.
    pub fn supports(&self) -> Vec<BTreeSet<usize>> {
        self.descriptors.iter().map(|d| d.support()).collect()
    }

    /// Canonical rendering of all components, one line per qubit (1-based).
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (a, d) in self.descriptors.iter().enumerate() {
            out.push_str(&format!("q{} = {}\n", a + 1, d));
        }
        out
    }
}

/// Evolves a fresh register through `circuit`.
pub fn evolve_circuit(circuit: &Circuit) -> Result<DescriptorSet> {
    DescriptorSet::initial(circuit.initial_qubits())?.run(circuit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::GateKind;
    use proptest::prelude::*;

    pub(crate) fn bell() -> DescriptorSet {
        DescriptorSet::initial(2).unwrap().apply(&Gate::h(0)).unwrap().apply(&Gate::cnot(0, 1)).unwrap()
    }

    fn d(x: &str, y: &str, z: &str) -> Descriptor {
        Descriptor::parse(x, y, z).unwrap()
    }

    #[test]
    fn initial_sets() {
        let s = DescriptorSet::initial(2).unwrap();
        assert_eq!(s.descriptor(0), &d("XI", "YI", "ZI"));
        assert_eq!(s.descriptor(1), &d("IX", "IY", "IZ"));
        assert_eq!(DescriptorSet::initial(1).unwrap().descriptor(0), &d("X", "Y", "Z"));
        let six = DescriptorSet::initial(6).unwrap();
        for (a, sup) in six.supports().iter().enumerate() {
            assert_eq!(sup, &[a].into_iter().collect());
        }
        assert!(matches!(DescriptorSet::initial(0), Err(Error::EmptyRegister)));
    }

    #[test]
    fn hadamard_then_cnot() {
        let h = DescriptorSet::initial(2).unwrap().apply(&Gate::h(0)).unwrap();
        assert_eq!(h.descriptor(0), &d("ZI", "-YI", "XI"));
        let b = bell();
        assert_eq!(b.descriptor(0), &d("ZX", "-YX", "XI"));
        assert_eq!(b.descriptor(1), &d("IX", "XY", "XZ"));
    }

    #[test]
    fn hadamard_is_involution() {
        let s = bell();
        let twice = s.apply(&Gate::h(1)).unwrap().apply(&Gate::h(1)).unwrap();
        assert_eq!(twice, s);
    }

    #[test]
    fn ancilla_growth() {
        let s = bell().add_ancilla();
        assert_eq!(s.num_qubits(), 3);
        assert_eq!(s.descriptor(2), &d("IIX", "IIY", "IIZ"));
        assert_eq!(s.descriptor(0).support(), bell().descriptor(0).support());
    }

    #[test]
    fn expectations() {
        let b = bell();
        assert_eq!(b.expectation(&[X, X]).unwrap(), ComplexDyadic::ONE);
        assert_eq!(b.expectation(&[Y, Y]).unwrap(), ComplexDyadic::from_int(-1));
        assert_eq!(b.expectation(&[X, I]).unwrap(), ComplexDyadic::ZERO);
        let f = DescriptorSet::initial(3).unwrap();
        assert_eq!(f.expectation(&[Z, I, I]).unwrap(), ComplexDyadic::ONE);
    }

    #[test]
    fn empty_circuit_is_initial() {
        let c = Circuit::new(3, vec![]);
        assert_eq!(evolve_circuit(&c).unwrap(), DescriptorSet::initial(3).unwrap());
    }

    #[test]
    fn step_errors_carry_index() {
        let c = Circuit::new(2, vec![Step::Gate(Gate::h(0)), Step::Gate(Gate::h(5))]);
        match evolve_circuit(&c) {
            Err(Error::Step { step, .. }) => assert_eq!(step, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    fn arb_gate(n: usize) -> impl Strategy<Value = Gate> {
        (0usize..GateKind::ALL.len(), 0..n, 0..n.max(2) - 1).prop_map(move |(k, a, b)| {
            let kind = GateKind::ALL[k];
            if kind.arity() == 1 || n < 2 {
                Gate::new(if kind.arity() == 1 { kind } else { GateKind::H }, vec![a]).unwrap()
            } else {
                let b = if b >= a { b + 1 } else { b };
                Gate::new(kind, vec![a, b]).unwrap()
            }
        })
    }

    proptest! {
        #[test]
        fn gates_preserve_structure(n in 1usize..5, gates in proptest::collection::vec(arb_gate(4), 0..25)) {
            let mut s = DescriptorSet::initial(n).unwrap();
            for g in gates.iter().filter(|g| g.operands().iter().all(|&q| q < n)) {
                s = s.apply(g).unwrap();
            }
            for desc in s.descriptors() {
                prop_assert!(desc.y_invariant_holds());
                prop_assert!(desc.is_hermitian());
                for c in desc.components() {
                    let norm = crate::pauli::hs_inner(c, c).unwrap();
                    prop_assert_eq!(norm, ComplexDyadic::ONE);
                }
            }
        }
    }
}
