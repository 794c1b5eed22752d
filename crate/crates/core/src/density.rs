//! Densities reconstructed from descriptor expectation tables.
//!
//! A `k`-qubit density is stored as its Pauli coefficients
//! `ρ = 2^-k Σ a_I P_I`, indexed base 4 with the first subset qubit most
//! significant. Purity, Schmidt coefficients and reductions are computed
//! exactly; only positivity and least-squares mixtures go through floats.

use std::collections::BTreeSet;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::descriptor::{Descriptor, DescriptorSet};
use crate::dyadic::{ComplexDyadic, Dyadic};
use crate::error::{Error, Result};
use crate::oracle::{self, DenseOperator, TOL};
use crate::par::{self, Mode};
use crate::pauli::{letters_to_string, PauliLetter, PauliSum, I, Z};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DensityMatrix {
    n: usize,
    coeffs: Vec<ComplexDyadic>,
}

fn letters_at(n: usize, idx: usize) -> Vec<PauliLetter> {
    (0..n).map(|q| PauliLetter::from_index((idx >> (2 * (n - 1 - q))) & 3)).collect()
}

fn index_of(letters: &[PauliLetter]) -> usize {
    letters.iter().fold(0, |acc, l| acc * 4 + l.index())
}

impl DensityMatrix {
    /// Coefficients in base-4 order; `a_{0…0}` must be 1.
    pub fn new(n: usize, coeffs: Vec<ComplexDyadic>) -> Result<DensityMatrix> {
        if n == 0 {
            return Err(Error::EmptyRegister);
        }
        if coeffs.len() != 1 << (2 * n) {
            return Err(Error::DimensionMismatch { left: 1 << (2 * n), right: coeffs.len() });
        }
        if coeffs[0] != ComplexDyadic::ONE {
            return Err(Error::MalformedContext(format!("identity coefficient is {}, expected 1", coeffs[0])));
        }
        Ok(DensityMatrix { n, coeffs })
    }

    /// Builds from the nonzero coefficients; missing entries are zero.
    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = (Vec<PauliLetter>, ComplexDyadic)>,
    ) -> Result<DensityMatrix> {
        let mut coeffs = vec![ComplexDyadic::ZERO; 1 << (2 * n)];
        coeffs[0] = ComplexDyadic::ONE;
        for (letters, v) in entries {
            if letters.len() != n {
                return Err(Error::DimensionMismatch { left: n, right: letters.len() });
            }
            coeffs[index_of(&letters)] = v;
        }
        DensityMatrix::new(n, coeffs)
    }

    pub fn maximally_mixed(n: usize) -> Result<DensityMatrix> {
        DensityMatrix::from_entries(n, [])
    }

    /// Projects a dense matrix onto the Pauli basis (dyadic snapping).
    pub fn from_dense(m: &DenseOperator) -> Result<DensityMatrix> {
        let sum = oracle::decompose(m)?;
        let n = sum.num_qubits();
        let scale = ComplexDyadic::from_int(1 << n);
        DensityMatrix::from_entries(n, sum.terms().map(|(l, v)| (l.to_vec(), *v * scale)))
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn coefficients(&self) -> &[ComplexDyadic] {
        &self.coeffs
    }

    pub fn coefficient(&self, letters: &[PauliLetter]) -> ComplexDyadic {
        assert_eq!(letters.len(), self.n);
        self.coeffs[index_of(letters)]
    }

    /// Nonzero entries, identity included.
    pub fn nonzero(&self) -> Vec<(Vec<PauliLetter>, ComplexDyadic)> {
        self.coeffs.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(k, v)| (letters_at(self.n, k), *v)).collect()
    }

    pub fn is_hermitian(&self) -> bool {
        self.coeffs.iter().all(|v| v.is_real())
    }

    /// `Σ a_I P_I` without the `2^-k` factor.
    pub fn to_pauli_sum(&self) -> PauliSum {
        let mut acc = PauliSum::zero(self.n);
        for (letters, v) in self.nonzero() {
            acc = &acc + &PauliSum::term(v, letters);
        }
        acc
    }

    pub fn dense(&self) -> DenseOperator {
        let scale = 1.0 / (1u64 << self.n) as f64;
        oracle::pauli_sum_matrix(&self.to_pauli_sum()).map(|z| z * scale)
    }

    /// Smallest eigenvalue of the dense view.
    pub fn min_eigenvalue(&self) -> f64 {
        let eig = SymmetricEigen::new(self.dense());
        eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_positive(&self) -> bool {
        self.is_hermitian() && self.min_eigenvalue() >= -TOL
    }

    /// `Tr ρ² = 2^-k Σ |a_I|²`.
    pub fn purity(&self) -> Dyadic {
        let s = self.coeffs.iter().fold(Dyadic::ZERO, |acc, v| acc + v.norm_sqr());
        s.halve(self.n as u32)
    }

    /// `⟨b|ρ|b⟩` for every bitstring, first qubit most significant.
    pub fn diagonal(&self) -> Vec<Dyadic> {
        let n = self.n;
        (0..1usize << n)
            .map(|b| {
                let mut acc = Dyadic::ZERO;
                for mask in 0..1usize << n {
                    let letters: Vec<PauliLetter> =
                        (0..n).map(|q| if (mask >> (n - 1 - q)) & 1 == 1 { Z } else { I }).collect();
                    let sign = if (mask & b).count_ones() % 2 == 1 { -1 } else { 1 };
                    let v = self.coefficient(&letters).re;
                    acc += if sign < 0 { -v } else { v };
                }
                acc.halve(n as u32)
            })
            .collect()
    }
}

impl Serialize for DensityMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Entries<'a>(&'a DensityMatrix);
        impl Serialize for Entries<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let nz = self.0.nonzero();
                let mut m = serializer.serialize_map(Some(nz.len()))?;
                for (l, v) in &nz {
                    m.serialize_entry(&letters_to_string(l), v)?;
                }
                m.end()
            }
        }
        let mut st = serializer.serialize_struct("DensityMatrix", 2)?;
        st.serialize_field("qubits", &self.n)?;
        st.serialize_field("coefficients", &Entries(self))?;
        st.end()
    }
}

fn check_subset(set: &DescriptorSet, qubits: &[usize]) -> Result<()> {
    if qubits.is_empty() {
        return Err(Error::EmptySubset);
    }
    let n = set.num_qubits();
    let mut seen = BTreeSet::new();
    for &q in qubits {
        if q >= n {
            return Err(Error::QubitOutOfRange { index: q, n });
        }
        if !seen.insert(q) {
            return Err(Error::DuplicateOperands(q));
        }
    }
    Ok(())
}

fn embed_indices(n: usize, qubits: &[usize], letters: &[PauliLetter]) -> Vec<PauliLetter> {
    let mut full = vec![I; n];
    for (&q, &l) in qubits.iter().zip(letters) {
        full[q] = l;
    }
    full
}

/// Expectation table over `qubits` (in the given order).
pub fn reconstruct_density(set: &DescriptorSet, qubits: &[usize]) -> Result<DensityMatrix> {
    reconstruct_density_with(Mode::default(), set, qubits)
}

pub fn reconstruct_density_with(mode: Mode, set: &DescriptorSet, qubits: &[usize]) -> Result<DensityMatrix> {
    check_subset(set, qubits)?;
    let k = qubits.len();
    let n = set.num_qubits();
    let coeffs: Result<Vec<ComplexDyadic>> =
        par::map_range(mode, 1 << (2 * k), |idx| set.expectation(&embed_indices(n, qubits, &letters_at(k, idx))))
            .into_iter()
            .collect();
    DensityMatrix::new(k, coeffs?)
}

/// Outcome probabilities from `⟨Π z_±⟩`, first listed qubit most significant.
pub fn diagonal_probabilities(set: &DescriptorSet, qubits: &[usize]) -> Result<Vec<Dyadic>> {
    check_subset(set, qubits)?;
    let n = set.num_qubits();
    let k = qubits.len();
    let one = PauliSum::identity(n);
    let half = ComplexDyadic::real(Dyadic::HALF);
    let probs: Result<Vec<Dyadic>> = par::map_range(Mode::default(), 1 << k, |b| {
        let mut acc = one.clone();
        for (j, &q) in qubits.iter().enumerate() {
            let z = &set.descriptor(q).qz;
            let zpm = if (b >> (k - 1 - j)) & 1 == 0 { &one + z } else { &one - z };
            acc = acc.try_mul(&zpm.scale(half))?;
        }
        Ok(acc.vacuum_expectation().re)
    })
    .into_iter()
    .collect();
    probs
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurityReport {
    pub sum: Dyadic,
    pub mixed: bool,
    pub trace_rho_squared: Dyadic,
}

fn pair_check(set: &DescriptorSet, pair: (usize, usize)) -> Result<()> {
    check_subset(set, &[pair.0, pair.1])
}

/// `Σ ⟨q_1i⟩² + ⟨q_2j⟩² + ⟨q_1i q_2j⟩²` over `i, j ∈ {x, y, z}`.
pub fn purity_condition(set: &DescriptorSet, pair: (usize, usize)) -> Result<PurityReport> {
    pair_check(set, pair)?;
    let rho = reconstruct_density(set, &[pair.0, pair.1])?;
    let sum = rho.coefficients()[1..].iter().fold(Dyadic::ZERO, |acc, v| acc + v.norm_sqr());
    Ok(PurityReport { sum, mixed: sum < Dyadic::from_int(3), trace_rho_squared: rho.purity() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchmidtCoefficients {
    pub a: ComplexDyadic,
    pub b: ComplexDyadic,
    pub c: ComplexDyadic,
    pub d: ComplexDyadic,
    /// `|a|² + |b|² + |c|² + |d|²`
    pub rule_sum: Dyadic,
}

/// The `|00⟩⟨00|`, `|00⟩⟨11|`, `|11⟩⟨00|`, `|11⟩⟨11|` elements of a pure pair.
pub fn schmidt_coefficients(set: &DescriptorSet, pair: (usize, usize)) -> Result<SchmidtCoefficients> {
    let report = purity_condition(set, pair)?;
    if report.mixed {
        return Err(Error::NotPure(report.sum.to_string()));
    }
    let rho = reconstruct_density(set, &[pair.0, pair.1])?;
    use crate::pauli::{X, Y};
    let t = |a: PauliLetter, b: PauliLetter| rho.coefficient(&[a, b]);
    let i = ComplexDyadic::I;
    let a = (t(I, I) + t(Z, I) + t(I, Z) + t(Z, Z)).halve(2);
    let d = (t(I, I) - t(Z, I) - t(I, Z) + t(Z, Z)).halve(2);
    let xy = t(Y, X) + t(X, Y);
    let b = (t(X, X) - i * xy - t(Y, Y)).halve(2);
    let c = (t(X, X) + i * xy - t(Y, Y)).halve(2);
    let rule_sum = a.norm_sqr() + b.norm_sqr() + c.norm_sqr() + d.norm_sqr();
    Ok(SchmidtCoefficients { a, b, c, d, rule_sum })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Reduced(PauliSum),
    NotReducible,
}

/// Restriction to `subset` when the sum has no support outside it.
pub fn simply_reduce(sum: &PauliSum, subset: &[usize]) -> Reduction {
    match sum.restrict(subset) {
        Some(r) => Reduction::Reduced(r),
        None => Reduction::NotReducible,
    }
}

/// Component-wise [`simply_reduce`]; `None` if any component has outside support.
pub fn simply_reduce_descriptor(d: &Descriptor, subset: &[usize]) -> Option<Descriptor> {
    let [x, y, z] = d.components();
    Some(Descriptor::new(x.restrict(subset)?, y.restrict(subset)?, z.restrict(subset)?))
}

/// Representation on `subset`: slots outside are evaluated against `|0⟩`,
/// so terms with X or Y there vanish and I, Z become identity. Preserves
/// the vacuum expectation of each component, not operator identity.
pub fn represent_on(d: &Descriptor, subset: &[usize]) -> Descriptor {
    d.map(|c| c.contract_outside(subset))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Mixture {
    Weights { weights: Vec<f64>, residual: f64 },
    Infeasible { residual: f64 },
}

/// Least-squares weights `w` with `Σ w_i table_i ≈ target`.
pub fn mixture_representation(target: &DensityMatrix, dictionary: &[DescriptorSet]) -> Result<Mixture> {
    if dictionary.is_empty() {
        return Err(Error::EmptyDictionary);
    }
    let k = target.num_qubits();
    let rows = 1usize << (2 * k);
    let mut tables = Vec::with_capacity(dictionary.len());
    for (idx, entry) in dictionary.iter().enumerate() {
        if entry.num_qubits() != k {
            return Err(Error::DimensionMismatch { left: k, right: entry.num_qubits() });
        }
        let all: Vec<usize> = (0..k).collect();
        let table = reconstruct_density(entry, &all)?;
        if table.purity() != Dyadic::ONE {
            return Err(Error::ImpureDictionaryEntry(idx));
        }
        tables.push(table);
    }
    // real and imaginary parts stacked so complex tables stay exact-fit
    let a = DMatrix::from_fn(2 * rows, dictionary.len(), |r, c| {
        let v = tables[c].coefficients()[r % rows];
        if r < rows {
            v.re.to_f64()
        } else {
            v.im.to_f64()
        }
    });
    let b = DVector::from_fn(2 * rows, |r, _| {
        let v = target.coefficients()[r % rows];
        if r < rows {
            v.re.to_f64()
        } else {
            v.im.to_f64()
        }
    });
    let svd = a.clone().svd(true, true);
    let w = svd.solve(&b, 1e-12).map_err(|e| Error::Inexact(e.to_string()))?;
    let residual = (&a * &w - &b).norm();
    if residual > TOL {
        return Ok(Mixture::Infeasible { residual });
    }
    Ok(Mixture::Weights { weights: w.iter().copied().collect(), residual })
}
