//! Basis validation, density symmetries and equivalent descriptor sets.
//!
//! Symmetries act on the six labelled components `q1x … q2z` of a
//! two-qubit set. A candidate either keeps or swaps the two descriptors
//! and applies a signed permutation of determinant +1 to each triple
//! (the 24 rotations of the cube), so `q_y = i q_x q_z` survives. A
//! candidate is a symmetry of `ρ` when it leaves every table entry fixed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::density::{reconstruct_density, DensityMatrix};
use crate::descriptor::{Descriptor, DescriptorSet};
use crate::dyadic::ComplexDyadic;
use crate::error::{Error, Result};
use crate::exact;
use crate::oracle::all_letter_sequences;
use crate::par::{self, Mode};
use crate::pauli::{hs_inner, letters_commute, letters_mul, PauliLetter, PauliSum, I};

const LABELS: [char; 3] = ['x', 'y', 'z'];

fn slot_label(slot: usize) -> String {
    format!("q{}{}", slot / 3 + 1, LABELS[slot % 3])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisReport {
    pub qubits: usize,
    pub independent_count: usize,
    pub orthogonal: bool,
    pub complete: bool,
    pub hermitian: bool,
    pub traceless_ok: bool,
    pub distinct_ok: bool,
    pub violations: Vec<String>,
    pub well_formed: bool,
}

/// Checks the product family `q_{1i} q_{2j} …` of an `n ≤ 3` qubit set.
pub fn validate_basis(set: &DescriptorSet) -> Result<BasisReport> {
    let n = set.num_qubits();
    if n > 3 {
        return Err(Error::UnsupportedSize { n, supported: "1 to 3 qubits" });
    }
    let basis = all_letter_sequences(n);
    let products: Vec<PauliSum> = basis.iter().map(|idx| set.product(idx)).collect::<Result<_>>()?;
    let mut violations = Vec::new();

    let rows: Vec<Vec<ComplexDyadic>> =
        products.iter().map(|p| basis.iter().map(|b| p.coefficient(b)).collect()).collect();
    let independent_count = exact::rank(&rows);
    if independent_count != basis.len() {
        violations.push(format!("only {independent_count} of {} products are linearly independent", basis.len()));
    }

    let mut non_orthogonal = 0;
    let mut bad_norm = 0;
    for (a, pa) in products.iter().enumerate() {
        for (b, pb) in products.iter().enumerate().skip(a) {
            let v = hs_inner(pa, pb)?;
            if a == b && v != ComplexDyadic::ONE {
                bad_norm += 1;
            } else if a != b && !v.is_zero() {
                non_orthogonal += 1;
            }
        }
    }
    if non_orthogonal > 0 {
        violations.push(format!("{non_orthogonal} pairs of products are not orthogonal"));
    }
    if bad_norm > 0 {
        violations.push(format!("{bad_norm} products lack unit norm"));
    }

    let components: Vec<(String, &PauliSum)> = set
        .descriptors()
        .iter()
        .enumerate()
        .flat_map(|(a, d)| d.components().into_iter().enumerate().map(move |(i, c)| (slot_label(3 * a + i), c)))
        .collect();
    let mut hermitian = true;
    let mut traceless_ok = true;
    for (label, c) in &components {
        if !c.is_hermitian() {
            hermitian = false;
            violations.push(format!("{label} is not Hermitian"));
        }
        if !c.normalized_trace().is_zero() {
            traceless_ok = false;
            violations.push(format!("{label} has nonzero trace"));
        }
    }
    let mut distinct_ok = true;
    for (k, (la, ca)) in components.iter().enumerate() {
        for (lb, cb) in &components[k + 1..] {
            if ca == cb {
                distinct_ok = false;
                violations.push(format!("{la} = {lb}"));
            }
        }
    }
    let orthogonal = non_orthogonal == 0;
    let complete = bad_norm == 0;
    let well_formed =
        orthogonal && complete && hermitian && traceless_ok && distinct_ok && independent_count == basis.len();
    Ok(BasisReport {
        qubits: n,
        independent_count,
        orthogonal,
        complete,
        hermitian,
        traceless_ok,
        distinct_ok,
        violations,
        well_formed,
    })
}

/// Output slot `k` holds `sign · (input slot src)`; slots are `3a + i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct SymmetryTransform {
    slots: [(usize, i8); 6],
}

/// Signed permutations of `(x, y, z)` with determinant +1.
fn rotations() -> Vec<([usize; 3], [i8; 3])> {
    const PERMS: [([usize; 3], i8); 6] =
        [([0, 1, 2], 1), ([0, 2, 1], -1), ([1, 0, 2], -1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([2, 1, 0], -1)];
    let mut out = Vec::with_capacity(24);
    for (perm, parity) in PERMS {
        for mask in 0..8u8 {
            let signs = [0, 1, 2].map(|b| if (mask >> b) & 1 == 1 { -1i8 } else { 1 });
            if parity * signs.iter().product::<i8>() == 1 {
                out.push((perm, signs));
            }
        }
    }
    out
}

impl SymmetryTransform {
    pub const IDENTITY: SymmetryTransform =
        SymmetryTransform { slots: [(0, 1), (1, 1), (2, 1), (3, 1), (4, 1), (5, 1)] };

    /// `q'_1 = R1 q_1, q'_2 = R2 q_2`, or with the descriptors swapped first.
    fn from_parts(swap: bool, r1: ([usize; 3], [i8; 3]), r2: ([usize; 3], [i8; 3])) -> SymmetryTransform {
        let (src1, src2) = if swap { (3, 0) } else { (0, 3) };
        let mut slots = [(0, 1); 6];
        for i in 0..3 {
            slots[i] = (src1 + r1.0[i], r1.1[i]);
            slots[3 + i] = (src2 + r2.0[i], r2.1[i]);
        }
        SymmetryTransform { slots }
    }

    /// All 1152 block-preserving candidates.
    pub fn candidates() -> Vec<SymmetryTransform> {
        let rots = rotations();
        let mut out = Vec::with_capacity(2 * rots.len() * rots.len());
        for swap in [false, true] {
            for &r1 in &rots {
                for &r2 in &rots {
                    out.push(SymmetryTransform::from_parts(swap, r1, r2));
                }
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    pub fn swaps_descriptors(&self) -> bool {
        self.slots[0].0 >= 3
    }

    /// `(self ∘ other)(S) = self(other(S))`.
    pub fn compose(&self, other: &SymmetryTransform) -> SymmetryTransform {
        let mut slots = [(0, 1); 6];
        for (k, slot) in slots.iter_mut().enumerate() {
            let (mid, s1) = self.slots[k];
            let (src, s2) = other.slots[mid];
            *slot = (src, s1 * s2);
        }
        SymmetryTransform { slots }
    }

    pub fn inverse(&self) -> SymmetryTransform {
        let mut slots = [(0, 1); 6];
        for (k, &(src, s)) in self.slots.iter().enumerate() {
            slots[src] = (k, s);
        }
        SymmetryTransform { slots }
    }

    /// Table of the transformed set, from the original table alone.
    pub fn apply_table(&self, rho: &DensityMatrix) -> DensityMatrix {
        assert_eq!(rho.num_qubits(), 2);
        let mut entries = Vec::new();
        for idx in all_letter_sequences(2) {
            if idx == [I, I] {
                continue;
            }
            // old letters feeding each output slot
            let mut old = [I, I];
            let mut sign = 1i8;
            for (a, &l) in idx.iter().enumerate() {
                if l != I {
                    let (src, s) = self.slots[3 * a + l.index() - 1];
                    old[src / 3] = PauliLetter::from_index(src % 3 + 1);
                    sign *= s;
                }
            }
            let v = rho.coefficient(&old);
            entries.push((idx, if sign < 0 { -v } else { v }));
        }
        DensityMatrix::from_entries(2, entries).expect("two-qubit table")
    }

    /// Applies the transform to a two-descriptor set (any register size).
    pub fn apply_set(&self, set: &DescriptorSet) -> Result<DescriptorSet> {
        if set.descriptors().len() != 2 {
            return Err(Error::UnsupportedSize { n: set.descriptors().len(), supported: "2 descriptors" });
        }
        let comps: Vec<&PauliSum> = set.descriptors().iter().flat_map(|d| d.components()).collect();
        let pick = |k: usize| {
            let (src, s) = self.slots[k];
            comps[src].scale_int(s as i64)
        };
        let d1 = Descriptor::new(pick(0), pick(1), pick(2));
        let d2 = Descriptor::new(pick(3), pick(4), pick(5));
        set.with_descriptors(vec![d1, d2])
    }

    /// Cycle notation on slot contents plus the negated output slots,
    /// e.g. `(q1x q1z)(q2x q2z) −q1y −q2y`. `id` for the identity.
    pub fn cycles(&self) -> String {
        let mut parts = Vec::new();
        let mut seen = [false; 6];
        for start in 0..6 {
            if seen[start] || self.slots[start].0 == start {
                seen[start] = true;
                continue;
            }
            let mut cycle = Vec::new();
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                cycle.push(slot_label(k));
                k = self.slots[k].0;
            }
            parts.push(format!("({})", cycle.join(" ")));
        }
        let mut s = parts.join("");
        for (k, &(_, sign)) in self.slots.iter().enumerate() {
            if sign < 0 {
                if !s.is_empty() {
                    s.push(' ');
                }
                s.push('−');
                s.push_str(&slot_label(k));
            }
        }
        if s.is_empty() {
            "id".into()
        } else {
            s
        }
    }
}

impl fmt::Display for SymmetryTransform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycles())
    }
}

impl Serialize for SymmetryTransform {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.cycles())
    }
}

/// Every candidate transform preserving the table, identity first.
pub fn density_symmetries(rho: &DensityMatrix) -> Result<Vec<SymmetryTransform>> {
    density_symmetries_with(Mode::default(), rho)
}

pub fn density_symmetries_with(mode: Mode, rho: &DensityMatrix) -> Result<Vec<SymmetryTransform>> {
    if rho.num_qubits() != 2 {
        return Err(Error::UnsupportedSize { n: rho.num_qubits(), supported: "2 qubits" });
    }
    let candidates = SymmetryTransform::candidates();
    let keep = par::map(mode, &candidates, |t| t.apply_table(rho) == *rho);
    let mut out: Vec<SymmetryTransform> =
        candidates.into_iter().zip(keep).filter(|(_, k)| *k).map(|(t, _)| t).collect();
    out.sort_by_key(|t| (!t.is_identity(), *t));
    Ok(out)
}

/// Components with their overall sign removed, for grouping sign variants.
fn sign_key(set: &DescriptorSet) -> Vec<String> {
    set.descriptors()
        .iter()
        .flat_map(|d| d.components())
        .map(|c| {
            let first = c.terms().next().map(|(_, v)| *v).unwrap_or(ComplexDyadic::ZERO);
            let negative = first.re.signum() < 0 || (first.re.is_zero() && first.im.signum() < 0);
            if negative { c.scale_int(-1) } else { c.clone() }.canonical()
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceClass {
    pub representative: DescriptorSet,
    /// The first transform producing the representative from the seed.
    pub transform: SymmetryTransform,
    /// Exact sets in the class (sign variants included).
    pub variants: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalentSets {
    pub transforms: usize,
    pub exact_sets: usize,
    pub classes: Vec<EquivalenceClass>,
    pub all_well_formed: bool,
    pub all_tables_match: bool,
}

impl EquivalentSets {
    pub fn sets(&self) -> Vec<&DescriptorSet> {
        self.classes.iter().map(|c| &c.representative).collect()
    }
}

/// Applies every symmetry of `rho` to `seed`. Sets differing only by
/// component signs (all of which share the table) form one class.
pub fn generate_equivalent_sets(seed: &DescriptorSet, rho: &DensityMatrix) -> Result<EquivalentSets> {
    if seed.num_qubits() != 2 {
        return Err(Error::UnsupportedSize { n: seed.num_qubits(), supported: "2 qubits" });
    }
    if reconstruct_density(seed, &[0, 1])? != *rho {
        return Err(Error::SeedMismatch);
    }
    let report = validate_basis(seed)?;
    if !report.well_formed {
        return Err(Error::SeedInvalid(report.violations.join("; ")));
    }
    let symmetries = density_symmetries(rho)?;
    let produced: Vec<Result<DescriptorSet>> = par::map(Mode::default(), &symmetries, |t| t.apply_set(seed));
    let mut exact = BTreeSet::new();
    let mut classes: Vec<EquivalenceClass> = Vec::new();
    let mut class_of: BTreeMap<Vec<String>, usize> = BTreeMap::new();
    for (t, set) in symmetries.iter().zip(produced) {
        let set = set?;
        if !exact.insert(set.render()) {
            continue;
        }
        let key = sign_key(&set);
        match class_of.get(&key) {
            Some(&c) => classes[c].variants += 1,
            None => {
                class_of.insert(key, classes.len());
                classes.push(EquivalenceClass { representative: set, transform: *t, variants: 1 });
            }
        }
    }
    let checks: Vec<Result<(bool, bool)>> = par::map(Mode::default(), &classes, |c| {
        let s = &c.representative;
        Ok((validate_basis(s)?.well_formed, reconstruct_density(s, &[0, 1])? == *rho))
    });
    let mut all_well_formed = true;
    let mut all_tables_match = true;
    for r in checks {
        let (w, t) = r?;
        all_well_formed &= w;
        all_tables_match &= t;
    }
    Ok(EquivalentSets {
        transforms: symmetries.len(),
        exact_sets: exact.len(),
        classes,
        all_well_formed,
        all_tables_match,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SetComparison {
    pub listed: usize,
    pub well_formed: bool,
    pub table_matches: bool,
    /// Index of the generated class with the same components up to sign.
    pub matched_class: Option<usize>,
    /// Components whose sign differs from the matched representative.
    pub sign_deltas: Vec<String>,
}

impl SetComparison {
    pub fn only_sign_deltas(&self) -> bool {
        self.well_formed && self.table_matches && self.matched_class.is_some()
    }
}

/// Compares externally listed sets against generated classes.
pub fn compare_sets(
    generated: &EquivalentSets,
    listed: &[DescriptorSet],
    rho: &DensityMatrix,
) -> Result<Vec<SetComparison>> {
    let keys: Vec<Vec<String>> = generated.classes.iter().map(|c| sign_key(&c.representative)).collect();
    let mut out = Vec::with_capacity(listed.len());
    for (k, set) in listed.iter().enumerate() {
        let well_formed = validate_basis(set)?.well_formed;
        let table_matches = reconstruct_density(set, &[0, 1])? == *rho;
        let key = sign_key(set);
        let matched_class = keys.iter().position(|g| *g == key);
        let mut sign_deltas = Vec::new();
        if let Some(c) = matched_class {
            let rep: Vec<&PauliSum> =
                generated.classes[c].representative.descriptors().iter().flat_map(|d| d.components()).collect();
            let mine: Vec<&PauliSum> = set.descriptors().iter().flat_map(|d| d.components()).collect();
            for (slot, (a, b)) in mine.iter().zip(&rep).enumerate() {
                if a != b {
                    sign_deltas.push(format!("{}: listed {} vs generated {}", slot_label(slot), a, b));
                }
            }
        }
        out.push(SetComparison { listed: k + 1, well_formed, table_matches, matched_class, sign_deltas });
    }
    Ok(out)
}

/// A signed Pauli string used as a candidate component.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Signed {
    negative: bool,
    letters: Vec<PauliLetter>,
}

impl Signed {
    fn to_sum(&self) -> PauliSum {
        PauliSum::term(ComplexDyadic::from_int(if self.negative { -1 } else { 1 }), self.letters.clone())
    }
}

/// `i^phase` times letters; the result of multiplying candidates.
#[derive(Clone, Debug)]
struct Phased {
    phase: u8,
    letters: Vec<PauliLetter>,
}

impl Phased {
    fn identity(n: usize) -> Phased {
        Phased { phase: 0, letters: vec![I; n] }
    }

    fn from_signed(s: &Signed) -> Phased {
        Phased { phase: if s.negative { 2 } else { 0 }, letters: s.letters.clone() }
    }

    fn mul(&self, other: &Phased) -> Phased {
        let (p, letters) = letters_mul(&self.letters, &other.letters);
        Phased { phase: (self.phase + other.phase + p) % 4, letters }
    }

    fn vacuum(&self) -> ComplexDyadic {
        if self.letters.iter().all(|l| matches!(l, I | PauliLetter::Z)) {
            ComplexDyadic::ONE.times_i_pow(self.phase)
        } else {
            ComplexDyadic::ZERO
        }
    }
}

/// Non-identity strings on `n` qubits, letters lexicographic, `+` before `−`.
fn candidate_strings(n: usize) -> Vec<Signed> {
    all_letter_sequences(n)
        .into_iter()
        .skip(1)
        .flat_map(|letters| [false, true].map(|negative| Signed { negative, letters: letters.clone() }))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Construction {
    Found(DescriptorSet),
    NotFound,
}

struct Search<'a> {
    rho: &'a DensityMatrix,
    k: usize,
    candidates: Vec<Signed>,
    budget: u64,
    nodes: u64,
    chosen: Vec<(Signed, Signed, Phased)>,
}

impl Search<'_> {
    /// Table entries whose last non-identity index is on qubit `a`.
    fn consistent(&self, a: usize) -> bool {
        let n = self.candidates[0].letters.len();
        for idx in all_letter_sequences(a + 1) {
            if idx[a] == I {
                continue;
            }
            let mut p = Phased::identity(n);
            for (b, &l) in idx.iter().enumerate() {
                let (x, z, y) = &self.chosen[b];
                let f = match l {
                    I => continue,
                    PauliLetter::X => Phased::from_signed(x),
                    PauliLetter::Y => y.clone(),
                    PauliLetter::Z => Phased::from_signed(z),
                };
                p = p.mul(&f);
            }
            let mut full = idx.clone();
            full.resize(self.k, I);
            if p.vacuum() != self.rho.coefficient(&full) {
                return false;
            }
        }
        true
    }

    fn commutes_with_chosen(&self, s: &Signed) -> bool {
        self.chosen
            .iter()
            .all(|(x, z, _)| letters_commute(&x.letters, &s.letters) && letters_commute(&z.letters, &s.letters))
    }

    fn run(&mut self, a: usize) -> Result<bool> {
        if a == self.k {
            return Ok(true);
        }
        for xi in 0..self.candidates.len() {
            let x = self.candidates[xi].clone();
            if !self.commutes_with_chosen(&x) {
                continue;
            }
            for zi in 0..self.candidates.len() {
                self.nodes += 1;
                if self.nodes > self.budget {
                    return Err(Error::BudgetExhausted(self.budget));
                }
                let z = &self.candidates[zi];
                if letters_commute(&x.letters, &z.letters) || !self.commutes_with_chosen(z) {
                    continue;
                }
                // y = i x z
                let mut y = Phased::from_signed(&x).mul(&Phased::from_signed(z));
                y.phase = (y.phase + 1) % 4;
                self.chosen.push((x.clone(), z.clone(), y));
                if self.consistent(a) && self.run(a + 1)? {
                    return Ok(true);
                }
                self.chosen.pop();
            }
        }
        Ok(false)
    }

    /// Ancilla descriptors: greedy pairs commuting with everything chosen.
    fn complete(&mut self, total: usize) {
        while self.chosen.len() < total {
            let pair = self.candidates.iter().filter(|s| !s.negative && self.commutes_with_chosen(s)).find_map(|x| {
                self.candidates
                    .iter()
                    .find(|z| !z.negative && !letters_commute(&x.letters, &z.letters) && self.commutes_with_chosen(z))
                    .map(|z| (x.clone(), z.clone()))
            });
            let (x, z) = pair.expect("symplectic complement is non-empty");
            let mut y = Phased::from_signed(&x).mul(&Phased::from_signed(&z));
            y.phase = (y.phase + 1) % 4;
            self.chosen.push((x, z, y));
        }
    }
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Searches `±` single-string components on `k + ancillas` qubits whose
/// system table equals `rho` exactly. The system occupies the first `k`
/// qubits. Only tables with entries in `{0, ±1}` can be matched.
pub fn construct_from_density(rho: &DensityMatrix, ancillas: usize, budget: u64) -> Result<Construction> {
    let k = rho.num_qubits();
    if !(1..=2).contains(&k) {
        return Err(Error::UnsupportedSize { n: k, supported: "1 or 2 system qubits" });
    }
    let total = k + ancillas;
    if total > 4 {
        return Err(Error::UnsupportedSize { n: total, supported: "at most 4 qubits in total" });
    }
    let mut search = Search { rho, k, candidates: candidate_strings(total), budget, nodes: 0, chosen: Vec::new() };
    if !search.run(0)? {
        return Ok(Construction::NotFound);
    }
    search.complete(total);
    let descriptors = search
        .chosen
        .iter()
        .map(|(x, z, y)| {
            let qy = PauliSum::term(ComplexDyadic::ONE.times_i_pow(y.phase), y.letters.clone());
            Descriptor::new(x.to_sum(), qy, z.to_sum())
        })
        .collect();
    Ok(Construction::Found(DescriptorSet::from_descriptors(descriptors)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Circuit;
    use crate::dyadic::Dyadic;
    use crate::gates::Gate;

    fn bell() -> DescriptorSet {
        crate::evolve_circuit(&Circuit::from_gates(2, [Gate::h(0), Gate::cnot(0, 1)])).unwrap()
    }

    fn set(d: [[&str; 3]; 2]) -> DescriptorSet {
        DescriptorSet::from_descriptors(d.iter().map(|c| Descriptor::parse(c[0], c[1], c[2]).unwrap()).collect())
            .unwrap()
    }

    #[test]
    fn basis_checks() {
        let r = validate_basis(&bell()).unwrap();
        assert!(r.well_formed, "{:?}", r.violations);
        assert!(validate_basis(&DescriptorSet::initial(3).unwrap()).unwrap().well_formed);
        let degenerate = set([["IX", "XX", "XI"], ["IX", "XX", "XI"]]);
        let r = validate_basis(&degenerate).unwrap();
        assert!(!r.well_formed && !r.distinct_ok);
        assert_eq!(r.independent_count, 4);
        assert!(matches!(validate_basis(&DescriptorSet::initial(4).unwrap()), Err(Error::UnsupportedSize { .. })));
    }

    #[test]
    fn rotation_group() {
        let rots = rotations();
        assert_eq!(rots.len(), 24);
        let cands = SymmetryTransform::candidates();
        assert_eq!(cands.len(), 1152);
        let t = cands[777];
        assert!(t.compose(&t.inverse()).is_identity());
        let fresh = DescriptorSet::initial(2).unwrap();
        for t in cands.iter().step_by(37) {
            let s = t.apply_set(&fresh).unwrap();
            assert!(s.descriptors().iter().all(|d| d.y_invariant_holds()), "{t}");
        }
    }

    #[test]
    fn table_action_matches_set_action() {
        let b = bell();
        let rho = reconstruct_density(&b, &[0, 1]).unwrap();
        for t in SymmetryTransform::candidates().iter().step_by(13) {
            let moved = t.apply_set(&b).unwrap();
            assert_eq!(reconstruct_density(&moved, &[0, 1]).unwrap(), t.apply_table(&rho), "{t}");
        }
    }

    #[test]
    fn bell_symmetries_form_a_group() {
        let rho = reconstruct_density(&bell(), &[0, 1]).unwrap();
        let g = density_symmetries(&rho).unwrap();
        assert_eq!(g.len(), 48);
        assert!(g[0].is_identity());
        let members: BTreeSet<_> = g.iter().copied().collect();
        for a in &g {
            assert!(members.contains(&a.inverse()));
            for b in g.iter().step_by(5) {
                assert!(members.contains(&a.compose(b)));
            }
        }
        assert_eq!(g, density_symmetries_with(Mode::Sequential, &rho).unwrap());
    }

    #[test]
    fn generic_density_has_only_identity() {
        let h = |n, e| ComplexDyadic::real(Dyadic::new(n, e));
        use crate::pauli::{X, Y, Z};
        let rho = DensityMatrix::from_entries(
            2,
            [
                (vec![X, I], h(1, 2)),
                (vec![Y, I], h(1, 3)),
                (vec![Z, I], h(1, 4)),
                (vec![I, X], h(1, 3)),
                (vec![I, Z], h(-1, 4)),
                (vec![X, Y], h(1, 5)),
                (vec![Z, Z], h(3, 5)),
            ],
        )
        .unwrap();
        assert!(rho.is_positive());
        let g = density_symmetries(&rho).unwrap();
        assert_eq!(g, vec![SymmetryTransform::IDENTITY]);
    }

    #[test]
    fn bell_equivalent_sets() {
        let b = bell();
        let rho = reconstruct_density(&b, &[0, 1]).unwrap();
        let eq = generate_equivalent_sets(&b, &rho).unwrap();
        assert_eq!(eq.classes.len(), 12);
        assert_eq!(eq.exact_sets, 48);
        assert!(eq.all_well_formed && eq.all_tables_match);
        assert_eq!(eq.classes[0].representative, b);
        let wrong = DescriptorSet::initial(2).unwrap();
        assert!(matches!(generate_equivalent_sets(&wrong, &rho), Err(Error::SeedMismatch)));
    }

    #[test]
    fn cycle_rendering() {
        assert_eq!(SymmetryTransform::IDENTITY.cycles(), "id");
        let swap = SymmetryTransform::from_parts(true, ([0, 1, 2], [1, 1, 1]), ([0, 1, 2], [1, 1, 1]));
        assert_eq!(swap.cycles(), "(q1x q2x)(q1y q2y)(q1z q2z)");
        let xz = SymmetryTransform::from_parts(false, ([2, 1, 0], [1, -1, 1]), ([0, 1, 2], [1, 1, 1]));
        assert_eq!(xz.cycles(), "(q1x q1z) −q1y");
    }

    #[test]
    fn construction() {
        let mixed = DensityMatrix::maximally_mixed(1).unwrap();
        assert_eq!(construct_from_density(&mixed, 0, DEFAULT_BUDGET).unwrap(), Construction::NotFound);
        let Construction::Found(s) = construct_from_density(&mixed, 1, DEFAULT_BUDGET).unwrap() else { panic!() };
        assert_eq!(*s.descriptor(0), Descriptor::parse("IX", "-XZ", "XY").unwrap());
        assert_eq!(reconstruct_density(&s, &[0]).unwrap(), mixed);
        assert!(validate_basis(&s).unwrap().well_formed);

        let zero = DensityMatrix::from_entries(1, [(vec![crate::pauli::Z], ComplexDyadic::ONE)]).unwrap();
        let Construction::Found(s) = construct_from_density(&zero, 0, DEFAULT_BUDGET).unwrap() else { panic!() };
        assert_eq!(s, DescriptorSet::initial(1).unwrap());

        let rho = reconstruct_density(&bell(), &[0, 1]).unwrap();
        let Construction::Found(s) = construct_from_density(&rho, 0, DEFAULT_BUDGET).unwrap() else { panic!() };
        assert_eq!(reconstruct_density(&s, &[0, 1]).unwrap(), rho);
        let family = generate_equivalent_sets(&bell(), &rho).unwrap();
        let key = sign_key(&s);
        assert!(family.classes.iter().any(|c| sign_key(&c.representative) == key));

        assert_eq!(construct_from_density(&rho, 0, 10), Err(Error::BudgetExhausted(10)));
    }
}
