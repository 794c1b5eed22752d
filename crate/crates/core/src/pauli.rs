//! Pauli letters, phased Pauli strings and exact linear combinations of them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::dyadic::ComplexDyadic;
use crate::error::{Error, ParseValueError, Result};

/// A single-qubit Pauli operator. The derived order `I < X < Y < Z` is the
/// canonical order for letter sequences.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
pub enum PauliLetter {
    I,
    X,
    Y,
    Z,
}

pub use PauliLetter::{I, X, Y, Z};

impl PauliLetter {
    pub const ALL: [PauliLetter; 4] = [I, X, Y, Z];
    pub const NON_IDENTITY: [PauliLetter; 3] = [X, Y, Z];

    /// 0 for I, 1..=3 for X, Y, Z.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(k: usize) -> PauliLetter {
        Self::ALL[k]
    }

    /// Product `self · other` as `(power of i, letter)`.
    pub fn times(self, other: PauliLetter) -> (u8, PauliLetter) {
        match (self, other) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, X) => (3, Z),
            (Y, Z) => (1, X),
            (Z, Y) => (3, X),
            (Z, X) => (1, Y),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    pub fn commutes_with(self, other: PauliLetter) -> bool {
        self == I || other == I || self == other
    }

    /// `⟨0|P|0⟩`.
    pub fn vacuum_value(self) -> i64 {
        match self {
            I | Z => 1,
            X | Y => 0,
        }
    }

    pub fn glyph(self) -> char {
        match self {
            I => 'I',
            X => 'X',
            Y => 'Y',
            Z => 'Z',
        }
    }

    pub fn from_glyph(c: char) -> Option<PauliLetter> {
        match c.to_ascii_uppercase() {
            'I' | '1' => Some(I),
            'X' => Some(X),
            'Y' => Some(Y),
            'Z' => Some(Z),
            _ => None,
        }
    }
}

impl fmt::Display for PauliLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.glyph())
    }
}

/// Renders a letter sequence as `L0⊗L1⊗…`.
pub fn letters_to_string(letters: &[PauliLetter]) -> String {
    let parts: Vec<String> = letters.iter().map(|l| l.glyph().to_string()).collect();
    parts.join("⊗")
}

/// Parses `ZX`, `Z⊗X` or `Z X` into letters.
pub fn parse_letters(s: &str) -> std::result::Result<Vec<PauliLetter>, ParseValueError> {
    let mut out = Vec::new();
    for c in s.chars() {
        if c == '⊗' || c.is_whitespace() || c == '*' {
            continue;
        }
        out.push(
            PauliLetter::from_glyph(c).ok_or_else(|| ParseValueError(format!("bad Pauli letter {c:?} in {s:?}")))?,
        );
    }
    if out.is_empty() {
        return Err(ParseValueError(format!("empty Pauli string {s:?}")));
    }
    Ok(out)
}

/// Multiplies letter sequences slot by slot, returning the power of `i`.
pub fn letters_mul(a: &[PauliLetter], b: &[PauliLetter]) -> (u8, Vec<PauliLetter>) {
    let mut phase = 0u8;
    let letters = a
        .iter()
        .zip(b)
        .map(|(x, y)| {
            let (p, l) = x.times(*y);
            phase += p;
            l
        })
        .collect();
    (phase % 4, letters)
}

/// Whether two letter sequences commute as operators.
pub fn letters_commute(a: &[PauliLetter], b: &[PauliLetter]) -> bool {
    a.iter().zip(b).filter(|(x, y)| !x.commutes_with(**y)).count() % 2 == 0
}

/// A phase `i^phase` times a tensor product of letters.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PauliString {
    phase: u8,
    letters: Vec<PauliLetter>,
}

impl PauliString {
    pub fn new(phase: u8, letters: Vec<PauliLetter>) -> Self {
        PauliString { phase: phase % 4, letters }
    }

    pub fn identity(n: usize) -> Self {
        PauliString { phase: 0, letters: vec![I; n] }
    }

    /// `σ` in slot `slot` of an `n`-qubit register.
    pub fn single(n: usize, slot: usize, letter: PauliLetter) -> Self {
        let mut letters = vec![I; n];
        letters[slot] = letter;
        PauliString { phase: 0, letters }
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn letters(&self) -> &[PauliLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    pub fn coefficient(&self) -> ComplexDyadic {
        ComplexDyadic::ONE.times_i_pow(self.phase)
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        letters_commute(&self.letters, &other.letters)
    }

    pub fn to_sum(&self) -> PauliSum {
        PauliSum::term(self.coefficient(), self.letters.clone())
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = ["", "i·", "-", "-i·"][self.phase as usize];
        write!(f, "{}{}", p, letters_to_string(&self.letters))
    }
}

/// Product of two equal-length strings with accumulated phase.
pub fn string_mul(a: &PauliString, b: &PauliString) -> Result<PauliString> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { left: a.len(), right: b.len() });
    }
    let (p, letters) = letters_mul(&a.letters, &b.letters);
    Ok(PauliString::new(a.phase + b.phase + p, letters))
}

/// A finite linear combination of Pauli strings on `n` qubits. Phases are
/// folded into the coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<Vec<PauliLetter>, ComplexDyadic>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        PauliSum { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::term(ComplexDyadic::ONE, vec![I; n])
    }

    pub fn single(n: usize, slot: usize, letter: PauliLetter) -> Self {
        PauliString::single(n, slot, letter).to_sum()
    }

    pub fn term(coef: ComplexDyadic, letters: Vec<PauliLetter>) -> Self {
        let n = letters.len();
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(letters, coef);
        }
        PauliSum { n, terms }
    }

    /// `±letters`, convenient for literals.
    pub fn signed(sign: i64, letters: &str) -> Self {
        let letters = parse_letters(letters).expect("valid letter literal");
        Self::term(ComplexDyadic::from_int(sign), letters)
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[PauliLetter], &ComplexDyadic)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coefficient(&self, letters: &[PauliLetter]) -> ComplexDyadic {
        self.terms.get(letters).copied().unwrap_or(ComplexDyadic::ZERO)
    }

    /// The lone term, if the sum has exactly one.
    pub fn single_term(&self) -> Option<(ComplexDyadic, &[PauliLetter])> {
        if self.terms.len() == 1 {
            let (k, v) = self.terms.iter().next().unwrap();
            Some((*v, k.as_slice()))
        } else {
            None
        }
    }

    fn accumulate(&mut self, letters: Vec<PauliLetter>, coef: ComplexDyadic) {
        if coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(letters);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = *o.get() + coef;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check(&self, other: &PauliSum) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check(other)?;
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.accumulate(k.clone(), *v);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &PauliSum) -> Result<PauliSum> {
        self.check(other)?;
        let mut out = PauliSum::zero(self.n);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                let (p, letters) = letters_mul(ka, kb);
                out.accumulate(letters, (*va * *vb).times_i_pow(p));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: ComplexDyadic) -> PauliSum {
        let mut out = PauliSum::zero(self.n);
        for (k, v) in &self.terms {
            out.accumulate(k.clone(), *v * c);
        }
        out
    }

    pub fn scale_int(&self, k: i64) -> PauliSum {
        self.scale(ComplexDyadic::from_int(k))
    }

    /// Operator adjoint.
    pub fn adjoint(&self) -> PauliSum {
        PauliSum { n: self.n, terms: self.terms.iter().map(|(k, v)| (k.clone(), v.conj())).collect() }
    }

    /// Hermitian iff every folded coefficient is real.
    pub fn is_hermitian(&self) -> bool {
        self.terms.values().all(|c| c.is_real())
    }

    /// Normalized trace `Tr(s) / 2^n`, i.e. the identity coefficient.
    pub fn normalized_trace(&self) -> ComplexDyadic {
        self.coefficient(&vec![I; self.n])
    }

    /// `⟨0…0| s |0…0⟩`.
    pub fn vacuum_expectation(&self) -> ComplexDyadic {
        let mut acc = ComplexDyadic::ZERO;
        for (k, v) in &self.terms {
            if k.iter().all(|l| l.vacuum_value() == 1) {
                acc += *v;
            }
        }
        acc
    }

    /// Qubits on which some term carries a non-identity letter.
    pub fn support(&self) -> BTreeSet<usize> {
        let mut s = BTreeSet::new();
        for k in self.terms.keys() {
            for (q, l) in k.iter().enumerate() {
                if *l != I {
                    s.insert(q);
                }
            }
        }
        s
    }

    /// Appends `k` identity slots.
    pub fn extend(&self, k: usize) -> PauliSum {
        let terms = self
            .terms
            .iter()
            .map(|(letters, v)| {
                let mut l = letters.clone();
                l.extend(std::iter::repeat_n(I, k));
                (l, *v)
            })
            .collect();
        PauliSum { n: self.n + k, terms }
    }

    /// Places this sum on `slots` of an `n`-qubit register (identity elsewhere).
    pub fn embed(&self, n: usize, slots: &[usize]) -> Result<PauliSum> {
        if slots.len() != self.n {
            return Err(Error::DimensionMismatch { left: self.n, right: slots.len() });
        }
        if let Some(&bad) = slots.iter().find(|&&s| s >= n) {
            return Err(Error::QubitOutOfRange { index: bad, n });
        }
        let terms = self
            .terms
            .iter()
            .map(|(letters, v)| {
                let mut l = vec![I; n];
                for (src, &dst) in slots.iter().enumerate() {
                    l[dst] = letters[src];
                }
                (l, *v)
            })
            .collect();
        Ok(PauliSum { n, terms })
    }

    /// Keeps only `slots` (in the given order). Returns `None` when some
    /// term has a non-identity letter elsewhere.
    pub fn restrict(&self, slots: &[usize]) -> Option<PauliSum> {
        let mut out = PauliSum::zero(slots.len());
        for (letters, v) in &self.terms {
            let outside = letters.iter().enumerate().any(|(q, l)| *l != I && !slots.contains(&q));
            if outside {
                return None;
            }
            out.accumulate(slots.iter().map(|&s| letters[s]).collect(), *v);
        }
        Some(out)
    }

    /// Evaluates every slot outside `slots` against `|0⟩` and keeps the
    /// rest: terms with X or Y outside are dropped, I and Z outside become
    /// identity.
    pub fn contract_outside(&self, slots: &[usize]) -> PauliSum {
        let mut out = PauliSum::zero(slots.len());
        for (letters, v) in &self.terms {
            let vanishes = letters.iter().enumerate().any(|(q, l)| !slots.contains(&q) && l.vacuum_value() == 0);
            if !vanishes {
                out.accumulate(slots.iter().map(|&s| letters[s]).collect(), *v);
            }
        }
        out
    }

    /// Whether every term is diagonal (I or Z) outside `slots`.
    pub fn diagonal_outside(&self, slots: &[usize]) -> bool {
        self.terms
            .keys()
            .all(|letters| letters.iter().enumerate().all(|(q, l)| slots.contains(&q) || matches!(l, I | Z)))
    }

    /// Canonical text; `"0"` for the empty sum.
    pub fn canonical(&self) -> String {
        self.to_string()
    }

    /// Parses canonical text. The register size is needed for `"0"`.
    pub fn parse_with_qubits(s: &str, n: usize) -> std::result::Result<PauliSum, ParseValueError> {
        let s = s.trim();
        if s == "0" {
            return Ok(PauliSum::zero(n));
        }
        let sum: PauliSum = s.parse()?;
        if sum.n != n {
            return Err(ParseValueError(format!("expected {n} qubits, found {}", sum.n)));
        }
        Ok(sum)
    }
}

/// `Tr(a† b) / 2^n`.
pub fn hs_inner(a: &PauliSum, b: &PauliSum) -> Result<ComplexDyadic> {
    a.check(b)?;
    let mut acc = ComplexDyadic::ZERO;
    for (k, va) in &a.terms {
        if let Some(vb) = b.terms.get(k) {
            acc += va.conj() * *vb;
        }
    }
    Ok(acc)
}

/// Bilinear product of two sums.
pub fn sum_mul(a: &PauliSum, b: &PauliSum) -> Result<PauliSum> {
    a.try_mul(b)
}

/// Product of an ordered list of equal-size sums (identity when empty).
pub fn product<'a>(n: usize, factors: impl IntoIterator<Item = &'a PauliSum>) -> Result<PauliSum> {
    let mut acc = PauliSum::identity(n);
    for f in factors {
        acc = acc.try_mul(f)?;
    }
    Ok(acc)
}

impl<'a> Add<&'a PauliSum> for &'a PauliSum {
    type Output = PauliSum;
    /// Panics on a qubit-count mismatch; use `try_add` to handle it.
    fn add(self, rhs: &'a PauliSum) -> PauliSum {
        self.try_add(rhs).expect("PauliSum addition with mismatched qubit counts")
    }
}

impl<'a> Sub<&'a PauliSum> for &'a PauliSum {
    type Output = PauliSum;
    fn sub(self, rhs: &'a PauliSum) -> PauliSum {
        self + &(-rhs)
    }
}

impl Neg for &PauliSum {
    type Output = PauliSum;
    fn neg(self) -> PauliSum {
        self.scale_int(-1)
    }
}

impl<'a> Mul<&'a PauliSum> for &'a PauliSum {
    type Output = PauliSum;
    /// Panics on a qubit-count mismatch; use `try_mul` to handle it.
    fn mul(self, rhs: &'a PauliSum) -> PauliSum {
        self.try_mul(rhs).expect("PauliSum product with mismatched qubit counts")
    }
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(k, v)| format!("{} * {}", v, letters_to_string(k))).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl FromStr for PauliSum {
    type Err = ParseValueError;

    /// Parses `coef * L0⊗L1 + …`. A bare letter string means coefficient 1
    /// and a leading `-` negates it.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s == "0" {
            return Err(ParseValueError("\"0\" needs an explicit qubit count".into()));
        }
        let mut out: Option<PauliSum> = None;
        for raw in s.split(" + ") {
            let raw = raw.trim();
            let (coef, letters) = match raw.split_once('*') {
                Some((c, l)) => (c.trim().parse::<ComplexDyadic>()?, parse_letters(l.trim())?),
                None => match raw.strip_prefix('-') {
                    Some(l) => (ComplexDyadic::from_int(-1), parse_letters(l)?),
                    None => (ComplexDyadic::ONE, parse_letters(raw)?),
                },
            };
            let acc = out.get_or_insert_with(|| PauliSum::zero(letters.len()));
            if acc.n != letters.len() {
                return Err(ParseValueError(format!("inconsistent term length in {s:?}")));
            }
            acc.accumulate(letters, coef);
        }
        out.ok_or_else(|| ParseValueError("empty Pauli sum".into()))
    }
}

impl Serialize for PauliSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.canonical())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::Dyadic;
    use crate::oracle::pauli_sum_matrix;
    use proptest::prelude::*;

    fn ps(s: &str) -> PauliSum {
        s.parse().unwrap()
    }

    #[test]
    fn letter_table() {
        assert_eq!(X.times(Z), (3, Y)); // X·Z = -iY
        let xz = string_mul(&PauliString::new(1, vec![X]), &PauliString::new(0, vec![Z])).unwrap();
        assert_eq!(xz, PauliString::new(0, vec![Y]));
        let p = PauliString::new(2, vec![Y, Z]);
        assert_eq!(string_mul(&PauliString::identity(2), &p).unwrap(), p);
    }

    #[test]
    fn string_length_mismatch() {
        let e = string_mul(&PauliString::identity(1), &PauliString::identity(2));
        assert!(matches!(e, Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sum_products() {
        assert_eq!(&ps("ZX") * &ps("IX"), ps("ZI"));
        assert_eq!(&ps("-YX") * &ps("XY"), ps("-ZZ"));
        let e = ps("X").try_mul(&ps("XX"));
        assert!(e.is_err());
    }

    #[test]
    fn inner_products() {
        assert_eq!(hs_inner(&ps("XZ"), &ps("XZ")).unwrap(), ComplexDyadic::ONE);
        assert_eq!(hs_inner(&ps("XI"), &ps("IX")).unwrap(), ComplexDyadic::ZERO);
        assert_eq!(hs_inner(&ps("ZX + -1 * YY"), &ps("ZX")).unwrap(), ComplexDyadic::ONE);
    }

    #[test]
    fn vacuum_values() {
        assert_eq!(ps("ZI").vacuum_expectation(), ComplexDyadic::ONE);
        assert_eq!(ps("ZX").vacuum_expectation(), ComplexDyadic::ZERO);
        let zplus = ps("1/2 * I + 1/2 * Z");
        assert_eq!(zplus.vacuum_expectation(), ComplexDyadic::ONE);
    }

    #[test]
    fn supports() {
        assert_eq!(ps("ZXII").support(), [0, 1].into_iter().collect());
        assert_eq!(ps("XIII").support(), [0].into_iter().collect());
        assert!(PauliSum::identity(3).support().is_empty());
    }

    #[test]
    fn canonical_text() {
        let s = ps("-1/2 * Y⊗Y + Z⊗X");
        assert_eq!(s.canonical(), "-1/2 * Y⊗Y + 1 * Z⊗X");
        assert_eq!(PauliSum::zero(2).canonical(), "0");
        assert_eq!(PauliSum::parse_with_qubits("0", 2).unwrap(), PauliSum::zero(2));
    }

    #[test]
    fn restriction_and_contraction() {
        let s = ps("XZY");
        assert!(s.restrict(&[0, 1]).is_none());
        assert_eq!(s.restrict(&[0, 1, 2]).unwrap(), s);
        assert_eq!(ps("ZIZXZI").contract_outside(&[0, 3]), ps("ZX"));
        assert!(ps("ZXIIII").contract_outside(&[0, 3]).is_zero());
    }

    fn arb_letters(n: usize) -> impl Strategy<Value = Vec<PauliLetter>> {
        proptest::collection::vec((0usize..4).prop_map(PauliLetter::from_index), n)
    }

    fn arb_string(n: usize) -> impl Strategy<Value = PauliString> {
        (0u8..4, arb_letters(n)).prop_map(|(p, l)| PauliString::new(p, l))
    }

    fn arb_sum(n: usize) -> impl Strategy<Value = PauliSum> {
        proptest::collection::vec((-4i64..5, 0u32..3, arb_letters(n)), 0..5).prop_map(move |ts| {
            let mut s = PauliSum::zero(n);
            for (c, e, l) in ts {
                s = &s + &PauliSum::term(ComplexDyadic::real(Dyadic::new(c as i128, e)), l);
            }
            s
        })
    }

    fn close(a: &nalgebra::DMatrix<num_complex::Complex64>, b: &nalgebra::DMatrix<num_complex::Complex64>) -> bool {
        (a - b).iter().all(|z| z.norm() < 1e-9)
    }

    proptest! {
        #[test]
        fn string_mul_dense_random(a in arb_string(3), b in arb_string(3), c in arb_string(3)) {
            let ab = string_mul(&a, &b).unwrap();
            let dense = pauli_sum_matrix(&a.to_sum()) * pauli_sum_matrix(&b.to_sum());
            prop_assert!(close(&pauli_sum_matrix(&ab.to_sum()), &dense));
            let l = string_mul(&ab, &c).unwrap();
            let r = string_mul(&a, &string_mul(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(l, r);
        }

        #[test]
        fn hermitian_iff_real_phase(a in arb_string(2)) {
            let m = pauli_sum_matrix(&a.to_sum());
            let herm = close(&m, &m.adjoint());
            prop_assert_eq!(herm, a.is_hermitian());
        }

        #[test]
        fn sum_algebra(a in arb_sum(2), b in arb_sum(2), c in arb_sum(2)) {
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert!(a.terms().all(|(_, v)| !v.is_zero()));
        }

        #[test]
        fn inner_product_properties(a in arb_sum(2), b in arb_sum(2)) {
            prop_assert_eq!(hs_inner(&a, &b).unwrap(), hs_inner(&b, &a).unwrap().conj());
            let aa = hs_inner(&a, &a).unwrap();
            prop_assert!(aa.is_real());
            prop_assert_eq!(aa.re.is_zero(), a.is_zero());
            prop_assert!(aa.re >= Dyadic::ZERO);
        }

        #[test]
        fn vacuum_matches_projector_inner(a in arb_sum(3)) {
            // |000⟩⟨000| = Π (I+Z)/2, so ⟨0|a|0⟩ = 2^n · ⟨P0, a⟩
            let proj = PauliSum::parse_with_qubits("1/2 * I + 1/2 * Z", 1).unwrap();
            let p0 = &(&proj.extend(2) * &proj.embed(3, &[1]).unwrap()) * &proj.embed(3, &[2]).unwrap();
            let scaled = hs_inner(&p0, &a).unwrap() * ComplexDyadic::from_int(8);
            prop_assert_eq!(scaled, a.vacuum_expectation());
        }

        #[test]
        fn canonical_roundtrip(a in arb_sum(3)) {
            let text = a.canonical();
            prop_assert_eq!(PauliSum::parse_with_qubits(&text, 3).unwrap(), a);
        }
    }
}
