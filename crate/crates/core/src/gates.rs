//! Clifford gates and their conjugation rules.
//!
//! A rule lists, for each operand slot and each of X, Y, Z, the signed
//! Pauli product `U† σ U` on the operand slots. Descriptors evolve by
//! substituting their current components into that product.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pauli::{PauliLetter, I, X, Y, Z};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Cnot,
    /// Bell-basis measurement rotation: CNOT(first → second), then H on
    /// the first operand. Takes the four Bell states to computational states.
    Bell,
}

impl GateKind {
    pub const ALL: [GateKind; 7] =
        [GateKind::H, GateKind::X, GateKind::Y, GateKind::Z, GateKind::S, GateKind::Cnot, GateKind::Bell];

    pub fn arity(self) -> usize {
        match self {
            GateKind::Cnot | GateKind::Bell => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Cnot => "cnot",
            GateKind::Bell => "bell",
        }
    }

    pub fn from_name(name: &str) -> Option<GateKind> {
        let lower = name.to_ascii_lowercase();
        GateKind::ALL.iter().copied().find(|k| k.name() == lower)
    }

    /// Conjugation rule `U† σ U` for each operand slot and letter.
    pub fn rule(self) -> &'static Rule {
        match self {
            GateKind::H => &H_RULE,
            GateKind::X => &X_RULE,
            GateKind::Y => &Y_RULE,
            GateKind::Z => &Z_RULE,
            GateKind::S => &S_RULE,
            GateKind::Cnot => &CNOT_RULE,
            GateKind::Bell => &BELL_RULE,
        }
    }
}

/// A signed product of letters on the operand slots.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Image {
    pub sign: i8,
    pub letters: [PauliLetter; 2],
}

const fn im(sign: i8, a: PauliLetter, b: PauliLetter) -> Image {
    Image { sign, letters: [a, b] }
}

/// `images[slot][c]` is the image of letter `c + 1` (X, Y, Z) on `slot`.
#[derive(Debug)]
pub struct Rule {
    pub arity: usize,
    pub images: [[Image; 3]; 2],
}

impl Rule {
    pub fn image(&self, slot: usize, letter: PauliLetter) -> Image {
        assert!(letter != I, "identity maps to identity");
        self.images[slot][letter.index() - 1]
    }
}

const UNUSED: [Image; 3] = [im(1, I, I), im(1, I, I), im(1, I, I)];

static H_RULE: Rule = Rule { arity: 1, images: [[im(1, Z, I), im(-1, Y, I), im(1, X, I)], UNUSED] };
static X_RULE: Rule = Rule { arity: 1, images: [[im(1, X, I), im(-1, Y, I), im(-1, Z, I)], UNUSED] };
static Y_RULE: Rule = Rule { arity: 1, images: [[im(-1, X, I), im(1, Y, I), im(-1, Z, I)], UNUSED] };
static Z_RULE: Rule = Rule { arity: 1, images: [[im(-1, X, I), im(-1, Y, I), im(1, Z, I)], UNUSED] };
static S_RULE: Rule = Rule { arity: 1, images: [[im(-1, Y, I), im(1, X, I), im(1, Z, I)], UNUSED] };
static CNOT_RULE: Rule =
    Rule { arity: 2, images: [[im(1, X, X), im(1, Y, X), im(1, Z, I)], [im(1, I, X), im(1, Z, Y), im(1, Z, Z)]] };
static BELL_RULE: Rule =
    Rule { arity: 2, images: [[im(1, Z, I), im(-1, Y, X), im(1, X, X)], [im(1, I, X), im(1, Z, Y), im(1, Z, Z)]] };

/// A gate applied to specific (0-based) qubits.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gate {
    kind: GateKind,
    operands: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, operands: Vec<usize>) -> Result<Gate> {
        if operands.len() != kind.arity() {
            return Err(Error::DimensionMismatch { left: kind.arity(), right: operands.len() });
        }
        if kind.arity() == 2 && operands[0] == operands[1] {
            return Err(Error::DuplicateOperands(operands[0]));
        }
        Ok(Gate { kind, operands })
    }

    fn one(kind: GateKind, q: usize) -> Gate {
        Gate { kind, operands: vec![q] }
    }

    fn two(kind: GateKind, a: usize, b: usize) -> Gate {
        assert_ne!(a, b, "two-qubit gate needs distinct operands");
        Gate { kind, operands: vec![a, b] }
    }

    pub fn h(q: usize) -> Gate {
        Self::one(GateKind::H, q)
    }
    pub fn x(q: usize) -> Gate {
        Self::one(GateKind::X, q)
    }
    pub fn y(q: usize) -> Gate {
        Self::one(GateKind::Y, q)
    }
    pub fn z(q: usize) -> Gate {
        Self::one(GateKind::Z, q)
    }
    pub fn s(q: usize) -> Gate {
        Self::one(GateKind::S, q)
    }
    /// Panics if `control == target`.
    pub fn cnot(control: usize, target: usize) -> Gate {
        Self::two(GateKind::Cnot, control, target)
    }
    /// Panics if `a == b`.
    pub fn bell(a: usize, b: usize) -> Gate {
        Self::two(GateKind::Bell, a, b)
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn operands(&self) -> &[usize] {
        &self.operands
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        for &q in &self.operands {
            if q >= n {
                return Err(Error::QubitOutOfRange { index: q, n });
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    /// Circuit-file syntax with 1-based labels.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        for q in &self.operands {
            write!(f, " {}", q + 1)?;
        }
        Ok(())
    }
}

impl Serialize for Gate {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{conjugate, gate_unitary};
    use crate::pauli::PauliSum;

    fn rule_image_sum(kind: GateKind, slot: usize, letter: PauliLetter) -> PauliSum {
        let img = kind.rule().image(slot, letter);
        let letters = img.letters[..kind.arity()].to_vec();
        PauliSum::term(crate::dyadic::ComplexDyadic::from_int(img.sign as i64), letters)
    }

    #[test]
    fn rules_match_dense_conjugation() {
        for kind in GateKind::ALL {
            let k = kind.arity();
            let operands: Vec<usize> = (0..k).collect();
            let u = gate_unitary(&Gate::new(kind, operands).unwrap(), k);
            for slot in 0..k {
                for letter in PauliLetter::NON_IDENTITY {
                    let p = PauliSum::single(k, slot, letter);
                    let dense = conjugate(&u, &p).unwrap();
                    assert_eq!(dense, rule_image_sum(kind, slot, letter), "{kind:?} slot {slot} {letter:?}");
                }
            }
        }
    }

    #[test]
    fn operand_checks() {
        assert!(matches!(Gate::new(GateKind::Cnot, vec![1, 1]), Err(Error::DuplicateOperands(1))));
        assert!(Gate::new(GateKind::H, vec![0, 1]).is_err());
        assert!(Gate::h(3).validate(2).is_err());
        assert_eq!(Gate::cnot(0, 1).to_string(), "cnot 1 2");
        assert_eq!(GateKind::from_name("BELL"), Some(GateKind::Bell));
    }
}
