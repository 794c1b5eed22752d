//! Circuits and the line-oriented circuit file format.
//!
//! ```text
//! # Bell pair
//! qubits 2
//! h 1
//! cnot 1 2
//! ancilla
//! ```
//!
//! Keywords are case-insensitive and qubit labels are 1-based. `ancilla`
//! appends a fresh qubit whose label is one past the current register.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::gates::{Gate, GateKind};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Step {
    Gate(Gate),
    AddAncilla,
}

impl Serialize for Step {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Gate(g) => write!(f, "{g}"),
            Step::AddAncilla => write!(f, "ancilla"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize)]
pub struct Circuit {
    initial_qubits: usize,
    steps: Vec<Step>,
}

impl Circuit {
    pub fn new(initial_qubits: usize, steps: Vec<Step>) -> Circuit {
        Circuit { initial_qubits, steps }
    }

    pub fn from_gates(initial_qubits: usize, gates: impl IntoIterator<Item = Gate>) -> Circuit {
        Circuit { initial_qubits, steps: gates.into_iter().map(Step::Gate).collect() }
    }

    pub fn initial_qubits(&self) -> usize {
        self.initial_qubits
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn push(&mut self, step: Step) {
        self.steps.push(step);
    }

    /// Register size after all ancilla allocations.
    pub fn final_qubits(&self) -> usize {
        self.initial_qubits + self.steps.iter().filter(|s| matches!(s, Step::AddAncilla)).count()
    }

    /// Register size just before step `k` (0-based).
    pub fn qubits_before(&self, k: usize) -> usize {
        self.initial_qubits + self.steps[..k].iter().filter(|s| matches!(s, Step::AddAncilla)).count()
    }

    /// Renders back to the file format.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.initial_qubits);
        for s in &self.steps {
            out.push_str(&s.to_string());
            out.push('\n');
        }
        out
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
pub enum ParseErrorKind {
    #[error("expected `qubits N` before any step")]
    MissingHeader,
    #[error("`qubits` declared twice")]
    DuplicateHeader,
    #[error("register must have at least one qubit")]
    EmptyRegister,
    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("`{gate}` takes {expected} operand(s), found {found}")]
    BadArity { gate: String, expected: usize, found: usize },
    #[error("invalid qubit label `{0}`")]
    BadLabel(String),
    #[error("qubit {label} out of range (register has {available})")]
    QubitOutOfRange { label: usize, available: usize },
    #[error("duplicate operand {0}")]
    DuplicateOperands(usize),
}

#[derive(Clone, PartialEq, Eq, Debug, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

/// Parses the circuit file format.
pub fn parse_circuit(text: &str) -> Result<Circuit, ParseError> {
    let mut initial: Option<usize> = None;
    let mut current = 0usize;
    let mut steps = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some(&(col0, head)) = tokens.first() else { continue };
        let err = |column: usize, kind: ParseErrorKind| ParseError { line, column, kind };
        let keyword = head.to_ascii_lowercase();
        let args = &tokens[1..];

        if keyword == "qubits" {
            if initial.is_some() {
                return Err(err(col0, ParseErrorKind::DuplicateHeader));
            }
            if args.len() != 1 {
                return Err(err(col0, ParseErrorKind::BadArity { gate: keyword, expected: 1, found: args.len() }));
            }
            let (c, t) = args[0];
            let n: usize = t.parse().map_err(|_| err(c, ParseErrorKind::BadLabel(t.to_string())))?;
            if n == 0 {
                return Err(err(c, ParseErrorKind::EmptyRegister));
            }
            initial = Some(n);
            current = n;
            continue;
        }
        if keyword == "ancilla" {
            if initial.is_none() {
                return Err(err(col0, ParseErrorKind::MissingHeader));
            }
            if !args.is_empty() {
                return Err(err(col0, ParseErrorKind::BadArity { gate: keyword, expected: 0, found: args.len() }));
            }
            steps.push(Step::AddAncilla);
            current += 1;
            continue;
        }
        let kind =
            GateKind::from_name(&keyword).ok_or_else(|| err(col0, ParseErrorKind::UnknownGate(head.to_string())))?;
        if args.len() != kind.arity() {
            return Err(err(
                col0,
                ParseErrorKind::BadArity { gate: keyword, expected: kind.arity(), found: args.len() },
            ));
        }
        let mut operands = Vec::with_capacity(args.len());
        for &(c, t) in args {
            let label: usize = t.parse().map_err(|_| err(c, ParseErrorKind::BadLabel(t.to_string())))?;
            if label == 0 {
                return Err(err(c, ParseErrorKind::QubitOutOfRange { label, available: current }));
            }
            if operands.contains(&(label - 1)) {
                return Err(err(c, ParseErrorKind::DuplicateOperands(label)));
            }
            operands.push(label - 1);
        }
        // syntax first, so a malformed gate is reported even without a header
        if initial.is_none() {
            return Err(err(col0, ParseErrorKind::MissingHeader));
        }
        for (&q, &(c, _)) in operands.iter().zip(args) {
            if q >= current {
                return Err(err(c, ParseErrorKind::QubitOutOfRange { label: q + 1, available: current }));
            }
        }
        steps.push(Step::Gate(Gate::new(kind, operands).expect("arity and distinctness checked")));
    }

    let initial = initial.ok_or(ParseError {
        line: text.lines().count().max(1),
        column: 1,
        kind: ParseErrorKind::MissingHeader,
    })?;
    Ok(Circuit::new(initial, steps))
}

/// Whitespace-separated tokens with their 1-based character columns.
fn tokenize(s: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (byte, ch)) in s.char_indices().enumerate() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some((col + 1, byte)),
            (true, Some((c, b))) => {
                out.push((c, &s[b..byte]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some((c, b)) = start {
        out.push((c, &s[b..]));
    }
    out
}
