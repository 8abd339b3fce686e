//! Gate-level intermediate representation.
//!
//! Controls are positive (the gate fires when every control reads `|1>`);
//! negative controls are spelled out with explicit X conjugation.

mod text;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, UNITARY_TOLERANCE};

pub use text::{parse_circuit, serialize_circuit};

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    SingleQubit {
        target: usize,
        u: Mat2,
        label: Option<String>,
    },
    /// `u` on `target` iff every control qubit is `|1>`. With no controls
    /// this is just `u`.
    MultiControlled {
        controls: Vec<usize>,
        target: usize,
        u: Mat2,
        label: Option<String>,
    },
    Cnot {
        control: usize,
        target: usize,
    },
    /// Multiplies the whole state by `e^{i phi}`.
    GlobalPhase {
        phi: f64,
    },
}

impl Gate {
    pub fn single(target: usize, u: Mat2) -> Gate {
        Gate::SingleQubit {
            target,
            u,
            label: None,
        }
    }

    pub fn x(target: usize) -> Gate {
        Gate::single(target, Mat2::X).labelled("x")
    }

    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    pub fn controlled(controls: Vec<usize>, target: usize, u: Mat2) -> Gate {
        Gate::MultiControlled {
            controls,
            target,
            u,
            label: None,
        }
    }

    pub fn mcx(controls: Vec<usize>, target: usize) -> Gate {
        Gate::controlled(controls, target, Mat2::X)
    }

    /// Attaches a label; no-op for gates without one.
    pub fn labelled(mut self, name: &str) -> Gate {
        if let Gate::SingleQubit { label, .. } | Gate::MultiControlled { label, .. } = &mut self {
            *label = Some(name.to_string());
        }
        self
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            Gate::SingleQubit { label, .. } | Gate::MultiControlled { label, .. } => label.as_deref(),
            _ => None,
        }
    }

    /// Every qubit the gate touches, controls first.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::SingleQubit { target, .. } => vec![*target],
            Gate::MultiControlled { controls, target, .. } => {
                controls.iter().copied().chain(std::iter::once(*target)).collect()
            }
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::GlobalPhase { .. } => Vec::new(),
        }
    }

    fn violations(&self, num_qubits: usize) -> Vec<String> {
        let mut out = Vec::new();
        let qubits = self.qubits();
        if qubits.iter().any(|&q| q >= num_qubits) {
            out.push("qubit index out of range".to_string());
        }
        match self {
            Gate::Cnot { control, target } if control == target => {
                out.push("control equals target".to_string());
            }
            Gate::MultiControlled { controls, target, .. } => {
                if controls.contains(target) {
                    out.push("control equals target".to_string());
                }
                let mut sorted = controls.clone();
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    out.push("duplicate control".to_string());
                }
            }
            Gate::GlobalPhase { phi } if !phi.is_finite() => {
                out.push("non-finite phase".to_string());
            }
            _ => {}
        }
        if let Gate::SingleQubit { u, .. } | Gate::MultiControlled { u, .. } = self {
            let residual = u.unitarity_residual();
            if !u.is_finite() || residual > UNITARY_TOLERANCE {
                out.push(format!("non-unitary matrix (residual {residual:e})"));
            }
        }
        if let Some(label) = self.label() {
            if label.is_empty() || !label.chars().all(|c| c.is_ascii_alphanumeric() || "_-.".contains(c)) {
                out.push(format!("invalid label `{label}`"));
            }
        }
        out
    }
}

/// One invariant violation, tagged with the offending gate's position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub gate: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at gate {}", self.message, self.gate)
    }
}

/// An ordered gate list; gates apply left to right.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(num_qubits: usize, gates: Vec<Gate>) -> Self {
        Circuit { num_qubits, gates }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Every invariant violation; an empty list means the circuit is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.num_qubits == 0 {
            out.push(Violation {
                gate: 0,
                message: "circuit has no qubits".to_string(),
            });
        }
        for (k, g) in self.gates.iter().enumerate() {
            out.extend(g.violations(self.num_qubits).into_iter().map(|message| Violation { gate: k, message }));
        }
        out
    }

    /// Like [`Circuit::validate`] but fails on the first violation.
    pub fn check(&self) -> Result<()> {
        match self.validate().into_iter().next() {
            Some(v) => Err(Error::InvalidCircuit(v.to_string())),
            None => Ok(()),
        }
    }

    pub fn stats(&self) -> SynthesisReport {
        let mut report = SynthesisReport::default();
        for g in &self.gates {
            match g {
                Gate::SingleQubit { .. } => report.single_qubit_count += 1,
                Gate::MultiControlled { .. } => report.multi_controlled_count += 1,
                Gate::Cnot { .. } => report.cnot_count += 1,
                Gate::GlobalPhase { .. } => {}
            }
        }
        report
    }
}

/// Gate counts of a (possibly partially) lowered circuit.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SynthesisReport {
    pub two_level_count: usize,
    pub multi_controlled_count: usize,
    pub cnot_count: usize,
    pub single_qubit_count: usize,
    pub max_residual: f64,
}
