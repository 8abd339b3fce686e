//! Exact synthesis of a `2^n x 2^n` unitary into CNOTs and single-qubit gates.
//!
//! The pipeline has three stages: two-level factorization, Gray-code
//! lowering to fully controlled gates, and expansion of every controlled
//! gate into the elementary set. Each stage is checked against the input.

mod euler;
mod graycode;
mod multicontrolled;
mod two_level;

use serde::Serialize;

pub use euler::{zyz_decompose, ZyzAngles};
pub use graycode::graycode_lower;
pub use multicontrolled::expand_multicontrolled;
pub use two_level::{two_level_decompose, two_level_product};

use crate::error::{Error, Result};
use crate::ir::{Circuit, Gate, SynthesisReport};
use crate::linalg::{Mat2, PhaseMode, SquareMatrix, TwoLevelUnitary};
use crate::simulator::circuit_to_matrix;

pub const MAX_QUBITS: usize = 6;
pub const TWO_LEVEL_TOLERANCE: f64 = 1e-9;
pub const GRAYCODE_TOLERANCE: f64 = 1e-10;
pub const ELEMENTARY_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StageRecord {
    pub stage: &'static str,
    pub count: usize,
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct Synthesis {
    pub factors: Vec<TwoLevelUnitary>,
    pub multi_controlled: Circuit,
    pub circuit: Circuit,
    pub report: SynthesisReport,
    pub stages: Vec<StageRecord>,
}

impl Synthesis {
    /// True when every stage is within its tolerance.
    pub fn within_tolerance(&self) -> bool {
        let limits = [TWO_LEVEL_TOLERANCE, GRAYCODE_TOLERANCE, ELEMENTARY_TOLERANCE];
        self.stages.iter().zip(limits).all(|(s, tol)| s.residual <= tol)
    }
}

pub fn num_qubits_for(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { len: dim });
    }
    let n = dim.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::TooManyQubits(n, MAX_QUBITS));
    }
    Ok(n)
}

/// Merges runs of uncontrolled X gates so that back-to-back conjugations
/// left by the Gray-code walk cancel.
fn cancel_x_runs(c: Circuit) -> Circuit {
    let is_x = |g: &Gate| matches!(g, Gate::SingleQubit { u, .. } if *u == Mat2::X);
    let mut out = Circuit::new(c.num_qubits);
    let mut pending = vec![false; c.num_qubits];
    let flush = |out: &mut Circuit, pending: &mut Vec<bool>| {
        for (q, p) in pending.iter_mut().enumerate() {
            if std::mem::take(p) {
                out.push(Gate::x(q));
            }
        }
    };
    for g in c.gates {
        match g {
            Gate::SingleQubit { target, .. } if is_x(&g) => pending[target] ^= true,
            g => {
                flush(&mut out, &mut pending);
                out.push(g);
            }
        }
    }
    flush(&mut out, &mut pending);
    out
}

/// Lowers fully controlled gates to CNOTs and single-qubit gates.
pub fn expand_circuit(c: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(c.num_qubits);
    for g in &c.gates {
        match g {
            Gate::MultiControlled { controls, target, u, .. } => {
                out.gates
                    .extend(expand_multicontrolled(controls, *target, u, c.num_qubits)?.gates);
            }
            other => out.push(other.clone()),
        }
    }
    Ok(out)
}

pub fn synthesize(u: &SquareMatrix) -> Result<Synthesis> {
    let n = num_qubits_for(u.dim())?;
    let factors = two_level_decompose(u)?;
    let r1 = two_level_product(u.dim(), &factors)?.distance(u, PhaseMode::Exact)?;

    // the circuit applies the rightmost factor first
    let mut mc = Circuit::new(n);
    for t in factors.iter().rev() {
        mc.gates.extend(graycode_lower(t, n)?.gates);
    }
    let mc = cancel_x_runs(mc);
    let r2 = circuit_to_matrix(&mc)?.distance(u, PhaseMode::Exact)?;

    let circuit = expand_circuit(&mc)?;
    let r3 = circuit_to_matrix(&circuit)?.distance(u, PhaseMode::Exact)?;

    let mc_count = mc.stats().multi_controlled_count;
    let mut report = circuit.stats();
    report.two_level_count = factors.len();
    report.multi_controlled_count = mc_count;
    report.max_residual = r1.max(r2).max(r3);
    let stages = vec![
        StageRecord { stage: "two-level", count: factors.len(), residual: r1 },
        StageRecord { stage: "multi-controlled", count: mc_count, residual: r2 },
        StageRecord { stage: "elementary", count: circuit.len(), residual: r3 },
    ];
    Ok(Synthesis {
        factors,
        multi_controlled: mc,
        circuit,
        report,
        stages,
    })
}
