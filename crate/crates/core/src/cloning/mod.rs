//! The probabilistic-cloning instance on six qubits.
//!
//! Register layout (qubit 0 first): system `A` on qubits 0-1, blank copy `B`
//! on qubits 2-3, flag `P` on qubits 4-5. Cloning succeeded when the flag
//! reads `|00>`.

mod fixtures;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{SquareMatrix, StateVector, TwoLevelUnitary, UnitaryMatrix, ONE, ZERO};

pub use fixtures::{
    chain_side, core_block, expansion_blocks, permutation_chain_csv, ChainSide, PermutationFactor,
    PERMUTATION_CHAIN,
};

/// Residual bound for the cloning condition.
pub const CLONE_TOLERANCE: f64 = 1e-9;

/// Largest admissible disagreement between input and target inner products.
pub const GRAM_TOLERANCE: f64 = 1e-12;

pub const NUM_QUBITS: usize = 6;
pub const DIM: usize = 1 << NUM_QUBITS;
pub const FLAG_QUBITS: [usize; 2] = [4, 5];
pub const SUCCESS_OUTCOME: [u8; 2] = [0, 0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CloneLabel {
    H1,
    H2,
    H3,
}

impl CloneLabel {
    pub const ALL: [CloneLabel; 3] = [CloneLabel::H1, CloneLabel::H2, CloneLabel::H3];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn as_str(self) -> &'static str {
        ["h1", "h2", "h3"][self.index()]
    }
}

impl fmt::Display for CloneLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CloneLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CloneLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown state label `{s}` (expected h1, h2 or h3)")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CloneState {
    pub label: CloneLabel,
    pub vec: StateVector,
}

/// The three two-qubit states to be cloned.
pub fn build_clone_states() -> [CloneState; 3] {
    const SIGNS: [[f64; 4]; 3] = [[1.0, 1.0, -1.0, 1.0], [1.0, -1.0, 1.0, -1.0], [-1.0, 1.0, 1.0, -1.0]];
    CloneLabel::ALL.map(|label| CloneState {
        label,
        vec: StateVector::from_real(&SIGNS[label.index()].map(|s| s / 2.0)).expect("unit norm"),
    })
}

/// `|h> (x) |00>_B (x) |00>_P`.
pub fn build_input_state(label: CloneLabel) -> StateVector {
    let h = &build_clone_states()[label.index()].vec;
    h.tensor(&StateVector::basis(2, 0)).tensor(&StateVector::basis(2, 0))
}

/// The 18x18 core block.
pub fn build_v() -> SquareMatrix {
    core_block()
}

/// Product of the given permutation factors (1-based pairs), in order.
fn permutation_product<'a>(factors: impl Iterator<Item = &'a PermutationFactor>) -> SquareMatrix {
    factors.fold(SquareMatrix::identity(DIM), |acc, f| {
        let p = TwoLevelUnitary::swap(DIM, f.i - 1, f.j - 1).expect("fixture indices are in range");
        acc.mat_mul(&p.embed()).expect("same dimension")
    })
}

/// Left and right permutation products around the core block.
pub fn permutation_chains() -> (SquareMatrix, SquareMatrix) {
    (
        permutation_product(chain_side(ChainSide::Left)),
        permutation_product(chain_side(ChainSide::Right)),
    )
}

/// `U = L * diag(V, I_46) * R`.
///
/// Returned unchecked: a transcription error shows up as a failed
/// unitarity check or cloning verdict, never as a silent substitution.
pub fn assemble_u() -> SquareMatrix {
    let (left, right) = permutation_chains();
    let core = build_v().pad_identity(DIM - 18);
    left.mat_mul(&core)
        .and_then(|m| m.mat_mul(&right))
        .expect("all factors are 64x64")
}

/// The cloning problem: inputs, efficiencies, flag phases and failure states.
#[derive(Clone, Debug, PartialEq)]
pub struct CloningTask {
    pub states: [CloneState; 3],
    /// Initial state of the blank register `B`.
    pub sigma: StateVector,
    /// Initial state of the flag `P`.
    pub p0: StateVector,
    pub success_outcome: [u8; 2],
    pub gammas: [f64; 3],
    /// Sign of the success-branch flag state relative to `|00>`.
    pub success_flag_phase: [f64; 3],
    pub failure_states: [StateVector; 3],
}

impl CloningTask {
    /// The three-state task realized by the assembled 64x64 unitary.
    pub fn standard() -> Self {
        let ket = |bits: usize| StateVector::basis(NUM_QUBITS, bits);
        let amps = |v: StateVector| v.into_amplitudes();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // A and B in |0000>; flag |01> = index 1, |10> = index 2
        let phi1: Vec<Complex64> = amps(ket(1)).iter().zip(amps(ket(2))).map(|(a, b)| (a + b) * s).collect();
        let phi2: Vec<Complex64> = amps(ket(1)).iter().map(|a| -a).collect();
        let phi3: Vec<Complex64> = amps(ket(2)).iter().map(|a| -a).collect();
        CloningTask {
            states: build_clone_states(),
            sigma: StateVector::basis(2, 0),
            p0: StateVector::basis(2, 0),
            success_outcome: SUCCESS_OUTCOME,
            gammas: [1.0 / 7.0, 4.0 / 7.0, 4.0 / 7.0],
            success_flag_phase: [1.0, -1.0, -1.0],
            failure_states: [phi1, phi2, phi3].map(|v| StateVector::new(v).expect("unit norm")),
        }
    }

    /// `|h_i> |Sigma> |P0>`.
    pub fn input(&self, label: CloneLabel) -> StateVector {
        self.states[label.index()].vec.tensor(&self.sigma).tensor(&self.p0)
    }

    /// `sqrt(g) * phase * |h_i>|h_i>|00> + sqrt(1-g) * |Phi_i>`.
    pub fn target(&self, label: CloneLabel) -> StateVector {
        let i = label.index();
        let h = &self.states[i].vec;
        let success = h.tensor(h).tensor(&StateVector::basis(2, 0));
        let (a, b) = (
            self.gammas[i].sqrt() * self.success_flag_phase[i],
            (1.0 - self.gammas[i]).sqrt(),
        );
        let amps = success
            .amplitudes()
            .iter()
            .zip(self.failure_states[i].amplitudes())
            .map(|(s, f)| s * a + f * b)
            .collect();
        StateVector::normalized(amps).expect("nonzero target")
    }

    pub fn inputs(&self) -> [StateVector; 3] {
        CloneLabel::ALL.map(|l| self.input(l))
    }

    pub fn targets(&self) -> [StateVector; 3] {
        CloneLabel::ALL.map(|l| self.target(l))
    }

    /// Success-branch amplitude weight of every failure state (should be 0).
    pub fn failure_success_overlap(&self) -> f64 {
        self.failure_states
            .iter()
            .map(|phi| {
                phi.amplitudes()
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| k & 0b11 == 0)
                    .map(|(_, z)| z.norm_sqr())
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
    }
}

/// Matrix of pairwise inner products `<v_a|v_b>`.
pub fn gram_matrix(vectors: &[StateVector]) -> Vec<Vec<Complex64>> {
    vectors
        .iter()
        .map(|a| vectors.iter().map(|b| a.inner(b).expect("equal dimensions")).collect())
        .collect()
}

/// Largest entrywise difference between the input and target Gram matrices.
pub fn gram_discrepancy(task: &CloningTask) -> (f64, usize, usize) {
    let (gi, gt) = (gram_matrix(&task.inputs()), gram_matrix(&task.targets()));
    let mut worst = (0.0, 0, 0);
    for a in 0..3 {
        for b in 0..3 {
            let d = (gi[a][b] - gt[a][b]).norm();
            if d > worst.0 {
                worst = (d, a, b);
            }
        }
    }
    worst
}

#[derive(Clone, Debug, PartialEq)]
pub struct CloningVerdict {
    /// `max_k |(U input_i - target_i)_k|` per state.
    pub residuals: [f64; 3],
    /// Basis index where each residual is attained.
    pub worst_entries: [usize; 3],
    pub tolerance: f64,
    pub pass: bool,
}

pub fn verify_cloning_condition(u: &SquareMatrix, task: &CloningTask) -> Result<CloningVerdict> {
    verify_cloning_condition_with(u, task, CLONE_TOLERANCE)
}

pub fn verify_cloning_condition_with(u: &SquareMatrix, task: &CloningTask, tolerance: f64) -> Result<CloningVerdict> {
    if u.dim() != DIM {
        return Err(Error::DimensionMismatch {
            left: u.dim(),
            right: DIM,
        });
    }
    let mut residuals = [0.0; 3];
    let mut worst_entries = [0; 3];
    for label in CloneLabel::ALL {
        let out = u.mul_vec(task.input(label).amplitudes())?;
        let target = task.target(label);
        let (k, r) = out
            .iter()
            .zip(target.amplitudes())
            .map(|(a, b)| (a - b).norm())
            .enumerate()
            .fold((0, 0.0), |best, (k, r)| if r > best.1 { (k, r) } else { best });
        residuals[label.index()] = r;
        worst_entries[label.index()] = k;
    }
    Ok(CloningVerdict {
        residuals,
        worst_entries,
        tolerance,
        pass: residuals.iter().all(|&r| r <= tolerance),
    })
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn axpy(y: &mut [Complex64], a: Complex64, x: &[Complex64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Extends an orthonormal set to a basis of `C^dim` with standard basis
/// vectors, Gram-Schmidt with one reorthogonalization pass.
fn complete_basis(mut basis: Vec<Vec<Complex64>>, dim: usize) -> Vec<Vec<Complex64>> {
    for k in 0..dim {
        if basis.len() == dim {
            break;
        }
        let mut v = vec![ZERO; dim];
        v[k] = ONE;
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &v);
                axpy(&mut v, -c, q);
            }
        }
        let nv = norm(&v);
        if nv > 1e-6 {
            v.iter_mut().for_each(|z| *z /= nv);
            basis.push(v);
        }
    }
    basis
}

/// A unitary mapping every input of `task` exactly onto its target.
///
/// Inputs are orthonormalized by Gram-Schmidt; applying the same triangular
/// recombination to the targets yields a second orthonormal set (the Gram
/// matrices agree). Both sets are completed to full bases and the unitary is
/// `sum_k f_k e_k^dag`.
pub fn oracle_cloning_unitary(task: &CloningTask) -> Result<UnitaryMatrix> {
    let (worst, i, j) = gram_discrepancy(task);
    if worst > GRAM_TOLERANCE {
        let (gi, gt) = (gram_matrix(&task.inputs()), gram_matrix(&task.targets()));
        return Err(Error::GramMismatch {
            i,
            j,
            lhs: gi[i][j],
            rhs: gt[i][j],
        });
    }
    let mut es: Vec<Vec<Complex64>> = Vec::new();
    let mut fs: Vec<Vec<Complex64>> = Vec::new();
    for label in CloneLabel::ALL {
        let mut x = task.input(label).into_amplitudes();
        let mut y = task.target(label).into_amplitudes();
        for _ in 0..2 {
            for (e, f) in es.iter().zip(&fs) {
                let c = dot(e, &x);
                axpy(&mut x, -c, e);
                axpy(&mut y, -c, f);
            }
        }
        let r = norm(&x);
        if r < GRAM_TOLERANCE {
            continue;
        }
        x.iter_mut().for_each(|z| *z /= r);
        y.iter_mut().for_each(|z| *z /= r);
        es.push(x);
        fs.push(y);
    }
    let es = complete_basis(es, DIM);
    let fs = complete_basis(fs, DIM);
    let w = SquareMatrix::from_fn(DIM, |r, c| es.iter().zip(&fs).map(|(e, f)| f[r] * e[c].conj()).sum());
    UnitaryMatrix::new(w)
}
