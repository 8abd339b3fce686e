//! Dense state-vector simulation.
//!
//! Gates act in place by strided amplitude-pair updates; no gate matrix is
//! ever expanded to the full register except in [`circuit_to_matrix`].

use num_complex::Complex64;

use crate::cloning::{build_clone_states, build_input_state, CloneLabel, FLAG_QUBITS, SUCCESS_OUTCOME};
use crate::error::{Error, Result};
use crate::ir::{Circuit, Gate};
use crate::linalg::{cis, Mat2, SquareMatrix, StateVector, ONE, ZERO};

/// Post-selection probabilities below this count as "no amplitude".
pub const ZERO_PROBABILITY: f64 = 1e-14;

fn mask(num_qubits: usize, qubit: usize) -> usize {
    1 << (num_qubits - 1 - qubit)
}

fn check_qubits(g: &Gate, num_qubits: usize) -> Result<()> {
    let qubits = g.qubits();
    if let Some(&q) = qubits.iter().find(|&&q| q >= num_qubits) {
        return Err(Error::QubitOutOfRange { index: q, num_qubits });
    }
    for (k, q) in qubits.iter().enumerate() {
        if qubits[..k].contains(q) {
            return Err(Error::QubitClash(*q));
        }
    }
    Ok(())
}

fn apply_pairs(amps: &mut [Complex64], target: usize, controls: usize, u: &Mat2) {
    let [u00, u01, u10, u11] = u.0;
    for i in 0..amps.len() {
        if i & target != 0 || i & controls != controls {
            continue;
        }
        let j = i | target;
        let (a, b) = (amps[i], amps[j]);
        amps[i] = u00 * a + u01 * b;
        amps[j] = u10 * a + u11 * b;
    }
}

/// Applies `g` to raw amplitudes of a `num_qubits` register. The amplitudes
/// need not be normalized.
pub fn apply_gate_in_place(amps: &mut [Complex64], num_qubits: usize, g: &Gate) -> Result<()> {
    if amps.len() != 1 << num_qubits {
        return Err(Error::DimensionMismatch {
            left: amps.len(),
            right: 1 << num_qubits,
        });
    }
    check_qubits(g, num_qubits)?;
    match g {
        Gate::SingleQubit { target, u, .. } => apply_pairs(amps, mask(num_qubits, *target), 0, u),
        Gate::MultiControlled { controls, target, u, .. } => {
            let cmask = controls.iter().fold(0, |m, &c| m | mask(num_qubits, c));
            apply_pairs(amps, mask(num_qubits, *target), cmask, u);
        }
        Gate::Cnot { control, target } => {
            let (c, t) = (mask(num_qubits, *control), mask(num_qubits, *target));
            for i in 0..amps.len() {
                if i & c != 0 && i & t == 0 {
                    amps.swap(i, i | t);
                }
            }
        }
        Gate::GlobalPhase { phi } => {
            let z = cis(*phi);
            amps.iter_mut().for_each(|a| *a *= z);
        }
    }
    Ok(())
}

pub fn apply_gate(psi: &StateVector, g: &Gate) -> Result<StateVector> {
    let n = psi.num_qubits();
    let mut amps = psi.amplitudes().to_vec();
    apply_gate_in_place(&mut amps, n, g)?;
    Ok(StateVector::from_evolved(n, amps))
}

/// Runs a validated circuit over raw amplitudes.
pub fn run_circuit_in_place(c: &Circuit, amps: &mut [Complex64]) -> Result<()> {
    c.check()?;
    for g in &c.gates {
        apply_gate_in_place(amps, c.num_qubits, g)?;
    }
    Ok(())
}

pub fn run_circuit(c: &Circuit, psi0: &StateVector) -> Result<StateVector> {
    if psi0.num_qubits() != c.num_qubits {
        return Err(Error::DimensionMismatch {
            left: c.num_qubits,
            right: psi0.num_qubits(),
        });
    }
    let mut amps = psi0.amplitudes().to_vec();
    run_circuit_in_place(c, &mut amps)?;
    Ok(StateVector::from_evolved(c.num_qubits, amps))
}

/// The circuit's unitary; column `k` is the image of basis state `k`.
pub fn circuit_to_matrix(c: &Circuit) -> Result<SquareMatrix> {
    if c.num_qubits > 10 {
        return Err(Error::TooManyQubits(c.num_qubits, 10));
    }
    c.check()?;
    let dim = 1 << c.num_qubits;
    let mut m = SquareMatrix::zeros(dim);
    for k in 0..dim {
        let mut col = vec![ZERO; dim];
        col[k] = ONE;
        for g in &c.gates {
            apply_gate_in_place(&mut col, c.num_qubits, g)?;
        }
        m.set_column(k, &col);
    }
    Ok(m)
}

/// Projects `psi` onto `qubits == outcome`.
///
/// Returns the outcome probability and, unless it is below
/// [`ZERO_PROBABILITY`], the renormalized post-measurement state on the
/// full register.
pub fn postselect(psi: &StateVector, qubits: &[usize], outcome: &[u8]) -> Result<(f64, Option<StateVector>)> {
    if qubits.len() != outcome.len() {
        return Err(Error::DimensionMismatch {
            left: qubits.len(),
            right: outcome.len(),
        });
    }
    let n = psi.num_qubits();
    if let Some(&q) = qubits.iter().find(|&&q| q >= n) {
        return Err(Error::QubitOutOfRange { index: q, num_qubits: n });
    }
    let matches = |i: usize| {
        qubits
            .iter()
            .zip(outcome)
            .all(|(&q, &b)| (i & mask(n, q) != 0) == (b != 0))
    };
    let amps: Vec<Complex64> = psi
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, z)| if matches(i) { *z } else { ZERO })
        .collect();
    let p: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    if p < ZERO_PROBABILITY {
        return Ok((p, None));
    }
    Ok((p, Some(StateVector::normalized(amps)?)))
}

/// `|<a|b>|^2`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr())
}

/// How the cloning unitary is applied.
#[derive(Clone, Copy, Debug)]
pub enum Engine<'a> {
    Matrix(&'a SquareMatrix),
    Circuit(&'a Circuit),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentResult {
    pub label: CloneLabel,
    pub success_probability: f64,
    /// Fidelity of the post-selected `AB` state with `|h>|h>`.
    pub clone_fidelity: f64,
    pub failure_probability: f64,
    /// `AB` state on the most probable failure flag outcome.
    pub failure_ab_state: Option<StateVector>,
    /// Weight of `|0000>_AB` in the failure branch, summed over failure flags.
    pub failure_ab_ground_weight: f64,
}

/// Prepares `|h>|00>|00>`, evolves it and measures the flag.
pub fn clone_experiment(label: CloneLabel, engine: Engine<'_>) -> Result<ExperimentResult> {
    let input = build_input_state(label);
    let out = match engine {
        Engine::Matrix(u) => {
            let amps = u.mul_vec(input.amplitudes())?;
            StateVector::from_evolved(input.num_qubits(), amps)
        }
        Engine::Circuit(c) => run_circuit(c, &input)?,
    };
    let (success_probability, success) = postselect(&out, &FLAG_QUBITS, &SUCCESS_OUTCOME)?;
    let h = &build_clone_states()[label.index()].vec;
    let ideal = h.tensor(h).tensor(&StateVector::basis(2, 0));
    let clone_fidelity = match &success {
        Some(s) => fidelity(s, &ideal)?,
        None => 0.0,
    };

    // flag sits on the two least significant bits
    let amps = out.amplitudes();
    let flag_weight = |f: usize| (0..16).map(|ab| amps[ab * 4 + f].norm_sqr()).sum::<f64>();
    let failure_probability: f64 = (1..4).map(flag_weight).sum();
    let (failure_ab_state, failure_ab_ground_weight) = if failure_probability < ZERO_PROBABILITY {
        (None, 0.0)
    } else {
        let best = (1..4).max_by(|&a, &b| flag_weight(a).total_cmp(&flag_weight(b))).unwrap_or(1);
        let ab: Vec<Complex64> = (0..16).map(|k| amps[k * 4 + best]).collect();
        let ground: f64 = (1..4).map(|f| amps[f].norm_sqr()).sum();
        (Some(StateVector::normalized(ab)?), ground / failure_probability)
    };
    Ok(ExperimentResult {
        label,
        success_probability,
        clone_fidelity,
        failure_probability,
        failure_ab_state,
        failure_ab_ground_weight,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloning::{assemble_u, CloningTask};
    use crate::linalg::{random_state, random_unitary2, PhaseMode};
    use rand::{Rng, SeedableRng};

    fn basis_index(bits: &str) -> usize {
        usize::from_str_radix(bits, 2).unwrap()
    }

    #[test]
    fn x_on_last_qubit() {
        let psi = StateVector::basis(6, 0);
        let out = apply_gate(&psi, &Gate::x(5)).unwrap();
        assert_eq!(out, StateVector::basis(6, basis_index("000001")));
    }

    #[test]
    fn five_controlled_x_fires_only_on_all_ones() {
        let g = Gate::mcx(vec![0, 1, 2, 3, 4], 5);
        let on = apply_gate(&StateVector::basis(6, basis_index("111110")), &g).unwrap();
        assert_eq!(on, StateVector::basis(6, basis_index("111111")));
        let off = StateVector::basis(6, basis_index("011110"));
        assert_eq!(apply_gate(&off, &g).unwrap(), off);
    }

    #[test]
    fn controlled_u_with_zero_control_is_identity() {
        let g = Gate::controlled(vec![0, 2], 1, Mat2::hadamard());
        let psi = StateVector::basis(3, basis_index("001"));
        assert_eq!(apply_gate(&psi, &g).unwrap(), psi);
    }

    #[test]
    fn rejects_bad_indices() {
        let psi = StateVector::basis(2, 0);
        assert!(matches!(apply_gate(&psi, &Gate::x(2)), Err(Error::QubitOutOfRange { index: 2, .. })));
        assert!(matches!(apply_gate(&psi, &Gate::cnot(1, 1)), Err(Error::QubitClash(1))));
    }

    #[test]
    fn run_circuit_basics() {
        let psi = random_state(&mut rand::rngs::StdRng::seed_from_u64(1), 3);
        assert_eq!(run_circuit(&Circuit::new(3), &psi).unwrap(), psi);
        let xx = Circuit::with_gates(3, vec![Gate::x(0), Gate::x(0)]);
        assert_eq!(run_circuit(&xx, &psi).unwrap(), psi);
        assert!(run_circuit(&Circuit::new(2), &psi).is_err());
    }

    #[test]
    fn norm_is_preserved() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let mut psi = random_state(&mut rng, 5);
        for _ in 0..200 {
            let t = rng.random_range(0..5);
            let controls: Vec<usize> = (0..5).filter(|&q| q != t && rng.random_bool(0.4)).collect();
            let g = Gate::controlled(controls, t, random_unitary2(&mut rng));
            psi = apply_gate(&psi, &g).unwrap();
            assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn circuit_to_matrix_cases() {
        assert_eq!(circuit_to_matrix(&Circuit::new(3)).unwrap(), SquareMatrix::identity(8));
        let cnot = circuit_to_matrix(&Circuit::with_gates(2, vec![Gate::cnot(0, 1)])).unwrap();
        let expected = SquareMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        assert_eq!(cnot, expected);
        let phase = circuit_to_matrix(&Circuit::with_gates(1, vec![Gate::GlobalPhase { phi: 0.3 }])).unwrap();
        assert!(phase.distance(&SquareMatrix::identity(2).scale(cis(0.3)), PhaseMode::Exact).unwrap() < 1e-16);
    }

    #[test]
    fn linearity() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let gates = (0..40)
            .map(|_| {
                let t = rng.random_range(0..4);
                let controls: Vec<usize> = (0..4).filter(|&q| q != t && rng.random_bool(0.3)).collect();
                Gate::controlled(controls, t, random_unitary2(&mut rng))
            })
            .collect();
        let c = Circuit::with_gates(4, gates);
        let (psi, phi) = (random_state(&mut rng, 4), random_state(&mut rng, 4));
        let (a, b) = (Complex64::new(0.3, -1.2), Complex64::new(-0.7, 0.4));
        let mut mix: Vec<Complex64> = psi.amplitudes().iter().zip(phi.amplitudes()).map(|(x, y)| a * x + b * y).collect();
        run_circuit_in_place(&c, &mut mix).unwrap();
        let (rp, rf) = (run_circuit(&c, &psi).unwrap(), run_circuit(&c, &phi).unwrap());
        for (k, z) in mix.iter().enumerate() {
            let want = a * rp.amplitudes()[k] + b * rf.amplitudes()[k];
            assert!((z - want).norm() < 1e-10);
        }
    }

    #[test]
    fn postselect_cases() {
        let input = build_input_state(CloneLabel::H1);
        let (p, s) = postselect(&input, &[4, 5], &[0, 0]).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        assert_eq!(s.unwrap(), input);

        let u = assemble_u();
        let out = StateVector::new(u.mul_vec(build_input_state(CloneLabel::H2).amplitudes()).unwrap()).unwrap();
        let (p, s) = postselect(&out, &[4, 5], &[0, 0]).unwrap();
        assert!((p - 4.0 / 7.0).abs() < 1e-9);
        assert!((s.unwrap().norm_sqr() - 1.0).abs() < 1e-12);

        let phi2 = &CloningTask::standard().failure_states[1];
        let (p, s) = postselect(phi2, &[4, 5], &[0, 0]).unwrap();
        assert_eq!(p, 0.0);
        assert!(s.is_none());
        assert!(postselect(phi2, &[4], &[0, 0]).is_err());
    }

    #[test]
    fn fidelity_cases() {
        let psi = random_state(&mut rand::rngs::StdRng::seed_from_u64(4), 3);
        assert!((fidelity(&psi, &psi).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(fidelity(&StateVector::basis(2, 0), &StateVector::basis(2, 1)).unwrap(), 0.0);
        let s = build_clone_states();
        assert!((fidelity(&s[0].vec, &s[1].vec).unwrap() - 0.25).abs() < 1e-15);
        assert!(fidelity(&s[0].vec, &psi).is_err());
    }

    #[test]
    fn matrix_engine_reproduces_efficiencies() {
        let u = assemble_u();
        for (label, gamma) in CloneLabel::ALL.into_iter().zip([1.0 / 7.0, 4.0 / 7.0, 4.0 / 7.0]) {
            let r = clone_experiment(label, Engine::Matrix(&u)).unwrap();
            assert!((r.success_probability - gamma).abs() < 1e-9, "{r:?}");
            assert!((r.clone_fidelity - 1.0).abs() < 1e-9);
            assert!((r.success_probability + r.failure_probability - 1.0).abs() < 1e-9);
            let ab = r.failure_ab_state.unwrap();
            assert!((ab.amplitudes()[0].norm_sqr() - 1.0).abs() < 1e-9);
            assert!((r.failure_ab_ground_weight - 1.0).abs() < 1e-9);
        }
    }
}
