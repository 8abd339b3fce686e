use std::f64::consts::FRAC_PI_4;

use crate::error::{Error, Result};
use crate::ir::{Circuit, Gate};
use crate::linalg::{cis, Mat2, ONE, UNITARY_TOLERANCE};

use super::euler::zyz_decompose;

/// Single-qubit gates this close to the identity are dropped.
const SKIP: f64 = 1e-14;

fn t_gate() -> Mat2 {
    Mat2::phase(FRAC_PI_4)
}

struct Expander {
    circuit: Circuit,
}

impl Expander {
    fn single(&mut self, target: usize, u: Mat2, label: &str) {
        if u.distance(&Mat2::IDENTITY) > SKIP {
            self.circuit.push(Gate::single(target, u).labelled(label));
        }
    }

    fn cnot(&mut self, control: usize, target: usize) {
        self.circuit.push(Gate::cnot(control, target));
    }

    /// Qubits that are neither controls nor target, usable as dirty ancillas.
    fn idle(&self, controls: &[usize], target: usize) -> Vec<usize> {
        (0..self.circuit.num_qubits)
            .filter(|q| *q != target && !controls.contains(q))
            .collect()
    }

    fn controlled(&mut self, controls: &[usize], target: usize, u: Mat2) {
        match controls {
            [] => self.single(target, u, "u"),
            [c] => self.singly_controlled(*c, target, u),
            _ if u == Mat2::X => self.mcx(controls, target),
            _ => self.square_root_step(controls, target, u),
        }
    }

    /// `C(u)` from `u = e^{ia} A X B X C` with `ABC = I`.
    fn singly_controlled(&mut self, control: usize, target: usize, u: Mat2) {
        if u == Mat2::X {
            return self.cnot(control, target);
        }
        let z = zyz_decompose(&u).expect("unitary checked on entry");
        let a = Mat2::rz(z.beta) * Mat2::ry(z.gamma / 2.0);
        let b = Mat2::ry(-z.gamma / 2.0) * Mat2::rz(-(z.delta + z.beta) / 2.0);
        let c = Mat2::rz((z.delta - z.beta) / 2.0);
        self.single(target, c, "c");
        self.cnot(control, target);
        self.single(target, b, "b");
        self.cnot(control, target);
        self.single(target, a, "a");
        if (cis(z.alpha) - ONE).norm() > SKIP {
            self.single(control, Mat2::phase(z.alpha), "p");
        }
    }

    /// `C^k(u)` through `C^1(v)`, `C^{k-1}(X)`, `C^1(v^dag)`, `C^{k-1}(X)`,
    /// `C^{k-1}(v)` with `v^2 = u`.
    fn square_root_step(&mut self, controls: &[usize], target: usize, u: Mat2) {
        let (&last, rest) = controls.split_last().expect("k >= 2");
        let v = u.sqrt_unitary();
        self.singly_controlled(last, target, v);
        self.mcx(rest, last);
        self.singly_controlled(last, target, v.adjoint());
        self.mcx(rest, last);
        self.controlled(rest, target, v);
    }

    fn toffoli(&mut self, a: usize, b: usize, t: usize) {
        let (h, tg) = (Mat2::hadamard(), t_gate());
        let tdg = tg.adjoint();
        self.single(t, h, "h");
        self.cnot(b, t);
        self.single(t, tdg, "tdg");
        self.cnot(a, t);
        self.single(t, tg, "t");
        self.cnot(b, t);
        self.single(t, tdg, "tdg");
        self.cnot(a, t);
        self.single(b, tg, "t");
        self.single(t, tg, "t");
        self.single(t, h, "h");
        self.cnot(a, b);
        self.single(a, tg, "t");
        self.single(b, tdg, "tdg");
        self.cnot(a, b);
    }

    fn mcx(&mut self, controls: &[usize], target: usize) {
        match controls {
            [] => self.circuit.push(Gate::x(target)),
            [c] => self.cnot(*c, target),
            [a, b] => self.toffoli(*a, *b, target),
            _ => {
                let m = controls.len();
                let dirty = self.idle(controls, target);
                if dirty.len() >= m - 2 {
                    self.toffoli_chain(controls, target, &dirty[..m - 2]);
                } else if let Some(&a) = dirty.first() {
                    let (g1, g2) = controls.split_at(m.div_ceil(2));
                    let mut g2a = g2.to_vec();
                    g2a.push(a);
                    self.mcx(g1, a);
                    self.mcx(&g2a, target);
                    self.mcx(g1, a);
                    self.mcx(&g2a, target);
                } else {
                    self.square_root_step(controls, target, Mat2::X);
                }
            }
        }
    }

    /// `m`-controlled X from `4(m-2)` Toffolis on `m-2` dirty ancillas,
    /// which are returned to their initial state.
    fn toffoli_chain(&mut self, c: &[usize], target: usize, anc: &[usize]) {
        let m = c.len();
        let descend = |e: &mut Self| {
            for k in (2..m - 1).rev() {
                e.toffoli(c[k], anc[k - 2], anc[k - 1]);
            }
        };
        let ascend = |e: &mut Self| {
            for k in 2..m - 1 {
                e.toffoli(c[k], anc[k - 2], anc[k - 1]);
            }
        };
        self.toffoli(c[m - 1], anc[m - 3], target);
        descend(self);
        self.toffoli(c[0], c[1], anc[0]);
        ascend(self);
        self.toffoli(c[m - 1], anc[m - 3], target);
        descend(self);
        self.toffoli(c[0], c[1], anc[0]);
        ascend(self);
    }
}

/// Expands `C^k(u)` on a `num_qubits` register into CNOTs and single-qubit
/// gates. Qubits outside `controls` and `target` may be borrowed as dirty
/// ancillas; they are always restored.
pub fn expand_multicontrolled(controls: &[usize], target: usize, u: &Mat2, num_qubits: usize) -> Result<Circuit> {
    let residual = u.unitarity_residual();
    if !u.is_finite() || residual > UNITARY_TOLERANCE {
        return Err(Error::NotUnitary { residual });
    }
    for &q in controls.iter().chain([&target]) {
        if q >= num_qubits {
            return Err(Error::QubitOutOfRange { index: q, num_qubits });
        }
    }
    for (k, c) in controls.iter().enumerate() {
        if *c == target || controls[..k].contains(c) {
            return Err(Error::QubitClash(*c));
        }
    }
    let mut e = Expander {
        circuit: Circuit::new(num_qubits),
    };
    e.controlled(controls, target, *u);
    Ok(e.circuit)
}
