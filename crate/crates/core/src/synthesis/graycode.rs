use crate::error::{Error, Result};
use crate::ir::{Circuit, Gate};
use crate::linalg::{Mat2, TwoLevelUnitary};

fn bit(index: usize, num_qubits: usize, qubit: usize) -> bool {
    index >> (num_qubits - 1 - qubit) & 1 == 1
}

/// Pushes `u` on `target` controlled on every other qubit matching `pattern`;
/// zero-valued controls are conjugated by X.
fn push_pattern_controlled(c: &mut Circuit, pattern: usize, target: usize, u: Mat2) {
    let n = c.num_qubits;
    let controls: Vec<usize> = (0..n).filter(|&q| q != target).collect();
    let zeros: Vec<usize> = controls.iter().copied().filter(|&q| !bit(pattern, n, q)).collect();
    zeros.iter().for_each(|&q| c.push(Gate::x(q)));
    c.push(if u == Mat2::X {
        Gate::mcx(controls, target)
    } else {
        Gate::controlled(controls, target, u)
    });
    zeros.iter().for_each(|&q| c.push(Gate::x(q)));
}

/// Lowers a two-level unitary on `n` qubits to fully controlled gates.
///
/// Basis state `i` is walked towards `j` along a Gray path that flips the
/// differing bits from the most significant qubit down. Every step but the
/// last is a fully controlled X; the block acts on the last step, and the
/// walk is then undone.
pub fn graycode_lower(t: &TwoLevelUnitary, num_qubits: usize) -> Result<Circuit> {
    if num_qubits == 0 || t.dim() != 1 << num_qubits {
        return Err(Error::DimensionMismatch {
            left: t.dim(),
            right: 1usize.checked_shl(num_qubits as u32).unwrap_or(0),
        });
    }
    let (i, j) = t.indices();
    let flips: Vec<usize> = (0..num_qubits).filter(|&q| bit(i ^ j, num_qubits, q)).collect();
    let (&last, walk) = flips.split_last().expect("i != j");

    let mut c = Circuit::new(num_qubits);
    let mut at = i;
    let mut steps = Vec::with_capacity(walk.len());
    for &q in walk {
        push_pattern_controlled(&mut c, at, q, Mat2::X);
        steps.push((at, q));
        at ^= 1 << (num_qubits - 1 - q);
    }
    let block = if bit(at, num_qubits, last) { t.block().swap_basis() } else { t.block() };
    push_pattern_controlled(&mut c, at, last, block);
    for &(from, q) in steps.iter().rev() {
        push_pattern_controlled(&mut c, from, q, Mat2::X);
    }
    Ok(c)
}
