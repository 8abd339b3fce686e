use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{cis, Mat2, SquareMatrix, StateVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Random unitary from Gram-Schmidt orthonormalization of the columns of a
/// complex Gaussian matrix (two passes for numerical stability).
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> SquareMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..dim)
        .map(|_| (0..dim).map(|_| gaussian(rng)).collect())
        .collect();
    for k in 0..dim {
        for _ in 0..2 {
            for j in 0..k {
                let overlap: Complex64 = cols[j].iter().zip(&cols[k]).map(|(a, b)| a.conj() * b).sum();
                let (done, rest) = cols.split_at_mut(k);
                for (x, q) in rest[0].iter_mut().zip(&done[j]) {
                    *x -= overlap * q;
                }
            }
        }
        let norm = cols[k].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols[k].iter_mut().for_each(|z| *z /= norm);
    }
    SquareMatrix::from_fn(dim, |r, c| cols[c][r])
}

/// Random 2x2 unitary `e^{ia} Rz(b) Ry(c) Rz(d)` with uniformly drawn angles.
pub fn random_unitary2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let tau = std::f64::consts::TAU;
    let [a, b, c, d]: [f64; 4] = std::array::from_fn(|_| rng.random_range(-tau..tau));
    (Mat2::rz(b) * Mat2::ry(c) * Mat2::rz(d)).scale(cis(a))
}

pub fn random_state<R: Rng + ?Sized>(rng: &mut R, num_qubits: usize) -> StateVector {
    let amps: Vec<Complex64> = (0..1usize << num_qubits).map(|_| gaussian(rng)).collect();
    StateVector::normalized(amps).expect("gaussian vector is nonzero")
}
