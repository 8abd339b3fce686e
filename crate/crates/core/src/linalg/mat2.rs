use std::ops::Mul;

use num_complex::Complex64;

use super::{cis, SquareMatrix, ONE, ZERO};

/// A 2x2 complex matrix in row-major order `[u00, u01, u10, u11]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2(pub [Complex64; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([ONE, ZERO, ZERO, ONE]);
    pub const X: Mat2 = Mat2([ZERO, ONE, ONE, ZERO]);

    pub fn new(u00: Complex64, u01: Complex64, u10: Complex64, u11: Complex64) -> Self {
        Mat2([u00, u01, u10, u11])
    }

    pub fn real(u00: f64, u01: f64, u10: f64, u11: f64) -> Self {
        Mat2([u00, u01, u10, u11].map(|x| Complex64::new(x, 0.0)))
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Mat2::real(h, h, h, -h)
    }

    /// `Rz(theta) = diag(e^{-i theta/2}, e^{i theta/2})`.
    pub fn rz(theta: f64) -> Self {
        Mat2([cis(-theta / 2.0), ZERO, ZERO, cis(theta / 2.0)])
    }

    /// `Ry(theta) = [[cos theta/2, -sin theta/2], [sin theta/2, cos theta/2]]`.
    pub fn ry(theta: f64) -> Self {
        let (s, c) = (theta / 2.0).sin_cos();
        Mat2::real(c, -s, s, c)
    }

    /// `diag(1, e^{i theta})`.
    pub fn phase(theta: f64) -> Self {
        Mat2([ONE, ZERO, ZERO, cis(theta)])
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[2 * row + col]
    }

    pub fn adjoint(&self) -> Self {
        let [a, b, c, d] = self.0;
        Mat2([a.conj(), c.conj(), b.conj(), d.conj()])
    }

    pub fn det(&self) -> Complex64 {
        let [a, b, c, d] = self.0;
        a * d - b * c
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0] + self.0[3]
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Mat2(self.0.map(|z| z * k))
    }

    /// Conjugation by X: swaps the roles of the two basis states.
    pub fn swap_basis(&self) -> Self {
        let [a, b, c, d] = self.0;
        Mat2([d, c, b, a])
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Max-abs entry of `u^dag u - I`.
    pub fn unitarity_residual(&self) -> f64 {
        (self.adjoint() * *self).distance(&Mat2::IDENTITY)
    }

    /// Max-abs entrywise difference.
    pub fn distance(&self, other: &Mat2) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn to_matrix(&self) -> SquareMatrix {
        SquareMatrix::from_vec(2, self.0.to_vec()).expect("four entries")
    }

    /// Principal square root: `r * r == self` for unitary `self`.
    ///
    /// The matrix is written as `e^{i alpha} v` with `det v = 1` and
    /// `Re tr v >= 0` (flipping the sign of `v` into `alpha` if needed), so the
    /// eigenphases of `v` lie in `[-pi/2, pi/2]` and the closed form
    /// `sqrt(v) = (v + I) / (2 cos(theta/2))` is always well conditioned.
    pub fn sqrt_unitary(&self) -> Mat2 {
        let mut alpha = self.det().arg() / 2.0;
        let mut v = self.scale(cis(-alpha));
        if v.trace().re < 0.0 {
            v = v.scale(-ONE);
            alpha += std::f64::consts::PI;
        }
        let cos_theta = (v.trace().re / 2.0).clamp(-1.0, 1.0);
        let half = ((1.0 + cos_theta) / 2.0).sqrt();
        let [a, b, c, d] = v.0;
        let root = Mat2([a + ONE, b, c, d + ONE]).scale(Complex64::new(0.5 / half, 0.0));
        root.scale(cis(alpha / 2.0))
    }
}

impl Mul for Mat2 {
    type Output = Mat2;

    fn mul(self, rhs: Mat2) -> Mat2 {
        let [a, b, c, d] = self.0;
        let [e, f, g, h] = rhs.0;
        Mat2([a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary2;
    use rand::SeedableRng;

    #[test]
    fn named_gates_are_unitary() {
        for m in [Mat2::X, Mat2::hadamard(), Mat2::rz(0.3), Mat2::ry(-1.1), Mat2::phase(2.0)] {
            assert!(m.unitarity_residual() < 1e-15);
        }
        assert!((Mat2::X * Mat2::X).distance(&Mat2::IDENTITY) == 0.0);
    }

    #[test]
    fn sqrt_of_special_cases() {
        let minus_id = Mat2::IDENTITY.scale(-ONE);
        for u in [Mat2::X, Mat2::IDENTITY, minus_id, Mat2::hadamard(), Mat2::real(0.0, 1.0, -1.0, 0.0)] {
            let r = u.sqrt_unitary();
            assert!((r * r).distance(&u) < 1e-14, "{u:?}");
            assert!(r.unitarity_residual() < 1e-14);
        }
    }

    #[test]
    fn sqrt_of_random_unitaries() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..500 {
            let u = random_unitary2(&mut rng);
            let r = u.sqrt_unitary();
            assert!((r * r).distance(&u) < 1e-13);
        }
    }
}
