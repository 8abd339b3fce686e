use crate::error::{Error, Result};
use crate::linalg::{cis, Mat2, UNITARY_TOLERANCE};

/// Below this magnitude a matrix entry is treated as zero when reading angles.
const DEGENERATE: f64 = 1e-14;

/// `u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZyzAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl ZyzAngles {
    pub fn to_mat2(&self) -> Mat2 {
        (Mat2::rz(self.beta) * Mat2::ry(self.gamma) * Mat2::rz(self.delta)).scale(cis(self.alpha))
    }
}

pub fn zyz_decompose(u: &Mat2) -> Result<ZyzAngles> {
    let residual = u.unitarity_residual();
    if !u.is_finite() || residual > UNITARY_TOLERANCE {
        return Err(Error::NotUnitary { residual });
    }
    let alpha = u.det().arg() / 2.0;
    let v = u.scale(cis(-alpha));
    let (v00, v10, v11) = (v.get(0, 0), v.get(1, 0), v.get(1, 1));
    let gamma = 2.0 * v10.norm().atan2(v00.norm());
    let (beta, delta) = if v10.norm() <= DEGENERATE {
        (2.0 * v11.arg(), 0.0)
    } else if v00.norm() <= DEGENERATE {
        (2.0 * v10.arg(), 0.0)
    } else {
        (v11.arg() + v10.arg(), v11.arg() - v10.arg())
    };
    Ok(ZyzAngles { alpha, beta, gamma, delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary2;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use std::f64::consts::PI;

    #[test]
    fn hadamard_angles() {
        let a = zyz_decompose(&Mat2::hadamard()).unwrap();
        assert!(a.to_mat2().distance(&Mat2::hadamard()) < 1e-14);
        assert!((a.gamma - PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn rz_has_no_y_rotation() {
        let a = zyz_decompose(&Mat2::rz(0.7)).unwrap();
        assert_eq!(a.gamma, 0.0);
        assert!(a.to_mat2().distance(&Mat2::rz(0.7)) < 1e-14);
    }

    #[test]
    fn identity_and_pauli_x() {
        assert!(zyz_decompose(&Mat2::IDENTITY).unwrap().to_mat2().distance(&Mat2::IDENTITY) < 1e-15);
        let x = zyz_decompose(&Mat2::X).unwrap();
        assert!((x.gamma - PI).abs() < 1e-15);
        assert!(x.to_mat2().distance(&Mat2::X) < 1e-15);
    }

    #[test]
    fn rejects_non_unitary() {
        assert!(matches!(zyz_decompose(&Mat2::real(1.0, 1.0, 0.0, 1.0)), Err(Error::NotUnitary { .. })));
        assert!(zyz_decompose(&Mat2::real(f64::NAN, 0.0, 0.0, 1.0)).is_err());
    }

    proptest! {
        #[test]
        fn reconstructs_random_unitaries(seed in any::<u64>()) {
            let u = random_unitary2(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            let a = zyz_decompose(&u).unwrap();
            prop_assert!(a.to_mat2().distance(&u) < 1e-12);
        }
    }
}
