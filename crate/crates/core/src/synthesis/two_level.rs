use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{Mat2, SquareMatrix, TwoLevelUnitary, IDENTITY_TOLERANCE, ONE, UNITARY_TOLERANCE, ZERO};

/// Sub-diagonal entries at or below this magnitude are left alone.
const ELIMINATION_FLOOR: f64 = 1e-13;

fn unit_phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r > 0.0 {
        z / r
    } else {
        ONE
    }
}

/// Left-multiplies rows `i` and `j` of `m` by `g`.
fn rotate_rows(m: &mut SquareMatrix, i: usize, j: usize, g: &Mat2) {
    let [g00, g01, g10, g11] = g.0;
    for k in 0..m.dim() {
        let (a, b) = (m[(i, k)], m[(j, k)]);
        m[(i, k)] = g00 * a + g01 * b;
        m[(j, k)] = g10 * a + g11 * b;
    }
}

/// Right-multiplies columns `i` and `j` of `m` by `g`.
fn rotate_columns(m: &mut SquareMatrix, i: usize, j: usize, g: &Mat2) {
    let [g00, g01, g10, g11] = g.0;
    for k in 0..m.dim() {
        let (a, b) = (m[(k, i)], m[(k, j)]);
        m[(k, i)] = a * g00 + b * g10;
        m[(k, j)] = a * g01 + b * g11;
    }
}

/// Writes `u` as an ordered product `T_1 T_2 ... T_k` of two-level unitaries
/// with `k <= d(d-1)/2`.
///
/// Column `c` is cleared from the top down by rotations on the pair `(c, r)`;
/// each rotation is phased so the new diagonal entry `(r, r)` is real, which
/// makes a lone two-level input come back as a single factor. A leftover
/// diagonal phase is removed by a diagonal factor paired with the next row
/// that still needs fixing.
pub fn two_level_decompose(u: &SquareMatrix) -> Result<Vec<TwoLevelUnitary>> {
    let residual = u.unitarity_residual();
    if residual > UNITARY_TOLERANCE {
        return Err(Error::NotUnitary { residual });
    }
    let d = u.dim();
    if d == 1 {
        return if (u[(0, 0)] - ONE).norm() <= IDENTITY_TOLERANCE {
            Ok(Vec::new())
        } else {
            Err(Error::Unsupported("a 1x1 phase has no two-level factor".into()))
        };
    }

    let mut m = u.clone();
    let mut steps: Vec<(usize, usize, Mat2)> = Vec::new();
    for c in 0..d {
        for r in c + 1..d {
            let b = m[(r, c)];
            if b.norm() <= ELIMINATION_FLOOR {
                continue;
            }
            let a = m[(c, c)];
            let n = a.norm().hypot(b.norm());
            let (a, b) = (a / n, b / n);
            let rr = -b * m[(c, r)] + a * m[(r, r)];
            let ph = unit_phase(rr).conj();
            let g = Mat2::new(a.conj(), b.conj(), -b * ph, a * ph);
            rotate_rows(&mut m, c, r, &g);
            m[(r, c)] = ZERO;
            steps.push((c, r, g));
        }
        let a = m[(c, c)];
        if (a - ONE).norm() <= ELIMINATION_FLOOR {
            continue;
        }
        let (i, j, g) = if c + 1 < d {
            let partner = (c + 1..d)
                .find(|&r| (m[(r, r)] - ONE).norm() > ELIMINATION_FLOOR)
                .unwrap_or(c + 1);
            let fix = unit_phase(m[(partner, partner)]).conj();
            (c, partner, Mat2::new(unit_phase(a).conj(), ZERO, ZERO, fix))
        } else {
            (c - 1, c, Mat2::new(ONE, ZERO, ZERO, unit_phase(a).conj()))
        };
        rotate_rows(&mut m, i, j, &g);
        steps.push((i, j, g));
    }

    steps
        .into_iter()
        .map(|(i, j, g)| TwoLevelUnitary::new(d, i, j, g.adjoint()))
        .collect()
}

/// The ordered product `T_1 T_2 ... T_k`.
pub fn two_level_product(dim: usize, factors: &[TwoLevelUnitary]) -> Result<SquareMatrix> {
    let mut m = SquareMatrix::identity(dim);
    for t in factors {
        if t.dim() != dim {
            return Err(Error::DimensionMismatch { left: dim, right: t.dim() });
        }
        let (i, j) = t.indices();
        rotate_columns(&mut m, i, j, &t.block());
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cloning::assemble_u;
    use crate::linalg::{random_unitary, PhaseMode};
    use proptest::prelude::*;
    use rand::SeedableRng;

    fn roundtrip(u: &SquareMatrix) -> (usize, f64) {
        let f = two_level_decompose(u).unwrap();
        let p = two_level_product(u.dim(), &f).unwrap();
        (f.len(), p.distance(u, PhaseMode::Exact).unwrap())
    }

    #[test]
    fn identity_has_no_factors() {
        assert!(two_level_decompose(&SquareMatrix::identity(8)).unwrap().is_empty());
        assert!(two_level_decompose(&SquareMatrix::identity(1)).unwrap().is_empty());
    }

    #[test]
    fn one_by_one_phase_is_unsupported() {
        let m = SquareMatrix::identity(1).scale(Complex64::new(0.0, 1.0));
        assert!(matches!(two_level_decompose(&m), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rejects_non_unitary() {
        let m = SquareMatrix::identity(4).scale(Complex64::new(2.0, 0.0));
        assert!(matches!(two_level_decompose(&m), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn single_two_level_input_is_a_fixed_point() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for (i, j) in [(0, 1), (2, 7), (3, 20), (62, 63), (0, 63)] {
            let dim = if j < 8 { 8 } else { 64 };
            let t = TwoLevelUnitary::new(dim, i, j, crate::linalg::random_unitary2(&mut rng)).unwrap();
            let f = two_level_decompose(&t.embed()).unwrap();
            assert!(f.len() <= 1);
            assert!(f[0].embed().distance(&t.embed(), PhaseMode::Exact).unwrap() < 1e-12);
        }
    }

    #[test]
    fn diagonal_phases() {
        let mut m = SquareMatrix::identity(4);
        m[(0, 0)] = Complex64::new(0.0, 1.0);
        m[(3, 3)] = Complex64::new(0.0, -1.0);
        let (k, err) = roundtrip(&m);
        assert!(k <= 2 && err < 1e-15);
        let mut last = SquareMatrix::identity(4);
        last[(3, 3)] = Complex64::new(-1.0, 0.0);
        let (k, err) = roundtrip(&last);
        assert!(k == 1 && err < 1e-15);
    }

    #[test]
    fn random_eight_by_eight() {
        let u = random_unitary(&mut rand::rngs::StdRng::seed_from_u64(6), 8);
        let (k, err) = roundtrip(&u);
        assert!(k <= 28);
        assert!(err < 1e-9);
    }

    #[test]
    fn assembled_cloning_unitary() {
        let (k, err) = roundtrip(&assemble_u());
        assert!(k <= 2016);
        assert!(err < 1e-9);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn product_reproduces_input(seed in any::<u64>(), n in 1usize..=4) {
            let d = 1 << n;
            let u = random_unitary(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed), d);
            let (k, err) = roundtrip(&u);
            prop_assert!(k <= d * (d - 1) / 2);
            prop_assert!(err < 1e-9);
        }
    }
}
