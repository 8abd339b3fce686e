use super::{Mat2, SquareMatrix, UNITARY_TOLERANCE};
use crate::error::{Error, Result};

/// A `dim x dim` unitary that acts as `block` on basis states `i < j` and as
/// the identity elsewhere.
///
/// `block[0][0]` sits at `(i, i)`, `block[0][1]` at `(i, j)`, `block[1][0]` at
/// `(j, i)` and `block[1][1]` at `(j, j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoLevelUnitary {
    dim: usize,
    i: usize,
    j: usize,
    block: Mat2,
}

impl TwoLevelUnitary {
    pub fn new(dim: usize, i: usize, j: usize, block: Mat2) -> Result<Self> {
        if !(i < j && j < dim) {
            return Err(Error::TwoLevelIndex { dim, i, j });
        }
        let residual = block.unitarity_residual();
        if !block.is_finite() || residual > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { residual });
        }
        Ok(TwoLevelUnitary { dim, i, j, block })
    }

    /// The permutation exchanging basis states `i` and `j`.
    pub fn swap(dim: usize, i: usize, j: usize) -> Result<Self> {
        let (i, j) = (i.min(j), i.max(j));
        Self::new(dim, i, j, Mat2::X)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn indices(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn block(&self) -> Mat2 {
        self.block
    }

    pub fn adjoint(&self) -> Self {
        TwoLevelUnitary {
            block: self.block.adjoint(),
            ..self.clone()
        }
    }

    pub fn embed(&self) -> SquareMatrix {
        let mut m = SquareMatrix::identity(self.dim);
        let (i, j) = (self.i, self.j);
        m[(i, i)] = self.block.get(0, 0);
        m[(i, j)] = self.block.get(0, 1);
        m[(j, i)] = self.block.get(1, 0);
        m[(j, j)] = self.block.get(1, 1);
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unitary2;
    use rand::SeedableRng;

    #[test]
    fn swap_embedding_is_permutation() {
        let m = TwoLevelUnitary::new(4, 1, 3, Mat2::X).unwrap().embed();
        assert!(m.is_permutation());
        assert_eq!(m[(1, 3)], Mat2::X.get(0, 1));
        assert_eq!(m[(3, 1)], Mat2::X.get(1, 0));
        assert_eq!(m[(0, 0)], Mat2::IDENTITY.get(0, 0));
    }

    #[test]
    fn degenerate_embedding_is_the_block() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let u = random_unitary2(&mut rng);
        assert_eq!(TwoLevelUnitary::new(2, 0, 1, u).unwrap().embed(), u.to_matrix());
    }

    #[test]
    fn embedding_is_unitary() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(12);
        for (i, j) in [(0, 5), (3, 63), (17, 18)] {
            let t = TwoLevelUnitary::new(64, i, j, random_unitary2(&mut rng)).unwrap();
            assert!(t.embed().unitarity_residual() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_indices_and_blocks() {
        assert!(TwoLevelUnitary::new(4, 2, 2, Mat2::X).is_err());
        assert!(TwoLevelUnitary::new(4, 3, 1, Mat2::X).is_err());
        assert!(TwoLevelUnitary::new(4, 1, 4, Mat2::X).is_err());
        assert!(TwoLevelUnitary::new(4, 0, 1, Mat2::real(1.0, 1.0, 0.0, 1.0)).is_err());
    }
}
