use std::fmt::Write as _;
use std::ops::{Deref, Index, IndexMut};

use num_complex::Complex64;

use super::text::{format_complex, parse_complex};
use super::{ONE, UNITARY_TOLERANCE, ZERO};
use crate::error::{Error, Result};

/// How [`SquareMatrix::distance`] treats a global phase difference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseMode {
    Exact,
    UpToGlobalPhase,
}

/// Dense square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl SquareMatrix {
    pub fn zeros(dim: usize) -> Self {
        SquareMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for k in 0..dim {
            m[(k, k)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let data = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        SquareMatrix { dim, data }
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                left: data.len(),
                right: dim * dim,
            });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: k / dim,
                col: k % dim,
            });
        }
        Ok(SquareMatrix { dim, data })
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: bad.len(),
                right: dim,
            });
        }
        let data = rows
            .iter()
            .flatten()
            .map(|&x| Complex64::new(x, 0.0))
            .collect();
        Self::from_vec(dim, data)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.dim..(r + 1) * self.dim]
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        (0..self.dim).map(|r| self[(r, c)]).collect()
    }

    pub fn set_column(&mut self, c: usize, values: &[Complex64]) {
        for (r, v) in values.iter().enumerate() {
            self[(r, c)] = *v;
        }
    }

    pub fn mat_mul(&self, other: &SquareMatrix) -> Result<SquareMatrix> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                let orow = &mut out.data[i * n..(i + 1) * n];
                for (o, b) in orow.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> SquareMatrix {
        Self::from_fn(self.dim, |r, c| self[(c, r)].conj())
    }

    /// Kronecker product; `self` supplies the most significant index.
    pub fn kron(&self, other: &SquareMatrix) -> SquareMatrix {
        let (m, n) = (self.dim, other.dim);
        Self::from_fn(m * n, |r, c| self[(r / n, c / n)] * other[(r % n, c % n)])
    }

    /// Block-diagonal `diag(self, I_extra)`.
    pub fn pad_identity(&self, extra: usize) -> SquareMatrix {
        let n = self.dim;
        Self::from_fn(n + extra, |r, c| {
            if r < n && c < n {
                self[(r, c)]
            } else if r == c {
                ONE
            } else {
                ZERO
            }
        })
    }

    pub fn scale(&self, k: Complex64) -> SquareMatrix {
        SquareMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * k).collect(),
        }
    }

    /// Max-abs entry of `A^dag A - I`.
    pub fn unitarity_residual(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.data[k * n + i].conj() * self.data[k * n + j];
                }
                if i == j {
                    acc -= ONE;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self) -> bool {
        self.unitarity_residual() <= UNITARY_TOLERANCE
    }

    /// Max-abs entrywise distance, optionally after aligning a global phase.
    ///
    /// In phase mode the phase is taken from the entry pair where `other`
    /// has its largest magnitude.
    pub fn distance(&self, other: &SquareMatrix, mode: PhaseMode) -> Result<f64> {
        self.check_dim(other)?;
        let phase = match mode {
            PhaseMode::Exact => ONE,
            PhaseMode::UpToGlobalPhase => {
                let k = (0..self.data.len())
                    .max_by(|&x, &y| other.data[x].norm().total_cmp(&other.data[y].norm()))
                    .unwrap_or(0);
                let z = self.data[k] * other.data[k].conj();
                if z.norm() > 0.0 {
                    z / z.norm()
                } else {
                    ONE
                }
            }
        };
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - phase * b).norm())
            .fold(0.0, f64::max))
    }

    /// True when every row and column holds exactly one entry equal to 1 and
    /// zeros elsewhere.
    pub fn is_permutation(&self) -> bool {
        let n = self.dim;
        let ones_ok = |count: usize| count == 1;
        (0..n).all(|r| {
            let row = self.row(r);
            row.iter().all(|z| *z == ZERO || *z == ONE) && ones_ok(row.iter().filter(|z| **z == ONE).count())
        }) && (0..n).all(|c| ones_ok((0..n).filter(|&r| self[(r, c)] == ONE).count()))
    }

    fn check_dim(&self, other: &SquareMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    /// Canonical text form: `dim <d>` followed by `d` rows of complex literals.
    pub fn to_text(&self) -> String {
        let mut out = format!("dim {}\n", self.dim);
        for r in 0..self.dim {
            let line: Vec<String> = self.row(r).iter().map(|z| format_complex(*z)).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    /// Parses the text form written by [`SquareMatrix::to_text`]. Blank lines
    /// and `#` comments are ignored.
    pub fn parse_text(text: &str) -> Result<SquareMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `dim` header"))?;
        let dim: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["dim", d] => d
                .parse()
                .ok()
                .filter(|&d| d > 0)
                .ok_or_else(|| Error::parse(line_no, "invalid dimension"))?,
            _ => return Err(Error::parse(line_no, "expected `dim <d>`")),
        };
        let mut data = Vec::with_capacity(dim * dim);
        let mut rows = 0;
        for (line_no, line) in lines {
            if rows == dim {
                return Err(Error::parse(line_no, "too many rows"));
            }
            let entries = line
                .split_whitespace()
                .map(|tok| parse_complex(tok).ok_or_else(|| Error::parse(line_no, format!("bad complex literal `{tok}`"))))
                .collect::<Result<Vec<_>>>()?;
            if entries.len() != dim {
                return Err(Error::parse(
                    line_no,
                    format!("expected {dim} entries, found {}", entries.len()),
                ));
            }
            data.extend(entries);
            rows += 1;
        }
        if rows != dim {
            return Err(Error::parse(text.lines().count().max(1), format!("expected {dim} rows, found {rows}")));
        }
        SquareMatrix::from_vec(dim, data)
    }
}

impl Index<(usize, usize)> for SquareMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

/// A [`SquareMatrix`] whose unitarity residual has been checked.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(SquareMatrix);

impl UnitaryMatrix {
    pub fn new(m: SquareMatrix) -> Result<Self> {
        Self::with_tolerance(m, UNITARY_TOLERANCE)
    }

    pub fn with_tolerance(m: SquareMatrix, tolerance: f64) -> Result<Self> {
        let residual = m.unitarity_residual();
        if residual > tolerance {
            return Err(Error::NotUnitary { residual });
        }
        Ok(UnitaryMatrix(m))
    }

    pub fn into_inner(self) -> SquareMatrix {
        self.0
    }
}

impl Deref for UnitaryMatrix {
    type Target = SquareMatrix;

    fn deref(&self) -> &SquareMatrix {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cis, random_unitary, Mat2, IDENTITY_TOLERANCE};
    use rand::SeedableRng;

    fn x() -> SquareMatrix {
        Mat2::X.to_matrix()
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn products_with_identity_and_involution() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        let m = random_unitary(&mut rng, 4);
        assert_eq!(SquareMatrix::identity(4).mat_mul(&m).unwrap(), m);
        assert_eq!(x().mat_mul(&x()).unwrap(), SquareMatrix::identity(2));
        assert!(matches!(
            x().mat_mul(&SquareMatrix::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn adjoint_cases() {
        assert_eq!(SquareMatrix::identity(5).adjoint(), SquareMatrix::identity(5));
        assert_eq!(x().adjoint(), x());
        let m = SquareMatrix::from_vec(2, vec![c(1.0), Complex64::new(0.0, 2.0), c(3.0), c(4.0)]).unwrap();
        assert_eq!(m.adjoint()[(0, 1)], c(3.0));
        assert_eq!(m.adjoint()[(1, 0)], Complex64::new(0.0, -2.0));
    }

    #[test]
    fn kron_ordering() {
        let i2 = SquareMatrix::identity(2);
        let ket00 = [c(1.0), c(0.0), c(0.0), c(0.0)];
        let out = i2.kron(&x()).mul_vec(&ket00).unwrap();
        assert_eq!(out[1], c(1.0));
        let out = x().kron(&i2).mul_vec(&ket00).unwrap();
        assert_eq!(out[2], c(1.0));
    }

    #[test]
    fn six_fold_kron_of_x_and_i_is_permutation() {
        // I (x) I (x) X (x) I (x) X (x) X
        let i2 = SquareMatrix::identity(2);
        let factors = [&i2, &i2, &x(), &i2, &x(), &x()].map(|m| m.clone());
        let full = factors.iter().skip(1).fold(factors[0].clone(), |acc, f| acc.kron(f));
        assert_eq!(full.dim(), 64);
        assert!(full.is_permutation());
        // |000000> maps to |001011> = index 11
        assert_eq!(full[(11, 0)], c(1.0));
    }

    #[test]
    fn unitarity_residual_cases() {
        assert_eq!(SquareMatrix::identity(7).unitarity_residual(), 0.0);
        let d = SquareMatrix::from_vec(2, vec![c(1.0), c(0.0), c(0.0), c(2.0)]).unwrap();
        assert_eq!(d.unitarity_residual(), 3.0);
    }

    #[test]
    fn distance_modes() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        let m = random_unitary(&mut rng, 8);
        assert_eq!(m.distance(&m, PhaseMode::Exact).unwrap(), 0.0);
        let shifted = m.scale(cis(0.77));
        assert!(m.distance(&shifted, PhaseMode::UpToGlobalPhase).unwrap() <= 1e-12);
        assert!(m.distance(&shifted, PhaseMode::Exact).unwrap() > 0.1);
        assert_eq!(SquareMatrix::identity(2).distance(&x(), PhaseMode::Exact).unwrap(), 1.0);
        assert!(m.distance(&x(), PhaseMode::Exact).is_err());
    }

    #[test]
    fn random_unitaries_are_unitary() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        for dim in [2, 4, 8, 18, 64] {
            let u = random_unitary(&mut rng, dim);
            assert!(u.unitarity_residual() <= 1e-10, "dim {dim}");
            let prod = u.adjoint().mat_mul(&u).unwrap();
            assert!(prod.distance(&SquareMatrix::identity(dim), PhaseMode::Exact).unwrap() <= 1e-10);
        }
    }

    #[test]
    fn kron_mixed_product() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(4);
        for (da, db) in [(2, 2), (2, 4), (4, 2), (2, 8)] {
            let (a, c_) = (random_unitary(&mut rng, da), random_unitary(&mut rng, da));
            let (b, d) = (random_unitary(&mut rng, db), random_unitary(&mut rng, db));
            let lhs = a.kron(&b).mat_mul(&c_.kron(&d)).unwrap();
            let rhs = a.mat_mul(&c_).unwrap().kron(&b.mat_mul(&d).unwrap());
            assert!(lhs.distance(&rhs, PhaseMode::Exact).unwrap() <= IDENTITY_TOLERANCE);
        }
    }

    #[test]
    fn text_roundtrip_and_errors() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        let m = random_unitary(&mut rng, 4);
        let back = SquareMatrix::parse_text(&m.to_text()).unwrap();
        assert_eq!(back, m);
        let id = SquareMatrix::parse_text("dim 2\n 1+0i   0+0i\n\n0+0i 1+0i  # comment\n").unwrap();
        assert_eq!(id, SquareMatrix::identity(2));
        assert!(SquareMatrix::parse_text("dim 2\n1 0\n").is_err());
        assert!(SquareMatrix::parse_text("dim 2\n1 0 0\n0 1\n").is_err());
        assert!(SquareMatrix::parse_text("size 2\n").is_err());
    }

    #[test]
    fn unitary_wrapper_rejects_non_unitary() {
        let d = SquareMatrix::from_vec(2, vec![c(1.0), c(0.0), c(0.0), c(2.0)]).unwrap();
        assert!(matches!(UnitaryMatrix::new(d), Err(Error::NotUnitary { residual }) if residual == 3.0));
        assert!(UnitaryMatrix::new(SquareMatrix::identity(3)).is_ok());
    }

    #[test]
    fn rejects_non_finite() {
        let bad = vec![c(1.0), c(f64::NAN), c(0.0), c(1.0)];
        assert!(matches!(SquareMatrix::from_vec(2, bad), Err(Error::NonFinite { row: 0, col: 1 })));
    }
}
