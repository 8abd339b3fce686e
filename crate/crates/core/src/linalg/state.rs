use std::fmt::Write as _;

use num_complex::Complex64;

use super::text::{format_complex, parse_complex};
use super::{ONE, ZERO};
use crate::error::{Error, Result};

const NORM_TOLERANCE: f64 = 1e-10;

/// A normalized pure state on `num_qubits` qubits, amplitudes in
/// lexicographic basis order (qubit 0 most significant).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

fn qubits_for(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::NotPowerOfTwo { len });
    }
    Ok(len.trailing_zeros() as usize)
}

impl StateVector {
    /// Wraps amplitudes that must already have unit norm (within 1e-10).
    pub fn new(amps: Vec<Complex64>) -> Result<Self> {
        let num_qubits = qubits_for(amps.len())?;
        if let Some(k) = amps.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        let norm_sqr: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(StateVector { num_qubits, amps })
    }

    /// Rescales `amps` to unit norm.
    pub fn normalized(mut amps: Vec<Complex64>) -> Result<Self> {
        let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: norm * norm });
        }
        amps.iter_mut().for_each(|z| *z /= norm);
        Self::new(amps)
    }

    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[index] = ONE;
        StateVector { num_qubits, amps }
    }

    /// Amplitudes whose norm was already established by a norm-preserving
    /// evolution.
    pub(crate) fn from_evolved(num_qubits: usize, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), 1 << num_qubits);
        StateVector { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|self> (x) |other>` with `self` on the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let amps = self
            .amps
            .iter()
            .flat_map(|a| other.amps.iter().map(move |b| a * b))
            .collect();
        StateVector {
            num_qubits: self.num_qubits + other.num_qubits,
            amps,
        }
    }

    /// `qubits <n>` followed by one complex literal per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("qubits {}\n", self.num_qubits);
        for z in &self.amps {
            let _ = writeln!(out, "{}", format_complex(*z));
        }
        out
    }

    pub fn parse_text(text: &str) -> Result<StateVector> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (line_no, header) = lines.next().ok_or_else(|| Error::parse(1, "missing `qubits` header"))?;
        let n: usize = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["qubits", n] => n
                .parse()
                .ok()
                .filter(|&n| (1..=20).contains(&n))
                .ok_or_else(|| Error::parse(line_no, "invalid qubit count"))?,
            _ => return Err(Error::parse(line_no, "expected `qubits <n>`")),
        };
        let mut amps = Vec::with_capacity(1 << n);
        for (line_no, line) in lines {
            for tok in line.split_whitespace() {
                let z = parse_complex(tok).ok_or_else(|| Error::parse(line_no, format!("bad complex literal `{tok}`")))?;
                amps.push(z);
            }
        }
        if amps.len() != 1 << n {
            return Err(Error::parse(
                text.lines().count().max(1),
                format!("expected {} amplitudes, found {}", 1 << n, amps.len()),
            ));
        }
        StateVector::new(amps)
    }
}
