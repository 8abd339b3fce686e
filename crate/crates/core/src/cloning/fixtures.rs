//! Exact fixtures of the cloning network: the 18x18 core block, the
//! permutation chain around it and the 2x2 blocks used by the published
//! gate-level expansion.
//!
//! Entries are stored as surds `(num/den) * sqrt(rad_num/rad_den)` and
//! evaluated once in double precision.

use std::fmt::Write as _;

use crate::linalg::{Mat2, SquareMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Surd {
    num: i32,
    den: i32,
    rad_num: u32,
    rad_den: u32,
}

const fn q(num: i32, den: i32, rad_num: u32, rad_den: u32) -> Surd {
    Surd {
        num,
        den,
        rad_num,
        rad_den,
    }
}

const fn n(s: Surd) -> Surd {
    Surd { num: -s.num, ..s }
}

impl Surd {
    fn value(self) -> f64 {
        self.num as f64 / self.den as f64 * (self.rad_num as f64 / self.rad_den as f64).sqrt()
    }
}

const Z: Surd = q(0, 1, 1, 1);
const HALF: Surd = q(1, 2, 1, 1);
const R2: Surd = q(1, 1, 1, 2); // 1/sqrt2
const R3: Surd = q(1, 1, 1, 3); // 1/sqrt3
const A: Surd = q(1, 2, 1, 3); // 1/(2 sqrt3)
const B: Surd = q(1, 2, 1, 7); // 1/(2 sqrt7)
const C: Surd = q(1, 4, 1, 7); // 1/(4 sqrt7)
const C3: Surd = q(3, 4, 1, 7); // 3/(4 sqrt7)
const D: Surd = q(1, 1, 1, 42); // 1/sqrt42
const E: Surd = q(1, 1, 3, 70); // sqrt(3/70)
const E2: Surd = q(1, 2, 3, 70); // sqrt(3/70)/2
const E32: Surd = q(3, 2, 3, 70); // 3 sqrt(3/70)/2
const F: Surd = q(1, 1, 3, 14); // sqrt(3/14)
const F2: Surd = q(1, 2, 3, 14); // sqrt(3/14)/2
const Q: Surd = q(1, 1, 3, 7); // sqrt(3/7)
const Q2: Surd = q(1, 2, 3, 7); // sqrt(3/7)/2
const G: Surd = q(2, 1, 2, 35); // 2 sqrt(2/35)
const H: Surd = q(3, 1, 1, 70); // 3/sqrt70
const S: Surd = q(1, 1, 5, 14); // sqrt(5/14)

#[rustfmt::skip]
const CORE_BLOCK: [[Surd; 18]; 18] = [
    [R2, Z, Z, Z, Z, Z, Z, HALF, Z, Z, A, n(B), B, n(C), n(C), D, n(E), n(E2)],
    [Z, Z, Z, Z, Z, Z, Z, Z, Z, Z, Z, n(Q2), Q2, Z, Q, Z, G, n(H)],
    [Z, Z, Z, Z, Z, Z, Z, Z, Z, Z, Z, n(Q2), Q2, Q, Z, Z, Z, S],
    [Z, Z, Z, R2, Z, Z, Z, Z, Z, Z, Z, B, n(B), C3, C3, F, n(E), n(E2)],
    [Z, Z, Z, Z, R2, Z, Z, Z, n(HALF), Z, Z, Z, Z, n(C3), C, F2, E2, E32],
    [Z, Z, Z, Z, R2, Z, Z, Z, HALF, Z, Z, Z, Z, C3, n(C), n(F2), n(E2), n(E32)],
    [Z, Z, Z, n(R2), Z, Z, Z, Z, Z, Z, Z, B, n(B), C3, C3, F, n(E), n(E2)],
    [n(R2), Z, Z, Z, Z, Z, Z, HALF, Z, Z, A, n(B), B, n(C), n(C), D, n(E), n(E2)],
    [Z, R2, Z, Z, Z, Z, Z, Z, Z, HALF, Z, Z, Z, C, n(C3), F2, E32, n(E2)],
    [Z, R2, Z, Z, Z, Z, Z, Z, Z, n(HALF), Z, Z, Z, n(C), C3, n(F2), n(E32), E2],
    [Z, Z, Z, Z, Z, Z, Z, Z, HALF, Z, Z, HALF, HALF, n(C3), C, F2, E2, E32],
    [Z, Z, Z, Z, Z, Z, R2, Z, Z, n(HALF), Z, Z, Z, C, n(C3), F2, E32, n(E2)],
    [Z, Z, R2, Z, Z, Z, Z, n(HALF), Z, Z, A, n(B), B, n(C), n(C), D, n(E), n(E2)],
    [Z, Z, R2, Z, Z, Z, Z, HALF, Z, Z, n(A), B, n(B), C, C, n(D), E, E2],
    [Z, Z, Z, Z, Z, Z, Z, Z, n(HALF), Z, Z, HALF, HALF, C3, n(C), n(F2), n(E2), n(E32)],
    [Z, Z, Z, Z, Z, Z, R2, Z, Z, HALF, Z, Z, Z, n(C), C3, n(F2), n(E32), E2],
    [Z, Z, Z, Z, Z, R2, Z, Z, Z, Z, R3, B, n(B), C, C, n(D), E, E2],
    [Z, Z, Z, Z, Z, R2, Z, Z, Z, Z, n(R3), n(B), B, n(C), n(C), D, n(E), n(E2)],
];

/// The 18x18 block acting on the first 18 lexicographic basis states.
pub fn core_block() -> SquareMatrix {
    SquareMatrix::from_fn(18, |r, c| CORE_BLOCK[r][c].value().into())
}

/// Which side of the core block a permutation factor sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainSide {
    Left,
    Right,
}

impl ChainSide {
    pub fn as_str(self) -> &'static str {
        match self {
            ChainSide::Left => "left",
            ChainSide::Right => "right",
        }
    }
}

/// A transposition of basis states `i` and `j`, 1-based as printed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PermutationFactor {
    pub side: ChainSide,
    pub i: usize,
    pub j: usize,
}

const fn l(i: usize, j: usize) -> PermutationFactor {
    PermutationFactor {
        side: ChainSide::Left,
        i,
        j,
    }
}

const fn r(i: usize, j: usize) -> PermutationFactor {
    PermutationFactor {
        side: ChainSide::Right,
        i,
        j,
    }
}

/// `U = L * diag(core, I_46) * R`, factors in product order, 1-based indices.
#[rustfmt::skip]
pub const PERMUTATION_CHAIN: [PermutationFactor; 50] = [
    l(53, 57), l(49, 53), l(45, 49), l(37, 45), l(33, 41), l(29, 37), l(25, 33), l(21, 33),
    l(18, 61), l(17, 29), l(16, 57), l(15, 53), l(14, 49), l(13, 25), l(12, 45), l(11, 41),
    l(10, 37), l(9, 21), l(8, 33), l(7, 29), l(6, 25), l(5, 21), l(4, 21),
    r(11, 12), r(1, 14), r(7, 15), r(13, 15),
    r(4, 21), r(5, 21), r(6, 25), r(7, 29), r(8, 33), r(9, 21), r(10, 37), r(11, 41),
    r(12, 45), r(13, 25), r(14, 49), r(15, 53), r(16, 57), r(17, 29), r(18, 61), r(21, 33),
    r(25, 33), r(29, 37), r(33, 41), r(37, 45), r(45, 49), r(49, 53), r(53, 57),
];

pub fn chain_side(side: ChainSide) -> impl Iterator<Item = &'static PermutationFactor> {
    PERMUTATION_CHAIN.iter().filter(move |f| f.side == side)
}

/// The chain as CSV with header `side,i,j` (1-based indices).
pub fn permutation_chain_csv() -> String {
    let mut out = String::from("side,i,j\n");
    for f in &PERMUTATION_CHAIN {
        let _ = writeln!(out, "{},{},{}", f.side.as_str(), f.i, f.j);
    }
    out
}

#[rustfmt::skip]
const EXPANSION_BLOCKS: [[Surd; 4]; 18] = [
    [R2, n(R2), n(R2), n(R2)],
    [R2, R2, R2, n(R2)],
    [R3, q(1, 1, 2, 3), q(1, 1, 2, 3), n(R3)],
    [q(-1, 1, 2, 5), q(-1, 1, 3, 5), q(-1, 1, 3, 5), q(1, 1, 2, 5)],
    [q(1, 2, 5, 2), q(-1, 2, 3, 2), q(-1, 2, 3, 2), q(-1, 2, 5, 2)],
    [q(2, 1, 1, 11), q(-1, 1, 7, 11), q(-1, 1, 7, 11), q(-2, 1, 1, 11)],
    [q(1, 1, 11, 14), q(-1, 1, 3, 14), q(-1, 1, 3, 14), q(-1, 1, 11, 14)],
    [q(2, 1, 2, 11), q(-1, 1, 3, 11), q(-1, 1, 3, 11), q(-2, 1, 2, 11)],
    [q(3, 1, 1, 205), q(14, 1, 1, 205), q(14, 1, 1, 205), q(-3, 1, 1, 205)],
    [q(1, 1, 123, 131), q(-2, 1, 2, 131), q(-2, 1, 2, 131), q(-1, 1, 123, 131)],
    [q(-1, 1, 131, 203), q(6, 1, 2, 203), q(6, 1, 2, 203), q(1, 1, 131, 203)],
    [q(1, 4, 29, 2), q(-1, 4, 3, 2), q(-1, 4, 3, 2), q(-1, 4, 29, 2)],
    [q(-5, 1, 131, 5453), q(-33, 1, 2, 5453), q(-33, 1, 2, 5453), q(5, 1, 131, 5453)],
    [q(-1, 1, 1653, 1703), q(5, 1, 2, 1703), q(5, 1, 2, 1703), q(1, 1, 1653, 1703)],
    [q(1, 1, 26, 29), q(1, 1, 3, 29), q(1, 1, 3, 29), q(-1, 1, 26, 29)],
    [q(-1, 1, 13, 38), q(-5, 1, 1, 38), q(-5, 1, 1, 38), q(1, 1, 13, 38)],
    [q(3, 1, 1, 13), q(2, 1, 1, 13), q(2, 1, 1, 13), q(-3, 1, 1, 13)],
    [q(-1, 1, 1, 5), q(2, 1, 1, 5), q(2, 1, 1, 5), q(1, 1, 1, 5)],
];

/// The blocks `v_1 .. v_18` of the published gate-level expansion, in order.
pub fn expansion_blocks() -> [Mat2; 18] {
    EXPANSION_BLOCKS.map(|[a, b, c, d]| Mat2::real(a.value(), b.value(), c.value(), d.value()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn chain_sides_have_expected_lengths() {
        assert_eq!(chain_side(ChainSide::Left).count(), 23);
        assert_eq!(chain_side(ChainSide::Right).count(), 27);
        // the right side mirrors the left after a four-factor prefix
        let left: Vec<_> = chain_side(ChainSide::Left).map(|f| (f.i, f.j)).collect();
        let right: Vec<_> = chain_side(ChainSide::Right).skip(4).map(|f| (f.i, f.j)).collect();
        assert_eq!(right, left.into_iter().rev().collect::<Vec<_>>());
        assert!(PERMUTATION_CHAIN.iter().all(|f| 1 <= f.i && f.i < f.j && f.j <= 64));
    }

    #[test]
    fn core_block_entries() {
        let v = core_block();
        assert_eq!(v[(0, 0)], Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        assert_eq!(v[(0, 7)], Complex64::new(0.5, 0.0));
        assert_eq!(v[(1, 0)], Complex64::new(0.0, 0.0));
        assert!((v[(1, 16)].re - 2.0 * (2.0f64 / 35.0).sqrt()).abs() < 1e-16);
    }

    #[test]
    fn expansion_blocks_are_unitary() {
        for (k, b) in expansion_blocks().iter().enumerate() {
            assert!(b.unitarity_residual() < 1e-14, "v{}", k + 1);
        }
    }

    #[test]
    fn csv_export() {
        let csv = permutation_chain_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("side,i,j"));
        assert_eq!(lines.next(), Some("left,53,57"));
        assert_eq!(csv.lines().count(), 51);
        assert_eq!(csv.lines().last(), Some("right,53,57"));
    }
}
