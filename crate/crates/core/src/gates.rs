//! Canonical gate matrices. Multi-qubit gates use the global convention:
//! the first listed qubit is the most significant bit of the local index.

use crate::unitary::UnitaryMatrix;
use crate::{CMatrix, C64};

const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

fn mat2(a: C64, b: C64, cc: C64, d: C64) -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[a, b, cc, d])
}

pub fn pauli_x() -> CMatrix {
    mat2(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))
}

pub fn pauli_y() -> CMatrix {
    mat2(c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0))
}

pub fn pauli_z() -> CMatrix {
    mat2(c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))
}

pub fn hadamard() -> UnitaryMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    UnitaryMatrix::from_matrix_unchecked(mat2(c(h, 0.0), c(h, 0.0), c(h, 0.0), c(-h, 0.0)))
}

pub fn bit_flip() -> UnitaryMatrix {
    UnitaryMatrix::from_matrix_unchecked(pauli_x())
}

fn permutation(perm: &[usize]) -> UnitaryMatrix {
    let d = perm.len();
    let mut m = CMatrix::zeros(d, d);
    for (col, &row) in perm.iter().enumerate() {
        m[(row, col)] = c(1.0, 0.0);
    }
    UnitaryMatrix::from_matrix_unchecked(m)
}

/// Control first, target second.
pub fn cnot() -> UnitaryMatrix {
    permutation(&[0, 1, 3, 2])
}

pub fn cz() -> UnitaryMatrix {
    let mut m = CMatrix::identity(4, 4);
    m[(3, 3)] = c(-1.0, 0.0);
    UnitaryMatrix::from_matrix_unchecked(m)
}

pub fn swap() -> UnitaryMatrix {
    permutation(&[0, 2, 1, 3])
}

/// Fredkin gate: control first; swaps the other two when the control is 1.
pub fn cswap() -> UnitaryMatrix {
    permutation(&[0, 1, 2, 3, 4, 6, 5, 7])
}

/// `exp(i * phi * Z (x) Z (x) Z)`, diagonal with entries
/// `exp(i * phi * (-1)^(popcount))`.
pub fn zzz_phase(phi: f64) -> UnitaryMatrix {
    let diag: Vec<C64> = (0..8u32)
        .map(|b| {
            let sign = if b.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            C64::from_polar(1.0, sign * phi)
        })
        .collect();
    UnitaryMatrix::from_matrix_unchecked(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(
        diag,
    )))
}
