use crate::error::{Error, Result};
use crate::{CMatrix, C64};

/// Max elementwise deviation of `U^dagger U` from identity accepted by
/// [`UnitaryMatrix::new`].
pub const UNITARY_TOL: f64 = 1e-9;

/// A square unitary matrix acting on a whole number of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    m: CMatrix,
}

impl UnitaryMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                got: m.ncols(),
            });
        }
        let dim = m.nrows();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "unitary dimension {dim} is not a power of two"
            )));
        }
        let dev = identity_deviation(&(m.adjoint() * &m));
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(Self { m })
    }

    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        debug_assert!(m.is_square());
        Self { m }
    }

    pub fn identity(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        Self {
            m: CMatrix::identity(d, d),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn n_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    /// Matrix product `self * rhs` (rhs acts first).
    pub fn compose(&self, rhs: &UnitaryMatrix) -> Result<Self> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: rhs.dim(),
            });
        }
        Ok(Self { m: &self.m * &rhs.m })
    }

    /// Kronecker product, `self` on the leading (more significant) qubits.
    pub fn tensor(&self, rhs: &UnitaryMatrix) -> Self {
        Self {
            m: self.m.kronecker(&rhs.m),
        }
    }

    pub fn scaled(&self, phase: C64) -> Self {
        Self { m: &self.m * phase }
    }

    /// Max elementwise deviation of `U^dagger U` from identity.
    pub fn unitarity_deviation(&self) -> f64 {
        identity_deviation(&(self.m.adjoint() * &self.m))
    }
}

pub(crate) fn identity_deviation(m: &CMatrix) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..m.nrows() {
        for c in 0..m.ncols() {
            let target = if r == c { 1.0 } else { 0.0 };
            worst = worst.max((m[(r, c)] - C64::new(target, 0.0)).norm());
        }
    }
    worst
}
