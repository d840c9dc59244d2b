use crate::error::{Error, Result};
use crate::kernel::gather_bits;
use crate::subset::QubitSubset;
use crate::{CMatrix, C64};

/// Max elementwise deviation from Hermiticity.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Allowed deviation of the trace from one.
pub const TRACE_TOL: f64 = 1e-10;
/// Smallest eigenvalue tolerated before a matrix is declared non-PSD.
pub const PSD_FLOOR: f64 = -1e-9;

/// A Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::InvalidDensity(format!(
                "shape {}x{} is not square",
                m.nrows(),
                m.ncols()
            )));
        }
        let herm = (&m - m.adjoint()).iter().fold(0.0f64, |w, z| w.max(z.norm()));
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidDensity(format!(
                "not Hermitian (deviation {herm:e})"
            )));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr} != 1")));
        }
        let out = Self { m };
        let min = out.eigenvalues().last().copied().unwrap_or(0.0);
        if min < PSD_FLOOR {
            return Err(Error::InvalidDensity(format!(
                "negative eigenvalue {min:e}"
            )));
        }
        Ok(out)
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_matrix_unchecked(m: CMatrix) -> Self {
        Self { m }
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            m: CMatrix::identity(dim, dim) / C64::new(dim as f64, 0.0),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// Number of qubits when the dimension is a power of two.
    pub fn n_qubits(&self) -> Option<usize> {
        self.dim()
            .is_power_of_two()
            .then(|| self.dim().trailing_zeros() as usize)
    }

    pub fn trace(&self) -> C64 {
        self.m.trace()
    }

    /// `Tr[rho^2]`.
    pub fn purity(&self) -> f64 {
        let tr = (&self.m * &self.m).trace();
        debug_assert!(tr.im.abs() < 1e-10, "purity has imaginary part {}", tr.im);
        tr.re
    }

    /// Eigenvalues, sorted descending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.m.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| b.total_cmp(a));
        ev
    }

    /// Eigenpairs `(p_i, |phi_i>)`, sorted by descending eigenvalue.
    pub fn eigen_decomposition(&self) -> Vec<(f64, Vec<C64>)> {
        let eig = self.m.clone().symmetric_eigen();
        let mut pairs: Vec<(f64, Vec<C64>)> = eig
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &p)| (p, eig.eigenvectors.column(i).iter().copied().collect()))
            .collect();
        pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
        pairs
    }

    /// Kronecker product, `self` first.
    pub fn tensor(&self, rhs: &DensityMatrix) -> Self {
        Self {
            m: self.m.kronecker(&rhs.m),
        }
    }

    /// Partial trace of a qubit-structured density matrix, keeping `keep`.
    pub fn partial_trace(&self, keep: &QubitSubset) -> Result<DensityMatrix> {
        let n = self.n_qubits().ok_or(Error::InvalidDensity(format!(
            "dimension {} is not a qubit register",
            self.dim()
        )))?;
        keep.check_register(n)?;
        let kept = keep.indices();
        let rest: Vec<usize> = (0..n).filter(|q| !keep.contains(*q)).collect();
        let mut out = CMatrix::zeros(1 << kept.len(), 1 << kept.len());
        for i in 0..self.dim() {
            let ri = gather_bits(i, n, &rest);
            let ai = gather_bits(i, n, kept);
            for j in 0..self.dim() {
                if gather_bits(j, n, &rest) == ri {
                    out[(ai, gather_bits(j, n, kept))] += self.m[(i, j)];
                }
            }
        }
        Ok(Self { m: out })
    }

    /// Max elementwise distance to another matrix of the same dimension.
    pub fn max_deviation(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok((&self.m - &other.m)
            .iter()
            .fold(0.0f64, |w, z| w.max(z.norm())))
    }
}

/// Free-function form of [`DensityMatrix::purity`].
pub fn purity(rho: &DensityMatrix) -> f64 {
    rho.purity()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(values: &[f64]) -> DensityMatrix {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        DensityMatrix::new(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(v))).unwrap()
    }

    #[test]
    fn purity_values() {
        assert!((DensityMatrix::maximally_mixed(2).purity() - 0.5).abs() < 1e-15);
        assert!((diag(&[1.0, 0.0]).purity() - 1.0).abs() < 1e-15);
        assert!((diag(&[2.0 / 3.0, 1.0 / 3.0]).purity() - 5.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_invalid_matrices() {
        let not_herm = CMatrix::from_row_slice(
            2,
            2,
            &[
                C64::new(0.5, 0.0),
                C64::new(0.1, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.5, 0.0),
            ],
        );
        assert!(DensityMatrix::new(not_herm).is_err());

        let bad_trace = CMatrix::identity(2, 2);
        assert!(DensityMatrix::new(bad_trace).is_err());

        let not_psd = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            C64::new(1.5, 0.0),
            C64::new(-0.5, 0.0),
        ]));
        assert!(DensityMatrix::new(not_psd).is_err());
    }

    #[test]
    fn partial_trace_of_product() {
        let a = diag(&[0.25, 0.75]);
        let b = DensityMatrix::maximally_mixed(2);
        let ab = a.tensor(&b);
        let keep0 = QubitSubset::single(0, 2).unwrap();
        let keep1 = QubitSubset::single(1, 2).unwrap();
        assert!(ab.partial_trace(&keep0).unwrap().max_deviation(&a).unwrap() < 1e-15);
        assert!(ab.partial_trace(&keep1).unwrap().max_deviation(&b).unwrap() < 1e-15);
    }
}
