//! Pure states over `n` qubits and the standard state factories.
//!
//! Ordering convention used everywhere in this crate: qubit 0 is the leftmost
//! ket label and the most significant bit of the amplitude index, so
//! `|q0 q1 ... q(n-1)>` sits at index `sum q_k * 2^(n-1-k)`.

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gates;
use crate::kernel;
use crate::subset::QubitSubset;
use crate::unitary::UnitaryMatrix;
use crate::{CMatrix, C64};

/// Allowed deviation of the Euclidean norm from one.
pub const NORM_TOL: f64 = 1e-10;

/// A normalized amplitude vector of length `2^n_qubits`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Validates length and norm. Unnormalized input is rejected, never
    /// rescaled.
    pub fn new(n_qubits: usize, amplitudes: Vec<C64>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::TooFewQubits { min: 1, got: 0 });
        }
        let expected = 1usize
            .checked_shl(n_qubits as u32)
            .ok_or_else(|| Error::InvalidParameter(format!("{n_qubits} qubits is too many")))?;
        if amplitudes.len() != expected {
            return Err(Error::LengthMismatch {
                n_qubits,
                len: amplitudes.len(),
                expected,
            });
        }
        let norm = kernel::norm(&amplitudes);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(n_qubits: usize, mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = kernel::norm(&amplitudes);
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Self::new(n_qubits, amplitudes)
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![C64::new(0.0, 0.0); dim];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(n_qubits, amps)
    }

    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        Self {
            n_qubits,
            amplitudes,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        kernel::norm(&self.amplitudes)
    }

    /// `|self> (x) |rhs>`, with `self` on the leading qubits.
    pub fn tensor(&self, rhs: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.dim() * rhs.dim());
        for a in &self.amplitudes {
            amps.extend(rhs.amplitudes.iter().map(|b| a * b));
        }
        Self::from_raw(self.n_qubits + rhs.n_qubits, amps)
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &PureState) -> Result<C64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies `u` to `targets` (identity elsewhere). The lowest target index
    /// is the most significant bit of `u`'s index.
    pub fn apply_unitary(&self, u: &UnitaryMatrix, targets: &QubitSubset) -> Result<PureState> {
        targets.check_register(self.n_qubits)?;
        let expected = 1usize << targets.len();
        if u.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: u.dim(),
            });
        }
        let mut amps = self.amplitudes.clone();
        kernel::apply_gate(&mut amps, self.n_qubits, u.matrix(), targets.indices());
        Ok(Self::from_raw(self.n_qubits, amps))
    }

    /// Applies `u` to targets in the given order (first target most
    /// significant). Targets must be distinct and in range.
    pub fn apply_ordered(&self, u: &UnitaryMatrix, targets: &[usize]) -> Result<PureState> {
        check_targets(targets, self.n_qubits)?;
        let expected = 1usize << targets.len();
        if u.dim() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: u.dim(),
            });
        }
        let mut amps = self.amplitudes.clone();
        kernel::apply_gate(&mut amps, self.n_qubits, u.matrix(), targets);
        Ok(Self::from_raw(self.n_qubits, amps))
    }

    /// Reduced state on `keep`, tracing out the complement.
    pub fn reduced_density(&self, keep: &QubitSubset) -> Result<DensityMatrix> {
        keep.check_register(self.n_qubits)?;
        let m = kernel::bipartite_matrix(&self.amplitudes, self.n_qubits, keep.indices());
        Ok(DensityMatrix::from_matrix_unchecked(&m * m.adjoint()))
    }

    /// `|psi><psi|`.
    pub fn projector(&self) -> DensityMatrix {
        let v = nalgebra::DVector::from_column_slice(&self.amplitudes);
        DensityMatrix::from_matrix_unchecked(&v * v.adjoint())
    }

    /// The amplitude matrix with rows indexed by `part_a` and columns by
    /// its complement.
    pub fn bipartite_matrix(&self, part_a: &QubitSubset) -> Result<CMatrix> {
        part_a.check_register(self.n_qubits)?;
        Ok(kernel::bipartite_matrix(
            &self.amplitudes,
            self.n_qubits,
            part_a.indices(),
        ))
    }
}

pub(crate) fn check_targets(targets: &[usize], n_qubits: usize) -> Result<()> {
    for (i, &q) in targets.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        if targets[..i].contains(&q) {
            return Err(Error::RepeatedQubit(q));
        }
    }
    Ok(())
}

/// Tensor product of single-qubit states; the first factor is qubit 0.
pub fn make_product_state(factors: &[[C64; 2]]) -> Result<PureState> {
    if factors.is_empty() {
        return Err(Error::Empty("product state needs at least one factor"));
    }
    let mut amps = vec![C64::new(1.0, 0.0)];
    for f in factors {
        let norm = (f[0].norm_sqr() + f[1].norm_sqr()).sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm });
        }
        amps = amps.iter().flat_map(|a| [a * f[0], a * f[1]]).collect();
    }
    PureState::new(factors.len(), amps)
}

fn require_at_least_two(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::TooFewQubits { min: 2, got: n });
    }
    Ok(())
}

/// `(|0...0> + |1...1>) / sqrt(2)`.
pub fn make_ghz(n: usize) -> Result<PureState> {
    require_at_least_two(n)?;
    let dim = 1usize << n;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    amps[0] = C64::new(h, 0.0);
    amps[dim - 1] = C64::new(h, 0.0);
    PureState::new(n, amps)
}

/// Equal superposition of the `n` one-hot basis states.
pub fn make_w(n: usize) -> Result<PureState> {
    require_at_least_two(n)?;
    let a = C64::new(1.0 / (n as f64).sqrt(), 0.0);
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for k in 0..n {
        amps[1 << k] = a;
    }
    PureState::new(n, amps)
}

/// Linear cluster state: `|+>^n` followed by controlled-Z on each
/// neighbouring pair `(a, a+1)`.
///
/// The product-of-operators form `prod_a (|0>_a Z_(a+1) + |1>_a) / sqrt(2)`
/// (with `Z_n = 1`) expands to this state times `Z` on qubits `1..n`, a local
/// unitary, so both forms carry the same entanglement. This crate emits the
/// controlled-Z form, e.g. `(1, 1, 1, -1) / 2` for two qubits.
pub fn make_cluster(n: usize) -> Result<PureState> {
    require_at_least_two(n)?;
    let plus = [C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0); 2];
    let mut amps = make_product_state(&vec![plus; n])?.into_amplitudes();
    let cz = gates::cz();
    for a in 0..n - 1 {
        kernel::apply_gate(&mut amps, n, cz.matrix(), &[a, a + 1]);
    }
    PureState::new(n, amps)
}

/// `(|00> + |11>) / sqrt(2)`.
pub fn make_bell() -> PureState {
    make_ghz(2).expect("two qubits")
}
