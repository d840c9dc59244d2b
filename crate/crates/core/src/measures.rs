//! The Meyer-Wallach measure `Q` and bipartite Schmidt analysis.
//!
//! `Q` is computed two ways that share no code beyond the state kernel:
//! [`q_direct`] sums squared wedge products of the projection split on each
//! qubit, and [`q_purity`] uses `Q = 2 (1 - mean_k Tr[rho_k^2])`.

use crate::error::{Error, Result};
use crate::state::PureState;
use crate::subset::QubitSubset;
use crate::C64;

/// Schmidt coefficients at or below this value count as zero.
pub const SCHMIDT_ZERO_TOL: f64 = 1e-8;

/// `|psi> = |0>_k (x) |u> + |1>_k (x) |v>` for one qubit `k`. The remaining
/// qubits keep their relative order; `u` and `v` have length `2^(n-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionSplit {
    pub qubit_index: usize,
    pub u_tilde: Vec<C64>,
    pub v_tilde: Vec<C64>,
}

/// Schmidt coefficients across a cut, sorted descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtSpectrum {
    pub coefficients: Vec<f64>,
}

impl SchmidtSpectrum {
    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&c| c > tol).count()
    }

    pub fn squared(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c * c).collect()
    }
}

fn require_pair(state: &PureState) -> Result<()> {
    if state.n_qubits() < 2 {
        return Err(Error::TooFewQubits {
            min: 2,
            got: state.n_qubits(),
        });
    }
    Ok(())
}

pub fn split_on_qubit(state: &PureState, k: usize) -> Result<ProjectionSplit> {
    require_pair(state)?;
    let n = state.n_qubits();
    if k >= n {
        return Err(Error::QubitOutOfRange {
            index: k,
            n_qubits: n,
        });
    }
    let half = state.dim() / 2;
    let mut u = Vec::with_capacity(half);
    let mut v = Vec::with_capacity(half);
    let bit = n - 1 - k;
    let low_mask = (1usize << bit) - 1;
    for rest in 0..half {
        // reinsert a zero bit at position `bit`
        let idx0 = ((rest & !low_mask) << 1) | (rest & low_mask);
        u.push(state.amplitudes()[idx0]);
        v.push(state.amplitudes()[idx0 | (1 << bit)]);
    }
    Ok(ProjectionSplit {
        qubit_index: k,
        u_tilde: u,
        v_tilde: v,
    })
}

/// Generalized cross product `sum_{i<j} |u_i v_j - u_j v_i|^2`, evaluated
/// term by term.
pub fn distance_d(u: &[C64], v: &[C64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            expected: u.len(),
            got: v.len(),
        });
    }
    if u.is_empty() {
        return Err(Error::Empty("distance_d needs nonempty vectors"));
    }
    let mut total = 0.0;
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            total += (u[i] * v[j] - u[j] * v[i]).norm_sqr();
        }
    }
    Ok(total)
}

/// `Q = (4/n) sum_k D(u^k, v^k)`.
pub fn q_direct(state: &PureState) -> Result<f64> {
    require_pair(state)?;
    let n = state.n_qubits();
    let mut sum = 0.0;
    for k in 0..n {
        let split = split_on_qubit(state, k)?;
        sum += distance_d(&split.u_tilde, &split.v_tilde)?;
    }
    Ok(4.0 * sum / n as f64)
}

/// Purities `Tr[rho_k^2]` of every single-qubit reduced state.
pub fn single_qubit_purities(state: &PureState) -> Result<Vec<f64>> {
    let n = state.n_qubits();
    (0..n)
        .map(|k| Ok(state.reduced_density(&QubitSubset::single(k, n)?)?.purity()))
        .collect()
}

/// `Q = 2 (1 - (1/n) sum_k Tr[rho_k^2])`.
pub fn q_purity(state: &PureState) -> Result<f64> {
    require_pair(state)?;
    let purities = single_qubit_purities(state)?;
    let mean = purities.iter().sum::<f64>() / purities.len() as f64;
    Ok(2.0 * (1.0 - mean))
}

fn check_cut(state: &PureState, part_a: &QubitSubset) -> Result<()> {
    part_a.check_register(state.n_qubits())?;
    if part_a.is_full() {
        return Err(Error::InvalidSubset(
            "cut must leave at least one qubit on each side".into(),
        ));
    }
    Ok(())
}

/// Singular values of the amplitude matrix reshaped along `part_a | rest`.
pub fn schmidt_spectrum(state: &PureState, part_a: &QubitSubset) -> Result<SchmidtSpectrum> {
    check_cut(state, part_a)?;
    let m = state.bipartite_matrix(part_a)?;
    let mut coefficients: Vec<f64> = m.singular_values().iter().copied().collect();
    coefficients.sort_by(|a, b| b.total_cmp(a));
    Ok(SchmidtSpectrum { coefficients })
}

/// Count of Schmidt coefficients above [`SCHMIDT_ZERO_TOL`].
pub fn schmidt_number(state: &PureState, part_a: &QubitSubset) -> Result<usize> {
    schmidt_number_with_tol(state, part_a, SCHMIDT_ZERO_TOL)
}

pub fn schmidt_number_with_tol(
    state: &PureState,
    part_a: &QubitSubset,
    tol: f64,
) -> Result<usize> {
    Ok(schmidt_spectrum(state, part_a)?.rank(tol))
}
