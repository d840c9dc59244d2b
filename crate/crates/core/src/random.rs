//! Random states and operators without basis bias: complex Gaussian
//! amplitudes for states, Haar unitaries via QR of a Ginibre matrix.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::density::DensityMatrix;
use crate::error::Result;
use crate::state::PureState;
use crate::unitary::UnitaryMatrix;
use crate::{CMatrix, C64};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(dim, dim, |_, _| gaussian(rng))
}

/// Rotation-invariant random pure state on `n_qubits`.
pub fn random_state<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<PureState> {
    let amps: Vec<C64> = (0..1usize << n_qubits).map(|_| gaussian(rng)).collect();
    PureState::normalized(n_qubits, amps)
}

/// Haar-random unitary on `n_qubits`.
pub fn random_unitary<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> UnitaryMatrix {
    let dim = 1usize << n_qubits;
    let qr = ginibre(dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    UnitaryMatrix::from_matrix_unchecked(q)
}

/// Random full-rank mixed state `G G^dagger / Tr` on `n_qubits`.
pub fn random_density<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> DensityMatrix {
    let dim = 1usize << n_qubits;
    let g = ginibre(dim, rng);
    let m = &g * g.adjoint();
    let tr = m.trace();
    DensityMatrix::from_matrix_unchecked(m / tr)
}
