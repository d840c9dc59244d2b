//! Dense state-vector tools for the Meyer-Wallach entanglement measure `Q`.
//!
//! `Q` is available by three routes that should agree on every pure state:
//!
//! * [`measures::q_direct`]: wedge products of the per-qubit projection split.
//! * [`measures::q_purity`]: `2 (1 - mean single-qubit purity)`.
//! * [`protocol::q_protocol_exact`] / [`protocol::q_protocol_sampled`]: swap
//!   tests between two copies of the register, driven by c-SWAP gates built
//!   from Ising pulses ([`pulse::cswap_sequence`]).
//!
//! Qubit 0 is the most significant bit of every amplitude index.

pub mod density;
pub mod error;
pub mod gates;
pub mod io;
mod kernel;
pub mod measures;
pub mod protocol;
pub mod pulse;
pub mod random;
pub mod rng;
pub mod state;
pub mod subset;
pub mod unitary;

pub type C64 = num_complex::Complex64;
pub type CMatrix = nalgebra::DMatrix<C64>;

pub use density::{purity, DensityMatrix};
pub use error::{Error, Result};
pub use measures::{
    distance_d, q_direct, q_purity, schmidt_number, schmidt_spectrum, split_on_qubit,
    ProjectionSplit, SchmidtSpectrum,
};
pub use protocol::{
    convergence_sweep, q_protocol_exact, q_protocol_sampled, subset_purity_exact,
    swap_test_exact, swap_test_post_state, EstimatorStats, Outcome, ProtocolRun, SamplingMode,
    SwapTestResult,
};
pub use pulse::{
    cswap_sequence, equal_up_to_global_phase, interaction_time, pulse_to_unitary,
    sequence_to_unitary, swap_sequence, three_body_sequence, CouplingModel, Pulse, PulseSequence,
};
pub use state::{make_bell, make_cluster, make_ghz, make_product_state, make_w, PureState};
pub use subset::QubitSubset;
pub use unitary::UnitaryMatrix;
