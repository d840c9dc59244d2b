//! Swap-test purity measurement and the stacked-register protocol for `Q`.
//!
//! Readout convention: the control qubit is measured in the `sigma_x` basis
//! and the `-1` eigenstate is recorded as "1". With identical inputs that
//! outcome has probability `p_minus = (1 - Tr[rho^2]) / 2`, so the mean
//! number of 1s over an `n`-qubit control register is `n Q / 4`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::DensityMatrix;
use crate::error::{Error, Result};
use crate::gates;
use crate::kernel;
use crate::measures::single_qubit_purities;
use crate::pulse::cswap_sequence;
use crate::rng::SeedFamily;
use crate::state::PureState;
use crate::subset::QubitSubset;
use crate::{CMatrix, C64};

/// Largest register simulated as a dense vector in full-circuit modes.
pub const JOINT_QUBIT_LIMIT: usize = 14;
/// Outcomes at or below this probability cannot be conditioned on.
pub const IMPOSSIBLE_OUTCOME: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// Ancilla `sigma_x` statistics of one swap test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwapTestResult {
    pub p_plus: f64,
    pub p_minus: f64,
}

impl SwapTestResult {
    fn from_p_plus(p_plus: f64) -> Self {
        Self {
            p_plus,
            p_minus: 1.0 - p_plus,
        }
    }

    pub fn probability(&self, outcome: Outcome) -> f64 {
        match outcome {
            Outcome::Plus => self.p_plus,
            Outcome::Minus => self.p_minus,
        }
    }
}

/// Swap test on two copies of `rho`: `p_plus = (1 + Tr[rho^2]) / 2`.
pub fn swap_test_exact(rho: &DensityMatrix) -> SwapTestResult {
    SwapTestResult::from_p_plus(0.5 * (1.0 + rho.purity()))
}

/// The operator exchanging two `local_dim`-dimensional systems.
pub fn swap_operator(local_dim: usize) -> CMatrix {
    let d = local_dim;
    let mut s = CMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            s[(j * d + i, i * d + j)] = C64::new(1.0, 0.0);
        }
    }
    s
}

fn local_dim_of_pair(pair: &DensityMatrix) -> Result<usize> {
    let d = (pair.dim() as f64).sqrt().round() as usize;
    if d * d != pair.dim() {
        return Err(Error::DimensionMismatch {
            expected: d * d,
            got: pair.dim(),
        });
    }
    Ok(d)
}

/// Swap test on an arbitrary two-copy state: `p_plus = Tr[(1 + SWAP)/2 rho]`.
pub fn swap_test_on_pair(pair: &DensityMatrix) -> Result<SwapTestResult> {
    let d = local_dim_of_pair(pair)?;
    let s = swap_operator(d);
    let expect_swap = (&s * pair.matrix()).trace().re;
    Ok(SwapTestResult::from_p_plus(0.5 * (1.0 + expect_swap)))
}

/// Two-copy state after a selective swap test on `rho (x) rho`:
///
/// `rho'(+-) = 1/(4 p(+-)) sum_ij p_i p_j (|ij> +- |ji>)(<ij| +- <ji|)`
///
/// built from the eigendecomposition `rho = sum_i p_i |phi_i><phi_i|`.
pub fn swap_test_post_state(rho: &DensityMatrix, outcome: Outcome) -> Result<DensityMatrix> {
    let p = swap_test_exact(rho).probability(outcome);
    if p <= IMPOSSIBLE_OUTCOME {
        return Err(Error::ImpossibleOutcome(p));
    }
    let d = rho.dim();
    let sign = C64::new(outcome.sign(), 0.0);
    let eig = rho.eigen_decomposition();
    let mut out = CMatrix::zeros(d * d, d * d);
    let mut v = nalgebra::DVector::<C64>::zeros(d * d);
    for (pi, phi_i) in &eig {
        for (pj, phi_j) in &eig {
            let w = pi.max(0.0) * pj.max(0.0);
            if w == 0.0 {
                continue;
            }
            for a in 0..d {
                for b in 0..d {
                    v[a * d + b] = phi_i[a] * phi_j[b] + sign * phi_j[a] * phi_i[b];
                }
            }
            out += (&v * v.adjoint()) * C64::new(w, 0.0);
        }
    }
    out /= C64::new(4.0 * p, 0.0);
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Per-qubit probability of reading "1": `(1 - Tr[rho_k^2]) / 2`, clamped to
/// `[0, 1]`.
pub fn per_qubit_minus_probabilities(state: &PureState) -> Result<Vec<f64>> {
    Ok(single_qubit_purities(state)?
        .into_iter()
        .map(|p| (0.5 * (1.0 - p)).clamp(0.0, 1.0))
        .collect())
}

/// `Q = (4/n) sum_k p_minus,k`, the expected count of 1s scaled by `4/n`.
pub fn q_protocol_exact(state: &PureState) -> Result<f64> {
    let n = state.n_qubits();
    if n < 2 {
        return Err(Error::TooFewQubits { min: 2, got: n });
    }
    let p = per_qubit_minus_probabilities(state)?;
    Ok(4.0 * p.iter().sum::<f64>() / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SamplingMode {
    /// Independent Bernoulli draws from each ancilla's exact marginal.
    #[serde(rename = "exact")]
    ExactMarginal,
    /// Dense simulation of all three registers through the c-SWAP pulses,
    /// sampling the joint ancilla distribution.
    #[serde(rename = "joint")]
    FullJoint,
}

impl std::str::FromStr for SamplingMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact-marginal" => Ok(SamplingMode::ExactMarginal),
            "joint" | "full-joint" => Ok(SamplingMode::FullJoint),
            other => Err(Error::InvalidParameter(format!("unknown mode '{other}'"))),
        }
    }
}

/// Configuration of one sampled protocol run.
#[derive(Debug, Clone)]
pub struct ProtocolRun {
    state: PureState,
    n_trials: usize,
    seed: u64,
    mode: SamplingMode,
}

impl ProtocolRun {
    pub fn new(state: PureState, n_trials: usize, seed: u64, mode: SamplingMode) -> Result<Self> {
        if state.n_qubits() < 2 {
            return Err(Error::TooFewQubits {
                min: 2,
                got: state.n_qubits(),
            });
        }
        if n_trials == 0 {
            return Err(Error::InvalidParameter("n_trials must be at least 1".into()));
        }
        if state.n_qubits() > 64 {
            return Err(Error::InvalidParameter(
                "outcome masks hold at most 64 qubits".into(),
            ));
        }
        if mode == SamplingMode::FullJoint {
            let needed = 3 * state.n_qubits();
            if needed > JOINT_QUBIT_LIMIT {
                return Err(Error::Infeasible {
                    needed,
                    limit: JOINT_QUBIT_LIMIT,
                });
            }
        }
        Ok(Self {
            state,
            n_trials,
            seed,
            mode,
        })
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    pub fn n_trials(&self) -> usize {
        self.n_trials
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> SamplingMode {
        self.mode
    }
}

/// Sample mean with its standard error `sd / sqrt(N)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorStats {
    pub estimate: f64,
    pub std_error: f64,
    pub n_trials: usize,
}

impl EstimatorStats {
    /// Uses the unbiased sample variance; a single sample has zero error.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        let n = samples.len();
        if n == 0 {
            return Err(Error::Empty("estimator needs at least one sample"));
        }
        let mean = samples.iter().sum::<f64>() / n as f64;
        let std_error = if n > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Ok(Self {
            estimate: mean,
            std_error,
            n_trials: n,
        })
    }
}

/// Raw output of a sampled run.
#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSample {
    pub stats: EstimatorStats,
    /// Fraction of trials in which ancilla `k` read "1".
    pub per_qubit_frequency: Vec<f64>,
    /// Per-trial outcome masks; bit `k` set means ancilla `k` read "1".
    pub outcomes: Vec<u64>,
}

/// Distribution over control-register readouts after the parallel c-SWAPs
/// and `sigma_x` measurement. Index bit `n-1-k` is ancilla `k` (ancilla 0
/// most significant), matching the amplitude convention.
///
/// Registers are laid out as `c_0..c_(n-1), t_0..t_(n-1), s_0..s_(n-1)` and
/// each column `(c_j, t_j, s_j)` receives the Ising-pulse c-SWAP.
pub fn joint_ancilla_distribution(state: &PureState) -> Result<Vec<f64>> {
    let n = state.n_qubits();
    let total = 3 * n;
    if total > JOINT_QUBIT_LIMIT {
        return Err(Error::Infeasible {
            needed: total,
            limit: JOINT_QUBIT_LIMIT,
        });
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let plus = PureState::new(1, vec![C64::new(h, 0.0); 2])?;
    let mut control = plus.clone();
    for _ in 1..n {
        control = control.tensor(&plus);
    }
    let mut amps = control.tensor(state).tensor(state).into_amplitudes();

    for j in 0..n {
        cswap_sequence(j, n + j, 2 * n + j)?.apply(&mut amps, total);
    }
    let hadamard = gates::hadamard();
    for j in 0..n {
        kernel::apply_gate(&mut amps, total, hadamard.matrix(), &[j]);
    }

    let mut dist = vec![0.0; 1 << n];
    for (idx, a) in amps.iter().enumerate() {
        dist[idx >> (2 * n)] += a.norm_sqr();
    }
    Ok(dist)
}

fn mask_from_index(index: usize, n: usize) -> u64 {
    (0..n)
        .filter(|&k| (index >> (n - 1 - k)) & 1 == 1)
        .fold(0u64, |m, k| m | (1 << k))
}

/// Runs the sampled protocol and keeps every trial's outcome.
pub fn sample_protocol(run: &ProtocolRun) -> Result<ProtocolSample> {
    let n = run.state.n_qubits();
    let family = SeedFamily::new(run.seed);
    let trials = run.n_trials as u64;

    let outcomes: Vec<u64> = match run.mode {
        SamplingMode::ExactMarginal => {
            let p = per_qubit_minus_probabilities(&run.state)?;
            (0..trials)
                .into_par_iter()
                .map(|i| {
                    let mut rng = family.trial(i);
                    p.iter().enumerate().fold(0u64, |m, (k, &pk)| {
                        if rng.random::<f64>() < pk {
                            m | (1 << k)
                        } else {
                            m
                        }
                    })
                })
                .collect()
        }
        SamplingMode::FullJoint => {
            let dist = joint_ancilla_distribution(&run.state)?;
            let mut cdf: Vec<f64> = dist
                .iter()
                .scan(0.0, |acc, p| {
                    *acc += p;
                    Some(*acc)
                })
                .collect();
            // absorb rounding so every draw lands somewhere
            if let Some(last) = cdf.last_mut() {
                *last = f64::INFINITY;
            }
            (0..trials)
                .into_par_iter()
                .map(|i| {
                    let u: f64 = family.trial(i).random();
                    let idx = cdf.partition_point(|&c| c <= u);
                    mask_from_index(idx, n)
                })
                .collect()
        }
    };

    let scale = 4.0 / n as f64;
    let samples: Vec<f64> = outcomes
        .iter()
        .map(|m| scale * m.count_ones() as f64)
        .collect();
    let stats = EstimatorStats::from_samples(&samples)?;
    let per_qubit_frequency = (0..n)
        .map(|k| outcomes.iter().filter(|m| (*m >> k) & 1 == 1).count() as f64 / trials as f64)
        .collect();
    Ok(ProtocolSample {
        stats,
        per_qubit_frequency,
        outcomes,
    })
}

/// Sampled estimate of `Q` with its standard error.
pub fn q_protocol_sampled(run: &ProtocolRun) -> Result<EstimatorStats> {
    Ok(sample_protocol(run)?.stats)
}

/// Purity of a subset obtained directly and, when it fits, by circuit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubsetPurity {
    /// `Tr[rho_S^2]` from the reduced state.
    pub purity: f64,
    /// `(1 + purity) / 2`, the control qubit's `+` probability.
    pub p_plus: f64,
    /// Purity inferred from the simulated circuit, if it was run.
    pub circuit_purity: Option<f64>,
}

/// Purity of `subset`, cross-checked by the GHZ-controlled circuit when
/// `|subset| + 2n` qubits fit the dense limit.
pub fn subset_purity_exact(state: &PureState, subset: &QubitSubset) -> Result<SubsetPurity> {
    let purity = state.reduced_density(subset)?.purity();
    let total = subset.len() + 2 * state.n_qubits();
    let circuit_purity = if total <= JOINT_QUBIT_LIMIT {
        Some(subset_purity_circuit(state, subset)?)
    } else {
        None
    };
    Ok(SubsetPurity {
        purity,
        p_plus: 0.5 * (1.0 + purity),
        circuit_purity,
    })
}

/// Simulates the subset protocol: a control register of `|subset|` qubits is
/// put into a GHZ state by `H` on `c_0` and the ladder `CNOT(k-1, k)`,
/// `k = 1..m`, each control drives a c-SWAP on its `(t, s)` column, the
/// ladder is undone, and `c_0` is read in the `sigma_x` basis. Returns
/// `2 p_plus - 1`.
pub fn subset_purity_circuit(state: &PureState, subset: &QubitSubset) -> Result<f64> {
    subset.check_register(state.n_qubits())?;
    let n = state.n_qubits();
    let m = subset.len();
    let total = m + 2 * n;
    if total > JOINT_QUBIT_LIMIT {
        return Err(Error::Infeasible {
            needed: total,
            limit: JOINT_QUBIT_LIMIT,
        });
    }
    let control = PureState::basis(m, 0)?;
    let mut amps = control.tensor(state).tensor(state).into_amplitudes();
    let hadamard = gates::hadamard();
    let cnot = gates::cnot();

    kernel::apply_gate(&mut amps, total, hadamard.matrix(), &[0]);
    for k in 1..m {
        kernel::apply_gate(&mut amps, total, cnot.matrix(), &[k - 1, k]);
    }
    for (i, &q) in subset.indices().iter().enumerate() {
        cswap_sequence(i, m + q, m + n + q)?.apply(&mut amps, total);
    }
    for k in (1..m).rev() {
        kernel::apply_gate(&mut amps, total, cnot.matrix(), &[k - 1, k]);
    }
    kernel::apply_gate(&mut amps, total, hadamard.matrix(), &[0]);

    let c0 = 1usize << (total - 1);
    let p_plus: f64 = amps
        .iter()
        .enumerate()
        .filter(|(idx, _)| idx & c0 == 0)
        .map(|(_, a)| a.norm_sqr())
        .sum();
    Ok(2.0 * p_plus - 1.0)
}

/// Sampled subset purity: each trial reads `c_0`, scoring `+1` for the plus
/// outcome and `-1` for minus, so the mean estimates `Tr[rho_S^2]`.
pub fn sample_subset_purity(
    state: &PureState,
    subset: &QubitSubset,
    n_trials: usize,
    seed: u64,
) -> Result<EstimatorStats> {
    if n_trials == 0 {
        return Err(Error::InvalidParameter("n_trials must be at least 1".into()));
    }
    let p_plus = subset_purity_exact(state, subset)?.p_plus.clamp(0.0, 1.0);
    let family = SeedFamily::new(seed);
    let samples: Vec<f64> = (0..n_trials as u64)
        .into_par_iter()
        .map(|i| {
            if family.trial(i).random::<f64>() < p_plus {
                1.0
            } else {
                -1.0
            }
        })
        .collect();
    EstimatorStats::from_samples(&samples)
}

/// Absolute error of the exact-marginal estimator at each trial count, all
/// runs sharing `seed`.
pub fn convergence_sweep(
    state: &PureState,
    trial_counts: &[usize],
    seed: u64,
) -> Result<Vec<(usize, f64)>> {
    if trial_counts.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter(
            "trial counts must be strictly ascending".into(),
        ));
    }
    let q = q_protocol_exact(state)?;
    trial_counts
        .iter()
        .map(|&count| {
            let run = ProtocolRun::new(state.clone(), count, seed, SamplingMode::ExactMarginal)?;
            Ok((count, (q_protocol_sampled(&run)?.estimate - q).abs()))
        })
        .collect()
}

/// JSON export of a per-qubit protocol run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub state: String,
    pub mode: SamplingMode,
    pub seed: u64,
    pub n_trials: usize,
    pub per_qubit_p_minus: Vec<f64>,
    pub per_qubit_p_minus_exact: Vec<f64>,
    pub q_estimate: f64,
    pub std_error: f64,
    pub q_exact: f64,
}

impl ProtocolReport {
    pub fn run(state_label: impl Into<String>, run: &ProtocolRun) -> Result<Self> {
        let sample = sample_protocol(run)?;
        Ok(Self {
            state: state_label.into(),
            mode: run.mode,
            seed: run.seed,
            n_trials: run.n_trials,
            per_qubit_p_minus: sample.per_qubit_frequency,
            per_qubit_p_minus_exact: per_qubit_minus_probabilities(&run.state)?,
            q_estimate: sample.stats.estimate,
            std_error: sample.stats.std_error,
            q_exact: q_protocol_exact(&run.state)?,
        })
    }
}

/// JSON export of a subset-purity run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetReport {
    pub state: String,
    pub subset: Vec<usize>,
    pub seed: u64,
    pub n_trials: usize,
    pub purity_direct: f64,
    pub purity_circuit: Option<f64>,
    pub p_plus: f64,
    pub purity_estimate: f64,
    pub std_error: f64,
}

impl SubsetReport {
    pub fn run(
        state_label: impl Into<String>,
        state: &PureState,
        subset: &QubitSubset,
        n_trials: usize,
        seed: u64,
    ) -> Result<Self> {
        let exact = subset_purity_exact(state, subset)?;
        let sampled = sample_subset_purity(state, subset, n_trials, seed)?;
        Ok(Self {
            state: state_label.into(),
            subset: subset.indices().to_vec(),
            seed,
            n_trials,
            purity_direct: exact.purity,
            purity_circuit: exact.circuit_purity,
            p_plus: exact.p_plus,
            purity_estimate: sampled.estimate,
            std_error: sampled.std_error,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::q_purity;
    use crate::random::random_density;
    use crate::state::{make_bell, make_ghz, make_product_state, make_w};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    fn product3() -> PureState {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        make_product_state(&[[re(h), re(h)], [re(1.0), re(0.0)], [re(0.6), C64::new(0.0, 0.8)]])
            .unwrap()
    }

    /// `P (rho (x) rho) P / p` with `P = (1 +- SWAP) / 2`.
    fn projector_oracle(rho: &DensityMatrix, outcome: Outcome) -> CMatrix {
        let d = rho.dim();
        let s = swap_operator(d);
        let id = CMatrix::identity(d * d, d * d);
        let proj = (id + s * C64::new(outcome.sign(), 0.0)) * C64::new(0.5, 0.0);
        let p = swap_test_exact(rho).probability(outcome);
        &proj * rho.tensor(rho).matrix() * &proj / C64::new(p, 0.0)
    }

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().fold(0.0f64, |w, z| w.max(z.norm()))
    }

    #[test]
    fn swap_test_examples() {
        let pure = make_ghz(2).unwrap().projector();
        assert!((swap_test_exact(&pure).p_plus - 1.0).abs() < 1e-12);
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!((swap_test_exact(&mixed).p_plus - 0.75).abs() < 1e-15);
        let g3 = make_ghz(3).unwrap();
        let rho = g3.reduced_density(&QubitSubset::single(1, 3).unwrap()).unwrap();
        let r = swap_test_exact(&rho);
        assert!((r.p_plus - 0.75).abs() < 1e-12);
        assert!((r.p_plus + r.p_minus - 1.0).abs() < 1e-12);
    }

    #[test]
    fn post_state_of_pure_input_is_unchanged() {
        let psi = PureState::new(1, vec![re(0.6), C64::new(0.0, 0.8)]).unwrap();
        let rho = psi.projector();
        let out = swap_test_post_state(&rho, Outcome::Plus).unwrap();
        assert!(out.max_deviation(&rho.tensor(&rho)).unwrap() < 1e-12);
        assert!(matches!(
            swap_test_post_state(&rho, Outcome::Minus),
            Err(Error::ImpossibleOutcome(_))
        ));
    }

    #[test]
    fn maximally_mixed_minus_gives_singlet() {
        let rho = DensityMatrix::maximally_mixed(2);
        let out = swap_test_post_state(&rho, Outcome::Minus).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let singlet = PureState::new(2, vec![re(0.0), re(h), re(-h), re(0.0)]).unwrap();
        assert!(out.max_deviation(&singlet.projector()).unwrap() < 1e-12);
        let reduced = out.partial_trace(&QubitSubset::single(0, 2).unwrap()).unwrap();
        assert!(reduced.max_deviation(&rho).unwrap() < 1e-12);
    }

    #[test]
    fn post_state_matches_projector_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=2 {
            for _ in 0..5 {
                let rho = random_density(n, &mut rng);
                for outcome in [Outcome::Plus, Outcome::Minus] {
                    let out = swap_test_post_state(&rho, outcome).unwrap();
                    let oracle = projector_oracle(&rho, outcome);
                    assert!(max_abs(&(out.matrix() - oracle)) < 1e-10);
                    let s = swap_operator(rho.dim());
                    let eigen_residual =
                        &s * out.matrix() - out.matrix() * C64::new(outcome.sign(), 0.0);
                    assert!(max_abs(&eigen_residual) < 1e-10);
                    let again = swap_test_on_pair(&out).unwrap();
                    assert!((again.probability(outcome) - 1.0).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn q_protocol_exact_examples() {
        assert!(q_protocol_exact(&product3()).unwrap().abs() < 1e-12);
        assert!((q_protocol_exact(&make_ghz(4).unwrap()).unwrap() - 1.0).abs() < 1e-12);
        assert!((q_protocol_exact(&make_w(4).unwrap()).unwrap() - 0.75).abs() < 1e-12);
        assert!(q_protocol_exact(&PureState::basis(1, 0).unwrap()).is_err());
    }

    #[test]
    fn product_state_samples_exactly_zero() {
        for mode in [SamplingMode::ExactMarginal, SamplingMode::FullJoint] {
            let run = ProtocolRun::new(product3(), 2000, 99, mode).unwrap();
            let stats = q_protocol_sampled(&run).unwrap();
            assert_eq!(stats.estimate, 0.0, "{mode:?}");
            assert_eq!(stats.std_error, 0.0, "{mode:?}");
        }
    }

    #[test]
    fn ghz3_estimate_is_close() {
        let run =
            ProtocolRun::new(make_ghz(3).unwrap(), 100_000, 1, SamplingMode::ExactMarginal).unwrap();
        let stats = q_protocol_sampled(&run).unwrap();
        assert!(stats.std_error < 0.01);
        assert!((stats.estimate - 1.0).abs() < 3.0 * stats.std_error);
        assert_eq!(stats.n_trials, 100_000);
    }

    #[test]
    fn sampling_is_deterministic() {
        for mode in [SamplingMode::ExactMarginal, SamplingMode::FullJoint] {
            let run = ProtocolRun::new(make_w(3).unwrap(), 5000, 42, mode).unwrap();
            let a = sample_protocol(&run).unwrap();
            let b = sample_protocol(&run).unwrap();
            assert_eq!(a, b);
            let other = ProtocolRun::new(make_w(3).unwrap(), 5000, 43, mode).unwrap();
            assert_ne!(a.outcomes, sample_protocol(&other).unwrap().outcomes);
        }
    }

    #[test]
    fn run_validation() {
        assert!(ProtocolRun::new(make_ghz(3).unwrap(), 0, 1, SamplingMode::ExactMarginal).is_err());
        assert!(matches!(
            ProtocolRun::new(make_ghz(5).unwrap(), 10, 1, SamplingMode::FullJoint),
            Err(Error::Infeasible { needed: 15, limit: 14 })
        ));
        assert!(ProtocolRun::new(make_ghz(4).unwrap(), 10, 1, SamplingMode::FullJoint).is_ok());
    }

    #[test]
    fn joint_distribution_marginals_are_exact() {
        for state in [make_w(3).unwrap(), make_ghz(3).unwrap(), product3()] {
            let dist = joint_ancilla_distribution(&state).unwrap();
            assert!((dist.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            let exact = per_qubit_minus_probabilities(&state).unwrap();
            for (k, pk) in exact.iter().enumerate() {
                let marginal: f64 = dist
                    .iter()
                    .enumerate()
                    .filter(|(idx, _)| (idx >> (2 - k)) & 1 == 1)
                    .map(|(_, p)| p)
                    .sum();
                assert!((marginal - pk).abs() < 1e-10, "k={k}");
            }
        }
    }

    #[test]
    fn subset_purity_examples() {
        let phi = make_bell().tensor(&make_bell());
        let psi = make_ghz(4).unwrap();
        let pair = QubitSubset::new(vec![0, 1], 4).unwrap();

        let a = subset_purity_exact(&phi, &pair).unwrap();
        assert!((a.purity - 1.0).abs() < 1e-12);
        assert!((a.circuit_purity.unwrap() - a.purity).abs() < 1e-9);

        let b = subset_purity_exact(&psi, &pair).unwrap();
        assert!((b.purity - 0.5).abs() < 1e-12);
        assert!((b.circuit_purity.unwrap() - b.purity).abs() < 1e-9);
        assert!((b.p_plus - 0.75).abs() < 1e-12);
    }

    #[test]
    fn singleton_subset_matches_swap_test() {
        let w = make_w(3).unwrap();
        for k in 0..3 {
            let single = QubitSubset::single(k, 3).unwrap();
            let rho = w.reduced_density(&single).unwrap();
            let s = subset_purity_exact(&w, &single).unwrap();
            assert!((s.p_plus - swap_test_exact(&rho).p_plus).abs() < 1e-12);
            assert!((s.circuit_purity.unwrap() - rho.purity()).abs() < 1e-9);
        }
    }

    #[test]
    fn whole_register_is_pure() {
        let w = make_w(4).unwrap();
        let all = QubitSubset::all(4).unwrap();
        let s = subset_purity_exact(&w, &all).unwrap();
        assert!((s.purity - 1.0).abs() < 1e-9);
        assert!((s.circuit_purity.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn oversized_subset_circuit_is_skipped() {
        let g = make_ghz(6).unwrap();
        let sub = QubitSubset::new(vec![0, 1, 2], 6).unwrap();
        assert!(subset_purity_exact(&g, &sub).unwrap().circuit_purity.is_none());
        assert!(matches!(
            subset_purity_circuit(&g, &sub),
            Err(Error::Infeasible { .. })
        ));
    }

    #[test]
    fn sampled_subset_purity() {
        let psi = make_ghz(4).unwrap();
        let pair = QubitSubset::new(vec![0, 1], 4).unwrap();
        let s = sample_subset_purity(&psi, &pair, 50_000, 3).unwrap();
        assert!((s.estimate - 0.5).abs() < 4.0 * s.std_error);
        let phi = make_bell().tensor(&make_bell());
        let s = sample_subset_purity(&phi, &pair, 1000, 3).unwrap();
        assert_eq!(s.estimate, 1.0);
    }

    #[test]
    fn convergence_sweep_examples() {
        let rows = convergence_sweep(&product3(), &[100, 1000], 5).unwrap();
        assert!(rows.iter().all(|&(_, e)| e == 0.0));
        let rows = convergence_sweep(&make_w(3).unwrap(), &[1_000_000], 5).unwrap();
        assert!(rows[0].1 < 0.005);
        assert!(convergence_sweep(&make_w(3).unwrap(), &[100, 100], 5).is_err());
    }

    #[test]
    fn q_protocol_matches_purity_route() {
        for state in [make_w(5).unwrap(), make_ghz(3).unwrap(), product3()] {
            let a = q_protocol_exact(&state).unwrap();
            let b = q_purity(&state).unwrap();
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn estimator_stats() {
        let s = EstimatorStats::from_samples(&[1.0, 3.0]).unwrap();
        assert_eq!(s.estimate, 2.0);
        // sd = sqrt(2), se = sqrt(2)/sqrt(2)
        assert!((s.std_error - 1.0).abs() < 1e-15);
        assert_eq!(EstimatorStats::from_samples(&[5.0]).unwrap().std_error, 0.0);
        assert!(EstimatorStats::from_samples(&[]).is_err());
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("exact".parse::<SamplingMode>().unwrap(), SamplingMode::ExactMarginal);
        assert_eq!("joint".parse::<SamplingMode>().unwrap(), SamplingMode::FullJoint);
        assert!("fast".parse::<SamplingMode>().is_err());
    }
}
