//! Pulse sequences over single-qubit rotations and Ising `ZZ` couplings.
//!
//! Every pulse is stored with a signed exponent: a rotation is
//! `exp(i * angle * sigma_axis)` and a coupling is
//! `exp(i * angle * Z (x) Z)`. The SWAP, three-body and Fredkin sequences
//! below are written as operator products in left-to-right order (the
//! leftmost factor acts last) and reversed into application order, so each
//! factor can be checked against the written identity one by one.
//!
//! Global-phase prefactors are not tracked; verification is up to a global
//! phase.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates;
use crate::kernel;
use crate::state::check_targets;
use crate::unitary::UnitaryMatrix;
use crate::{CMatrix, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn pauli(self) -> CMatrix {
        match self {
            Axis::X => gates::pauli_x(),
            Axis::Y => gates::pauli_y(),
            Axis::Z => gates::pauli_z(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Pulse {
    /// `exp(i * angle * sigma_axis)` on `target`.
    Rotation { axis: Axis, angle: f64, target: usize },
    /// `exp(i * angle * Z (x) Z)` on `pair`.
    Ising { angle: f64, pair: (usize, usize) },
}

impl Pulse {
    pub fn rx(angle: f64, target: usize) -> Self {
        Pulse::Rotation { axis: Axis::X, angle, target }
    }

    pub fn ry(angle: f64, target: usize) -> Self {
        Pulse::Rotation { axis: Axis::Y, angle, target }
    }

    pub fn rz(angle: f64, target: usize) -> Self {
        Pulse::Rotation { axis: Axis::Z, angle, target }
    }

    pub fn zz(angle: f64, a: usize, b: usize) -> Self {
        Pulse::Ising { angle, pair: (a, b) }
    }

    pub fn angle(&self) -> f64 {
        match *self {
            Pulse::Rotation { angle, .. } | Pulse::Ising { angle, .. } => angle,
        }
    }

    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Pulse::Rotation { target, .. } => vec![target],
            Pulse::Ising { pair: (a, b), .. } => vec![a, b],
        }
    }

    pub fn is_ising(&self) -> bool {
        matches!(self, Pulse::Ising { .. })
    }

    /// Same pulse with the exponent negated.
    pub fn inverse(&self) -> Self {
        match *self {
            Pulse::Rotation { axis, angle, target } => Pulse::Rotation {
                axis,
                angle: -angle,
                target,
            },
            Pulse::Ising { angle, pair } => Pulse::Ising {
                angle: -angle,
                pair,
            },
        }
    }

    fn validate(&self, register_size: usize) -> Result<()> {
        if !self.angle().is_finite() {
            return Err(Error::InvalidParameter(format!(
                "pulse angle {} is not finite",
                self.angle()
            )));
        }
        check_targets(&self.targets(), register_size)
    }

    /// Matrix on the pulse's own targets (2x2 or 4x4), using
    /// `exp(i a P) = cos(a) I + i sin(a) P` for `P^2 = I`.
    pub fn local_matrix(&self) -> CMatrix {
        match *self {
            Pulse::Rotation { axis, angle, .. } => {
                CMatrix::identity(2, 2) * C64::new(angle.cos(), 0.0)
                    + axis.pauli() * C64::new(0.0, angle.sin())
            }
            Pulse::Ising { angle, .. } => {
                let even = C64::from_polar(1.0, angle);
                let odd = C64::from_polar(1.0, -angle);
                CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![even, odd, odd, even]))
            }
        }
    }

    pub(crate) fn apply(&self, amps: &mut [C64], n_qubits: usize) {
        kernel::apply_gate(amps, n_qubits, &self.local_matrix(), &self.targets());
    }
}

/// Full `2^register_size` unitary of one pulse.
pub fn pulse_to_unitary(p: &Pulse, register_size: usize) -> Result<UnitaryMatrix> {
    p.validate(register_size)?;
    let mut seq = PulseSequence::new(register_size);
    seq.push(*p)?;
    sequence_to_unitary(&seq)
}

/// Pulses in application order on a register of `register_size` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseSequence {
    register_size: usize,
    pulses: Vec<Pulse>,
}

impl PulseSequence {
    pub fn new(register_size: usize) -> Self {
        Self {
            register_size,
            pulses: Vec::new(),
        }
    }

    /// Builds a sequence from pulses in application order.
    pub fn from_pulses(register_size: usize, pulses: Vec<Pulse>) -> Result<Self> {
        for p in &pulses {
            p.validate(register_size)?;
        }
        Ok(Self {
            register_size,
            pulses,
        })
    }

    /// Builds a sequence from an operator product written left to right, so
    /// the last factor is applied first.
    pub fn from_operator_product(register_size: usize, mut factors: Vec<Pulse>) -> Result<Self> {
        factors.reverse();
        Self::from_pulses(register_size, factors)
    }

    pub fn push(&mut self, p: Pulse) -> Result<()> {
        p.validate(self.register_size)?;
        self.pulses.push(p);
        Ok(())
    }

    /// Appends `other` so that it acts after `self`.
    pub fn then(mut self, other: &PulseSequence) -> Result<Self> {
        for p in &other.pulses {
            self.push(*p)?;
        }
        Ok(self)
    }

    pub fn pulses(&self) -> &[Pulse] {
        &self.pulses
    }

    pub fn register_size(&self) -> usize {
        self.register_size
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    pub fn ising_pulses(&self) -> impl Iterator<Item = &Pulse> {
        self.pulses.iter().filter(|p| p.is_ising())
    }

    /// The sequence that undoes this one.
    pub fn inverse(&self) -> Self {
        Self {
            register_size: self.register_size,
            pulses: self.pulses.iter().rev().map(Pulse::inverse).collect(),
        }
    }

    /// Applies every pulse to an amplitude vector of a register that may be
    /// larger than `register_size`; pulse targets are used as-is.
    pub(crate) fn apply(&self, amps: &mut [C64], n_qubits: usize) {
        debug_assert!(n_qubits >= self.register_size);
        for p in &self.pulses {
            p.apply(amps, n_qubits);
        }
    }

    /// The same pulses with every qubit index sent through `map`.
    pub fn relabeled(&self, register_size: usize, map: impl Fn(usize) -> usize) -> Result<Self> {
        let pulses = self
            .pulses
            .iter()
            .map(|p| match *p {
                Pulse::Rotation { axis, angle, target } => Pulse::Rotation {
                    axis,
                    angle,
                    target: map(target),
                },
                Pulse::Ising { angle, pair: (a, b) } => Pulse::Ising {
                    angle,
                    pair: (map(a), map(b)),
                },
            })
            .collect();
        Self::from_pulses(register_size, pulses)
    }

    pub fn to_json(&self) -> Result<String> {
        let records: Vec<PulseRecord> = self.pulses.iter().map(PulseRecord::from).collect();
        Ok(serde_json::to_string_pretty(&records)?)
    }

    /// Parses an exported pulse array. The register size is one more than the
    /// largest target index.
    pub fn from_json(s: &str) -> Result<Self> {
        let records: Vec<PulseRecord> = serde_json::from_str(s)?;
        let pulses = records
            .into_iter()
            .map(Pulse::try_from)
            .collect::<Result<Vec<_>>>()?;
        let register_size = pulses
            .iter()
            .flat_map(|p| p.targets())
            .max()
            .map_or(0, |m| m + 1);
        Self::from_pulses(register_size, pulses)
    }
}

/// JSON form of one pulse: `{kind, axis?, angle, targets}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseRecord {
    pub kind: PulseKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub axis: Option<Axis>,
    pub angle: f64,
    pub targets: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PulseKind {
    Rotation,
    Ising,
}

impl From<&Pulse> for PulseRecord {
    fn from(p: &Pulse) -> Self {
        match *p {
            Pulse::Rotation { axis, angle, target } => PulseRecord {
                kind: PulseKind::Rotation,
                axis: Some(axis),
                angle,
                targets: vec![target],
            },
            Pulse::Ising { angle, pair: (a, b) } => PulseRecord {
                kind: PulseKind::Ising,
                axis: None,
                angle,
                targets: vec![a, b],
            },
        }
    }
}

impl TryFrom<PulseRecord> for Pulse {
    type Error = Error;

    fn try_from(r: PulseRecord) -> Result<Self> {
        match (r.kind, r.axis, r.targets.as_slice()) {
            (PulseKind::Rotation, Some(axis), &[target]) => Ok(Pulse::Rotation {
                axis,
                angle: r.angle,
                target,
            }),
            (PulseKind::Ising, None, &[a, b]) => Ok(Pulse::Ising {
                angle: r.angle,
                pair: (a, b),
            }),
            _ => Err(Error::Format(format!(
                "pulse record {:?} has inconsistent kind/axis/targets",
                r
            ))),
        }
    }
}

/// Ordered product of the pulses, first pulse rightmost.
pub fn sequence_to_unitary(seq: &PulseSequence) -> Result<UnitaryMatrix> {
    if seq.is_empty() {
        return Err(Error::Empty("pulse sequence"));
    }
    let n = seq.register_size;
    let dim = 1usize << n;
    let mut m = CMatrix::identity(dim, dim);
    let mut column = vec![C64::new(0.0, 0.0); dim];
    for c in 0..dim {
        column.iter_mut().zip(m.column(c).iter()).for_each(|(d, s)| *d = *s);
        seq.apply(&mut column, n);
        m.column_mut(c)
            .iter_mut()
            .zip(&column)
            .for_each(|(d, s)| *d = *s);
    }
    Ok(UnitaryMatrix::from_matrix_unchecked(m))
}

fn distinct(qubits: &[usize]) -> Result<()> {
    let n = qubits.iter().max().map_or(0, |m| m + 1);
    check_targets(qubits, n)
}

/// SWAP of `t` and `s` from three `ZZ` couplings of angle `-pi/4`:
///
/// ```text
/// SWAP ~ e^{i pi/4 (Yt+Ys)} e^{-i pi/4 ZZ} e^{-i pi/4 (Yt+Ys)}
///        e^{i pi/4 (Xt+Xs)} e^{-i pi/4 ZZ} e^{-i pi/4 (Xt+Xs)} e^{-i pi/4 ZZ}
/// ```
///
/// The `e^{i pi/4}` prefactor is a global phase and is dropped.
pub fn swap_sequence(t: usize, s: usize) -> Result<PulseSequence> {
    distinct(&[t, s])?;
    let size = t.max(s) + 1;
    PulseSequence::from_operator_product(
        size,
        vec![
            Pulse::ry(FRAC_PI_4, t),
            Pulse::ry(FRAC_PI_4, s),
            Pulse::zz(-FRAC_PI_4, t, s),
            Pulse::ry(-FRAC_PI_4, t),
            Pulse::ry(-FRAC_PI_4, s),
            Pulse::rx(FRAC_PI_4, t),
            Pulse::rx(FRAC_PI_4, s),
            Pulse::zz(-FRAC_PI_4, t, s),
            Pulse::rx(-FRAC_PI_4, t),
            Pulse::rx(-FRAC_PI_4, s),
            Pulse::zz(-FRAC_PI_4, t, s),
        ],
    )
}

fn three_body_factors(phi: f64, c: usize, t: usize, s: usize) -> Vec<Pulse> {
    vec![
        Pulse::ry(-FRAC_PI_2, c),
        Pulse::ry(-FRAC_PI_4, t),
        Pulse::rx(-FRAC_PI_4, t),
        Pulse::zz(-FRAC_PI_4, c, t),
        Pulse::ry(FRAC_PI_4, c),
        Pulse::rx(FRAC_PI_4, t),
        Pulse::zz(-phi, t, s),
        Pulse::ry(-FRAC_PI_4, c),
        Pulse::rx(-FRAC_PI_4, t),
        Pulse::zz(FRAC_PI_4, c, t),
        Pulse::ry(FRAC_PI_2, c),
        Pulse::rx(FRAC_PI_4, t),
        Pulse::ry(FRAC_PI_4, t),
    ]
}

/// `exp(i phi Zc Zt Zs)` from couplings on `(c,t)` and `(t,s)` only:
///
/// ```text
/// e^{-i pi/2 Yc} e^{-i pi/4 Yt} e^{-i pi/4 Xt} e^{-i pi/4 ZcZt} e^{i pi/4 Yc}
/// e^{i pi/4 Xt} e^{-i phi ZtZs} e^{-i pi/4 Yc} e^{-i pi/4 Xt} e^{i pi/4 ZcZt}
/// e^{i pi/2 Yc} e^{i pi/4 Xt} e^{i pi/4 Yt}
/// ```
pub fn three_body_sequence(phi: f64, c: usize, t: usize, s: usize) -> Result<PulseSequence> {
    distinct(&[c, t, s])?;
    let size = c.max(t).max(s) + 1;
    PulseSequence::from_operator_product(size, three_body_factors(phi, c, t, s))
}

/// Fredkin gate (control `c`, targets `t`, `s`) as the SWAP sequence with
/// each `e^{-i pi/4 ZtZs}` replaced by its controlled version
/// `e^{-i pi/8 ZtZs} e^{i pi/8 ZcZtZs}`, plus the `e^{-i pi/8 Zc}` phase
/// correction on the control. Three-body factors are expanded inline.
pub fn cswap_sequence(c: usize, t: usize, s: usize) -> Result<PulseSequence> {
    distinct(&[c, t, s])?;
    let size = c.max(t).max(s) + 1;
    let controlled_zz = |f: &mut Vec<Pulse>| {
        f.push(Pulse::zz(-FRAC_PI_8, t, s));
        f.extend(three_body_factors(FRAC_PI_8, c, t, s));
    };
    let mut f = vec![
        Pulse::rz(-FRAC_PI_8, c),
        Pulse::ry(FRAC_PI_4, t),
        Pulse::ry(FRAC_PI_4, s),
    ];
    controlled_zz(&mut f);
    f.extend([
        Pulse::ry(-FRAC_PI_4, t),
        Pulse::ry(-FRAC_PI_4, s),
        Pulse::rx(FRAC_PI_4, t),
        Pulse::rx(FRAC_PI_4, s),
    ]);
    controlled_zz(&mut f);
    f.extend([Pulse::rx(-FRAC_PI_4, t), Pulse::rx(-FRAC_PI_4, s)]);
    controlled_zz(&mut f);
    PulseSequence::from_operator_product(size, f)
}

/// Ising coupling strength and whether its sign can be flipped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingModel {
    g: f64,
    sign_tunable: bool,
}

impl CouplingModel {
    pub fn new(g: f64, sign_tunable: bool) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "coupling strength must be positive, got {g}"
            )));
        }
        Ok(Self { g, sign_tunable })
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn sign_tunable(&self) -> bool {
        self.sign_tunable
    }

    /// Evolution time needed to realize `exp(i * angle * ZZ)`.
    ///
    /// `H = g ZZ` evolves as `exp(-i g t ZZ)`, so a pulse needs
    /// `g t = -angle (mod 2 pi)`. With a fixed-sign coupling the shortest
    /// forward time is `(-angle) mod 2 pi`; a tunable sign can also run
    /// `angle mod 2 pi` with `g < 0`.
    pub fn pulse_time(&self, angle: f64) -> f64 {
        let two_pi = 2.0 * PI;
        let forward = (-angle).rem_euclid(two_pi);
        let cost = if self.sign_tunable {
            forward.min(angle.rem_euclid(two_pi))
        } else {
            forward
        };
        cost / self.g
    }
}

/// Total two-qubit interaction time; single-qubit pulses are free.
pub fn interaction_time(seq: &PulseSequence, model: &CouplingModel) -> f64 {
    seq.ising_pulses().map(|p| model.pulse_time(p.angle())).sum()
}

/// Max elementwise deviation after aligning `v` to `u` by the phase of
/// `Tr(u^dagger v)`. Returns infinity when the trace vanishes.
pub fn phase_aligned_deviation(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    let (tr, _) = overlap(u, v)?;
    if tr.norm() == 0.0 {
        return Ok(f64::INFINITY);
    }
    let phase = tr / tr.norm();
    Ok((u.matrix() * phase - v.matrix())
        .iter()
        .fold(0.0f64, |w, z| w.max(z.norm())))
}

fn overlap(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<(C64, f64)> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            got: v.dim(),
        });
    }
    let tr = (u.matrix().adjoint() * v.matrix()).trace();
    Ok((tr, tr.norm() / u.dim() as f64))
}

/// `1 - |Tr(u^dagger v)| / dim`.
pub fn fidelity_deficit(u: &UnitaryMatrix, v: &UnitaryMatrix) -> Result<f64> {
    Ok(1.0 - overlap(u, v)?.1)
}

/// True iff the normalized trace overlap exceeds `1 - tol` and the
/// phase-aligned elementwise deviation is below `tol * dim`.
pub fn equal_up_to_global_phase(u: &UnitaryMatrix, v: &UnitaryMatrix, tol: f64) -> Result<bool> {
    let (_, fid) = overlap(u, v)?;
    if fid <= 1.0 - tol {
        return Ok(false);
    }
    Ok(phase_aligned_deviation(u, v)? < tol * u.dim() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dev(u: &UnitaryMatrix, v: &UnitaryMatrix) -> f64 {
        phase_aligned_deviation(u, v).unwrap()
    }

    #[test]
    fn rotation_angle_zero_is_identity() {
        let u = pulse_to_unitary(&Pulse::rz(0.0, 1), 2).unwrap();
        assert_eq!(u, UnitaryMatrix::identity(2));
    }

    #[test]
    fn ising_pi_is_minus_identity() {
        let u = pulse_to_unitary(&Pulse::zz(PI, 0, 2), 3).unwrap();
        let minus = UnitaryMatrix::identity(3).scaled(C64::new(-1.0, 0.0));
        assert!((u.matrix() - minus.matrix()).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn pulse_validation() {
        assert!(matches!(
            pulse_to_unitary(&Pulse::zz(0.1, 1, 1), 2),
            Err(Error::RepeatedQubit(1))
        ));
        assert!(matches!(
            pulse_to_unitary(&Pulse::rx(0.1, 2), 2),
            Err(Error::QubitOutOfRange { .. })
        ));
        assert!(pulse_to_unitary(&Pulse::rx(f64::NAN, 0), 1).is_err());
    }

    #[test]
    fn sequence_ordering() {
        let p = Pulse::rx(0.4, 0);
        let q = Pulse::zz(0.9, 0, 1);
        let seq = PulseSequence::from_pulses(2, vec![p, q]).unwrap();
        let expect = pulse_to_unitary(&q, 2)
            .unwrap()
            .compose(&pulse_to_unitary(&p, 2).unwrap())
            .unwrap();
        assert!(dev(&sequence_to_unitary(&seq).unwrap(), &expect) < 1e-14);
        assert!(matches!(
            sequence_to_unitary(&PulseSequence::new(2)),
            Err(Error::Empty(_))
        ));
        let single = PulseSequence::from_pulses(2, vec![p]).unwrap();
        assert_eq!(
            sequence_to_unitary(&single).unwrap(),
            pulse_to_unitary(&p, 2).unwrap()
        );
    }

    #[test]
    fn pulse_then_inverse_is_identity() {
        let p = Pulse::ry(0.77, 1);
        let seq = PulseSequence::from_pulses(2, vec![p, p.inverse()]).unwrap();
        let u = sequence_to_unitary(&seq).unwrap();
        assert!((u.matrix() - UnitaryMatrix::identity(2).matrix())
            .iter()
            .all(|z| z.norm() < 1e-10));
    }

    #[test]
    fn swap_sequence_matches_swap() {
        let u = sequence_to_unitary(&swap_sequence(0, 1).unwrap()).unwrap();
        assert!(dev(&u, &gates::swap()) < 1e-9);
        assert!(equal_up_to_global_phase(&u, &gates::swap(), 1e-9).unwrap());
        assert!(swap_sequence(2, 2).is_err());
    }

    #[test]
    fn three_body_matches_diagonal() {
        for phi in [0.0, FRAC_PI_8, 0.3, -1.1] {
            let u = sequence_to_unitary(&three_body_sequence(phi, 0, 1, 2).unwrap()).unwrap();
            assert!(dev(&u, &gates::zzz_phase(phi)) < 1e-9, "phi={phi}");
        }
        assert!(three_body_sequence(0.1, 0, 1, 0).is_err());
    }

    #[test]
    fn cswap_matches_fredkin() {
        let u = sequence_to_unitary(&cswap_sequence(0, 1, 2).unwrap()).unwrap();
        assert!(dev(&u, &gates::cswap()) < 1e-9);
        assert!(cswap_sequence(0, 0, 2).is_err());
    }

    #[test]
    fn cswap_couplings_are_nearest_neighbour() {
        let (c, t, s) = (4, 0, 2);
        let seq = cswap_sequence(c, t, s).unwrap();
        for p in seq.ising_pulses() {
            let Pulse::Ising { pair: (a, b), .. } = *p else { unreachable!() };
            let pair = (a.min(b), a.max(b));
            assert!(pair == (t.min(c), t.max(c)) || pair == (t.min(s), t.max(s)));
        }
    }

    #[test]
    fn interaction_budgets() {
        let seq = cswap_sequence(0, 1, 2).unwrap();
        let fixed = CouplingModel::new(1.0, false).unwrap();
        let tunable = CouplingModel::new(1.0, true).unwrap();
        assert!((interaction_time(&seq, &fixed) - 27.0 * PI / 4.0).abs() < 1e-12);
        assert!((interaction_time(&seq, &tunable) - 9.0 * PI / 4.0).abs() < 1e-12);
        let g2 = CouplingModel::new(2.0, false).unwrap();
        assert!((interaction_time(&seq, &g2) - 27.0 * PI / 8.0).abs() < 1e-12);
        assert_eq!(interaction_time(&PulseSequence::new(3), &fixed), 0.0);
        assert!(CouplingModel::new(0.0, false).is_err());
        assert!(CouplingModel::new(-1.0, true).is_err());
    }

    #[test]
    fn phase_comparison() {
        let u = gates::cswap();
        let v = u.scaled(C64::from_polar(1.0, 1.234));
        assert!(equal_up_to_global_phase(&u, &v, 1e-9).unwrap());
        assert!(!equal_up_to_global_phase(&UnitaryMatrix::identity(2), &gates::swap(), 1e-9).unwrap());
        assert!(equal_up_to_global_phase(&u, &UnitaryMatrix::identity(2), 1e-9).is_err());
    }

    #[test]
    fn json_round_trip() {
        let seq = cswap_sequence(0, 1, 2).unwrap();
        let text = seq.to_json().unwrap();
        assert_eq!(PulseSequence::from_json(&text).unwrap(), seq);
        let bad = r#"[{"kind":"ising","axis":"x","angle":0.1,"targets":[0,1]}]"#;
        assert!(matches!(PulseSequence::from_json(bad), Err(Error::Format(_))));
    }
}
