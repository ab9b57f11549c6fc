//! Error and noise models.
//!
//! - Deliberate bit flips on data qubits, either coherent (`RX(θ)` with
//!   `p_err = sin²(θ/2)`) or incoherent (enumerated flip patterns with
//!   binomial weights).
//! - Classical readout confusion on declared ancilla results, with an
//!   optional veto that discards records (strong postselection).
//! - Amplitude damping plus pure dephasing per moment, from per-qubit
//!   `T1`/`T2`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Num;

use crate::circuit::{Branch, Gate, GateKind, Moment, Outcomes, SINGLE_QUBIT_NS};
use crate::error::{Error, Result};
use crate::qstate::{CMatrix, KrausChannel};
use crate::scalar::Real;

/// Data qubit of the repetition code; the discriminant is its register index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DataQubit {
    Top = 0,
    Middle = 1,
    Bottom = 2,
}

impl DataQubit {
    pub const ALL: [DataQubit; 3] = [DataQubit::Top, DataQubit::Middle, DataQubit::Bottom];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn tag(self) -> char {
        match self {
            DataQubit::Top => 't',
            DataQubit::Middle => 'm',
            DataQubit::Bottom => 'b',
        }
    }
}

/// Where first-round errors are injected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scenario {
    /// Errors on `D_m` only.
    Single,
    /// Errors on all three data qubits.
    All,
}

impl Scenario {
    pub fn targets(self) -> &'static [DataQubit] {
        match self {
            Scenario::Single => &[DataQubit::Middle],
            Scenario::All => &DataQubit::ALL,
        }
    }

    /// Number of targeted qubits, used as the scenario tag (1 or 3).
    pub fn tag(self) -> u8 {
        self.targets().len() as u8
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ErrorMode {
    Coherent,
    Incoherent,
}

impl fmt::Display for ErrorMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorMode::Coherent => "coherent",
            ErrorMode::Incoherent => "incoherent",
        })
    }
}

/// Bit-flip error description: per-target flip probability `p_err`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorSpec<T> {
    pub mode: ErrorMode,
    pub p_err: T,
    pub targets: Vec<DataQubit>,
}

impl<T: Real> ErrorSpec<T> {
    pub fn new(mode: ErrorMode, p_err: T, targets: &[DataQubit]) -> Result<Self> {
        check_unit(p_err)?;
        for (i, q) in targets.iter().enumerate() {
            if targets[..i].contains(q) {
                return Err(Error::DuplicateQubit(q.index()));
            }
        }
        Ok(Self {
            mode,
            p_err,
            targets: targets.to_vec(),
        })
    }

    pub fn scenario(mode: ErrorMode, p_err: T, scenario: Scenario) -> Result<Self> {
        Self::new(mode, p_err, scenario.targets())
    }

    /// Rotation angle `θ = 2 arcsin √p_err`.
    pub fn theta(&self) -> T {
        T::lit(2.0) * self.p_err.sqrt().asin()
    }

    /// Inverse of [`theta`](Self::theta): `p_err = sin²(θ/2)`.
    pub fn p_from_theta(theta: T) -> T {
        (theta * T::lit(0.5)).sin().powi(2)
    }
}

/// `RX(θ)` on every target, in parallel.
pub fn coherent_error_moment<T: Real>(spec: &ErrorSpec<T>) -> Result<Moment<T>> {
    if spec.mode != ErrorMode::Coherent {
        return Err(Error::ModeMismatch {
            expected: "coherent",
        });
    }
    let theta = spec.theta();
    let gates = spec
        .targets
        .iter()
        .map(|q| Gate::new(GateKind::Rx(theta), &[q.index()]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Moment::gates(gates)?.padded(SINGLE_QUBIT_NS))
}

/// Deterministic `X` flips (π rotations) on `flips`, lasting one
/// single-qubit slot whether or not anything flips.
pub fn flip_moment<T: Real>(flips: &[DataQubit]) -> Result<Moment<T>> {
    let gates = flips
        .iter()
        .map(|q| Gate::new(GateKind::X, &[q.index()]))
        .collect::<Result<Vec<_>>>()?;
    Ok(Moment::gates(gates)?.padded(SINGLE_QUBIT_NS))
}

/// One combination of flip / no flip on the targeted qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorPattern<W> {
    pub flips: Vec<DataQubit>,
    pub weight: W,
}

impl<W> ErrorPattern<W> {
    /// Flip mask indexed by register position `[t, m, b]`.
    pub fn mask(&self) -> [bool; 3] {
        let mut m = [false; 3];
        for q in &self.flips {
            m[q.index()] = true;
        }
        m
    }
}

/// All `2^k` flip patterns on `targets` with weights `p^|S| (1−p)^(k−|S|)`.
///
/// Patterns are ordered by their indicator string over `targets`, read as a
/// binary number with the first target most significant: for `[t, m, b]`
/// that is `{}`, `{b}`, `{m}`, `{m,b}`, `{t}`, ... At `p = 0` or `p = 1`
/// only the single pattern with nonzero weight is returned.
///
/// Generic over any numeric ring, so exact rationals work too.
pub fn incoherent_patterns<W>(p: W, targets: &[DataQubit]) -> Result<Vec<ErrorPattern<W>>>
where
    W: Num + Clone + PartialOrd,
{
    if !(p >= W::zero() && p <= W::one()) {
        return Err(Error::InvalidParameter(
            "flip probability outside [0, 1]".into(),
        ));
    }
    let k = targets.len();
    let q = W::one() - p.clone();
    let mut out = Vec::with_capacity(1 << k);
    for s in 0..1usize << k {
        let mut weight = W::one();
        let mut flips = Vec::new();
        for (i, &t) in targets.iter().enumerate() {
            if (s >> (k - 1 - i)) & 1 == 1 {
                flips.push(t);
                weight = weight * p.clone();
            } else {
                weight = weight * q.clone();
            }
        }
        if !weight.is_zero() {
            out.push(ErrorPattern { flips, weight });
        }
    }
    Ok(out)
}

/// Per-measurement declaration error: the declared bit flips with
/// probability `eps` and the record is discarded with probability `veto`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReadoutError<T> {
    pub eps: T,
    pub veto: T,
}

impl<T: Real> ReadoutError<T> {
    pub fn ideal() -> Self {
        Self {
            eps: T::zero(),
            veto: T::zero(),
        }
    }

    pub fn new(eps: T, veto: T) -> Result<Self> {
        check_unit(eps)?;
        check_unit(veto)?;
        if eps + veto > T::one() {
            return Err(Error::InvalidReadout((eps + veto).to_f64_lossy()));
        }
        Ok(Self { eps, veto })
    }

    fn kept(&self, declared: u8, actual: u8) -> T {
        if declared == actual {
            T::one() - self.eps - self.veto
        } else {
            self.eps
        }
    }
}

/// Readout errors keyed by measurement label; unlisted labels are ideal.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReadoutModel<T> {
    errors: BTreeMap<String, ReadoutError<T>>,
}

impl<T: Real> ReadoutModel<T> {
    pub fn ideal() -> Self {
        Self {
            errors: BTreeMap::new(),
        }
    }

    pub fn with(mut self, label: impl Into<String>, error: ReadoutError<T>) -> Self {
        self.errors.insert(label.into(), error);
        self
    }

    /// Errors on the two ancilla readouts `P_t` and `P_b`.
    pub fn ancillas(eps_t: T, eps_b: T, veto_t: T, veto_b: T) -> Result<Self> {
        use crate::repcode::{LABEL_BOTTOM, LABEL_TOP};
        Ok(Self::ideal()
            .with(LABEL_TOP, ReadoutError::new(eps_t, veto_t)?)
            .with(LABEL_BOTTOM, ReadoutError::new(eps_b, veto_b)?))
    }

    pub fn error_for(&self, label: &str) -> ReadoutError<T> {
        self.errors
            .get(label)
            .copied()
            .unwrap_or_else(ReadoutError::ideal)
    }

    pub fn is_ideal(&self) -> bool {
        self.errors
            .values()
            .all(|e| e.eps == T::zero() && e.veto == T::zero())
    }
}

/// Turns true-outcome branches into declared-outcome branches.
///
/// Every declared tuple receives `Σ_true p_true Π_l P(declared_l | true_l)`
/// and the matching mixture of conditioned states. Records vetoed on any
/// label are discarded; the returned branches are renormalized over the
/// retained records and the retained fraction is reported alongside. A
/// fraction of zero yields no branches.
pub fn confuse_and_postselect<T: Real>(
    branches: Vec<Branch<T>>,
    model: &ReadoutModel<T>,
) -> Result<(Vec<Branch<T>>, T)> {
    let Some(first) = branches.first() else {
        return Ok((Vec::new(), T::zero()));
    };
    let labels = first.outcomes.labels();
    let errors: Vec<ReadoutError<T>> = labels.iter().map(|l| model.error_for(l)).collect();
    for e in &errors {
        ReadoutError::new(e.eps, e.veto)?;
    }
    if errors
        .iter()
        .all(|e| e.eps == T::zero() && e.veto == T::zero())
    {
        return Ok((branches, T::one()));
    }
    let k = labels.len();
    let dim = first.state.dim();
    let true_bits: Vec<Vec<u8>> = branches.iter().map(|b| b.outcomes.bits()).collect();
    let weighted: Vec<CMatrix<T>> = branches.iter().map(Branch::weighted).collect();
    let mut masses = Vec::with_capacity(1 << k);
    let mut retained = T::zero();
    for d in 0..1usize << k {
        let declared: Vec<u8> = (0..k).map(|i| ((d >> (k - 1 - i)) & 1) as u8).collect();
        let mut mass = CMatrix::zeros(dim);
        for (bits, w) in true_bits.iter().zip(&weighted) {
            let factor = errors
                .iter()
                .zip(declared.iter().zip(bits))
                .fold(T::one(), |acc, (e, (&dl, &tl))| acc * e.kept(dl, tl));
            if factor > T::zero() {
                mass.add_assign_scaled(w, factor);
            }
        }
        retained += mass.trace().re;
        masses.push((declared, mass));
    }
    if !(retained > T::zero()) {
        return Ok((Vec::new(), T::zero()));
    }
    let out = masses
        .into_iter()
        .map(|(bits, mass)| {
            Branch::from_unnormalized(
                Outcomes::new(&labels, &bits),
                mass.scale_real(T::one() / retained),
            )
        })
        .collect();
    Ok((out, retained))
}

/// Per-qubit coherence times in ns; missing entries mean no decay.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DecoherenceConfig {
    pub enabled: bool,
    pub t1_ns: Vec<f64>,
    pub t2_ns: Vec<f64>,
}

impl DecoherenceConfig {
    pub fn disabled() -> Self {
        Self::default()
    }

    pub fn uniform(n_qubits: usize, t1_ns: f64, t2_ns: f64) -> Self {
        Self {
            enabled: true,
            t1_ns: vec![t1_ns; n_qubits],
            t2_ns: vec![t2_ns; n_qubits],
        }
    }

    pub fn t1(&self, q: usize) -> f64 {
        self.t1_ns.get(q).copied().unwrap_or(f64::INFINITY)
    }

    pub fn t2(&self, q: usize) -> f64 {
        self.t2_ns.get(q).copied().unwrap_or(f64::INFINITY)
    }

    /// Positive times with `T2 ≤ 2·T1` on every listed qubit.
    pub fn validate(&self) -> Result<()> {
        if !self.enabled {
            return Ok(());
        }
        for q in 0..self.t1_ns.len().max(self.t2_ns.len()) {
            let (t1, t2) = (self.t1(q), self.t2(q));
            if !(t1 > 0.0) || !(t2 > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "coherence times on qubit {q} must be positive"
                )));
            }
            if t2 > 2.0 * t1 * (1.0 + 1e-12) {
                return Err(Error::InvalidCoherence {
                    qubit: q,
                    t2,
                    two_t1: 2.0 * t1,
                });
            }
        }
        Ok(())
    }
}

/// Decay channels for every qubit over the duration of `moment`.
///
/// Amplitude damping with `γ = 1 − exp(−t/T1)` followed by pure dephasing
/// that brings the total coherence decay to `exp(−t/T2)`. Empty when the
/// model is disabled.
pub fn decoherence_channels<T: Real>(
    cfg: &DecoherenceConfig,
    moment: &Moment<T>,
    n_qubits: usize,
) -> Result<Vec<(usize, KrausChannel<T>)>> {
    if !cfg.enabled {
        return Ok(Vec::new());
    }
    cfg.validate()?;
    let t = moment.duration();
    (0..n_qubits)
        .map(|q| Ok((q, decay_channel(t, cfg.t1(q), cfg.t2(q))?)))
        .collect()
}

/// Single-qubit decay over `t` ns.
pub fn decay_channel<T: Real>(t: f64, t1: f64, t2: f64) -> Result<KrausChannel<T>> {
    if t2 > 2.0 * t1 * (1.0 + 1e-12) {
        return Err(Error::InvalidCoherence {
            qubit: 0,
            t2,
            two_t1: 2.0 * t1,
        });
    }
    let gamma = 1.0 - (-t / t1).exp();
    let dephasing_rate = (1.0 / t2 - 0.5 / t1).max(0.0);
    let coherence = (-t * dephasing_rate).exp();
    if gamma == 0.0 && coherence == 1.0 {
        return Ok(KrausChannel::identity(1));
    }
    let ad = KrausChannel::amplitude_damping(T::lit(gamma))?;
    let dp = KrausChannel::dephasing(T::lit(coherence))?;
    ad.then(&dp)
}

/// Everything that makes a run non-ideal.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseConfig<T> {
    pub decoherence: DecoherenceConfig,
    pub readout: ReadoutModel<T>,
    /// Initial excited-state population mixed into every qubit.
    pub residual_excitation: T,
}

impl<T: Real> NoiseConfig<T> {
    pub fn ideal() -> Self {
        Self {
            decoherence: DecoherenceConfig::disabled(),
            readout: ReadoutModel::ideal(),
            residual_excitation: T::zero(),
        }
    }

    pub fn is_ideal(&self) -> bool {
        !self.decoherence.enabled
            && self.readout.is_ideal()
            && self.residual_excitation == T::zero()
    }

    pub fn validate(&self) -> Result<()> {
        self.decoherence.validate()?;
        check_unit(self.residual_excitation)
    }
}

impl<T: Real> Default for NoiseConfig<T> {
    fn default() -> Self {
        Self::ideal()
    }
}

fn check_unit<T: Real>(p: T) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidProbability(p.to_f64_lossy()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::{DensityMatrix, PureState};
    use crate::scalar::C;
    use num_rational::Ratio;

    #[test]
    fn theta_round_trip() {
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            let spec = ErrorSpec::new(ErrorMode::Coherent, p, &DataQubit::ALL).unwrap();
            assert!((ErrorSpec::p_from_theta(spec.theta()) - p).abs() < 1e-12);
        }
    }

    #[test]
    fn coherent_moment_examples() {
        let zero = ErrorSpec::new(ErrorMode::Coherent, 0.0, &[DataQubit::Middle]).unwrap();
        let m = coherent_error_moment(&zero).unwrap();
        for op in m.ops() {
            if let crate::circuit::MomentOp::Gate(g) = op {
                assert!(g.matrix().matrix().max_abs_diff(&CMatrix::identity(2)) < 1e-15);
            }
        }
        let one = ErrorSpec::new(ErrorMode::Coherent, 1.0, &DataQubit::ALL).unwrap();
        let m = coherent_error_moment(&one).unwrap();
        assert_eq!(m.ops().len(), 3);
        for op in m.ops() {
            let crate::circuit::MomentOp::Gate(g) = op else {
                panic!()
            };
            let x = crate::qstate::OperatorMatrix::<f64>::pauli_x();
            let up_to_phase = x.matrix().scale(C::new(0.0, -1.0));
            assert!(g.matrix().matrix().max_abs_diff(&up_to_phase) < 1e-15);
        }
        let half = ErrorSpec::new(ErrorMode::Coherent, 0.5, &[DataQubit::Top]).unwrap();
        assert!((half.theta() - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        let inc = ErrorSpec::new(ErrorMode::Incoherent, 0.5, &[DataQubit::Top]).unwrap();
        assert!(matches!(
            coherent_error_moment(&inc),
            Err(Error::ModeMismatch { .. })
        ));
    }

    #[test]
    fn pattern_examples() {
        let p0 = incoherent_patterns(0.0f64, &DataQubit::ALL).unwrap();
        assert_eq!(p0.len(), 1);
        assert!(p0[0].flips.is_empty());
        assert_eq!(p0[0].weight, 1.0);

        let half = incoherent_patterns(0.5f64, &DataQubit::ALL).unwrap();
        assert_eq!(half.len(), 8);
        assert!(half.iter().all(|p| p.weight == 0.125));
        assert_eq!(half[1].flips, vec![DataQubit::Bottom]);
        assert_eq!(half[4].flips, vec![DataQubit::Top]);

        let r = Ratio::new(1i64, 5);
        let pats = incoherent_patterns(r, &DataQubit::ALL).unwrap();
        let t_only = pats.iter().find(|p| p.flips == [DataQubit::Top]).unwrap();
        assert_eq!(t_only.weight, Ratio::new(16, 125)); // 0.2 · 0.8² = 0.128
        assert!(incoherent_patterns(1.5f64, &DataQubit::ALL).is_err());
    }

    #[test]
    fn pattern_weights_sum_to_one_exactly_for_dyadic_p() {
        for num in 0..=16i64 {
            let p = Ratio::new(num, 16);
            let total: Ratio<i64> = incoherent_patterns(p, &DataQubit::ALL)
                .unwrap()
                .into_iter()
                .map(|p| p.weight)
                .sum();
            assert_eq!(total, Ratio::from_integer(1));
        }
    }

    #[test]
    fn readout_validation() {
        assert!(matches!(
            ReadoutError::new(0.6f64, 0.5),
            Err(Error::InvalidReadout(_))
        ));
        assert!(ReadoutError::new(-0.1f64, 0.0).is_err());
        assert!(ReadoutModel::<f64>::ancillas(0.046, 0.046, 0.0, 0.0).is_ok());
    }

    #[test]
    fn decay_examples() {
        let id: KrausChannel<f64> = decay_channel(100.0, f64::INFINITY, f64::INFINITY).unwrap();
        assert_eq!(id, KrausChannel::identity(1));

        let t1 = 1000.0;
        let ch: KrausChannel<f64> = decay_channel(t1, t1, 2.0 * t1).unwrap();
        let out = DensityMatrix::basis(1, 1)
            .unwrap()
            .apply_channel(&ch, &[0])
            .unwrap();
        assert!((out.matrix().get(1, 1).re - (-1.0f64).exp()).abs() < 1e-14);

        let t2 = 500.0;
        let ch: KrausChannel<f64> = decay_channel(t2, f64::INFINITY, t2).unwrap();
        let s = 0.5f64.sqrt();
        let plus = PureState::qubit(C::new(s, 0.0), C::new(s, 0.0))
            .unwrap()
            .density();
        let out = plus.apply_channel(&ch, &[0]).unwrap();
        // Kraus-sum oracle: ½(1+c)·ρ + ½(1−c)·ZρZ has off-diagonal c/2
        let c = (-1.0f64).exp();
        assert!((out.matrix().get(0, 1).norm() - c / 2.0).abs() < 1e-14);

        assert!(matches!(
            decay_channel::<f64>(10.0, 100.0, 250.0),
            Err(Error::InvalidCoherence { .. })
        ));
        let cfg = DecoherenceConfig {
            enabled: true,
            t1_ns: vec![100.0],
            t2_ns: vec![250.0],
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn combined_decay_gives_total_t2_coherence() {
        let (t, t1, t2) = (300.0, 2000.0, 1500.0);
        let ch: KrausChannel<f64> = decay_channel(t, t1, t2).unwrap();
        let s = 0.5f64.sqrt();
        let plus = PureState::qubit(C::new(s, 0.0), C::new(s, 0.0))
            .unwrap()
            .density();
        let out = plus.apply_channel(&ch, &[0]).unwrap();
        assert!((out.matrix().get(0, 1).norm() - 0.5 * (-t / t2).exp()).abs() < 1e-14);
        assert!(ch.trace_preservation_deviation() < 1e-14);
    }
}
