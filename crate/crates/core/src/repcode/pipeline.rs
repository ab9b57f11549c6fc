use std::collections::BTreeMap;
use std::fmt;

use super::circuits::{
    encode_by_gates, encode_input_state, idle_round, stabilizer_round_with, StabilizerSet,
};
use super::{Cardinal, ConventionFlag, A_B, A_T, DATA_QUBITS, D_B, D_M, D_T, REGISTER_QUBITS};
use crate::circuit::{execute, Branch, Circuit, Execution, Moment, Outcomes};
use crate::error::{Error, Result};
use crate::noise::{
    coherent_error_moment, flip_moment, incoherent_patterns, DataQubit, ErrorMode, ErrorSpec,
    NoiseConfig,
};
use crate::qstate::{CMatrix, DensityMatrix, KrausChannel, PureState};
use crate::scalar::Real;

/// What happens between the two error rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pipeline {
    /// Stabilizer round, results declared as a syndrome.
    Qed,
    /// Idling for the same duration, refocusing pulse included.
    Idle,
}

impl Pipeline {
    pub const ALL: [Pipeline; 2] = [Pipeline::Qed, Pipeline::Idle];

    pub fn name(self) -> &'static str {
        match self {
            Pipeline::Qed => "qed",
            Pipeline::Idle => "idle",
        }
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Declared-outcome branches on the three data qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput<T> {
    /// Outcome-ordered; a single branch with no outcomes for idling.
    pub branches: Vec<Branch<T>>,
    pub retained_fraction: T,
}

impl<T: Real> PipelineOutput<T> {
    pub fn branch(&self, outcomes: &Outcomes) -> Option<&Branch<T>> {
        self.branches.iter().find(|b| &b.outcomes == outcomes)
    }

    /// Unconditioned state `Σ p ρ`.
    pub fn average_state(&self) -> Result<DensityMatrix<T>> {
        let first = self
            .branches
            .first()
            .ok_or_else(|| Error::Unphysical("no retained records".into()))?;
        let mut acc = CMatrix::zeros(first.state.dim());
        for b in &self.branches {
            acc.add_assign_scaled(&b.weighted(), T::one());
        }
        Ok(DensityMatrix::from_raw(acc, true))
    }
}

/// Traces the ancillas out of every branch of a five-qubit execution.
pub fn data_branches<T: Real>(exec: Execution<T>) -> Result<PipelineOutput<T>> {
    let data = [D_T, D_M, D_B];
    let branches = exec
        .branches
        .into_iter()
        .map(|b| {
            let reduced = DensityMatrix::from_raw(b.weighted(), false).partial_trace(&data)?;
            Ok(Branch::from_unnormalized(
                b.outcomes,
                reduced.matrix().clone(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PipelineOutput {
        branches,
        retained_fraction: exec.retained_fraction,
    })
}

/// Mixes `|1⟩` into qubits that start in `|0⟩`.
fn excite<T: Real>(
    rho: DensityMatrix<T>,
    qubits: &[usize],
    residual: T,
) -> Result<DensityMatrix<T>> {
    if residual == T::zero() {
        return Ok(rho);
    }
    let ch = KrausChannel::bit_flip(residual)?;
    qubits
        .iter()
        .try_fold(rho, |r, &q| r.apply_channel(&ch, &[q]))
}

fn with_ancillas<T: Real>(
    data: &DensityMatrix<T>,
    noise: &NoiseConfig<T>,
) -> Result<DensityMatrix<T>> {
    if data.n_qubits() != DATA_QUBITS {
        return Err(Error::DimensionMismatch {
            expected: 1 << DATA_QUBITS,
            actual: data.dim(),
        });
    }
    let rho = data.tensor(&DensityMatrix::basis(2, 0)?);
    excite(rho, &[A_T, A_B], noise.residual_excitation)
}

/// One parity round on an arbitrary data state.
pub fn measure_parities<T: Real>(
    data: &DensityMatrix<T>,
    set: StabilizerSet,
    noise: &NoiseConfig<T>,
) -> Result<PipelineOutput<T>> {
    noise.validate()?;
    let rho = with_ancillas(data, noise)?;
    data_branches(execute(&stabilizer_round_with(set), &rho, noise)?)
}

/// Parity round on `|+⟩_t ψ |+⟩_b` with ideal hardware: four equally likely
/// branches, each one encoding correction away from the logical state.
pub fn encode_by_measurement<T: Real>(c: Cardinal) -> Result<Vec<Branch<T>>> {
    let plus = Cardinal::Plus.state::<T>();
    let input = plus.tensor(&c.state()).tensor(&plus).density();
    Ok(measure_parities(&input, StabilizerSet::Both, &NoiseConfig::ideal())?.branches)
}

/// Parity round on the data state `|+⟩ (|0⟩ + e^{iφ}|1⟩)/√2 |+⟩`.
pub fn superposition_input<T: Real>(phi: T) -> PureState<T> {
    let s = T::FRAC_1_SQRT_2();
    let plus = Cardinal::Plus.state::<T>();
    let m = PureState::qubit(
        crate::scalar::C::new(s, T::zero()),
        crate::scalar::C::from_polar(s, phi),
    )
    .expect("normalized");
    plus.tensor(&m).tensor(&plus)
}

fn run_with_error<T: Real>(
    psi: &PureState<T>,
    pipeline: Pipeline,
    error: Moment<T>,
    noise: &NoiseConfig<T>,
) -> Result<PipelineOutput<T>> {
    noise.validate()?;
    if psi.n_qubits() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            actual: psi.amplitudes().len(),
        });
    }
    let prep = encode_by_gates::<T>(ConventionFlag::default())
        .then(&Circuit::from_moments(DATA_QUBITS, vec![error])?)?;
    let r = noise.residual_excitation;
    match pipeline {
        Pipeline::Qed => {
            let circuit = prep
                .widened(REGISTER_QUBITS)?
                .then(&stabilizer_round_with(StabilizerSet::Both))?;
            let input = encode_input_state(psi)
                .density()
                .tensor(&DensityMatrix::basis(2, 0)?);
            let input = excite(input, &[D_T, D_B, A_T, A_B], r)?;
            data_branches(execute(&circuit, &input, noise)?)
        }
        Pipeline::Idle => {
            let circuit = prep.then(&idle_round(DATA_QUBITS)?)?;
            let input = excite(encode_input_state(psi).density(), &[D_T, D_B], r)?;
            let exec = execute(&circuit, &input, noise)?;
            Ok(PipelineOutput {
                branches: exec.branches,
                retained_fraction: exec.retained_fraction,
            })
        }
    }
}

/// Encoding, deterministic flips on `flips`, then the pipeline.
pub fn run_flips<T: Real>(
    c: Cardinal,
    pipeline: Pipeline,
    flips: &[DataQubit],
    noise: &NoiseConfig<T>,
) -> Result<PipelineOutput<T>> {
    run_flips_on(&c.state(), pipeline, flips, noise)
}

/// [`run_flips`] for an arbitrary single-qubit input.
pub fn run_flips_on<T: Real>(
    psi: &PureState<T>,
    pipeline: Pipeline,
    flips: &[DataQubit],
    noise: &NoiseConfig<T>,
) -> Result<PipelineOutput<T>> {
    run_with_error(psi, pipeline, flip_moment(flips)?, noise)
}

/// Encoding, first-round errors from `spec`, then the pipeline.
///
/// Incoherent errors are the probability-weighted mixture of the
/// [`run_flips`] outputs over all flip patterns.
pub fn run_pipeline<T: Real>(
    c: Cardinal,
    pipeline: Pipeline,
    spec: &ErrorSpec<T>,
    noise: &NoiseConfig<T>,
) -> Result<PipelineOutput<T>> {
    run_pipeline_on(&c.state(), pipeline, spec, noise)
}

/// [`run_pipeline`] for an arbitrary single-qubit input.
pub fn run_pipeline_on<T: Real>(
    psi: &PureState<T>,
    pipeline: Pipeline,
    spec: &ErrorSpec<T>,
    noise: &NoiseConfig<T>,
) -> Result<PipelineOutput<T>> {
    match spec.mode {
        ErrorMode::Coherent => run_with_error(psi, pipeline, coherent_error_moment(spec)?, noise),
        ErrorMode::Incoherent => {
            let runs = incoherent_patterns(spec.p_err, &spec.targets)?
                .into_iter()
                .map(|p| Ok((p.weight, run_flips_on(psi, pipeline, &p.flips, noise)?)))
                .collect::<Result<Vec<_>>>()?;
            let parts: Vec<(T, &PipelineOutput<T>)> = runs.iter().map(|(w, o)| (*w, o)).collect();
            mix_outputs(&parts)
        }
    }
}

/// Classical mixture of runs: branch masses add with weight `w` times each
/// run's retained fraction, then everything is renormalized over the
/// combined retained fraction.
pub fn mix_outputs<T: Real>(parts: &[(T, &PipelineOutput<T>)]) -> Result<PipelineOutput<T>> {
    let mut masses: BTreeMap<Outcomes, CMatrix<T>> = BTreeMap::new();
    let mut retained = T::zero();
    for (w, out) in parts {
        let scale = *w * out.retained_fraction;
        retained += scale;
        for b in &out.branches {
            let dim = b.state.dim();
            masses
                .entry(b.outcomes.clone())
                .or_insert_with(|| CMatrix::zeros(dim))
                .add_assign_scaled(&b.weighted(), scale);
        }
    }
    if !(retained > T::zero()) {
        return Ok(PipelineOutput {
            branches: Vec::new(),
            retained_fraction: T::zero(),
        });
    }
    let inv = T::one() / retained;
    let branches = masses
        .into_iter()
        .map(|(o, m)| Branch::from_unnormalized(o, m.scale_real(inv)))
        .collect();
    Ok(PipelineOutput {
        branches,
        retained_fraction: retained,
    })
}
