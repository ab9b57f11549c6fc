use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::noise::{
    incoherent_patterns, DataQubit, ErrorMode, ErrorPattern, ErrorSpec, NoiseConfig,
};
use crate::qstate::{CMatrix, DensityMatrix, OperatorMatrix, PureState};
use crate::repcode::{
    correction_for, decoder, encode_state, mix_outputs, run_flips, run_pipeline, Cardinal,
    ConventionFlag, Pipeline, PipelineOutput, Syndrome,
};
use crate::scalar::{Real, Tolerances};

const DATA: [usize; 3] = [0, 1, 2];

/// Syndrome-corrected data state.
///
/// With error detection this is `Σ_pq p_pq Ĉ_pq ρ_pq Ĉ_pq†`; branches
/// without a full syndrome contribute nothing. After idling it is
/// `X_m ρ X_m`, undoing the refocusing pulse.
pub fn corrected_state<T: Real>(
    pipeline: Pipeline,
    out: &PipelineOutput<T>,
) -> Result<DensityMatrix<T>> {
    let first = out
        .branches
        .first()
        .ok_or_else(|| Error::Unphysical("no retained records".into()))?;
    let mut acc = CMatrix::zeros(first.state.dim());
    for b in &out.branches {
        let fix = match pipeline {
            Pipeline::Qed => match Syndrome::from_outcomes(&b.outcomes) {
                Some(s) => correction_for::<T>(s),
                None => continue,
            },
            Pipeline::Idle => OperatorMatrix::x_mask(&[false, true, false]),
        };
        let w = DensityMatrix::from_raw(b.weighted(), false).apply_unitary(&fix, &DATA)?;
        acc.add_assign_scaled(w.matrix(), T::one());
    }
    Ok(DensityMatrix::from_raw(acc, true))
}

/// Three-qubit fidelity of one pipeline output to the logical state of `c`.
pub fn f3q_of<T: Real>(c: Cardinal, pipeline: Pipeline, out: &PipelineOutput<T>) -> Result<T> {
    f3q_for_state(&c.state(), pipeline, out)
}

/// [`f3q_of`] for the encoding of an arbitrary single-qubit input `psi`.
pub fn f3q_for_state<T: Real>(
    psi: &PureState<T>,
    pipeline: Pipeline,
    out: &PipelineOutput<T>,
) -> Result<T> {
    corrected_state(pipeline, out)?.fidelity_to_pure(&encode_state(psi, ConventionFlag::default())?)
}

/// Logical fidelity: correction, weighted second-round flips, ideal
/// decoding, then overlap of the reduced `D_m` state with the cardinal.
pub fn f_logical_of<T: Real>(
    c: Cardinal,
    pipeline: Pipeline,
    out: &PipelineOutput<T>,
    second: &[ErrorPattern<T>],
) -> Result<T> {
    f_logical_for_state(&c.state(), pipeline, out, second)
}

/// [`f_logical_of`] for an arbitrary single-qubit input `target`.
pub fn f_logical_for_state<T: Real>(
    target: &PureState<T>,
    pipeline: Pipeline,
    out: &PipelineOutput<T>,
    second: &[ErrorPattern<T>],
) -> Result<T> {
    let rho = corrected_state(pipeline, out)?;
    let dec = decoder::<T>(ConventionFlag::default());
    let mut acc = T::zero();
    for e in second {
        let flipped = rho.apply_unitary(&OperatorMatrix::x_mask(&e.mask()), &DATA)?;
        acc += e.weight * dec.decode(&flipped)?.fidelity_to_pure(target)?;
    }
    Ok(acc)
}

/// One value per cardinal, in [`Cardinal::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CardinalFidelities<T> {
    pub values: [T; 6],
}

impl<T: Real> CardinalFidelities<T> {
    pub fn try_from_fn(mut f: impl FnMut(Cardinal) -> Result<T>) -> Result<Self> {
        let mut values = [T::zero(); 6];
        for (v, c) in values.iter_mut().zip(Cardinal::ALL) {
            *v = f(c)?;
        }
        Ok(Self { values })
    }

    pub fn get(&self, c: Cardinal) -> T {
        self.values[c as usize]
    }

    pub fn average(&self) -> T {
        self.values.iter().copied().sum::<T>() / T::lit(6.0)
    }
}

/// `F_3Q` for every cardinal.
pub fn f3q<T: Real>(
    pipeline: Pipeline,
    spec: &ErrorSpec<T>,
    noise: &NoiseConfig<T>,
) -> Result<CardinalFidelities<T>> {
    CardinalFidelities::try_from_fn(|c| {
        f3q_of(c, pipeline, &run_pipeline(c, pipeline, spec, noise)?)
    })
}

pub fn f3q_qed<T: Real>(
    spec: &ErrorSpec<T>,
    noise: &NoiseConfig<T>,
) -> Result<CardinalFidelities<T>> {
    f3q(Pipeline::Qed, spec, noise)
}

pub fn f3q_idle<T: Real>(
    spec: &ErrorSpec<T>,
    noise: &NoiseConfig<T>,
) -> Result<CardinalFidelities<T>> {
    f3q(Pipeline::Idle, spec, noise)
}

/// `F_L` for every cardinal, with incoherent second-round flips of
/// probability `p_second` on all data qubits.
pub fn f_logical<T: Real>(
    pipeline: Pipeline,
    first: &ErrorSpec<T>,
    p_second: T,
    noise: &NoiseConfig<T>,
) -> Result<CardinalFidelities<T>> {
    let second = incoherent_patterns(p_second, &DataQubit::ALL)?;
    CardinalFidelities::try_from_fn(|c| {
        f_logical_of(
            c,
            pipeline,
            &run_pipeline(c, pipeline, first, noise)?,
            &second,
        )
    })
}

/// Runs of every deterministic flip pattern, so incoherent sweeps only
/// reweight instead of re-simulating.
#[derive(Debug, Clone)]
pub struct PatternCache<T> {
    pub pipeline: Pipeline,
    pub targets: Vec<DataQubit>,
    runs: BTreeMap<Vec<DataQubit>, Vec<PipelineOutput<T>>>,
}

impl<T: Real> PatternCache<T> {
    pub fn new(pipeline: Pipeline, targets: &[DataQubit], noise: &NoiseConfig<T>) -> Result<Self> {
        let mut runs = BTreeMap::new();
        for pattern in incoherent_patterns(T::lit(0.5), targets)? {
            let per_cardinal = Cardinal::ALL
                .iter()
                .map(|&c| run_flips(c, pipeline, &pattern.flips, noise))
                .collect::<Result<Vec<_>>>()?;
            runs.insert(pattern.flips, per_cardinal);
        }
        Ok(Self {
            pipeline,
            targets: targets.to_vec(),
            runs,
        })
    }

    /// Run with exactly the flips in `flips` (which must be targets).
    pub fn flips(&self, c: Cardinal, flips: &[DataQubit]) -> Result<&PipelineOutput<T>> {
        let key: Vec<DataQubit> = self
            .targets
            .iter()
            .copied()
            .filter(|q| flips.contains(q))
            .collect();
        if key.len() != flips.len() {
            return Err(Error::InvalidParameter(
                "flip outside the cached targets".into(),
            ));
        }
        Ok(&self.runs[&key][c as usize])
    }

    /// Mixture for incoherent flips of probability `p`.
    pub fn output(&self, c: Cardinal, p: T) -> Result<PipelineOutput<T>> {
        let patterns = incoherent_patterns(p, &self.targets)?;
        let parts: Vec<(T, &PipelineOutput<T>)> = patterns
            .iter()
            .map(|pat| (pat.weight, &self.runs[&pat.flips][c as usize]))
            .collect();
        mix_outputs(&parts)
    }

    pub fn f3q(&self, p: T) -> Result<CardinalFidelities<T>> {
        CardinalFidelities::try_from_fn(|c| f3q_of(c, self.pipeline, &self.output(c, p)?))
    }

    pub fn f_logical(&self, p: T, p_second: T) -> Result<CardinalFidelities<T>> {
        let second = incoherent_patterns(p_second, &DataQubit::ALL)?;
        CardinalFidelities::try_from_fn(|c| {
            f_logical_of(c, self.pipeline, &self.output(c, p)?, &second)
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    /// Three-qubit fidelity.
    F3q,
    /// Logical fidelity after decoding.
    FLogical,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Metric::F3q => "f3q",
            Metric::FLogical => "f_logical",
        })
    }
}

/// A fidelity curve with its per-cardinal breakdown.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityReport<T> {
    pub metric: Metric,
    /// Number of targeted data qubits (1 or 3).
    pub scenario: u8,
    pub pipeline: Pipeline,
    pub mode: ErrorMode,
    pub p_err: Vec<T>,
    pub rows: Vec<CardinalFidelities<T>>,
}

impl<T: Real> FidelityReport<T> {
    pub fn averages(&self) -> Vec<T> {
        self.rows.iter().map(CardinalFidelities::average).collect()
    }

    /// Every value lies in `[0, 1]` up to the physical tolerance.
    pub fn validate(&self) -> Result<()> {
        if self.rows.len() != self.p_err.len() {
            return Err(Error::DimensionMismatch {
                expected: self.p_err.len(),
                actual: self.rows.len(),
            });
        }
        let tol = Tolerances::<T>::default().physical;
        for row in &self.rows {
            for &v in &row.values {
                if !(v >= -tol && v <= T::one() + tol) {
                    return Err(Error::Unphysical(format!("fidelity {}", v.to_f64_lossy())));
                }
            }
        }
        Ok(())
    }
}
