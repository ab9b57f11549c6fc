//! The four experiments, computed in memory.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;

use qedsim::circuit::{gate_matrix, sample_shots_with, stream_rng, GateKind, Histogram};
use qedsim::metrics::{
    assignment_fidelity, crossover, error_combination_table, f3q, f_logical, mermin,
    pauli_expectations, pauli_strings, syndrome_probabilities, witnesses, CardinalFidelities,
    CombinationRow, Crossover, FidelityReport, Metric, PatternCache, WitnessSet,
};
use qedsim::noise::{ErrorMode, ErrorSpec, NoiseConfig, Scenario};
use qedsim::qstate::{DensityMatrix, KrausChannel};
use qedsim::repcode::{
    encoding_correction_for, ghz, measure_parities, Cardinal, Parity, Pipeline, PipelineOutput,
    StabilizerSet, Syndrome, D_B, D_M, D_T,
};
use qedsim::Tolerances;

use crate::config::ExperimentConfig;
use crate::CliError;

/// Tolerance for calling a crossover.
pub const CROSSOVER_TOL: f64 = 1e-12;

fn check_branches(out: &PipelineOutput<f64>) -> Result<(), CliError> {
    let tol = Tolerances::default();
    for b in out.branches.iter().filter(|b| !b.degenerate) {
        b.state.check_physical(&tol)?;
    }
    Ok(())
}

/// Data qubits that start in `|0⟩` pick up residual excitation before
/// their preparation pulses.
fn excited_ground(r: f64) -> Result<DensityMatrix<f64>, CliError> {
    let rho = DensityMatrix::basis(3, 0)?;
    if r == 0.0 {
        return Ok(rho);
    }
    let ch = KrausChannel::bit_flip(r)?;
    Ok([D_T, D_M, D_B]
        .iter()
        .try_fold(rho, |acc, &q| acc.apply_channel(&ch, &[q]))?)
}

/// `|ijk⟩` prepared by π pulses from an excited ground state.
pub fn basis_input(index: usize, r: f64) -> Result<DensityMatrix<f64>, CliError> {
    let x = gate_matrix(&GateKind::X);
    let mut rho = excited_ground(r)?;
    for q in [D_T, D_M, D_B] {
        if index >> (2 - q) & 1 == 1 {
            rho = rho.apply_unitary(&x, &[q])?;
        }
    }
    Ok(rho)
}

/// `|+⟩ (|0⟩ + e^{iφ}|1⟩)/√2 |+⟩` prepared from an excited ground state.
pub fn superposition_prepared(phi: f64, r: f64) -> Result<DensityMatrix<f64>, CliError> {
    let ry = gate_matrix(&GateKind::Ry(FRAC_PI_2));
    let rz = gate_matrix(&GateKind::Rz(phi));
    let mut rho = excited_ground(r)?;
    for q in [D_T, D_M, D_B] {
        rho = rho.apply_unitary(&ry, &[q])?;
    }
    Ok(rho.apply_unitary(&rz, &[D_M])?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParityReport {
    /// Declared syndrome distribution per input index, in `ee eo oe oo` order.
    pub distributions: BTreeMap<usize, [f64; 4]>,
    pub retained: Vec<f64>,
    /// Sampled records per input; empty without shots.
    pub histograms: Vec<Histogram>,
    pub assignment_fidelity: f64,
}

/// Parity round on all eight computational inputs.
pub fn parity_check(cfg: &ExperimentConfig) -> Result<ParityReport, CliError> {
    let noise = cfg.noise_config()?;
    let r = cfg.noise.residual_excitation;
    let runs = (0..8usize)
        .into_par_iter()
        .map(|i| {
            let out = measure_parities(&basis_input(i, r)?, StabilizerSet::Both, &noise)?;
            check_branches(&out)?;
            let hist = if cfg.shots > 0 {
                Some(sample_shots_with(
                    &out.branches,
                    cfg.shots,
                    &mut stream_rng(cfg.seed(), i as u64),
                )?)
            } else {
                None
            };
            Ok((
                syndrome_probabilities(&out.branches),
                out.retained_fraction,
                hist,
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let distributions: BTreeMap<usize, [f64; 4]> =
        runs.iter().enumerate().map(|(i, r)| (i, r.0)).collect();
    Ok(ParityReport {
        assignment_fidelity: assignment_fidelity(&distributions)?,
        distributions,
        retained: runs.iter().map(|r| r.1).collect(),
        histograms: runs.into_iter().filter_map(|r| r.2).collect(),
    })
}

/// Bell witnesses on the pair touched by a single stabilizer.
#[derive(Debug, Clone, PartialEq)]
pub struct WitnessRow {
    pub phi: f64,
    pub set: &'static str,
    pub parity: Parity,
    pub probability: f64,
    pub witnesses: WitnessSet<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MerminRow {
    pub phi: f64,
    pub syndrome: Syndrome,
    pub probability: f64,
    pub mermin_raw: f64,
    /// After the encoding correction of the branch.
    pub mermin: f64,
    pub ghz_fidelity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntangleReport {
    pub witnesses: Vec<WitnessRow>,
    pub mermin: Vec<MerminRow>,
    /// Phase with the largest `|M|` in the `oo` branch.
    pub pauli_phi: f64,
    pub paulis: Vec<(String, f64)>,
    /// Retained fraction per phase for the two-stabilizer round.
    pub retained: Vec<f64>,
}

struct PhasePoint {
    witnesses: Vec<WitnessRow>,
    mermin: Vec<MerminRow>,
    retained: f64,
    oo: DensityMatrix<f64>,
}

fn phase_point(phi: f64, noise: &NoiseConfig<f64>, r: f64) -> Result<PhasePoint, CliError> {
    let input = superposition_prepared(phi, r)?;
    let mut wrows = Vec::new();
    for (set, name, keep, label) in [
        (
            StabilizerSet::Top,
            "top",
            [D_T, D_M],
            qedsim::repcode::LABEL_TOP,
        ),
        (
            StabilizerSet::Bottom,
            "bottom",
            [D_M, D_B],
            qedsim::repcode::LABEL_BOTTOM,
        ),
    ] {
        let out = measure_parities(&input, set, noise)?;
        check_branches(&out)?;
        for b in out.branches.iter().filter(|b| !b.degenerate) {
            let bit = b.outcomes.get(label).expect("declared parity");
            wrows.push(WitnessRow {
                phi,
                set: name,
                parity: Parity::from_bit(bit),
                probability: b.probability,
                witnesses: witnesses(&b.state.partial_trace(&keep)?)?,
            });
        }
    }
    let out = measure_parities(&input, StabilizerSet::Both, noise)?;
    check_branches(&out)?;
    let mut mrows = Vec::new();
    let mut oo = None;
    for b in out.branches.iter().filter(|b| !b.degenerate) {
        let s = Syndrome::from_outcomes(&b.outcomes).expect("both parities");
        let corrected = b
            .state
            .conjugate(&encoding_correction_for(s), &[D_T, D_M, D_B])?;
        if s == Syndrome::ALL[3] {
            oo = Some(b.state.clone());
        }
        mrows.push(MerminRow {
            phi,
            syndrome: s,
            probability: b.probability,
            mermin_raw: mermin(&b.state)?,
            mermin: mermin(&corrected)?,
            ghz_fidelity: corrected.fidelity_to_pure(&ghz(phi))?,
        });
    }
    let oo = oo.ok_or_else(|| CliError::Physicality(format!("no oo records at phi = {phi}")))?;
    Ok(PhasePoint {
        witnesses: wrows,
        mermin: mrows,
        retained: out.retained_fraction,
        oo,
    })
}

/// Entanglement by measurement over the phase grid.
pub fn entangle(cfg: &ExperimentConfig) -> Result<EntangleReport, CliError> {
    let noise = cfg.noise_config()?;
    let r = cfg.noise.residual_excitation;
    let points = cfg
        .phi()
        .into_par_iter()
        .map(|phi| phase_point(phi, &noise, r))
        .collect::<Result<Vec<_>, CliError>>()?;
    let oo_mermin: Vec<f64> = points
        .iter()
        .map(|p| {
            p.mermin
                .iter()
                .find(|m| m.syndrome == Syndrome::ALL[3])
                .map_or(0.0, |m| m.mermin_raw.abs())
        })
        .collect();
    let best = (0..points.len()).fold(0, |b, i| if oo_mermin[i] > oo_mermin[b] { i } else { b });
    let expectations = pauli_expectations(&points[best].oo)?;
    let paulis = pauli_strings(3)
        .into_iter()
        .map(|s| {
            let v = expectations[&s];
            (s, v)
        })
        .collect();
    Ok(EntangleReport {
        pauli_phi: cfg.phi()[best],
        paulis,
        retained: points.iter().map(|p| p.retained).collect(),
        witnesses: points.iter().flat_map(|p| p.witnesses.clone()).collect(),
        mermin: points.into_iter().flat_map(|p| p.mermin).collect(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossoverRow {
    pub metric: Metric,
    pub scenario: u8,
    pub crossover: Option<Crossover<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    /// Ordered by scenario (1, 3), then pipeline (qed, idle).
    pub f3q: Vec<FidelityReport<f64>>,
    pub f_logical: Vec<FidelityReport<f64>>,
    pub crossovers: Vec<CrossoverRow>,
    /// Mean retained fraction over cardinals per `p_err`, keyed by
    /// `scenario/pipeline`.
    pub retained: BTreeMap<String, Vec<f64>>,
}

impl SweepReport {
    pub fn find(
        &self,
        metric: Metric,
        scenario: u8,
        pipeline: Pipeline,
    ) -> Option<&FidelityReport<f64>> {
        let list = match metric {
            Metric::F3q => &self.f3q,
            Metric::FLogical => &self.f_logical,
        };
        list.iter()
            .find(|r| r.scenario == scenario && r.pipeline == pipeline)
    }
}

struct Curve {
    f3q: Vec<CardinalFidelities<f64>>,
    f_logical: Vec<CardinalFidelities<f64>>,
    retained: Vec<f64>,
}

fn mean_retained(outputs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = outputs.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

fn curve(
    scenario: Scenario,
    pipeline: Pipeline,
    mode: ErrorMode,
    p_err: &[f64],
    p_second: Option<f64>,
    noise: &NoiseConfig<f64>,
) -> Result<Curve, CliError> {
    let mut out = Curve {
        f3q: Vec::new(),
        f_logical: Vec::new(),
        retained: Vec::new(),
    };
    match mode {
        ErrorMode::Incoherent => {
            let cache = PatternCache::new(pipeline, scenario.targets(), noise)?;
            for &p in p_err {
                out.f3q.push(cache.f3q(p)?);
                out.f_logical
                    .push(cache.f_logical(p, p_second.unwrap_or(p))?);
                let outputs = Cardinal::ALL
                    .iter()
                    .map(|&c| Ok(cache.output(c, p)?.retained_fraction))
                    .collect::<Result<Vec<_>, CliError>>()?;
                out.retained.push(mean_retained(outputs.into_iter()));
            }
        }
        ErrorMode::Coherent => {
            for &p in p_err {
                let spec = ErrorSpec::scenario(mode, p, scenario)?;
                out.f3q.push(f3q(pipeline, &spec, noise)?);
                out.f_logical
                    .push(f_logical(pipeline, &spec, p_second.unwrap_or(p), noise)?);
                let outputs = Cardinal::ALL
                    .iter()
                    .map(|&c| {
                        Ok(qedsim::repcode::run_pipeline(c, pipeline, &spec, noise)?
                            .retained_fraction)
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                out.retained.push(mean_retained(outputs.into_iter()));
            }
        }
    }
    Ok(out)
}

/// Both fidelity metrics over the `p_err` grid for both scenarios and
/// pipelines, with the crossover of each pair of curves.
pub fn qed_sweep(cfg: &ExperimentConfig) -> Result<SweepReport, CliError> {
    let noise = cfg.noise_config()?;
    let mode: ErrorMode = cfg.errors.mode.into();
    let p_err = cfg.p_err();
    let jobs: Vec<(Scenario, Pipeline)> = [Scenario::Single, Scenario::All]
        .into_iter()
        .flat_map(|s| Pipeline::ALL.into_iter().map(move |p| (s, p)))
        .collect();
    let curves = jobs
        .par_iter()
        .map(|&(s, p)| curve(s, p, mode, &p_err, cfg.errors.p_second, &noise))
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut report = SweepReport {
        f3q: Vec::new(),
        f_logical: Vec::new(),
        crossovers: Vec::new(),
        retained: BTreeMap::new(),
    };
    for (&(scenario, pipeline), c) in jobs.iter().zip(curves) {
        let make = |metric, rows| FidelityReport {
            metric,
            scenario: scenario.tag(),
            pipeline,
            mode,
            p_err: p_err.clone(),
            rows,
        };
        let f = make(Metric::F3q, c.f3q);
        let l = make(Metric::FLogical, c.f_logical);
        f.validate()?;
        l.validate()?;
        report.f3q.push(f);
        report.f_logical.push(l);
        report.retained.insert(
            format!("scenario{}/{}", scenario.tag(), pipeline),
            c.retained,
        );
    }
    for metric in [Metric::F3q, Metric::FLogical] {
        for scenario in [Scenario::Single, Scenario::All] {
            let tag = scenario.tag();
            let qed = report
                .find(metric, tag, Pipeline::Qed)
                .expect("computed")
                .averages();
            let idle = report
                .find(metric, tag, Pipeline::Idle)
                .expect("computed")
                .averages();
            report.crossovers.push(CrossoverRow {
                metric,
                scenario: tag,
                crossover: crossover(&p_err, &qed, &idle, CROSSOVER_TOL),
            });
        }
    }
    Ok(report)
}

/// Deterministic first- and second-round flip combinations.
pub fn error_table(cfg: &ExperimentConfig) -> Result<Vec<CombinationRow<f64>>, CliError> {
    let rows = error_combination_table(&cfg.noise_config()?)?;
    for row in &rows {
        for v in [row.qed, row.idle] {
            if !(-1e-9..=1.0 + 1e-9).contains(&v) {
                return Err(CliError::Physicality(format!(
                    "{}: fidelity {v}",
                    row.label()
                )));
            }
        }
    }
    Ok(rows)
}
