use rand::Rng;

use super::{gate_matrix, Basis, Circuit, GateKind, MomentOp};
use crate::error::{Error, Result};
use crate::noise::{confuse_and_postselect, decoherence_channels, NoiseConfig};
use crate::qstate::{CMatrix, DensityMatrix, OperatorMatrix};
use crate::scalar::{Real, Tolerances};

/// Branches below this probability are kept but flagged degenerate.
pub const DEGENERATE_PROBABILITY: f64 = 1e-12;

/// Declared measurement results, in circuit label order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Outcomes {
    entries: Vec<(String, u8)>,
}

impl Outcomes {
    pub fn new(labels: &[String], bits: &[u8]) -> Self {
        debug_assert_eq!(labels.len(), bits.len());
        Self {
            entries: labels.iter().cloned().zip(bits.iter().copied()).collect(),
        }
    }

    pub fn empty() -> Self {
        Self {
            entries: Vec::new(),
        }
    }

    pub fn get(&self, label: &str) -> Option<u8> {
        self.entries
            .iter()
            .find(|(l, _)| l == label)
            .map(|&(_, b)| b)
    }

    pub fn bits(&self) -> Vec<u8> {
        self.entries.iter().map(|&(_, b)| b).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.entries.iter().map(|(l, _)| l.clone()).collect()
    }

    pub fn entries(&self) -> &[(String, u8)] {
        &self.entries
    }

    pub fn key(&self) -> String {
        self.entries
            .iter()
            .map(|(l, b)| format!("{l}={b}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// One measurement record with its probability and conditioned state.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch<T> {
    pub outcomes: Outcomes,
    pub probability: T,
    /// Normalized, except for degenerate branches where it holds the
    /// (near-zero) unnormalized conditioned matrix.
    pub state: DensityMatrix<T>,
    pub degenerate: bool,
}

impl<T: Real> Branch<T> {
    pub(crate) fn from_unnormalized(outcomes: Outcomes, m: CMatrix<T>) -> Self {
        let p = m.trace().re;
        let degenerate = !(p >= T::lit(DEGENERATE_PROBABILITY));
        let state = if degenerate {
            DensityMatrix::from_raw(m, false)
        } else {
            DensityMatrix::from_raw(m.scale_real(T::one() / p), true)
        };
        Self {
            outcomes,
            probability: p.max(T::zero()),
            state,
            degenerate,
        }
    }

    /// `p · ρ`, the branch's contribution to the unconditioned state.
    pub fn weighted(&self) -> CMatrix<T> {
        if self.state.is_normalized() {
            self.state.matrix().scale_real(self.probability)
        } else {
            self.state.matrix().clone()
        }
    }
}

/// Exact execution result; `retained_fraction` is below one only when
/// readout postselection discards records.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution<T> {
    pub branches: Vec<Branch<T>>,
    pub retained_fraction: T,
}

/// Exhaustive branch enumeration; see [`execute`].
pub fn run_exact<T: Real>(
    circuit: &Circuit<T>,
    initial: &DensityMatrix<T>,
    noise: &NoiseConfig<T>,
) -> Result<Vec<Branch<T>>> {
    Ok(execute(circuit, initial, noise)?.branches)
}

/// Runs the circuit on `initial`, splitting on every measurement.
///
/// Branches come out in lexicographic order of their outcome bits (labels in
/// circuit order). Declared outcomes have passed through the readout model
/// of `noise`; decoherence channels are applied to every qubit after each
/// moment.
pub fn execute<T: Real>(
    circuit: &Circuit<T>,
    initial: &DensityMatrix<T>,
    noise: &NoiseConfig<T>,
) -> Result<Execution<T>> {
    let n = circuit.n_qubits();
    if initial.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            actual: initial.dim(),
        });
    }
    let labels = circuit.labels();
    let projectors = [projector::<T>(0), projector::<T>(1)];
    let pre_rotation = gate_matrix(&GateKind::Ry(-T::FRAC_PI_2()));

    // (bits, unnormalized state)
    let mut live: Vec<(Vec<u8>, DensityMatrix<T>)> = vec![(Vec::new(), initial.clone())];
    for moment in circuit.moments() {
        for op in moment.ops() {
            match op {
                MomentOp::Gate(g) => {
                    let u = g.matrix();
                    for (_, rho) in live.iter_mut() {
                        *rho = rho.apply_unitary(&u, g.targets())?;
                    }
                }
                MomentOp::Channel(site) => {
                    let ch = site.kind.channel()?;
                    for (_, rho) in live.iter_mut() {
                        *rho = rho.apply_channel(&ch, &site.targets)?;
                    }
                }
                MomentOp::Measure(m) => {
                    let mut next = Vec::with_capacity(live.len() * 2);
                    for (bits, rho) in live {
                        let rho = match m.basis {
                            Basis::Z => rho,
                            Basis::X => rho.apply_unitary(&pre_rotation, &[m.qubit])?,
                        };
                        for (b, proj) in projectors.iter().enumerate() {
                            let mut bits = bits.clone();
                            bits.push(b as u8);
                            next.push((bits, rho.conjugate(proj, &[m.qubit])?));
                        }
                    }
                    live = next;
                }
            }
        }
        for (q, ch) in decoherence_channels(&noise.decoherence, moment, n)? {
            for (_, rho) in live.iter_mut() {
                *rho = rho.apply_channel(&ch, &[q])?;
            }
        }
    }

    let true_branches: Vec<Branch<T>> = live
        .into_iter()
        .map(|(bits, rho)| {
            Branch::from_unnormalized(Outcomes::new(&labels, &bits), rho.matrix().clone())
        })
        .collect();
    let total: T = true_branches.iter().map(|b| b.probability).sum();
    let tol = Tolerances::<T>::default();
    if initial.is_normalized() && !((total - T::one()).abs() <= tol.physical) {
        return Err(Error::Unphysical(format!(
            "branch probabilities sum to {}",
            total.to_f64_lossy()
        )));
    }
    let (branches, retained_fraction) = confuse_and_postselect(true_branches, &noise.readout)?;
    Ok(Execution {
        branches,
        retained_fraction,
    })
}

/// Single Monte Carlo trajectory: samples each measurement outcome and the
/// readout declaration instead of enumerating them. Returns `None` when the
/// readout model vetoes the record.
pub fn run_trajectory<T: Real, R: Rng + ?Sized>(
    circuit: &Circuit<T>,
    initial: &DensityMatrix<T>,
    noise: &NoiseConfig<T>,
    rng: &mut R,
) -> Result<Option<(Outcomes, DensityMatrix<T>)>> {
    let n = circuit.n_qubits();
    if initial.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            actual: initial.dim(),
        });
    }
    let labels = circuit.labels();
    let projectors = [projector::<T>(0), projector::<T>(1)];
    let pre_rotation = gate_matrix(&GateKind::Ry(-T::FRAC_PI_2()));
    let mut rho = initial.clone();
    let mut declared = Vec::with_capacity(labels.len());
    for moment in circuit.moments() {
        for op in moment.ops() {
            match op {
                MomentOp::Gate(g) => rho = rho.apply_unitary(&g.matrix(), g.targets())?,
                MomentOp::Channel(site) => {
                    rho = rho.apply_channel(&site.kind.channel()?, &site.targets)?
                }
                MomentOp::Measure(m) => {
                    if m.basis == Basis::X {
                        rho = rho.apply_unitary(&pre_rotation, &[m.qubit])?;
                    }
                    let zero = rho.conjugate(&projectors[0], &[m.qubit])?;
                    let p0 = zero.trace() / rho.trace();
                    let u: f64 = rng.gen();
                    let bit = if u < p0.to_f64_lossy() { 0u8 } else { 1u8 };
                    rho = if bit == 0 {
                        zero
                    } else {
                        rho.conjugate(&projectors[1], &[m.qubit])?
                    }
                    .normalized()?;
                    let err = noise.readout.error_for(&m.label);
                    let v: f64 = rng.gen();
                    let (eps, veto) = (err.eps.to_f64_lossy(), err.veto.to_f64_lossy());
                    if v < veto {
                        return Ok(None);
                    }
                    declared.push(if v < veto + eps { bit ^ 1 } else { bit });
                }
            }
        }
        for (q, ch) in decoherence_channels(&noise.decoherence, moment, n)? {
            rho = rho.apply_channel(&ch, &[q])?;
        }
    }
    Ok(Some((Outcomes::new(&labels, &declared), rho)))
}

fn projector<T: Real>(bit: usize) -> OperatorMatrix<T> {
    let mut m = CMatrix::zeros(2);
    m.set(bit, bit, num_traits::One::one());
    OperatorMatrix::new(1, m).expect("2x2 projector")
}
