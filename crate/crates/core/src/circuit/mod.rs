//! Circuit intermediate representation and its exact executor.
//!
//! A [`Circuit`] is an ordered list of [`Moment`]s. Each moment holds gates,
//! channel sites and measurement markers on disjoint qubits, and lasts as
//! long as its slowest entry (or its idle padding). Durations matter only to
//! the decoherence model; ideal execution ignores them.

mod exec;
mod gates;
mod sample;
mod text;

pub use exec::{
    execute, run_exact, run_trajectory, Branch, Execution, Outcomes, DEGENERATE_PROBABILITY,
};
pub use gates::{gate_matrix, Gate, GateKind, CZ_NS, ISWAP_NS, SINGLE_QUBIT_NS};
pub use sample::{sample_shots, sample_shots_with, stream_rng, Histogram};

use crate::error::{Error, Result};
use crate::qstate::KrausChannel;
use crate::scalar::Real;

/// Measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    Z,
    /// `|±⟩` basis, realized as `RY(−π/2)` then a `Z` projection; `|+⟩`
    /// reads 0.
    X,
}

/// Projective single-qubit measurement whose result is recorded under
/// `label`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureMarker {
    pub qubit: usize,
    pub basis: Basis,
    pub label: String,
    pub duration: f64,
}

impl MeasureMarker {
    pub fn new(qubit: usize, basis: Basis, label: impl Into<String>) -> Self {
        Self {
            qubit,
            basis,
            label: label.into(),
            duration: 0.0,
        }
    }

    pub fn with_duration(mut self, ns: f64) -> Self {
        self.duration = ns;
        self
    }
}

/// Parameterized channel families that can appear inside a circuit.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelKind<T> {
    BitFlip(T),
    AmplitudeDamping(T),
    Dephasing(T),
    Custom(KrausChannel<T>),
}

impl<T: Real> ChannelKind<T> {
    pub fn channel(&self) -> Result<KrausChannel<T>> {
        match self {
            ChannelKind::BitFlip(p) => KrausChannel::bit_flip(*p),
            ChannelKind::AmplitudeDamping(g) => KrausChannel::amplitude_damping(*g),
            ChannelKind::Dephasing(c) => KrausChannel::dephasing(*c),
            ChannelKind::Custom(ch) => Ok(ch.clone()),
        }
    }

    fn arity(&self) -> usize {
        match self {
            ChannelKind::Custom(ch) => ch.arity(),
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSite<T> {
    pub kind: ChannelKind<T>,
    pub targets: Vec<usize>,
    pub duration: f64,
}

impl<T: Real> ChannelSite<T> {
    pub fn new(kind: ChannelKind<T>, targets: &[usize]) -> Result<Self> {
        if kind.arity() != targets.len() {
            return Err(Error::ArityMismatch {
                arity: kind.arity(),
                targets: targets.len(),
            });
        }
        kind.channel()?;
        Ok(Self {
            kind,
            targets: targets.to_vec(),
            duration: 0.0,
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MomentOp<T> {
    Gate(Gate<T>),
    Channel(ChannelSite<T>),
    Measure(MeasureMarker),
}

impl<T: Real> MomentOp<T> {
    pub fn qubits(&self) -> &[usize] {
        match self {
            MomentOp::Gate(g) => g.targets(),
            MomentOp::Channel(c) => &c.targets,
            MomentOp::Measure(m) => std::slice::from_ref(&m.qubit),
        }
    }

    pub fn duration(&self) -> f64 {
        match self {
            MomentOp::Gate(g) => g.duration(),
            MomentOp::Channel(c) => c.duration,
            MomentOp::Measure(m) => m.duration,
        }
    }
}

impl<T> From<Gate<T>> for MomentOp<T> {
    fn from(g: Gate<T>) -> Self {
        MomentOp::Gate(g)
    }
}

impl<T> From<MeasureMarker> for MomentOp<T> {
    fn from(m: MeasureMarker) -> Self {
        MomentOp::Measure(m)
    }
}

impl<T> From<ChannelSite<T>> for MomentOp<T> {
    fn from(c: ChannelSite<T>) -> Self {
        MomentOp::Channel(c)
    }
}

/// Parallel layer of operations on disjoint qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Moment<T> {
    ops: Vec<MomentOp<T>>,
    padding: f64,
}

impl<T: Real> Moment<T> {
    pub fn new(ops: Vec<MomentOp<T>>) -> Result<Self> {
        let mut seen: Vec<usize> = Vec::new();
        for op in &ops {
            for &q in op.qubits() {
                if seen.contains(&q) {
                    return Err(Error::DuplicateQubit(q));
                }
                seen.push(q);
            }
        }
        Ok(Self { ops, padding: 0.0 })
    }

    /// Empty moment lasting `ns`.
    pub fn idle(ns: f64) -> Self {
        Self {
            ops: Vec::new(),
            padding: ns,
        }
    }

    pub fn gates(gates: Vec<Gate<T>>) -> Result<Self> {
        Self::new(gates.into_iter().map(MomentOp::Gate).collect())
    }

    /// Sets a minimum duration, so the moment lasts at least `ns`.
    pub fn padded(mut self, ns: f64) -> Self {
        self.padding = ns;
        self
    }

    pub fn ops(&self) -> &[MomentOp<T>] {
        &self.ops
    }

    pub fn padding(&self) -> f64 {
        self.padding
    }

    pub fn duration(&self) -> f64 {
        self.ops
            .iter()
            .map(MomentOp::duration)
            .fold(self.padding, f64::max)
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

/// Timed circuit on `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    moments: Vec<Moment<T>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            moments: Vec::new(),
        }
    }

    pub fn from_moments(n_qubits: usize, moments: Vec<Moment<T>>) -> Result<Self> {
        let mut c = Self::new(n_qubits);
        for m in moments {
            c.push(m)?;
        }
        Ok(c)
    }

    /// Appends a moment, checking qubit range and label uniqueness.
    pub fn push(&mut self, moment: Moment<T>) -> Result<()> {
        let mut labels = self.labels();
        for op in moment.ops() {
            for &q in op.qubits() {
                if q >= self.n_qubits {
                    return Err(Error::QubitOutOfRange {
                        qubit: q,
                        n_qubits: self.n_qubits,
                    });
                }
            }
            if let MomentOp::Measure(m) = op {
                if labels.contains(&m.label) {
                    return Err(Error::LabelCollision(m.label.clone()));
                }
                labels.push(m.label.clone());
            }
        }
        self.moments.push(moment);
        Ok(())
    }

    /// Concatenation; `other` may act on fewer qubits.
    pub fn then(&self, other: &Circuit<T>) -> Result<Self> {
        let mut out = self.widened(self.n_qubits.max(other.n_qubits))?;
        for m in &other.moments {
            out.push(m.clone())?;
        }
        Ok(out)
    }

    /// Same moments on a larger register; existing qubit indices keep
    /// their meaning.
    pub fn widened(&self, n_qubits: usize) -> Result<Self> {
        if n_qubits < self.n_qubits {
            return Err(Error::InvalidParameter(format!(
                "cannot shrink a {}-qubit circuit to {n_qubits}",
                self.n_qubits
            )));
        }
        Ok(Self {
            n_qubits,
            moments: self.moments.clone(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn moments(&self) -> &[Moment<T>] {
        &self.moments
    }

    /// Measurement labels in circuit order.
    pub fn labels(&self) -> Vec<String> {
        self.moments
            .iter()
            .flat_map(|m| m.ops())
            .filter_map(|op| match op {
                MomentOp::Measure(m) => Some(m.label.clone()),
                _ => None,
            })
            .collect()
    }

    pub fn total_duration(&self) -> f64 {
        self.moments.iter().map(Moment::duration).sum()
    }

    /// Every operation in its own moment, in the original order.
    pub fn serialized(&self) -> Self {
        let moments = self
            .moments
            .iter()
            .flat_map(|m| {
                m.ops().iter().map(|op| Moment {
                    ops: vec![op.clone()],
                    padding: 0.0,
                })
            })
            .collect();
        Self {
            n_qubits: self.n_qubits,
            moments,
        }
    }

    /// Copy with all measurement markers dropped.
    pub fn without_measurements(&self) -> Self {
        let moments = self
            .moments
            .iter()
            .map(|m| Moment {
                ops: m
                    .ops()
                    .iter()
                    .filter(|op| !matches!(op, MomentOp::Measure(_)))
                    .cloned()
                    .collect(),
                padding: m.padding,
            })
            .collect();
        Self {
            n_qubits: self.n_qubits,
            moments,
        }
    }

    pub fn to_text(&self) -> Result<String> {
        text::to_text(self)
    }

    pub fn from_text(s: &str) -> Result<Self> {
        text::from_text(s)
    }
}
