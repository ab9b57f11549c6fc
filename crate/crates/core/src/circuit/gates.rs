use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::qstate::{CMatrix, OperatorMatrix};
use crate::scalar::{c, Real, C};

/// Default single-qubit rotation length (Gaussian DRAG pulse).
pub const SINGLE_QUBIT_NS: f64 = 20.0;
/// Default adiabatic CPHASE length.
pub const CZ_NS: f64 = 40.0;
/// Sudden iSWAP length.
pub const ISWAP_NS: f64 = 12.0;

/// Gate type, with its rotation angle where it has one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind<T> {
    Rx(T),
    Ry(T),
    Rz(T),
    X,
    Y,
    Z,
    Cz,
    ISwap,
    /// Targets are `[control, target]`.
    Cnot,
    /// Targets are `[control, control, target]`.
    Toffoli,
}

impl<T: Real> GateKind<T> {
    pub fn arity(&self) -> usize {
        match self {
            GateKind::Rx(_)
            | GateKind::Ry(_)
            | GateKind::Rz(_)
            | GateKind::X
            | GateKind::Y
            | GateKind::Z => 1,
            GateKind::Cz | GateKind::ISwap | GateKind::Cnot => 2,
            GateKind::Toffoli => 3,
        }
    }

    pub fn angle(&self) -> Option<T> {
        match *self {
            GateKind::Rx(t) | GateKind::Ry(t) | GateKind::Rz(t) => Some(t),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::Rx(_) => "RX",
            GateKind::Ry(_) => "RY",
            GateKind::Rz(_) => "RZ",
            GateKind::X => "X",
            GateKind::Y => "Y",
            GateKind::Z => "Z",
            GateKind::Cz => "CZ",
            GateKind::ISwap => "ISWAP",
            GateKind::Cnot => "CNOT",
            GateKind::Toffoli => "TOFFOLI",
        }
    }

    pub fn from_name(name: &str, angle: Option<T>) -> Option<Self> {
        Some(match (name, angle) {
            ("RX", Some(t)) => GateKind::Rx(t),
            ("RY", Some(t)) => GateKind::Ry(t),
            ("RZ", Some(t)) => GateKind::Rz(t),
            ("X", None) => GateKind::X,
            ("Y", None) => GateKind::Y,
            ("Z", None) => GateKind::Z,
            ("CZ", None) => GateKind::Cz,
            ("ISWAP", None) => GateKind::ISwap,
            ("CNOT", None) => GateKind::Cnot,
            ("TOFFOLI", None) => GateKind::Toffoli,
            _ => return None,
        })
    }

    /// Nominal duration used when none is given.
    pub fn default_duration(&self) -> f64 {
        match self {
            GateKind::Cz => CZ_NS,
            GateKind::ISwap => ISWAP_NS,
            // realized as RY · CZ · RY
            GateKind::Cnot => 2.0 * SINGLE_QUBIT_NS + CZ_NS,
            GateKind::Toffoli => 0.0,
            _ => SINGLE_QUBIT_NS,
        }
    }
}

/// A gate placed on specific qubits, with its duration in ns.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate<T> {
    kind: GateKind<T>,
    targets: Vec<usize>,
    duration: f64,
}

impl<T: Real> Gate<T> {
    pub fn new(kind: GateKind<T>, targets: &[usize]) -> Result<Self> {
        Self::timed(kind, targets, kind.default_duration())
    }

    pub fn timed(kind: GateKind<T>, targets: &[usize], duration: f64) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(Error::ArityMismatch {
                arity: kind.arity(),
                targets: targets.len(),
            });
        }
        for (i, q) in targets.iter().enumerate() {
            if targets[..i].contains(q) {
                return Err(Error::DuplicateQubit(*q));
            }
        }
        if let Some(theta) = kind.angle() {
            if !theta.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "{} angle must be finite",
                    kind.name()
                )));
            }
        }
        if !(duration >= 0.0 && duration.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "gate duration {duration} ns must be finite and non-negative"
            )));
        }
        Ok(Self {
            kind,
            targets: targets.to_vec(),
            duration,
        })
    }

    pub fn kind(&self) -> GateKind<T> {
        self.kind
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    pub fn matrix(&self) -> OperatorMatrix<T> {
        gate_matrix(&self.kind)
    }
}

/// Unitary of a gate kind. Rotations follow `R_P(θ) = exp(−iθP/2)`.
pub fn gate_matrix<T: Real>(kind: &GateKind<T>) -> OperatorMatrix<T> {
    let (o, z) = (C::<T>::one(), C::<T>::zero());
    let half = T::lit(0.5);
    let m = match *kind {
        GateKind::Rx(theta) => {
            let (s, co) = (theta * half).sin_cos();
            CMatrix::from_vec(
                2,
                vec![
                    c(co, T::zero()),
                    c(T::zero(), -s),
                    c(T::zero(), -s),
                    c(co, T::zero()),
                ],
            )
        }
        GateKind::Ry(theta) => {
            let (s, co) = (theta * half).sin_cos();
            CMatrix::from_vec(
                2,
                vec![
                    c(co, T::zero()),
                    c(-s, T::zero()),
                    c(s, T::zero()),
                    c(co, T::zero()),
                ],
            )
        }
        GateKind::Rz(theta) => {
            let (s, co) = (theta * half).sin_cos();
            Ok(CMatrix::diagonal(&[c(co, -s), c(co, s)]))
        }
        GateKind::X => return OperatorMatrix::pauli_x(),
        GateKind::Y => return OperatorMatrix::pauli_y(),
        GateKind::Z => return OperatorMatrix::pauli_z(),
        GateKind::Cz => Ok(CMatrix::diagonal(&[o, o, o, -o])),
        GateKind::ISwap => {
            let i = C::i();
            CMatrix::from_vec(4, vec![o, z, z, z, z, z, i, z, z, i, z, z, z, z, z, o])
        }
        GateKind::Cnot => Ok(CMatrix::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])),
        GateKind::Toffoli => {
            let mut m = CMatrix::identity(8);
            m.set(6, 6, z);
            m.set(7, 7, z);
            m.set(6, 7, o);
            m.set(7, 6, o);
            Ok(m)
        }
    };
    OperatorMatrix::unitary(kind.arity(), m.expect("static gate shape"))
        .expect("gate matrices are unitary")
}
