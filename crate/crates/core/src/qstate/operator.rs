use num_traits::Zero;

use super::matrix::{check_targets, CMatrix, Layout};
use super::PureState;
use crate::error::{Error, Result};
use crate::scalar::{Real, Tolerances, C};

/// Operator on `arity` qubits, stored as a dense `2^arity` square matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<T> {
    arity: usize,
    matrix: CMatrix<T>,
    unitary: bool,
}

impl<T: Real> OperatorMatrix<T> {
    /// General (not necessarily unitary) operator.
    pub fn new(arity: usize, matrix: CMatrix<T>) -> Result<Self> {
        if matrix.dim() != 1 << arity {
            return Err(Error::DimensionMismatch {
                expected: 1 << arity,
                actual: matrix.dim(),
            });
        }
        Ok(Self {
            arity,
            matrix,
            unitary: false,
        })
    }

    /// Operator flagged unitary; rejected unless `U†U = I` within the
    /// default norm tolerance.
    pub fn unitary(arity: usize, matrix: CMatrix<T>) -> Result<Self> {
        Self::unitary_with(arity, matrix, &Tolerances::default())
    }

    pub fn unitary_with(arity: usize, matrix: CMatrix<T>, tol: &Tolerances<T>) -> Result<Self> {
        let mut op = Self::new(arity, matrix)?;
        let dev = op.matrix.unitarity_deviation();
        if !(dev <= tol.norm) {
            return Err(Error::NotUnitary {
                deviation: dev.to_f64_lossy(),
            });
        }
        op.unitary = true;
        Ok(op)
    }

    pub(crate) fn trusted_unitary(arity: usize, matrix: CMatrix<T>) -> Self {
        debug_assert_eq!(matrix.dim(), 1 << arity);
        Self {
            arity,
            matrix,
            unitary: true,
        }
    }

    pub fn identity(arity: usize) -> Self {
        Self::trusted_unitary(arity, CMatrix::identity(1 << arity))
    }

    pub fn pauli_x() -> Self {
        Self::trusted_unitary(1, CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]))
    }

    pub fn pauli_y() -> Self {
        let (z, i) = (C::zero(), C::i());
        Self::trusted_unitary(1, CMatrix::from_vec(2, vec![z, -i, i, z]).unwrap())
    }

    pub fn pauli_z() -> Self {
        Self::trusted_unitary(1, CMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -1.0]]))
    }

    /// Tensor product of single-qubit Paulis, e.g. `"XYZ"`; the first
    /// character acts on the most significant qubit.
    pub fn pauli_string(s: &str) -> Result<Self> {
        let mut m = CMatrix::identity(1);
        for ch in s.chars() {
            let p = match ch {
                'I' => Self::identity(1),
                'X' => Self::pauli_x(),
                'Y' => Self::pauli_y(),
                'Z' => Self::pauli_z(),
                other => {
                    return Err(Error::InvalidParameter(format!(
                        "`{other}` is not a Pauli label"
                    )))
                }
            };
            m = m.kron(&p.matrix);
        }
        Ok(Self::trusted_unitary(s.chars().count(), m))
    }

    /// Product of `X` on each flagged position of an `arity`-qubit register.
    pub fn x_mask(flips: &[bool]) -> Self {
        let s: String = flips.iter().map(|&f| if f { 'X' } else { 'I' }).collect();
        Self::pauli_string(&s).expect("valid Pauli labels")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.matrix.hermiticity_deviation() <= tol
    }

    pub fn adjoint(&self) -> Self {
        Self {
            arity: self.arity,
            matrix: self.matrix.adjoint(),
            unitary: self.unitary,
        }
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                arity: self.arity,
                targets: other.arity,
            });
        }
        Ok(Self {
            arity: self.arity,
            matrix: self.matrix.matmul(&other.matrix),
            unitary: self.unitary && other.unitary,
        })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            arity: self.arity + other.arity,
            matrix: self.matrix.kron(&other.matrix),
            unitary: self.unitary && other.unitary,
        }
    }

    pub fn scaled(&self, k: T) -> Self {
        Self {
            arity: self.arity,
            matrix: self.matrix.scale_real(k),
            unitary: false,
        }
    }

    pub fn apply_to_state(&self, psi: &PureState<T>, targets: &[usize]) -> Result<PureState<T>> {
        let full = embed(self, targets, psi.n_qubits())?;
        PureState::new(full.matrix.mul_vec(psi.amplitudes()))
    }
}

/// The `2^n`-dimensional operator acting as `op` on `targets` and as the
/// identity elsewhere. The first target carries the most significant bit of
/// `op`'s index.
pub fn embed<T: Real>(
    op: &OperatorMatrix<T>,
    targets: &[usize],
    n_qubits: usize,
) -> Result<OperatorMatrix<T>> {
    if op.arity != targets.len() {
        return Err(Error::ArityMismatch {
            arity: op.arity,
            targets: targets.len(),
        });
    }
    check_targets(targets, n_qubits)?;
    let layout = Layout::new(targets, n_qubits);
    let mut full = CMatrix::zeros(1 << n_qubits);
    for &base in &layout.bases {
        for (r, &ro) in layout.offsets.iter().enumerate() {
            for (c, &co) in layout.offsets.iter().enumerate() {
                let v = op.matrix.get(r, c);
                if !v.is_zero() {
                    full.set(base + ro, base + co, v);
                }
            }
        }
    }
    Ok(OperatorMatrix {
        arity: n_qubits,
        matrix: full,
        unitary: op.unitary,
    })
}
