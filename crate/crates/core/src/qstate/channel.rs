use num_traits::Zero;

use super::matrix::CMatrix;
use super::OperatorMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, Tolerances, C};

/// Completely positive map in Kraus form.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel<T> {
    arity: usize,
    ops: Vec<OperatorMatrix<T>>,
}

impl<T: Real> KrausChannel<T> {
    /// Rejects operator sets with mixed arity or `Σ K†K ≠ I`.
    pub fn new(ops: Vec<OperatorMatrix<T>>) -> Result<Self> {
        Self::new_with(ops, &Tolerances::default())
    }

    pub fn new_with(ops: Vec<OperatorMatrix<T>>, tol: &Tolerances<T>) -> Result<Self> {
        let arity = ops
            .first()
            .map(|k| k.arity())
            .ok_or_else(|| Error::InvalidParameter("channel with no Kraus operators".into()))?;
        if let Some(bad) = ops.iter().find(|k| k.arity() != arity) {
            return Err(Error::ArityMismatch {
                arity,
                targets: bad.arity(),
            });
        }
        let ch = Self { arity, ops };
        let dev = ch.trace_preservation_deviation();
        if !(dev <= tol.physical) {
            return Err(Error::NotTracePreserving {
                deviation: dev.to_f64_lossy(),
            });
        }
        Ok(ch)
    }

    pub fn identity(arity: usize) -> Self {
        Self {
            arity,
            ops: vec![OperatorMatrix::identity(arity)],
        }
    }

    /// `ρ ↦ (1−p)ρ + p XρX`.
    pub fn bit_flip(p: T) -> Result<Self> {
        check_probability(p)?;
        Self::new(vec![
            OperatorMatrix::identity(1).scaled((T::one() - p).sqrt()),
            OperatorMatrix::pauli_x().scaled(p.sqrt()),
        ])
    }

    /// Energy relaxation with decay probability `gamma`.
    pub fn amplitude_damping(gamma: T) -> Result<Self> {
        check_probability(gamma)?;
        let (z, o) = (T::zero(), T::one());
        let k0 = CMatrix::from_vec(
            2,
            vec![
                C::new(o, z),
                C::zero(),
                C::zero(),
                C::new((o - gamma).sqrt(), z),
            ],
        )?;
        let k1 = CMatrix::from_vec(
            2,
            vec![C::zero(), C::new(gamma.sqrt(), z), C::zero(), C::zero()],
        )?;
        Self::new(vec![
            OperatorMatrix::new(1, k0)?,
            OperatorMatrix::new(1, k1)?,
        ])
    }

    /// Pure dephasing that multiplies off-diagonal elements by `coherence`.
    pub fn dephasing(coherence: T) -> Result<Self> {
        check_probability(coherence)?;
        let two = T::lit(2.0);
        Self::new(vec![
            OperatorMatrix::identity(1).scaled(((T::one() + coherence) / two).sqrt()),
            OperatorMatrix::pauli_z().scaled(((T::one() - coherence) / two).sqrt()),
        ])
    }

    /// Channel applying `self` first, then `next`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        let mut ops = Vec::with_capacity(self.ops.len() * next.ops.len());
        for b in &next.ops {
            for a in &self.ops {
                let k = b.compose(a)?;
                if k.matrix().as_slice().iter().any(|x| !x.is_zero()) {
                    ops.push(k);
                }
            }
        }
        Self::new(ops)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn kraus_ops(&self) -> &[OperatorMatrix<T>] {
        &self.ops
    }

    /// `max |Σ K†K − I|`.
    pub fn trace_preservation_deviation(&self) -> T {
        let dim = 1 << self.arity;
        let mut sum = CMatrix::zeros(dim);
        for k in &self.ops {
            let kk = k.matrix().adjoint().matmul(k.matrix());
            sum = &sum + &kk;
        }
        sum.max_abs_diff(&CMatrix::identity(dim))
    }
}

fn check_probability<T: Real>(p: T) -> Result<()> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::InvalidProbability(p.to_f64_lossy()));
    }
    Ok(())
}
