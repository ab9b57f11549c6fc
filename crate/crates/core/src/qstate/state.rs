use num_traits::{One, Zero};

use super::matrix::{
    apply_left, apply_right_adjoint, check_targets, conjugate_local, CMatrix, Layout,
};
use super::{KrausChannel, OperatorMatrix};
use crate::error::{Error, Result};
use crate::scalar::{Real, Tolerances, C};

/// Normalized state vector. Qubit 0 is the most significant index bit.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState<T> {
    n_qubits: usize,
    amps: Vec<C<T>>,
}

impl<T: Real> PureState<T> {
    pub fn new(amps: Vec<C<T>>) -> Result<Self> {
        Self::new_with(amps, &Tolerances::default())
    }

    pub fn new_with(amps: Vec<C<T>>, tol: &Tolerances<T>) -> Result<Self> {
        let n_qubits = qubits_for_dim(amps.len())?;
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<T>().sqrt();
        if !((norm - T::one()).abs() <= tol.norm) {
            return Err(Error::NotNormalized {
                norm: norm.to_f64_lossy(),
            });
        }
        Ok(Self { n_qubits, amps })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if index >= 1 << n_qubits {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amps = vec![C::zero(); 1 << n_qubits];
        amps[index] = C::one();
        Ok(Self { n_qubits, amps })
    }

    /// `α|0⟩ + β|1⟩`.
    pub fn qubit(alpha: C<T>, beta: C<T>) -> Result<Self> {
        Self::new(vec![alpha, beta])
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for &a in &self.amps {
            amps.extend(other.amps.iter().map(|&b| a * b));
        }
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C<T>> {
        if self.amps.len() != other.amps.len() {
            return Err(Error::DimensionMismatch {
                expected: self.amps.len(),
                actual: other.amps.len(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn density(&self) -> DensityMatrix<T> {
        DensityMatrix {
            n_qubits: self.n_qubits,
            matrix: CMatrix::outer(&self.amps),
            normalized: true,
        }
    }
}

/// Density matrix on `n_qubits` qubits.
///
/// Normally unit trace. Branch-conditioned intermediates may be stored
/// unnormalized, with trace equal to the branch probability; the
/// `normalized` flag records which.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix<T> {
    n_qubits: usize,
    matrix: CMatrix<T>,
    normalized: bool,
}

impl<T: Real> DensityMatrix<T> {
    /// Validated unit-trace density matrix.
    pub fn new(matrix: CMatrix<T>) -> Result<Self> {
        let rho = Self::from_matrix(matrix, true)?;
        rho.check_physical(&Tolerances::default())?;
        Ok(rho)
    }

    /// Validated positive Hermitian matrix with arbitrary trace.
    pub fn unnormalized(matrix: CMatrix<T>) -> Result<Self> {
        let rho = Self::from_matrix(matrix, false)?;
        rho.check_physical(&Tolerances::default())?;
        Ok(rho)
    }

    fn from_matrix(matrix: CMatrix<T>, normalized: bool) -> Result<Self> {
        let n_qubits = qubits_for_dim(matrix.dim())?;
        Ok(Self {
            n_qubits,
            matrix,
            normalized,
        })
    }

    pub(crate) fn from_raw(matrix: CMatrix<T>, normalized: bool) -> Self {
        let n_qubits = matrix.dim().trailing_zeros() as usize;
        Self {
            n_qubits,
            matrix,
            normalized,
        }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        Ok(PureState::basis(n_qubits, index)?.density())
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        Self {
            n_qubits,
            matrix: CMatrix::identity(d).scale_real(T::one() / T::lit(d as f64)),
            normalized: true,
        }
    }

    /// Convex mixture `Σ wᵢ ρᵢ`; weights must sum to one.
    pub fn mixture(parts: &[(T, &DensityMatrix<T>)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let mut acc = CMatrix::zeros(first.1.matrix.dim());
        for (w, rho) in parts {
            rho.same_dim(first.1)?;
            acc.add_assign_scaled(&rho.matrix, *w);
        }
        Self::new(acc)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn trace(&self) -> T {
        self.matrix.trace().re
    }

    /// Rescales to unit trace. Fails on a (numerically) zero trace.
    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if !(tr > T::zero()) {
            return Err(Error::Unphysical(format!(
                "cannot normalize state with trace {}",
                tr.to_f64_lossy()
            )));
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            matrix: self.matrix.scale_real(T::one() / tr),
            normalized: true,
        })
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            matrix: self.matrix.kron(&other.matrix),
            normalized: self.normalized && other.normalized,
        }
    }

    /// Hermiticity, trace (when normalized) and positivity.
    pub fn check_physical(&self, tol: &Tolerances<T>) -> Result<()> {
        let herm = self.matrix.hermiticity_deviation();
        if !(herm <= tol.physical) {
            return Err(Error::Unphysical(format!(
                "hermiticity deviation {:e}",
                herm.to_f64_lossy()
            )));
        }
        let tr = self.trace();
        if self.normalized && !((tr - T::one()).abs() <= tol.physical) {
            return Err(Error::Unphysical(format!("trace {}", tr.to_f64_lossy())));
        }
        if !self.matrix.is_positive_semidefinite(tol.physical) {
            return Err(Error::Unphysical("negative eigenvalue".into()));
        }
        Ok(())
    }

    /// `U ρ U†` with `op` acting on `targets`.
    pub fn apply_unitary(&self, op: &OperatorMatrix<T>, targets: &[usize]) -> Result<Self> {
        if !op.is_unitary() {
            return Err(Error::NotUnitary {
                deviation: f64::NAN,
            });
        }
        self.conjugate(op, targets)
    }

    /// `A ρ A†` for an arbitrary operator (projectors, Kraus terms).
    pub fn conjugate(&self, op: &OperatorMatrix<T>, targets: &[usize]) -> Result<Self> {
        let layout = self.layout_for(op.arity(), targets)?;
        Ok(Self {
            n_qubits: self.n_qubits,
            matrix: conjugate_local(&self.matrix, op.matrix(), &layout),
            normalized: self.normalized && op.is_unitary(),
        })
    }

    /// `Σ K ρ K†`.
    pub fn apply_channel(&self, ch: &KrausChannel<T>, targets: &[usize]) -> Result<Self> {
        let dev = ch.trace_preservation_deviation();
        if !(dev <= Tolerances::<T>::default().physical) {
            return Err(Error::NotTracePreserving {
                deviation: dev.to_f64_lossy(),
            });
        }
        let layout = self.layout_for(ch.arity(), targets)?;
        let mut acc = CMatrix::zeros(self.dim());
        for k in ch.kraus_ops() {
            let term = apply_right_adjoint(
                &apply_left(&self.matrix, k.matrix(), &layout),
                k.matrix(),
                &layout,
            );
            acc = &acc + &term;
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            matrix: acc,
            normalized: self.normalized,
        })
    }

    /// Reduced state on `keep`, in the order listed.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        check_targets(keep, self.n_qubits)?;
        let traced: Vec<usize> = (0..self.n_qubits).filter(|q| !keep.contains(q)).collect();
        let kept = Layout::new(keep, self.n_qubits);
        let env = Layout::new(&traced, self.n_qubits);
        let dk = kept.offsets.len();
        let mut out = CMatrix::zeros(dk);
        for (r, &ro) in kept.offsets.iter().enumerate() {
            for (c, &co) in kept.offsets.iter().enumerate() {
                let mut acc = C::<T>::zero();
                for &e in &env.offsets {
                    acc += self.matrix.get(ro + e, co + e);
                }
                out.set(r, c, acc);
            }
        }
        Ok(Self {
            n_qubits: keep.len(),
            matrix: out,
            normalized: self.normalized,
        })
    }

    /// `Tr(ρ O)` for a Hermitian observable on the full register.
    pub fn expectation(&self, obs: &OperatorMatrix<T>) -> Result<T> {
        let tol = Tolerances::<T>::default();
        if obs.arity() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: obs.matrix().dim(),
            });
        }
        let dev = obs.matrix().hermiticity_deviation();
        if !(dev <= tol.physical) {
            return Err(Error::NotHermitian {
                deviation: dev.to_f64_lossy(),
            });
        }
        let d = self.dim();
        let mut acc = C::<T>::zero();
        for r in 0..d {
            for k in 0..d {
                acc += self.matrix.get(r, k) * obs.matrix().get(k, r);
            }
        }
        if !(acc.im.abs() <= tol.physical) {
            return Err(Error::Unphysical(format!(
                "expectation has imaginary part {:e}",
                acc.im.to_f64_lossy()
            )));
        }
        Ok(acc.re)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity_to_pure(&self, target: &PureState<T>) -> Result<T> {
        if target.amplitudes().len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: target.amplitudes().len(),
            });
        }
        let v = self.matrix.mul_vec(target.amplitudes());
        let f: C<T> = target
            .amplitudes()
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .sum();
        Ok(f.re)
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        self.same_dim(other)?;
        Ok(self.matrix.max_abs_diff(&other.matrix))
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(())
    }

    fn layout_for(&self, arity: usize, targets: &[usize]) -> Result<Layout> {
        if arity != targets.len() {
            return Err(Error::ArityMismatch {
                arity,
                targets: targets.len(),
            });
        }
        check_targets(targets, self.n_qubits)?;
        Ok(Layout::new(targets, self.n_qubits))
    }
}

fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "dimension {dim} is not a power of two"
        )));
    }
    Ok(dim.trailing_zeros() as usize)
}
