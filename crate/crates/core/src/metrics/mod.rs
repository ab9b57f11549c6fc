//! Figures of merit.

mod closed;
mod fidelity;
mod table;

pub use closed::{crossover, f3q_idle_closed, f3q_qed_closed, Crossover};
pub use fidelity::{
    corrected_state, f3q, f3q_for_state, f3q_idle, f3q_of, f3q_qed, f_logical, f_logical_for_state,
    f_logical_of, CardinalFidelities, FidelityReport, Metric, PatternCache,
};
pub use table::{error_combination_table, Classification, CombinationRow};

use std::collections::BTreeMap;

use crate::circuit::{Branch, Histogram};
use crate::error::{Error, Result};
use crate::qstate::{CMatrix, DensityMatrix, OperatorMatrix};
use crate::repcode::Syndrome;
use crate::scalar::Real;

/// Declared-syndrome probabilities indexed by [`Syndrome::index`].
/// Branches without both parity labels are ignored.
pub fn syndrome_probabilities<T: Real>(branches: &[Branch<T>]) -> [T; 4] {
    let mut p = [T::zero(); 4];
    for b in branches {
        if let Some(s) = Syndrome::from_outcomes(&b.outcomes) {
            p[s.index()] += b.probability;
        }
    }
    p
}

/// Relative frequencies of a two-label parity histogram, by syndrome index.
pub fn histogram_distribution<T: Real>(h: &Histogram) -> Result<[T; 4]> {
    let total = h.total();
    if total == 0 {
        return Err(Error::InvalidParameter("empty histogram".into()));
    }
    let mut p = [T::zero(); 4];
    for (bits, &n) in &h.counts {
        if let [t, b] = bits[..] {
            p[Syndrome::from_bits(t, b).index()] += T::lit(n as f64 / total as f64);
        } else {
            return Err(Error::InvalidParameter("expected two parity bits".into()));
        }
    }
    Ok(p)
}

/// Mean probability of declaring the correct parity pair, over the eight
/// computational inputs `|ijk⟩` keyed by `4i + 2j + k`.
pub fn assignment_fidelity<T: Real>(distributions: &BTreeMap<usize, [T; 4]>) -> Result<T> {
    let mut acc = T::zero();
    for input in 0..8 {
        let d = distributions
            .get(&input)
            .ok_or_else(|| Error::MissingInput(format!("computational input |{input:03b}⟩")))?;
        acc += d[Syndrome::of_data(input).index()];
    }
    Ok(acc / T::lit(8.0))
}

/// Bell-state witness expectations on a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WitnessSet<T> {
    pub w_phi_plus: T,
    pub w_phi_minus: T,
    pub w_psi_plus: T,
    pub w_psi_minus: T,
}

impl<T: Real> WitnessSet<T> {
    pub fn min(&self) -> T {
        self.w_phi_plus
            .min(self.w_phi_minus)
            .min(self.w_psi_plus)
            .min(self.w_psi_minus)
    }
}

fn pauli_mean<T: Real>(rho: &DensityMatrix<T>, s: &str) -> Result<T> {
    rho.expectation(&OperatorMatrix::pauli_string(s)?)
}

fn require_qubits<T: Real>(rho: &DensityMatrix<T>, n: usize) -> Result<()> {
    if rho.n_qubits() != n {
        return Err(Error::DimensionMismatch {
            expected: 1 << n,
            actual: rho.dim(),
        });
    }
    Ok(())
}

/// `W(Φ±) = (II ∓ XX ± YY − ZZ)/4` and `W(Ψ±) = (II ∓ XX ∓ YY + ZZ)/4`.
pub fn witnesses<T: Real>(rho: &DensityMatrix<T>) -> Result<WitnessSet<T>> {
    require_qubits(rho, 2)?;
    let ii = rho.trace();
    let xx = pauli_mean(rho, "XX")?;
    let yy = pauli_mean(rho, "YY")?;
    let zz = pauli_mean(rho, "ZZ")?;
    let q = T::lit(0.25);
    Ok(WitnessSet {
        w_phi_plus: q * (ii - xx + yy - zz),
        w_phi_minus: q * (ii + xx - yy - zz),
        w_psi_plus: q * (ii - xx - yy + zz),
        w_psi_minus: q * (ii + xx + yy + zz),
    })
}

/// `⟨XXX − YYX − YXY − XYY⟩`.
pub fn mermin<T: Real>(rho: &DensityMatrix<T>) -> Result<T> {
    require_qubits(rho, 3)?;
    Ok(pauli_mean(rho, "XXX")?
        - pauli_mean(rho, "YYX")?
        - pauli_mean(rho, "YXY")?
        - pauli_mean(rho, "XYY")?)
}

/// All `4^n` Pauli strings over `IXYZ`, first qubit leftmost, in base-4
/// counting order.
pub fn pauli_strings(n_qubits: usize) -> Vec<String> {
    const LETTERS: [char; 4] = ['I', 'X', 'Y', 'Z'];
    (0..1usize << (2 * n_qubits))
        .map(|mut k| {
            let mut s = vec!['I'; n_qubits];
            for slot in s.iter_mut().rev() {
                *slot = LETTERS[k & 3];
                k >>= 2;
            }
            s.into_iter().collect()
        })
        .collect()
}

/// Expectation of every Pauli string on the state.
pub fn pauli_expectations<T: Real>(rho: &DensityMatrix<T>) -> Result<BTreeMap<String, T>> {
    pauli_strings(rho.n_qubits())
        .into_iter()
        .map(|s| Ok((s.clone(), pauli_mean(rho, &s)?)))
        .collect()
}

/// Linear inversion `Σ ⟨P⟩ P / 2^n`.
pub fn reconstruct_from_paulis<T: Real>(expectations: &BTreeMap<String, T>) -> Result<CMatrix<T>> {
    let n = expectations
        .keys()
        .next()
        .map(String::len)
        .ok_or_else(|| Error::InvalidParameter("no expectations".into()))?;
    let mut acc = CMatrix::zeros(1 << n);
    for (s, &v) in expectations {
        let p = OperatorMatrix::pauli_string(s)?;
        if p.arity() != n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                actual: 1 << p.arity(),
            });
        }
        acc.add_assign_scaled(p.matrix(), v);
    }
    Ok(acc.scale_real(T::one() / T::lit((1u64 << n) as f64)))
}
