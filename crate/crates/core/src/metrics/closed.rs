use num_traits::Num;

use crate::noise::Scenario;
use crate::scalar::Real;

fn small<W: Num>(k: u8) -> W {
    (0..k).fold(W::zero(), |acc, _| acc + W::one())
}

/// Ideal three-qubit fidelity with error detection under incoherent flips
/// of probability `p`.
///
/// One target: `1`. Three targets: `1 − 2p² + 4p³/3`.
pub fn f3q_qed_closed<W: Num + Clone>(scenario: Scenario, p: W) -> W {
    match scenario {
        Scenario::Single => W::one(),
        Scenario::All => {
            let p2 = p.clone() * p.clone();
            let p3 = p2.clone() * p;
            W::one() - small::<W>(2) * p2 + small::<W>(4) * p3 / small::<W>(3)
        }
    }
}

/// Ideal three-qubit fidelity after idling.
///
/// One target: `1 − p`. Three targets: `(1 − p)³ + p³/3`.
pub fn f3q_idle_closed<W: Num + Clone>(scenario: Scenario, p: W) -> W {
    match scenario {
        Scenario::Single => W::one() - p,
        Scenario::All => {
            let q = W::one() - p.clone();
            q.clone() * q.clone() * q + p.clone() * p.clone() * p / small::<W>(3)
        }
    }
}

/// Where error detection starts to pay off on a grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossover<T> {
    /// First grid index with `qed ≥ idle`.
    pub index: usize,
    pub p_grid: T,
    /// Linear interpolation of the root of `qed − idle` between `index − 1`
    /// and `index`; the grid value when `index` is 0.
    pub p_interpolated: T,
}

/// Smallest grid point where `qed ≥ idle − tol`, if any.
pub fn crossover<T: Real>(p: &[T], qed: &[T], idle: &[T], tol: T) -> Option<Crossover<T>> {
    let n = p.len().min(qed.len()).min(idle.len());
    let index = (0..n).find(|&i| qed[i] >= idle[i] - tol)?;
    let p_interpolated = if index == 0 {
        p[0]
    } else {
        let (d0, d1) = (qed[index - 1] - idle[index - 1], qed[index] - idle[index]);
        let span = d1 - d0;
        if span > T::zero() {
            p[index - 1] + (p[index] - p[index - 1]) * (-d0 / span)
        } else {
            p[index]
        }
    };
    Some(Crossover {
        index,
        p_grid: p[index],
        p_interpolated,
    })
}
