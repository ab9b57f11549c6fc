use std::collections::BTreeMap;
use std::fmt;

use super::fidelity::{f_logical_of, PatternCache};
use crate::error::Result;
use crate::noise::{DataQubit, ErrorPattern, NoiseConfig};
use crate::repcode::{Cardinal, Pipeline};
use crate::scalar::Real;

/// Outcome of comparing the two pipelines on one error combination.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Classification {
    QedWins,
    IdleWins,
    Tie,
}

impl Classification {
    pub fn of<T: Real>(qed: T, idle: T, tol: T) -> Self {
        if qed > idle + tol {
            Classification::QedWins
        } else if idle > qed + tol {
            Classification::IdleWins
        } else {
            Classification::Tie
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::QedWins => "QED wins",
            Classification::IdleWins => "idle wins",
            Classification::Tie => "tie",
        })
    }
}

/// Logical fidelity for `first` deterministic flips before the round and
/// `second` after it, averaged over cardinals and over all qubit
/// assignments in the case.
#[derive(Debug, Clone, PartialEq)]
pub struct CombinationRow<T> {
    pub first: usize,
    pub second: usize,
    /// `Some('a')` when one flip set contains the other, `Some('b')`
    /// otherwise; only for one or two flips in both rounds.
    pub case: Option<char>,
    pub assignments: usize,
    pub qed: T,
    pub idle: T,
    pub class: Classification,
}

impl<T> CombinationRow<T> {
    /// `m/n` with the sub-case letter, e.g. `1/1b`.
    pub fn label(&self) -> String {
        match self.case {
            Some(c) => format!("{}/{}{}", self.first, self.second, c),
            None => format!("{}/{}", self.first, self.second),
        }
    }
}

fn subsets() -> Vec<Vec<DataQubit>> {
    (0..8u8)
        .map(|mask| {
            DataQubit::ALL
                .into_iter()
                .filter(|q| mask & (4 >> q.index()) != 0)
                .collect()
        })
        .collect()
}

fn case_of(a: &[DataQubit], b: &[DataQubit]) -> Option<char> {
    let sub = |x: &[DataQubit], y: &[DataQubit]| x.iter().all(|q| y.contains(q));
    if (1..=2).contains(&a.len()) && (1..=2).contains(&b.len()) {
        Some(if sub(a, b) || sub(b, a) { 'a' } else { 'b' })
    } else {
        None
    }
}

type RowKey = (usize, usize, Option<char>);

/// Every combination of deterministic first- and second-round flips, with
/// both pipelines under `noise`. Rows are ordered by `(m, n, case)`.
pub fn error_combination_table<T: Real>(noise: &NoiseConfig<T>) -> Result<Vec<CombinationRow<T>>> {
    let qed = PatternCache::new(Pipeline::Qed, &DataQubit::ALL, noise)?;
    let idle = PatternCache::new(Pipeline::Idle, &DataQubit::ALL, noise)?;
    let sets = subsets();
    // (m, n, case) -> (sum qed, sum idle, count)
    let mut acc: BTreeMap<RowKey, (T, T, usize)> = BTreeMap::new();
    for a in &sets {
        for b in &sets {
            let second = [ErrorPattern {
                flips: b.clone(),
                weight: T::one(),
            }];
            let mut f = [T::zero(); 2];
            for (slot, cache) in f.iter_mut().zip([&qed, &idle]) {
                for c in Cardinal::ALL {
                    *slot += f_logical_of(c, cache.pipeline, cache.flips(c, a)?, &second)?;
                }
                *slot /= T::lit(Cardinal::ALL.len() as f64);
            }
            let e =
                acc.entry((a.len(), b.len(), case_of(a, b)))
                    .or_insert((T::zero(), T::zero(), 0));
            e.0 += f[0];
            e.1 += f[1];
            e.2 += 1;
        }
    }
    let tol = T::lit(T::PHYS_TOL);
    Ok(acc
        .into_iter()
        .map(|((m, n, case), (q, i, count))| {
            let k = T::lit(count as f64);
            let (qed, idle) = (q / k, i / k);
            CombinationRow {
                first: m,
                second: n,
                case,
                assignments: count,
                qed,
                idle,
                class: Classification::of(qed, idle, tol),
            }
        })
        .collect())
}
