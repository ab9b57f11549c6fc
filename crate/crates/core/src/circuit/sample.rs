use std::collections::BTreeMap;

use rand::distributions::{Distribution, WeightedIndex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Branch;
use crate::error::{Error, Result};
use crate::scalar::{Real, Tolerances};

/// Shot counts per declared outcome tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub labels: Vec<String>,
    /// Every branch's outcome bits appear, including zero-count bins.
    pub counts: BTreeMap<Vec<u8>, u64>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn count(&self, bits: &[u8]) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }
}

/// Random stream for task `task` under the run seed `seed`.
///
/// Every task gets the ChaCha8 generator seeded with `seed` and switched to
/// stream number `task`, so streams are independent of scheduling order.
pub fn stream_rng(seed: u64, task: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(task);
    rng
}

/// Multinomial sample of `n_shots` records from exact branches.
pub fn sample_shots<T: Real>(branches: &[Branch<T>], n_shots: u64, seed: u64) -> Result<Histogram> {
    sample_shots_with(branches, n_shots, &mut stream_rng(seed, 0))
}

pub fn sample_shots_with<T: Real, R: Rng + ?Sized>(
    branches: &[Branch<T>],
    n_shots: u64,
    rng: &mut R,
) -> Result<Histogram> {
    let labels = branches
        .first()
        .map(|b| b.outcomes.labels())
        .unwrap_or_default();
    if n_shots == 0 {
        return Ok(Histogram {
            labels,
            counts: BTreeMap::new(),
        });
    }
    let total: T = branches.iter().map(|b| b.probability).sum();
    if !((total - T::one()).abs() <= Tolerances::<T>::default().physical) {
        return Err(Error::InvalidParameter(format!(
            "branch probabilities sum to {}, expected 1",
            total.to_f64_lossy()
        )));
    }
    let weights: Vec<f64> = branches
        .iter()
        .map(|b| b.probability.to_f64_lossy().max(0.0))
        .collect();
    let dist = WeightedIndex::new(&weights)
        .map_err(|e| Error::InvalidParameter(format!("branch weights: {e}")))?;
    let mut tally = vec![0u64; branches.len()];
    for _ in 0..n_shots {
        tally[dist.sample(rng)] += 1;
    }
    let mut counts = BTreeMap::new();
    for (b, n) in branches.iter().zip(tally) {
        *counts.entry(b.outcomes.bits()).or_insert(0) += n;
    }
    Ok(Histogram { labels, counts })
}
