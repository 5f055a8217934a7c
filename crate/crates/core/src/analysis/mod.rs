//! Evaluation of the dialogue: detection probabilities with confidence
//! intervals, Eve's residual uncertainty about `(k, i)`, and Cabello
//! efficiency.
//!
//! Monte-Carlo trials are independent dialogues seeded from one master seed
//! and a per-trial stream index, so results do not depend on how rayon
//! schedules them. `QDSIM_THREADS` caps the worker count (`0` or unset means
//! one per core).

mod detection;
mod efficiency;
mod leakage;
mod stats;

pub use detection::{detection_leg, estimate_detection, DetectionEstimate};
pub use efficiency::{cabello_efficiency, EfficiencyReport, ProtocolKind};
pub use leakage::{
    empirical_leakage, leakage_entropy_exhaustive, leakage_entropy_exhaustive_with, LeakageMode,
    LeakageReport, PosteriorRow,
};
pub use stats::{shannon_entropy, wilson_interval, Z95};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::protocol::ProtocolError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("trials must be at least 1")]
    NoTrials,
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

impl From<crate::adversary::AdversaryError> for AnalysisError {
    fn from(e: crate::adversary::AdversaryError) -> Self {
        AnalysisError::Protocol(e.into())
    }
}

pub type Result<T> = std::result::Result<T, AnalysisError>;

/// Worker cap from `QDSIM_THREADS`; `0` lets rayon pick.
pub fn worker_count() -> usize {
    std::env::var("QDSIM_THREADS")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(0)
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: usize) -> u64 {
    let mut r = ChaCha8Rng::seed_from_u64(master);
    r.set_stream(index as u64);
    r.next_u64()
}

/// Runs `f(trial_seed(master, t))` for every trial, in parallel, keeping
/// trial order in the output.
pub(crate) fn run_trials<T, F>(trials: usize, master: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count())
        .build()
        .expect("thread pool");
    pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| f(trial_seed(master, t)))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_seeds_are_distinct_and_stable() {
        let a: Vec<u64> = (0..64).map(|t| trial_seed(7, t)).collect();
        let mut b = a.clone();
        b.sort_unstable();
        b.dedup();
        assert_eq!(b.len(), 64);
        assert_eq!(a[3], trial_seed(7, 3));
        assert_ne!(trial_seed(7, 0), trial_seed(8, 0));
    }

    #[test]
    fn run_trials_keeps_order() {
        let out = run_trials(100, 1, Ok).unwrap();
        let expect: Vec<u64> = (0..100).map(|t| trial_seed(1, t)).collect();
        assert_eq!(out, expect);
    }
}
