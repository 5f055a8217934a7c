use std::collections::BTreeMap;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::adversary::{AttackModel, Eavesdropper};
use crate::dfs::{composite_unitary, logical_state, logical_vector, LogicalLabel, MessageOp, NoiseCode};
use crate::protocol::{run_dialogue_with, ProtocolConfig};
use crate::qcore::{fidelity, BASIS_TOL};

use super::stats::shannon_entropy;
use super::{run_trials, AnalysisError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeakageMode {
    Exhaustive,
    MonteCarlo,
}

/// Eve's posterior over `(k, i)`, indexed by `2k + i`, for one observation.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PosteriorRow {
    pub observation: String,
    pub probability: f64,
    pub posterior: [f64; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeakageReport {
    pub mode: LeakageMode,
    pub code: NoiseCode,
    pub attack: String,
    /// Conditional entropy of one round's `(k, i)` in bits. NaN when no
    /// Monte-Carlo trial completed.
    pub entropy: f64,
    /// Standard error of the mean; zero for exhaustive reports.
    pub std_error: f64,
    /// Rounds the entropy averages over.
    pub samples: usize,
    pub trials: usize,
    /// Trials that ran to the end without an abort.
    pub completed: usize,
    pub table: Vec<PosteriorRow>,
}

/// Label Bob measures after `U^i U^k` on `initial`, found by propagating the
/// state rather than by the XOR rule.
fn announcement(code: NoiseCode, initial: LogicalLabel, k: bool, i: bool) -> LogicalLabel {
    let gate = |b| composite_unitary(code, MessageOp::from_bit(b));
    let s = logical_state(code, initial)
        .apply(&gate(k))
        .and_then(|s| s.apply(&gate(i)))
        .expect("composite unitary acts on photon pairs");
    [false, true]
        .map(|bit| LogicalLabel::new(initial.basis, bit))
        .into_iter()
        .find(|&l| fidelity(&logical_vector(code, l), s.state()).unwrap() > 1.0 - BASIS_TOL)
        .expect("U maps code states onto code states in the same basis")
}

/// Exact `H(k, i | announcement)` over the 16 equiprobable
/// `(initial, k, i)` triples.
pub fn leakage_entropy_exhaustive(code: NoiseCode) -> LeakageReport {
    leakage_entropy_exhaustive_with(code, false)
}

/// As [`leakage_entropy_exhaustive`]; with `twin_public` Eve additionally
/// learns the initial label.
pub fn leakage_entropy_exhaustive_with(code: NoiseCode, twin_public: bool) -> LeakageReport {
    let mut groups: BTreeMap<(Option<usize>, usize), [u32; 4]> = BTreeMap::new();
    for x0 in LogicalLabel::ALL {
        for k in [false, true] {
            for i in [false, true] {
                let a = announcement(code, x0, k, i);
                let key = (twin_public.then_some(x0.index()), a.index());
                groups.entry(key).or_default()[2 * k as usize + i as usize] += 1;
            }
        }
    }
    let total: u32 = groups.values().flatten().sum();
    let mut entropy = 0.0;
    let table = groups
        .into_iter()
        .map(|((x0, a), counts)| {
            let n: u32 = counts.iter().sum();
            let posterior = counts.map(|c| c as f64 / n as f64);
            let probability = n as f64 / total as f64;
            entropy += probability * shannon_entropy(&posterior);
            let announced = LogicalLabel::ALL[a];
            let observation = match x0 {
                Some(x) => format!("twin={} announced={announced}", LogicalLabel::ALL[x]),
                None => format!("announced={announced}"),
            };
            PosteriorRow {
                observation,
                probability,
                posterior,
            }
        })
        .collect();
    LeakageReport {
        mode: LeakageMode::Exhaustive,
        code,
        attack: if twin_public { "twin_public" } else { "none" }.to_string(),
        entropy,
        std_error: 0.0,
        samples: total as usize,
        trials: 0,
        completed: 0,
        table,
    }
}

/// Mean entropy of Eve's per-round posteriors over `trials` dialogues with
/// uniformly random messages. Aborted dialogues are left out, so for
/// detectable attacks this describes the undetected runs only.
pub fn empirical_leakage(
    attack: &AttackModel,
    config: &ProtocolConfig,
    trials: usize,
    rng: &mut dyn RngCore,
) -> Result<LeakageReport> {
    if trials == 0 {
        return Err(AnalysisError::NoTrials);
    }
    attack.validate(config.code)?;
    config.validate()?;
    let master = rng.next_u64();
    let runs = run_trials(trials, master, |seed| {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let k: Vec<bool> = (0..config.n).map(|_| r.gen()).collect();
        let i: Vec<bool> = (0..config.n).map(|_| r.gen()).collect();
        let cfg = config.clone().with_seed(r.next_u64());
        let eve = Eavesdropper::new(attack.clone(), cfg.code)?;
        let out = run_dialogue_with(&cfg, &k, &i, eve)?;
        Ok(out.eve.map(|e| {
            e.rounds
                .iter()
                .map(|rd| rd.announced)
                .zip(e.posteriors)
                .collect::<Vec<_>>()
        }))
    })?;

    let completed: Vec<_> = runs.into_iter().flatten().flatten().collect();
    let m = completed.len();
    let entropies: Vec<f64> = completed.iter().map(|(_, p)| shannon_entropy(p)).collect();
    let mean = entropies.iter().sum::<f64>() / m as f64;
    let std_error = if m > 1 {
        let var = entropies.iter().map(|h| (h - mean).powi(2)).sum::<f64>() / (m - 1) as f64;
        (var / m as f64).sqrt()
    } else {
        0.0
    };

    let mut groups: BTreeMap<usize, (usize, [f64; 4])> = BTreeMap::new();
    for (a, p) in &completed {
        let g = groups.entry(a.index()).or_default();
        g.0 += 1;
        for (s, x) in g.1.iter_mut().zip(p) {
            *s += x;
        }
    }
    let table = groups
        .into_iter()
        .map(|(a, (n, sum))| PosteriorRow {
            observation: format!("announced={}", LogicalLabel::ALL[a]),
            probability: n as f64 / m as f64,
            posterior: sum.map(|s| s / n as f64),
        })
        .collect();

    Ok(LeakageReport {
        mode: LeakageMode::MonteCarlo,
        code: config.code,
        attack: attack.kind.name().to_string(),
        entropy: mean,
        std_error,
        samples: m,
        trials,
        completed: m / config.n,
        table,
    })
}
