use rand::RngCore;
use serde::Serialize;

use crate::adversary::{exhaustive_detection, AttackModel, Eavesdropper, Target};
use crate::channel::Leg;
use crate::dfs::NoiseCode;
use crate::protocol::{run_dialogue_with, ProtocolConfig};

use super::stats::{wilson_interval, Z95};
use super::{run_trials, AnalysisError, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectionEstimate {
    pub attack: String,
    pub target: Target,
    pub code: NoiseCode,
    pub trials: usize,
    pub detections: usize,
    /// Fraction of trials whose single decoy was reported wrong.
    pub estimate: f64,
    /// Half the width of the 95% Wilson interval.
    pub half_width: f64,
    pub lower: f64,
    pub upper: f64,
    /// Closed-form value from exhaustive enumeration, where the attack has one.
    pub exact: Option<f64>,
}

impl DetectionEstimate {
    pub fn contains(&self, p: f64) -> bool {
        self.lower <= p && p <= self.upper
    }
}

/// The check that sees the attack: the second one only when Eve sits on the
/// return leg alone.
pub fn detection_leg(target: Target) -> Leg {
    match target {
        Target::Second => Leg::Second,
        Target::First | Target::Both => Leg::First,
    }
}

/// Runs `trials` one-round dialogues, each with a single decoy in the check
/// that faces the attack, and counts how often that decoy fails.
///
/// Only `code`, `noise` and `abort_threshold` are taken from `config`; the
/// master seed is drawn from `rng`.
pub fn estimate_detection(
    attack: &AttackModel,
    config: &ProtocolConfig,
    trials: usize,
    rng: &mut dyn RngCore,
) -> Result<DetectionEstimate> {
    if trials == 0 {
        return Err(AnalysisError::NoTrials);
    }
    attack.validate(config.code)?;
    let leg = detection_leg(attack.target);
    let base = match leg {
        Leg::First => config.clone().with_decoys(1, 0),
        Leg::Second => config.clone().with_decoys(0, 1),
    };
    let base = ProtocolConfig { n: 1, ..base };
    let master = rng.next_u64();

    let failed = run_trials(trials, master, |seed| {
        let cfg = base.clone().with_seed(seed);
        let eve = Eavesdropper::new(attack.clone(), cfg.code)?;
        let r = run_dialogue_with(&cfg, &[false], &[false], eve)?;
        let check = match leg {
            Leg::First => r.first_check,
            Leg::Second => r.second_check,
        };
        Ok(check.map_or(0, |c| c.errors))
    })?;

    let detections: usize = failed.iter().sum();
    let (lower, upper) = wilson_interval(detections, trials, Z95);
    Ok(DetectionEstimate {
        attack: attack.kind.name().to_string(),
        target: attack.target,
        code: config.code,
        trials,
        detections,
        estimate: detections as f64 / trials as f64,
        half_width: (upper - lower) / 2.0,
        lower,
        upper,
        exact: exhaustive_detection(&attack.kind, config.code).ok(),
    })
}
