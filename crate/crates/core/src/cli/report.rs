use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analysis::{DetectionEstimate, EfficiencyReport, LeakageReport};
use crate::protocol::CheckOutcome;

use super::config::RunConfig;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub run_id: String,
    pub seed: u64,
    pub config: RunConfig,
    pub results: Results,
    pub wall_clock_seconds: f64,
}

/// Everything computed from the config. Identical configs give identical
/// results.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dialogue: Option<DialogueSummary>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub detection: Vec<DetectionEstimate>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub leakage: Vec<LeakageReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub efficiency: Vec<EfficiencyReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DialogueSummary {
    pub completed: bool,
    pub abort: Option<String>,
    /// Bit strings, round 0 first.
    pub k: String,
    pub i: String,
    pub k_hat: Option<String>,
    pub i_hat: Option<String>,
    pub first_check: Option<CheckOutcome>,
    pub second_check: Option<CheckOutcome>,
    /// Mean entropy of Eve's per-round posterior, in bits.
    pub eve_entropy: Option<f64>,
    pub transcript: Vec<String>,
}

pub fn bit_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Short content hash of the command and effective config, in the style of
/// an abbreviated commit id. Where the report is written does not count.
pub fn run_id(command: &str, config: &RunConfig) -> String {
    let mut c = config.clone();
    c.run.output = None;
    let mut h = Sha256::new();
    h.update(command.as_bytes());
    h.update([0]);
    h.update(serde_json::to_vec(&c).expect("config serializes"));
    hex::encode(&h.finalize()[..6])
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The report as CSV: one row per round for a dialogue, one row per
    /// attack for a sweep.
    pub fn to_table(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(d) = &self.results.dialogue {
            w.write_record(["round", "k", "i", "k_hat", "i_hat"]).unwrap();
            let missing = || "-".repeat(d.k.len());
            let (kh, ih) = (
                d.k_hat.clone().unwrap_or_else(missing),
                d.i_hat.clone().unwrap_or_else(missing),
            );
            for (r, ((k, i), (a, b))) in d
                .k
                .chars()
                .zip(d.i.chars())
                .zip(kh.chars().zip(ih.chars()))
                .enumerate()
            {
                w.write_record([r.to_string(), k.into(), i.into(), a.into(), b.into()])
                    .unwrap();
            }
        } else {
            w.write_record([
                "attack",
                "target",
                "code",
                "trials",
                "detections",
                "estimate",
                "half_width",
                "lower",
                "upper",
                "exact",
                "leakage_bits",
                "leakage_std_error",
                "completed",
            ])
            .unwrap();
            for (d, l) in self.results.detection.iter().zip(&self.results.leakage) {
                let target = serde_json::to_value(d.target).unwrap();
                w.write_record([
                    d.attack.clone(),
                    target.as_str().unwrap_or_default().to_string(),
                    d.code.to_string(),
                    d.trials.to_string(),
                    d.detections.to_string(),
                    format!("{:?}", d.estimate),
                    format!("{:?}", d.half_width),
                    format!("{:?}", d.lower),
                    format!("{:?}", d.upper),
                    d.exact.map_or_else(String::new, |x| format!("{x:?}")),
                    format!("{:?}", l.entropy),
                    format!("{:?}", l.std_error),
                    l.completed.to_string(),
                ])
                .unwrap();
            }
        }
        String::from_utf8(w.into_inner().unwrap()).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_id_tracks_config() {
        let a = RunConfig::from_json(r#"{ "protocol": { "code": "dephasing", "n": 2 } }"#).unwrap();
        let mut b = a.clone();
        assert_eq!(run_id("simulate", &a), run_id("simulate", &b));
        assert_eq!(run_id("simulate", &a).len(), 12);
        b.run.output = Some("elsewhere.json".into());
        assert_eq!(run_id("simulate", &a), run_id("simulate", &b));
        b.run.seed = 1;
        assert_ne!(run_id("simulate", &a), run_id("simulate", &b));
        assert_ne!(run_id("simulate", &a), run_id("attack-sweep", &a));
    }

    #[test]
    fn bits_render_round_zero_first() {
        assert_eq!(bit_string(&[true, false, false]), "100");
    }
}
