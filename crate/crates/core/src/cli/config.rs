//! Run configuration document.
//!
//! ```json
//! {
//!   "protocol": { "code": "dephasing", "n": 100, "delta1": 16, "delta2": 16 },
//!   "noise":    { "enabled": true, "drift": "per_logical_qubit" },
//!   "check":    { "abort_threshold": 0.0 },
//!   "attack":   { "type": "none", "target": "first" },
//!   "sweep":    [ { "type": "intercept_resend", "trials": 10000 } ],
//!   "run":      { "trials": 1000, "seed": 7, "output": "report.json", "format": "doc" }
//! }
//! ```
//!
//! `attack.params` applies to `entangle_measure` only and selects a probe by
//! `preset`: `identity`, `orthogonal_ancilla`, `twisted` (with `a`, `b`, `t`)
//! or `explicit` (with `ancilla_dim`, `alpha`, `beta`, `e`, `e_dot`). Complex
//! numbers are `[re, im]` pairs.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::adversary::{AttackKind, AttackModel, EMParams, Target};
use crate::channel::{Drift, NoiseModel};
use crate::dfs::NoiseCode;
use crate::protocol::ProtocolConfig;
use crate::qcore::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub protocol: ProtocolSection,
    #[serde(default)]
    pub noise: NoiseSection,
    #[serde(default)]
    pub check: CheckSection,
    #[serde(default)]
    pub attack: AttackSpec,
    /// Rows of an attack sweep; empty means the default four attacks.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sweep: Vec<AttackSpec>,
    #[serde(default)]
    pub run: RunSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProtocolSection {
    pub code: NoiseCode,
    pub n: usize,
    #[serde(default)]
    pub delta1: usize,
    #[serde(default)]
    pub delta2: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    #[serde(default = "yes")]
    pub enabled: bool,
    #[serde(default)]
    pub drift: Drift,
}

fn yes() -> bool {
    true
}

impl Default for NoiseSection {
    fn default() -> Self {
        NoiseSection {
            enabled: true,
            drift: Drift::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckSection {
    #[serde(default)]
    pub abort_threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackType {
    #[default]
    None,
    InterceptResend,
    MeasureResend,
    EntangleMeasure,
    CeAttack,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackSpec {
    #[serde(rename = "type", default)]
    pub kind: AttackType,
    #[serde(default)]
    pub target: Target,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<EmParamsSpec>,
    /// Per-row trial count in a sweep; falls back to `run.trials`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
}

impl AttackSpec {
    pub fn new(kind: AttackType) -> Self {
        AttackSpec {
            kind,
            ..Default::default()
        }
    }

    pub fn with_params(mut self, p: EmParamsSpec) -> Self {
        self.params = Some(p);
        self
    }
}

type Pair = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "snake_case", deny_unknown_fields)]
pub enum EmParamsSpec {
    Identity,
    OrthogonalAncilla,
    Twisted {
        a: f64,
        b: f64,
        t: f64,
    },
    Explicit {
        ancilla_dim: usize,
        alpha: [Pair; 4],
        beta: [Pair; 4],
        e: [Vec<Pair>; 4],
        e_dot: [Vec<Pair>; 4],
    },
}

impl EmParamsSpec {
    pub fn build(&self) -> EMParams {
        let c = |p: &Pair| C64::new(p[0], p[1]);
        let kets = |v: &[Vec<Pair>; 4]| std::array::from_fn(|q| v[q].iter().map(c).collect());
        match self {
            EmParamsSpec::Identity => EMParams::identity(),
            EmParamsSpec::OrthogonalAncilla => EMParams::orthogonal_ancilla(),
            EmParamsSpec::Twisted { a, b, t } => EMParams::twisted(*a, *b, *t),
            EmParamsSpec::Explicit {
                ancilla_dim,
                alpha,
                beta,
                e,
                e_dot,
            } => EMParams {
                ancilla_dim: *ancilla_dim,
                alpha: alpha.each_ref().map(c),
                beta: beta.each_ref().map(c),
                e: kets(e),
                e_dot: kets(e_dot),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    /// JSON report document.
    #[default]
    Doc,
    /// Comma-separated table.
    Table,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

fn default_trials() -> usize {
    1000
}

impl Default for RunSection {
    fn default() -> Self {
        RunSection {
            trials: default_trials(),
            seed: 0,
            output: None,
            format: Format::Doc,
        }
    }
}

/// Attacks swept when the config lists none.
pub fn default_sweep() -> Vec<AttackSpec> {
    vec![
        AttackSpec::new(AttackType::InterceptResend),
        AttackSpec::new(AttackType::MeasureResend),
        AttackSpec::new(AttackType::EntangleMeasure).with_params(EmParamsSpec::OrthogonalAncilla),
        AttackSpec::new(AttackType::CeAttack),
    ]
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, Vec<String>> {
        serde_json::from_str(text).map_err(|e| vec![format!("config: {e}")])
    }

    pub fn protocol_config(&self) -> ProtocolConfig {
        let code = self.protocol.code;
        let mut noise = NoiseModel::new(code).with_drift(self.noise.drift);
        noise.enabled = self.noise.enabled;
        ProtocolConfig {
            n: self.protocol.n,
            delta1: self.protocol.delta1,
            delta2: self.protocol.delta2,
            code,
            noise,
            abort_threshold: self.check.abort_threshold,
            seed: self.run.seed,
        }
    }

    pub fn sweep_rows(&self) -> Vec<AttackSpec> {
        if self.sweep.is_empty() {
            default_sweep()
        } else {
            self.sweep.clone()
        }
    }

    /// Checks every field and reports all violations at once.
    pub fn validate(&self) -> Result<(), Vec<String>> {
        let mut problems = Vec::new();
        if self.protocol.n < 1 {
            problems.push("protocol.n: must be at least 1".to_string());
        }
        let t = self.check.abort_threshold;
        if !(0.0..=1.0).contains(&t) {
            problems.push(format!("check.abort_threshold: {t} is outside [0, 1]"));
        }
        if self.run.trials < 1 {
            problems.push("run.trials: must be at least 1".to_string());
        }
        if let Err(e) = self.attack_model(&self.attack) {
            problems.push(format!("attack: {e}"));
        }
        for (row, spec) in self.sweep.iter().enumerate() {
            if spec.trials == Some(0) {
                problems.push(format!("sweep[{row}].trials: must be at least 1"));
            }
            if let Err(e) = self.attack_model(spec) {
                problems.push(format!("sweep[{row}]: {e}"));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(problems)
        }
    }

    pub fn attack_model(&self, spec: &AttackSpec) -> Result<AttackModel, String> {
        let kind = match (spec.kind, &spec.params) {
            (AttackType::EntangleMeasure, p) => AttackKind::EntangleMeasure(
                p.as_ref().map_or_else(EMParams::identity, EmParamsSpec::build),
            ),
            (_, Some(_)) => return Err("params are only accepted for entangle_measure".into()),
            (AttackType::None, None) => AttackKind::None,
            (AttackType::InterceptResend, None) => AttackKind::InterceptResend,
            (AttackType::MeasureResend, None) => AttackKind::MeasureResend,
            (AttackType::CeAttack, None) => AttackKind::CeAttack,
        };
        let model = AttackModel::new(kind, spec.target);
        model
            .validate(self.protocol.code)
            .map_err(|e| e.to_string())?;
        Ok(model)
    }
}
