//! Eavesdropping strategies and what they let Eve infer.
//!
//! Four active attacks are modeled as [`Interceptor`](crate::channel::Interceptor)s
//! on either transmission:
//!
//! * intercept-resend: keep the original, forward a random code state;
//! * measure-resend: measure in a random logical basis, forward the result;
//! * entangle-measure: couple a probe register through a general isometry
//!   on the antiparallel subspace (dephasing code only);
//! * correlation-elicitation: two CNOTs onto a probe qubit (dephasing code only).
//!
//! After all public announcements Eve measures what she kept and forms a
//! posterior over each round's `(k, i)` by replaying every hypothesis
//! against her own records; see [`eve_posterior`].

mod couple;
mod eve;
mod exact;
mod inference;
mod params;

pub use eve::{Action, Eavesdropper, EveRecord, Evidence, RoundEvidence};
pub use exact::{ancilla_state, detection_profile, exhaustive_detection, max_pairwise_trace_distance};
pub use inference::{eve_posterior, eve_posterior_with_initial, posterior_entropy, round_likelihoods};
pub use params::EMParams;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::Leg;
use crate::dfs::{DfsError, NoiseCode};
use crate::qcore::QcoreError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AdversaryError {
    #[error("invalid entangle-measure parameters: {}", .0.join("; "))]
    InvalidParams(Vec<String>),
    #[error("photons leave the antiparallel subspace (weight {weight:.3e})")]
    OutsideDomain { weight: f64 },
    #[error("{attack} is only defined for the dephasing code")]
    Unsupported { attack: &'static str, code: NoiseCode },
    #[error("{0} keeps no probe register")]
    NoProbe(&'static str),
    #[error("entangle-measure on both legs needs parameters that keep photons antiparallel")]
    LeakyOnBothLegs,
    #[error("public record does not fit Eve's interception log: {0}")]
    RecordMismatch(String),
    #[error(transparent)]
    Dfs(#[from] DfsError),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

pub type Result<T> = std::result::Result<T, AdversaryError>;

#[derive(Debug, Clone, PartialEq)]
pub enum AttackKind {
    None,
    InterceptResend,
    MeasureResend,
    EntangleMeasure(EMParams),
    CeAttack,
}

impl AttackKind {
    pub fn name(&self) -> &'static str {
        match self {
            AttackKind::None => "none",
            AttackKind::InterceptResend => "intercept_resend",
            AttackKind::MeasureResend => "measure_resend",
            AttackKind::EntangleMeasure(_) => "entangle_measure",
            AttackKind::CeAttack => "ce_attack",
        }
    }
}

/// Which transmission Eve sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    #[default]
    First,
    Second,
    Both,
}

impl Target {
    pub fn covers(self, leg: Leg) -> bool {
        matches!(
            (self, leg),
            (Target::Both, _) | (Target::First, Leg::First) | (Target::Second, Leg::Second)
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AttackModel {
    pub kind: AttackKind,
    pub target: Target,
}

impl AttackModel {
    pub fn new(kind: AttackKind, target: Target) -> Self {
        AttackModel { kind, target }
    }

    pub fn none() -> Self {
        Self::new(AttackKind::None, Target::First)
    }

    /// Attack on the first transmission.
    pub fn first(kind: AttackKind) -> Self {
        Self::new(kind, Target::First)
    }

    pub fn is_passive(&self) -> bool {
        self.kind == AttackKind::None
    }

    pub fn attacks(&self, leg: Leg) -> bool {
        !self.is_passive() && self.target.covers(leg)
    }

    pub fn validate(&self, code: NoiseCode) -> Result<()> {
        match &self.kind {
            AttackKind::EntangleMeasure(p) => {
                if code != NoiseCode::Dephasing {
                    return Err(AdversaryError::Unsupported {
                        attack: self.kind.name(),
                        code,
                    });
                }
                p.validate()?;
                if self.target == Target::Both && p.leaks() {
                    return Err(AdversaryError::LeakyOnBothLegs);
                }
                Ok(())
            }
            AttackKind::CeAttack if code != NoiseCode::Dephasing => Err(AdversaryError::Unsupported {
                attack: self.kind.name(),
                code,
            }),
            _ => Ok(()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn targets_cover_legs() {
        assert!(Target::First.covers(Leg::First));
        assert!(!Target::First.covers(Leg::Second));
        assert!(Target::Both.covers(Leg::Second));
        assert!(!AttackModel::none().attacks(Leg::First));
    }

    #[test]
    fn rotation_code_rejects_probe_attacks() {
        let ce = AttackModel::first(AttackKind::CeAttack);
        assert!(ce.validate(NoiseCode::Dephasing).is_ok());
        assert!(matches!(
            ce.validate(NoiseCode::Rotation),
            Err(AdversaryError::Unsupported { .. })
        ));
        let em = AttackModel::first(AttackKind::EntangleMeasure(EMParams::identity()));
        assert!(em.validate(NoiseCode::Rotation).is_err());
        assert!(AttackModel::first(AttackKind::InterceptResend)
            .validate(NoiseCode::Rotation)
            .is_ok());
    }

    #[test]
    fn leaky_params_cannot_sit_on_both_legs() {
        let mut p = EMParams::identity();
        p.alpha = [
            crate::qcore::C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            crate::qcore::C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            crate::qcore::C64::new(0.0, 0.0),
            crate::qcore::C64::new(0.0, 0.0),
        ];
        p.e[0] = p.e[1].iter().rev().copied().collect();
        p.validate().unwrap();
        let both = AttackModel::new(AttackKind::EntangleMeasure(p.clone()), Target::Both);
        assert_eq!(both.validate(NoiseCode::Dephasing), Err(AdversaryError::LeakyOnBothLegs));
        let first = AttackModel::first(AttackKind::EntangleMeasure(p));
        assert!(first.validate(NoiseCode::Dephasing).is_ok());
    }
}
