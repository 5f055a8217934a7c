//! The two-way dialogue over decoherence-free logical qubits.
//!
//! Bob prepares pairs of identical logical qubits plus decoys and sends
//! them to Alice; after a first decoy check Alice encodes her bits on the
//! first qubit of each pair, keeps the twin, adds her own checking bits on
//! the remaining decoys and sends everything back. After a second check Bob
//! encodes his bits, measures in the basis he prepared and announces the
//! result. Each party recovers the other's bits from the announcement, the
//! twin and their own bits.
//!
//! The same state machines run for both noise codes.

mod dialogue;
mod records;
mod steps;
mod transcript;

pub use dialogue::{run_dialogue, run_dialogue_with, AbortReason, DialogueResult};
pub use records::{AliceRecord, BobRecord, CheckOutcome, CheckReport, DecoyDisclosure, PublicRecord};
pub use steps::{
    alice_decode, alice_encode, bob_encode_measure_announce, bob_prepare, first_security_check,
    second_security_check, BobAnnouncement, SecondCheck,
};
pub use transcript::{Check, Event, Transcript, TranscriptError};

use thiserror::Error;

use crate::adversary::AdversaryError;
use crate::channel::{ChannelError, NoiseModel};
use crate::dfs::{DfsError, NoiseCode};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProtocolError {
    #[error("invalid configuration: {}", .0.join("; "))]
    InvalidConfig(Vec<String>),
    #[error("{what}: expected {expected}, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    /// A measurement outcome the honest protocol cannot produce, e.g. a
    /// parallel photon pair in the dephasing code.
    #[error("round {round} at step {step} gave an outcome outside the code")]
    Tampered { step: u8, round: usize },
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Dfs(#[from] DfsError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
    #[error(transparent)]
    Transcript(#[from] TranscriptError),
}

pub type Result<T> = std::result::Result<T, ProtocolError>;

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    /// Message bits per party.
    pub n: usize,
    /// Decoys for the first check.
    pub delta1: usize,
    /// Decoys for the second check.
    pub delta2: usize,
    pub code: NoiseCode,
    pub noise: NoiseModel,
    /// Largest tolerated decoy error rate.
    pub abort_threshold: f64,
    pub seed: u64,
}

impl ProtocolConfig {
    /// `n` rounds with noise on, no decoys and zero tolerance.
    pub fn new(code: NoiseCode, n: usize) -> Self {
        ProtocolConfig {
            n,
            delta1: 0,
            delta2: 0,
            code,
            noise: NoiseModel::new(code),
            abort_threshold: 0.0,
            seed: 0,
        }
    }

    pub fn with_decoys(mut self, delta1: usize, delta2: usize) -> Self {
        self.delta1 = delta1;
        self.delta2 = delta2;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_threshold(mut self, t: f64) -> Self {
        self.abort_threshold = t;
        self
    }

    pub fn with_noise(mut self, noise: NoiseModel) -> Self {
        self.noise = noise;
        self
    }

    /// Logical qubits Bob sends on the first leg.
    pub fn first_len(&self) -> usize {
        2 * self.n + self.delta1 + self.delta2
    }

    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.n < 1 {
            problems.push("n must be at least 1".to_string());
        }
        if !(0.0..=1.0).contains(&self.abort_threshold) {
            problems.push(format!(
                "abort_threshold {} is outside [0, 1]",
                self.abort_threshold
            ));
        }
        if self.noise.code != self.code {
            problems.push(format!(
                "noise code {} differs from protocol code {}",
                self.noise.code, self.code
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(ProtocolError::InvalidConfig(problems))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation_collects_all_problems() {
        let mut c = ProtocolConfig::new(NoiseCode::Dephasing, 0).with_threshold(1.5);
        c.noise = NoiseModel::new(NoiseCode::Rotation);
        match c.validate() {
            Err(ProtocolError::InvalidConfig(list)) => assert_eq!(list.len(), 3),
            other => panic!("{other:?}"),
        }
        assert!(ProtocolConfig::new(NoiseCode::Rotation, 1).validate().is_ok());
    }

    #[test]
    fn first_leg_length() {
        let c = ProtocolConfig::new(NoiseCode::Dephasing, 3).with_decoys(2, 2);
        assert_eq!(c.first_len(), 10);
    }
}
