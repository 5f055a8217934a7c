use std::fmt;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::adversary::{AttackModel, Eavesdropper, EveRecord};
use crate::channel::{transmit, Leg, NoiseLog};
use crate::dfs::LogicalLabel;

use super::records::{CheckOutcome, CheckReport, PublicRecord};
use super::steps::{
    alice_decode, alice_encode, bob_encode_measure_announce, bob_prepare, first_security_check,
    second_security_check,
};
use super::transcript::{Check, Event, Transcript};
use super::{ProtocolConfig, ProtocolError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbortReason {
    FirstCheck,
    SecondCheck,
    /// A final-step reading fell outside the code.
    Tampered { step: u8, round: usize },
}

impl fmt::Display for AbortReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AbortReason::FirstCheck => f.write_str("first check failed"),
            AbortReason::SecondCheck => f.write_str("second check failed"),
            AbortReason::Tampered { step, round } => {
                write!(f, "out-of-code reading at step {step} round {round}")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DialogueResult {
    pub transcript: Transcript,
    pub k_hat: Option<Vec<bool>>,
    pub i_hat: Option<Vec<bool>>,
    pub abort: Option<AbortReason>,
    pub first_check: Option<CheckOutcome>,
    pub second_check: Option<CheckOutcome>,
    pub public: PublicRecord,
    /// Eve's record; present whenever the dialogue completed.
    pub eve: Option<EveRecord>,
    /// Bob's initial label per round. Private; kept for analysis.
    pub initial: Vec<LogicalLabel>,
    /// Noise parameters applied on each leg.
    pub noise: [NoiseLog; 2],
}

impl DialogueResult {
    pub fn aborted(&self) -> bool {
        self.abort.is_some()
    }

    /// Both parties recovered the other's bits exactly.
    pub fn decoded_correctly(&self, k: &[bool], i: &[bool]) -> bool {
        self.k_hat.as_deref() == Some(k) && self.i_hat.as_deref() == Some(i)
    }
}

/// Runs the full dialogue with `attack` installed, deterministically from
/// `config.seed`.
pub fn run_dialogue(
    config: &ProtocolConfig,
    k: &[bool],
    i: &[bool],
    attack: &AttackModel,
) -> Result<DialogueResult> {
    run_dialogue_with(config, k, i, Eavesdropper::new(attack.clone(), config.code)?)
}

fn log_check(t: &mut Transcript, check: Check, report: &CheckReport) -> Result<()> {
    for (index, &(position, pass)) in report.verdicts.iter().enumerate() {
        t.push(Event::Decoy {
            check,
            index,
            position,
            pass,
        })?;
    }
    let o = report.outcome;
    t.push(Event::Check {
        check,
        tested: o.tested,
        errors: o.errors,
        rate: o.rate,
        threshold: o.threshold,
        abort: o.abort,
        vacuous: o.vacuous,
    })?;
    Ok(())
}

/// As [`run_dialogue`], with a preconfigured eavesdropper.
pub fn run_dialogue_with(
    config: &ProtocolConfig,
    k: &[bool],
    i: &[bool],
    mut eve: Eavesdropper,
) -> Result<DialogueResult> {
    config.validate()?;
    for (what, bits) in [("Alice's message", k), ("Bob's message", i)] {
        if bits.len() != config.n {
            return Err(ProtocolError::LengthMismatch {
                what,
                expected: config.n,
                got: bits.len(),
            });
        }
    }
    let mut seeded = ChaCha8Rng::seed_from_u64(config.seed);
    let rng: &mut dyn RngCore = &mut seeded;

    let (batch, bob) = bob_prepare(config, rng);
    let mut result = DialogueResult {
        transcript: Transcript::new(),
        k_hat: None,
        i_hat: None,
        abort: None,
        first_check: None,
        second_check: None,
        public: PublicRecord::default(),
        eve: None,
        initial: bob.initial.clone(),
        noise: [Vec::new(), Vec::new()],
    };
    let t = &mut result.transcript;

    let (received, log) = transmit(batch, &config.noise, Some(&mut eve), Leg::First, rng)?;
    result.noise[0] = log;
    t.push(Event::Transmission {
        leg: Leg::First,
        items: received.len(),
    })?;
    let disclosure = bob.disclose();
    result.public.first_decoys = disclosure.first.clone();
    let (report, reports) = first_security_check(&received, &bob, config, rng)?;
    result.public.first_reports = reports;
    log_check(t, Check::First, &report)?;
    result.first_check = Some(report.outcome);
    if report.outcome.abort {
        return abort(result, AbortReason::FirstCheck);
    }

    result.public.second_decoys_sent = disclosure.second.clone();
    let (returned, mut alice) = alice_encode(received, &disclosure, k, config, rng)?;
    result.public.second_decoys_returned = alice.decoy_positions.clone();
    let (back, log) = transmit(returned, &config.noise, Some(&mut eve), Leg::Second, rng)?;
    result.noise[1] = log;
    t.push(Event::Transmission {
        leg: Leg::Second,
        items: back.len(),
    })?;
    let second = second_security_check(back, &bob, &alice, config, rng)?;
    result.public.checking_reports = second.decoded.clone();
    log_check(t, Check::Second, &second.report)?;
    result.second_check = Some(second.report.outcome);
    if second.report.outcome.abort {
        return abort(result, AbortReason::SecondCheck);
    }

    let bob_side = match bob_encode_measure_announce(second.remaining, i, &bob, rng) {
        Ok(b) => b,
        Err(ProtocolError::Tampered { step, round }) => {
            return abort(result, AbortReason::Tampered { step, round })
        }
        Err(e) => return Err(e),
    };
    for (round, (&label, &bit)) in bob_side.announcements.iter().zip(&bob_side.k_hat).enumerate() {
        t.push(Event::Announcement { round, label })?;
        t.push(Event::DecodedK { round, bit })?;
    }
    result.public.announcements = bob_side.announcements.clone();
    result.k_hat = Some(bob_side.k_hat.clone());

    let twins = std::mem::take(&mut alice.twins);
    let (i_hat, twins) = match alice_decode(&bob_side.announcements, twins, k, rng) {
        Ok(x) => x,
        Err(ProtocolError::Tampered { step, round }) => {
            return abort(result, AbortReason::Tampered { step, round })
        }
        Err(e) => return Err(e),
    };
    for (round, &bit) in i_hat.iter().enumerate() {
        t.push(Event::DecodedI { round, bit })?;
    }
    result.i_hat = Some(i_hat);
    result.eve = Some(eve.finalize(&result.public, &bob_side.measured, &twins, rng)?);
    Ok(result)
}

fn abort(mut result: DialogueResult, reason: AbortReason) -> Result<DialogueResult> {
    result.transcript.push(Event::Abort {
        reason: reason.to_string(),
    })?;
    result.abort = Some(reason);
    Ok(result)
}
