use rand::{Rng, RngCore};

use crate::channel::{carrier, Carrier, ChannelError, Interceptor, Leg, Register};
use crate::dfs::{self, LogicalBasis, LogicalLabel, NoiseCode, PHOTONS};
use crate::protocol::PublicRecord;
use crate::qcore::{measure_projective, measure_qubit, StateVector};

use super::couple::Branch;
use super::inference::eve_posterior;
use super::{AdversaryError, AttackKind, AttackModel, Result};

/// What Eve did to one transmitted slot.
#[derive(Debug, Clone, PartialEq)]
pub enum Action {
    Passed,
    /// Forwarded a fresh `fake`; the original is in Eve's hands.
    Substituted { fake: LogicalLabel, original: Carrier },
    /// Measured in a logical basis and forwarded the collapsed state.
    Measured { outcome: LogicalLabel },
    /// Appended probe register number `register` to the carrier.
    Coupled { register: usize },
}

/// Eve's classical knowledge about one slot once she has measured everything.
#[derive(Debug, Clone, PartialEq)]
pub enum Evidence {
    Substituted {
        fake: LogicalLabel,
        /// Index into the extended basis of the announced logical basis.
        original_outcome: usize,
        original_registers: Vec<usize>,
    },
    Measured {
        outcome: LogicalLabel,
    },
    Coupled,
}

/// Everything Eve knows about one dialogue round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundEvidence {
    pub announced: LogicalLabel,
    pub message_first: Option<Evidence>,
    pub message_second: Option<Evidence>,
    pub twin_first: Option<Evidence>,
    /// Computational-basis readings of the probe registers riding on the
    /// message carrier, in coupling order.
    pub message_registers: Vec<usize>,
    pub twin_registers: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EveRecord {
    pub code: NoiseCode,
    pub attack: AttackModel,
    pub rounds: Vec<RoundEvidence>,
    /// Per round, `P(k, i)` indexed by `2k + i`.
    pub posteriors: Vec<[f64; 4]>,
}

/// Stateful interceptor for one dialogue.
#[derive(Debug)]
pub struct Eavesdropper {
    attack: AttackModel,
    code: NoiseCode,
    first: Vec<Action>,
    second: Vec<Action>,
    forced_basis: Option<LogicalBasis>,
}

impl Eavesdropper {
    pub fn new(attack: AttackModel, code: NoiseCode) -> Result<Self> {
        attack.validate(code)?;
        Ok(Eavesdropper {
            attack,
            code,
            first: Vec::new(),
            second: Vec::new(),
            forced_basis: None,
        })
    }

    /// Makes measure-resend always use `basis`.
    pub fn force_basis(mut self, basis: LogicalBasis) -> Self {
        self.forced_basis = Some(basis);
        self
    }

    pub fn attack(&self) -> &AttackModel {
        &self.attack
    }

    pub fn log(&self, leg: Leg) -> &[Action] {
        match leg {
            Leg::First => &self.first,
            Leg::Second => &self.second,
        }
    }

    fn act(&self, leg: Leg, mut item: Carrier, rng: &mut dyn RngCore) -> Result<(Carrier, Action)> {
        match &self.attack.kind {
            AttackKind::None => Ok((item, Action::Passed)),
            AttackKind::InterceptResend => {
                let fake = LogicalLabel::random(rng);
                Ok((carrier(self.code, fake), Action::Substituted { fake, original: item }))
            }
            AttackKind::MeasureResend => {
                let basis = self.forced_basis.unwrap_or_else(|| {
                    if rng.gen() {
                        LogicalBasis::X
                    } else {
                        LogicalBasis::Z
                    }
                });
                let (outcome, post) =
                    dfs::logical_measure_photons(item.state(), self.code, basis, rng)?;
                item.set_state(post);
                Ok((item, Action::Measured { outcome }))
            }
            kind @ (AttackKind::EntangleMeasure(_) | AttackKind::CeAttack) => {
                let (code, state, mut registers) = item.into_parts();
                let start = state.num_qubits();
                let mut branch = Branch::new(state.into_amplitudes(), start, Vec::new());
                let len = branch.couple(kind)?;
                let register = registers.len();
                registers.push(Register { leg, start, len });
                let out = Carrier::from_parts(code, StateVector::normalized(branch.amps)?, registers);
                Ok((out, Action::Coupled { register }))
            }
        }
    }

    /// Measures everything Eve kept, after the public announcements, and
    /// forms her posterior for each round.
    ///
    /// `messages` are the carriers Bob measured in the final step and
    /// `twins` the ones Alice measured; Eve only reads her own registers on
    /// them.
    pub fn finalize(
        self,
        public: &PublicRecord,
        messages: &[Carrier],
        twins: &[Carrier],
        rng: &mut dyn RngCore,
    ) -> Result<EveRecord> {
        let n = public.announcements.len();
        if messages.len() != n || twins.len() != n {
            return Err(AdversaryError::RecordMismatch(format!(
                "{n} announcements for {} messages and {} twins",
                messages.len(),
                twins.len()
            )));
        }
        let first_slots = if self.first.is_empty() {
            None
        } else {
            Some(public.first_leg_rounds(self.first.len()).map_err(AdversaryError::RecordMismatch)?)
        };
        let second_slots = if self.second.is_empty() {
            None
        } else {
            Some(
                public
                    .second_leg_rounds(self.second.len())
                    .map_err(AdversaryError::RecordMismatch)?,
            )
        };

        let mut rounds = Vec::with_capacity(n);
        for round in 0..n {
            let announced = public.announcements[round];
            let evidence = |action: &Action, rng: &mut dyn RngCore| -> Result<Option<Evidence>> {
                self.read(action, announced.basis, rng)
            };
            let (message_first, twin_first) = match &first_slots {
                Some(slots) => {
                    let (m, t) = slots[round];
                    (evidence(&self.first[m], rng)?, evidence(&self.first[t], rng)?)
                }
                None => (None, None),
            };
            let message_second = match &second_slots {
                Some(slots) => evidence(&self.second[slots[round]], rng)?,
                None => None,
            };
            rounds.push(RoundEvidence {
                announced,
                message_first,
                message_second,
                twin_first,
                message_registers: read_registers(&messages[round], rng)?,
                twin_registers: read_registers(&twins[round], rng)?,
            });
        }
        let mut record = EveRecord {
            code: self.code,
            attack: self.attack,
            rounds,
            posteriors: Vec::new(),
        };
        record.posteriors = eve_posterior(&record)?;
        Ok(record)
    }

    fn read(
        &self,
        action: &Action,
        basis: LogicalBasis,
        rng: &mut dyn RngCore,
    ) -> Result<Option<Evidence>> {
        Ok(match action {
            Action::Passed => None,
            Action::Measured { outcome } => Some(Evidence::Measured { outcome: *outcome }),
            Action::Coupled { .. } => Some(Evidence::Coupled),
            Action::Substituted { fake, original } => {
                let (outcome, post) = measure_projective(
                    original.state(),
                    &dfs::extended_basis(self.code, basis),
                    &PHOTONS,
                    rng,
                )?;
                let post = Carrier::from_parts(self.code, post, original.registers().to_vec());
                Some(Evidence::Substituted {
                    fake: *fake,
                    original_outcome: outcome,
                    original_registers: read_registers(&post, rng)?,
                })
            }
        })
    }
}

/// Reads every register on `c` in the computational basis.
fn read_registers(c: &Carrier, rng: &mut dyn RngCore) -> Result<Vec<usize>> {
    let mut state = c.state().clone();
    let mut values = Vec::with_capacity(c.registers().len());
    for reg in c.registers() {
        let mut v = 0usize;
        for q in reg.start..reg.start + reg.len {
            let (bit, post) = measure_qubit(&state, q, rng)?;
            state = post;
            v = v << 1 | bit as usize;
        }
        values.push(v);
    }
    Ok(values)
}

impl Interceptor for Eavesdropper {
    fn intercept(
        &mut self,
        leg: Leg,
        items: Vec<Carrier>,
        rng: &mut dyn RngCore,
    ) -> std::result::Result<Vec<Carrier>, ChannelError> {
        let active = self.attack.attacks(leg);
        let mut delivered = Vec::with_capacity(items.len());
        let mut log = Vec::with_capacity(items.len());
        for item in items {
            let (out, action) = if active {
                self.act(leg, item, rng)
                    .map_err(|e| ChannelError::Interceptor(e.to_string()))?
            } else {
                (item, Action::Passed)
            };
            delivered.push(out);
            log.push(action);
        }
        if active {
            match leg {
                Leg::First => self.first = log,
                Leg::Second => self.second = log,
            }
        }
        Ok(delivered)
    }
}
