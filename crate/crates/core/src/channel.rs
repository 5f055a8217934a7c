//! Collective-noise quantum channel with an interception hook.
//!
//! A [`Carrier`] is what travels on the wire: one logical qubit's two photons
//! at qubits 0 and 1, followed by any registers an eavesdropper has coupled
//! to them. Keeping the joint vector lets entangling attacks and the later
//! measurements by the legitimate parties interact correctly.

use std::f64::consts::TAU;

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dfs::{self, LogicalQubitState, NoiseCode, PHOTONS};
use crate::qcore::{GateMatrix, QcoreError, StateVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("interceptor delivered {got} items for a batch of {expected}")]
    LengthChanged { expected: usize, got: usize },
    #[error("carrier code {carrier} does not match channel code {channel}")]
    CodeMismatch { carrier: NoiseCode, channel: NoiseCode },
    #[error("interceptor failed: {0}")]
    Interceptor(String),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

/// How often the collective noise parameter is redrawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Drift {
    /// One parameter for a whole transmitted batch.
    PerBlock,
    /// A fresh parameter for every logical qubit.
    #[default]
    PerLogicalQubit,
}

/// Collective noise with its parameter drawn uniformly from `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub code: NoiseCode,
    pub enabled: bool,
    #[serde(default)]
    pub drift: Drift,
}

impl NoiseModel {
    pub fn new(code: NoiseCode) -> Self {
        NoiseModel {
            code,
            enabled: true,
            drift: Drift::default(),
        }
    }

    pub fn disabled(code: NoiseCode) -> Self {
        NoiseModel {
            enabled: false,
            ..Self::new(code)
        }
    }

    pub fn with_drift(mut self, drift: Drift) -> Self {
        self.drift = drift;
        self
    }
}

/// Uniform draw in `[0, 2π)`.
pub fn sample_noise_parameter<R: Rng + ?Sized>(model: &NoiseModel, rng: &mut R) -> f64 {
    debug_assert!(model.enabled);
    rng.gen_range(0.0..TAU)
}

/// Per-photon parameters for one logical qubit. Both photons share the
/// parameter of their time window.
pub fn draw_photon_parameters<R: Rng + ?Sized>(model: &NoiseModel, rng: &mut R) -> [f64; 2] {
    let p = sample_noise_parameter(model, rng);
    [p, p]
}

/// Single-photon noise operator: `diag(1, e^{iφ})` for dephasing, the real
/// rotation by `θ` for rotation noise.
pub fn noise_gate(code: NoiseCode, parameter: f64) -> GateMatrix {
    match code {
        NoiseCode::Dephasing => GateMatrix::phase(parameter),
        NoiseCode::Rotation => GateMatrix::rotation(parameter),
    }
}

/// Applies the same noise operator to both photons (qubits 0 and 1).
pub fn apply_collective_noise(
    state: &StateVector,
    code: NoiseCode,
    parameter: f64,
) -> Result<StateVector, QcoreError> {
    apply_photon_noise(state, code, [parameter, parameter])
}

/// Applies possibly different parameters to the two photons.
pub fn apply_photon_noise(
    state: &StateVector,
    code: NoiseCode,
    parameters: [f64; 2],
) -> Result<StateVector, QcoreError> {
    let s = state.apply(&noise_gate(code, parameters[0]), &[PHOTONS[0]])?;
    s.apply(&noise_gate(code, parameters[1]), &[PHOTONS[1]])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Leg {
    /// Bob to Alice.
    First,
    /// Alice back to Bob.
    Second,
}

impl Leg {
    pub fn name(self) -> &'static str {
        match self {
            Leg::First => "first",
            Leg::Second => "second",
        }
    }
}

/// Qubit range of a register that an eavesdropper appended to a carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Register {
    pub leg: Leg,
    pub start: usize,
    pub len: usize,
}

/// A logical qubit in flight, possibly entangled with foreign registers.
#[derive(Debug, Clone, PartialEq)]
pub struct Carrier {
    code: NoiseCode,
    state: StateVector,
    registers: Vec<Register>,
}

impl Carrier {
    pub fn new(logical: LogicalQubitState) -> Self {
        Carrier {
            code: logical.code(),
            state: logical.into_state(),
            registers: Vec::new(),
        }
    }

    /// Carrier with an arbitrary joint state. The photons are qubits 0 and 1
    /// and `registers` must tile the remaining qubits in order.
    pub fn from_parts(code: NoiseCode, state: StateVector, registers: Vec<Register>) -> Self {
        debug_assert_eq!(
            2 + registers.iter().map(|r| r.len).sum::<usize>(),
            state.num_qubits()
        );
        Carrier {
            code,
            state,
            registers,
        }
    }

    pub fn code(&self) -> NoiseCode {
        self.code
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn registers(&self) -> &[Register] {
        &self.registers
    }

    pub fn into_parts(self) -> (NoiseCode, StateVector, Vec<Register>) {
        (self.code, self.state, self.registers)
    }

    /// The two-photon state, when nothing else is attached.
    pub fn logical(&self) -> Option<LogicalQubitState> {
        if self.registers.is_empty() {
            LogicalQubitState::new(self.code, self.state.clone()).ok()
        } else {
            None
        }
    }

    pub fn apply_photons(&mut self, gate: &GateMatrix) -> Result<(), QcoreError> {
        self.state = self.state.apply(gate, &PHOTONS)?;
        Ok(())
    }

    pub(crate) fn set_state(&mut self, state: StateVector) {
        debug_assert_eq!(state.num_qubits(), self.state.num_qubits());
        self.state = state;
    }
}

/// Position of an item within one transmitted sequence, as the sender sees it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    /// Logical qubit that carries round `n` of the dialogue.
    Message(usize),
    /// Twin of round `n`, kept by the receiver of the first leg.
    Twin(usize),
    /// `j`-th decoy of the first check.
    FirstDecoy(usize),
    /// `j`-th decoy of the second check.
    SecondDecoy(usize),
}

impl Role {
    pub fn is_decoy(self) -> bool {
        matches!(self, Role::FirstDecoy(_) | Role::SecondDecoy(_))
    }
}

/// Ordered carriers plus the sender's role bookkeeping. Only the carriers
/// are exposed to an interceptor.
#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionBatch {
    pub items: Vec<Carrier>,
    pub roles: Vec<Role>,
}

impl TransmissionBatch {
    pub fn new(items: Vec<Carrier>, roles: Vec<Role>) -> Self {
        assert_eq!(items.len(), roles.len(), "one role per item");
        TransmissionBatch { items, roles }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn position(&self, role: Role) -> Option<usize> {
        self.roles.iter().position(|&r| r == role)
    }
}

/// Hook that sees the noisy batch and decides what the receiver gets.
pub trait Interceptor {
    fn intercept(
        &mut self,
        leg: Leg,
        items: Vec<Carrier>,
        rng: &mut dyn RngCore,
    ) -> Result<Vec<Carrier>, ChannelError>;
}

/// Noise parameters applied in one transmission, per item, per photon.
/// Empty when noise is disabled.
pub type NoiseLog = Vec<[f64; 2]>;

/// Sends `batch` through the noisy channel, then through `interceptor`.
pub fn transmit(
    batch: TransmissionBatch,
    model: &NoiseModel,
    interceptor: Option<&mut dyn Interceptor>,
    leg: Leg,
    rng: &mut dyn RngCore,
) -> Result<(TransmissionBatch, NoiseLog), ChannelError> {
    let TransmissionBatch { mut items, roles } = batch;
    let mut log = Vec::new();
    if model.enabled {
        let block = draw_photon_parameters(model, rng);
        for item in &mut items {
            if item.code != model.code {
                return Err(ChannelError::CodeMismatch {
                    carrier: item.code,
                    channel: model.code,
                });
            }
            let params = match model.drift {
                Drift::PerBlock => block,
                Drift::PerLogicalQubit => draw_photon_parameters(model, rng),
            };
            item.state = apply_photon_noise(&item.state, model.code, params)?;
            log.push(params);
        }
    }
    let expected = items.len();
    let delivered = match interceptor {
        Some(eve) => eve.intercept(leg, items, rng)?,
        None => items,
    };
    if delivered.len() != expected {
        return Err(ChannelError::LengthChanged {
            expected,
            got: delivered.len(),
        });
    }
    Ok((TransmissionBatch::new(delivered, roles), log))
}

/// Convenience for tests and examples: a carrier holding a fresh logical state.
pub fn carrier(code: NoiseCode, label: dfs::LogicalLabel) -> Carrier {
    Carrier::new(dfs::logical_state(code, label))
}
