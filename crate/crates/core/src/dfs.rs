//! Decoherence-free logical qubits built from two photons.
//!
//! Two codes are provided. The dephasing code protects against a shared
//! phase on `|V⟩` by spanning the antiparallel states `|HV⟩, |VH⟩`. The
//! rotation code protects against a shared real rotation by spanning
//! `|φ⁺⟩, |ψ⁻⟩`. Each code has a `Z` basis (`|0⟩_L, |1⟩_L`) and an `X` basis
//! (`|±x⟩_L`), and a composite two-photon unitary that flips the bit inside
//! either basis.
//!
//! Decoding uses only single-photon `{|H⟩, |V⟩}` measurements, with a
//! Hadamard applied beforehand where the code needs it. [`logical_measure`]
//! does the ideal projective measurement and exists mainly as a reference.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qcore::{
    measure_projective, measure_qubit, GateMatrix, Operator, QcoreError, StateVector, BASIS_TOL,
};

/// Photon qubits of a carrier always sit at these indices.
pub const PHOTONS: [usize; 2] = [0, 1];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DfsError {
    #[error("state leaks out of the {code} subspace (weight {weight:.3e})")]
    OutOfSubspace { code: NoiseCode, weight: f64 },
    #[error("parallel photon outcome {outcome} cannot occur inside the dephasing code")]
    ParallelOutcome { outcome: RawOutcome },
    #[error("logical qubits are two-photon states, got {0} qubits")]
    WrongSize(usize),
    #[error(transparent)]
    Qcore(#[from] QcoreError),
}

pub type Result<T> = std::result::Result<T, DfsError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseCode {
    Dephasing,
    Rotation,
}

impl NoiseCode {
    pub const ALL: [NoiseCode; 2] = [NoiseCode::Dephasing, NoiseCode::Rotation];

    pub fn name(self) -> &'static str {
        match self {
            NoiseCode::Dephasing => "dephasing",
            NoiseCode::Rotation => "rotation",
        }
    }
}

impl fmt::Display for NoiseCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LogicalBasis {
    Z,
    X,
}

impl LogicalBasis {
    pub const ALL: [LogicalBasis; 2] = [LogicalBasis::Z, LogicalBasis::X];

    pub fn other(self) -> LogicalBasis {
        match self {
            LogicalBasis::Z => LogicalBasis::X,
            LogicalBasis::X => LogicalBasis::Z,
        }
    }
}

/// One of the four logical states: `Z0 = |0⟩_L`, `Z1 = |1⟩_L`,
/// `X0 = |+x⟩_L`, `X1 = |−x⟩_L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LogicalLabel {
    pub basis: LogicalBasis,
    pub bit: bool,
}

impl LogicalLabel {
    pub const Z0: LogicalLabel = LogicalLabel::new(LogicalBasis::Z, false);
    pub const Z1: LogicalLabel = LogicalLabel::new(LogicalBasis::Z, true);
    pub const X0: LogicalLabel = LogicalLabel::new(LogicalBasis::X, false);
    pub const X1: LogicalLabel = LogicalLabel::new(LogicalBasis::X, true);
    pub const ALL: [LogicalLabel; 4] = [Self::Z0, Self::Z1, Self::X0, Self::X1];

    pub const fn new(basis: LogicalBasis, bit: bool) -> Self {
        LogicalLabel { basis, bit }
    }

    /// Uniform over the four states.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::ALL[rng.gen_range(0..4)]
    }

    pub fn flipped(self) -> Self {
        LogicalLabel::new(self.basis, !self.bit)
    }

    /// Index into [`LogicalLabel::ALL`].
    pub fn index(self) -> usize {
        match self.basis {
            LogicalBasis::Z => self.bit as usize,
            LogicalBasis::X => 2 + self.bit as usize,
        }
    }
}

impl fmt::Display for LogicalLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.basis, self.bit as u8)
    }
}

impl FromStr for LogicalLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "Z0" => Ok(Self::Z0),
            "Z1" => Ok(Self::Z1),
            "X0" => Ok(Self::X0),
            "X1" => Ok(Self::X1),
            _ => Err(format!("unknown logical label {s:?}")),
        }
    }
}

/// Which composite unitary encodes a message bit: `Identity ↔ 0`, `Flip ↔ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MessageOp {
    Identity,
    Flip,
}

impl MessageOp {
    pub fn from_bit(bit: bool) -> Self {
        if bit {
            MessageOp::Flip
        } else {
            MessageOp::Identity
        }
    }

    pub fn bit(self) -> bool {
        self == MessageOp::Flip
    }
}

/// Raw result of measuring both photons in `{|H⟩, |V⟩}`; `true` is `|V⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RawOutcome {
    pub first: bool,
    pub second: bool,
}

impl RawOutcome {
    pub fn parallel(self) -> bool {
        self.first == self.second
    }

    /// Maps the photon pair to a logical label for the given code and basis.
    pub fn label(self, code: NoiseCode, basis: LogicalBasis) -> Result<LogicalLabel> {
        let bit = match (code, basis) {
            (NoiseCode::Dephasing, LogicalBasis::Z) => {
                if self.parallel() {
                    return Err(DfsError::ParallelOutcome { outcome: self });
                }
                // HV -> |0⟩_L, VH -> |1⟩_L
                self.first
            }
            // After the Hadamard step parallel means +x, antiparallel −x; for
            // the rotation Z basis parallel means φ⁺ = |0⟩_L.
            _ => !self.parallel(),
        };
        Ok(LogicalLabel::new(basis, bit))
    }

    fn index(self) -> usize {
        (self.first as usize) << 1 | self.second as usize
    }
}

impl fmt::Display for RawOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = |b: bool| if b { 'V' } else { 'H' };
        write!(f, "{}{}", p(self.first), p(self.second))
    }
}

fn ket(amps: [f64; 4]) -> StateVector {
    StateVector::from_real(&amps).expect("static logical ket is normalized")
}

/// Exact two-photon vector for `label` under `code`.
pub fn logical_vector(code: NoiseCode, label: LogicalLabel) -> StateVector {
    let s = FRAC_1_SQRT_2;
    use LogicalBasis::*;
    match (code, label.basis, label.bit) {
        // |HV⟩, |VH⟩, ψ⁺, ψ⁻
        (NoiseCode::Dephasing, Z, false) => ket([0.0, 1.0, 0.0, 0.0]),
        (NoiseCode::Dephasing, Z, true) => ket([0.0, 0.0, 1.0, 0.0]),
        (NoiseCode::Dephasing, X, false) => ket([0.0, s, s, 0.0]),
        (NoiseCode::Dephasing, X, true) => ket([0.0, s, -s, 0.0]),
        // φ⁺, ψ⁻, (φ⁺ + ψ⁻)/√2, (φ⁺ − ψ⁻)/√2
        (NoiseCode::Rotation, Z, false) => ket([s, 0.0, 0.0, s]),
        (NoiseCode::Rotation, Z, true) => ket([0.0, s, -s, 0.0]),
        (NoiseCode::Rotation, X, false) => ket([0.5, 0.5, -0.5, 0.5]),
        (NoiseCode::Rotation, X, true) => ket([0.5, -0.5, 0.5, 0.5]),
    }
}

/// Orthonormal basis of the two-photon space orthogonal to the code.
pub fn complement_basis(code: NoiseCode) -> [StateVector; 2] {
    let s = FRAC_1_SQRT_2;
    match code {
        NoiseCode::Dephasing => [ket([1.0, 0.0, 0.0, 0.0]), ket([0.0, 0.0, 0.0, 1.0])],
        // φ⁻, ψ⁺
        NoiseCode::Rotation => [ket([s, 0.0, 0.0, -s]), ket([0.0, s, s, 0.0])],
    }
}

/// Full four-element measurement basis: the two logical states of `basis`
/// followed by the complement.
pub fn extended_basis(code: NoiseCode, basis: LogicalBasis) -> Vec<StateVector> {
    let [c0, c1] = complement_basis(code);
    vec![
        logical_vector(code, LogicalLabel::new(basis, false)),
        logical_vector(code, LogicalLabel::new(basis, true)),
        c0,
        c1,
    ]
}

/// Probability weight of the photon pair outside the code subspace. Works on
/// joint states whose first two qubits are the photons.
pub fn leakage(code: NoiseCode, state: &StateVector) -> Result<f64> {
    let mut weight = 0.0;
    for c in complement_basis(code) {
        let mut amps = state.amplitudes().to_vec();
        crate::qcore::apply_dense(
            &mut amps,
            state.num_qubits(),
            Operator::projector(&c).entries(),
            &PHOTONS,
        );
        weight += amps.iter().map(|a| a.norm_sqr()).sum::<f64>();
    }
    Ok(weight)
}

/// A two-photon state inside one code's logical subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct LogicalQubitState {
    code: NoiseCode,
    state: StateVector,
}

impl LogicalQubitState {
    pub fn new(code: NoiseCode, state: StateVector) -> Result<Self> {
        if state.num_qubits() != 2 {
            return Err(DfsError::WrongSize(state.num_qubits()));
        }
        let weight = leakage(code, &state)?;
        if weight > BASIS_TOL {
            return Err(DfsError::OutOfSubspace { code, weight });
        }
        Ok(LogicalQubitState { code, state })
    }

    pub fn code(&self) -> NoiseCode {
        self.code
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }

    /// Applies a two-photon gate. Fails if the result leaves the code.
    pub fn apply(&self, gate: &GateMatrix) -> Result<Self> {
        Self::new(self.code, self.state.apply(gate, &PHOTONS)?)
    }
}

pub fn logical_state(code: NoiseCode, label: LogicalLabel) -> LogicalQubitState {
    LogicalQubitState {
        code,
        state: logical_vector(code, label),
    }
}

/// `U^0 = I ⊗ I`; dephasing `U^1 = (−iσy) ⊗ σx`; rotation `U^1 = I ⊗ (−iσy)`.
pub fn composite_unitary(code: NoiseCode, op: MessageOp) -> GateMatrix {
    match (op, code) {
        (MessageOp::Identity, _) => GateMatrix::identity(2),
        (MessageOp::Flip, NoiseCode::Dephasing) => {
            GateMatrix::minus_i_sigma_y().kron(&GateMatrix::pauli_x())
        }
        (MessageOp::Flip, NoiseCode::Rotation) => {
            GateMatrix::identity(1).kron(&GateMatrix::minus_i_sigma_y())
        }
    }
}

/// Ideal projective measurement in the code's logical basis.
pub fn logical_measure<R: Rng + ?Sized>(
    s: &LogicalQubitState,
    basis: LogicalBasis,
    rng: &mut R,
) -> Result<(LogicalLabel, LogicalQubitState)> {
    let (label, post) = logical_measure_photons(s.state(), s.code(), basis, rng)?;
    Ok((label, LogicalQubitState::new(s.code(), post)?))
}

/// Logical projective measurement of the photon pair of a joint state.
pub fn logical_measure_photons<R: Rng + ?Sized>(
    joint: &StateVector,
    code: NoiseCode,
    basis: LogicalBasis,
    rng: &mut R,
) -> Result<(LogicalLabel, StateVector)> {
    let weight = leakage(code, joint)?;
    if weight > BASIS_TOL {
        return Err(DfsError::OutOfSubspace { code, weight });
    }
    let (outcome, post) = measure_projective(joint, &extended_basis(code, basis), &PHOTONS, rng)?;
    match outcome {
        0 | 1 => Ok((LogicalLabel::new(basis, outcome == 1), post)),
        _ => Err(DfsError::OutOfSubspace { code, weight }),
    }
}

/// Single-qubit gates applied before reading the photons, per code and basis.
fn decoder_gates(code: NoiseCode, basis: LogicalBasis) -> &'static [usize] {
    match (code, basis) {
        (_, LogicalBasis::Z) => &[],
        (NoiseCode::Dephasing, LogicalBasis::X) => &[0, 1],
        (NoiseCode::Rotation, LogicalBasis::X) => &[1],
    }
}

/// Applies the decoder's Hadamards and reads both photons in `{|H⟩, |V⟩}`.
///
/// Returns the raw pair and the post-measurement joint state; any extra
/// qubits beyond the photons are left in their conditional state.
pub fn measure_photons<R: Rng + ?Sized>(
    joint: &StateVector,
    code: NoiseCode,
    basis: LogicalBasis,
    rng: &mut R,
) -> Result<(RawOutcome, StateVector)> {
    let h = GateMatrix::hadamard();
    let mut s = joint.clone();
    for &q in decoder_gates(code, basis) {
        s = s.apply(&h, &[q])?;
    }
    let (first, s) = measure_qubit(&s, PHOTONS[0], rng)?;
    let (second, s) = measure_qubit(&s, PHOTONS[1], rng)?;
    Ok((RawOutcome { first, second }, s))
}

/// Decodes the photon pair of a joint state through single-photon
/// measurements.
pub fn decode_photons<R: Rng + ?Sized>(
    joint: &StateVector,
    code: NoiseCode,
    basis: LogicalBasis,
    rng: &mut R,
) -> Result<(LogicalLabel, StateVector)> {
    let (raw, post) = measure_photons(joint, code, basis, rng)?;
    Ok((raw.label(code, basis)?, post))
}

pub fn decode_single_photon<R: Rng + ?Sized>(
    s: &LogicalQubitState,
    basis: LogicalBasis,
    rng: &mut R,
) -> Result<LogicalLabel> {
    decode_photons(s.state(), s.code(), basis, rng).map(|(label, _)| label)
}

/// Two-photon projector onto the raw outcomes that decode to `label`,
/// pulled back through the decoder's Hadamards.
pub fn decode_projector(code: NoiseCode, label: LogicalLabel) -> Operator {
    let mut raw = Operator::zeros(2);
    for idx in 0..4 {
        let outcome = RawOutcome {
            first: idx & 2 != 0,
            second: idx & 1 != 0,
        };
        if outcome.label(code, label.basis) == Ok(label) {
            raw = raw
                .add(&Operator::projector(&StateVector::basis(2, outcome.index())))
                .expect("same dimension");
        }
    }
    let mut pre = Operator::identity(2);
    let h = GateMatrix::hadamard();
    let id = GateMatrix::identity(1);
    let gates = decoder_gates(code, label.basis);
    if !gates.is_empty() {
        let a = if gates.contains(&0) { &h } else { &id };
        let b = if gates.contains(&1) { &h } else { &id };
        pre = a.kron(b).as_operator().clone();
    }
    // Hadamard products are real symmetric, so D† = D.
    pre.dagger()
        .matmul(&raw)
        .and_then(|m| m.matmul(&pre))
        .expect("4x4 operators")
}

/// Classical prediction of the measured label after `U^i U^k`.
pub fn encoded_label(initial: LogicalLabel, k: bool, i: bool) -> LogicalLabel {
    LogicalLabel::new(initial.basis, initial.bit ^ k ^ i)
}

/// Image of `label` under `U^1` in either code, as `(sign, image label)`:
/// `U|0⟩ = |1⟩, U|1⟩ = −|0⟩, U|+x⟩ = −|−x⟩, U|−x⟩ = |+x⟩`.
pub fn flip_relation(label: LogicalLabel) -> (f64, LogicalLabel) {
    let sign = match (label.basis, label.bit) {
        (LogicalBasis::Z, false) | (LogicalBasis::X, true) => 1.0,
        (LogicalBasis::Z, true) | (LogicalBasis::X, false) => -1.0,
    };
    (sign, label.flipped())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{fidelity, ALGEBRA_TOL, C64};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const S: f64 = FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    #[test]
    fn dephasing_vectors_match_definitions() {
        let hv = StateVector::h().tensor(&StateVector::v());
        assert!(logical_vector(NoiseCode::Dephasing, LogicalLabel::Z0).approx_eq(&hv, 0.0));
        let psi_plus = ket([0.0, S, S, 0.0]);
        assert!(logical_vector(NoiseCode::Dephasing, LogicalLabel::X0).approx_eq(&psi_plus, 0.0));
    }

    #[test]
    fn rotation_one_is_singlet() {
        let psi_minus = ket([0.0, S, -S, 0.0]);
        assert!(logical_vector(NoiseCode::Rotation, LogicalLabel::Z1).approx_eq(&psi_minus, 0.0));
    }

    #[test]
    fn rotation_x_states_are_balanced_superpositions() {
        let zero = logical_vector(NoiseCode::Rotation, LogicalLabel::Z0);
        let one = logical_vector(NoiseCode::Rotation, LogicalLabel::Z1);
        for (label, sign) in [(LogicalLabel::X0, 1.0), (LogicalLabel::X1, -1.0)] {
            let expect: Vec<C64> = zero
                .amplitudes()
                .iter()
                .zip(one.amplitudes())
                .map(|(a, b)| (a + b * sign) * S)
                .collect();
            let expect = StateVector::new(expect).unwrap();
            assert!(logical_vector(NoiseCode::Rotation, label).approx_eq(&expect, ALGEBRA_TOL));
        }
    }

    #[test]
    fn bases_are_orthonormal_and_mutually_unbiased() {
        for code in NoiseCode::ALL {
            for a in LogicalLabel::ALL {
                for b in LogicalLabel::ALL {
                    let f = fidelity(&logical_vector(code, a), &logical_vector(code, b)).unwrap();
                    let expected = if a == b {
                        1.0
                    } else if a.basis == b.basis {
                        0.0
                    } else {
                        0.5
                    };
                    assert!((f - expected).abs() < ALGEBRA_TOL, "{code} {a} {b}: {f}");
                }
            }
        }
    }

    #[test]
    fn dephasing_flip_examples() {
        let u = composite_unitary(NoiseCode::Dephasing, MessageOp::Flip);
        let zero = logical_state(NoiseCode::Dephasing, LogicalLabel::Z0);
        let one = logical_state(NoiseCode::Dephasing, LogicalLabel::Z1);
        assert!(zero.apply(&u).unwrap().state().approx_eq(one.state(), ALGEBRA_TOL));
        let minus_zero = zero.state().scaled(c(-1.0)).unwrap();
        assert!(one.apply(&u).unwrap().state().approx_eq(&minus_zero, ALGEBRA_TOL));
    }

    #[test]
    fn rotation_flip_example() {
        let u = composite_unitary(NoiseCode::Rotation, MessageOp::Flip);
        let minus_x = logical_state(NoiseCode::Rotation, LogicalLabel::X1);
        let plus_x = logical_state(NoiseCode::Rotation, LogicalLabel::X0);
        assert!(minus_x.apply(&u).unwrap().state().approx_eq(plus_x.state(), ALGEBRA_TOL));
    }

    #[test]
    fn flip_twice_is_minus_identity() {
        for code in NoiseCode::ALL {
            let u = composite_unitary(code, MessageOp::Flip);
            for label in LogicalLabel::ALL {
                let s = logical_vector(code, label);
                let twice = s.apply(&u, &PHOTONS).unwrap().apply(&u, &PHOTONS).unwrap();
                assert!(twice.approx_eq(&s.scaled(c(-1.0)).unwrap(), ALGEBRA_TOL));
            }
        }
    }

    #[test]
    fn flip_relation_matches_amplitudes() {
        for code in NoiseCode::ALL {
            let u = composite_unitary(code, MessageOp::Flip);
            for label in LogicalLabel::ALL {
                let (sign, image) = flip_relation(label);
                let got = logical_vector(code, label).apply(&u, &PHOTONS).unwrap();
                let want = logical_vector(code, image).scaled(c(sign)).unwrap();
                assert!(got.approx_eq(&want, ALGEBRA_TOL), "{code} {label}");
            }
        }
    }

    #[test]
    fn identity_op_is_identity() {
        for code in NoiseCode::ALL {
            assert_eq!(
                composite_unitary(code, MessageOp::Identity),
                GateMatrix::identity(2)
            );
        }
    }

    #[test]
    fn logical_measure_eigenstates() {
        let mut r = rng(5);
        let one = logical_state(NoiseCode::Dephasing, LogicalLabel::Z1);
        for _ in 0..20 {
            assert_eq!(logical_measure(&one, LogicalBasis::Z, &mut r).unwrap().0, LogicalLabel::Z1);
        }
        let plus = logical_state(NoiseCode::Rotation, LogicalLabel::X0);
        for _ in 0..20 {
            assert_eq!(logical_measure(&plus, LogicalBasis::X, &mut r).unwrap().0, LogicalLabel::X0);
        }
    }

    #[test]
    fn logical_measure_cross_basis_is_fair() {
        // |HV⟩ = (ψ⁺ + ψ⁻)/√2, so each X outcome has probability 1/2.
        let mut r = rng(9);
        let zero = logical_state(NoiseCode::Dephasing, LogicalLabel::Z0);
        let n = 10_000;
        let ones = (0..n)
            .filter(|_| logical_measure(&zero, LogicalBasis::X, &mut r).unwrap().0.bit)
            .count();
        let se = (0.25 / n as f64).sqrt();
        assert!((ones as f64 / n as f64 - 0.5).abs() < 3.0 * se);
    }

    #[test]
    fn hadamard_trick_dephasing_plus_x() {
        let plus = logical_vector(NoiseCode::Dephasing, LogicalLabel::X0);
        let h = GateMatrix::hadamard();
        let after = plus.apply(&h, &[0]).unwrap().apply(&h, &[1]).unwrap();
        let phi_minus = ket([S, 0.0, 0.0, -S]);
        assert!(after.approx_eq(&phi_minus, ALGEBRA_TOL));
        let mut r = rng(1);
        for _ in 0..20 {
            let label = decode_photons(&plus, NoiseCode::Dephasing, LogicalBasis::X, &mut r)
                .unwrap()
                .0;
            assert_eq!(label, LogicalLabel::X0);
        }
    }

    #[test]
    fn hadamard_trick_rotation_minus_x() {
        let minus = logical_vector(NoiseCode::Rotation, LogicalLabel::X1);
        let after = minus.apply(&GateMatrix::hadamard(), &[1]).unwrap();
        let psi_plus = ket([0.0, S, S, 0.0]);
        assert!(after.approx_eq(&psi_plus, ALGEBRA_TOL));
        let plus_after = logical_vector(NoiseCode::Rotation, LogicalLabel::X0)
            .apply(&GateMatrix::hadamard(), &[1])
            .unwrap();
        assert!(plus_after.approx_eq(&ket([S, 0.0, 0.0, -S]), ALGEBRA_TOL));
        let mut r = rng(2);
        let s = LogicalQubitState::new(NoiseCode::Rotation, minus).unwrap();
        for _ in 0..20 {
            assert_eq!(decode_single_photon(&s, LogicalBasis::X, &mut r).unwrap(), LogicalLabel::X1);
        }
    }

    #[test]
    fn rotation_zero_decodes_by_parity() {
        let mut r = rng(3);
        let s = logical_state(NoiseCode::Rotation, LogicalLabel::Z0);
        for _ in 0..20 {
            let (raw, _) = measure_photons(s.state(), NoiseCode::Rotation, LogicalBasis::Z, &mut r).unwrap();
            assert!(raw.parallel());
            assert_eq!(raw.label(NoiseCode::Rotation, LogicalBasis::Z).unwrap(), LogicalLabel::Z0);
        }
    }

    #[test]
    fn parallel_outcome_is_an_error_for_dephasing_z() {
        let hh = RawOutcome { first: false, second: false };
        assert!(matches!(
            hh.label(NoiseCode::Dephasing, LogicalBasis::Z),
            Err(DfsError::ParallelOutcome { .. })
        ));
        let mut r = rng(4);
        let bare = StateVector::basis(2, 0);
        assert!(decode_photons(&bare, NoiseCode::Dephasing, LogicalBasis::Z, &mut r).is_err());
    }

    #[test]
    fn out_of_subspace_states_are_rejected() {
        assert!(matches!(
            LogicalQubitState::new(NoiseCode::Dephasing, StateVector::basis(2, 0)),
            Err(DfsError::OutOfSubspace { .. })
        ));
        assert!(matches!(
            LogicalQubitState::new(NoiseCode::Rotation, StateVector::basis(2, 1)),
            Err(DfsError::OutOfSubspace { .. })
        ));
        assert!(matches!(
            LogicalQubitState::new(NoiseCode::Rotation, StateVector::h()),
            Err(DfsError::WrongSize(1))
        ));
    }

    #[test]
    fn encoded_label_examples() {
        assert_eq!(encoded_label(LogicalLabel::Z0, true, false), LogicalLabel::Z1);
        assert_eq!(encoded_label(LogicalLabel::X1, false, false), LogicalLabel::X1);
        assert_eq!(encoded_label(LogicalLabel::X0, true, true), LogicalLabel::X0);
    }

    #[test]
    fn decode_projectors_resolve_identity_on_code() {
        for code in NoiseCode::ALL {
            for basis in LogicalBasis::ALL {
                for label in LogicalLabel::ALL {
                    let v = logical_vector(code, label);
                    let p0 = decode_projector(code, LogicalLabel::new(basis, false));
                    let p1 = decode_projector(code, LogicalLabel::new(basis, true));
                    let mut a0 = v.amplitudes().to_vec();
                    crate::qcore::apply_dense(&mut a0, 2, p0.entries(), &PHOTONS);
                    let mut a1 = v.amplitudes().to_vec();
                    crate::qcore::apply_dense(&mut a1, 2, p1.entries(), &PHOTONS);
                    let w0: f64 = a0.iter().map(|a| a.norm_sqr()).sum();
                    let w1: f64 = a1.iter().map(|a| a.norm_sqr()).sum();
                    assert!((w0 + w1 - 1.0).abs() < ALGEBRA_TOL);
                    if label.basis == basis {
                        let expected = if label.bit { w1 } else { w0 };
                        assert!((expected - 1.0).abs() < ALGEBRA_TOL);
                    } else {
                        assert!((w0 - 0.5).abs() < ALGEBRA_TOL);
                    }
                }
            }
        }
    }

    #[test]
    fn label_round_trips_through_text() {
        for l in LogicalLabel::ALL {
            assert_eq!(l.to_string().parse::<LogicalLabel>().unwrap(), l);
        }
    }
}
