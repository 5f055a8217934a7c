//! Closed-form quantities computed by enumerating every branch rather than
//! sampling: per-decoy detection and Eve's distinguishability.

use crate::dfs::{decode_projector, logical_vector, LogicalBasis, LogicalLabel, NoiseCode};
use crate::qcore::{partial_trace, trace_distance, DensityMatrix, Operator, StateVector};

use super::couple::Branch;
use super::{AdversaryError, AttackKind, Result};

/// `⟨ψ|P|ψ⟩` for a branch whose photons sit at qubits 0 and 1.
fn pass_weight(branch: &Branch, accept: &Operator) -> f64 {
    let mut b = branch.clone();
    b.apply_photons(accept);
    b.norm_sqr()
}

fn photons(code: NoiseCode, label: LogicalLabel) -> Branch {
    Branch::photons(logical_vector(code, label).into_amplitudes())
}

/// Probability that a decoy prepared in each of the four labels (in
/// [`LogicalLabel::ALL`] order) is reported wrong after one pass of the
/// attack on the first leg.
pub fn detection_profile(kind: &AttackKind, code: NoiseCode) -> Result<[f64; 4]> {
    let mut out = [0.0; 4];
    for (slot, &bob) in out.iter_mut().zip(LogicalLabel::ALL.iter()) {
        let accept = decode_projector(code, bob);
        let pass = match kind {
            AttackKind::None => 1.0,
            AttackKind::InterceptResend => {
                LogicalLabel::ALL
                    .iter()
                    .map(|&fake| pass_weight(&photons(code, fake), &accept))
                    .sum::<f64>()
                    / 4.0
            }
            AttackKind::MeasureResend => {
                let mut p = 0.0;
                for basis in LogicalBasis::ALL {
                    for bit in [false, true] {
                        let outcome = LogicalLabel::new(basis, bit);
                        let born = pass_weight(
                            &photons(code, bob),
                            &Operator::projector(&logical_vector(code, outcome)),
                        );
                        p += 0.5 * born * pass_weight(&photons(code, outcome), &accept);
                    }
                }
                p
            }
            probe @ (AttackKind::EntangleMeasure(_) | AttackKind::CeAttack) => {
                let mut b = photons(code, bob);
                b.couple(probe)?;
                pass_weight(&b, &accept)
            }
        };
        *slot = (1.0 - pass).max(0.0);
    }
    Ok(out)
}

/// Average per-decoy detection probability over a uniformly chosen decoy.
pub fn exhaustive_detection(kind: &AttackKind, code: NoiseCode) -> Result<f64> {
    Ok(detection_profile(kind, code)?.iter().sum::<f64>() / 4.0)
}

/// Reduced state of Eve's probe register after it has been coupled to a
/// logical qubit prepared in `label`.
pub fn ancilla_state(kind: &AttackKind, code: NoiseCode, label: LogicalLabel) -> Result<DensityMatrix> {
    if !matches!(kind, AttackKind::EntangleMeasure(_) | AttackKind::CeAttack) {
        return Err(AdversaryError::NoProbe(kind.name()));
    }
    let mut b = photons(code, label);
    b.couple(kind)?;
    let keep: Vec<usize> = (2..b.qubits).collect();
    if keep.is_empty() {
        return Ok(DensityMatrix::maximally_mixed(1));
    }
    let state = StateVector::normalized(b.amps)?;
    Ok(partial_trace(&state, &keep)?)
}

/// Largest trace distance between Eve's probe states over pairs of `labels`.
pub fn max_pairwise_trace_distance(
    kind: &AttackKind,
    code: NoiseCode,
    labels: &[LogicalLabel],
) -> Result<f64> {
    let states = labels
        .iter()
        .map(|&l| ancilla_state(kind, code, l))
        .collect::<Result<Vec<_>>>()?;
    let mut worst = 0.0f64;
    for (i, a) in states.iter().enumerate() {
        for b in &states[i + 1..] {
            worst = worst.max(trace_distance(a, b)?);
        }
    }
    Ok(worst)
}
