//! Eve's Bayesian inference over each round's `(k, i)`.
//!
//! For every hypothesis `(x0, k, i)` about a round, the quantum history is
//! replayed on unnormalized amplitudes with each of Eve's measurements and
//! Bob's announcement replaced by the projector onto what was actually
//! observed. The squared norm that survives is the likelihood. The twin's
//! history depends only on `x0`, and Alice's reading of it is private, so
//! the twin contributes a factor that is marginalized over her outcome.
//!
//! Noise on the second leg is not replayed; Eve does not know its
//! parameter, and on code states it only contributes a global phase.

use crate::dfs::{
    composite_unitary, decode_projector, extended_basis, logical_vector, LogicalLabel, MessageOp,
    NoiseCode,
};
use crate::qcore::Operator;

use super::couple::Branch;
use super::{AdversaryError, AttackKind, EveRecord, Evidence, Result, RoundEvidence};

fn replay(
    branch: &mut Branch,
    weight: &mut f64,
    evidence: Option<&Evidence>,
    attack: &AttackKind,
    code: NoiseCode,
    announced: LogicalLabel,
) -> Result<()> {
    match evidence {
        None => {}
        Some(Evidence::Coupled) => {
            branch.couple(attack)?;
        }
        Some(Evidence::Measured { outcome }) => {
            branch.apply_photons(&Operator::projector(&logical_vector(code, *outcome)));
        }
        Some(Evidence::Substituted {
            fake,
            original_outcome,
            original_registers,
        }) => {
            let mut original = std::mem::replace(
                branch,
                Branch::photons(logical_vector(code, *fake).into_amplitudes()),
            );
            let b = &extended_basis(code, announced.basis)[*original_outcome];
            original.apply_photons(&Operator::projector(b));
            project_registers(&mut original, original_registers)?;
            *weight *= original.norm_sqr();
        }
    }
    Ok(())
}

fn project_registers(branch: &mut Branch, values: &[usize]) -> Result<()> {
    if values.len() != branch.registers.len() {
        return Err(AdversaryError::RecordMismatch(format!(
            "{} register readings for {} registers",
            values.len(),
            branch.registers.len()
        )));
    }
    for (r, &v) in values.iter().enumerate() {
        branch.project_register(r, v);
    }
    Ok(())
}

fn message_likelihood(
    code: NoiseCode,
    attack: &AttackKind,
    ev: &RoundEvidence,
    x0: LogicalLabel,
    k: bool,
    i: bool,
) -> Result<f64> {
    // Bob measures in the preparation basis, so the announcement fixes it.
    if x0.basis != ev.announced.basis {
        return Ok(0.0);
    }
    let mut w = 1.0;
    let mut psi = Branch::photons(logical_vector(code, x0).into_amplitudes());
    replay(&mut psi, &mut w, ev.message_first.as_ref(), attack, code, ev.announced)?;
    psi.apply_gate(&composite_unitary(code, MessageOp::from_bit(k)));
    replay(&mut psi, &mut w, ev.message_second.as_ref(), attack, code, ev.announced)?;
    psi.apply_gate(&composite_unitary(code, MessageOp::from_bit(i)));
    psi.apply_photons(&decode_projector(code, ev.announced));
    project_registers(&mut psi, &ev.message_registers)?;
    Ok(w * psi.norm_sqr())
}

fn twin_likelihood(
    code: NoiseCode,
    attack: &AttackKind,
    ev: &RoundEvidence,
    x0: LogicalLabel,
) -> Result<f64> {
    let mut w = 1.0;
    let mut psi = Branch::photons(logical_vector(code, x0).into_amplitudes());
    replay(&mut psi, &mut w, ev.twin_first.as_ref(), attack, code, ev.announced)?;
    project_registers(&mut psi, &ev.twin_registers)?;
    Ok(w * psi.norm_sqr())
}

/// Joint likelihood table `L[x0][2k + i]` for one round, with `x0` indexed
/// as in [`LogicalLabel::ALL`].
pub fn round_likelihoods(
    code: NoiseCode,
    attack: &AttackKind,
    ev: &RoundEvidence,
) -> Result<[[f64; 4]; 4]> {
    let mut table = [[0.0; 4]; 4];
    for (xi, &x0) in LogicalLabel::ALL.iter().enumerate() {
        let twin = twin_likelihood(code, attack, ev, x0)?;
        if twin == 0.0 {
            continue;
        }
        for (ki, cell) in table[xi].iter_mut().enumerate() {
            *cell = twin * message_likelihood(code, attack, ev, x0, ki & 2 != 0, ki & 1 != 0)?;
        }
    }
    Ok(table)
}

fn normalize(mut p: [f64; 4]) -> [f64; 4] {
    let total: f64 = p.iter().sum();
    // A record with zero likelihood everywhere can only come from effects
    // the replay ignores; fall back to the prior.
    if total <= 0.0 || !total.is_finite() {
        return [0.25; 4];
    }
    p.iter_mut().for_each(|x| *x /= total);
    p
}

fn posterior_over(record: &EveRecord, allowed: impl Fn(usize, usize) -> bool) -> Result<Vec<[f64; 4]>> {
    record
        .rounds
        .iter()
        .enumerate()
        .map(|(n, ev)| {
            let table = round_likelihoods(record.code, &record.attack.kind, ev)?;
            let mut p = [0.0; 4];
            for (xi, row) in table.iter().enumerate() {
                if allowed(n, xi) {
                    for (acc, l) in p.iter_mut().zip(row) {
                        *acc += l;
                    }
                }
            }
            Ok(normalize(p))
        })
        .collect()
}

/// Posterior over `(k, i)` per round, indexed by `2k + i`, under uniform
/// priors on `x0`, `k` and `i`.
pub fn eve_posterior(record: &EveRecord) -> Result<Vec<[f64; 4]>> {
    posterior_over(record, |_, _| true)
}

/// As [`eve_posterior`], but with each round's initial label revealed.
pub fn eve_posterior_with_initial(
    record: &EveRecord,
    initial: &[LogicalLabel],
) -> Result<Vec<[f64; 4]>> {
    if initial.len() != record.rounds.len() {
        return Err(AdversaryError::RecordMismatch(format!(
            "{} initial labels for {} rounds",
            initial.len(),
            record.rounds.len()
        )));
    }
    posterior_over(record, |n, xi| LogicalLabel::ALL[xi] == initial[n])
}

/// Shannon entropy in bits.
pub fn posterior_entropy(p: &[f64; 4]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.log2()).sum()
}
