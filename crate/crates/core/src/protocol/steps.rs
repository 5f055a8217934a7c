use rand::seq::index;
use rand::{Rng, RngCore};

use crate::channel::{Carrier, Role, TransmissionBatch};
use crate::dfs::{
    composite_unitary, decode_photons, logical_state, DfsError, LogicalBasis, LogicalLabel,
    MessageOp,
};

use super::records::{AliceRecord, BobRecord, CheckReport, DecoyDisclosure};
use super::{ProtocolConfig, ProtocolError, Result};

/// Step 1: pairs of identical random logical qubits, with `δ1 + δ2` random
/// decoys inserted at uniformly random positions.
pub fn bob_prepare(config: &ProtocolConfig, rng: &mut dyn RngCore) -> (TransmissionBatch, BobRecord) {
    let len = config.first_len();
    let decoys = config.delta1 + config.delta2;
    // `sample` returns positions in random order, so splitting it gives a
    // random partition between the two checks.
    let picked = index::sample(rng, len, decoys).into_vec();
    let mut first_decoys = picked[..config.delta1].to_vec();
    let mut second_decoys = picked[config.delta1..].to_vec();
    first_decoys.sort_unstable();
    second_decoys.sort_unstable();

    let initial: Vec<LogicalLabel> = (0..config.n).map(|_| LogicalLabel::random(rng)).collect();
    let mut roles = Vec::with_capacity(len);
    let mut labels = Vec::with_capacity(len);
    let mut slot = 0;
    for p in 0..len {
        if let Ok(j) = first_decoys.binary_search(&p) {
            roles.push(Role::FirstDecoy(j));
            labels.push(LogicalLabel::random(rng));
        } else if let Ok(j) = second_decoys.binary_search(&p) {
            roles.push(Role::SecondDecoy(j));
            labels.push(LogicalLabel::random(rng));
        } else {
            let round = slot / 2;
            roles.push(if slot % 2 == 0 {
                Role::Message(round)
            } else {
                Role::Twin(round)
            });
            labels.push(initial[round]);
            slot += 1;
        }
    }
    let items = labels
        .iter()
        .map(|&l| Carrier::new(logical_state(config.code, l)))
        .collect();
    (
        TransmissionBatch::new(items, roles.clone()),
        BobRecord {
            labels,
            roles,
            first_decoys,
            second_decoys,
            initial,
        },
    )
}

/// Reads the photon pair in `basis`; `None` if the pair reads outside the code.
fn read(
    carrier: &Carrier,
    basis: LogicalBasis,
    rng: &mut dyn RngCore,
) -> Result<(Option<LogicalLabel>, Carrier)> {
    let (code, state, registers) = carrier.clone().into_parts();
    match decode_photons(&state, code, basis, rng) {
        Ok((label, post)) => Ok((Some(label), Carrier::from_parts(code, post, registers))),
        Err(DfsError::ParallelOutcome { .. }) => Ok((None, carrier.clone())),
        Err(e) => Err(e.into()),
    }
}

/// Step 2: Alice measures the disclosed first-check decoys in the
/// disclosed bases and Bob compares her reports with what he prepared.
///
/// Returns the report and Alice's per-decoy readings, which are public.
pub fn first_security_check(
    received: &TransmissionBatch,
    bob: &BobRecord,
    config: &ProtocolConfig,
    rng: &mut dyn RngCore,
) -> Result<(CheckReport, Vec<Option<LogicalLabel>>)> {
    if received.len() != bob.labels.len() {
        return Err(ProtocolError::LengthMismatch {
            what: "first-leg sequence",
            expected: bob.labels.len(),
            got: received.len(),
        });
    }
    let mut reports = Vec::with_capacity(bob.first_decoys.len());
    for (p, basis) in bob.disclose().first {
        reports.push(read(&received.items[p], basis, rng)?.0);
    }
    let verdicts = bob
        .first_decoys
        .iter()
        .zip(&reports)
        .map(|(&p, r)| (p, *r == Some(bob.labels[p])))
        .collect();
    Ok((
        CheckReport::from_verdicts(verdicts, config.abort_threshold),
        reports,
    ))
}

/// Step 3: Alice drops the first-check decoys, encodes `k_n` on each
/// round's first qubit, keeps the twin, encodes a random checking bit on
/// each second-check decoy and reinserts those at fresh random positions.
pub fn alice_encode(
    received: TransmissionBatch,
    disclosure: &DecoyDisclosure,
    k: &[bool],
    config: &ProtocolConfig,
    rng: &mut dyn RngCore,
) -> Result<(TransmissionBatch, AliceRecord)> {
    let expected = 2 * k.len() + disclosure.first.len() + disclosure.second.len();
    if received.len() != expected {
        return Err(ProtocolError::LengthMismatch {
            what: "sequence received by Alice",
            expected,
            got: received.len(),
        });
    }
    let code = config.code;
    let mut slots: Vec<Option<Carrier>> = received.items.into_iter().map(Some).collect();
    let mut decoys: Vec<Carrier> = disclosure
        .second
        .iter()
        .map(|&p| slots[p].take().expect("disclosed positions are distinct"))
        .collect();
    for &(p, _) in &disclosure.first {
        slots[p] = None;
    }
    let rest: Vec<Carrier> = slots.into_iter().flatten().collect();

    let mut messages = Vec::with_capacity(k.len());
    let mut twins = Vec::with_capacity(k.len());
    for (pair, &bit) in rest.chunks_exact(2).zip(k) {
        let mut m = pair[0].clone();
        m.apply_photons(&composite_unitary(code, MessageOp::from_bit(bit)))
            .map_err(DfsError::from)?;
        messages.push(m);
        twins.push(pair[1].clone());
    }

    let checking_bits: Vec<bool> = decoys.iter().map(|_| rng.gen()).collect();
    for (d, &c) in decoys.iter_mut().zip(&checking_bits) {
        d.apply_photons(&composite_unitary(code, MessageOp::from_bit(c)))
            .map_err(DfsError::from)?;
    }

    let len = messages.len() + decoys.len();
    let decoy_positions = index::sample(rng, len, decoys.len()).into_vec();
    let mut out: Vec<Option<(Carrier, Role)>> = (0..len).map(|_| None).collect();
    for (j, (d, &p)) in decoys.into_iter().zip(&decoy_positions).enumerate() {
        out[p] = Some((d, Role::SecondDecoy(j)));
    }
    let mut messages = messages.into_iter().enumerate();
    for slot in out.iter_mut().filter(|s| s.is_none()) {
        let (n, m) = messages.next().expect("one message per free slot");
        *slot = Some((m, Role::Message(n)));
    }
    let (items, roles) = out.into_iter().map(|s| s.expect("all slots filled")).unzip();
    Ok((
        TransmissionBatch::new(items, roles),
        AliceRecord {
            k: k.to_vec(),
            checking_bits,
            twins,
            decoy_positions,
        },
    ))
}

/// Result of Step 4.
#[derive(Debug, Clone, PartialEq)]
pub struct SecondCheck {
    pub report: CheckReport,
    /// Bob's decoded checking bits, `None` where his reading fell outside
    /// the code.
    pub decoded: Vec<Option<bool>>,
    /// Message qubits in round order, with the decoys removed.
    pub remaining: Vec<Carrier>,
}

/// Step 4: Bob measures each returned decoy in its preparation basis,
/// decodes `ĉ_j = measured ⊕ prepared`, and Alice compares with `c_j`.
pub fn second_security_check(
    received: TransmissionBatch,
    bob: &BobRecord,
    alice: &AliceRecord,
    config: &ProtocolConfig,
    rng: &mut dyn RngCore,
) -> Result<SecondCheck> {
    let expected = bob.initial.len() + bob.second_decoys.len();
    if received.len() != expected {
        return Err(ProtocolError::LengthMismatch {
            what: "sequence received by Bob",
            expected,
            got: received.len(),
        });
    }
    let mut decoded = Vec::with_capacity(alice.decoy_positions.len());
    for (j, &p) in alice.decoy_positions.iter().enumerate() {
        let prepared = bob.second_decoy_label(j);
        let (label, _) = read(&received.items[p], prepared.basis, rng)?;
        decoded.push(label.map(|l| l.bit ^ prepared.bit));
    }
    let verdicts = alice
        .decoy_positions
        .iter()
        .zip(decoded.iter().zip(&alice.checking_bits))
        .map(|(&p, (d, &c))| (p, *d == Some(c)))
        .collect();
    let remaining = received
        .items
        .into_iter()
        .enumerate()
        .filter(|(p, _)| !alice.decoy_positions.contains(p))
        .map(|(_, c)| c)
        .collect();
    Ok(SecondCheck {
        report: CheckReport::from_verdicts(verdicts, config.abort_threshold),
        decoded,
        remaining,
    })
}

/// Result of Step 5 on Bob's side.
#[derive(Debug, Clone, PartialEq)]
pub struct BobAnnouncement {
    pub announcements: Vec<LogicalLabel>,
    pub k_hat: Vec<bool>,
    /// Post-measurement carriers, in round order.
    pub measured: Vec<Carrier>,
}

/// Step 5, Bob: encode `i_n`, measure in the initial basis, announce the
/// label and decode `k̂_n = final ⊕ initial ⊕ i_n`.
pub fn bob_encode_measure_announce(
    messages: Vec<Carrier>,
    i: &[bool],
    bob: &BobRecord,
    rng: &mut dyn RngCore,
) -> Result<BobAnnouncement> {
    if messages.len() != bob.initial.len() || i.len() != bob.initial.len() {
        return Err(ProtocolError::LengthMismatch {
            what: "rounds at the final step",
            expected: bob.initial.len(),
            got: messages.len().min(i.len()),
        });
    }
    let mut out = BobAnnouncement {
        announcements: Vec::with_capacity(i.len()),
        k_hat: Vec::with_capacity(i.len()),
        measured: Vec::with_capacity(i.len()),
    };
    for (round, (mut m, &bit)) in messages.into_iter().zip(i).enumerate() {
        let initial = bob.initial[round];
        m.apply_photons(&composite_unitary(m.code(), MessageOp::from_bit(bit)))
            .map_err(DfsError::from)?;
        let (label, post) = read(&m, initial.basis, rng)?;
        let label = label.ok_or(ProtocolError::Tampered { step: 5, round })?;
        out.announcements.push(label);
        out.k_hat.push(label.bit ^ initial.bit ^ bit);
        out.measured.push(post);
    }
    Ok(out)
}

/// Step 5, Alice: read each twin in the announced basis to learn the
/// initial label, then `î_n = announced ⊕ initial ⊕ k_n`.
///
/// Returns the decoded bits and the post-measurement twins.
pub fn alice_decode(
    announcements: &[LogicalLabel],
    twins: Vec<Carrier>,
    k: &[bool],
    rng: &mut dyn RngCore,
) -> Result<(Vec<bool>, Vec<Carrier>)> {
    if twins.len() != announcements.len() || k.len() != announcements.len() {
        return Err(ProtocolError::LengthMismatch {
            what: "rounds Alice decodes",
            expected: announcements.len(),
            got: twins.len().min(k.len()),
        });
    }
    let mut bits = Vec::with_capacity(k.len());
    let mut measured = Vec::with_capacity(k.len());
    for (round, ((a, t), &bit)) in announcements.iter().zip(&twins).zip(k).enumerate() {
        let (initial, post) = read(t, a.basis, rng)?;
        let initial = initial.ok_or(ProtocolError::Tampered { step: 5, round })?;
        bits.push(a.bit ^ initial.bit ^ bit);
        measured.push(post);
    }
    Ok((bits, measured))
}
