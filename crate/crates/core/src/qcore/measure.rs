use rand::Rng;

use super::kernel::apply_dense;
use super::state::norm_sqr;
use super::{check_targets, Operator, QcoreError, Result, StateVector, BASIS_TOL};

/// Projective measurement of `targets` in an orthonormal `basis` of that
/// subsystem.
///
/// Returns the outcome index into `basis` and the renormalized post-state.
pub fn measure_projective<R: Rng + ?Sized>(
    state: &StateVector,
    basis: &[StateVector],
    targets: &[usize],
    rng: &mut R,
) -> Result<(usize, StateVector)> {
    let k = targets.len();
    check_targets(targets, state.num_qubits(), k)?;
    validate_basis(basis, k)?;

    let branches: Vec<(Vec<_>, f64)> = basis
        .iter()
        .map(|b| {
            let mut amps = state.amplitudes().to_vec();
            apply_dense(
                &mut amps,
                state.num_qubits(),
                Operator::projector(b).entries(),
                targets,
            );
            let p = norm_sqr(&amps);
            (amps, p)
        })
        .collect();

    let u: f64 = rng.gen();
    let total: f64 = branches.iter().map(|(_, p)| p).sum();
    let mut acc = 0.0;
    let mut chosen = None;
    for (i, (_, p)) in branches.iter().enumerate() {
        if *p <= 0.0 {
            continue;
        }
        acc += p / total;
        chosen = Some(i);
        if u < acc {
            break;
        }
    }
    let outcome = chosen.expect("a normalized state has a nonzero branch");
    let (amps, p) = branches.into_iter().nth(outcome).expect("outcome in range");
    let scale = 1.0 / p.sqrt();
    Ok((
        outcome,
        StateVector::from_raw(amps.into_iter().map(|a| a * scale).collect()),
    ))
}

/// Measures one qubit in `{|H⟩, |V⟩}`; `true` means `|V⟩`.
pub fn measure_qubit<R: Rng + ?Sized>(
    state: &StateVector,
    qubit: usize,
    rng: &mut R,
) -> Result<(bool, StateVector)> {
    let (outcome, post) =
        measure_projective(state, &[StateVector::h(), StateVector::v()], &[qubit], rng)?;
    Ok((outcome == 1, post))
}

fn validate_basis(basis: &[StateVector], k: usize) -> Result<()> {
    let expected = 1usize << k;
    if basis.len() != expected {
        return Err(QcoreError::IncompleteBasis {
            expected,
            got: basis.len(),
        });
    }
    let mut worst = 0.0f64;
    for (i, a) in basis.iter().enumerate() {
        if a.num_qubits() != k {
            return Err(QcoreError::DimensionMismatch {
                left: a.dim(),
                right: expected,
            });
        }
        for b in &basis[i..] {
            let g = a.inner(b)?;
            let target = if std::ptr::eq(a, b) { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    if worst > BASIS_TOL {
        return Err(QcoreError::NonOrthonormalBasis(worst));
    }
    Ok(())
}
