use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use super::{check_targets, kernel, log2_exact, GateMatrix, QcoreError, Result, ALGEBRA_TOL, C64};

/// Normalized pure state of `n` qubits.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
    qubits: usize,
}

impl StateVector {
    /// Wraps an amplitude vector, checking the length and the norm.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let qubits = log2_exact(amps.len()).ok_or(QcoreError::NotPowerOfTwo(amps.len()))?;
        let norm = norm_sqr(&amps);
        if (norm - 1.0).abs() > ALGEBRA_TOL {
            return Err(QcoreError::NotNormalized(norm));
        }
        Ok(StateVector { amps, qubits })
    }

    /// Renormalizes an arbitrary nonzero vector.
    pub fn normalized(mut amps: Vec<C64>) -> Result<Self> {
        let qubits = log2_exact(amps.len()).ok_or(QcoreError::NotPowerOfTwo(amps.len()))?;
        let norm = norm_sqr(&amps);
        if norm <= f64::MIN_POSITIVE {
            return Err(QcoreError::NotNormalized(norm));
        }
        let scale = 1.0 / norm.sqrt();
        amps.iter_mut().for_each(|a| *a *= scale);
        Ok(StateVector { amps, qubits })
    }

    pub(crate) fn from_raw(amps: Vec<C64>) -> Self {
        let qubits = log2_exact(amps.len()).expect("power-of-two length");
        debug_assert!((norm_sqr(&amps) - 1.0).abs() < 1e-9);
        StateVector { amps, qubits }
    }

    /// Computational basis state `|index⟩` on `qubits` qubits.
    pub fn basis(qubits: usize, index: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << qubits];
        amps[index] = C64::new(1.0, 0.0);
        StateVector { amps, qubits }
    }

    /// Builds a state from real amplitudes, e.g. `&[s, 0.0, 0.0, s]`.
    pub fn from_real(amps: &[f64]) -> Result<Self> {
        Self::new(amps.iter().map(|&a| C64::new(a, 0.0)).collect())
    }

    /// `|H⟩`
    pub fn h() -> Self {
        Self::basis(1, 0)
    }

    /// `|V⟩`
    pub fn v() -> Self {
        Self::basis(1, 1)
    }

    /// `(|H⟩ + |V⟩)/√2`
    pub fn plus() -> Self {
        Self::from_raw(vec![C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)])
    }

    /// `(|H⟩ − |V⟩)/√2`
    pub fn minus() -> Self {
        Self::from_raw(vec![C64::new(FRAC_1_SQRT_2, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0)])
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        norm_sqr(&self.amps)
    }

    /// `self ⊗ other`, with `self` occupying the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector {
            amps,
            qubits: self.qubits + other.qubits,
        }
    }

    /// Applies `gate` to `targets`, identity elsewhere.
    pub fn apply(&self, gate: &GateMatrix, targets: &[usize]) -> Result<StateVector> {
        check_targets(targets, self.qubits, gate.arity())?;
        let mut amps = self.amps.clone();
        kernel::apply_dense(&mut amps, self.qubits, gate.entries(), targets);
        Ok(StateVector {
            amps,
            qubits: self.qubits,
        })
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(QcoreError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Multiplies by the global phase `e^{iφ}`.
    pub fn with_phase(&self, phi: f64) -> StateVector {
        let p = C64::from_polar(1.0, phi);
        StateVector {
            amps: self.amps.iter().map(|a| a * p).collect(),
            qubits: self.qubits,
        }
    }

    /// Multiplies by an arbitrary scalar (sign flips, phases); the result is
    /// renormalized only if the caller passes a unit-modulus factor.
    pub fn scaled(&self, factor: C64) -> Result<StateVector> {
        StateVector::new(self.amps.iter().map(|a| a * factor).collect())
    }

    /// Amplitude-level equality, phase included.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .amps
                .iter()
                .zip(&other.amps)
                .all(|(a, b)| (a - b).norm() <= tol)
    }

    /// Largest amplitude deviation from `other`.
    pub fn max_deviation(&self, other: &StateVector) -> f64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StateVector[{}q](", self.qubits)?;
        let mut first = true;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm() < 1e-15 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(
                f,
                "({:.4}{:+.4}i)|{:0width$b}⟩",
                a.re,
                a.im,
                i,
                width = self.qubits
            )?;
        }
        write!(f, ")")
    }
}

pub(crate) fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// `a ⊗ b`
pub fn tensor_product(a: &StateVector, b: &StateVector) -> StateVector {
    a.tensor(b)
}

/// `|⟨a|b⟩|²`, clamped to `[0, 1]`.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    Ok(a.inner(b)?.norm_sqr().clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: f64 = FRAC_1_SQRT_2;

    fn reals(s: &StateVector) -> Vec<f64> {
        s.amplitudes().iter().map(|a| a.re).collect()
    }

    #[test]
    fn tensor_of_basis_states() {
        let hv = tensor_product(&StateVector::h(), &StateVector::v());
        assert_eq!(reals(&hv), vec![0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn tensor_with_superposition() {
        let s = tensor_product(&StateVector::h(), &StateVector::plus());
        assert!(s.approx_eq(&StateVector::from_real(&[S, S, 0.0, 0.0]).unwrap(), ALGEBRA_TOL));
    }

    #[test]
    fn tensor_distributes() {
        let s = tensor_product(&StateVector::plus(), &StateVector::minus());
        let expected = StateVector::from_real(&[0.5, -0.5, 0.5, -0.5]).unwrap();
        assert!(s.approx_eq(&expected, ALGEBRA_TOL));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            StateVector::from_real(&[1.0, 0.0, 0.0]),
            Err(QcoreError::NotPowerOfTwo(3))
        );
        assert!(matches!(
            StateVector::from_real(&[1.0, 1.0]),
            Err(QcoreError::NotNormalized(_))
        ));
    }

    #[test]
    fn fidelity_cases() {
        let s = StateVector::from_real(&[0.6, 0.8]).unwrap();
        assert!((fidelity(&s, &s).unwrap() - 1.0).abs() < ALGEBRA_TOL);
        assert!((fidelity(&s, &s.with_phase(1.234)).unwrap() - 1.0).abs() < ALGEBRA_TOL);
        assert_eq!(fidelity(&StateVector::h(), &StateVector::v()).unwrap(), 0.0);
        assert!(matches!(
            fidelity(&StateVector::h(), &StateVector::basis(2, 0)),
            Err(QcoreError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn apply_reports_bad_targets() {
        let s = StateVector::basis(2, 0);
        let x = GateMatrix::pauli_x();
        assert!(matches!(
            s.apply(&x, &[2]),
            Err(QcoreError::QubitOutOfRange { index: 2, qubits: 2 })
        ));
        assert!(matches!(
            s.apply(&x, &[0, 1]),
            Err(QcoreError::ArityMismatch { .. })
        ));
        assert!(matches!(
            s.apply(&GateMatrix::cnot(), &[1, 1]),
            Err(QcoreError::DuplicateTarget(1))
        ));
    }
}
