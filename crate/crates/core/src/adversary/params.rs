use crate::qcore::{BASIS_TOL, C64};

use super::{AdversaryError, Result};

/// Coefficients of an entangle-measure probe.
///
/// On input `|HV⟩|E⟩` the probe produces `Σ_q alpha[q] |q⟩|e[q]⟩`, on
/// `|VH⟩|E⟩` it produces `Σ_q beta[q] |q⟩|e_dot[q]⟩`, with `q` running over
/// `HH, HV, VH, VV` in that order. Ancilla kets have `ancilla_dim` entries.
#[derive(Debug, Clone, PartialEq)]
pub struct EMParams {
    pub ancilla_dim: usize,
    pub alpha: [C64; 4],
    pub beta: [C64; 4],
    pub e: [Vec<C64>; 4],
    pub e_dot: [Vec<C64>; 4],
}

const HV: usize = 1;
const VH: usize = 2;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

fn ket(dim: usize, index: usize) -> Vec<C64> {
    let mut v = vec![zero(); dim];
    v[index] = one();
    v
}

fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

impl EMParams {
    pub const DEFAULT_ANCILLA_DIM: usize = 4;

    /// Probe that does nothing: both inputs pass untouched and the ancilla
    /// stays in one shared state.
    pub fn identity() -> Self {
        let d = Self::DEFAULT_ANCILLA_DIM;
        let mut alpha = [zero(); 4];
        let mut beta = [zero(); 4];
        alpha[HV] = one();
        beta[VH] = one();
        EMParams {
            ancilla_dim: d,
            alpha,
            beta,
            e: std::array::from_fn(|_| ket(d, 0)),
            e_dot: std::array::from_fn(|_| ket(d, 0)),
        }
    }

    /// Probe that tags `|HV⟩` and `|VH⟩` with orthogonal ancilla states.
    pub fn orthogonal_ancilla() -> Self {
        let mut p = Self::identity();
        p.e_dot[VH] = ket(p.ancilla_dim, 1);
        p
    }

    /// Non-leaking family: `|HV⟩ → e^{ia}|HV⟩|0⟩` and
    /// `|VH⟩ → e^{ib}|VH⟩ e^{i(a−b)}(cos t|0⟩ + sin t|1⟩)`.
    /// `t = 0` is undetectable and `t = π/2` is the orthogonal probe.
    pub fn twisted(a: f64, b: f64, t: f64) -> Self {
        let mut p = Self::identity();
        p.alpha[HV] = C64::from_polar(1.0, a);
        p.beta[VH] = C64::from_polar(1.0, b);
        let r = C64::from_polar(1.0, a - b);
        let mut v = vec![zero(); p.ancilla_dim];
        v[0] = r * t.cos();
        v[1] = r * t.sin();
        p.e_dot[VH] = v;
        p
    }

    /// Qubits needed to hold an ancilla of `ancilla_dim`.
    pub fn register_qubits(&self) -> usize {
        self.ancilla_dim.max(1).next_power_of_two().trailing_zeros() as usize
    }

    /// Whether either input can be pushed onto `|HH⟩` or `|VV⟩`.
    pub fn leaks(&self) -> bool {
        [0, 3]
            .iter()
            .any(|&q| self.alpha[q].norm_sqr() > BASIS_TOL || self.beta[q].norm_sqr() > BASIS_TOL)
    }

    /// Normalization of coefficients and ancilla kets, and orthogonality of
    /// the images of `|HV⟩` and `|VH⟩`.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if self.ancilla_dim == 0 {
            problems.push("ancilla_dim must be at least 1".to_string());
        }
        for (name, coeffs) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            let s: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
            if (s - 1.0).abs() > BASIS_TOL {
                problems.push(format!("sum of |{name}|^2 is {s}"));
            }
        }
        for (name, kets) in [("e", &self.e), ("e_dot", &self.e_dot)] {
            for (q, v) in kets.iter().enumerate() {
                if v.len() != self.ancilla_dim {
                    problems.push(format!(
                        "{name}[{q}] has {} entries, expected {}",
                        v.len(),
                        self.ancilla_dim
                    ));
                    continue;
                }
                let n: f64 = v.iter().map(|c| c.norm_sqr()).sum();
                if (n - 1.0).abs() > BASIS_TOL {
                    problems.push(format!("{name}[{q}] has norm^2 {n}"));
                }
            }
        }
        if problems.is_empty() {
            let overlap: C64 = (0..4)
                .map(|q| self.alpha[q].conj() * self.beta[q] * inner(&self.e[q], &self.e_dot[q]))
                .sum();
            if overlap.norm() > BASIS_TOL {
                problems.push(format!(
                    "images of HV and VH overlap by {:.3e}",
                    overlap.norm()
                ));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(AdversaryError::InvalidParams(problems))
        }
    }

    /// Ancilla ket padded to the register's full dimension.
    pub(crate) fn padded(&self, v: &[C64]) -> Vec<C64> {
        let mut out = v.to_vec();
        out.resize(1 << self.register_qubits(), zero());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        EMParams::identity().validate().unwrap();
        EMParams::orthogonal_ancilla().validate().unwrap();
        EMParams::twisted(0.3, 1.1, 0.7).validate().unwrap();
        assert!(!EMParams::orthogonal_ancilla().leaks());
    }

    #[test]
    fn register_size_rounds_up() {
        let mut p = EMParams::identity();
        assert_eq!(p.register_qubits(), 2);
        p.ancilla_dim = 3;
        assert_eq!(p.register_qubits(), 2);
        p.ancilla_dim = 1;
        assert_eq!(p.register_qubits(), 0);
        p.ancilla_dim = 5;
        assert_eq!(p.register_qubits(), 3);
    }

    #[test]
    fn validation_lists_every_problem() {
        let mut p = EMParams::identity();
        p.alpha[0] = one();
        p.e_dot[2] = vec![one(); 2];
        match p.validate() {
            Err(AdversaryError::InvalidParams(list)) => assert_eq!(list.len(), 2, "{list:?}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn overlapping_images_are_rejected() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut p = EMParams::identity();
        // Both inputs partly map to |HV⟩ with the same ancilla.
        p.beta = [zero(), C64::new(s, 0.0), C64::new(s, 0.0), zero()];
        assert!(matches!(p.validate(), Err(AdversaryError::InvalidParams(_))));
    }
}
