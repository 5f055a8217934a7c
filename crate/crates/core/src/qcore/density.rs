use nalgebra::DMatrix;

use super::{QcoreError, Result, StateVector, ALGEBRA_TOL, C64, EIGEN_FLOOR};

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity, trace and the eigenvalue floor.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        if !m.is_square() {
            return Err(QcoreError::InvalidDensity(format!(
                "{}x{} is not square",
                m.nrows(),
                m.ncols()
            )));
        }
        let herm = (&m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > ALGEBRA_TOL {
            return Err(QcoreError::InvalidDensity(format!(
                "not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > ALGEBRA_TOL {
            return Err(QcoreError::InvalidDensity(format!("trace {tr}")));
        }
        let out = DensityMatrix { m };
        let min = out.eigenvalues().into_iter().fold(f64::INFINITY, f64::min);
        if min < EIGEN_FLOOR {
            return Err(QcoreError::InvalidDensity(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(out)
    }

    /// `|ψ⟩⟨ψ|`
    pub fn from_pure(state: &StateVector) -> Self {
        let a = state.amplitudes();
        let d = a.len();
        DensityMatrix {
            m: DMatrix::from_fn(d, d, |r, c| a[r] * a[c].conj()),
        }
    }

    /// `I/d`
    pub fn maximally_mixed(dim: usize) -> Self {
        DensityMatrix {
            m: DMatrix::identity(dim, dim) / C64::new(dim as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.m[(row, col)]
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.m
    }

    /// Real eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.m)
    }

    pub fn purity(&self) -> f64 {
        (&self.m * &self.m).trace().re
    }

    pub fn approx_eq(&self, other: &DensityMatrix, tol: f64) -> bool {
        self.dim() == other.dim()
            && self.m.iter().zip(other.m.iter()).all(|(a, b)| (a - b).norm() <= tol)
    }
}

fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Vec<f64> {
    // Symmetrize against round-off before the Hermitian solver sees it.
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Reduced density matrix on `keep`, in the listed order.
pub fn partial_trace(state: &StateVector, keep: &[usize]) -> Result<DensityMatrix> {
    if keep.is_empty() {
        return Err(QcoreError::EmptyKeep);
    }
    let n = state.num_qubits();
    super::check_targets(keep, n, keep.len())?;
    let traced: Vec<usize> = (0..n).filter(|q| !keep.contains(q)).collect();

    let bit = |q: usize| 1usize << (n - 1 - q);
    let assemble = |qs: &[usize], value: usize| -> usize {
        qs.iter()
            .enumerate()
            .filter(|(j, _)| value & (1 << (qs.len() - 1 - j)) != 0)
            .fold(0, |acc, (_, &q)| acc | bit(q))
    };

    let dk = 1usize << keep.len();
    let de = 1usize << traced.len();
    let a = state.amplitudes();
    let kept_idx: Vec<usize> = (0..dk).map(|v| assemble(keep, v)).collect();
    let env_idx: Vec<usize> = (0..de).map(|v| assemble(&traced, v)).collect();

    let m = DMatrix::from_fn(dk, dk, |r, c| {
        env_idx
            .iter()
            .map(|&e| a[kept_idx[r] | e] * a[kept_idx[c] | e].conj())
            .sum()
    });
    Ok(DensityMatrix { m })
}

/// `½ Σ |λ_i(ρ − σ)|`
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(QcoreError::DimensionMismatch {
            left: rho.dim(),
            right: sigma.dim(),
        });
    }
    let diff = &rho.m - &sigma.m;
    let d: f64 = hermitian_eigenvalues(&diff).iter().map(|l| l.abs()).sum();
    Ok((0.5 * d).clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2 as S;

    #[test]
    fn product_state_marginal_is_pure() {
        let hv = StateVector::basis(2, 0b01);
        let rho = partial_trace(&hv, &[0]).unwrap();
        assert!(rho.approx_eq(&DensityMatrix::from_pure(&StateVector::h()), ALGEBRA_TOL));
        let rho1 = partial_trace(&hv, &[1]).unwrap();
        assert!(rho1.approx_eq(&DensityMatrix::from_pure(&StateVector::v()), ALGEBRA_TOL));
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let psi_plus = StateVector::from_real(&[0.0, S, S, 0.0]).unwrap();
        let rho = partial_trace(&psi_plus, &[0]).unwrap();
        assert!(rho.approx_eq(&DensityMatrix::maximally_mixed(2), ALGEBRA_TOL));
    }

    #[test]
    fn tracing_nothing_gives_projector() {
        let s = StateVector::from_real(&[0.0, S, -S, 0.0]).unwrap();
        let rho = partial_trace(&s, &[0, 1]).unwrap();
        assert!(rho.approx_eq(&DensityMatrix::from_pure(&s), ALGEBRA_TOL));
        assert!((rho.purity() - 1.0).abs() < ALGEBRA_TOL);
    }

    #[test]
    fn keep_order_permutes_subsystems() {
        let hv = StateVector::basis(2, 0b01);
        let swapped = partial_trace(&hv, &[1, 0]).unwrap();
        let vh = DensityMatrix::from_pure(&StateVector::basis(2, 0b10));
        assert!(swapped.approx_eq(&vh, ALGEBRA_TOL));
    }

    #[test]
    fn empty_keep_is_an_error() {
        assert_eq!(
            partial_trace(&StateVector::h(), &[]),
            Err(QcoreError::EmptyKeep)
        );
    }

    #[test]
    fn trace_distance_cases() {
        let h = DensityMatrix::from_pure(&StateVector::h());
        let v = DensityMatrix::from_pure(&StateVector::v());
        let mixed = DensityMatrix::maximally_mixed(2);
        assert!(trace_distance(&h, &h).unwrap().abs() < ALGEBRA_TOL);
        assert!((trace_distance(&h, &v).unwrap() - 1.0).abs() < ALGEBRA_TOL);
        // |H⟩⟨H| − I/2 = diag(1/2, −1/2): eigenvalues ±1/2, so D = 1/2.
        assert!((trace_distance(&h, &mixed).unwrap() - 0.5).abs() < ALGEBRA_TOL);
    }

    #[test]
    fn validation_rejects_non_density() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.5, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(-0.5, 0.0)],
        );
        assert!(matches!(DensityMatrix::new(m), Err(QcoreError::InvalidDensity(_))));
        let ok = DensityMatrix::new(DensityMatrix::maximally_mixed(4).matrix().clone());
        assert!(ok.is_ok());
    }
}
