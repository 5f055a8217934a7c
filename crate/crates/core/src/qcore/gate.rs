use std::f64::consts::FRAC_1_SQRT_2;
use std::ops::Neg;

use super::{log2_exact, QcoreError, Result, StateVector, ALGEBRA_TOL, C64};

/// Dense square complex matrix on `k` qubits with no structural constraint.
///
/// Used for projectors and other non-unitary operators; see [`GateMatrix`]
/// for the unitary wrapper.
#[derive(Debug, Clone, PartialEq)]
pub struct Operator {
    entries: Vec<C64>,
    dim: usize,
    arity: usize,
}

impl Operator {
    /// Row-major entries of a `2^k × 2^k` matrix.
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        let n = entries.len();
        let dim = (n as f64).sqrt().round() as usize;
        if dim * dim != n {
            return Err(QcoreError::BadMatrixShape(n));
        }
        let arity = log2_exact(dim).ok_or(QcoreError::BadMatrixShape(n))?;
        Ok(Operator {
            entries,
            dim,
            arity,
        })
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn identity(arity: usize) -> Self {
        let dim = 1 << arity;
        let mut entries = vec![C64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = C64::new(1.0, 0.0);
        }
        Operator {
            entries,
            dim,
            arity,
        }
    }

    pub fn zeros(arity: usize) -> Self {
        let dim = 1 << arity;
        Operator {
            entries: vec![C64::new(0.0, 0.0); dim * dim],
            dim,
            arity,
        }
    }

    /// `|ket⟩⟨ket|`
    pub fn projector(ket: &StateVector) -> Self {
        let a = ket.amplitudes();
        let dim = a.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for r in a {
            for c in a {
                entries.push(r * c.conj());
            }
        }
        Operator {
            entries,
            dim,
            arity: ket.num_qubits(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[row * self.dim + col]
    }

    pub fn dagger(&self) -> Operator {
        let d = self.dim;
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for c in 0..d {
                entries[c * d + r] = self.entries[r * d + c].conj();
            }
        }
        Operator {
            entries,
            dim: d,
            arity: self.arity,
        }
    }

    /// `self · rhs`
    pub fn matmul(&self, rhs: &Operator) -> Result<Operator> {
        if self.dim != rhs.dim {
            return Err(QcoreError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let d = self.dim;
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for c in 0..d {
                    entries[r * d + c] += a * rhs.entries[k * d + c];
                }
            }
        }
        Ok(Operator {
            entries,
            dim: d,
            arity: self.arity,
        })
    }

    /// Kronecker product, `self` on the leading qubits.
    pub fn kron(&self, rhs: &Operator) -> Operator {
        let (da, db) = (self.dim, rhs.dim);
        let d = da * db;
        let mut entries = vec![C64::new(0.0, 0.0); d * d];
        for ar in 0..da {
            for ac in 0..da {
                let a = self.entries[ar * da + ac];
                for br in 0..db {
                    for bc in 0..db {
                        entries[(ar * db + br) * d + ac * db + bc] = a * rhs.entries[br * db + bc];
                    }
                }
            }
        }
        Operator {
            entries,
            dim: d,
            arity: self.arity + rhs.arity,
        }
    }

    pub fn add(&self, rhs: &Operator) -> Result<Operator> {
        if self.dim != rhs.dim {
            return Err(QcoreError::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        Ok(Operator {
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| a + b)
                .collect(),
            dim: self.dim,
            arity: self.arity,
        })
    }

    pub fn scale(&self, factor: C64) -> Operator {
        Operator {
            entries: self.entries.iter().map(|a| a * factor).collect(),
            dim: self.dim,
            arity: self.arity,
        }
    }

    /// Max entry deviation of `self† self` from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let prod = self
            .dagger()
            .matmul(self)
            .expect("dagger has the same dimension");
        let id = Operator::identity(self.arity);
        prod.entries
            .iter()
            .zip(&id.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn approx_eq(&self, other: &Operator, tol: f64) -> bool {
        self.dim == other.dim
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|(a, b)| (a - b).norm() <= tol)
    }
}

/// Unitary matrix acting on `k` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix(Operator);

impl GateMatrix {
    /// Validates unitarity within [`ALGEBRA_TOL`].
    pub fn new(op: Operator) -> Result<Self> {
        let defect = op.unitarity_defect();
        if defect > ALGEBRA_TOL {
            return Err(QcoreError::NotUnitary(defect));
        }
        Ok(GateMatrix(op))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(Operator::from_real(entries)?)
    }

    fn real_unchecked(entries: &[f64]) -> Self {
        GateMatrix(Operator::from_real(entries).expect("static gate shape"))
    }

    pub fn identity(arity: usize) -> Self {
        GateMatrix(Operator::identity(arity))
    }

    /// `σx = |V⟩⟨H| + |H⟩⟨V|`
    pub fn pauli_x() -> Self {
        Self::real_unchecked(&[0.0, 1.0, 1.0, 0.0])
    }

    /// `−iσy = |V⟩⟨H| − |H⟩⟨V|`
    pub fn minus_i_sigma_y() -> Self {
        Self::real_unchecked(&[0.0, -1.0, 1.0, 0.0])
    }

    pub fn hadamard() -> Self {
        let s = FRAC_1_SQRT_2;
        Self::real_unchecked(&[s, s, s, -s])
    }

    /// `|00⟩⟨00| + |01⟩⟨01| + |11⟩⟨10| + |10⟩⟨11|`, control first.
    pub fn cnot() -> Self {
        #[rustfmt::skip]
        let m = [
            1.0, 0.0, 0.0, 0.0,
            0.0, 1.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, 1.0, 0.0,
        ];
        Self::real_unchecked(&m)
    }

    /// `diag(1, e^{iφ})`
    pub fn phase(phi: f64) -> Self {
        GateMatrix(
            Operator::new(vec![
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.0),
                C64::new(0.0, 0.0),
                C64::from_polar(1.0, phi),
            ])
            .expect("2x2"),
        )
    }

    /// Real rotation `|H⟩ → cos θ|H⟩ + sin θ|V⟩`, `|V⟩ → −sin θ|H⟩ + cos θ|V⟩`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self::real_unchecked(&[c, -s, s, c])
    }

    pub fn kron(&self, rhs: &GateMatrix) -> GateMatrix {
        GateMatrix(self.0.kron(&rhs.0))
    }

    pub fn matmul(&self, rhs: &GateMatrix) -> Result<GateMatrix> {
        Ok(GateMatrix(self.0.matmul(&rhs.0)?))
    }

    pub fn dagger(&self) -> GateMatrix {
        GateMatrix(self.0.dagger())
    }

    pub fn arity(&self) -> usize {
        self.0.arity()
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn entries(&self) -> &[C64] {
        self.0.entries()
    }

    pub fn as_operator(&self) -> &Operator {
        &self.0
    }

    /// Multiplies the matrix by a unit-modulus scalar.
    pub fn with_phase(&self, phi: f64) -> GateMatrix {
        GateMatrix(self.0.scale(C64::from_polar(1.0, phi)))
    }
}

impl Neg for GateMatrix {
    type Output = GateMatrix;

    fn neg(self) -> GateMatrix {
        GateMatrix(self.0.scale(C64::new(-1.0, 0.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::StateVector;

    #[test]
    fn standard_gates_are_unitary() {
        for g in [
            GateMatrix::pauli_x(),
            GateMatrix::minus_i_sigma_y(),
            GateMatrix::hadamard(),
            GateMatrix::cnot(),
            GateMatrix::phase(0.7),
            GateMatrix::rotation(2.1),
        ] {
            assert!(g.as_operator().unitarity_defect() < ALGEBRA_TOL);
        }
    }

    #[test]
    fn rejects_non_unitary() {
        assert!(matches!(
            GateMatrix::from_real(&[1.0, 1.0, 0.0, 1.0]),
            Err(QcoreError::NotUnitary(_))
        ));
        assert!(matches!(
            Operator::from_real(&[1.0, 0.0, 0.0]),
            Err(QcoreError::BadMatrixShape(3))
        ));
    }

    #[test]
    fn bit_flip() {
        let out = StateVector::h().apply(&GateMatrix::pauli_x(), &[0]).unwrap();
        assert!(out.approx_eq(&StateVector::v(), ALGEBRA_TOL));
    }

    #[test]
    fn minus_i_sigma_y_on_v_is_minus_h() {
        let out = StateVector::v()
            .apply(&GateMatrix::minus_i_sigma_y(), &[0])
            .unwrap();
        let expected = StateVector::from_real(&[-1.0, 0.0]).unwrap();
        assert!(out.approx_eq(&expected, ALGEBRA_TOL));
    }

    #[test]
    fn hadamard_pair_maps_singlet_to_minus_itself() {
        // Oracle: explicit 4x4 product H⊗H written out by hand, applied to
        // ψ⁻ = (0, 1, -1, 0)/√2.
        let s = FRAC_1_SQRT_2;
        #[rustfmt::skip]
        let hh = [
            0.5,  0.5,  0.5,  0.5,
            0.5, -0.5,  0.5, -0.5,
            0.5,  0.5, -0.5, -0.5,
            0.5, -0.5, -0.5,  0.5,
        ];
        let psi = [0.0, s, -s, 0.0];
        let oracle: Vec<f64> = (0..4)
            .map(|r| (0..4).map(|c| hh[r * 4 + c] * psi[c]).sum())
            .collect();
        assert!((oracle[1] + s).abs() < ALGEBRA_TOL && (oracle[2] - s).abs() < ALGEBRA_TOL);

        let singlet = StateVector::from_real(&psi).unwrap();
        let h = GateMatrix::hadamard();
        let out = singlet.apply(&h, &[0]).unwrap().apply(&h, &[1]).unwrap();
        let expected = StateVector::from_real(&oracle).unwrap();
        assert!(out.approx_eq(&expected, ALGEBRA_TOL));
        assert!((crate::qcore::fidelity(&out, &singlet).unwrap() - 1.0).abs() < ALGEBRA_TOL);
    }

    #[test]
    fn kron_matches_sequential_application() {
        let u = GateMatrix::minus_i_sigma_y().kron(&GateMatrix::pauli_x());
        let s = StateVector::normalized(vec![
            C64::new(0.1, 0.2),
            C64::new(0.7, 0.0),
            C64::new(0.5, -0.3),
            C64::new(0.5, 0.0),
        ])
        .unwrap();
        let a = s.apply(&u, &[0, 1]).unwrap();
        let b = s
            .apply(&GateMatrix::minus_i_sigma_y(), &[0])
            .unwrap()
            .apply(&GateMatrix::pauli_x(), &[1])
            .unwrap();
        assert!(a.approx_eq(&b, ALGEBRA_TOL));
    }
}
