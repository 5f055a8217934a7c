//! Probe couplings on bare amplitude vectors.
//!
//! The live attack and the hypothesis replay share these so that Eve's
//! inference uses exactly the map she applied. Vectors need not be
//! normalized; the replay works with unnormalized branches throughout.

use crate::qcore::{apply_dense, GateMatrix, Operator, BASIS_TOL, C64};

use super::{AdversaryError, AttackKind, EMParams, Result};

/// Amplitudes with photons at qubits 0 and 1 and a list of appended
/// registers `(start, len)`.
#[derive(Debug, Clone)]
pub(crate) struct Branch {
    pub amps: Vec<C64>,
    pub qubits: usize,
    pub registers: Vec<(usize, usize)>,
}

impl Branch {
    pub fn new(amps: Vec<C64>, qubits: usize, registers: Vec<(usize, usize)>) -> Self {
        debug_assert_eq!(amps.len(), 1 << qubits);
        Branch {
            amps,
            qubits,
            registers,
        }
    }

    pub fn photons(amps: Vec<C64>) -> Self {
        Self::new(amps, 2, Vec::new())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply_photons(&mut self, op: &Operator) {
        apply_dense(&mut self.amps, self.qubits, op.entries(), &[0, 1]);
    }

    pub fn apply_gate(&mut self, gate: &GateMatrix) {
        self.apply_photons(gate.as_operator());
    }

    /// Zeroes every amplitude whose `r`-th register does not read `value`.
    pub fn project_register(&mut self, r: usize, value: usize) {
        let (start, len) = self.registers[r];
        let shift = self.qubits - start - len;
        let mask = (1usize << len) - 1;
        for (idx, a) in self.amps.iter_mut().enumerate() {
            if (idx >> shift) & mask != value {
                *a = C64::new(0.0, 0.0);
            }
        }
    }

    /// Applies the attack's probe, appending one register.
    pub fn couple(&mut self, kind: &AttackKind) -> Result<usize> {
        let len = match kind {
            AttackKind::CeAttack => {
                self.amps = ce_couple(&self.amps, self.qubits);
                1
            }
            AttackKind::EntangleMeasure(p) => {
                self.amps = em_couple(&self.amps, self.qubits, p)?;
                p.register_qubits()
            }
            _ => unreachable!("only probe attacks couple registers"),
        };
        self.registers.push((self.qubits, len));
        self.qubits += len;
        Ok(len)
    }
}

/// Appends a qubit in `|H⟩` and applies CNOTs from both photons onto it.
pub(crate) fn ce_couple(amps: &[C64], qubits: usize) -> Vec<C64> {
    let zero = C64::new(0.0, 0.0);
    let mut out = vec![zero; amps.len() * 2];
    for (idx, &a) in amps.iter().enumerate() {
        out[idx << 1] = a;
    }
    let cnot = GateMatrix::cnot();
    apply_dense(&mut out, qubits + 1, cnot.entries(), &[0, qubits]);
    apply_dense(&mut out, qubits + 1, cnot.entries(), &[1, qubits]);
    out
}

/// Applies the entangle-measure isometry, appending its register.
///
/// Fails if the photons carry weight on `|HH⟩` or `|VV⟩`, where the probe
/// is undefined.
pub(crate) fn em_couple(amps: &[C64], qubits: usize, p: &EMParams) -> Result<Vec<C64>> {
    let rest = qubits - 2;
    let rest_dim = 1usize << rest;
    let a = p.register_qubits();
    let reg_dim = 1usize << a;

    let outside: f64 = amps
        .iter()
        .enumerate()
        .filter(|(idx, _)| matches!(idx >> rest, 0 | 3))
        .map(|(_, z)| z.norm_sqr())
        .sum();
    if outside > BASIS_TOL {
        return Err(AdversaryError::OutsideDomain { weight: outside });
    }

    let images: [Vec<Vec<C64>>; 2] = [
        p.e.iter().map(|v| p.padded(v)).collect(),
        p.e_dot.iter().map(|v| p.padded(v)).collect(),
    ];
    let coeffs = [&p.alpha, &p.beta];

    let mut out = vec![C64::new(0.0, 0.0); 4 * rest_dim * reg_dim];
    for (input, photon) in [(0usize, 1usize), (1, 2)] {
        for r in 0..rest_dim {
            let amp = amps[(photon << rest) | r];
            if amp == C64::new(0.0, 0.0) {
                continue;
            }
            for q in 0..4 {
                let c = coeffs[input][q] * amp;
                for (j, e) in images[input][q].iter().enumerate() {
                    out[(((q << rest) | r) << a) | j] += c * e;
                }
            }
        }
    }
    Ok(out)
}
