use num_rational::Ratio;
use serde::{Serialize, Serializer};

use crate::dfs::{LogicalLabel, NoiseCode, PHOTONS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProtocolKind {
    ThisWork(NoiseCode),
    /// Product-state dialogue used as the comparison point: same secret
    /// bits and qubits, one classical bit per round.
    Comparator,
}

impl ProtocolKind {
    pub fn name(self) -> String {
        match self {
            ProtocolKind::ThisWork(code) => format!("this_work_{code}"),
            ProtocolKind::Comparator => "comparator".to_string(),
        }
    }
}

/// Per-round accounting, excluding everything spent on security checks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EfficiencyReport {
    pub protocol: String,
    /// Secret bits received, both directions together.
    pub b_s: u32,
    /// Physical qubits sent.
    pub q_t: u32,
    /// Classical bits exchanged.
    pub b_t: u32,
    #[serde(serialize_with = "ratio_string")]
    pub eta: Ratio<u32>,
}

fn ratio_string<S: Serializer>(r: &Ratio<u32>, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

impl EfficiencyReport {
    fn new(protocol: String, b_s: u32, q_t: u32, b_t: u32) -> Self {
        EfficiencyReport {
            protocol,
            b_s,
            q_t,
            b_t,
            eta: Ratio::new(b_s, q_t + b_t),
        }
    }

    pub fn eta_f64(&self) -> f64 {
        *self.eta.numer() as f64 / *self.eta.denom() as f64
    }
}

pub fn cabello_efficiency(kind: ProtocolKind) -> EfficiencyReport {
    match kind {
        ProtocolKind::ThisWork(_) => {
            // One bit each way, carried by a message qubit and its twin, with
            // Bob announcing which of the four code labels he measured.
            let logical_qubits = 2;
            let q_t = logical_qubits * PHOTONS.len() as u32;
            let b_t = LogicalLabel::ALL.len().ilog2();
            EfficiencyReport::new(kind.name(), 2, q_t, b_t)
        }
        ProtocolKind::Comparator => EfficiencyReport::new(kind.name(), 2, 4, 1),
    }
}
