use serde::Serialize;

use crate::channel::{Carrier, Role};
use crate::dfs::{LogicalBasis, LogicalLabel};

/// Everything Bob prepared, indexed by position in the first-leg sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct BobRecord {
    pub labels: Vec<LogicalLabel>,
    pub roles: Vec<Role>,
    /// Positions of the first-check decoys, ascending.
    pub first_decoys: Vec<usize>,
    /// Positions of the second-check decoys, ascending. Decoy `j` of the
    /// second check is at `second_decoys[j]`.
    pub second_decoys: Vec<usize>,
    /// Shared initial label of each round's pair.
    pub initial: Vec<LogicalLabel>,
}

impl BobRecord {
    /// What Bob reveals about the decoys: first-check positions with their
    /// bases, and second-check positions.
    pub fn disclose(&self) -> DecoyDisclosure {
        DecoyDisclosure {
            first: self
                .first_decoys
                .iter()
                .map(|&p| (p, self.labels[p].basis))
                .collect(),
            second: self.second_decoys.clone(),
        }
    }

    pub fn second_decoy_label(&self, j: usize) -> LogicalLabel {
        self.labels[self.second_decoys[j]]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecoyDisclosure {
    pub first: Vec<(usize, LogicalBasis)>,
    pub second: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AliceRecord {
    pub k: Vec<bool>,
    /// Checking bit encoded on second-check decoy `j`.
    pub checking_bits: Vec<bool>,
    /// The twin of each round, held back from the second leg.
    pub twins: Vec<Carrier>,
    /// Position in the second-leg sequence of second-check decoy `j`.
    pub decoy_positions: Vec<usize>,
}

/// Pass/fail statistic of one decoy check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub tested: usize,
    pub errors: usize,
    pub rate: f64,
    pub threshold: f64,
    pub abort: bool,
    /// No decoys were tested, so the check passed without evidence.
    pub vacuous: bool,
}

impl CheckOutcome {
    pub fn from_counts(errors: usize, tested: usize, threshold: f64) -> Self {
        let rate = if tested == 0 {
            0.0
        } else {
            errors as f64 / tested as f64
        };
        CheckOutcome {
            tested,
            errors,
            rate,
            threshold,
            abort: rate > threshold,
            vacuous: tested == 0,
        }
    }

    /// Same counts judged against another threshold.
    pub fn with_threshold(&self, threshold: f64) -> Self {
        Self::from_counts(self.errors, self.tested, threshold)
    }
}

/// A check outcome with its per-decoy verdicts, in decoy order.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub outcome: CheckOutcome,
    /// `(position, pass)` for each decoy.
    pub verdicts: Vec<(usize, bool)>,
}

impl CheckReport {
    pub fn from_verdicts(verdicts: Vec<(usize, bool)>, threshold: f64) -> Self {
        let errors = verdicts.iter().filter(|(_, pass)| !pass).count();
        CheckReport {
            outcome: CheckOutcome::from_counts(errors, verdicts.len(), threshold),
            verdicts,
        }
    }
}

/// Classical information everyone, Eve included, sees.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PublicRecord {
    pub first_decoys: Vec<(usize, LogicalBasis)>,
    /// Alice's reported labels for the first-check decoys; `None` where her
    /// reading fell outside the code.
    pub first_reports: Vec<Option<LogicalLabel>>,
    /// First-leg positions of the second-check decoys.
    pub second_decoys_sent: Vec<usize>,
    /// Second-leg positions of the second-check decoys.
    pub second_decoys_returned: Vec<usize>,
    /// Bob's decoded checking bits.
    pub checking_reports: Vec<Option<bool>>,
    pub announcements: Vec<LogicalLabel>,
}

impl PublicRecord {
    /// First-leg `(message, twin)` positions of each round, for a sequence
    /// of `len` items.
    pub fn first_leg_rounds(&self, len: usize) -> Result<Vec<(usize, usize)>, String> {
        let decoys: Vec<usize> = self
            .first_decoys
            .iter()
            .map(|&(p, _)| p)
            .chain(self.second_decoys_sent.iter().copied())
            .collect();
        let rest: Vec<usize> = (0..len).filter(|p| !decoys.contains(p)).collect();
        if rest.len() != 2 * self.announcements.len() {
            return Err(format!(
                "{} non-decoy slots on the first leg for {} rounds",
                rest.len(),
                self.announcements.len()
            ));
        }
        Ok(rest.chunks(2).map(|c| (c[0], c[1])).collect())
    }

    /// Second-leg position of each round's message qubit.
    pub fn second_leg_rounds(&self, len: usize) -> Result<Vec<usize>, String> {
        let rest: Vec<usize> = (0..len)
            .filter(|p| !self.second_decoys_returned.contains(p))
            .collect();
        if rest.len() != self.announcements.len() {
            return Err(format!(
                "{} non-decoy slots on the second leg for {} rounds",
                rest.len(),
                self.announcements.len()
            ));
        }
        Ok(rest)
    }
}
