use serde::{Deserialize, Serialize};

use super::{RoundRecord, Scheme};
use crate::analysis::Alpha;
use crate::quantum::Basis;

/// Disagreement count over one estimation group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GroupEstimate {
    pub samples: usize,
    pub errors: usize,
}

impl GroupEstimate {
    /// Sample disagreement fraction; `None` for an empty group.
    pub fn rate(&self) -> Option<f64> {
        (self.samples > 0).then(|| self.errors as f64 / self.samples as f64)
    }

    fn record(&mut self, error: bool) {
        self.samples += 1;
        self.errors += error as usize;
    }

    fn below(&self, e_max: f64) -> bool {
        self.rate().is_some_and(|r| r < e_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "kebab-case")]
pub enum ErrorEstimates {
    #[serde(rename = "preannounce")]
    PreAnnounce {
        c0: GroupEstimate,
        c1: GroupEstimate,
    },
    Lca {
        z: GroupEstimate,
        x: GroupEstimate,
    },
    Bb84 {
        pooled: GroupEstimate,
    },
}

/// Scores the check rounds. Non-check and lost rounds in `records` are
/// skipped, as are check rounds where Bob's basis differs from Alice's.
pub fn estimate_errors(records: &[RoundRecord], scheme: &Scheme) -> ErrorEstimates {
    let scored = records.iter().filter(|r| r.is_check && !r.lost && r.bases_match());
    match scheme {
        Scheme::PreAnnounce { .. } => {
            let (mut c0, mut c1) = (GroupEstimate::default(), GroupEstimate::default());
            for r in scored {
                match r.c {
                    Some(0) => c0.record(r.is_error()),
                    Some(_) => c1.record(r.is_error()),
                    None => {}
                }
            }
            ErrorEstimates::PreAnnounce { c0, c1 }
        }
        Scheme::Lca { .. } => {
            let (mut z, mut x) = (GroupEstimate::default(), GroupEstimate::default());
            for r in scored {
                match r.alice_basis() {
                    Basis::Z => z.record(r.is_error()),
                    Basis::X => x.record(r.is_error()),
                }
            }
            ErrorEstimates::Lca { z, x }
        }
        Scheme::Bb84 => {
            let mut pooled = GroupEstimate::default();
            for r in scored {
                pooled.record(r.is_error());
            }
            ErrorEstimates::Bb84 { pooled }
        }
    }
}

/// Every monitored rate strictly below `e_max`. An empty group rejects.
pub fn acceptance(estimates: &ErrorEstimates, e_max: f64) -> bool {
    match estimates {
        ErrorEstimates::PreAnnounce { c0, c1 } => c0.below(e_max) && c1.below(e_max),
        ErrorEstimates::Lca { z, x } => z.below(e_max) && x.below(e_max),
        ErrorEstimates::Bb84 { pooled } => pooled.below(e_max),
    }
}

/// `e_c1 / e_c0` for pre-announce estimates; `None` for other schemes or
/// when either group is empty.
pub fn alpha_estimate(estimates: &ErrorEstimates) -> Option<Alpha> {
    match estimates {
        ErrorEstimates::PreAnnounce { c0, c1 } => Some(Alpha::from_rates(c0.rate()?, c1.rate()?)),
        _ => None,
    }
}

/// Raw keys, order-preserving. Pre-announce keeps the received non-check
/// rounds with `c = 0`; BB84 and LCA keep received non-check rounds where
/// the bases agree.
pub fn sift(records: &[RoundRecord], scheme: &Scheme) -> (Vec<u8>, Vec<u8>) {
    records
        .iter()
        .filter(|r| !r.is_check && !r.lost)
        .filter(|r| match scheme {
            Scheme::PreAnnounce { .. } => r.c == Some(0),
            _ => r.bases_match(),
        })
        .filter_map(|r| r.bob_bit.map(|bob| (r.alice_bit, bob)))
        .unzip()
}
