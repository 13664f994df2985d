//! Session state machines for BB84, LCA and the pre-announced basis scheme.
//!
//! A session runs in three phases: Alice draws her strings
//! ([`generate_round_strings`]), every round is sent through channel and
//! adversary and measured by Bob ([`run_session`]), then the check rounds are
//! scored ([`estimate_errors`], [`acceptance`]) and the rest sifted
//! ([`sift`]).

mod estimate;
mod session;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::adversary::{AdversaryModel, AttackOrder, EveObservation};
use crate::error::{check_open_unit, Error, Result};
use crate::quantum::{Basis, PauliChannel};

pub use estimate::{acceptance, alpha_estimate, estimate_errors, sift, ErrorEstimates, GroupEstimate};
pub use session::{run_session, run_session_with_transcript, SessionCounts, SessionOutcome};

/// Smallest expected number of basis-matched check rounds per estimation
/// group for a session to be considered meaningful.
pub const MIN_EXPECTED_CHECKS: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Scheme {
    Bb84,
    /// `p` is the probability of preparing (and measuring) in Z.
    Lca {
        p: f64,
    },
    /// `p` is the probability that the announced basis is the true one
    /// (`c = 0`).
    #[serde(rename = "preannounce")]
    PreAnnounce {
        p: f64,
    },
}

impl Scheme {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Scheme::Bb84 => Ok(()),
            Scheme::Lca { p } | Scheme::PreAnnounce { p } => check_open_unit("p", p).map(drop),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Scheme::Bb84 => "bb84",
            Scheme::Lca { .. } => "lca",
            Scheme::PreAnnounce { .. } => "preannounce",
        }
    }

    /// Estimation groups and the probability that a received check round
    /// lands, basis-matched, in each of them.
    fn check_groups(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Scheme::Bb84 => vec![("pooled", 0.5)],
            Scheme::Lca { p } => vec![("Z", p * p), ("X", (1.0 - p) * (1.0 - p))],
            Scheme::PreAnnounce { p } => vec![("c=0", 0.5 * p), ("c=1", 0.5 * (1.0 - p))],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SessionConfig {
    pub scheme: Scheme,
    pub num_rounds: usize,
    pub check_fraction: f64,
    pub e_max: f64,
    pub channel: PauliChannel,
    pub adversary: AdversaryModel,
    #[serde(default)]
    pub attack_order: AttackOrder,
    pub seed: u64,
    /// Skip the minimum check-count requirement.
    #[serde(default)]
    pub allow_low_statistics: bool,
}

impl SessionConfig {
    pub const DEFAULT_ROUNDS: usize = 200_000;
    pub const DEFAULT_CHECK_FRACTION: f64 = 0.5;
    pub const DEFAULT_E_MAX: f64 = 0.11;
    /// Tolerance reachable with two-way classical post-processing.
    pub const TWO_WAY_E_MAX: f64 = 0.189;
    pub const DEFAULT_SEED: u64 = 1;

    pub fn new(scheme: Scheme, channel: PauliChannel) -> SessionConfig {
        SessionConfig {
            scheme,
            num_rounds: SessionConfig::DEFAULT_ROUNDS,
            check_fraction: SessionConfig::DEFAULT_CHECK_FRACTION,
            e_max: SessionConfig::DEFAULT_E_MAX,
            channel,
            adversary: AdversaryModel::None,
            attack_order: AttackOrder::default(),
            seed: SessionConfig::DEFAULT_SEED,
            allow_low_statistics: false,
        }
    }

    pub fn with_rounds(mut self, n: usize) -> Self {
        self.num_rounds = n;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_e_max(mut self, e_max: f64) -> Self {
        self.e_max = e_max;
        self
    }

    pub fn with_adversary(mut self, adversary: AdversaryModel) -> Self {
        self.adversary = adversary;
        self
    }

    pub fn with_check_fraction(mut self, f: f64) -> Self {
        self.check_fraction = f;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.scheme.validate()?;
        let ch = &self.channel;
        PauliChannel::new(ch.p_i(), ch.p_x(), ch.p_y(), ch.p_z(), ch.loss())?;
        if self.num_rounds == 0 {
            return Err(Error::InvalidConfig("num_rounds must be at least 1".into()));
        }
        check_open_unit("check_fraction", self.check_fraction)?;
        if !(self.e_max > 0.0 && self.e_max < 0.5) {
            return Err(Error::InvalidProbability {
                name: "e_max",
                value: self.e_max,
                range: "(0, 0.5)",
            });
        }
        if self.adversary.needs_announcement() && !matches!(self.scheme, Scheme::PreAnnounce { .. }) {
            return Err(Error::InvalidConfig(format!(
                "intercept strategy `use-preannounced` requires the preannounce scheme, not {}",
                self.scheme.label()
            )));
        }
        if !self.allow_low_statistics {
            let received = self.num_rounds as f64 * (1.0 - self.channel.loss()) * self.check_fraction;
            for (group, prob) in self.scheme.check_groups() {
                let expected = received * prob;
                if expected < MIN_EXPECTED_CHECKS {
                    return Err(Error::InsufficientChecks {
                        group,
                        expected,
                        minimum: MIN_EXPECTED_CHECKS,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Alice's per-round strings. `c` and `s` exist only for the pre-announce
/// scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundStrings {
    pub bits: Vec<u8>,
    pub b: Vec<u8>,
    pub c: Option<Vec<u8>>,
    pub s: Option<Vec<u8>>,
}

/// Draws the data bits, the encoding-basis string `b` and, for the
/// pre-announce scheme, `c ~ Bernoulli(P(c = 0) = p)` and `s = b XOR c`.
pub fn generate_round_strings<R: Rng + ?Sized>(scheme: &Scheme, n: usize, rng: &mut R) -> RoundStrings {
    let mut bits = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    let mut c = Vec::new();
    for _ in 0..n {
        bits.push(rng.random::<bool>() as u8);
        match *scheme {
            Scheme::Bb84 => b.push(rng.random::<bool>() as u8),
            Scheme::Lca { p } => b.push(biased_bit(p, rng)),
            Scheme::PreAnnounce { p } => {
                b.push(rng.random::<bool>() as u8);
                c.push(biased_bit(p, rng));
            }
        }
    }
    match scheme {
        Scheme::PreAnnounce { .. } => {
            let s = b.iter().zip(&c).map(|(x, y)| x ^ y).collect();
            RoundStrings {
                bits,
                b,
                c: Some(c),
                s: Some(s),
            }
        }
        _ => RoundStrings {
            bits,
            b,
            c: None,
            s: None,
        },
    }
}

/// A bit that is 0 with probability `p_zero`.
fn biased_bit<R: Rng + ?Sized>(p_zero: f64, rng: &mut R) -> u8 {
    (rng.random::<f64>() >= p_zero) as u8
}

/// Everything both parties (and Eve) did on one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub index: usize,
    pub alice_bit: u8,
    pub b: u8,
    pub c: Option<u8>,
    pub s: Option<u8>,
    pub lost: bool,
    pub is_check: bool,
    /// `None` when the qubit never arrived.
    pub bob_basis: Option<Basis>,
    pub bob_bit: Option<u8>,
    pub eve: Option<EveObservation>,
}

impl RoundRecord {
    pub fn alice_basis(&self) -> Basis {
        Basis::from_bit(self.b)
    }

    pub fn bases_match(&self) -> bool {
        self.bob_basis == Some(self.alice_basis())
    }

    pub fn is_error(&self) -> bool {
        self.bob_bit.is_some_and(|x| x != self.alice_bit)
    }
}
