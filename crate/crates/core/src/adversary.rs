//! Intercept-resend eavesdroppers.
//!
//! Eve measures each passing qubit in a basis picked by her strategy and
//! forwards the post-measurement eigenstate. `UsePreAnnounced` reads the
//! publicly announced basis bit `s`, which equals Alice's true basis except
//! on the rounds where `c = 1`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{Basis, QubitState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InterceptStrategy {
    RandomBasis,
    FixedBasis(Basis),
    #[serde(rename = "use-preannounced")]
    UsePreAnnounced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryModel {
    #[default]
    None,
    InterceptResend(InterceptStrategy),
}

/// Where the attack sits relative to the channel noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackOrder {
    #[default]
    ChannelThenAttack,
    AttackThenChannel,
}

/// What Eve learned on one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EveObservation {
    pub basis: Basis,
    pub bit: u8,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interception {
    pub forwarded: QubitState,
    pub observation: Option<EveObservation>,
}

impl AdversaryModel {
    pub fn needs_announcement(&self) -> bool {
        matches!(
            self,
            AdversaryModel::InterceptResend(InterceptStrategy::UsePreAnnounced)
        )
    }

    /// Attacks one qubit. `announced_s` is the public basis bit for this
    /// round, present only under the pre-announce scheme.
    pub fn attack_round<R: Rng + ?Sized>(
        &self,
        state: &QubitState,
        announced_s: Option<u8>,
        rng: &mut R,
    ) -> Result<Interception> {
        let strategy = match self {
            AdversaryModel::None => {
                return Ok(Interception {
                    forwarded: *state,
                    observation: None,
                });
            }
            AdversaryModel::InterceptResend(strategy) => strategy,
        };
        let basis = match strategy {
            InterceptStrategy::RandomBasis => Basis::random(rng),
            InterceptStrategy::FixedBasis(b) => *b,
            InterceptStrategy::UsePreAnnounced => Basis::from_bit(announced_s.ok_or(Error::MissingAnnouncement)?),
        };
        let (bit, forwarded) = state.measure(basis, rng);
        Ok(Interception {
            forwarded,
            observation: Some(EveObservation { basis, bit }),
        })
    }
}
