use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{
    acceptance, alpha_estimate, estimate_errors, generate_round_strings, sift, ErrorEstimates, RoundRecord, Scheme,
    SessionConfig,
};
use crate::adversary::AttackOrder;
use crate::analysis::Alpha;
use crate::error::Result;
use crate::quantum::{Basis, QubitState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SessionCounts {
    pub sent: usize,
    pub lost: usize,
    pub checked: usize,
    /// Rounds that survive sifting, whether or not the run was accepted.
    pub kept: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionOutcome {
    pub accepted: bool,
    pub estimates: ErrorEstimates,
    pub alpha: Option<Alpha>,
    /// Empty unless `accepted`.
    pub alice_key: Vec<u8>,
    pub bob_key: Vec<u8>,
    /// Sifted rounds over received non-check rounds.
    pub sift_efficiency: f64,
    pub counts: SessionCounts,
}

/// Runs one session. The result depends only on `config`.
pub fn run_session(config: &SessionConfig) -> Result<SessionOutcome> {
    run_session_with_transcript(config).map(|(outcome, _)| outcome)
}

pub fn run_session_with_transcript(config: &SessionConfig) -> Result<(SessionOutcome, Vec<RoundRecord>)> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let scheme = config.scheme;
    let strings = generate_round_strings(&scheme, config.num_rounds, &mut rng);

    let mut records = Vec::with_capacity(config.num_rounds);
    for i in 0..config.num_rounds {
        let b = strings.b[i];
        let c = strings.c.as_ref().map(|c| c[i]);
        // s is public before the qubit leaves Alice
        let s = strings.s.as_ref().map(|s| s[i]);
        let sent = QubitState::prepare(Basis::from_bit(b), strings.bits[i]);

        let (arrived, eve) = match config.attack_order {
            AttackOrder::ChannelThenAttack => match config.channel.apply(&sent, &mut rng) {
                Some(noisy) => {
                    let hit = config.adversary.attack_round(&noisy, s, &mut rng)?;
                    (Some(hit.forwarded), hit.observation)
                }
                None => (None, None),
            },
            AttackOrder::AttackThenChannel => {
                let hit = config.adversary.attack_round(&sent, s, &mut rng)?;
                (config.channel.apply(&hit.forwarded, &mut rng), hit.observation)
            }
        };

        let mut record = RoundRecord {
            index: i,
            alice_bit: strings.bits[i],
            b,
            c,
            s,
            lost: arrived.is_none(),
            is_check: false,
            bob_basis: None,
            bob_bit: None,
            eve,
        };
        if let Some(state) = arrived {
            let is_check = rng.random_bool(config.check_fraction);
            let basis = bob_basis(&scheme, is_check, s, &mut rng);
            let (bit, _) = state.measure(basis, &mut rng);
            record.is_check = is_check;
            record.bob_basis = Some(basis);
            record.bob_bit = Some(bit);
        }
        records.push(record);
    }

    let estimates = estimate_errors(&records, &scheme);
    let accepted = acceptance(&estimates, config.e_max);
    let alpha = alpha_estimate(&estimates);
    let (alice_key, bob_key) = sift(&records, &scheme);

    let lost = records.iter().filter(|r| r.lost).count();
    let checked = records.iter().filter(|r| r.is_check).count();
    let received_unchecked = config.num_rounds - lost - checked;
    let counts = SessionCounts {
        sent: config.num_rounds,
        lost,
        checked,
        kept: alice_key.len(),
    };
    let sift_efficiency = if received_unchecked > 0 {
        alice_key.len() as f64 / received_unchecked as f64
    } else {
        0.0
    };
    let (alice_key, bob_key) = if accepted {
        (alice_key, bob_key)
    } else {
        (Vec::new(), Vec::new())
    };

    let outcome = SessionOutcome {
        accepted,
        estimates,
        alpha,
        alice_key,
        bob_key,
        sift_efficiency,
        counts,
    };
    Ok((outcome, records))
}

/// Bob's measurement basis. Check rounds of the pre-announce scheme ignore
/// `s` and pick uniformly; LCA measures with the same Z bias as Alice
/// prepares.
fn bob_basis<R: Rng + ?Sized>(scheme: &Scheme, is_check: bool, s: Option<u8>, rng: &mut R) -> Basis {
    match *scheme {
        Scheme::Bb84 => Basis::random(rng),
        Scheme::Lca { p } => {
            if rng.random::<f64>() < p {
                Basis::Z
            } else {
                Basis::X
            }
        }
        Scheme::PreAnnounce { .. } => match (is_check, s) {
            (false, Some(s)) => Basis::from_bit(s),
            _ => Basis::random(rng),
        },
    }
}
