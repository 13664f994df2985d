//! JSON documents printed by the CLI. Schemas live in `schemas/` at the
//! repository root.

use std::collections::BTreeMap;

use paqkd_core::protocols::SessionCounts;
use paqkd_core::{Alpha, EppErrorRates, ErrorEstimates, GroupErrorRates, SessionConfig, SessionOutcome};
use serde::{Deserialize, Serialize};

pub const TOOL: &str = "paqkd";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Packs bits MSB-first into bytes and hex-encodes them. The last byte is
/// zero-padded; the bit count travels separately.
pub fn bits_to_hex(bits: &[u8]) -> String {
    let bytes: Vec<u8> = bits
        .chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | ((b & 1) << (7 - i)))
        })
        .collect();
    hex::encode(bytes)
}

pub fn hex_to_bits(hex_str: &str, len: usize) -> Result<Vec<u8>, hex::FromHexError> {
    let bytes = hex::decode(hex_str)?;
    Ok((0..len).map(|i| (bytes[i / 8] >> (7 - i % 8)) & 1).collect())
}

/// Flat view of the estimated rates, keyed by group name.
fn rates(estimates: &ErrorEstimates) -> BTreeMap<String, Option<f64>> {
    let pairs = match estimates {
        ErrorEstimates::PreAnnounce { c0, c1 } => vec![("e_c0", c0.rate()), ("e_c1", c1.rate())],
        ErrorEstimates::Lca { z, x } => vec![("e_z", z.rate()), ("e_x", x.rate())],
        ErrorEstimates::Bb84 { pooled } => vec![("e_pooled", pooled.rate())],
    };
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub config: SessionConfig,
    pub accepted: bool,
    pub estimates: ErrorEstimates,
    pub rates: BTreeMap<String, Option<f64>>,
    pub alpha: Option<Alpha>,
    pub sift_efficiency: f64,
    pub counts: SessionCounts,
    pub key_bits: usize,
    pub alice_key: String,
    pub bob_key: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn new(config: SessionConfig, outcome: &SessionOutcome) -> RunReport {
        RunReport {
            tool: TOOL.to_string(),
            version: VERSION.to_string(),
            config,
            accepted: outcome.accepted,
            estimates: outcome.estimates,
            rates: rates(&outcome.estimates),
            alpha: outcome.alpha,
            sift_efficiency: outcome.sift_efficiency,
            counts: outcome.counts,
            key_bits: outcome.alice_key.len(),
            alice_key: bits_to_hex(&outcome.alice_key),
            bob_key: bits_to_hex(&outcome.bob_key),
            wall_time_ms: None,
        }
    }

    /// Rebuilds the session outcome the report was made from.
    pub fn outcome(&self) -> Result<SessionOutcome, hex::FromHexError> {
        Ok(SessionOutcome {
            accepted: self.accepted,
            estimates: self.estimates,
            alpha: self.alpha,
            alice_key: hex_to_bits(&self.alice_key, self.key_bits)?,
            bob_key: hex_to_bits(&self.bob_key, self.key_bits)?,
            sift_efficiency: self.sift_efficiency,
            counts: self.counts,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackRun {
    pub adversary: String,
    pub seed: u64,
    pub accepted: bool,
    pub e_c0: Option<f64>,
    pub e_c1: Option<f64>,
    pub n_c0: usize,
    pub n_c1: usize,
    pub alpha: Option<Alpha>,
    pub sift_efficiency: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AttackDemoReport {
    pub tool: String,
    pub version: String,
    /// Shared settings; each run overrides `adversary` and `seed`.
    pub config: SessionConfig,
    pub runs: Vec<AttackRun>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticInputs {
    pub ez_s0: f64,
    pub ez_s1: f64,
    pub ex_s0: f64,
    pub ex_s1: f64,
    pub p: f64,
    pub e_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalyticReport {
    pub tool: String,
    pub version: String,
    pub inputs: AnalyticInputs,
    pub epp: EppErrorRates,
    pub groups: GroupErrorRates,
    /// `(e_bit, e_phase)` recomputed from the group rates only.
    pub epp_from_groups: EppPair,
    pub e_z: f64,
    pub e_x: f64,
    /// `(e_Z + e_X) - (e_c0 + e_c1)`.
    pub sum_residual: f64,
    /// Both group rates below `e_max`.
    pub group_criterion: bool,
    /// `e_Z + e_X` inside the alpha-dependent bound.
    pub region_verdict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EppPair {
    pub e_bit: f64,
    pub e_phase: f64,
}
