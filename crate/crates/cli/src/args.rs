use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "paqkd",
    version,
    about = "QKD with a pre-announced basis: simulation and region analysis"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one session and print a JSON report (exit 0 accepted, 2 rejected).
    Simulate(SessionArgs),
    /// Print the acceptance regions of LCA, pre-announce and BB84 as CSV.
    Sweep(SweepArgs),
    /// Run pre-announce sessions with no Eve, a random-basis Eve and an Eve
    /// that measures in the announced basis, and report alpha for each.
    AttackDemo(SessionArgs),
    /// Evaluate the closed-form error-rate relations for one channel profile.
    Analytic(AnalyticArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeArg {
    Bb84,
    Lca,
    Preannounce,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdversaryArg {
    None,
    Random,
    FixedZ,
    FixedX,
    UsePreannounced,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackOrderArg {
    ChannelThenAttack,
    AttackThenChannel,
}

/// Session flags. Every field is optional so a `--config` file can fill
/// the gaps; flags given on the command line win.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SessionArgs {
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// LCA: P(Z basis). Pre-announce: P(announced basis is correct).
    #[arg(long)]
    pub p: Option<f64>,
    /// Z-basis error rate of the channel.
    #[arg(long)]
    pub ez: Option<f64>,
    /// X-basis error rate of the channel.
    #[arg(long)]
    pub ex: Option<f64>,
    /// Per-qubit loss probability.
    #[arg(long)]
    pub loss: Option<f64>,
    #[arg(long)]
    pub emax: Option<f64>,
    #[arg(long)]
    pub rounds: Option<usize>,
    #[arg(long)]
    pub check_fraction: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub adversary: Option<AdversaryArg>,
    #[arg(long, value_enum)]
    pub attack_order: Option<AttackOrderArg>,
    /// Run even if a check group is expected to hold fewer than 100 samples.
    #[arg(long)]
    #[serde(rename = "allow_low_stats")]
    pub allow_low_stats: bool,
    /// Add `wall_time_ms` to the report (makes output time-dependent).
    #[arg(long)]
    #[serde(skip)]
    pub timing: bool,
    /// JSON file with any of the above keys (snake_case).
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl SessionArgs {
    /// Fills unset fields from `file`.
    pub fn merged_with(self, file: SessionArgs) -> SessionArgs {
        SessionArgs {
            scheme: self.scheme.or(file.scheme),
            p: self.p.or(file.p),
            ez: self.ez.or(file.ez),
            ex: self.ex.or(file.ex),
            loss: self.loss.or(file.loss),
            emax: self.emax.or(file.emax),
            rounds: self.rounds.or(file.rounds),
            check_fraction: self.check_fraction.or(file.check_fraction),
            seed: self.seed.or(file.seed),
            adversary: self.adversary.or(file.adversary),
            attack_order: self.attack_order.or(file.attack_order),
            allow_low_stats: self.allow_low_stats || file.allow_low_stats,
            timing: self.timing,
            config: self.config,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 0.11)]
    pub emax: f64,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Lower end of both axes.
    #[arg(long, default_value_t = 0.0)]
    pub min: f64,
    /// Upper end of both axes.
    #[arg(long, default_value_t = 0.25)]
    pub max: f64,
    #[arg(long, default_value_t = 0.005)]
    pub step: f64,
    #[arg(long)]
    pub x_min: Option<f64>,
    #[arg(long)]
    pub x_max: Option<f64>,
    #[arg(long)]
    pub z_min: Option<f64>,
    #[arg(long)]
    pub z_max: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyticArgs {
    #[arg(long)]
    pub ez_s0: f64,
    #[arg(long)]
    pub ez_s1: f64,
    #[arg(long)]
    pub ex_s0: f64,
    #[arg(long)]
    pub ex_s1: f64,
    #[arg(long, default_value_t = 0.9)]
    pub p: f64,
    #[arg(long, default_value_t = 0.11)]
    pub emax: f64,
}
