//! Command-line front end: `simulate`, `sweep`, `attack-demo`, `analytic`.
//!
//! Exit codes: 0 success (or accepted run), 2 rejected run, 1 usage or
//! configuration error. Reports go to stdout, diagnostics to stderr.

pub mod args;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use paqkd_core::protocols::{run_session, ErrorEstimates};
use paqkd_core::seed::derive_seed;
use paqkd_core::{
    basis_error_rates, epp_error_rates, epp_from_groups, group_error_rates, region_accepts, sweep_region,
    AdversaryModel, AttackOrder, Basis, ChannelErrorProfile, GridSpec, InterceptStrategy, PauliChannel, RegionScheme,
    Scheme, SessionConfig,
};
use thiserror::Error;

use args::{AdversaryArg, AnalyticArgs, AttackOrderArg, Cli, Command, SchemeArg, SessionArgs, SweepArgs};
use report::{AnalyticInputs, AnalyticReport, AttackDemoReport, AttackRun, EppPair, RunReport, TOOL, VERSION};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_REJECTED: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] paqkd_core::Error),
    #[error("reading config file: {0}")]
    Io(#[from] std::io::Error),
    #[error("parsing config file: {0}")]
    Json(#[from] serde_json::Error),
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Output {
    fn error(message: impl std::fmt::Display) -> Output {
        Output {
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
            code: EXIT_ERROR,
        }
    }
}

pub fn run<I, T>(argv: I) -> Output
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Output {
                    stdout: text,
                    stderr: String::new(),
                    code: EXIT_OK,
                },
                _ => Output {
                    stdout: String::new(),
                    stderr: text,
                    code: EXIT_ERROR,
                },
            };
        }
    };
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Sweep(args) => sweep(args),
        Command::AttackDemo(args) => attack_demo(args),
        Command::Analytic(args) => analytic(args),
    };
    result.unwrap_or_else(Output::error)
}

fn probability(flag: &str, value: f64) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(CliError::Usage(format!(
            "--{flag} must be a probability in [0, 1], got {value}"
        )))
    }
}

fn open_probability(flag: &str, value: f64) -> Result<f64, CliError> {
    if value > 0.0 && value < 1.0 {
        Ok(value)
    } else {
        Err(CliError::Usage(format!(
            "--{flag} must lie strictly between 0 and 1, got {value}"
        )))
    }
}

fn load_session_args(args: SessionArgs) -> Result<SessionArgs, CliError> {
    match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let file: SessionArgs = serde_json::from_str(&text)?;
            Ok(args.merged_with(file))
        }
        None => Ok(args),
    }
}

/// Resolves flags (plus optional config file) into a validated session
/// config. `default_scheme` applies when neither source names one.
fn session_config(args: &SessionArgs, default_scheme: SchemeArg) -> Result<SessionConfig, CliError> {
    let p = open_probability("p", args.p.unwrap_or(0.9))?;
    let scheme = match args.scheme.unwrap_or(default_scheme) {
        SchemeArg::Bb84 => Scheme::Bb84,
        SchemeArg::Lca => Scheme::Lca { p },
        SchemeArg::Preannounce => Scheme::PreAnnounce { p },
    };
    let e_z = probability("ez", args.ez.unwrap_or(0.0))?;
    let e_x = probability("ex", args.ex.unwrap_or(0.0))?;
    let loss = probability("loss", args.loss.unwrap_or(0.0))?;
    let channel =
        PauliChannel::from_error_rates(e_z, e_x, loss).map_err(|e| CliError::Usage(format!("--ez/--ex: {e}")))?;
    let e_max = args.emax.unwrap_or(SessionConfig::DEFAULT_E_MAX);
    if !(e_max > 0.0 && e_max < 0.5) {
        return Err(CliError::Usage(format!("--emax must lie in (0, 0.5), got {e_max}")));
    }
    let check_fraction = open_probability(
        "check-fraction",
        args.check_fraction.unwrap_or(SessionConfig::DEFAULT_CHECK_FRACTION),
    )?;
    let num_rounds = args.rounds.unwrap_or(SessionConfig::DEFAULT_ROUNDS);
    if num_rounds == 0 {
        return Err(CliError::Usage("--rounds must be at least 1".into()));
    }
    let adversary = match args.adversary.unwrap_or(AdversaryArg::None) {
        AdversaryArg::None => AdversaryModel::None,
        AdversaryArg::Random => AdversaryModel::InterceptResend(InterceptStrategy::RandomBasis),
        AdversaryArg::FixedZ => AdversaryModel::InterceptResend(InterceptStrategy::FixedBasis(Basis::Z)),
        AdversaryArg::FixedX => AdversaryModel::InterceptResend(InterceptStrategy::FixedBasis(Basis::X)),
        AdversaryArg::UsePreannounced => AdversaryModel::InterceptResend(InterceptStrategy::UsePreAnnounced),
    };
    let attack_order = match args.attack_order {
        Some(AttackOrderArg::AttackThenChannel) => AttackOrder::AttackThenChannel,
        _ => AttackOrder::ChannelThenAttack,
    };
    let config = SessionConfig {
        scheme,
        num_rounds,
        check_fraction,
        e_max,
        channel,
        adversary,
        attack_order,
        seed: args.seed.unwrap_or(SessionConfig::DEFAULT_SEED),
        allow_low_statistics: args.allow_low_stats,
    };
    config.validate()?;
    Ok(config)
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn simulate(args: SessionArgs) -> Result<Output, CliError> {
    let args = load_session_args(args)?;
    let config = session_config(&args, SchemeArg::Preannounce)?;
    let start = Instant::now();
    let outcome = run_session(&config)?;
    let elapsed = start.elapsed().as_secs_f64() * 1e3;

    let mut report = RunReport::new(config, &outcome);
    if args.timing {
        report.wall_time_ms = Some(elapsed);
    }
    let verdict = if outcome.accepted { "accepted" } else { "rejected" };
    Ok(Output {
        stdout: to_json(&report),
        stderr: format!("{}: {verdict} in {elapsed:.1} ms\n", config.scheme.label()),
        code: if outcome.accepted { EXIT_OK } else { EXIT_REJECTED },
    })
}

fn attack_demo(args: SessionArgs) -> Result<Output, CliError> {
    let args = load_session_args(args)?;
    if args.scheme.is_some_and(|s| s != SchemeArg::Preannounce) {
        return Err(CliError::Usage("attack-demo only supports --scheme preannounce".into()));
    }
    if args.adversary.is_some() {
        return Err(CliError::Usage(
            "attack-demo runs its own adversaries; drop --adversary".into(),
        ));
    }
    let base = session_config(&args, SchemeArg::Preannounce)?;
    let adversaries = [
        ("none", AdversaryModel::None),
        (
            "random",
            AdversaryModel::InterceptResend(InterceptStrategy::RandomBasis),
        ),
        (
            "use-preannounced",
            AdversaryModel::InterceptResend(InterceptStrategy::UsePreAnnounced),
        ),
    ];

    let start = Instant::now();
    let outcomes: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = adversaries
            .iter()
            .enumerate()
            .map(|(i, &(_, adversary))| {
                let config = SessionConfig {
                    adversary,
                    seed: derive_seed(base.seed, i as u64),
                    ..base
                };
                scope.spawn(move || run_session(&config).map(|o| (config.seed, o)))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("session thread")).collect()
    });
    let elapsed = start.elapsed().as_secs_f64() * 1e3;

    let mut runs = Vec::with_capacity(adversaries.len());
    let mut stderr = String::new();
    for ((name, _), result) in adversaries.iter().zip(outcomes) {
        let (seed, outcome) = result?;
        let ErrorEstimates::PreAnnounce { c0, c1 } = outcome.estimates else {
            unreachable!("attack-demo always runs the pre-announce scheme")
        };
        let alpha = outcome
            .alpha
            .map(|a| a.to_string())
            .unwrap_or_else(|| "undefined".into());
        let _ = writeln!(stderr, "{name}: alpha = {alpha}");
        runs.push(AttackRun {
            adversary: name.to_string(),
            seed,
            accepted: outcome.accepted,
            e_c0: c0.rate(),
            e_c1: c1.rate(),
            n_c0: c0.samples,
            n_c1: c1.samples,
            alpha: outcome.alpha,
            sift_efficiency: outcome.sift_efficiency,
        });
    }
    let report = AttackDemoReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        config: base,
        runs,
        wall_time_ms: args.timing.then_some(elapsed),
    };
    Ok(Output {
        stdout: to_json(&report),
        stderr,
        code: EXIT_OK,
    })
}

fn sweep(args: SweepArgs) -> Result<Output, CliError> {
    if !(args.emax > 0.0 && args.emax < 0.5) {
        return Err(CliError::Usage(format!(
            "--emax must lie in (0, 0.5), got {}",
            args.emax
        )));
    }
    if !args.alpha.is_finite() || args.alpha <= 0.0 {
        return Err(CliError::Usage(format!(
            "--alpha must be positive and finite, got {}",
            args.alpha
        )));
    }
    let spec = GridSpec {
        x_min: args.x_min.unwrap_or(args.min),
        x_max: args.x_max.unwrap_or(args.max),
        z_min: args.z_min.unwrap_or(args.min),
        z_max: args.z_max.unwrap_or(args.max),
        step: args.step,
    };
    let grid = sweep_region(&spec, args.emax, args.alpha).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut out = String::with_capacity(24 * grid.cells.len());
    out.push_str("e_x,e_z,lca,preannounce,bb84\n");
    for c in &grid.cells {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            c.e_x, c.e_z, c.lca as u8, c.preannounce as u8, c.bb84 as u8
        );
    }
    let stderr = format!(
        "{} cells; accepted: lca {}, preannounce {}, bb84 {}\n",
        grid.cells.len(),
        grid.count_lca(),
        grid.count_preannounce(),
        grid.count_bb84()
    );
    Ok(Output {
        stdout: out,
        stderr,
        code: EXIT_OK,
    })
}

fn analytic(args: AnalyticArgs) -> Result<Output, CliError> {
    let profile = ChannelErrorProfile {
        ez_s0: probability("ez-s0", args.ez_s0)?,
        ez_s1: probability("ez-s1", args.ez_s1)?,
        ex_s0: probability("ex-s0", args.ex_s0)?,
        ex_s1: probability("ex-s1", args.ex_s1)?,
    };
    let p = open_probability("p", args.p)?;
    if !(args.emax > 0.0 && args.emax < 0.5) {
        return Err(CliError::Usage(format!(
            "--emax must lie in (0, 0.5), got {}",
            args.emax
        )));
    }
    let epp = epp_error_rates(&profile, p)?;
    let groups = group_error_rates(&profile);
    let (e_bit, e_phase) = epp_from_groups(&groups, p)?;
    let (e_z, e_x) = basis_error_rates(&profile);
    let region_verdict = region_accepts(
        e_x,
        e_z,
        RegionScheme::PreAnnounce {
            alpha: groups.alpha.value(),
        },
        args.emax,
    );
    let report = AnalyticReport {
        tool: TOOL.into(),
        version: VERSION.into(),
        inputs: AnalyticInputs {
            ez_s0: profile.ez_s0,
            ez_s1: profile.ez_s1,
            ex_s0: profile.ex_s0,
            ex_s1: profile.ex_s1,
            p,
            e_max: args.emax,
        },
        epp,
        groups,
        epp_from_groups: EppPair { e_bit, e_phase },
        e_z,
        e_x,
        sum_residual: (e_z + e_x) - (groups.e_c0 + groups.e_c1),
        group_criterion: groups.accepted(args.emax),
        region_verdict,
    };
    Ok(Output {
        stdout: to_json(&report),
        stderr: String::new(),
        code: EXIT_OK,
    })
}
