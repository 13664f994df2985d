//! Acceptance suite. Every criterion runs at its pinned tolerance and prints
//! one PASS/FAIL line; run with `--nocapture` to see them:
//!
//!     cargo test -p paqkd-cli --test acceptance -- --nocapture

use std::process::Command;
use std::time::{Duration, Instant};

use paqkd_core::protocols::GroupEstimate;
use paqkd_core::seed::derive_seed;
use paqkd_core::{
    basis_error_rates, epp_error_rates, epp_from_groups, group_error_rates, region_accepts, run_session, sweep_region,
    AdversaryModel, Alpha, ChannelErrorProfile, ErrorEstimates, GridSpec, InterceptStrategy, PauliChannel,
    RegionScheme, Scheme, SessionConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn() -> Verdict);

fn check(cond: bool, what: String) -> Verdict {
    if cond {
        Ok(what)
    } else {
        Err(what)
    }
}

fn in_range(x: f64, lo: f64, hi: f64) -> bool {
    (lo..=hi).contains(&x)
}

fn rate(g: &GroupEstimate) -> f64 {
    g.rate().unwrap_or(f64::NAN)
}

const WORKED_E_Z: f64 = 0.15;
const WORKED_E_X: f64 = 0.05;
const WORKED_E_MAX: f64 = 0.11;

fn criterion_1_worked_example() -> Verdict {
    let ch = PauliChannel::from_error_rates(WORKED_E_Z, WORKED_E_X, 0.0).unwrap();
    let run = |scheme| {
        let cfg = SessionConfig::new(scheme, ch)
            .with_rounds(200_000)
            .with_e_max(WORKED_E_MAX);
        let t = Instant::now();
        let out = run_session(&cfg).unwrap();
        (out, t.elapsed())
    };
    let limit = Duration::from_secs(10);

    let (bb84, t_bb84) = run(Scheme::Bb84);
    let ErrorEstimates::Bb84 { pooled } = bb84.estimates else {
        unreachable!()
    };
    let (lca, t_lca) = run(Scheme::Lca { p: 0.9 });
    let ErrorEstimates::Lca { z, .. } = lca.estimates else {
        unreachable!()
    };
    let (pre, t_pre) = run(Scheme::PreAnnounce { p: 0.9 });
    let ErrorEstimates::PreAnnounce { c0, c1 } = pre.estimates else {
        unreachable!()
    };
    let alpha = pre.alpha.map(Alpha::value).unwrap_or(f64::NAN);

    let ok = bb84.accepted
        && in_range(rate(&pooled), 0.09, 0.11)
        && !lca.accepted
        && in_range(rate(&z), 0.14, 0.16)
        && pre.accepted
        && in_range(rate(&c0), 0.09, 0.11)
        && in_range(rate(&c1), 0.09, 0.11)
        && in_range(alpha, 0.85, 1.15)
        && [t_bb84, t_lca, t_pre].iter().all(|t| *t < limit);
    check(
        ok,
        format!(
            "bb84 accepted={} pooled={:.4} ({:?}); lca accepted={} e_Z={:.4} ({:?}); \
             preannounce accepted={} e_c0={:.4} e_c1={:.4} alpha={:.3} ({:?})",
            bb84.accepted,
            rate(&pooled),
            t_bb84,
            lca.accepted,
            rate(&z),
            t_lca,
            pre.accepted,
            rate(&c0),
            rate(&c1),
            alpha,
            t_pre
        ),
    )
}

fn criterion_2_identities() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut profile = || ChannelErrorProfile::new(rng.random(), rng.random(), rng.random(), rng.random()).unwrap();
    let mut worst_epp = 0.0f64;
    let mut worst_sum = 0.0f64;
    let mut p_rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10_000 {
        let pr = profile();
        let p = p_rng.random_range(1e-9..1.0 - 1e-9);
        let epp = epp_error_rates(&pr, p).unwrap();
        let groups = group_error_rates(&pr);
        let (bit, phase) = epp_from_groups(&groups, p).unwrap();
        worst_epp = worst_epp.max((bit - epp.e_bit).abs()).max((phase - epp.e_phase).abs());
        let (z, x) = basis_error_rates(&pr);
        worst_sum = worst_sum.max((z + x - groups.e_c0 - groups.e_c1).abs());
    }

    // counterexample search for: e_c0, e_c1 < e_max  =>  e_bit, e_phase < e_max,
    // with e_max drawn just above the larger group rate so the premise holds
    let mut search = ChaCha8Rng::seed_from_u64(4);
    let mut tested = 0usize;
    let mut counterexamples = 0usize;
    for _ in 0..100_000 {
        let pr = ChannelErrorProfile::new(
            search.random::<f64>() * 0.5,
            search.random::<f64>() * 0.5,
            search.random::<f64>() * 0.5,
            search.random::<f64>() * 0.5,
        )
        .unwrap();
        let p = search.random_range(1e-9..1.0 - 1e-9);
        let g = group_error_rates(&pr);
        let e_max = g.e_c0.max(g.e_c1) + search.random::<f64>() * 1e-3;
        if !g.accepted(e_max) {
            continue;
        }
        tested += 1;
        let epp = epp_error_rates(&pr, p).unwrap();
        if !(epp.e_bit < e_max && epp.e_phase < e_max) {
            counterexamples += 1;
        }
    }
    check(
        worst_epp <= 1e-12 && worst_sum <= 1e-12 && counterexamples == 0 && tested > 50_000,
        format!(
            "max |epp_from_groups - epp| = {worst_epp:.2e}, max sum residual = {worst_sum:.2e}, \
             {counterexamples} counterexamples in {tested} premise-satisfying samples"
        ),
    )
}

/// Exact-integer region oracle on the `k * step` grid, in units of 1e-4.
struct IntGrid {
    step_units: i64,
    e_max_units: i64,
}

impl IntGrid {
    fn lca(&self, i: i64, j: i64) -> bool {
        self.step_units * i < self.e_max_units && self.step_units * j < self.e_max_units
    }

    fn preannounce_alpha1(&self, i: i64, j: i64) -> bool {
        self.step_units * (i + j) < 2 * self.e_max_units
    }
}

fn index(v: f64, step: f64) -> i64 {
    (v / step).round() as i64
}

fn criterion_3_fig1() -> Verdict {
    let spec = GridSpec::square(0.0, 0.25, 0.005);
    let t = Instant::now();
    let grid = sweep_region(&spec, 0.11, 1.0).unwrap();
    let elapsed = t.elapsed();
    let oracle = IntGrid {
        step_units: 50,
        e_max_units: 1100,
    };
    let mut mismatches = 0;
    let mut lca_outside_pre = 0;
    for c in &grid.cells {
        let (i, j) = (index(c.e_x, 0.005), index(c.e_z, 0.005));
        if c.lca != oracle.lca(i, j) || c.preannounce != oracle.preannounce_alpha1(i, j) {
            mismatches += 1;
        }
        if c.lca && !c.preannounce {
            lca_outside_pre += 1;
        }
    }
    let (n_lca, n_pre) = (grid.count_lca(), grid.count_preannounce());
    check(
        grid.cells.len() == 51 * 51
            && mismatches == 0
            && lca_outside_pre == 0
            && n_lca < n_pre
            && elapsed < Duration::from_secs(1),
        format!(
            "{} cells, {mismatches} mismatches vs exact oracle, lca={n_lca} preannounce={n_pre}, \
             lca-not-in-preannounce={lca_outside_pre}, {elapsed:?}",
            grid.cells.len()
        ),
    )
}

fn criterion_4_alpha2() -> Verdict {
    let at2 = region_accepts(0.05, 0.15, RegionScheme::PreAnnounce { alpha: 2.0 }, 0.11);
    let at1 = region_accepts(0.05, 0.15, RegionScheme::PreAnnounce { alpha: 1.0 }, 0.11);
    check(!at2 && at1, format!("(0.05, 0.15): alpha=2 -> {at2}, alpha=1 -> {at1}"))
}

fn criterion_5_two_way() -> Verdict {
    let e_max = SessionConfig::TWO_WAY_E_MAX;
    let grid = sweep_region(&GridSpec::square(0.0, 0.25, 0.005), e_max, 1.0).unwrap();
    let oracle = IntGrid {
        step_units: 50,
        e_max_units: 1890,
    };
    let mismatches = grid
        .cells
        .iter()
        .filter(|c| c.preannounce != oracle.preannounce_alpha1(index(c.e_x, 0.005), index(c.e_z, 0.005)))
        .count();
    check(
        e_max == 0.189 && mismatches == 0,
        format!(
            "e_max={e_max}: {mismatches} cells disagree with e_x+e_z<0.378, preannounce={}",
            grid.count_preannounce()
        ),
    )
}

fn criterion_6_efficiency() -> Verdict {
    let t = Instant::now();
    let mut parts = Vec::new();
    let mut ok = true;
    for (scheme, target) in [
        (Scheme::Bb84, 0.5),
        (Scheme::Lca { p: 0.9 }, 0.82),
        (Scheme::PreAnnounce { p: 0.9 }, 0.9),
    ] {
        let cfg = SessionConfig::new(scheme, PauliChannel::identity()).with_rounds(1_000_000);
        let out = run_session(&cfg).unwrap();
        ok &= (out.sift_efficiency - target).abs() <= 0.005;
        parts.push(format!(
            "{}={:.4} (target {target})",
            scheme.label(),
            out.sift_efficiency
        ));
    }
    let elapsed = t.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    check(ok, format!("{}, {elapsed:?}", parts.join(", ")))
}

/// Exact `(e_c0, e_c1)` for a noiseless channel under intercept-resend,
/// enumerating Alice's basis, `c`, Eve's basis and Eve's outcome.
fn enumerate_attack(strategy: InterceptStrategy, p: f64) -> (f64, f64) {
    let (mut err, mut mass) = ([0.0f64; 2], [0.0f64; 2]);
    for b in 0..2u8 {
        for c in 0..2u8 {
            let pc = if c == 0 { p } else { 1.0 - p };
            let eve: Vec<(u8, f64)> = match strategy {
                InterceptStrategy::RandomBasis => vec![(0, 0.5), (1, 0.5)],
                InterceptStrategy::FixedBasis(basis) => vec![(basis.bit(), 1.0)],
                InterceptStrategy::UsePreAnnounced => vec![(b ^ c, 1.0)],
            };
            for (e, pe) in eve {
                let w = 0.5 * pc * pe;
                mass[c as usize] += w;
                // wrong-basis interception randomizes Bob's matched-basis bit
                err[c as usize] += if e == b { 0.0 } else { 0.5 * w };
            }
        }
    }
    (err[0] / mass[0], err[1] / mass[1])
}

fn criterion_7_attack_detection() -> Verdict {
    let run = |strategy| {
        let cfg = SessionConfig::new(Scheme::PreAnnounce { p: 0.9 }, PauliChannel::identity())
            .with_rounds(1_000_000)
            .with_adversary(AdversaryModel::InterceptResend(strategy));
        let out = run_session(&cfg).unwrap();
        let ErrorEstimates::PreAnnounce { c0, c1 } = out.estimates else {
            unreachable!()
        };
        (rate(&c0), rate(&c1), out.alpha)
    };
    let oracle_pre = enumerate_attack(InterceptStrategy::UsePreAnnounced, 0.9);
    let oracle_rnd = enumerate_attack(InterceptStrategy::RandomBasis, 0.9);

    let (p0, p1, p_alpha) = run(InterceptStrategy::UsePreAnnounced);
    let (r0, r1, r_alpha) = run(InterceptStrategy::RandomBasis);
    let r_alpha_v = r_alpha.map(Alpha::value).unwrap_or(f64::NAN);
    let ok = oracle_pre == (0.0, 0.5)
        && oracle_rnd == (0.25, 0.25)
        && p0 < 0.01
        && in_range(p1, 0.48, 0.52)
        && p_alpha == Some(Alpha::Infinite)
        && in_range(r0, 0.23, 0.27)
        && in_range(r1, 0.23, 0.27)
        && in_range(r_alpha_v, 0.9, 1.1);
    check(
        ok,
        format!(
            "use-preannounced: e_c0={p0:.4} e_c1={p1:.4} alpha={} (oracle {oracle_pre:?}); \
             random: e_c0={r0:.4} e_c1={r1:.4} alpha={r_alpha_v:.3} (oracle {oracle_rnd:?})",
            p_alpha.map(|a| a.to_string()).unwrap_or_default()
        ),
    )
}

fn cli_digest(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_paqkd"))
        .args(args)
        .output()
        .expect("spawn paqkd");
    (
        hex::encode(Sha256::digest(&out.stdout)),
        out.status.code().unwrap_or(-1),
    )
}

fn criterion_8_determinism() -> Verdict {
    let commands: [&[&str]; 5] = [
        &[
            "simulate",
            "--scheme",
            "preannounce",
            "--p",
            "0.9",
            "--ez",
            "0.15",
            "--ex",
            "0.05",
            "--emax",
            "0.11",
            "--rounds",
            "200000",
            "--seed",
            "7",
        ],
        &[
            "simulate",
            "--scheme",
            "bb84",
            "--ez",
            "0.02",
            "--ex",
            "0.03",
            "--loss",
            "0.3",
            "--adversary",
            "random",
            "--seed",
            "11",
        ],
        &[
            "sweep", "--emax", "0.11", "--alpha", "1", "--max", "0.25", "--step", "0.005",
        ],
        &["attack-demo", "--rounds", "100000", "--seed", "5"],
        &[
            "analytic", "--ez-s0", "0.1", "--ez-s1", "0.2", "--ex-s0", "0", "--ex-s1", "0.4", "--p", "0.7",
        ],
    ];
    let mut differing = Vec::new();
    for args in commands {
        let (a, code_a) = cli_digest(args);
        let (b, code_b) = cli_digest(args);
        if a != b || code_a != code_b || code_a == 1 {
            differing.push(args[0]);
        }
    }
    check(
        differing.is_empty(),
        format!(
            "{} commands run twice, differing stdout hashes: {differing:?}",
            commands.len()
        ),
    )
}

fn criterion_9_key_agreement() -> Verdict {
    let mut mismatches = 0;
    let mut rejected = 0;
    let mut sessions = 0;
    for scheme in [Scheme::Bb84, Scheme::Lca { p: 0.9 }, Scheme::PreAnnounce { p: 0.9 }] {
        for i in 0..100 {
            let cfg = SessionConfig {
                allow_low_statistics: true,
                ..SessionConfig::new(scheme, PauliChannel::identity())
                    .with_rounds(10_000)
                    .with_seed(derive_seed(9, i))
            };
            let out = run_session(&cfg).unwrap();
            sessions += 1;
            if !out.accepted || out.alice_key.is_empty() {
                rejected += 1;
            }
            if out.alice_key != out.bob_key {
                mismatches += 1;
            }
        }
    }
    check(
        mismatches == 0 && rejected == 0,
        format!("{sessions} sessions, {mismatches} key mismatches, {rejected} rejected/empty"),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 9] = [
        ("1 worked example (simulated)", criterion_1_worked_example),
        ("2 analytic identities", criterion_2_identities),
        ("3 region sweep e_max=0.11", criterion_3_fig1),
        ("4 alpha=2 verdict", criterion_4_alpha2),
        ("5 two-way threshold", criterion_5_two_way),
        ("6 sift efficiency", criterion_6_efficiency),
        ("7 attack detection", criterion_7_attack_detection),
        ("8 CLI determinism", criterion_8_determinism),
        ("9 key agreement", criterion_9_key_agreement),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(detail) => {
                println!("FAIL  criterion {name}: {detail}");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
