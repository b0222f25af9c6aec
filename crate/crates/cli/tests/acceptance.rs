//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use brc_core::gaussian::{
    case1_rates, case2_rates, common_rate_bounds, common_rate_lower, compression_noise,
    cutset_upper, DpcParams, GaussianBrcConfig,
};
use brc_core::info::{FiniteJointDistribution, RateUnit};
use brc_core::strategy::{
    fig3_sweep, fig4_sweep, time_sharing, time_sharing_search, unit_grid, DEFAULT_ALPHA_STEPS,
};
use brc_core::Rate;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

type Cfg = GaussianBrcConfig<f64>;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}

fn brc(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_brc"))
        .args(args)
        .current_dir(root())
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("run brc")
}

fn fm_equivalence() -> Outcome {
    let o = brc(&["fm-verify", "--seed", "7", "--samples", "100"]);
    let text = String::from_utf8_lossy(&o.stdout);
    let summary = text
        .lines()
        .find(|l| l.starts_with("# passed:"))
        .unwrap_or("no summary")
        .to_string();
    outcome(
        o.status.code() == Some(0) && summary == "# passed: 100 failed: 0",
        summary,
    )
}

fn info_identities() -> Outcome {
    const TOL: f64 = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..500 {
        let sizes: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=4)).collect();
        let len = sizes.iter().product();
        let w: Vec<f64> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.2) {
                    0.0
                } else {
                    rng.gen::<f64>()
                }
            })
            .collect();
        let Ok(pd) = FiniteJointDistribution::from_weights(["X", "Y", "Z"], sizes, w) else {
            continue;
        };
        let i = |a: &[&str], b: &[&str], c: &[&str]| {
            pd.conditional_mutual_information(a, b, c, RateUnit::Bits)
                .unwrap()
                .value
        };
        let chain =
            (i(&["X"], &["Y", "Z"], &[]) - i(&["X"], &["Y"], &[]) - i(&["X"], &["Z"], &["Y"]))
                .abs();
        let sym = (i(&["X"], &["Y"], &["Z"]) - i(&["Y"], &["X"], &["Z"])).abs();
        let neg = [
            i(&["X"], &["Y"], &["Z"]),
            i(&["Y"], &["Z"], &["X"]),
            i(&["X"], &["Z"], &[]),
        ]
        .iter()
        .map(|v| (-v).max(0.0))
        .fold(0.0, f64::max);
        worst = worst.max(chain).max(sym).max(neg);
    }
    outcome(
        worst <= TOL,
        format!("500 distributions, worst violation {worst:.2e} (tol {TOL:.0e})"),
    )
}

fn closed_forms() -> Outcome {
    let unit = Cfg::unit_instance();
    let n_hat = compression_noise(&unit).n_hat2;
    let t = common_rate_bounds(&unit, 1.0);
    let cf_oracle = 0.5 * (1.0 + 10.0 + 10.0 / 3.1f64).log2();
    let (tau, r_ts) = time_sharing(
        Rate::new(2.0, RateUnit::Bits),
        Rate::new(1.0, RateUnit::Bits),
    );
    let (tau_s, r_ts_s) = time_sharing_search(
        Rate::new(2.0, RateUnit::Bits),
        Rate::new(1.0, RateUnit::Bits),
    );
    let checks = [
        (n_hat - 2.1).abs() <= 1e-9,
        (t.r_df_relay.value - 0.5 * 11f64.log2()).abs() <= 1e-9,
        (t.r_cf.value - cf_oracle).abs() <= 1e-9,
        (tau - 1.0 / 3.0).abs() <= 1e-6 && (r_ts.value - 2.0 / 3.0).abs() <= 1e-6,
        (tau_s - tau).abs() <= 1e-6 && (r_ts_s.value - r_ts.value).abs() <= 1e-6,
    ];
    outcome(
        checks.iter().all(|&c| c),
        format!(
            "N^2 = {n_hat:.12}, r_df_relay = {:.12}, r_cf = {:.12} (C(10 + 10/3.1) = {cf_oracle:.12}), tau* = {tau_s:.9}, R_TS = {:.9}",
            t.r_df_relay.value, t.r_cf.value, r_ts_s.value
        ),
    )
}

fn bound_dominance() -> Outcome {
    let powers = [1.0, 10f64.sqrt(), 10.0, 1000f64.sqrt(), 100.0];
    let deltas = [1.0, 1.5, 2.0, 2.5, 3.0];
    // (d_z1, d_z1y1, d_z2, d_z2y2) with the destinations at unit distance.
    let geometries = [
        (0.2, 0.8, 0.8, 0.2),
        (0.5, 0.5, 0.5, 0.5),
        (0.8, 0.2, 0.2, 0.8),
        (1.0, 2.0, 0.9, 0.1),
        (0.1, 1.5, 1.5, 0.1),
    ];
    let mut cells = 0;
    let mut worst = f64::INFINITY;
    for &p in &powers {
        for &delta in &deltas {
            for &(d_z1, d_z1y1, d_z2, d_z2y2) in &geometries {
                let cfg = Cfg {
                    p,
                    p1: p,
                    p2: p,
                    d_z1,
                    d_z1y1,
                    d_z2,
                    d_z2y2,
                    delta,
                    ..Cfg::unit_instance()
                };
                let gap = cutset_upper(&cfg).r0_upper.value - common_rate_lower(&cfg).r0.value;
                worst = worst.min(gap);
                cells += 1;
            }
        }
    }
    outcome(
        worst >= -1e-9,
        format!("{cells} configurations, smallest upper - lower = {worst:.3e}"),
    )
}

fn fig4() -> Outcome {
    let cfg = Cfg::fig4(1.0, 0.5).unwrap();
    let grid: Vec<f64> = (0..201).map(|k| 0.05 + 0.9 * k as f64 / 200.0).collect();
    let table = fig4_sweep(&cfg, &grid);
    let mut ok = table.skipped.is_empty() && table.rows.len() == 201;
    for r in &table.rows {
        ok &= r.r0_proposed == r.r_df.min(r.r_cf) && r.r0_proposed >= r.r_ts;
        if r.r_df > 0.0 && r.r_cf > 0.0 {
            ok &= r.r0_proposed > r.r_ts;
        }
    }
    let binding: Vec<_> = table.rows.iter().filter(|r| r.relay_term_binds).collect();
    let decreasing = binding.windows(2).all(|w| w[1].r_df < w[0].r_df);
    ok &= binding.len() >= 2 && decreasing;
    let first = binding.first().map_or(f64::NAN, |r| r.d1);
    outcome(
        ok,
        format!("{} rows, relay term binds on {} rows from d1 = {first:.4}, R_DF strictly decreasing there: {decreasing}", table.rows.len(), binding.len()),
    )
}

fn fig3() -> Outcome {
    let grid = unit_grid::<f64>(101);
    let mut ok = true;
    let mut margin = f64::INFINITY;
    for delta in [1.0, 2.0] {
        let rows = fig3_sweep(&Cfg::fig3(delta), &grid, DEFAULT_ALPHA_STEPS).unwrap();
        for r in &rows {
            let gap = r.proposed - r.df_only.max(r.cf_only).max(r.common_only);
            margin = margin.min(gap);
            ok &= gap >= -1e-9 && r.common_only == rows[0].common_only;
        }
        ok &= rows
            .windows(3)
            .all(|w| w[1].proposed <= 0.5 * (w[0].proposed + w[2].proposed) + 1e-9);
    }
    outcome(
        ok,
        format!("delta in {{1, 2}}, 101 points each, min(proposed - best baseline) = {margin:.3e}"),
    )
}

fn case_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let mut u = |lo: f64, hi: f64| rng.gen_range(lo..hi);
        let cfg = Cfg {
            p: u(0.5, 50.0),
            p1: u(0.5, 50.0),
            p2: u(0.5, 50.0),
            n2: u(0.2, 2.0),
            nt2: u(0.2, 2.0),
            d_y2: u(0.2, 3.0),
            d_z2: u(0.2, 3.0),
            d_z2y2: u(0.2, 3.0),
            delta: u(1.0, 3.0),
            ..Cfg::unit_instance()
        };
        let alpha = u(0.0, 1.0);
        let lambda = u(0.0, 1.0);
        let a = case1_rates(
            &cfg,
            &DpcParams {
                alpha,
                beta: 0.0,
                lambda: 0.0,
            },
        )
        .r2
        .value;
        let b = case2_rates(
            &cfg,
            &DpcParams {
                alpha,
                beta: 0.0,
                lambda,
            },
        )
        .r2
        .value;
        worst = worst.max((a - b).abs());
    }
    outcome(
        worst <= 1e-12,
        format!("50 draws, max |r2 case 2 - r2 case 1| = {worst:.2e}"),
    )
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 6] = [
        &["common-rate", "--config", "configs/unit.json"],
        &[
            "common-rate",
            "--config",
            "configs/fig4_delta1.json",
            "--sweep",
            "d1=0.05:0.95:0.05",
        ],
        &[
            "private-frontier",
            "--config",
            "configs/fig3_delta2.json",
            "--alpha-steps",
            "21",
        ],
        &[
            "expected-rate",
            "--config",
            "configs/fig3_delta1.json",
            "--p-steps",
            "21",
            "--alpha-steps",
            "21",
        ],
        &[
            "region",
            "--config",
            "configs/quantities.json",
            "--point",
            "0.5,0.5,0.5",
        ],
        &["fm-verify", "--samples", "20", "--seed", "3"],
    ];
    let mut same = 0;
    for args in runs {
        let digest = || Sha256::digest(brc(args).stdout);
        if digest() == digest() {
            same += 1;
        }
    }
    outcome(
        same == runs.len(),
        format!(
            "{same}/{} invocations byte-identical across two runs (SHA-256)",
            runs.len()
        ),
    )
}

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        (
            "1 FM elimination matches the region (seed 7, 100 instances)",
            Some(Duration::from_secs(30)),
            fm_equivalence,
        ),
        (
            "2 information identities on 500 random distributions",
            Some(Duration::from_secs(5)),
            info_identities,
        ),
        ("3 closed-form values", None, closed_forms),
        (
            "4 cut-set upper bound >= common-rate lower bound",
            Some(Duration::from_secs(60)),
            bound_dominance,
        ),
        (
            "5 common-rate sweep (delta = 1)",
            Some(Duration::from_secs(10)),
            fig4,
        ),
        (
            "6 expected-rate sweep (delta = 1, 2)",
            Some(Duration::from_secs(60)),
            fig3,
        ),
        (
            "7 case-1 / case-2 consistency at beta = 0",
            None,
            case_consistency,
        ),
        ("8 byte-identical CLI output", None, determinism),
    ];
    let mut failures = 0;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let pass = result.pass && in_time;
        if !pass {
            failures += 1;
        }
        let budget = limit.map_or(String::new(), |l| format!(" / {}s", l.as_secs()));
        println!(
            "[{}] {name}: {} ({:.2}s{budget})",
            if pass { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    println!(
        "acceptance: {} passed, {failures} failed",
        criteria.len() - failures
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
