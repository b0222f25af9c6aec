use std::fs;
use std::path::Path;

use brc_core::fm::{check_projection_default, CodingTerms};
use brc_core::gaussian::{common_rate_lower, cutset_upper, GaussianBrcConfig};
use brc_core::region::{theorem1_region, InfoQuantities, MEMBERSHIP_TOL};
use brc_core::strategy::{fig3_sweep_on, fig4_sweep, private_frontier_on};
use brc_core::RateUnit;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid::GridSpec;
use crate::output::{fmt_g, Cell, RunManifest, Table};
use crate::{Cli, Command, Failure, LogBase};

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let unit = cli.log_base.map(|b| match b {
        LogBase::Two => RateUnit::Bits,
        LogBase::E => RateUnit::Nats,
    });
    let (name, config) = match &cli.command {
        Command::CommonRate { config, .. } => ("common-rate", Some(config)),
        Command::PrivateFrontier { config, .. } => ("private-frontier", Some(config)),
        Command::ExpectedRate { config, .. } => ("expected-rate", Some(config)),
        Command::Region { config, .. } => ("region", Some(config)),
        Command::FmVerify { .. } => ("fm-verify", None),
    };
    let mut manifest = RunManifest::new(name);
    manifest.config = config.map(|p| p.display().to_string());
    manifest.output = cli.out.as_ref().map(|p| p.display().to_string());

    let (text, verdict) = match &cli.command {
        Command::CommonRate { config, sweep } => (
            common_rate(manifest, &load_config(config, unit)?, sweep.as_ref())?,
            Ok(()),
        ),
        Command::PrivateFrontier {
            config,
            alpha_steps,
        } => (
            frontier(manifest, &load_config(config, unit)?, alpha_steps)?,
            Ok(()),
        ),
        Command::ExpectedRate {
            config,
            p_steps,
            alpha_steps,
        } => (
            expected_rate(manifest, &load_config(config, unit)?, p_steps, alpha_steps)?,
            Ok(()),
        ),
        Command::Region { config, point } => (region(manifest, config, point, unit)?, Ok(())),
        Command::FmVerify { samples, seed } => {
            fm_verify(manifest, *samples, *seed, unit.unwrap_or_default())?
        }
    };
    emit(cli.out.as_deref(), &text)?;
    verdict
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn load_config(path: &Path, unit: Option<RateUnit>) -> Result<GaussianBrcConfig<f64>, Failure> {
    let mut cfg = GaussianBrcConfig::<f64>::from_json(&read(path)?)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    if let Some(u) = unit {
        cfg.unit = u;
    }
    Ok(cfg)
}

fn common_rate(
    manifest: RunManifest,
    cfg: &GaussianBrcConfig<f64>,
    sweep: Option<&crate::grid::Sweep>,
) -> Result<String, Failure> {
    let manifest = manifest.param("unit", cfg.unit);
    let Some(sweep) = sweep else {
        let lower = common_rate_lower(cfg);
        let upper = cutset_upper(cfg);
        let mut t = Table::new(
            &manifest,
            &[
                "r0_lower",
                "beta_star",
                "r0_upper",
                "beta1_star",
                "beta2_star",
            ],
        );
        t.row(&[
            lower.r0.value.into(),
            lower.beta_star.into(),
            upper.r0_upper.value.into(),
            upper.beta1_star.into(),
            upper.beta2_star.into(),
        ]);
        return Ok(t.finish());
    };
    if sweep.name != "d1" {
        return Err(Failure::Usage(format!(
            "unknown sweep variable {:?}; only d1 is supported",
            sweep.name
        )));
    }
    let r = sweep.range;
    let manifest = manifest.param("sweep", format!("d1={}:{}:{}", r.start, r.stop, r.step));
    let table = fig4_sweep(cfg, &r.values());
    let mut t = Table::new(
        &manifest,
        &["d1", "r_df", "r_cf", "r0_proposed", "r_ts", "r0_upper"],
    );
    for row in &table.rows {
        t.row(&[
            row.d1.into(),
            row.r_df.into(),
            row.r_cf.into(),
            row.r0_proposed.into(),
            row.r_ts.into(),
            row.r0_upper.into(),
        ]);
    }
    for d1 in &table.skipped {
        t.comment(&format!("skipped d1={}: non-positive distance", fmt_g(*d1)));
    }
    Ok(t.finish())
}

fn frontier(
    manifest: RunManifest,
    cfg: &GaussianBrcConfig<f64>,
    alpha: &GridSpec,
) -> Result<String, Failure> {
    let manifest = manifest.param("unit", cfg.unit).param("alpha_steps", alpha);
    let points = private_frontier_on(cfg, &alpha_grid(alpha)?)?;
    let mut t = Table::new(
        &manifest,
        &[
            "alpha",
            "case",
            "r1_star",
            "r2_star",
            "beta_star",
            "lambda_star",
            "envelope",
        ],
    );
    for p in points {
        t.row(&[
            p.alpha.into(),
            Cell::Text(p.case.to_string()),
            p.best.r1_star.value.into(),
            p.best.r2_star.value.into(),
            p.best.beta_star.into(),
            p.best.lambda_star.map_or(Cell::Empty, Cell::Num),
            Cell::Text(if p.on_envelope { "1" } else { "0" }.into()),
        ]);
    }
    Ok(t.finish())
}

fn expected_rate(
    manifest: RunManifest,
    cfg: &GaussianBrcConfig<f64>,
    p: &GridSpec,
    alpha: &GridSpec,
) -> Result<String, Failure> {
    let manifest = manifest
        .param("unit", cfg.unit)
        .param("p_steps", p)
        .param("alpha_steps", alpha);
    let p_grid = p.values();
    if p_grid.is_empty() {
        return Err(Failure::Usage(
            "--p-steps must give at least one point".into(),
        ));
    }
    let rows = fig3_sweep_on(cfg, &p_grid, &alpha_grid(alpha)?)?;
    let mut t = Table::new(
        &manifest,
        &["p", "proposed", "df_only", "cf_only", "common_only"],
    );
    for r in rows {
        t.row(&[
            r.p.into(),
            r.proposed.into(),
            r.df_only.into(),
            r.cf_only.into(),
            r.common_only.into(),
        ]);
    }
    Ok(t.finish())
}

/// A count must give at least two power splits so both corners are present.
fn alpha_grid(spec: &GridSpec) -> Result<Vec<f64>, Failure> {
    match spec {
        GridSpec::Count(n) if *n < 2 => Err(Failure::Usage(format!(
            "--alpha-steps must be at least 2, got {n}"
        ))),
        _ => Ok(spec.values()),
    }
}

fn parse_point(s: &str) -> Result<[f64; 3], Failure> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let vals: Vec<f64> = parts
        .iter()
        .map(|t| t.parse::<f64>().ok().filter(|v| v.is_finite()))
        .collect::<Option<_>>()
        .ok_or_else(|| Failure::Usage(format!("malformed point {s:?}; expected r0,r1,r2")))?;
    vals.try_into()
        .map_err(|_| Failure::Usage(format!("point {s:?} must have exactly three rates")))
}

fn region(
    manifest: RunManifest,
    path: &Path,
    point: &str,
    unit: Option<RateUnit>,
) -> Result<String, Failure> {
    let point = parse_point(point)?;
    let text = read(path)?;
    let mut q: InfoQuantities<f64> = serde_json::from_str(&text)
        .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    q.validate()?;
    if let Some(u) = unit {
        let conv = |x: f64| u.from_nats(q.unit.to_nats(x));
        q = InfoQuantities {
            i1: conv(q.i1),
            i2: conv(q.i2),
            j1: conv(q.j1),
            j2: conv(q.j2),
            pen_u2_x1: conv(q.pen_u2_x1),
            pen_u1x1_u2: conv(q.pen_u1x1_u2),
            unit: u,
        };
    }
    let region = theorem1_region(&q);
    let member = region.contains(&point, MEMBERSHIP_TOL);
    let manifest = manifest.param("unit", q.unit).param(
        "point",
        format!(
            "{},{},{}",
            fmt_g(point[0]),
            fmt_g(point[1]),
            fmt_g(point[2])
        ),
    );
    let mut out = manifest.render();
    out.push_str(if member { "member\n" } else { "non-member\n" });
    out.push_str("inequality,slack\n");
    for (label, slack) in region.slacks(&point) {
        out.push_str(&format!("{label},{}\n", fmt_g(slack)));
    }
    Ok(out)
}

fn fm_verify(
    manifest: RunManifest,
    samples: u64,
    seed: u64,
    unit: RateUnit,
) -> Result<(String, Result<(), Failure>), Failure> {
    if samples == 0 {
        return Err(Failure::Usage("--samples must be at least 1".into()));
    }
    let manifest = manifest
        .param("samples", samples)
        .param("seed", seed)
        .param("grid_step", "0.05");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Table::new(&manifest, &["sample", "result", "admissible", "rows_after"]);
    let mut failed = 0u64;
    for k in 0..samples {
        let terms = CodingTerms::<f64>::sample(&mut rng);
        let check = check_projection_default(&terms, unit)?;
        let pass = check.agree && check.admissible;
        if !pass {
            failed += 1;
        }
        t.row(&[
            Cell::Text(k.to_string()),
            Cell::Text(if pass { "pass" } else { "fail" }.into()),
            Cell::Text(check.admissible.to_string()),
            Cell::Text(check.report.rows_after.to_string()),
        ]);
    }
    t.comment(&format!("passed: {} failed: {failed}", samples - failed));
    let verdict = if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{failed} of {samples} instances disagree"
        )))
    };
    Ok((t.finish(), verdict))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_parsing() {
        assert_eq!(parse_point("0.1, 0.2,0.3").unwrap(), [0.1, 0.2, 0.3]);
        for bad in ["", "1,2", "1,2,3,4", "a,b,c", "1,,3", "1,2,nan"] {
            assert!(matches!(parse_point(bad), Err(Failure::Usage(_))), "{bad}");
        }
    }
}
