use brc_core::gaussian::{Branch, GaussianBrcConfig};
use brc_core::info::{Rate, RateUnit};
use brc_core::strategy::{
    baseline_cf, baseline_df, common_only, fig3_sweep, fig4_sweep, proposed_expected, time_sharing,
    time_sharing_search, unit_grid, CompositeModel, StrategyName, DEFAULT_ALPHA_STEPS,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Cfg = GaussianBrcConfig<f64>;

fn bits(v: f64) -> Rate<f64> {
    Rate::new(v, RateUnit::Bits)
}

#[test]
fn time_sharing_search_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..100 {
        let (a, b) = (rng.gen_range(0.01..5.0), rng.gen_range(0.01..5.0));
        let (tau, r) = time_sharing(bits(a), bits(b));
        let (tau_s, r_s) = time_sharing_search(bits(a), bits(b));
        assert!((r.value - a * b / (a + b)).abs() <= 1e-12);
        assert!((r.value - r_s.value).abs() <= 1e-6);
        assert!((tau - tau_s).abs() <= 1e-6);
    }
}

#[test]
fn fig3_proposed_dominates_every_baseline() {
    for delta in [1.0, 2.0] {
        let cfg = Cfg::fig3(delta);
        let grid = unit_grid::<f64>(101);
        let rows = fig3_sweep(&cfg, &grid, DEFAULT_ALPHA_STEPS).unwrap();
        assert_eq!(rows.iter().map(|r| r.p).collect::<Vec<_>>(), grid);
        for r in &rows {
            let best = r.df_only.max(r.cf_only).max(r.common_only);
            assert!(r.proposed >= best - 1e-9, "delta {delta}, p {}: {r:?}", r.p);
            assert_eq!(r.common_only, rows[0].common_only);
        }
        for w in rows.windows(3) {
            assert!(w[1].proposed <= 0.5 * (w[0].proposed + w[2].proposed) + 1e-9);
        }
    }
}

#[test]
fn sweep_rows_agree_with_single_evaluations() {
    let cfg = Cfg::fig3(2.0);
    let rows = fig3_sweep(&cfg, &[0.25], DEFAULT_ALPHA_STEPS).unwrap();
    let m = CompositeModel::new(0.25, cfg).unwrap();
    assert!((rows[0].df_only - baseline_df(&m).expected_rate.value).abs() <= 1e-15);
    assert!((rows[0].cf_only - baseline_cf(&m).expected_rate.value).abs() <= 1e-15);
    assert!((rows[0].common_only - common_only(&m).expected_rate.value).abs() <= 1e-15);
    let prop = proposed_expected(&m);
    assert_eq!(prop.name, StrategyName::Proposed);
    assert!((rows[0].proposed - prop.expected_rate.value).abs() <= 1e-12);
}

#[test]
fn cf_baseline_mirrors_df() {
    let cfg = Cfg::fig3(2.0);
    let c1 = cfg.branch(Branch::One).cf_rate();
    let c2 = cfg.branch(Branch::Two).cf_rate();
    let half = baseline_cf(&CompositeModel::new(0.5, cfg).unwrap())
        .expected_rate
        .value;
    assert!((half - (0.5 * c1.max(c2)).max(c1.min(c2))).abs() <= 1e-12);
    let zero = baseline_cf(&CompositeModel::new(0.0, cfg).unwrap())
        .expected_rate
        .value;
    assert!((zero - c2).abs() <= 1e-12);
}

#[test]
fn fig4_rowwise_identities() {
    let cfg = Cfg::fig4(1.0, 0.5).unwrap();
    let grid: Vec<f64> = (0..=18).map(|k| 0.05 + 0.05 * k as f64).collect();
    let table = fig4_sweep(&cfg, &grid);
    assert!(table.skipped.is_empty());
    assert_eq!(table.rows.len(), 19);
    for r in &table.rows {
        assert_eq!(r.r0_proposed, r.r_df.min(r.r_cf));
        assert!(r.r0_proposed >= r.r_ts);
        if r.r_df > 0.0 && r.r_cf > 0.0 {
            assert!(r.r0_proposed > r.r_ts);
        }
        assert!(r.r0_upper >= r.r0_proposed - 1e-9);
    }
    let binding: Vec<_> = table.rows.iter().filter(|r| r.relay_term_binds).collect();
    assert!(!binding.is_empty());
    for w in binding.windows(2) {
        assert!(w[1].r_df < w[0].r_df);
    }
}

#[test]
fn composite_from_two_channel_configs() {
    let fig3 = Cfg::fig3(2.0);
    let state1 = Cfg { d_y2: 7.0, ..fig3 };
    let state2 = Cfg { d_y1: 7.0, ..fig3 };
    let m = CompositeModel::from_channel_configs(0.4, &state1, &state2).unwrap();
    assert_eq!(m.brc, fig3);
    let other = Cfg { delta: 1.0, ..fig3 };
    assert!(CompositeModel::from_channel_configs(0.4, &fig3, &other).is_err());
}
