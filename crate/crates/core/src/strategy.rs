//! Expected rate of the two-state composite channel and the strategies
//! compared on it.
//!
//! With probability `p` the relay sits next to the source (branch 1 of the
//! BRC, served by DF); otherwise it sits next to the destination (branch 2,
//! served by CF). The transmitter does not know which state is active, so a
//! code is judged by `R_av = R0 + p R1 + (1 - p) R2`.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    case1_best, case2_best, common_rate_lower, cutset_upper, Branch, GaussianBrcConfig, PrivateBest,
};
use crate::info::{Rate, RateUnit};
use crate::num::{lit, Real};
pub use crate::optimize::maximize_1d;
use crate::optimize::COARSE_STEP;

/// Relay-decoding term counts as binding when it is below the direct term by
/// more than this.
pub const BIND_TOL: f64 = 1e-9;

/// Default number of power splits in the private frontier.
pub const DEFAULT_ALPHA_STEPS: usize = 101;
/// Default number of time-share coefficients between the common and private points.
pub const DEFAULT_MIX_STEPS: usize = 101;

/// The composite channel: one BRC whose branch 1 is the state "relay
/// collocated with the source" and branch 2 the state "relay collocated with
/// the destination", the first occurring with probability `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct CompositeModel<T> {
    pub p: T,
    pub brc: GaussianBrcConfig<T>,
}

impl<T: Real> CompositeModel<T> {
    pub fn new(p: T, brc: GaussianBrcConfig<T>) -> Result<Self> {
        if !(p >= T::zero() && p <= T::one()) {
            return Err(Error::InvalidArgument(format!(
                "probability p = {p} outside [0, 1]"
            )));
        }
        brc.validate()?;
        Ok(CompositeModel { p, brc })
    }

    /// Builds the model from one configuration per channel state: branch-1
    /// parameters come from `cfg1`, branch-2 parameters from `cfg2`. The
    /// source power, exponent and unit must agree.
    pub fn from_channel_configs(
        p: T,
        cfg1: &GaussianBrcConfig<T>,
        cfg2: &GaussianBrcConfig<T>,
    ) -> Result<Self> {
        for (field, a, b) in [("p", cfg1.p, cfg2.p), ("delta", cfg1.delta, cfg2.delta)] {
            if a != b {
                return Err(Error::InvalidConfig {
                    field: field.into(),
                    reason: format!("channel configs disagree ({a} vs {b})"),
                });
            }
        }
        if cfg1.unit != cfg2.unit {
            return Err(Error::MixedUnits(
                cfg1.unit.to_string(),
                cfg2.unit.to_string(),
            ));
        }
        let brc = GaussianBrcConfig {
            p2: cfg2.p2,
            n2: cfg2.n2,
            nt2: cfg2.nt2,
            d_y2: cfg2.d_y2,
            d_z2: cfg2.d_z2,
            d_z2y2: cfg2.d_z2y2,
            ..*cfg1
        };
        Self::new(p, brc)
    }

    pub fn unit(&self) -> RateUnit {
        self.brc.unit
    }

    /// Probability of the given channel state.
    pub fn probability(&self, which: Branch) -> T {
        match which {
            Branch::One => self.p,
            Branch::Two => T::one() - self.p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StrategyName {
    Proposed,
    DfOnly,
    CfOnly,
    TimeSharing,
    CommonOnly,
}

impl fmt::Display for StrategyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StrategyName::Proposed => "proposed",
            StrategyName::DfOnly => "df_only",
            StrategyName::CfOnly => "cf_only",
            StrategyName::TimeSharing => "time_sharing",
            StrategyName::CommonOnly => "common_only",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OperatingPoint<T> {
    Rates { r0: T, r1: T, r2: T },
    Tau(T),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrategyResult<T> {
    pub name: StrategyName,
    pub expected_rate: Rate<T>,
    pub operating_point: OperatingPoint<T>,
}

/// `r0 + p r1 + (1 - p) r2`, in `r0`'s unit.
pub fn expected_rate<T: Real>(
    model: &CompositeModel<T>,
    r0: Rate<T>,
    r1: Rate<T>,
    r2: Rate<T>,
) -> Rate<T> {
    let unit = r0.unit;
    let (r1, r2) = (r1.in_unit(unit), r2.in_unit(unit));
    Rate::new(
        r0.value + model.p * r1.value + (T::one() - model.p) * r2.value,
        unit,
    )
}

fn rates_result<T: Real>(
    model: &CompositeModel<T>,
    name: StrategyName,
    r0: T,
    r1: T,
    r2: T,
) -> StrategyResult<T> {
    let u = model.unit();
    StrategyResult {
        name,
        expected_rate: expected_rate(model, Rate::new(r0, u), Rate::new(r1, u), Rate::new(r2, u)),
        operating_point: OperatingPoint::Rates { r0, r1, r2 },
    }
}

/// Invest in one relaying scheme: either serve the better state at its own
/// rate (private message for that state only) or serve both at the worse
/// rate (common message). Ties in the per-state rates go to state 1.
fn single_scheme<T: Real>(
    model: &CompositeModel<T>,
    name: StrategyName,
    rate: impl Fn(Branch) -> T,
) -> StrategyResult<T> {
    let (r_1, r_2) = (rate(Branch::One), rate(Branch::Two));
    let (max_branch, r_max, r_min) = if r_1 >= r_2 {
        (Branch::One, r_1, r_2)
    } else {
        (Branch::Two, r_2, r_1)
    };
    let gamble = model.probability(max_branch) * r_max;
    if gamble > r_min {
        match max_branch {
            Branch::One => rates_result(model, name, T::zero(), r_max, T::zero()),
            Branch::Two => rates_result(model, name, T::zero(), T::zero(), r_max),
        }
    } else {
        rates_result(model, name, r_min, T::zero(), T::zero())
    }
}

/// DF used in both states.
pub fn baseline_df<T: Real>(model: &CompositeModel<T>) -> StrategyResult<T> {
    single_scheme(model, StrategyName::DfOnly, |b| {
        model.brc.branch(b).df_rate().0
    })
}

/// CF used in both states.
pub fn baseline_cf<T: Real>(model: &CompositeModel<T>) -> StrategyResult<T> {
    single_scheme(model, StrategyName::CfOnly, |b| {
        model.brc.branch(b).cf_rate()
    })
}

/// `max_tau min(tau r_df, (1 - tau) r_cf)` in closed form.
pub fn time_sharing<T: Real>(r_df: Rate<T>, r_cf: Rate<T>) -> (T, Rate<T>) {
    let unit = r_df.unit;
    let (a, b) = (r_df.value, r_cf.in_unit(unit).value);
    if a <= T::zero() || b <= T::zero() {
        return (T::zero(), Rate::zero(unit));
    }
    (b / (a + b), Rate::new(a * b / (a + b), unit))
}

/// [`time_sharing`] evaluated by the numerical maximizer instead of the closed form.
pub fn time_sharing_search<T: Real>(r_df: Rate<T>, r_cf: Rate<T>) -> (T, Rate<T>) {
    let unit = r_df.unit;
    let (a, b) = (r_df.value, r_cf.in_unit(unit).value);
    let (tau, v) = maximize_1d(
        |t: T| (t * a).min((T::one() - t) * b),
        lit(COARSE_STEP),
        lit(1e-10),
    );
    (tau, Rate::new(v, unit))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DpcCase {
    Case1,
    Case2,
}

impl fmt::Display for DpcCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DpcCase::Case1 => "1",
            DpcCase::Case2 => "2",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrontierPoint<T> {
    pub alpha: T,
    pub case: DpcCase,
    pub best: PrivateBest<T>,
    /// No other point of the frontier is at least as good in both rates and
    /// strictly better in one.
    pub on_envelope: bool,
}

/// Evenly spaced grid of `steps` points on `[0, 1]` (endpoints exact).
pub fn unit_grid<T: Real>(steps: usize) -> Vec<T> {
    match steps {
        0 => Vec::new(),
        1 => vec![T::zero()],
        n => (0..n)
            .map(|k| {
                if k + 1 == n {
                    T::one()
                } else {
                    lit::<T>(k as f64) / lit((n - 1) as f64)
                }
            })
            .collect(),
    }
}

/// Case-1 and Case-2 private rate pairs for `alpha_steps` power splits,
/// ordered by alpha then case, with the Pareto envelope flagged.
pub fn private_frontier<T: Real>(
    cfg: &GaussianBrcConfig<T>,
    alpha_steps: usize,
) -> Result<Vec<FrontierPoint<T>>> {
    if alpha_steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "alpha_steps must be at least 2, got {alpha_steps}"
        )));
    }
    private_frontier_on(cfg, &unit_grid(alpha_steps))
}

/// [`private_frontier`] on an explicit list of power splits.
pub fn private_frontier_on<T: Real>(
    cfg: &GaussianBrcConfig<T>,
    alphas: &[T],
) -> Result<Vec<FrontierPoint<T>>> {
    if alphas.is_empty() {
        return Err(Error::InvalidArgument("empty alpha grid".into()));
    }
    if let Some(a) = alphas
        .iter()
        .find(|a| !(**a >= T::zero() && **a <= T::one()))
    {
        return Err(Error::InvalidArgument(format!(
            "alpha = {a} outside [0, 1]"
        )));
    }
    let mut points: Vec<FrontierPoint<T>> = alphas
        .par_iter()
        .flat_map_iter(|&alpha| {
            [
                FrontierPoint {
                    alpha,
                    case: DpcCase::Case1,
                    best: case1_best(cfg, alpha),
                    on_envelope: false,
                },
                FrontierPoint {
                    alpha,
                    case: DpcCase::Case2,
                    best: case2_best(cfg, alpha),
                    on_envelope: false,
                },
            ]
        })
        .collect();
    flag_envelope(&mut points);
    Ok(points)
}

fn dominates<T: Real>(a: &PrivateBest<T>, b: &PrivateBest<T>) -> bool {
    let (a1, a2, b1, b2) = (
        a.r1_star.value,
        a.r2_star.value,
        b.r1_star.value,
        b.r2_star.value,
    );
    a1 >= b1 && a2 >= b2 && (a1 > b1 || a2 > b2)
}

fn flag_envelope<T: Real>(points: &mut [FrontierPoint<T>]) {
    let flags: Vec<bool> = points
        .iter()
        .map(|p| !points.iter().any(|q| dominates(&q.best, &p.best)))
        .collect();
    for (p, f) in points.iter_mut().zip(flags) {
        p.on_envelope = f;
    }
}

/// Inputs of [`proposed_expected`] that do not depend on `p`.
#[derive(Debug, Clone)]
pub struct ProposedInputs<T> {
    pub common: T,
    pub frontier: Vec<FrontierPoint<T>>,
    pub mix_steps: usize,
}

impl<T: Real> ProposedInputs<T> {
    pub fn new(cfg: &GaussianBrcConfig<T>, alphas: &[T], mix_steps: usize) -> Result<Self> {
        Ok(ProposedInputs {
            common: common_rate_lower(cfg).r0.value,
            frontier: private_frontier_on(cfg, alphas)?,
            mix_steps,
        })
    }

    /// Best expected rate at probability `p` over the common-only point, the
    /// private-only frontier, and time-shared mixtures of the two.
    pub fn evaluate(&self, model: &CompositeModel<T>) -> StrategyResult<T> {
        let zero = T::zero();
        let mut best = rates_result(model, StrategyName::Proposed, self.common, zero, zero);
        let mut consider = |r0: T, r1: T, r2: T| {
            let cand = rates_result(model, StrategyName::Proposed, r0, r1, r2);
            if cand.expected_rate.value > best.expected_rate.value {
                best = cand;
            }
        };
        let ts = unit_grid::<T>(self.mix_steps.max(2));
        for point in self.frontier.iter().filter(|p| p.on_envelope) {
            let (r1, r2) = (point.best.r1_star.value, point.best.r2_star.value);
            for &t in &ts {
                let s = T::one() - t;
                consider(t * self.common, s * r1, s * r2);
            }
        }
        best
    }
}

/// Best expected rate of the mixed DF/CF code with default search grids.
pub fn proposed_expected<T: Real>(model: &CompositeModel<T>) -> StrategyResult<T> {
    ProposedInputs::new(
        &model.brc,
        &unit_grid(DEFAULT_ALPHA_STEPS),
        DEFAULT_MIX_STEPS,
    )
    .expect("default alpha grid is valid")
    .evaluate(model)
}

/// Common message only: both destinations decode at `min(R_DF, R_CF)`.
pub fn common_only<T: Real>(model: &CompositeModel<T>) -> StrategyResult<T> {
    let r0 = common_rate_lower(&model.brc).r0.value;
    rates_result(model, StrategyName::CommonOnly, r0, T::zero(), T::zero())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig3Row<T> {
    pub p: T,
    pub proposed: T,
    pub df_only: T,
    pub cf_only: T,
    pub common_only: T,
}

/// Expected rate of each strategy over a grid of state probabilities.
pub fn fig3_sweep<T: Real>(
    cfg: &GaussianBrcConfig<T>,
    p_grid: &[T],
    alpha_steps: usize,
) -> Result<Vec<Fig3Row<T>>> {
    if alpha_steps < 2 {
        return Err(Error::InvalidArgument(format!(
            "alpha_steps must be at least 2, got {alpha_steps}"
        )));
    }
    fig3_sweep_on(cfg, p_grid, &unit_grid(alpha_steps))
}

/// [`fig3_sweep`] with an explicit list of power splits for the private frontier.
pub fn fig3_sweep_on<T: Real>(
    cfg: &GaussianBrcConfig<T>,
    p_grid: &[T],
    alphas: &[T],
) -> Result<Vec<Fig3Row<T>>> {
    for &p in p_grid {
        CompositeModel::new(p, *cfg)?;
    }
    let inputs = ProposedInputs::new(cfg, alphas, DEFAULT_MIX_STEPS)?;
    let common = inputs.common;
    let df: Vec<T> = [Branch::One, Branch::Two]
        .iter()
        .map(|&b| cfg.branch(b).df_rate().0)
        .collect();
    let cf: Vec<T> = [Branch::One, Branch::Two]
        .iter()
        .map(|&b| cfg.branch(b).cf_rate())
        .collect();
    Ok(p_grid
        .par_iter()
        .map(|&p| {
            let model = CompositeModel { p, brc: *cfg };
            let pick = |rates: &[T]| {
                single_scheme(&model, StrategyName::DfOnly, |b| rates[b as usize])
                    .expected_rate
                    .value
            };
            Fig3Row {
                p,
                proposed: inputs.evaluate(&model).expected_rate.value,
                df_only: pick(&df),
                cf_only: pick(&cf),
                common_only: common,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig4Row<T> {
    pub d1: T,
    pub r_df: T,
    pub r_cf: T,
    pub r0_proposed: T,
    pub r_ts: T,
    pub r0_upper: T,
    pub beta_star: T,
    /// At `beta_star` the relay-decoding term alone limits `r_df`.
    pub relay_term_binds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig4Table<T> {
    pub rows: Vec<Fig4Row<T>>,
    /// Grid values whose geometry has a non-positive distance.
    pub skipped: Vec<T>,
}

/// Common-rate bounds as relay 1 moves along the source-destination segment.
pub fn fig4_sweep<T: Real>(cfg: &GaussianBrcConfig<T>, d1_grid: &[T]) -> Fig4Table<T> {
    let rows: Vec<std::result::Result<Fig4Row<T>, T>> = d1_grid
        .par_iter()
        .map(|&d1| {
            let cfg = cfg.with_relay1_position(d1).map_err(|_| d1)?;
            let lower = common_rate_lower(&cfg);
            let (r_df, r_cf) = (lower.r_df, lower.r_cf);
            let (relay, direct) = cfg.branch(Branch::One).df_terms(lower.beta_star);
            Ok(Fig4Row {
                d1,
                r_df: r_df.value,
                r_cf: r_cf.value,
                r0_proposed: lower.r0.value,
                r_ts: time_sharing(r_df, r_cf).1.value,
                r0_upper: cutset_upper(&cfg).r0_upper.value,
                beta_star: lower.beta_star,
                relay_term_binds: relay + lit(BIND_TOL) < direct,
            })
        })
        .collect();
    let mut table = Fig4Table {
        rows: Vec::new(),
        skipped: Vec::new(),
    };
    for r in rows {
        match r {
            Ok(row) => table.rows.push(row),
            Err(d1) => table.skipped.push(d1),
        }
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn model(p: f64) -> CompositeModel<f64> {
        CompositeModel::new(p, GaussianBrcConfig::fig3(2.0)).unwrap()
    }

    fn bits(v: f64) -> Rate<f64> {
        Rate::new(v, RateUnit::Bits)
    }

    #[test]
    fn expected_rate_examples() {
        assert_abs_diff_eq!(
            expected_rate(&model(0.5), bits(1.0), bits(1.0), bits(1.0)).value,
            2.0
        );
        assert_abs_diff_eq!(
            expected_rate(&model(1.0), bits(0.0), bits(0.7), bits(9.0)).value,
            0.7
        );
        assert_abs_diff_eq!(
            expected_rate(&model(0.3), bits(0.5), bits(1.0), bits(2.0)).value,
            2.2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn model_rejects_bad_probability() {
        assert!(CompositeModel::new(1.5, GaussianBrcConfig::<f64>::unit_instance()).is_err());
        assert!(CompositeModel::new(f64::NAN, GaussianBrcConfig::<f64>::unit_instance()).is_err());
    }

    #[test]
    fn time_sharing_examples() {
        let (tau, r) = time_sharing(bits(2.0), bits(1.0));
        assert_abs_diff_eq!(tau, 1.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r.value, 2.0 / 3.0, epsilon = 1e-12);
        let (tau, r) = time_sharing(bits(0.8), bits(0.8));
        assert_abs_diff_eq!(tau, 0.5);
        assert_abs_diff_eq!(r.value, 0.4);
        assert_eq!(time_sharing(bits(0.0), bits(5.0)).1.value, 0.0);
        let (tau, r) = time_sharing_search(bits(2.0), bits(1.0));
        assert_abs_diff_eq!(tau, 1.0 / 3.0, epsilon = 1e-6);
        assert_abs_diff_eq!(r.value, 2.0 / 3.0, epsilon = 1e-6);
    }

    #[test]
    fn identical_states_make_df_modes_coincide() {
        let mut cfg = GaussianBrcConfig::<f64>::unit_instance();
        cfg.p2 = cfg.p1;
        let m = CompositeModel::new(0.5, cfg).unwrap();
        let r = m.brc.branch(Branch::One).df_rate().0;
        assert_abs_diff_eq!(baseline_df(&m).expected_rate.value, r, epsilon = 1e-12);
    }

    #[test]
    fn df_baseline_hand_evaluation() {
        let m = model(0.5);
        let r1 = m.brc.branch(Branch::One).df_rate().0;
        let r2 = m.brc.branch(Branch::Two).df_rate().0;
        let hand = (0.5 * r1.max(r2)).max(r1.min(r2));
        assert_abs_diff_eq!(baseline_df(&m).expected_rate.value, hand, epsilon = 1e-12);
        // p = 1: only state 1 ever occurs.
        assert_abs_diff_eq!(
            baseline_df(&model(1.0)).expected_rate.value,
            r1,
            epsilon = 1e-12
        );
    }

    #[test]
    fn private_frontier_endpoints() {
        let cfg = GaussianBrcConfig::<f64>::fig3(2.0);
        let f = private_frontier(&cfg, 11).unwrap();
        assert_eq!(f.len(), 22);
        for p in f.iter().filter(|p| p.alpha == 0.0) {
            assert_eq!(p.best.r1_star.value, 0.0);
        }
        for p in f.iter().filter(|p| p.alpha == 1.0) {
            assert_eq!(p.best.r2_star.value, 0.0);
        }
        assert!(private_frontier(&cfg, 1).is_err());
    }

    #[test]
    fn proposed_covers_corners() {
        for p in [0.0, 0.5, 1.0] {
            let m = model(p);
            let prop = proposed_expected(&m).expected_rate.value;
            assert!(prop >= common_only(&m).expected_rate.value - 1e-9);
            if p == 1.0 {
                assert!(prop >= baseline_df(&m).expected_rate.value - 1e-9);
            }
            if p == 0.0 {
                assert!(prop >= baseline_cf(&m).expected_rate.value - 1e-9);
            }
        }
    }

    #[test]
    fn fig4_skips_nonpositive_distances() {
        let cfg = GaussianBrcConfig::<f64>::fig4(1.0, 0.5).unwrap();
        let table = fig4_sweep(&cfg, &[-0.5, 0.0, 0.25, 0.5, 1.0]);
        assert_eq!(table.skipped, vec![-0.5, 0.0, 1.0]);
        assert_eq!(
            table.rows.iter().map(|r| r.d1).collect::<Vec<_>>(),
            vec![0.25, 0.5]
        );
        assert!(table.rows[1].relay_term_binds);
        assert!(!table.rows[0].relay_term_binds);
    }

    #[test]
    fn unit_grid_endpoints() {
        let g = unit_grid::<f64>(11);
        assert_eq!(g.len(), 11);
        assert_eq!((g[0], g[10]), (0.0, 1.0));
        assert_abs_diff_eq!(g[3], 0.3, epsilon = 1e-15);
    }
}
