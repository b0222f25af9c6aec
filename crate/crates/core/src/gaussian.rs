//! Closed-form rates for the Gaussian broadcast relay channel.
//!
//! ```text
//! Y1 = X/sqrt(d_y1^δ) + X1/sqrt(d_z1y1^δ) + N1      Z1 = X/sqrt(d_z1^δ) + Ñ1
//! Y2 = X/sqrt(d_y2^δ) + X2/sqrt(d_z2y2^δ) + N2      Z2 = X/sqrt(d_z2^δ) + Ñ2
//! ```
//!
//! Branch 1 relays by DF, branch 2 by CF with `Ẑ2 = Z2 + N̂2`. Every rate is
//! `C(x) = 1/2 log(1 + x)` of some effective SNR, in the config's unit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{gaussian_capacity, Rate, RateUnit};
use crate::num::{lit, Real};
use crate::optimize::{maximize_1d, maximize_2d, COARSE_STEP, REFINE_TOL};

/// Parameter resolution of the 1-D golden-section stage. Finer than the
/// 2-D refinement because it costs only a few dozen extra evaluations.
pub const REFINE_TOL_1D: f64 = 1e-9;

fn default_delta<T: Real>() -> T {
    lit(2.0)
}

/// Powers, noise variances, distances and path-loss exponent of the channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, bound(deserialize = "T: Real + Deserialize<'de>"))]
pub struct GaussianBrcConfig<T> {
    pub p: T,
    pub p1: T,
    pub p2: T,
    pub n1: T,
    pub n2: T,
    pub nt1: T,
    pub nt2: T,
    pub d_y1: T,
    pub d_y2: T,
    pub d_z1: T,
    pub d_z2: T,
    pub d_z1y1: T,
    pub d_z2y2: T,
    #[serde(default = "default_delta")]
    pub delta: T,
    #[serde(default)]
    pub unit: RateUnit,
}

/// A source-relay-destination link of the channel geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    Y1,
    Y2,
    Z1,
    Z2,
    Z1Y1,
    Z2Y2,
}

impl FromStr for Link {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "y1" => Ok(Link::Y1),
            "y2" => Ok(Link::Y2),
            "z1" => Ok(Link::Z1),
            "z2" => Ok(Link::Z2),
            "z1y1" => Ok(Link::Z1Y1),
            "z2y2" => Ok(Link::Z2Y2),
            other => Err(Error::UnknownLink(other.to_string())),
        }
    }
}

impl fmt::Display for Link {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Link::Y1 => "y1",
            Link::Y2 => "y2",
            Link::Z1 => "z1",
            Link::Z2 => "z2",
            Link::Z1Y1 => "z1y1",
            Link::Z2Y2 => "z2y2",
        })
    }
}

impl<T: Real> GaussianBrcConfig<T> {
    /// Unit noises, `P = P1 = P2 = 10`, all distances one, `δ = 2`.
    pub fn unit_instance() -> Self {
        let one = T::one();
        let ten = lit(10.0);
        GaussianBrcConfig {
            p: ten,
            p1: ten,
            p2: ten,
            n1: one,
            n2: one,
            nt1: one,
            nt2: one,
            d_y1: one,
            d_y2: one,
            d_z1: one,
            d_z2: one,
            d_z1y1: one,
            d_z2y2: one,
            delta: lit(2.0),
            unit: RateUnit::Bits,
        }
    }

    /// Expected-rate figure geometry: source at distance 3 and 1 from the
    /// destinations, relay 1 at `d_z1 = 1, d_z1y1 = 2`, relay 2 at
    /// `d_z2 = 0.9, d_z2y2 = 0.1`.
    pub fn fig3(delta: T) -> Self {
        GaussianBrcConfig {
            d_y1: lit(3.0),
            d_y2: lit(1.0),
            d_z1: lit(1.0),
            d_z1y1: lit(2.0),
            d_z2: lit(0.9),
            d_z2y2: lit(0.1),
            delta,
            ..Self::unit_instance()
        }
    }

    /// Common-rate figure geometry with relay 1 at `d1` on the source-destination
    /// segment and relay 2 fixed at `d_z2 = 0.7, d_z2y2 = 0.3`.
    pub fn fig4(delta: T, d1: T) -> Result<Self> {
        GaussianBrcConfig {
            d_y1: T::one(),
            d_y2: T::one(),
            d_z2: lit(0.7),
            d_z2y2: lit(0.3),
            delta,
            ..Self::unit_instance()
        }
        .with_relay1_position(d1)
    }

    /// Moves relay 1 to `d_z1 = d1`, `d_z1y1 = 1 - d1`.
    pub fn with_relay1_position(mut self, d1: T) -> Result<Self> {
        self.d_z1 = d1;
        self.d_z1y1 = T::one() - d1;
        self.validate()?;
        Ok(self)
    }

    pub fn from_json(text: &str) -> Result<Self>
    where
        T: for<'de> Deserialize<'de>,
    {
        let cfg: Self = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Noise variances and distances must be positive, powers non-negative,
    /// `δ` non-negative; everything finite.
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, reason: &str| {
            Err(Error::InvalidConfig {
                field: field.into(),
                reason: reason.into(),
            })
        };
        let positive = [
            ("n1", self.n1),
            ("n2", self.n2),
            ("nt1", self.nt1),
            ("nt2", self.nt2),
            ("d_y1", self.d_y1),
            ("d_y2", self.d_y2),
            ("d_z1", self.d_z1),
            ("d_z2", self.d_z2),
            ("d_z1y1", self.d_z1y1),
            ("d_z2y2", self.d_z2y2),
        ];
        for (field, v) in positive {
            if !v.is_finite() || v <= T::zero() {
                return bad(field, &format!("must be positive and finite, got {v}"));
            }
        }
        for (field, v) in [
            ("p", self.p),
            ("p1", self.p1),
            ("p2", self.p2),
            ("delta", self.delta),
        ] {
            if !v.is_finite() || v < T::zero() {
                return bad(field, &format!("must be non-negative and finite, got {v}"));
            }
        }
        Ok(())
    }

    /// `d_link^δ`, the factor scaling the noise seen on `link`.
    pub fn attenuation(&self, link: Link) -> T {
        let d = match link {
            Link::Y1 => self.d_y1,
            Link::Y2 => self.d_y2,
            Link::Z1 => self.d_z1,
            Link::Z2 => self.d_z2,
            Link::Z1Y1 => self.d_z1y1,
            Link::Z2Y2 => self.d_z2y2,
        };
        d.powf(self.delta)
    }

    /// One branch viewed as a stand-alone relay channel.
    pub fn branch(&self, which: Branch) -> RelayBranch<T> {
        let (sd, sr, rd, relay_power, n_dest, n_relay) = match which {
            Branch::One => (Link::Y1, Link::Z1, Link::Z1Y1, self.p1, self.n1, self.nt1),
            Branch::Two => (Link::Y2, Link::Z2, Link::Z2Y2, self.p2, self.n2, self.nt2),
        };
        RelayBranch {
            p: self.p,
            relay_power,
            n_dest,
            n_relay,
            a_sd: self.attenuation(sd),
            a_sr: self.attenuation(sr),
            a_rd: self.attenuation(rd),
            unit: self.unit,
        }
    }

    fn c(&self, snr: T) -> T {
        gaussian_capacity(snr, self.unit)
    }

    fn rate(&self, v: T) -> Rate<T> {
        Rate::new(v, self.unit)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    One,
    Two,
}

/// Source power `p`, relay power, noises and attenuations `d^δ` of one branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayBranch<T> {
    pub p: T,
    pub relay_power: T,
    pub n_dest: T,
    pub n_relay: T,
    pub a_sd: T,
    pub a_sr: T,
    pub a_rd: T,
    pub unit: RateUnit,
}

impl<T: Real> RelayBranch<T> {
    fn c(&self, snr: T) -> T {
        gaussian_capacity(snr, self.unit)
    }

    /// Coherent-combining SNR at the destination when a fraction `1 - beta`
    /// of the source power is correlated with the relay input.
    fn coherent_snr(&self, beta: T) -> T {
        let two = lit::<T>(2.0);
        let cross = ((T::one() - beta).max(T::zero()) * self.p * self.relay_power
            / (self.a_sd * self.a_rd))
            .sqrt();
        (self.p / self.a_sd + self.relay_power / self.a_rd + two * cross) / self.n_dest
    }

    /// DF terms at correlation `beta`: (relay decoding, destination decoding).
    pub fn df_terms(&self, beta: T) -> (T, T) {
        (
            self.c(beta * self.p / (self.a_sr * self.n_relay)),
            self.c(self.coherent_snr(beta)),
        )
    }

    /// `max_beta min(df_terms(beta))`, with the maximizing `beta`.
    pub fn df_rate(&self) -> (T, T) {
        let (beta, v) = maximize_1d(
            |b| {
                let (r, d) = self.df_terms(b);
                r.min(d)
            },
            lit(COARSE_STEP),
            lit(REFINE_TOL_1D),
        );
        (v.max(T::zero()), beta)
    }

    /// Compression-noise variance for CF on this branch.
    pub fn compression_noise(&self) -> T {
        let inner = self.p
            * (T::one() / (self.a_sd * self.n_dest) + T::one() / (self.a_sr * self.n_relay))
            + T::one();
        self.n_relay * inner / (self.relay_power / (self.a_rd * self.n_dest))
    }

    /// CF rate with the compression noise above.
    pub fn cf_rate(&self) -> T {
        self.cf_rate_with_power(self.p)
    }

    fn cf_rate_with_power(&self, power: T) -> T {
        let n_hat = self.compression_noise();
        self.c(power / (self.a_sd * self.n_dest) + power / (self.a_sr * (n_hat + self.n_relay)))
    }

    /// Cut-set terms at correlation `beta`: (broadcast cut, multiple-access cut).
    pub fn cutset_terms(&self, beta: T) -> (T, T) {
        let bc = beta
            * self.p
            * (T::one() / (self.a_sr * self.n_relay) + T::one() / (self.a_sd * self.n_dest));
        (self.c(bc), self.c(self.coherent_snr(beta)))
    }

    pub fn cutset_rate(&self) -> (T, T) {
        let (beta, v) = maximize_1d(
            |b| {
                let (x, y) = self.cutset_terms(b);
                x.min(y)
            },
            lit(COARSE_STEP),
            lit(REFINE_TOL_1D),
        );
        (v.max(T::zero()), beta)
    }
}

/// Power split `alpha` (to user 1), source-relay correlation `beta`, and the
/// Case-2 dirty-paper coefficient `lambda`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DpcParams<T> {
    pub alpha: T,
    pub beta: T,
    pub lambda: T,
}

impl<T: Real> DpcParams<T> {
    pub fn new(alpha: T, beta: T, lambda: T) -> Result<Self> {
        for (name, v) in [("alpha", alpha), ("beta", beta), ("lambda", lambda)] {
            if !(v >= T::zero() && v <= T::one()) {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {v} outside [0, 1]"
                )));
            }
        }
        Ok(DpcParams {
            alpha,
            beta,
            lambda,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionNoise<T> {
    pub n_hat2: T,
}

/// Variance of the CF quantization noise `N̂2`.
pub fn compression_noise<T: Real>(cfg: &GaussianBrcConfig<T>) -> CompressionNoise<T> {
    CompressionNoise {
        n_hat2: cfg.branch(Branch::Two).compression_noise(),
    }
}

/// Equivalent noise of `(Y2, Ẑ2)` seen by the Case-1 dirty-paper code:
/// the parallel combination of the two branch-2 noise terms, each inflated
/// by `extra`.
fn equivalent_noise<T: Real>(cfg: &GaussianBrcConfig<T>, n_hat: T, extra: T) -> T {
    let a = cfg.attenuation(Link::Z2) * (cfg.nt2 + n_hat) + extra;
    let b = cfg.attenuation(Link::Y2) * cfg.n2 + extra;
    T::one() / (T::one() / a + T::one() / b)
}

/// Costa scaling `P/(P + N)`.
pub fn dpc_gamma<T: Real>(signal_power: T, noise: T) -> T {
    let total = signal_power + noise;
    if total > T::zero() {
        signal_power / total
    } else {
        T::zero()
    }
}

/// Case 1: dirty-paper code for user 2 against user 1's codeword, DF relaying for user 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case1Rates<T> {
    pub r1_relay: Rate<T>,
    pub r1_direct: Rate<T>,
    pub r2: Rate<T>,
    /// Optimal Costa coefficient; reported only, already substituted into `r2`.
    pub gamma_star: T,
    pub equivalent_noise: T,
}

pub fn case1_rates<T: Real>(cfg: &GaussianBrcConfig<T>, params: &DpcParams<T>) -> Case1Rates<T> {
    let one = T::one();
    let (alpha, beta) = (params.alpha, params.beta);
    let alpha_bar = one - alpha;
    let p = cfg.p;
    let (a_y1, a_z1, a_z1y1) = (
        cfg.attenuation(Link::Y1),
        cfg.attenuation(Link::Z1),
        cfg.attenuation(Link::Z1Y1),
    );
    let (a_y2, a_z2) = (cfg.attenuation(Link::Y2), cfg.attenuation(Link::Z2));

    let r1_relay = cfg.c(alpha * beta * p / (alpha_bar * p + a_z1 * cfg.nt1));
    let cross = ((one - beta) * alpha * p * cfg.p1 / (a_y1 * a_z1y1)).sqrt();
    let direct_num = alpha * p / a_y1 + cfg.p1 / a_z1y1 + lit::<T>(2.0) * cross;
    let r1_direct = cfg.c(direct_num / (alpha_bar * p / a_y1 + cfg.n1));

    let n_hat = compression_noise(cfg).n_hat2;
    let r2 = cfg.c(alpha_bar * p / (a_y2 * cfg.n2) + alpha_bar * p / (a_z2 * (n_hat + cfg.nt2)));
    let nt = equivalent_noise(cfg, n_hat, T::zero());
    Case1Rates {
        r1_relay: cfg.rate(r1_relay),
        r1_direct: cfg.rate(r1_direct),
        r2: cfg.rate(r2),
        gamma_star: dpc_gamma(alpha_bar * p, nt),
        equivalent_noise: nt,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrivateBest<T> {
    pub r1_star: Rate<T>,
    pub r2_star: Rate<T>,
    pub beta_star: T,
    /// `None` for Case 1, which has no dirty-paper coefficient on user 1.
    pub lambda_star: Option<T>,
}

/// Best Case-1 user-1 rate over `beta` at power split `alpha`.
pub fn case1_best<T: Real>(cfg: &GaussianBrcConfig<T>, alpha: T) -> PrivateBest<T> {
    let eval = |beta: T| {
        case1_rates(
            cfg,
            &DpcParams {
                alpha,
                beta,
                lambda: T::zero(),
            },
        )
    };
    let (beta_star, r1) = maximize_1d(
        |beta| {
            let r = eval(beta);
            r.r1_relay.value.min(r.r1_direct.value)
        },
        lit(COARSE_STEP),
        lit(REFINE_TOL_1D),
    );
    PrivateBest {
        r1_star: cfg.rate(r1),
        r2_star: eval(beta_star).r2,
        beta_star,
        lambda_star: None,
    }
}

/// Case 2: dirty-paper code for user 2 against the relay input `X1`, and for
/// user 1 against user 2's codeword.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Case2Rates<T> {
    pub r11: Rate<T>,
    pub r12: Rate<T>,
    pub r2: Rate<T>,
    pub gamma_star: T,
    pub equivalent_noise: T,
    /// A logarithm argument fell below one and the rate was clamped to zero.
    pub clamped: bool,
}

#[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN inputs fall through to zero
fn half_log_ratio<T: Real>(num: T, den: T, unit: RateUnit, clamped: &mut bool) -> T {
    if !(num > T::zero()) || !(den > T::zero()) {
        return T::zero();
    }
    let ratio = num / den;
    if ratio < T::one() {
        *clamped = true;
        return T::zero();
    }
    unit.log(ratio) * lit(0.5)
}

pub fn case2_rates<T: Real>(cfg: &GaussianBrcConfig<T>, params: &DpcParams<T>) -> Case2Rates<T> {
    let one = T::one();
    let (alpha, beta, lambda) = (params.alpha, params.beta, params.lambda);
    let alpha_bar = one - alpha;
    let p = cfg.p;
    let (a_y1, a_z1, a_z1y1) = (
        cfg.attenuation(Link::Y1),
        cfg.attenuation(Link::Z1),
        cfg.attenuation(Link::Z1Y1),
    );
    let (a_y2, a_z2) = (cfg.attenuation(Link::Y2), cfg.attenuation(Link::Z2));
    let s = alpha * beta * p;
    let interference = alpha_bar * p;
    let leak = (one - lambda) * (one - lambda);
    let mut clamped = false;

    let (r11, r12) = if s > T::zero() {
        let relay_noise = a_z1 * cfg.nt1;
        let num11 = s * (s + interference + relay_noise);
        let den11 = relay_noise * (s + lambda * lambda * interference) + leak * interference * s;
        let cross = ((one - beta) * alpha * p * cfg.p1 / (a_y1 * a_z1y1)).sqrt();
        let received = p / a_y1 + cfg.p1 / a_z1y1 + lit::<T>(2.0) * cross + cfg.n1;
        let num12 = s * received;
        let den12 = cfg.n1 * (s + lambda * lambda * interference) + leak * interference * s / a_y1;
        (
            half_log_ratio(num11, den11, cfg.unit, &mut clamped),
            half_log_ratio(num12, den12, cfg.unit, &mut clamped),
        )
    } else {
        (T::zero(), T::zero())
    };

    let n_hat = compression_noise(cfg).n_hat2;
    let r2 =
        cfg.c(interference / (a_y2 * cfg.n2 + s) + interference / (a_z2 * (n_hat + cfg.nt2) + s));
    let nt = equivalent_noise(cfg, n_hat, s);
    let scale = if cfg.p1 > T::zero() {
        ((one - beta) * alpha * p / cfg.p1).sqrt()
    } else {
        T::zero()
    };
    Case2Rates {
        r11: cfg.rate(r11),
        r12: cfg.rate(r12),
        r2: cfg.rate(r2),
        gamma_star: scale * dpc_gamma(interference, nt),
        equivalent_noise: nt,
        clamped,
    }
}

/// Best Case-2 user-1 rate over `(beta, lambda)` at power split `alpha`;
/// `r2_star` is evaluated at the maximizing `beta`.
pub fn case2_best<T: Real>(cfg: &GaussianBrcConfig<T>, alpha: T) -> PrivateBest<T> {
    case2_best_with(cfg, alpha, lit(COARSE_STEP), lit(REFINE_TOL))
}

pub fn case2_best_with<T: Real>(
    cfg: &GaussianBrcConfig<T>,
    alpha: T,
    coarse_step: T,
    refine_tol: T,
) -> PrivateBest<T> {
    let eval = |beta: T, lambda: T| {
        case2_rates(
            cfg,
            &DpcParams {
                alpha,
                beta,
                lambda,
            },
        )
    };
    let ((beta_star, lambda_star), r1) = maximize_2d(
        |beta, lambda| {
            let r = eval(beta, lambda);
            r.r11.value.min(r.r12.value)
        },
        coarse_step,
        refine_tol,
    );
    PrivateBest {
        r1_star: cfg.rate(r1),
        r2_star: eval(beta_star, lambda_star).r2,
        beta_star,
        lambda_star: Some(lambda_star),
    }
}

/// The three common-message terms at correlation `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommonRateTerms<T> {
    pub r_df_relay: Rate<T>,
    pub r_df_direct: Rate<T>,
    /// Independent of `beta`.
    pub r_cf: Rate<T>,
}

pub fn common_rate_bounds<T: Real>(cfg: &GaussianBrcConfig<T>, beta: T) -> CommonRateTerms<T> {
    let (relay, direct) = cfg.branch(Branch::One).df_terms(beta);
    CommonRateTerms {
        r_df_relay: cfg.rate(relay),
        r_df_direct: cfg.rate(direct),
        r_cf: cfg.rate(cfg.branch(Branch::Two).cf_rate()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommonRateLower<T> {
    pub r0: Rate<T>,
    pub beta_star: T,
    /// `max_beta min(relay, direct)` on the DF branch.
    pub r_df: Rate<T>,
    pub r_cf: Rate<T>,
}

/// Common rate reachable by both destinations: `min(R_DF, R_CF)` where
/// `R_DF` is maximized over `beta` and `R_CF` does not depend on it.
pub fn common_rate_lower<T: Real>(cfg: &GaussianBrcConfig<T>) -> CommonRateLower<T> {
    let (r_df, beta_star) = cfg.branch(Branch::One).df_rate();
    let r_cf = cfg.branch(Branch::Two).cf_rate();
    CommonRateLower {
        r0: cfg.rate(r_df.min(r_cf)),
        beta_star,
        r_df: cfg.rate(r_df),
        r_cf: cfg.rate(r_cf),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutsetUpper<T> {
    pub r0_upper: Rate<T>,
    pub beta1_star: T,
    pub beta2_star: T,
}

/// Cut-set upper bound on the common rate. The four-term minimum separates
/// into one max-min per branch (`beta1` and `beta2` never interact), so the
/// joint maximum is the smaller of the two branch maxima.
pub fn cutset_upper<T: Real>(cfg: &GaussianBrcConfig<T>) -> CutsetUpper<T> {
    let (v1, beta1_star) = cfg.branch(Branch::One).cutset_rate();
    let (v2, beta2_star) = cfg.branch(Branch::Two).cutset_rate();
    CutsetUpper {
        r0_upper: cfg.rate(v1.min(v2)),
        beta1_star,
        beta2_star,
    }
}

/// The four cut-set terms at `(beta1, beta2)`.
pub fn cutset_terms<T: Real>(cfg: &GaussianBrcConfig<T>, beta1: T, beta2: T) -> [Rate<T>; 4] {
    let (a, b) = cfg.branch(Branch::One).cutset_terms(beta1);
    let (c, d) = cfg.branch(Branch::Two).cutset_terms(beta2);
    [cfg.rate(a), cfg.rate(b), cfg.rate(c), cfg.rate(d)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn unit() -> GaussianBrcConfig<f64> {
        GaussianBrcConfig::unit_instance()
    }

    #[test]
    fn attenuation_examples() {
        let mut cfg = unit();
        cfg.delta = 3.7;
        assert_eq!(cfg.attenuation(Link::Y1), 1.0);
        cfg.d_y2 = 2.0;
        cfg.delta = 1.0;
        assert_eq!(cfg.attenuation(Link::Y2), 2.0);
        cfg.d_z1 = 0.9;
        cfg.delta = 2.0;
        assert_abs_diff_eq!(cfg.attenuation(Link::Z1), 0.81, epsilon = 1e-15);
        assert!(matches!("x3".parse::<Link>(), Err(Error::UnknownLink(_))));
        assert_eq!("z2y2".parse::<Link>().unwrap(), Link::Z2Y2);
    }

    #[test]
    fn compression_noise_examples() {
        assert_abs_diff_eq!(compression_noise(&unit()).n_hat2, 2.1, epsilon = 1e-12);
        let mut big = unit();
        big.p2 = 1e9;
        assert!(compression_noise(&big).n_hat2 < 1e-7);
        let fig4 = GaussianBrcConfig::<f64>::fig4(1.0, 0.5).unwrap();
        let expected = (10.0 * (1.0 + 1.0 / 0.7) + 1.0) * 0.3 / 10.0;
        assert_abs_diff_eq!(compression_noise(&fig4).n_hat2, expected, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 0.758_571_428_571, epsilon = 1e-9);
    }

    #[test]
    fn case1_examples() {
        let cfg = unit();
        let r = case1_rates(&cfg, &DpcParams::new(0.0, 0.7, 0.0).unwrap());
        assert_eq!(r.r1_relay.value, 0.0);
        assert!(r.r2.value > 0.0);
        let r = case1_rates(&cfg, &DpcParams::new(1.0, 1.0, 0.0).unwrap());
        assert_abs_diff_eq!(r.r1_relay.value, 0.5 * 11f64.log2(), epsilon = 1e-12);
        assert_eq!(r.r2.value, 0.0);
        assert_abs_diff_eq!(dpc_gamma(5.0, 5.0), 0.5);
    }

    #[test]
    fn case1_gamma_uses_parallel_noise() {
        let cfg = unit();
        let r = case1_rates(&cfg, &DpcParams::new(0.5, 0.5, 0.0).unwrap());
        let nt = 1.0 / (1.0 / 3.1 + 1.0);
        assert_abs_diff_eq!(r.equivalent_noise, nt, epsilon = 1e-12);
        assert_abs_diff_eq!(r.gamma_star, 5.0 / (5.0 + nt), epsilon = 1e-12);
    }

    #[test]
    fn case2_examples() {
        let cfg = unit();
        let r = case2_rates(&cfg, &DpcParams::new(0.5, 1.0, 1.0).unwrap());
        assert_abs_diff_eq!(r.r11.value, 0.5 * 5.5f64.log2(), epsilon = 1e-12);
        assert_abs_diff_eq!(r.r11.value, 1.229_715_809_318_648, epsilon = 1e-9);

        // beta = 0 removes the interference term from r2.
        for alpha in [0.0, 0.3, 0.9] {
            let c1 = case1_rates(&cfg, &DpcParams::new(alpha, 0.0, 0.0).unwrap());
            let c2 = case2_rates(&cfg, &DpcParams::new(alpha, 0.0, 0.4).unwrap());
            assert_abs_diff_eq!(c1.r2.value, c2.r2.value, epsilon = 1e-12);
            assert_eq!(c2.r11.value, 0.0);
        }
        // alpha*beta*P = 0 with lambda = 0 is the 0/0 corner.
        let r = case2_rates(&cfg, &DpcParams::new(0.0, 0.0, 0.0).unwrap());
        assert_eq!((r.r11.value, r.r12.value), (0.0, 0.0));
    }

    #[test]
    fn case2_clamps_negative_logs() {
        let mut cfg = unit();
        cfg.d_z1 = 10.0;
        cfg.delta = 2.0;
        let r = case2_rates(&cfg, &DpcParams::new(0.05, 0.1, 1.0).unwrap());
        assert!(r.clamped);
        assert_eq!(r.r11.value, 0.0);
    }

    #[test]
    fn zero_alpha_gives_zero_user1() {
        let cfg = GaussianBrcConfig::<f64>::fig3(1.0);
        assert_eq!(case1_best(&cfg, 0.0).r1_star.value, 0.0);
        let best = case2_best(&cfg, 0.0);
        assert_eq!(best.r1_star.value, 0.0);
        assert_eq!((best.beta_star, best.lambda_star), (0.0, Some(0.0)));
    }

    #[test]
    fn common_rate_examples() {
        let cfg = unit();
        let t = common_rate_bounds(&cfg, 1.0);
        assert_abs_diff_eq!(t.r_df_relay.value, 0.5 * 11f64.log2(), epsilon = 1e-12);
        assert_abs_diff_eq!(
            t.r_cf.value,
            0.5 * (1.0 + 10.0 + 10.0 / 3.1f64).log2(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(t.r_cf.value, 1.915_219, epsilon = 1e-5);
        assert_eq!(common_rate_bounds(&cfg, 0.0).r_df_relay.value, 0.0);
        let mut weak = cfg;
        weak.p = 1e-12;
        assert!(common_rate_lower(&weak).r0.value < 1e-10);
    }

    #[test]
    fn cutset_unit_instance() {
        let cfg = unit();
        let terms = cutset_terms(&cfg, 1.0, 1.0);
        for t in terms {
            assert_abs_diff_eq!(t.value, 0.5 * 21f64.log2(), epsilon = 1e-12);
        }
        let up = cutset_upper(&cfg);
        assert!(up.r0_upper.value >= 0.5 * 21f64.log2() - 1e-12);
        assert!(up.r0_upper.value >= common_rate_lower(&cfg).r0.value);
    }

    #[test]
    fn config_validation() {
        let mut cfg = unit();
        cfg.d_z1 = 0.0;
        match cfg.validate() {
            Err(Error::InvalidConfig { field, .. }) => assert_eq!(field, "d_z1"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(GaussianBrcConfig::<f64>::fig4(1.0, 1.0).is_err());
        assert!(GaussianBrcConfig::<f64>::fig4(1.0, -0.5).is_err());
    }

    #[test]
    fn config_json() {
        let text = r#"{"p":10,"p1":10,"p2":10,"n1":1,"n2":1,"nt1":1,"nt2":1,
            "d_y1":1,"d_y2":1,"d_z1":1,"d_z2":1,"d_z1y1":1,"d_z2y2":1}"#;
        let cfg = GaussianBrcConfig::<f64>::from_json(text).unwrap();
        assert_eq!(cfg, unit());
        let missing = text.replace(r#""p2":10,"#, "");
        let err = GaussianBrcConfig::<f64>::from_json(&missing)
            .unwrap_err()
            .to_string();
        assert!(err.contains("p2"), "{err}");
        let extra = text.replace(r#""p2":10,"#, r#""p2":10,"p3":1,"#);
        assert!(GaussianBrcConfig::<f64>::from_json(&extra)
            .unwrap_err()
            .to_string()
            .contains("p3"));
    }

    #[test]
    fn works_in_f32() {
        let cfg = GaussianBrcConfig::<f32>::unit_instance();
        assert!((compression_noise(&cfg).n_hat2 - 2.1).abs() < 1e-5);
        let lower = common_rate_lower(&cfg);
        assert!(lower.r0.value > 0.0 && lower.r0.value <= cutset_upper(&cfg).r0_upper.value + 1e-5);
    }
}
