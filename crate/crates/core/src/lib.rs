//! Achievable rates and bounds for the two-branch broadcast relay channel in
//! which one branch relays by decode-and-forward (DF) and the other by
//! compress-and-forward (CF).
//!
//! * [`info`]: finite-alphabet entropies, (conditional) mutual information,
//!   the Gaussian capacity function `C(x)`.
//! * [`region`]: the five-inequality DF/CF inner bound, the common- and
//!   private-message special cases, and the Marton reduction.
//! * [`fm`]: Fourier–Motzkin elimination, and the raw coding constraints that
//!   project onto the inner bound.
//! * [`gaussian`]: closed-form Gaussian rates (dirty-paper cases, common-rate
//!   lower bound, cut-set upper bound).
//! * [`strategy`]: the composite two-state channel, DF-only / CF-only /
//!   time-sharing baselines, and the figure sweeps.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the aliases at
//! the crate root fix the scalar to `f64`.

pub mod error;
pub mod fm;
pub mod gaussian;
pub mod info;
pub mod num;
pub mod optimize;
pub mod region;
pub mod strategy;

pub use error::{Error, Result};
pub use info::{admissibility_check, capacity_c, RateUnit};
pub use num::Real;
pub use optimize::{maximize_1d, maximize_2d};

pub type Rate = info::Rate<f64>;
pub type Distribution = info::FiniteJointDistribution<f64>;
pub type Distribution32 = info::FiniteJointDistribution<f32>;
pub type InfoQuantities = region::InfoQuantities<f64>;
pub type RateRegion = region::RateRegion<f64>;
pub type InequalitySystem = fm::LinearInequalitySystem<f64>;
pub type CodingTerms = fm::CodingTerms<f64>;
pub type BrcConfig = gaussian::GaussianBrcConfig<f64>;
pub type BrcConfig32 = gaussian::GaussianBrcConfig<f32>;
pub type DpcParams = gaussian::DpcParams<f64>;
pub type CompositeModel = strategy::CompositeModel<f64>;
