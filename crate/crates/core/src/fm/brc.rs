//! Raw coding constraints of the DF/CF broadcast scheme.
//!
//! Private messages are split as `R1 = S'1 + S1`, `R2 = S'2 + S2`, and the
//! parts `S'1, S'2` are merged with the common message into `S0 = R0 + S'1 + S'2`.
//! `T1, T2` are the Marton binning codebook rates. Projecting the system
//! onto `(R0, R1, R2)` reproduces the five-inequality inner bound.
//!
//! The relay-2 compression rate `R̂2` and its index rate `R_x2` appear only in
//!
//! ```text
//! R̂2 >= I(Z2;Ẑ2|X2),   R_x2 <= I(X2;Y2),   R̂2 <= R_x2 + I(Ẑ2;Y2|X2)
//! ```
//!
//! which eliminate to `I(X2;Y2) >= I(Z2;Ẑ2|X2) - I(Ẑ2;Y2|X2)`, i.e.
//! `I(X2;Y2) >= I(Z2;Ẑ2|X2,Y2)` when `Ẑ2 - (X2,Z2) - Y2`. They never touch a
//! message rate, so [`build_brc_constraints`] reports them as an admissibility
//! flag; [`CompressionTerms::system`] builds the two-variable system itself.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{EliminationReport, LinearInequalitySystem};
use crate::error::{Error, Result};
use crate::info::{FiniteJointDistribution, RateUnit};
use crate::num::{lit, tolerance, Real};
use crate::region::{
    regions_agree_on_grid, theorem1_region, InfoQuantities, NamedTerms, RateRegion, GRID_STEP,
    MEMBERSHIP_TOL,
};

pub const BRC_RATE_VARIABLES: [&str; 3] = ["R0", "R1", "R2"];
pub const BRC_HELPER_VARIABLES: [&str; 7] = ["T1", "T2", "S1", "S2", "S0", "S'1", "S'2"];

/// Every mutual-information term the coding constraints use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodingTerms<T> {
    /// `I(U0,U1;Z1|X1,V0)`: relay 1 decodes common and private parts.
    pub relay1_common: T,
    /// `I(U1;Z1|U0,V0,X1)`
    pub relay1_private: T,
    /// `I(X1,V0,U0,U1;Y1)`: destination 1, backward decoding.
    pub dest1_common: T,
    /// `I(U1,X1;Y1|U0,V0)`
    pub dest1_private: T,
    /// `I(V0,U0,U2;Y2,Ẑ2|X2)`
    pub dest2_common: T,
    /// `I(U2;Y2,Ẑ2|V0,U0,X2)`
    pub dest2_private: T,
    /// `I(U2;X1|U0,V0)`
    pub binning_relay: T,
    /// `I(U2;U1,X1|U0,V0)`
    pub binning_joint: T,
    /// `I(X2;Y2)`
    pub relay2_link: T,
    /// `I(Z2;Ẑ2|X2,Y2)`
    pub compression: T,
}

const TERM_NAMES: [&str; 10] = [
    "relay1_common",
    "relay1_private",
    "dest1_common",
    "dest1_private",
    "dest2_common",
    "dest2_private",
    "binning_relay",
    "binning_joint",
    "relay2_link",
    "compression",
];

impl<T: Real> CodingTerms<T> {
    fn values(&self) -> [T; 10] {
        [
            self.relay1_common,
            self.relay1_private,
            self.dest1_common,
            self.dest1_private,
            self.dest2_common,
            self.dest2_private,
            self.binning_relay,
            self.binning_joint,
            self.relay2_link,
            self.compression,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in TERM_NAMES.iter().zip(self.values()) {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::InvalidArgument(format!(
                    "term `{name}` = {v} must be finite and non-negative"
                )));
            }
        }
        Ok(())
    }

    /// Builds the terms from a name-to-value map; every term is required.
    pub fn from_map(map: &BTreeMap<String, T>) -> Result<Self> {
        let get = |name: &str| {
            map.get(name)
                .copied()
                .ok_or_else(|| Error::InvalidArgument(format!("missing term `{name}`")))
        };
        if let Some(extra) = map.keys().find(|k| !TERM_NAMES.contains(&k.as_str())) {
            return Err(Error::InvalidArgument(format!("unknown term `{extra}`")));
        }
        let terms = CodingTerms {
            relay1_common: get("relay1_common")?,
            relay1_private: get("relay1_private")?,
            dest1_common: get("dest1_common")?,
            dest1_private: get("dest1_private")?,
            dest2_common: get("dest2_common")?,
            dest2_private: get("dest2_private")?,
            binning_relay: get("binning_relay")?,
            binning_joint: get("binning_joint")?,
            relay2_link: get("relay2_link")?,
            compression: get("compression")?,
        };
        terms.validate()?;
        Ok(terms)
    }

    /// Evaluates every term on a joint distribution (absent variables are constants).
    pub fn from_distribution(pd: &FiniteJointDistribution<T>, unit: RateUnit) -> Result<Self> {
        let t = NamedTerms::new(pd, unit)?;
        let zhat = t.zhat;
        Ok(CodingTerms {
            relay1_common: t.cmi(&["U0", "U1"], &["Z1"], &["X1", "V0"])?,
            relay1_private: t.cmi(&["U1"], &["Z1"], &["U0", "V0", "X1"])?,
            dest1_common: t.cmi(&["X1", "V0", "U0", "U1"], &["Y1"], &[])?,
            dest1_private: t.cmi(&["U1", "X1"], &["Y1"], &["U0", "V0"])?,
            dest2_common: t.cmi(&["V0", "U0", "U2"], &["Y2", zhat], &["X2"])?,
            dest2_private: t.cmi(&["U2"], &["Y2", zhat], &["V0", "U0", "X2"])?,
            binning_relay: t.cmi(&["U2"], &["X1"], &["U0", "V0"])?,
            binning_joint: t.cmi(&["U2"], &["U1", "X1"], &["U0", "V0"])?,
            relay2_link: t.cmi(&["X2"], &["Y2"], &[])?,
            compression: t.cmi(&["Z2"], &[zhat], &["X2", "Y2"])?,
        })
    }

    /// Draws a random instance obeying the orderings every genuine
    /// distribution satisfies (`private <= common` per decoder,
    /// `binning_relay <= binning_joint`) together with
    /// `binning_relay <= dest2_private` and `binning_joint <= J1 + J2`.
    /// About one draw in eight has each term zeroed independently with
    /// probability 1/4, to exercise degenerate corners.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let degenerate = rng.gen_bool(0.125);
        let mut u = |hi: f64| -> f64 {
            if degenerate && rng.gen_bool(0.25) {
                0.0
            } else {
                rng.gen_range(0.0..hi)
            }
        };
        let relay1_private = u(1.5);
        let relay1_common = relay1_private + u(1.0);
        let dest1_private = u(1.5);
        let dest1_common = dest1_private + u(1.0);
        let dest2_private = u(1.5);
        let dest2_common = dest2_private + u(1.0);
        let j1 = relay1_private.min(dest1_private);
        let binning_relay = dest2_private * u(1.0);
        let binning_joint = binning_relay + (j1 + dest2_private - binning_relay) * u(1.0);
        let relay2_link = u(1.0);
        let compression = relay2_link * u(1.0);
        let c = |x: f64| lit::<T>(x);
        CodingTerms {
            relay1_common: c(relay1_common),
            relay1_private: c(relay1_private),
            dest1_common: c(dest1_common),
            dest1_private: c(dest1_private),
            dest2_common: c(dest2_common),
            dest2_private: c(dest2_private),
            binning_relay: c(binning_relay),
            binning_joint: c(binning_joint),
            relay2_link: c(relay2_link),
            compression: c(compression),
        }
    }

    /// The scalar quantities the hand-written region is built from.
    pub fn quantities(&self, unit: RateUnit) -> InfoQuantities<T> {
        InfoQuantities {
            i1: self.relay1_common.min(self.dest1_common),
            i2: self.dest2_common,
            j1: self.relay1_private.min(self.dest1_private),
            j2: self.dest2_private,
            pen_u2_x1: self.binning_relay,
            pen_u1x1_u2: self.binning_joint,
            unit,
        }
    }
}

/// The message-rate system plus the compression side condition.
#[derive(Debug, Clone, PartialEq)]
pub struct BrcConstraints<T> {
    pub system: LinearInequalitySystem<T>,
    /// `I(X2;Y2) >= I(Z2;Ẑ2|X2,Y2)`.
    pub admissible: bool,
    pub admissibility_slack: T,
}

/// Builds the coding constraints over
/// `R0, R1, R2, S0, S1, S2, S'1, S'2, T1, T2`. Strict inequalities are
/// closed; equalities become two opposing rows.
pub fn build_brc_constraints<T: Real>(terms: &CodingTerms<T>) -> Result<BrcConstraints<T>> {
    terms.validate()?;
    let vars = ["R0", "R1", "R2", "S0", "S1", "S2", "S'1", "S'2", "T1", "T2"];
    let mut sys = LinearInequalitySystem::empty(vars);
    let zero = T::zero();

    // Marton binning: T2 - S2 >= I(U2;X1|U0V0), T1 + T2 - S1 - S2 >= I(U2;U1X1|U0V0).
    sys.add(&[("T2", -1.0), ("S2", 1.0)], -terms.binning_relay, "III-1A")?;
    sys.add(
        &[("T1", -1.0), ("T2", -1.0), ("S1", 1.0), ("S2", 1.0)],
        -terms.binning_joint,
        "III-1B",
    )?;
    // Relay 1 decoding.
    sys.add(&[("T1", 1.0), ("S0", 1.0)], terms.relay1_common, "III-2A")?;
    sys.add(&[("T1", 1.0)], terms.relay1_private, "III-2B")?;
    // Destination 1, backward decoding.
    sys.add(&[("T1", 1.0), ("S0", 1.0)], terms.dest1_common, "III-3A")?;
    sys.add(&[("T1", 1.0)], terms.dest1_private, "III-3B")?;
    // Destination 2 with (Y2, Ẑ2).
    sys.add(&[("S0", 1.0), ("T2", 1.0)], terms.dest2_common, "III-6A")?;
    sys.add(&[("T2", 1.0)], terms.dest2_private, "III-6B")?;
    // Message reorganization.
    sys.add_equality(
        &[("R1", 1.0), ("S'1", -1.0), ("S1", -1.0)],
        zero,
        "R1 = S'1 + S1",
    )?;
    sys.add_equality(
        &[("R2", 1.0), ("S'2", -1.0), ("S2", -1.0)],
        zero,
        "R2 = S'2 + S2",
    )?;
    sys.add_equality(
        &[("S0", 1.0), ("R0", -1.0), ("S'1", -1.0), ("S'2", -1.0)],
        zero,
        "S0 = R0 + S'1 + S'2",
    )?;
    for v in ["R0", "R1", "R2", "S0", "S1", "S2", "S'1", "S'2"] {
        sys.add(&[(v, -1.0)], zero, format!("{v} >= 0"))?;
    }
    sys.add(&[("S1", 1.0), ("T1", -1.0)], zero, "T1 >= S1")?;
    sys.add(&[("S2", 1.0), ("T2", -1.0)], zero, "T2 >= S2")?;

    let slack = terms.relay2_link - terms.compression;
    Ok(BrcConstraints {
        system: sys,
        admissible: slack >= -tolerance::<T>(1e-12),
        admissibility_slack: slack,
    })
}

/// Terms of the relay-2 compression constraints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompressionTerms<T> {
    /// `I(Z2;Ẑ2|X2)`
    pub quantization: T,
    /// `I(X2;Y2)`
    pub relay2_link: T,
    /// `I(Ẑ2;Y2|X2)`
    pub side_information: T,
}

impl<T: Real> CompressionTerms<T> {
    pub fn from_distribution(pd: &FiniteJointDistribution<T>, unit: RateUnit) -> Result<Self> {
        let t = NamedTerms::new(pd, unit)?;
        let zhat = t.zhat;
        Ok(CompressionTerms {
            quantization: t.cmi(&["Z2"], &[zhat], &["X2"])?,
            relay2_link: t.cmi(&["X2"], &["Y2"], &[])?,
            side_information: t.cmi(&[zhat], &["Y2"], &["X2"])?,
        })
    }

    /// The constraints on `(R̂2, R_x2)`: covering at relay 2 and decoding at
    /// destination 2.
    pub fn system(&self) -> Result<LinearInequalitySystem<T>> {
        let mut sys = LinearInequalitySystem::empty(["R^2", "R_x2"]);
        sys.add(&[("R^2", -1.0)], -self.quantization, "III-4")?;
        sys.add(&[("R_x2", 1.0)], self.relay2_link, "III-5 (index)")?;
        sys.add(
            &[("R^2", 1.0), ("R_x2", -1.0)],
            self.side_information,
            "III-5 (bin)",
        )?;
        Ok(sys)
    }
}

/// Outcome of projecting the coding constraints and comparing with the
/// hand-written region.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionCheck<T> {
    pub agree: bool,
    pub admissible: bool,
    pub derived: RateRegion<T>,
    pub expected: RateRegion<T>,
    pub report: EliminationReport,
}

/// Eliminates the helper rates from the coding constraints of `terms` and
/// compares the result with the five-inequality region point by point on a
/// grid of spacing `step` covering every feasible rate.
pub fn check_projection<T: Real>(
    terms: &CodingTerms<T>,
    unit: RateUnit,
    step: T,
) -> Result<ProjectionCheck<T>> {
    let built = build_brc_constraints(terms)?;
    let (projected, report) = built.system.eliminate_all(&BRC_HELPER_VARIABLES)?;
    let derived = projected.to_rate_region(&BRC_RATE_VARIABLES)?;
    let q = terms.quantities(unit);
    let expected = theorem1_region(&q);
    let hi = q.i1.max(q.i2) + step;
    let agree = regions_agree_on_grid(&derived, &expected, hi, step, lit(MEMBERSHIP_TOL));
    Ok(ProjectionCheck {
        agree,
        admissible: built.admissible,
        derived,
        expected,
        report,
    })
}

/// [`check_projection`] on the default 0.05 grid.
pub fn check_projection_default<T: Real>(
    terms: &CodingTerms<T>,
    unit: RateUnit,
) -> Result<ProjectionCheck<T>> {
    check_projection(terms, unit, lit(GRID_STEP))
}
