//! Inner-bound polytopes over `(R0, R1, R2)` for the DF/CF broadcast relay channel.
//!
//! A region is a list of linear inequalities `coeffs . R <= bound` together
//! with the implicit non-negativity of every rate coordinate.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::info::{FiniteJointDistribution, Rate, RateUnit, ZHAT2_NAMES};
use crate::num::{lit, Real};

/// Default absolute membership tolerance.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// The scalar terms parameterizing the DF/CF inner bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InfoQuantities<T> {
    pub i1: T,
    pub i2: T,
    pub j1: T,
    pub j2: T,
    /// `I(U2;X1|U0,V0)`
    pub pen_u2_x1: T,
    /// `I(U1,X1;U2|U0,V0)`
    pub pen_u1x1_u2: T,
    #[serde(default)]
    pub unit: RateUnit,
}

impl<T: Real> InfoQuantities<T> {
    pub fn new(i1: T, i2: T, j1: T, j2: T, pen_u2_x1: T, pen_u1x1_u2: T) -> Result<Self> {
        let q = InfoQuantities {
            i1,
            i2,
            j1,
            j2,
            pen_u2_x1,
            pen_u1x1_u2,
            unit: RateUnit::Bits,
        };
        q.validate()?;
        Ok(q)
    }

    pub fn zero() -> Self {
        InfoQuantities {
            i1: T::zero(),
            i2: T::zero(),
            j1: T::zero(),
            j2: T::zero(),
            pen_u2_x1: T::zero(),
            pen_u1x1_u2: T::zero(),
            unit: RateUnit::Bits,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.fields() {
            if !v.is_finite() || v < T::zero() {
                return Err(Error::InvalidArgument(format!(
                    "{name} = {v} must be finite and non-negative"
                )));
            }
        }
        Ok(())
    }

    fn fields(&self) -> [(&'static str, T); 6] {
        [
            ("i1", self.i1),
            ("i2", self.i2),
            ("j1", self.j1),
            ("j2", self.j2),
            ("pen_u2_x1", self.pen_u2_x1),
            ("pen_u1x1_u2", self.pen_u1x1_u2),
        ]
    }

    /// Evaluates the quantities on a joint distribution over (a subset of)
    /// `V0, U0, U1, U2, X1, X2, Y1, Y2, Z1, Z2, Ẑ2`. Variables absent from
    /// `pd` are treated as constants; `Y1` and `Y2` are required.
    pub fn from_distribution(pd: &FiniteJointDistribution<T>, unit: RateUnit) -> Result<Self> {
        let t = NamedTerms::new(pd, unit)?;
        let z1_common = t.cmi(&["U0", "U1"], &["Z1"], &["X1", "V0"])?;
        let y1_common = t.cmi(&["U1", "U0", "X1", "V0"], &["Y1"], &[])?;
        let z1_private = t.cmi(&["U1"], &["Z1"], &["X1", "U0", "V0"])?;
        let y1_private = t.cmi(&["U1", "X1"], &["Y1"], &["U0", "V0"])?;
        let zhat = t.zhat;
        Ok(InfoQuantities {
            i1: z1_common.min(y1_common),
            i2: t.cmi(&["U2", "U0", "V0"], &[zhat, "Y2"], &["X2"])?,
            j1: z1_private.min(y1_private),
            j2: t.cmi(&["U2"], &[zhat, "Y2"], &["X2", "U0", "V0"])?,
            pen_u2_x1: t.cmi(&["U2"], &["X1"], &["U0", "V0"])?,
            pen_u1x1_u2: t.cmi(&["U1", "X1"], &["U2"], &["U0", "V0"])?,
            unit,
        })
    }
}

/// Evaluates `I(A;B|C)` by name, silently dropping names the distribution
/// does not carry (an absent variable is a constant).
pub(crate) struct NamedTerms<'a, T> {
    pd: &'a FiniteJointDistribution<T>,
    unit: RateUnit,
    pub(crate) zhat: &'static str,
}

impl<'a, T: Real> NamedTerms<'a, T> {
    pub(crate) fn new(pd: &'a FiniteJointDistribution<T>, unit: RateUnit) -> Result<Self> {
        for required in ["Y1", "Y2"] {
            pd.index_of(required)?;
        }
        let zhat = ZHAT2_NAMES
            .iter()
            .copied()
            .find(|n| pd.has_variable(n))
            .unwrap_or(ZHAT2_NAMES[0]);
        Ok(NamedTerms { pd, unit, zhat })
    }

    pub(crate) fn cmi(&self, a: &[&str], b: &[&str], c: &[&str]) -> Result<T> {
        let keep = |names: &[&str]| -> Vec<String> {
            names
                .iter()
                .filter(|n| self.pd.has_variable(n))
                .map(|n| n.to_string())
                .collect()
        };
        let (a, b, c) = (keep(a), keep(b), keep(c));
        if a.is_empty() || b.is_empty() {
            return Ok(T::zero());
        }
        fn refs(v: &[String]) -> Vec<&str> {
            v.iter().map(String::as_str).collect()
        }
        Ok(self
            .pd
            .conditional_mutual_information(&refs(&a), &refs(&b), &refs(&c), self.unit)?
            .value)
    }
}

/// One linear constraint `coeffs . R <= bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality<T> {
    pub coeffs: Vec<T>,
    pub bound: T,
    pub label: String,
}

impl<T: Real> Inequality<T> {
    pub fn new(coeffs: Vec<T>, bound: T, label: impl Into<String>) -> Self {
        Inequality {
            coeffs,
            bound,
            label: label.into(),
        }
    }

    /// `bound - coeffs . point`; negative when violated.
    pub fn slack(&self, point: &[T]) -> T {
        let lhs: T = self.coeffs.iter().zip(point).map(|(&a, &x)| a * x).sum();
        self.bound - lhs
    }
}

/// A polytope in rate space, intersected with the non-negative orthant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawRegion<T>", into = "RawRegion<T>")]
#[serde(bound(
    serialize = "T: Real + Serialize",
    deserialize = "T: Real + Deserialize<'de>"
))]
pub struct RateRegion<T> {
    dim: usize,
    inequalities: Vec<Inequality<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRegion<T> {
    inequalities: Vec<Inequality<T>>,
}

impl<T: Real> TryFrom<RawRegion<T>> for RateRegion<T> {
    type Error = Error;

    fn try_from(raw: RawRegion<T>) -> Result<Self> {
        let dim = raw.inequalities.first().map_or(3, |r| r.coeffs.len());
        RateRegion::new(dim, raw.inequalities)
    }
}

impl<T: Real> From<RateRegion<T>> for RawRegion<T> {
    fn from(r: RateRegion<T>) -> Self {
        RawRegion {
            inequalities: r.inequalities,
        }
    }
}

impl<T: Real> RateRegion<T> {
    pub fn new(dim: usize, inequalities: Vec<Inequality<T>>) -> Result<Self> {
        for ineq in &inequalities {
            if ineq.coeffs.len() != dim {
                return Err(Error::InvalidArgument(format!(
                    "inequality `{}` has {} coefficients, region has dimension {dim}",
                    ineq.label,
                    ineq.coeffs.len()
                )));
            }
            if ineq
                .coeffs
                .iter()
                .chain([&ineq.bound])
                .any(|v| !v.is_finite())
            {
                return Err(Error::InvalidArgument(format!(
                    "inequality `{}` is not finite",
                    ineq.label
                )));
            }
        }
        Ok(RateRegion { dim, inequalities })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Inequality<T>] {
        &self.inequalities
    }

    /// Every inequality holds with slack `>= -tol` and every coordinate is `>= -tol`.
    /// A point of the wrong dimension is never contained.
    pub fn contains(&self, point: &[T], tol: T) -> bool {
        point.len() == self.dim
            && point.iter().all(|&x| x >= -tol)
            && self
                .inequalities
                .iter()
                .all(|ineq| ineq.slack(point) >= -tol)
    }

    pub fn slacks(&self, point: &[T]) -> Vec<(&str, T)> {
        self.inequalities
            .iter()
            .map(|i| (i.label.as_str(), i.slack(point)))
            .collect()
    }

    /// Label of the inequality with the smallest slack at `point`; ties go to the first listed.
    pub fn tightest(&self, point: &[T]) -> Option<&str> {
        let mut best: Option<(&str, T)> = None;
        for (label, s) in self.slacks(point) {
            if best.is_none_or(|(_, b)| s < b) {
                best = Some((label, s));
            }
        }
        best.map(|(l, _)| l)
    }
}

pub const LABEL_R0_R1: &str = "R0+R1 <= I1";
pub const LABEL_R0_R2: &str = "R0+R2 <= I2-I(U2;X1|U0V0)";
pub const LABEL_SUM_I1_J2: &str = "R0+R1+R2 <= I1+J2-I(U1X1;U2|U0V0)";
pub const LABEL_SUM_J1_I2: &str = "R0+R1+R2 <= J1+I2-I(U1X1;U2|U0V0)";
pub const LABEL_DOUBLE_R0: &str = "2R0+R1+R2 <= I1+I2-I(U1X1;U2|U0V0)";

/// The five-inequality DF/CF inner bound for one admissible distribution.
pub fn theorem1_region<T: Real>(q: &InfoQuantities<T>) -> RateRegion<T> {
    let c = |a: f64, b: f64, d: f64| vec![lit::<T>(a), lit(b), lit(d)];
    let pen = q.pen_u1x1_u2;
    let rows = vec![
        Inequality::new(c(1.0, 1.0, 0.0), q.i1, LABEL_R0_R1),
        Inequality::new(c(1.0, 0.0, 1.0), q.i2 - q.pen_u2_x1, LABEL_R0_R2),
        Inequality::new(c(1.0, 1.0, 1.0), q.i1 + q.j2 - pen, LABEL_SUM_I1_J2),
        Inequality::new(c(1.0, 1.0, 1.0), q.j1 + q.i2 - pen, LABEL_SUM_J1_I2),
        Inequality::new(c(2.0, 1.0, 1.0), q.i1 + q.i2 - pen, LABEL_DOUBLE_R0),
    ];
    RateRegion {
        dim: 3,
        inequalities: rows,
    }
}

/// Which of the two sum-rate constraints is tighter (smaller right-hand
/// side); the first one wins ties.
pub fn binding_sum_constraint<T: Real>(q: &InfoQuantities<T>) -> &'static str {
    if q.i1 + q.j2 <= q.j1 + q.i2 {
        LABEL_SUM_I1_J2
    } else {
        LABEL_SUM_J1_I2
    }
}

fn same_unit<T: Real>(rates: &[Rate<T>]) -> Result<RateUnit> {
    let unit = rates[0].unit;
    if let Some(r) = rates.iter().find(|r| r.unit != unit) {
        return Err(Error::MixedUnits(unit.to_string(), r.unit.to_string()));
    }
    Ok(unit)
}

/// Common-message lower bound: the smallest of the relay-decoding DF term,
/// the destination DF term and the CF term.
pub fn corollary2_common_rate<T: Real>(
    r_df_relay: Rate<T>,
    r_df_direct: Rate<T>,
    r_cf: Rate<T>,
) -> Result<Rate<T>> {
    let unit = same_unit(&[r_df_relay, r_df_direct, r_cf])?;
    Ok(Rate::new(
        r_df_relay.value.min(r_df_direct.value).min(r_cf.value),
        unit,
    ))
}

/// Cut-set style common-message upper bound: the minimum of the four cut terms.
pub fn theorem4_common_upper<T: Real>(terms: [Rate<T>; 4]) -> Result<Rate<T>> {
    let unit = same_unit(&terms)?;
    let v = terms.iter().map(|r| r.value).fold(T::infinity(), T::min);
    Ok(Rate::new(v, unit))
}

/// Private-message region over `(R1, R2)`.
pub fn corollary3_region<T: Real>(r1_cap: T, r2_cap_minus_pen: T, sum_cap: T) -> RateRegion<T> {
    let (o, z) = (T::one(), T::zero());
    RateRegion {
        dim: 2,
        inequalities: vec![
            Inequality::new(vec![o, z], r1_cap, "R1 <= min{I(U1;Z1|X1),I(U1X1;Y1)}"),
            Inequality::new(
                vec![z, o],
                r2_cap_minus_pen,
                "R2 <= I(U2;Z^2Y2|X2)-I(U2;X1)",
            ),
            Inequality::new(vec![o, o], sum_cap, "R1+R2 <= ... -I(U1X1;U2)"),
        ],
    }
}

/// Marton-form region with a common message, built from the five classical terms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MartonTerms<T> {
    /// `I(U0,U1;Y1)`
    pub common1: T,
    /// `I(U0,U2;Y2)`
    pub common2: T,
    /// `I(U1;Y1|U0)`
    pub private1: T,
    /// `I(U2;Y2|U0)`
    pub private2: T,
    /// `I(U1;U2|U0)`
    pub binning: T,
}

impl<T: Real> MartonTerms<T> {
    pub fn from_distribution(pd: &FiniteJointDistribution<T>, unit: RateUnit) -> Result<Self> {
        let t = NamedTerms::new(pd, unit)?;
        Ok(MartonTerms {
            common1: t.cmi(&["U0", "U1"], &["Y1"], &[])?,
            common2: t.cmi(&["U0", "U2"], &["Y2"], &[])?,
            private1: t.cmi(&["U1"], &["Y1"], &["U0"])?,
            private2: t.cmi(&["U2"], &["Y2"], &["U0"])?,
            binning: t.cmi(&["U1"], &["U2"], &["U0"])?,
        })
    }

    pub fn region(&self) -> RateRegion<T> {
        let c = |a: f64, b: f64, d: f64| vec![lit::<T>(a), lit(b), lit(d)];
        RateRegion {
            dim: 3,
            inequalities: vec![
                Inequality::new(c(1.0, 1.0, 0.0), self.common1, "R0+R1 <= I(U0U1;Y1)"),
                Inequality::new(c(1.0, 0.0, 1.0), self.common2, "R0+R2 <= I(U0U2;Y2)"),
                Inequality::new(
                    c(1.0, 1.0, 1.0),
                    self.common1 + self.private2 - self.binning,
                    "R0+R1+R2 <= I(U0U1;Y1)+I(U2;Y2|U0)-I(U1;U2|U0)",
                ),
                Inequality::new(
                    c(1.0, 1.0, 1.0),
                    self.private1 + self.common2 - self.binning,
                    "R0+R1+R2 <= I(U1;Y1|U0)+I(U0U2;Y2)-I(U1;U2|U0)",
                ),
                Inequality::new(
                    c(2.0, 1.0, 1.0),
                    self.common1 + self.common2 - self.binning,
                    "2R0+R1+R2 <= I(U0U1;Y1)+I(U0U2;Y2)-I(U1;U2|U0)",
                ),
            ],
        }
    }
}

/// Grid step used when comparing two polytopes pointwise.
pub const GRID_STEP: f64 = 0.05;

/// True when both regions agree on membership at every point of the
/// `step`-grid over `[0, hi]^3`.
pub fn regions_agree_on_grid<T: Real>(
    a: &RateRegion<T>,
    b: &RateRegion<T>,
    hi: T,
    step: T,
    tol: T,
) -> bool {
    let n = (hi / step).floor().to_usize().unwrap_or(0);
    let axis: Vec<T> = (0..=n).map(|k| step * lit(k as f64)).collect();
    axis.iter().all(|&r0| {
        axis.iter().all(|&r1| {
            axis.iter()
                .all(|&r2| a.contains(&[r0, r1, r2], tol) == b.contains(&[r0, r1, r2], tol))
        })
    })
}

/// With `X1`, `X2`, `V0` constant (or absent) the DF/CF region must coincide
/// with the Marton region; checks this on a 0.05-grid. The reduction also
/// needs `Z1 = Y1` and `Ẑ2 = Y2`; when those do not hold the regions
/// generally differ and the check reports `false`.
pub fn marton_reduction_check<T: Real>(
    pd: &FiniteJointDistribution<T>,
    unit: RateUnit,
) -> Result<bool> {
    for name in ["X1", "X2", "V0"] {
        if pd.has_variable(name) && !pd.is_degenerate(name)? {
            return Err(Error::Precondition(format!(
                "`{name}` must be constant for the Marton reduction"
            )));
        }
    }
    let q = InfoQuantities::from_distribution(pd, unit)?;
    let marton = MartonTerms::from_distribution(pd, unit)?;
    if q.pen_u2_x1.abs() > lit(MEMBERSHIP_TOL) {
        return Ok(false);
    }
    let hi = q.i1.max(q.i2).max(marton.common1).max(marton.common2) + lit(GRID_STEP);
    Ok(regions_agree_on_grid(
        &theorem1_region(&q),
        &marton.region(),
        hi,
        lit(GRID_STEP),
        lit(MEMBERSHIP_TOL),
    ))
}
