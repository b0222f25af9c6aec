//! Finite-alphabet information measures and the Gaussian capacity function.
//!
//! Joint distributions are stored as a flat mass array indexed in row-major
//! mixed-radix order (the last variable varies fastest). All measures are
//! computed from marginals, so any `I(A;B|C)` reduces to four entropies.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{lit, tolerance, Real};

/// Masses below this are treated as exact zeros when taking logarithms.
pub const ZERO_MASS: f64 = 1e-15;

/// Absolute tolerance on the total mass of a distribution.
pub const SUM_TOLERANCE: f64 = 1e-12;

/// Unit of a rate: base-2 (bits) or natural (nats) logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateUnit {
    #[default]
    Bits,
    Nats,
}

impl RateUnit {
    /// Converts a value measured in nats into this unit.
    pub fn from_nats<T: Real>(self, nats: T) -> T {
        match self {
            RateUnit::Bits => nats / T::LN_2(),
            RateUnit::Nats => nats,
        }
    }

    /// Converts a value measured in this unit into nats.
    pub fn to_nats<T: Real>(self, value: T) -> T {
        match self {
            RateUnit::Bits => value * T::LN_2(),
            RateUnit::Nats => value,
        }
    }

    /// Logarithm in this unit's base.
    pub fn log<T: Real>(self, x: T) -> T {
        match self {
            RateUnit::Bits => x.log2(),
            RateUnit::Nats => x.ln(),
        }
    }
}

impl fmt::Display for RateUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RateUnit::Bits => f.write_str("bits"),
            RateUnit::Nats => f.write_str("nats"),
        }
    }
}

/// A non-negative information rate tagged with its unit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate<T> {
    pub value: T,
    pub unit: RateUnit,
}

impl<T: Real> Rate<T> {
    /// Builds a rate, clamping negative values (round-off or a negative
    /// closed-form expression) to zero.
    pub fn new(value: T, unit: RateUnit) -> Self {
        Rate {
            value: value.max(T::zero()),
            unit,
        }
    }

    pub fn zero(unit: RateUnit) -> Self {
        Rate {
            value: T::zero(),
            unit,
        }
    }

    pub fn in_unit(self, unit: RateUnit) -> Self {
        Rate {
            value: unit.from_nats(self.unit.to_nats(self.value)),
            unit,
        }
    }
}

/// `C(x) = 1/2 log(1 + x)`, the capacity of a real Gaussian channel at SNR `x`.
pub fn capacity_c<T: Real>(snr: T, unit: RateUnit) -> Result<Rate<T>> {
    if snr.is_nan() || snr < T::zero() {
        return Err(Error::Domain(format!(
            "capacity_c needs snr >= 0, got {snr}"
        )));
    }
    Ok(Rate::new(gaussian_capacity(snr, unit), unit))
}

/// Unchecked `C(x)` for closed forms whose argument is non-negative by
/// construction; a negative argument (round-off) is clamped to zero.
#[inline]
pub(crate) fn gaussian_capacity<T: Real>(snr: T, unit: RateUnit) -> T {
    let snr = snr.max(T::zero());
    unit.from_nats(lit::<T>(0.5) * snr.ln_1p())
}

/// Probability mass over a product of named finite alphabets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution<T>", into = "RawDistribution<T>")]
#[serde(bound(
    serialize = "T: Real + Serialize",
    deserialize = "T: Real + Deserialize<'de>"
))]
pub struct FiniteJointDistribution<T> {
    variables: Vec<String>,
    sizes: Vec<usize>,
    mass: Vec<T>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDistribution<T> {
    variables: Vec<String>,
    sizes: Vec<usize>,
    mass: Vec<T>,
}

impl<T: Real> TryFrom<RawDistribution<T>> for FiniteJointDistribution<T> {
    type Error = Error;

    fn try_from(raw: RawDistribution<T>) -> Result<Self> {
        FiniteJointDistribution::new(raw.variables, raw.sizes, raw.mass)
    }
}

impl<T: Real> From<FiniteJointDistribution<T>> for RawDistribution<T> {
    fn from(pd: FiniteJointDistribution<T>) -> Self {
        RawDistribution {
            variables: pd.variables,
            sizes: pd.sizes,
            mass: pd.mass,
        }
    }
}

impl<T: Real> FiniteJointDistribution<T> {
    /// Validating constructor: masses must be non-negative and sum to one
    /// within [`SUM_TOLERANCE`]. Nothing is renormalized.
    pub fn new<S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
        sizes: Vec<usize>,
        mass: Vec<T>,
    ) -> Result<Self> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        Self::check_shape(&variables, &sizes, mass.len())?;
        for (i, &m) in mass.iter().enumerate() {
            if !m.is_finite() || m < T::zero() {
                return Err(Error::InvalidDistribution(format!(
                    "mass[{i}] = {m} is not a probability"
                )));
            }
        }
        let total: T = mass.iter().copied().sum();
        if (total - T::one()).abs() > tolerance(SUM_TOLERANCE) {
            return Err(Error::InvalidDistribution(format!(
                "masses sum to {total}, not 1"
            )));
        }
        Ok(FiniteJointDistribution {
            variables,
            sizes,
            mass,
        })
    }

    /// Builds a distribution from non-negative weights, dividing by their sum.
    pub fn from_weights<S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
        sizes: Vec<usize>,
        weights: Vec<T>,
    ) -> Result<Self> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        Self::check_shape(&variables, &sizes, weights.len())?;
        if weights.iter().any(|w| !w.is_finite() || *w < T::zero()) {
            return Err(Error::InvalidDistribution(
                "weights must be finite and non-negative".into(),
            ));
        }
        let total: T = weights.iter().copied().sum();
        if total <= T::zero() {
            return Err(Error::InvalidDistribution("weights sum to zero".into()));
        }
        let mass = weights.into_iter().map(|w| w / total).collect();
        Ok(FiniteJointDistribution {
            variables,
            sizes,
            mass,
        })
    }

    /// Builds a distribution by evaluating `weight` on every outcome tuple.
    pub fn from_fn<S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
        sizes: Vec<usize>,
        mut weight: impl FnMut(&[usize]) -> T,
    ) -> Result<Self> {
        let len = sizes.iter().product::<usize>();
        let mut outcome = vec![0; sizes.len()];
        let mut weights = Vec::with_capacity(len);
        for flat in 0..len {
            decode_index(flat, &sizes, &mut outcome);
            weights.push(weight(&outcome));
        }
        Self::from_weights(variables, sizes, weights)
    }

    pub fn from_json(text: &str) -> Result<Self>
    where
        T: for<'de> Deserialize<'de>,
    {
        Ok(serde_json::from_str(text)?)
    }

    fn check_shape(variables: &[String], sizes: &[usize], len: usize) -> Result<()> {
        if variables.len() != sizes.len() {
            return Err(Error::InvalidDistribution(format!(
                "{} variables but {} alphabet sizes",
                variables.len(),
                sizes.len()
            )));
        }
        for (i, name) in variables.iter().enumerate() {
            if variables[..i].contains(name) {
                return Err(Error::InvalidDistribution(format!(
                    "duplicate variable `{name}`"
                )));
            }
        }
        if let Some(i) = sizes.iter().position(|&s| s == 0) {
            return Err(Error::InvalidDistribution(format!(
                "variable `{}` has an empty alphabet",
                variables[i]
            )));
        }
        let expected = sizes
            .iter()
            .try_fold(1usize, |acc, &s| acc.checked_mul(s))
            .ok_or_else(|| Error::InvalidDistribution("alphabet product overflows".into()))?;
        if expected != len {
            return Err(Error::InvalidDistribution(format!(
                "mass has {len} entries, alphabet product is {expected}"
            )));
        }
        Ok(())
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn mass(&self) -> &[T] {
        &self.mass
    }

    pub fn has_variable(&self, name: &str) -> bool {
        self.variables.iter().any(|v| v == name)
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    fn indices_of(&self, names: &[&str]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(names.len());
        for name in names {
            let idx = self.index_of(name)?;
            if out.contains(&idx) {
                return Err(Error::InvalidArgument(format!(
                    "variable `{name}` listed twice"
                )));
            }
            out.push(idx);
        }
        Ok(out)
    }

    /// Marginal mass on `names`, in the order given (last name fastest).
    pub fn marginal(&self, names: &[&str]) -> Result<Vec<T>> {
        let idx = self.indices_of(names)?;
        Ok(self.marginal_by_index(&idx))
    }

    fn marginal_by_index(&self, idx: &[usize]) -> Vec<T> {
        let sub_sizes: Vec<usize> = idx.iter().map(|&i| self.sizes[i]).collect();
        let mut out = vec![T::zero(); sub_sizes.iter().product()];
        let mut outcome = vec![0; self.sizes.len()];
        for (flat, &m) in self.mass.iter().enumerate() {
            if m == T::zero() {
                continue;
            }
            decode_index(flat, &self.sizes, &mut outcome);
            let mut k = 0;
            for (&i, &s) in idx.iter().zip(&sub_sizes) {
                k = k * s + outcome[i];
            }
            out[k] = out[k] + m;
        }
        out
    }

    fn entropy_nats(&self, idx: &[usize]) -> T {
        if idx.is_empty() {
            return T::zero();
        }
        let cutoff = lit::<T>(ZERO_MASS);
        let h: T = self
            .marginal_by_index(idx)
            .into_iter()
            .filter(|&p| p > cutoff)
            .map(|p| -p * p.ln())
            .sum();
        h.max(T::zero())
    }

    /// Shannon entropy of the marginal on `subset`.
    pub fn entropy(&self, subset: &[&str], unit: RateUnit) -> Result<Rate<T>> {
        let idx = self.indices_of(subset)?;
        Ok(Rate::new(unit.from_nats(self.entropy_nats(&idx)), unit))
    }

    /// `I(A;B|C)`, computed as `H(A,C) + H(B,C) - H(A,B,C) - H(C)`.
    /// `c` may be empty. The three sets must be pairwise disjoint.
    pub fn conditional_mutual_information(
        &self,
        a: &[&str],
        b: &[&str],
        c: &[&str],
        unit: RateUnit,
    ) -> Result<Rate<T>> {
        let (ia, ib, ic) = (
            self.indices_of(a)?,
            self.indices_of(b)?,
            self.indices_of(c)?,
        );
        for (x, y, what) in [
            (&ia, &ib, "a and b"),
            (&ia, &ic, "a and c"),
            (&ib, &ic, "b and c"),
        ] {
            if x.iter().any(|i| y.contains(i)) {
                return Err(Error::InvalidArgument(format!("sets {what} overlap")));
            }
        }
        let join = |parts: &[&Vec<usize>]| {
            parts
                .iter()
                .flat_map(|p| p.iter().copied())
                .collect::<Vec<_>>()
        };
        let nats = self.entropy_nats(&join(&[&ia, &ic])) + self.entropy_nats(&join(&[&ib, &ic]))
            - self.entropy_nats(&join(&[&ia, &ib, &ic]))
            - self.entropy_nats(&ic);
        Ok(Rate::new(unit.from_nats(nats), unit))
    }

    pub fn mutual_information(&self, a: &[&str], b: &[&str], unit: RateUnit) -> Result<Rate<T>> {
        self.conditional_mutual_information(a, b, &[], unit)
    }

    /// True when `name` takes a single value almost surely.
    pub fn is_degenerate(&self, name: &str) -> Result<bool> {
        let idx = self.index_of(name)?;
        let cutoff = lit::<T>(ZERO_MASS);
        let support = self
            .marginal_by_index(&[idx])
            .into_iter()
            .filter(|&p| p > cutoff)
            .count();
        Ok(support <= 1)
    }
}

/// Decodes a flat row-major index into per-variable outcomes.
fn decode_index(mut flat: usize, sizes: &[usize], outcome: &mut [usize]) {
    for (slot, &s) in outcome.iter_mut().zip(sizes).rev() {
        *slot = flat % s;
        flat /= s;
    }
}

/// Names accepted for the compressed relay observation.
pub const ZHAT2_NAMES: [&str; 2] = ["Ẑ2", "Zhat2"];

/// Outcome of the compression feasibility test `I(X2;Y2) >= I(Z2;Ẑ2|X2,Y2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Admissibility<T> {
    pub admissible: bool,
    /// `I(X2;Y2) - I(Z2;Ẑ2|X2,Y2)`; non-negative iff admissible.
    pub slack: T,
}

/// Checks that the relay-to-destination link of the CF branch can carry the
/// compression index. The compressed variable may be named `Ẑ2` or `Zhat2`.
pub fn admissibility_check<T: Real>(
    pd: &FiniteJointDistribution<T>,
    unit: RateUnit,
) -> Result<Admissibility<T>> {
    let zhat = ZHAT2_NAMES
        .iter()
        .copied()
        .find(|n| pd.has_variable(n))
        .ok_or_else(|| Error::UnknownVariable(ZHAT2_NAMES[0].to_string()))?;
    let link = pd.mutual_information(&["X2"], &["Y2"], unit)?.value;
    let cost = pd
        .conditional_mutual_information(&["Z2"], &[zhat], &["X2", "Y2"], unit)?
        .value;
    let slack = link - cost;
    Ok(Admissibility {
        admissible: slack >= -tolerance::<T>(SUM_TOLERANCE),
        slack,
    })
}
