//! Fourier–Motzkin elimination over named-variable inequality systems.
//!
//! Rows read `coeffs . vars <= bound`. Every produced row is scaled so its
//! largest absolute coefficient is one, and coefficients below
//! [`COMBINE_TOL`] in magnitude are flushed to zero.

mod brc;

pub use brc::{
    build_brc_constraints, check_projection, check_projection_default, BrcConstraints, CodingTerms,
    CompressionTerms, ProjectionCheck, BRC_HELPER_VARIABLES, BRC_RATE_VARIABLES,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::{lit, Real};
use crate::region::{Inequality, RateRegion};

/// Magnitude below which a coefficient is treated as zero.
pub const COMBINE_TOL: f64 = 1e-12;
/// Coefficient-wise tolerance when comparing normalized rows.
pub const ROW_MATCH_TOL: f64 = 1e-9;
/// Largest intermediate system elimination will build.
pub const MAX_ROWS: usize = 100_000;

const MAX_LABEL_LEN: usize = 160;

/// One row `coeffs . vars <= bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row<T> {
    pub coeffs: Vec<T>,
    pub bound: T,
    #[serde(default)]
    pub label: String,
}

impl<T: Real> Row<T> {
    pub fn new(coeffs: Vec<T>, bound: T, label: impl Into<String>) -> Self {
        Row {
            coeffs,
            bound,
            label: label.into(),
        }
    }

    fn lhs(&self, point: &[T]) -> T {
        self.coeffs.iter().zip(point).map(|(&a, &x)| a * x).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Divides by the largest absolute coefficient and flushes tiny entries.
    fn normalized(mut self) -> Self {
        let tol = lit::<T>(COMBINE_TOL);
        let scale = self.coeffs.iter().fold(T::zero(), |m, c| m.max(c.abs()));
        if scale > tol {
            for c in &mut self.coeffs {
                *c = *c / scale;
            }
            self.bound = self.bound / scale;
        }
        for c in &mut self.coeffs {
            if c.abs() <= tol {
                *c = T::zero();
            }
        }
        self
    }
}

/// Linear inequality system over an ordered list of named variables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem<T>", into = "RawSystem<T>")]
#[serde(bound(
    serialize = "T: Real + Serialize",
    deserialize = "T: Real + Deserialize<'de>"
))]
pub struct LinearInequalitySystem<T> {
    variables: Vec<String>,
    rows: Vec<Row<T>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSystem<T> {
    variables: Vec<String>,
    rows: Vec<Row<T>>,
}

impl<T: Real> TryFrom<RawSystem<T>> for LinearInequalitySystem<T> {
    type Error = Error;

    fn try_from(raw: RawSystem<T>) -> Result<Self> {
        LinearInequalitySystem::new(raw.variables, raw.rows)
    }
}

impl<T: Real> From<LinearInequalitySystem<T>> for RawSystem<T> {
    fn from(s: LinearInequalitySystem<T>) -> Self {
        RawSystem {
            variables: s.variables,
            rows: s.rows,
        }
    }
}

/// Bookkeeping returned by [`LinearInequalitySystem::eliminate_all`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationReport {
    pub eliminated: Vec<String>,
    pub rows_before: usize,
    pub rows_after: usize,
    pub redundant_removed: usize,
}

impl<T: Real> LinearInequalitySystem<T> {
    pub fn new<S: Into<String>>(
        variables: impl IntoIterator<Item = S>,
        rows: Vec<Row<T>>,
    ) -> Result<Self> {
        let variables: Vec<String> = variables.into_iter().map(Into::into).collect();
        for (i, v) in variables.iter().enumerate() {
            if variables[..i].contains(v) {
                return Err(Error::InvalidArgument(format!("duplicate variable `{v}`")));
            }
        }
        for row in &rows {
            if row.coeffs.len() != variables.len() {
                return Err(Error::InvalidArgument(format!(
                    "row `{}` has {} coefficients for {} variables",
                    row.label,
                    row.coeffs.len(),
                    variables.len()
                )));
            }
            if row
                .coeffs
                .iter()
                .chain([&row.bound])
                .any(|v| !v.is_finite())
            {
                return Err(Error::InvalidArgument(format!(
                    "row `{}` has a non-finite entry",
                    row.label
                )));
            }
        }
        Ok(LinearInequalitySystem { variables, rows })
    }

    pub fn empty<S: Into<String>>(variables: impl IntoIterator<Item = S>) -> Self {
        LinearInequalitySystem {
            variables: variables.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self>
    where
        T: for<'de> Deserialize<'de>,
    {
        Ok(serde_json::from_str(text)?)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn rows(&self) -> &[Row<T>] {
        &self.rows
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    /// Appends `sum(coeff * var) <= bound` from `(name, coeff)` pairs.
    pub fn add(&mut self, terms: &[(&str, f64)], bound: T, label: impl Into<String>) -> Result<()> {
        let mut coeffs = vec![T::zero(); self.variables.len()];
        for &(name, c) in terms {
            let i = self.index_of(name)?;
            coeffs[i] = coeffs[i] + lit(c);
        }
        if !bound.is_finite() {
            return Err(Error::InvalidArgument("bound must be finite".into()));
        }
        self.rows.push(Row::new(coeffs, bound, label));
        Ok(())
    }

    /// Adds `lhs == rhs` as two opposing rows.
    pub fn add_equality(&mut self, terms: &[(&str, f64)], rhs: T, label: &str) -> Result<()> {
        self.add(terms, rhs, format!("{label} (<=)"))?;
        let neg: Vec<(&str, f64)> = terms.iter().map(|&(n, c)| (n, -c)).collect();
        self.add(&neg, -rhs, format!("{label} (>=)"))
    }

    /// Every row holds at `point` up to `tol`.
    pub fn satisfies(&self, point: &[T], tol: T) -> bool {
        point.len() == self.variables.len()
            && self.rows.iter().all(|r| r.lhs(point) <= r.bound + tol)
    }

    /// Some row reads `0 <= b` with `b < -tol`.
    pub fn has_infeasible_row(&self, tol: T) -> bool {
        self.rows.iter().any(|r| r.is_zero() && r.bound < -tol)
    }

    /// Projects out `var`. Rows not involving `var` are kept; every pair of
    /// rows with opposite-sign coefficients on `var` is combined to cancel it.
    pub fn eliminate(&self, var: &str) -> Result<Self> {
        let k = self.index_of(var)?;
        let tol = lit::<T>(COMBINE_TOL);
        let (mut upper, mut lower, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for row in &self.rows {
            let c = row.coeffs[k];
            if c > tol {
                upper.push(row);
            } else if c < -tol {
                lower.push(row);
            } else {
                rest.push(row);
            }
        }
        let produced = upper.len() * lower.len() + rest.len();
        if produced > MAX_ROWS {
            return Err(Error::ResourceLimit {
                rows: produced,
                limit: MAX_ROWS,
            });
        }
        let drop_k = |coeffs: &[T]| -> Vec<T> {
            coeffs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != k)
                .map(|(_, &c)| c)
                .collect()
        };
        let mut rows: Vec<Row<T>> = rest
            .into_iter()
            .map(|r| Row::new(drop_k(&r.coeffs), r.bound, r.label.clone()).normalized())
            .collect();
        for p in &upper {
            let sp = p.coeffs[k];
            for n in &lower {
                let sn = -n.coeffs[k];
                let coeffs: Vec<T> = p
                    .coeffs
                    .iter()
                    .zip(&n.coeffs)
                    .map(|(&a, &b)| a / sp + b / sn)
                    .collect();
                let bound = p.bound / sp + n.bound / sn;
                rows.push(
                    Row::new(drop_k(&coeffs), bound, combine_labels(&p.label, &n.label))
                        .normalized(),
                );
            }
        }
        let variables = self
            .variables
            .iter()
            .filter(|v| *v != var)
            .cloned()
            .collect();
        Ok(LinearInequalitySystem { variables, rows })
    }

    /// Eliminates `vars` in order, pruning redundant rows after each step.
    pub fn eliminate_all(&self, vars: &[&str]) -> Result<(Self, EliminationReport)> {
        for v in vars {
            self.index_of(v)?;
        }
        let mut sys = self.clone();
        let mut removed = 0;
        for v in vars {
            let next = sys.eliminate(v)?;
            let before = next.rows.len();
            sys = next.prune_redundant();
            removed += before - sys.rows.len();
        }
        let report = EliminationReport {
            eliminated: vars.iter().map(|v| v.to_string()).collect(),
            rows_before: self.rows.len(),
            rows_after: sys.rows.len(),
            redundant_removed: removed,
        };
        Ok((sys, report))
    }

    /// Removes rows whose normalized coefficient vector repeats another row's
    /// with a looser bound, and trivially true `0 <= b` rows. Of several
    /// infeasible `0 <= b` rows only the most violated is kept. The feasible
    /// set is unchanged.
    pub fn prune_redundant(&self) -> Self {
        let tol = lit::<T>(ROW_MATCH_TOL);
        let mut kept: Vec<Row<T>> = Vec::with_capacity(self.rows.len());
        for row in self.rows.iter().cloned().map(Row::normalized) {
            if row.is_zero() && row.bound >= T::zero() {
                continue;
            }
            let twin = kept.iter_mut().find(|k| {
                k.coeffs
                    .iter()
                    .zip(&row.coeffs)
                    .all(|(&a, &b)| (a - b).abs() <= tol)
            });
            match twin {
                Some(k) => {
                    if row.bound < k.bound {
                        *k = row;
                    }
                }
                None => kept.push(row),
            }
        }
        LinearInequalitySystem {
            variables: self.variables.clone(),
            rows: kept,
        }
    }

    /// Reads the system as a region over `names`, which must be exactly the
    /// remaining variables (in any order).
    pub fn to_rate_region(&self, names: &[&str]) -> Result<RateRegion<T>> {
        if names.len() != self.variables.len() {
            return Err(Error::InvalidArgument(format!(
                "system has variables {:?}, asked for {:?}",
                self.variables, names
            )));
        }
        let perm = names
            .iter()
            .map(|n| self.index_of(n))
            .collect::<Result<Vec<_>>>()?;
        let rows = self
            .rows
            .iter()
            .map(|r| {
                Inequality::new(
                    perm.iter().map(|&i| r.coeffs[i]).collect(),
                    r.bound,
                    r.label.clone(),
                )
            })
            .collect();
        RateRegion::new(names.len(), rows)
    }
}

fn combine_labels(a: &str, b: &str) -> String {
    let joined = format!("{a} + {b}");
    if joined.len() <= MAX_LABEL_LEN {
        joined
    } else {
        let terms = joined.matches(" + ").count() + 1;
        format!("combination of {terms} rows")
    }
}
