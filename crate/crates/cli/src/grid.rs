//! `start:stop:step` ranges and grid flags.

use std::str::FromStr;

/// Endpoint slack when deciding whether `stop` is on the grid.
pub const ENDPOINT_TOL: f64 = 1e-12;
pub const MAX_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    /// `start, start + step, ...` up to `stop`, which is included when it
    /// lies within [`ENDPOINT_TOL`] of a grid point.
    pub fn values(&self) -> Vec<f64> {
        let span = self.stop - self.start;
        let mut n = (span / self.step).floor() as usize;
        if self.start + (n + 1) as f64 * self.step <= self.stop + ENDPOINT_TOL {
            n += 1;
        }
        (0..=n)
            .map(|k| {
                let v = self.start + k as f64 * self.step;
                if (v - self.stop).abs() <= ENDPOINT_TOL {
                    self.stop
                } else {
                    v
                }
            })
            .collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts.as_slice() else {
            return Err(format!("expected start:stop:step, got {s:?}"));
        };
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("not a number: {t:?} in {s:?}"))
        };
        let (start, stop, step) = (num(a)?, num(b)?, num(c)?);
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(format!("non-finite value in {s:?}"));
        }
        if step <= 0.0 {
            return Err(format!("step must be positive in {s:?}"));
        }
        if stop < start {
            return Err(format!("stop below start in {s:?}"));
        }
        if (stop - start) / step > MAX_POINTS as f64 {
            return Err(format!("{s:?} has more than {MAX_POINTS} points"));
        }
        Ok(Range { start, stop, step })
    }
}

/// A `--sweep` argument: `name=start:stop:step`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub name: String,
    pub range: Range,
}

impl FromStr for Sweep {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| format!("expected name=start:stop:step, got {s:?}"))?;
        Ok(Sweep {
            name: name.trim().to_string(),
            range: range.parse()?,
        })
    }
}

/// Grid flag: a point count `N` (evenly spaced on [0, 1]) or an explicit range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridSpec {
    Count(usize),
    Range(Range),
}

impl GridSpec {
    pub fn values(&self) -> Vec<f64> {
        match self {
            GridSpec::Count(n) => brc_core::strategy::unit_grid(*n),
            GridSpec::Range(r) => r.values(),
        }
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GridSpec::Count(n) => write!(f, "{n}"),
            GridSpec::Range(r) => write!(f, "{}:{}:{}", r.start, r.stop, r.step),
        }
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.contains(':') {
            return Ok(GridSpec::Range(s.parse()?));
        }
        let n: usize = s
            .trim()
            .parse()
            .map_err(|_| format!("expected a count or start:stop:step, got {s:?}"))?;
        if n > MAX_POINTS {
            return Err(format!("{n} exceeds {MAX_POINTS} points"));
        }
        Ok(GridSpec::Count(n))
    }
}
