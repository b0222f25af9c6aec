//! Bounded maximizers on `[0,1]` and `[0,1]^2`.
//!
//! Both scan a coarse grid first and then refine around the best grid
//! point. Ties always resolve toward the smaller parameter (lexicographic in
//! 2-D): a later candidate replaces the incumbent only on strict improvement.

use crate::num::{lit, Real};

/// Default coarse grid spacing.
pub const COARSE_STEP: f64 = 1e-2;
/// Default parameter resolution of the refinement stage.
pub const REFINE_TOL: f64 = 1e-5;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[inline]
fn score<T: Real>(v: T) -> T {
    if v.is_nan() {
        T::neg_infinity()
    } else {
        v
    }
}

fn grid<T: Real>(step: T) -> Vec<T> {
    let ratio = T::one() / step;
    let n = if (ratio - ratio.round()).abs() < lit(1e-9) {
        ratio.round()
    } else {
        ratio.ceil()
    };
    let n = n.to_usize().unwrap_or(1).max(1);
    let step = T::one() / lit(n as f64);
    (0..=n)
        .map(|k| {
            if k == n {
                T::one()
            } else {
                step * lit(k as f64)
            }
        })
        .collect()
}

/// Maximizes `f` over `[0,1]`: coarse scan, then golden-section search on
/// the bracket around the best grid point. Returns `(x*, f(x*))`.
pub fn maximize_1d<T: Real>(f: impl Fn(T) -> T, coarse_step: T, refine_tol: T) -> (T, T) {
    let xs = grid(coarse_step);
    let mut best = 0;
    let mut best_f = score(f(xs[0]));
    for (k, &x) in xs.iter().enumerate().skip(1) {
        let v = score(f(x));
        if v > best_f {
            best = k;
            best_f = v;
        }
    }
    let mut a = xs[best.saturating_sub(1)];
    let mut b = xs[(best + 1).min(xs.len() - 1)];
    let g = lit::<T>(INV_PHI);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (score(f(c)), score(f(d)));
    // Below a few ulps the bracket stops shrinking.
    let refine_tol = refine_tol.max(T::epsilon() * lit(16.0));
    let mut iterations = 0;
    while b - a > refine_tol && iterations < 200 {
        iterations += 1;
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = score(f(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = score(f(d));
        }
    }
    let x = (a + b) * lit(0.5);
    let fx = score(f(x));
    if fx > best_f {
        (x, fx)
    } else {
        (xs[best], best_f)
    }
}

/// Maximizes `f(x, y)` over `[0,1]^2`: coarse grid, then repeated 21x21
/// local grids whose spacing shrinks tenfold per round until it reaches
/// `refine_tol`. Returns `((x*, y*), f(x*, y*))`.
pub fn maximize_2d<T: Real>(f: impl Fn(T, T) -> T, coarse_step: T, refine_tol: T) -> ((T, T), T) {
    let xs = grid(coarse_step);
    let mut best = (xs[0], xs[0]);
    let mut best_f = score(f(best.0, best.1));
    for &x in &xs {
        for &y in &xs {
            let v = score(f(x, y));
            if v > best_f {
                best = (x, y);
                best_f = v;
            }
        }
    }
    let mut h = xs[1] - xs[0];
    let refine_tol = refine_tol.max(T::epsilon() * lit(16.0));
    let ten = lit::<T>(10.0);
    while h > refine_tol {
        let fine = (h / ten).max(refine_tol);
        let (cx, cy) = best;
        for i in -10i32..=10 {
            let x = (cx + fine * lit(i as f64)).max(T::zero()).min(T::one());
            for j in -10i32..=10 {
                let y = (cy + fine * lit(j as f64)).max(T::zero()).min(T::one());
                let v = score(f(x, y));
                if v > best_f || (v == best_f && (x, y) < best) {
                    best = (x, y);
                    best_f = v;
                }
            }
        }
        h = fine;
    }
    (best, best_f)
}

/// [`maximize_1d`] with the default step and tolerance.
pub fn argmax_unit<T: Real>(f: impl Fn(T) -> T) -> (T, T) {
    maximize_1d(f, lit(COARSE_STEP), lit(REFINE_TOL))
}

/// [`maximize_2d`] with the default step and tolerance.
pub fn argmax_unit_square<T: Real>(f: impl Fn(T, T) -> T) -> ((T, T), T) {
    maximize_2d(f, lit(COARSE_STEP), lit(REFINE_TOL))
}
