//! Extremum location by dense scanning plus golden-section refinement.
//!
//! The scan is an upper envelope up to the refinement tolerance: the returned
//! value always dominates every sampled value, so downstream inequalities can
//! treat it as the supremum for test purposes.

use crate::error::{Error, Result};
use crate::Interval;

const SAMPLES: usize = 4097;
const GOLDEN_ITERS: usize = 60;
const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[inline]
fn sample<F: Fn(f64) -> f64>(f: &F, t: f64) -> Result<f64> {
    let v = f(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { t })
    }
}

fn golden_max<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> Result<f64> {
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = sample(f, c)?;
    let mut fd = sample(f, d)?;
    for _ in 0..GOLDEN_ITERS {
        if fc > fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = sample(f, c)?;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = sample(f, d)?;
        }
    }
    Ok(fc.max(fd))
}

/// Maximum of `f` over `iv`: 4097-point scan, then golden-section refinement
/// around the best bracket. Never returns less than the best sampled value.
pub fn max_on<F: Fn(f64) -> f64>(f: &F, iv: &Interval) -> Result<f64> {
    let (a, b) = (iv.a(), iv.b());
    let n = SAMPLES;
    let step = (b - a) / (n - 1) as f64;
    let mut best = f64::NEG_INFINITY;
    let mut best_i = 0usize;
    for i in 0..n {
        let t = if i + 1 == n { b } else { a + step * i as f64 };
        let v = sample(f, t)?;
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = if best_i == 0 {
        a
    } else {
        a + step * (best_i - 1) as f64
    };
    let hi = if best_i + 1 >= n {
        b
    } else {
        a + step * (best_i + 1) as f64
    };
    let refined = golden_max(f, lo, hi)?;
    Ok(best.max(refined))
}

/// Minimum of `f` over `iv`.
pub fn min_on<F: Fn(f64) -> f64>(f: &F, iv: &Interval) -> Result<f64> {
    let neg = max_on(&|t| -f(t), iv)?;
    Ok(-neg)
}

/// (min, max) of `f` over `iv`.
pub fn range_on<F: Fn(f64) -> f64>(f: &F, iv: &Interval) -> Result<(f64, f64)> {
    Ok((min_on(f, iv)?, max_on(f, iv)?))
}

/// Supremum of |f| over `iv`.
pub fn sup_abs_on<F: Fn(f64) -> f64>(f: &F, iv: &Interval) -> Result<f64> {
    max_on(&|t| f(t).abs(), iv)
}
