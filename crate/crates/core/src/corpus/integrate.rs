//! Deterministic adaptive integrator built on a nested 7/15 Gauss–Kronrod pair.
//!
//! Subdivision is plain bisection with the local tolerance split evenly, so a
//! given (integrand, interval, tolerance) triple always produces bit-identical
//! output. Non-finite samples abort immediately rather than poisoning sums.

// The node and weight tables keep every digit of the standard tabulation.
#![allow(clippy::excessive_precision)]

use crate::error::{Error, Result};
use crate::Interval;

/// Abscissae of the 15-point Kronrod rule (positive half, descending).
/// Every second entry starting from index 1 is a node of the embedded
/// 7-point Gauss rule.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_2,
    0.949_107_912_342_758_524_5,
    0.864_864_423_359_769_072_8,
    0.741_531_185_599_394_439_9,
    0.586_087_235_467_691_130_3,
    0.405_845_151_377_397_166_9,
    0.207_784_955_007_898_467_6,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_96,
    0.063_092_092_629_978_553_29,
    0.104_790_010_322_250_183_8,
    0.140_653_259_715_525_918_7,
    0.169_004_726_639_267_902_8,
    0.190_350_578_064_785_409_9,
    0.204_432_940_075_298_892_4,
    0.209_482_141_084_727_828_0,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_3,
    0.279_705_391_489_276_667_9,
    0.381_830_050_505_118_944_9,
    0.417_959_183_673_469_387_8,
];

const MAX_DEPTH: u32 = 60;

/// Default absolute tolerance for internal integrations over `iv`:
/// 1e-10 per unit length, floored away from zero for degenerate widths.
pub fn default_tol(iv: &Interval) -> f64 {
    (1e-10 * iv.width()).max(1e-300)
}

#[inline]
fn sample<F: Fn(f64) -> f64>(f: &F, t: f64) -> Result<f64> {
    let v = f(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { t })
    }
}

/// One 15-point Kronrod application on [lo, hi]; returns (kronrod, gauss).
fn gk15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    let half = 0.5 * (hi - lo);
    let center = 0.5 * (lo + hi);

    let fc = sample(f, center)?;
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;

    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = sample(f, center - dx)? + sample(f, center + dx)?;
        resk += WGK[j] * fsum;
        if j % 2 == 1 {
            resg += WG[j / 2] * fsum;
        }
    }
    Ok((resk * half, resg * half))
}

fn adapt<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64, depth: u32) -> Result<f64> {
    let (resk, resg) = gk15(f, lo, hi)?;
    let err = (resk - resg).abs();
    if err <= tol {
        return Ok(resk);
    }
    let mid = 0.5 * (lo + hi);
    if depth >= MAX_DEPTH || mid <= lo || mid >= hi {
        return Err(Error::NoConvergence { depth });
    }
    let left = adapt(f, lo, mid, 0.5 * tol, depth + 1)?;
    let right = adapt(f, mid, hi, 0.5 * tol, depth + 1)?;
    Ok(left + right)
}

/// Integrates `f` over `iv` to absolute accuracy `tol`.
///
/// Deterministic: identical inputs produce bit-identical results. Fails with
/// `NonFinite` on the first NaN/infinite sample and `NoConvergence` if the
/// local error estimate still exceeds its share of `tol` at depth 60.
pub fn reference_integrate<F: Fn(f64) -> f64>(f: F, iv: &Interval, tol: f64) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "integration tolerance must be a finite positive number, got {tol}"
        )));
    }
    adapt(&f, iv.a(), iv.b(), tol, 0)
}

/// Integrates `f` over `iv`, forcing subdivision at the given break points.
///
/// Break points outside the open interval are ignored; the tolerance is split
/// across pieces in proportion to width. Intended for integrands that are
/// only piecewise smooth (a kernel with a jump at x, an |g|^p kink set).
pub fn integrate_with_breaks<F: Fn(f64) -> f64>(
    f: F,
    iv: &Interval,
    breaks: &[f64],
    tol: f64,
) -> Result<f64> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "integration tolerance must be a finite positive number, got {tol}"
        )));
    }
    let (a, b) = (iv.a(), iv.b());
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|t| *t > a && *t < b)
        .collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let width = b - a;
    let mut total = 0.0;
    let mut lo = a;
    for cut in cuts.into_iter().chain(std::iter::once(b)) {
        if cut <= lo {
            continue;
        }
        let piece_tol = (tol * ((cut - lo) / width)).max(1e-300);
        total += adapt(&f, lo, cut, piece_tol, 0)?;
        lo = cut;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn polynomial_is_exact_at_depth_zero() {
        let v = reference_integrate(|t| t * t, &iv(0.0, 1.0), 1e-12).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
    }

    type Case = (Box<dyn Fn(f64) -> f64>, f64, f64, f64);

    #[test]
    fn matches_antiderivatives_on_smooth_corpus() {
        let cases: Vec<Case> = vec![
            (Box::new(f64::exp), 0.0, 1.0, std::f64::consts::E - 1.0),
            (
                Box::new(|t: f64| (3.0 * t).sin()),
                -0.5,
                2.0,
                ((-1.5f64).cos() - 6.0f64.cos()) / 3.0,
            ),
            (
                Box::new(|t: f64| 1.0 / (1.0 + t * t)),
                -0.5,
                2.0,
                2.0f64.atan() - (-0.5f64).atan(),
            ),
        ];
        for (f, a, b, exact) in cases {
            let v = reference_integrate(&f, &iv(a, b), 1e-12).unwrap();
            assert!((v - exact).abs() <= 1e-12, "got {v}, want {exact}");
        }
    }

    #[test]
    fn kink_integrand_converges() {
        // |t - 1/3| has a kink at an awkward (non-dyadic) point.
        let v = reference_integrate(|t: f64| (t - 1.0 / 3.0).abs(), &iv(0.0, 1.0), 1e-12).unwrap();
        let exact = (1.0 / 3.0f64).powi(2) / 2.0 + (2.0 / 3.0f64).powi(2) / 2.0;
        assert!((v - exact).abs() <= 1e-12);
    }

    #[test]
    fn breaks_handle_jump_discontinuities() {
        let theta = 0.3;
        let f = move |t: f64| if t <= theta { 1.0 } else { 5.0 };
        let v = integrate_with_breaks(f, &iv(0.0, 1.0), &[theta], 1e-12).unwrap();
        assert!((v - (0.3 + 5.0 * 0.7)).abs() <= 1e-12);
    }

    #[test]
    fn non_finite_sample_is_reported() {
        let r = reference_integrate(|t: f64| (t - 0.5).ln(), &iv(0.0, 1.0), 1e-10);
        assert!(matches!(r, Err(Error::NonFinite { .. })));
    }

    #[test]
    fn deterministic_bits() {
        let run =
            || reference_integrate(|t: f64| (10.0 * t).sin().exp(), &iv(0.0, 2.0), 1e-11).unwrap();
        assert_eq!(run().to_bits(), run().to_bits());
    }

    #[test]
    fn rejects_bad_tolerance() {
        assert!(reference_integrate(|t| t, &iv(0.0, 1.0), 0.0).is_err());
        assert!(reference_integrate(|t| t, &iv(0.0, 1.0), f64::NAN).is_err());
    }
}
