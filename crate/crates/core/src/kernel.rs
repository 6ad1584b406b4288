//! Offset parabolic comparison kernels and their exact moment statistics.
//!
//! The second-derivative kernel is piecewise parabolic with vertices pulled
//! inward from the interval endpoints by s = h (b - a) / 2; the matching
//! first-derivative kernel is the piecewise linear ramp through the same
//! vertices. Every moment the bounds need has a closed form here, which also
//! serves as the oracle for the numeric integration paths.

use crate::corpus::{integrate_with_breaks, Interval};
use crate::error::{Error, Result};

/// Relative interiority margin required of the evaluation point.
pub const INTERIOR_MARGIN: f64 = 1e-9;

/// Nonnegative left/right weights, not both zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weights {
    alpha: f64,
    beta: f64,
}

impl Weights {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let ok = alpha.is_finite()
            && beta.is_finite()
            && alpha >= 0.0
            && beta >= 0.0
            && alpha + beta > 0.0;
        if !ok {
            return Err(Error::InvalidWeights { alpha, beta });
        }
        Ok(Self { alpha, beta })
    }

    #[inline]
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(&self) -> f64 {
        self.beta
    }

    #[inline]
    pub fn sum(&self) -> f64 {
        self.alpha + self.beta
    }

    /// Equal weights, the pair the quadrature rule uses.
    pub fn symmetric() -> Self {
        Self {
            alpha: 1.0,
            beta: 1.0,
        }
    }
}

/// Mathematical admissible range [a + s, b - s] for the evaluation point at
/// offset fraction `h`; collapses to the midpoint at h = 1.
pub fn admissible_x_range(iv: &Interval, h: f64) -> (f64, f64) {
    let s = 0.5 * h * iv.width();
    (iv.a() + s, iv.b() - s)
}

/// A validated kernel configuration: interval, weights, offset fraction
/// h in [0, 1], and interior evaluation point x within [a + s, b - s].
#[derive(Clone, Copy, Debug)]
pub struct KernelConfig {
    iv: Interval,
    w: Weights,
    h: f64,
    x: f64,
}

impl KernelConfig {
    pub fn new(iv: Interval, w: Weights, h: f64, x: f64) -> Result<Self> {
        if !(h.is_finite() && (0.0..=1.0).contains(&h)) {
            return Err(Error::InvalidConfig {
                reason: format!("offset fraction h = {h} outside [0, 1]"),
            });
        }
        if !x.is_finite() {
            return Err(Error::InvalidConfig {
                reason: format!("evaluation point x = {x} is not finite"),
            });
        }
        let width = iv.width();
        let (lo, hi) = admissible_x_range(&iv, h);
        // Slack absorbs rounding when callers compute x from the same data.
        let slack = 64.0 * f64::EPSILON * width;
        if x < lo - slack || x > hi + slack {
            return Err(Error::InvalidConfig {
                reason: format!("x = {x} outside admissible range [{lo}, {hi}]"),
            });
        }
        let margin = INTERIOR_MARGIN * width;
        if x - iv.a() < margin || iv.b() - x < margin {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "x = {x} within relative margin {INTERIOR_MARGIN} of an endpoint of {iv}"
                ),
            });
        }
        Ok(Self { iv, w, h, x })
    }

    #[inline]
    pub fn iv(&self) -> &Interval {
        &self.iv
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.h
    }

    #[inline]
    pub fn weights(&self) -> Weights {
        self.w
    }

    /// Vertex inset s = h (b - a) / 2.
    #[inline]
    pub fn s(&self) -> f64 {
        0.5 * self.h * self.iv.width()
    }

    /// Left vertex a + s.
    #[inline]
    pub fn c1(&self) -> f64 {
        self.iv.a() + self.s()
    }

    /// Right vertex b - s.
    #[inline]
    pub fn c2(&self) -> f64 {
        self.iv.b() - self.s()
    }

    /// x - c1, clamped at zero to guard rounding at the admissibility edge.
    #[inline]
    pub fn dl(&self) -> f64 {
        (self.x - self.c1()).max(0.0)
    }

    /// c2 - x, clamped at zero to guard rounding at the admissibility edge.
    #[inline]
    pub fn dr(&self) -> f64 {
        (self.c2() - self.x).max(0.0)
    }

    /// Left branch coefficient alpha / ((alpha + beta)(x - a)).
    #[inline]
    pub fn wl(&self) -> f64 {
        self.w.alpha / (self.w.sum() * (self.x - self.iv.a()))
    }

    /// Right branch coefficient beta / ((alpha + beta)(b - x)).
    #[inline]
    pub fn wr(&self) -> f64 {
        self.w.beta / (self.w.sum() * (self.iv.b() - self.x))
    }

    fn check_domain(&self, t: f64) -> Result<()> {
        if t.is_finite() && self.iv.contains(t) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                t,
                a: self.iv.a(),
                b: self.iv.b(),
            })
        }
    }
}

#[inline]
pub(crate) fn main_eval_raw(cfg: &KernelConfig, t: f64) -> f64 {
    if t <= cfg.x {
        let u = t - cfg.c1();
        0.5 * cfg.wl() * (u * u)
    } else {
        let u = t - cfg.c2();
        0.5 * cfg.wr() * (u * u)
    }
}

#[inline]
pub(crate) fn linear_eval_raw(cfg: &KernelConfig, t: f64) -> f64 {
    if t <= cfg.x {
        cfg.wl() * (t - cfg.c1())
    } else {
        cfg.wr() * (t - cfg.c2())
    }
}

/// Second-derivative kernel: 0.5 wl (t - c1)^2 for t <= x, else
/// 0.5 wr (t - c2)^2. Nonnegative everywhere on [a, b].
///
/// At h = 0 this evaluates the same floating-point expression as
/// [`kernel_quadratic_eval`], so the two agree bit for bit.
pub fn kernel_main_eval(cfg: &KernelConfig, t: f64) -> Result<f64> {
    cfg.check_domain(t)?;
    Ok(main_eval_raw(cfg, t))
}

/// Zero-offset quadratic kernel: 0.5 wl (t - a)^2 for t <= x, else
/// 0.5 wr (t - b)^2. The config's h is ignored; this is the h = 0 shape.
pub fn kernel_quadratic_eval(cfg: &KernelConfig, t: f64) -> Result<f64> {
    cfg.check_domain(t)?;
    if t <= cfg.x {
        let u = t - cfg.iv.a();
        Ok(0.5 * cfg.wl() * (u * u))
    } else {
        let u = t - cfg.iv.b();
        Ok(0.5 * cfg.wr() * (u * u))
    }
}

/// First-derivative kernel: wl (t - c1) for t <= x, else wr (t - c2).
/// Signed; crosses zero at each vertex.
pub fn kernel_linear_eval(cfg: &KernelConfig, t: f64) -> Result<f64> {
    cfg.check_domain(t)?;
    Ok(linear_eval_raw(cfg, t))
}

/// Closed-form moments of the second-derivative kernel.
#[derive(Clone, Debug)]
pub struct KernelStats {
    /// Signed integral over [a, b].
    pub integral: f64,
    /// L1 norm: equal to `integral` because the kernel is nonnegative.
    pub abs_integral: f64,
    /// Integral of the squared kernel.
    pub square_integral: f64,
    /// Supremum of the kernel over [a, b].
    pub sup: f64,
    /// Infimum of the kernel; exactly 0 (each branch touches zero at its
    /// vertex, which always lies inside the branch domain).
    pub inf: f64,
    /// Kernel mean over [a, b].
    pub mean: f64,
    /// Requested (q, integral of kernel^q) pairs.
    pub q_integrals: Vec<(f64, f64)>,
    width: f64,
}

/// All moments the bounds consume, with power integrals for each q in
/// `q_list` (each q must be >= 1).
pub fn kernel_stats(cfg: &KernelConfig, q_list: &[f64]) -> Result<KernelStats> {
    let (s, dl, dr) = (cfg.s(), cfg.dl(), cfg.dr());
    let (wl, wr) = (cfg.wl(), cfg.wr());
    let width = cfg.iv.width();

    let cube = |u: f64| u * u * u;
    let fifth = |u: f64| u * u * u * u * u;
    let integral = (wl * (cube(dl) + cube(s)) + wr * (cube(s) + cube(dr))) / 6.0;
    let hl = 0.5 * wl;
    let hr = 0.5 * wr;
    let square_integral =
        (hl * hl * (fifth(dl) + fifth(s)) + hr * hr * (fifth(s) + fifth(dr))) / 5.0;
    // sup candidates: one-sided values at t = x and the endpoint values;
    // the vertices themselves contribute the infimum 0.
    let sup = (hl * (s * s))
        .max(hl * (dl * dl))
        .max(hr * (dr * dr))
        .max(hr * (s * s));
    let mean = integral / width;
    let mut q_integrals = Vec::with_capacity(q_list.len());
    for &q in q_list {
        q_integrals.push((q, lq_integral(cfg, q)?));
    }
    Ok(KernelStats {
        integral,
        abs_integral: integral,
        square_integral,
        sup,
        inf: 0.0,
        mean,
        q_integrals,
        width,
    })
}

impl KernelStats {
    /// Power integral for a q requested at construction.
    pub fn q_integral(&self, q: f64) -> Option<f64> {
        self.q_integrals
            .iter()
            .find(|(qi, _)| (qi - q).abs() <= 1e-12 * q.abs().max(1.0))
            .map(|&(_, v)| v)
    }

    /// Mean square minus squared mean; tiny negative rounding residue is
    /// clamped to zero, anything worse is an error.
    pub fn variance(&self) -> Result<f64> {
        let mean_square = self.square_integral / self.width;
        let raw = mean_square - self.mean * self.mean;
        if raw >= 0.0 {
            Ok(raw)
        } else if raw >= -1e-12 * mean_square.max(1.0) {
            Ok(0.0)
        } else {
            Err(Error::NegativeVariance { value: raw })
        }
    }

    /// sqrt of the variance: the centered L2 size of the kernel.
    pub fn n_value(&self) -> Result<f64> {
        Ok(self.variance()?.sqrt())
    }
}

/// Integral of the kernel raised to the q-th power, q >= 1. Uses the closed
/// form when 2q is an integer; otherwise integrates numerically with a split
/// at the branch switch.
pub fn lq_integral(cfg: &KernelConfig, q: f64) -> Result<f64> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "kernel power q = {q} must be finite and >= 1"
        )));
    }
    let two_q = 2.0 * q;
    if (two_q - two_q.round()).abs() <= 1e-9 {
        return Ok(lq_closed(cfg, q));
    }
    let (s, dl, dr) = (cfg.s(), cfg.dl(), cfg.dr());
    let (hl, hr) = (0.5 * cfg.wl(), 0.5 * cfg.wr());
    let sup = (hl * (s * s))
        .max(hl * (dl * dl))
        .max(hr * (dr * dr))
        .max(hr * (s * s));
    let tol = (1e-12 * sup.powf(q) * cfg.iv.width()).max(1e-300);
    integrate_with_breaks(|t| main_eval_raw(cfg, t).powf(q), &cfg.iv, &[cfg.x], tol)
}

fn lq_closed(cfg: &KernelConfig, q: f64) -> f64 {
    let (s, dl, dr) = (cfg.s(), cfg.dl(), cfg.dr());
    let e = 2.0 * q + 1.0;
    let left = (0.5 * cfg.wl()).powf(q) * (dl.powf(e) + s.powf(e)) / e;
    let right = (0.5 * cfg.wr()).powf(q) * (s.powf(e) + dr.powf(e)) / e;
    left + right
}

/// The one-page closed form this library's sources print for sup P, kept
/// verbatim for the audit; derived independently of [`kernel_stats`].
pub fn printed_kernel_sup(cfg: &KernelConfig) -> f64 {
    let (a, b) = (cfg.iv().a(), cfg.iv().b());
    let (alpha, beta) = (cfg.weights().alpha(), cfg.weights().beta());
    let (x, h) = (cfg.x(), cfg.h());
    let width = b - a;
    let even = alpha * (x - a) + beta * (b - x) - h * width * (alpha + beta)
        + 0.5 * h * h * width * (alpha / (x - a) + beta / (b - x));
    let odd = beta * (b - x) - alpha * (x - a)
        + h * width * (alpha - beta)
        + 0.5 * h * h * width * (beta / (b - x) - alpha / (x - a));
    (even + odd.abs()) / (4.0 * cfg.weights().sum())
}

/// Printed closed form for inf P, also audit-only; positive for h > 0 with
/// both weights nonzero even though the kernel's true infimum is 0.
pub fn printed_kernel_inf(cfg: &KernelConfig) -> f64 {
    let (a, b) = (cfg.iv().a(), cfg.iv().b());
    let (alpha, beta) = (cfg.weights().alpha(), cfg.weights().beta());
    let (x, h) = (cfg.x(), cfg.h());
    let width = b - a;
    let left = alpha / (x - a);
    let right = beta / (b - x);
    h * h * width * width / (8.0 * cfg.weights().sum()) * (left + right - (left - right).abs())
}

/// Closed-form moments of the first-derivative kernel.
#[derive(Clone, Copy, Debug)]
pub struct LinearKernelStats {
    /// Signed integral over [a, b].
    pub integral: f64,
    /// L1 norm.
    pub abs_integral: f64,
    /// Supremum of the absolute value.
    pub sup_abs: f64,
}

impl LinearKernelStats {
    pub fn compute(cfg: &KernelConfig) -> Self {
        let (s, dl, dr) = (cfg.s(), cfg.dl(), cfg.dr());
        let ul = cfg.wl();
        let ur = cfg.wr();
        let integral = 0.5 * (ul * (dl * dl - s * s) + ur * (s * s - dr * dr));
        let abs_integral = 0.5 * (ul * (dl * dl + s * s) + ur * (s * s + dr * dr));
        let sup_abs = (ul * s.max(dl)).max(ur * s.max(dr));
        Self {
            integral,
            abs_integral,
            sup_abs,
        }
    }
}

/// Integral of |first-derivative kernel|^q, q >= 1, in closed form.
pub fn linear_lq_integral(cfg: &KernelConfig, q: f64) -> Result<f64> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "kernel power q = {q} must be finite and >= 1"
        )));
    }
    let (s, dl, dr) = (cfg.s(), cfg.dl(), cfg.dr());
    let e = q + 1.0;
    let left = cfg.wl().powf(q) * (dl.powf(e) + s.powf(e)) / e;
    let right = cfg.wr().powf(q) * (s.powf(e) + dr.powf(e)) / e;
    Ok(left + right)
}
