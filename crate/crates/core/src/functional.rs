//! The deviation functionals themselves: integral means, the offset-weighted
//! deviation `tau` computed by three independent routes, the Chebyshev
//! functional, and the secant slope of the first derivative.
//!
//! `tau_main` evaluates the boundary-term expansion, `tau_via_kernel`
//! integrates the quadratic kernel against the second derivative, and
//! `tau_alternate` rearranges the partial means against the global mean.
//! All three agree to quadrature accuracy; the verification harness checks
//! this over the whole sweep grid.

use crate::corpus::{default_tol, integrate_with_breaks, FunctionModel, Interval};
use crate::error::{Error, Result};
use crate::kernel::{linear_eval_raw, KernelConfig, Weights};

/// Mean value of `fm` over `iv`.
pub fn integral_mean(fm: &FunctionModel, iv: &Interval) -> Result<f64> {
    Ok(fm.integral(iv.a(), iv.b())? / iv.width())
}

/// Deviation of the point value from the interval mean: `f(x) - M(f; a, b)`.
pub fn deviation_s(fm: &FunctionModel, iv: &Interval, x: f64) -> Result<f64> {
    if !iv.contains(x) {
        return Err(Error::OutOfDomain {
            t: x,
            a: iv.a(),
            b: iv.b(),
        });
    }
    Ok((fm.f)(x) - integral_mean(fm, iv)?)
}

/// Deviation of `f(x)` from the weighted average of the one-sided means,
/// `f(x) - [alpha M(f; a, x) + beta M(f; x, b)] / (alpha + beta)`.
///
/// Requires `a < x < b` so that both one-sided means exist.
pub fn tau_cerone(fm: &FunctionModel, iv: &Interval, w: &Weights, x: f64) -> Result<f64> {
    let (a, b) = (iv.a(), iv.b());
    if !(a < x && x < b) {
        return Err(Error::OutOfDomain { t: x, a, b });
    }
    let m_left = fm.integral(a, x)? / (x - a);
    let m_right = fm.integral(x, b)? / (b - x);
    Ok((fm.f)(x) - (w.alpha() * m_left + w.beta() * m_right) / w.sum())
}

/// The five boundary terms of the offset deviation, plus their sum.
///
/// Invariant: `total` is the plain left-to-right sum of the five terms, so
/// `total - (t1 + t2 + t3 + t4 + t5)` is identically zero by construction;
/// callers may rely on the individual terms for reduction checks.
#[derive(Debug, Clone, Copy)]
pub struct TauBreakdown {
    pub total: f64,
    pub term_fprime_x: f64,
    pub term_f_x: f64,
    pub term_endpoints_f: f64,
    pub term_endpoints_fprime: f64,
    pub term_means: f64,
}

/// Boundary-term route: evaluates the five-term expansion of the deviation
/// at the configuration's `x`, weights, and vertex offset.
pub fn tau_main(fm: &FunctionModel, cfg: &KernelConfig) -> Result<TauBreakdown> {
    let iv = cfg.iv();
    let (a, b) = (iv.a(), iv.b());
    let wd = iv.width();
    let x = cfg.x();
    let (al, be) = (cfg.weights().alpha(), cfg.weights().beta());
    let inv = 1.0 / cfg.weights().sum();
    let xa = x - a;
    let bx = b - x;
    // Signed vertex offsets; u2 <= 0 for admissible x.
    let u1 = x - cfg.c1();
    let u2 = x - cfg.c2();
    let h = cfg.h();

    let term_fprime_x = 0.5 * inv * (al / xa * u1 * u1 - be / bx * u2 * u2) * (fm.f1)(x);
    let term_f_x = -inv * (al / xa * u1 - be / bx * u2) * (fm.f)(x);
    let term_endpoints_f = -inv * cfg.s() * (al * (fm.f)(a) / xa + be * (fm.f)(b) / bx);
    let term_endpoints_fprime =
        inv * h * h * wd * wd / 8.0 * (be * (fm.f1)(b) / bx - al * (fm.f1)(a) / xa);
    let m_left = fm.integral(a, x)? / xa;
    let m_right = fm.integral(x, b)? / bx;
    let term_means = inv * (al * m_left + be * m_right);

    let total = term_fprime_x + term_f_x + term_endpoints_f + term_endpoints_fprime + term_means;
    Ok(TauBreakdown {
        total,
        term_fprime_x,
        term_f_x,
        term_endpoints_f,
        term_endpoints_fprime,
        term_means,
    })
}

/// Kernel route: integrates the piecewise quadratic kernel against the
/// second derivative with the reference integrator, splitting at `x` where
/// the kernel changes branch.
pub fn tau_via_kernel(fm: &FunctionModel, cfg: &KernelConfig) -> Result<f64> {
    let iv = cfg.iv();
    let tol = default_tol(iv);
    integrate_with_breaks(
        |t| crate::kernel::main_eval_raw(cfg, t) * (fm.f2)(t),
        iv,
        &[cfg.x()],
        tol,
    )
}

/// Rearranged route: the same four leading boundary terms, with the weighted
/// one-sided means rewritten against the left mean and the global mean.
pub fn tau_alternate(fm: &FunctionModel, cfg: &KernelConfig) -> Result<TauBreakdown> {
    let iv = cfg.iv();
    let (a, b) = (iv.a(), iv.b());
    let x = cfg.x();
    let be = cfg.weights().beta();
    let inv = 1.0 / cfg.weights().sum();
    let sigma = iv.width() / (b - x);

    let mut out = tau_main(fm, cfg)?;
    let m_left = fm.integral(a, x)? / (x - a);
    let m_global = integral_mean(fm, iv)?;
    let factor = be * inv * sigma;
    out.term_means = (1.0 - factor) * m_left + factor * m_global;
    out.total = out.term_fprime_x
        + out.term_f_x
        + out.term_endpoints_f
        + out.term_endpoints_fprime
        + out.term_means;
    Ok(out)
}

/// First-derivative route: the signed value whose kernel form integrates the
/// piecewise linear kernel against `f'`. At zero offset it coincides with
/// the plain weighted-means deviation.
pub fn tau_linear(fm: &FunctionModel, cfg: &KernelConfig) -> Result<f64> {
    let iv = cfg.iv();
    let (a, b) = (iv.a(), iv.b());
    let x = cfg.x();
    let (al, be) = (cfg.weights().alpha(), cfg.weights().beta());
    let inv = 1.0 / cfg.weights().sum();
    let xa = x - a;
    let bx = b - x;
    let point = inv * (al / xa * (x - cfg.c1()) - be / bx * (x - cfg.c2())) * (fm.f)(x);
    let ends = inv * cfg.s() * (al * (fm.f)(a) / xa + be * (fm.f)(b) / bx);
    let means = inv * (al * fm.integral(a, x)? / xa + be * fm.integral(x, b)? / bx);
    Ok(point + ends - means)
}

/// Reference value of the linear route, by integrating the piecewise linear
/// kernel against `f'`.
pub fn tau_linear_via_kernel(fm: &FunctionModel, cfg: &KernelConfig) -> Result<f64> {
    let iv = cfg.iv();
    let tol = default_tol(iv);
    integrate_with_breaks(
        |t| linear_eval_raw(cfg, t) * (fm.f1)(t),
        iv,
        &[cfg.x()],
        tol,
    )
}

/// Chebyshev functional `T(f, g) = M(fg) - M(f) M(g)` over `iv`.
pub fn chebyshev_t<F, G>(f: F, g: G, iv: &Interval) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    chebyshev_t_with_breaks(f, g, iv, &[])
}

/// Chebyshev functional for integrands with known interior kinks.
pub fn chebyshev_t_with_breaks<F, G>(f: F, g: G, iv: &Interval, breaks: &[f64]) -> Result<f64>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let w = iv.width();
    let tol = default_tol(iv);
    let m_fg = integrate_with_breaks(|t| f(t) * g(t), iv, breaks, tol)? / w;
    let m_f = integrate_with_breaks(&f, iv, breaks, tol)? / w;
    let m_g = integrate_with_breaks(&g, iv, breaks, tol)? / w;
    Ok(m_fg - m_f * m_g)
}

/// Mean slope of the first derivative, `(f'(b) - f'(a)) / (b - a)`.
pub fn secant_slope_kappa(fm: &FunctionModel, iv: &Interval) -> f64 {
    ((fm.f1)(iv.b()) - (fm.f1)(iv.a())) / iv.width()
}
