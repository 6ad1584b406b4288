//! Application to cumulative distribution functions.
//!
//! For a C^2 density on a closed support, the scaled deviation functional
//! `(alpha + beta)(x - a)(b - x) tau` is a linear expression in the CDF value
//! `F(x)` with coefficients built from the density's boundary data. Solving
//! that expression against the certified bound gives a two-sided enclosure
//! for `F(x)` (and for the reliability `1 - F(x)`), plus an exact identity
//! for the expectation.

use crate::bounds::kernel_factor;
use crate::corpus::{
    integrate_with_breaks, norm_f2, reference_integrate, validate_model, EvalFn, FunctionModel,
    Interval, NormVariant,
};
use crate::error::{Error, Result};
use crate::kernel::KernelConfig;

/// A probability density with optional exact CDF and mean.
#[derive(Clone)]
pub struct PdfModel {
    pub base: FunctionModel,
    pub support: Interval,
    pub cdf_exact: Option<EvalFn>,
    pub mean_exact: Option<f64>,
}

impl std::fmt::Debug for PdfModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PdfModel")
            .field("id", &self.base.id)
            .field("support", &self.support)
            .field("cdf_exact", &self.cdf_exact.is_some())
            .field("mean_exact", &self.mean_exact)
            .finish()
    }
}

const MASS_TOL: f64 = 1e-8;
const DENSITY_SAMPLES: usize = 1025;

/// Checks that a model is a usable density: smooth per the derivative
/// checks, nonnegative on a dense sample, unit total mass, and (when given)
/// an exact CDF consistent with the density.
pub fn validate_pdf(pm: &PdfModel) -> Result<()> {
    validate_model(&pm.base, &pm.support)?;
    let (a, b) = (pm.support.a(), pm.support.b());
    let w = pm.support.width();
    for k in 0..DENSITY_SAMPLES {
        let t = a + w * k as f64 / (DENSITY_SAMPLES - 1) as f64;
        let v = (pm.base.f)(t);
        if v < -1e-12 {
            return Err(Error::ModelValidation {
                id: pm.base.id.clone(),
                reason: format!("density is negative at t = {t}: {v}"),
            });
        }
    }
    let mass = pm.base.integral(a, b)?;
    if (mass - 1.0).abs() > MASS_TOL {
        return Err(Error::ModelValidation {
            id: pm.base.id.clone(),
            reason: format!("total mass {mass} is not 1"),
        });
    }
    if let Some(g) = &pm.cdf_exact {
        for k in 0..33 {
            let t = a + w * k as f64 / 32.0;
            let direct = g(t);
            let integrated = pm.base.integral(a, t)?;
            if (direct - integrated).abs() > MASS_TOL {
                return Err(Error::ModelValidation {
                    id: pm.base.id.clone(),
                    reason: format!(
                        "exact cdf disagrees with integrated density at t = {t}: {direct} vs {integrated}"
                    ),
                });
            }
        }
    }
    Ok(())
}

/// CDF value `F(x)`, from the exact closure when present.
pub fn cdf_value(pm: &PdfModel, x: f64) -> Result<f64> {
    if !pm.support.contains(x) {
        return Err(Error::OutOfDomain {
            t: x,
            a: pm.support.a(),
            b: pm.support.b(),
        });
    }
    if let Some(g) = &pm.cdf_exact {
        return Ok(g(x));
    }
    if x == pm.support.a() {
        return Ok(0.0);
    }
    pm.base.integral(pm.support.a(), x)
}

fn check_support(pm: &PdfModel, cfg: &KernelConfig) -> Result<()> {
    if *cfg.iv() != pm.support {
        return Err(Error::InvalidConfig {
            reason: format!(
                "config interval {} does not match the density support {}",
                cfg.iv(),
                pm.support
            ),
        });
    }
    Ok(())
}

/// The scaled deviation `(alpha + beta)(x - a)(b - x) tau` of the density,
/// written as the linear expression in `F(x)`: boundary terms plus
/// `[alpha (b - x) - beta (x - a)] F(x) + beta (x - a)`.
pub fn cdf_lhs(pm: &PdfModel, cfg: &KernelConfig) -> Result<f64> {
    check_support(pm, cfg)?;
    let (r, k) = boundary_and_coefficient(pm, cfg);
    Ok(k * cdf_value(pm, cfg.x())? + r)
}

// Returns (R, K): the F-free boundary terms and the coefficient of F(x).
fn boundary_and_coefficient(pm: &PdfModel, cfg: &KernelConfig) -> (f64, f64) {
    let iv = cfg.iv();
    let (a, b) = (iv.a(), iv.b());
    let x = cfg.x();
    let (al, be) = (cfg.weights().alpha(), cfg.weights().beta());
    let xa = x - a;
    let bx = b - x;
    let u1 = x - cfg.c1();
    let u2 = x - cfg.c2();
    let f = &pm.base.f;
    let f1 = &pm.base.f1;
    let h = cfg.h();
    let wd = iv.width();

    let t1 = 0.5 * (al * bx * u1 * u1 - be * xa * u2 * u2) * f1(x);
    let t2 = -(al * bx * u1 - be * xa * u2) * f(x);
    let t3 = -cfg.s() * (al * bx * f(a) + be * xa * f(b));
    let t4 = h * h * wd * wd / 8.0 * (be * xa * f1(b) - al * bx * f1(a));
    let r = t1 + t2 + t3 + t4 + be * xa;
    let k = al * bx - be * xa;
    (r, k)
}

/// Certified bound on `|cdf_lhs|`: the scale factor times the oracle bound
/// on the density's deviation.
pub fn cdf_bound(pm: &PdfModel, cfg: &KernelConfig, variant: &NormVariant) -> Result<f64> {
    check_support(pm, cfg)?;
    let iv = cfg.iv();
    let scale = cfg.weights().sum() * (cfg.x() - iv.a()) * (iv.b() - cfg.x());
    let norm_value = norm_f2(&pm.base, iv, variant)?;
    Ok(scale * norm_value * kernel_factor(cfg, variant)?)
}

/// Two-sided enclosure for a CDF (or reliability) value.
#[derive(Clone, Copy, Debug)]
pub struct CdfEnclosure {
    pub x: f64,
    pub center: f64,
    pub radius: f64,
}

impl CdfEnclosure {
    pub fn lo(&self) -> f64 {
        self.center - self.radius
    }

    pub fn hi(&self) -> f64 {
        self.center + self.radius
    }

    pub fn contains(&self, v: f64) -> bool {
        self.lo() <= v && v <= self.hi()
    }
}

const SINGULAR_REL: f64 = 1e-9;

/// Solves the linear expression against the certified bound, giving
/// `F(x) in [center - radius, center + radius]`.
///
/// Fails with a singular-coefficient error when `alpha (b - x)` and
/// `beta (x - a)` nearly cancel, since then the expression carries no
/// information about `F(x)`.
pub fn cdf_enclosure(
    pm: &PdfModel,
    cfg: &KernelConfig,
    variant: &NormVariant,
) -> Result<CdfEnclosure> {
    check_support(pm, cfg)?;
    let (r, k) = boundary_and_coefficient(pm, cfg);
    let floor = SINGULAR_REL * cfg.weights().sum() * cfg.iv().width();
    if k.abs() < floor {
        return Err(Error::SingularCoefficient { value: k });
    }
    let bound = cdf_bound(pm, cfg, variant)?;
    Ok(CdfEnclosure {
        x: cfg.x(),
        center: -r / k,
        radius: bound / k.abs(),
    })
}

/// Enclosure for the reliability `1 - F(x)`.
pub fn reliability_enclosure(
    pm: &PdfModel,
    cfg: &KernelConfig,
    variant: &NormVariant,
) -> Result<CdfEnclosure> {
    let e = cdf_enclosure(pm, cfg, variant)?;
    Ok(CdfEnclosure {
        x: e.x,
        center: 1.0 - e.center,
        radius: e.radius,
    })
}

/// Expectation via the tail identity `E[X] = b - integral of F over [a, b]`.
pub fn expectation_from_cdf(pm: &PdfModel) -> Result<f64> {
    let iv = pm.support;
    let integral_of_cdf = if let Some(g) = &pm.cdf_exact {
        let g = g.clone();
        reference_integrate(move |t| g(t), &iv, 1e-12)?
    } else {
        // No exact CDF: integrate the integrated density. Quadratic cost,
        // acceptable for occasional use.
        let base = pm.base.clone();
        let a = iv.a();
        integrate_with_breaks(
            move |t| base.integral(a, t).unwrap_or(f64::NAN),
            &iv,
            &[],
            1e-10,
        )?
    };
    Ok(iv.b() - integral_of_cdf)
}

/// The bundled densities, all on [0, 1]: uniform, a symmetric quadratic
/// bump, a truncated exponential, and a raised cosine.
pub fn default_densities() -> Vec<PdfModel> {
    vec![
        pdf_model("uniform").unwrap(),
        pdf_model("beta22").unwrap(),
        pdf_model("truncexp").unwrap(),
        pdf_model("cosine").unwrap(),
    ]
}

/// Fetch one bundled density by id.
pub fn pdf_model(id: &str) -> Result<PdfModel> {
    let support = Interval::new(0.0, 1.0)?;
    let pm = match id {
        "uniform" => PdfModel {
            base: FunctionModel::new("uniform", |_| 1.0, |_| 0.0, |_| 0.0)
                .with_exact_integral(|lo, hi| hi - lo)
                .with_exact_norm(|_, _| Some(0.0)),
            support,
            cdf_exact: Some(std::sync::Arc::new(|t| t)),
            mean_exact: Some(0.5),
        },
        "beta22" => PdfModel {
            base: FunctionModel::new(
                "beta22",
                |t| 6.0 * t * (1.0 - t),
                |t| 6.0 - 12.0 * t,
                |_| -12.0,
            )
            .with_exact_integral(|lo, hi| {
                let g = |t: f64| t * t * (3.0 - 2.0 * t);
                g(hi) - g(lo)
            })
            .with_exact_norm(|iv, v| {
                Some(match v {
                    NormVariant::Sup => 12.0,
                    NormVariant::Lp(p) => 12.0 * iv.width().powf(1.0 / p),
                    NormVariant::L1 => 12.0 * iv.width(),
                })
            }),
            support,
            cdf_exact: Some(std::sync::Arc::new(|t| t * t * (3.0 - 2.0 * t))),
            mean_exact: Some(0.5),
        },
        "truncexp" => {
            let z = 1.0 - (-1.0f64).exp();
            PdfModel {
                base: FunctionModel::new(
                    "truncexp",
                    move |t| (-t).exp() / z,
                    move |t| -(-t).exp() / z,
                    move |t| (-t).exp() / z,
                )
                .with_exact_integral(move |lo, hi| ((-lo).exp() - (-hi).exp()) / z)
                .with_exact_norm(move |iv, v| {
                    // |f''| = exp(-t)/z is decreasing.
                    Some(match v {
                        NormVariant::Sup => (-iv.a()).exp() / z,
                        NormVariant::Lp(p) => {
                            (((-p * iv.a()).exp() - (-p * iv.b()).exp()) / p).powf(1.0 / p) / z
                        }
                        NormVariant::L1 => ((-iv.a()).exp() - (-iv.b()).exp()) / z,
                    })
                }),
                support,
                cdf_exact: Some(std::sync::Arc::new(move |t| (1.0 - (-t).exp()) / z)),
                mean_exact: Some((1.0 - 2.0 * (-1.0f64).exp()) / z),
            }
        }
        "cosine" => {
            let tau = std::f64::consts::TAU;
            PdfModel {
                base: FunctionModel::new(
                    "cosine",
                    move |t| 1.0 - (tau * t).cos(),
                    move |t| tau * (tau * t).sin(),
                    move |t| tau * tau * (tau * t).cos(),
                )
                .with_exact_integral(move |lo, hi| {
                    let g = |t: f64| t - (tau * t).sin() / tau;
                    g(hi) - g(lo)
                }),
                support,
                cdf_exact: Some(std::sync::Arc::new(move |t| t - (tau * t).sin() / tau)),
                mean_exact: Some(0.5),
            }
        }
        other => {
            return Err(Error::UnknownModel {
                id: other.to_string(),
            })
        }
    };
    Ok(pm)
}

/// Ids of the bundled densities.
pub fn density_ids() -> Vec<&'static str> {
    vec!["uniform", "beta22", "truncexp", "cosine"]
}
