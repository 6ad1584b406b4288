//! Display forms of the bounds, transcribed digit for digit, defects
//! included.
//!
//! Nothing in this module certifies anything. Each evaluator reproduces a
//! display verbatim so the audit sweep can measure where the displays agree
//! with the closed-form oracle and where they do not (sign slips on the
//! vertex-offset cubes, a dropped interval-width factor, cancelled power
//! braces, and similar). Negative bases under fractional powers are read as
//! signed powers to keep the expressions real.

use crate::corpus::{Interval, NormVariant};
use crate::error::{Error, Result};
use crate::kernel::{printed_kernel_sup, KernelConfig, Weights};

/// Signed power `sign(u) |u|^r`, the real-valued reading of a printed
/// fractional power of a possibly negative quantity.
pub fn spow(u: f64, r: f64) -> f64 {
    if u == 0.0 {
        return 0.0;
    }
    u.signum() * u.abs().powf(r)
}

/// The display form of the main deviation bound: one branch per norm
/// variant, with the signed vertex offsets kept as written.
pub fn printed_main_bound(
    cfg: &KernelConfig,
    norm_value: f64,
    variant: &NormVariant,
) -> Result<f64> {
    variant.validate()?;
    let iv = cfg.iv();
    let (a, b) = (iv.a(), iv.b());
    let x = cfg.x();
    let h = cfg.h();
    let (al, be) = (cfg.weights().alpha(), cfg.weights().beta());
    let asum = cfg.weights().sum();
    let u1 = x - (a + h * (b - a) / 2.0);
    let u2 = x - (b - h * (b - a) / 2.0);
    Ok(match variant {
        NormVariant::Sup => {
            let s3 = (h * (b - a) / 2.0).powi(3);
            let bracket = al / (x - a) * (u1.powi(3) + s3) - be / (b - x) * (s3 + u2.powi(3));
            bracket * norm_value / (6.0 * asum)
        }
        NormVariant::Lp(p) => {
            let q = p / (p - 1.0);
            let e = 2.0 * q + 1.0;
            let y = spow(h * (a - b) / 2.0, e);
            let left = al.powf(q) / (x - a).powf(q) * (spow(u1, e) - y);
            let right = be.powf(q) / (b - x).powf(q) * (y - spow(u2, e));
            spow(left + right, 1.0 / q) * norm_value / (2.0 * e.powf(1.0 / q) * asum)
        }
        NormVariant::L1 => printed_kernel_sup(cfg) * norm_value,
    })
}

/// The displayed root variance of the kernel, with its five printed pieces
/// kept as-is (including the missing interval-width factor on the square
/// integral) and the square root clamped at zero.
pub fn printed_n_of_x(cfg: &KernelConfig) -> f64 {
    let iv = cfg.iv();
    let (a, b) = (iv.a(), iv.b());
    let x = cfg.x();
    let h = cfg.h();
    let (al, be) = (cfg.weights().alpha(), cfg.weights().beta());
    let asum = cfg.weights().sum();
    let u1 = x - (a + h * (b - a) / 2.0);
    let u2 = x - (b - h * (b - a) / 2.0);
    let s = h * (b - a) / 2.0;

    let first = (al * al / ((x - a) * (x - a)) * (u1.powi(5) + s.powi(5))
        + be * be / ((b - x) * (b - x)) * (s.powi(5) - u2.powi(5)))
        / (20.0 * asum * asum);
    let bracket = al / (x - a) * (u1.powi(3) + s.powi(3)) - be / (b - x) * (s.powi(3) + u2.powi(3));
    let second = (bracket / (6.0 * (b - a) * asum)).powi(2);
    (first - second).max(0.0).sqrt()
}

/// Inputs for a catalog case: the interval plus whichever of `x`, `h`, and
/// the weights the display leaves free. Cases with pinned parameters ignore
/// the corresponding fields.
#[derive(Clone, Debug)]
pub struct CatalogArgs {
    pub iv: Interval,
    pub x: f64,
    pub h: f64,
    pub weights: Weights,
    pub variant: NormVariant,
    pub norm_value: f64,
}

/// Evaluates one displayed special-case bound by its slug.
///
/// First-derivative cases: `ostrowski` (sup only), `ostrowski_lp`, `cerone`,
/// `linear_offset`. Second-derivative cases: `quadratic_plain`,
/// `full_offset`, `full_offset_midpoint`, `half_offset`,
/// `half_offset_midpoint`, `half_offset_upper_quartile`, `midpoint_family`.
pub fn catalog(case_id: &str, args: &CatalogArgs) -> Result<f64> {
    args.variant.validate()?;
    match case_id {
        "ostrowski" => ostrowski(args),
        "ostrowski_lp" => Ok(ostrowski_lp(args)),
        "cerone" => Ok(cerone(args)),
        "linear_offset" => Ok(linear_offset(args)),
        "quadratic_plain" => Ok(quadratic_plain(args)),
        "full_offset" => Ok(full_offset(args)),
        "full_offset_midpoint" => Ok(full_offset_midpoint(args)),
        "half_offset" => Ok(half_offset(args)),
        "half_offset_midpoint" => Ok(half_offset_midpoint(args)),
        "half_offset_upper_quartile" => Ok(half_offset_upper_quartile(args)),
        "midpoint_family" => Ok(midpoint_family(args)),
        other => Err(Error::UnknownCase {
            id: other.to_string(),
        }),
    }
}

/// All catalog slugs in display order.
pub fn catalog_ids() -> Vec<&'static str> {
    vec![
        "ostrowski",
        "ostrowski_lp",
        "cerone",
        "linear_offset",
        "quadratic_plain",
        "full_offset",
        "full_offset_midpoint",
        "half_offset",
        "half_offset_midpoint",
        "half_offset_upper_quartile",
        "midpoint_family",
    ]
}

fn conjugate(variant: &NormVariant) -> f64 {
    match variant {
        NormVariant::Lp(p) => p / (p - 1.0),
        _ => f64::NAN,
    }
}

fn ostrowski(args: &CatalogArgs) -> Result<f64> {
    if !matches!(args.variant, NormVariant::Sup) {
        return Err(Error::InvalidArgument(
            "case ostrowski displays only a sup-norm branch".to_string(),
        ));
    }
    let (a, b) = (args.iv.a(), args.iv.b());
    let mid = (a + b) / 2.0;
    let half = (b - a) / 2.0;
    Ok((half * half + (args.x - mid) * (args.x - mid)) * args.norm_value / (b - a))
}

fn ostrowski_lp(args: &CatalogArgs) -> f64 {
    let (a, b) = (args.iv.a(), args.iv.b());
    let x = args.x;
    let mid = (a + b) / 2.0;
    match args.variant {
        NormVariant::Sup => {
            let half = (b - a) / 2.0;
            (half * half + (x - mid) * (x - mid)) * args.norm_value / (b - a)
        }
        NormVariant::Lp(_) => {
            let q = conjugate(&args.variant);
            (((x - a).powf(q + 1.0) + (b - x).powf(q + 1.0)) / (q + 1.0)).powf(1.0 / q)
                * args.norm_value
                / (b - a)
        }
        NormVariant::L1 => ((b - a) / 2.0 + (x - mid).abs()) * args.norm_value / (b - a),
    }
}

fn cerone(args: &CatalogArgs) -> f64 {
    let (a, b) = (args.iv.a(), args.iv.b());
    let x = args.x;
    let (al, be) = (args.weights.alpha(), args.weights.beta());
    let asum = args.weights.sum();
    match args.variant {
        NormVariant::Sup => (al * (x - a) + be * (b - x)) * args.norm_value / (2.0 * asum),
        NormVariant::Lp(_) => {
            let q = conjugate(&args.variant);
            (al.powf(q) * (x - a) + be.powf(q) * (b - x)).powf(1.0 / q) * args.norm_value
                / (asum * (q + 1.0).powf(1.0 / q))
        }
        NormVariant::L1 => 0.5 * (1.0 + (al - be).abs() / asum) * args.norm_value,
    }
}

fn linear_offset(args: &CatalogArgs) -> f64 {
    let (a, b) = (args.iv.a(), args.iv.b());
    let (x, h) = (args.x, args.h);
    let (al, be) = (args.weights.alpha(), args.weights.beta());
    let asum = args.weights.sum();
    let c1 = a + h * (b - a) / 2.0;
    let c2 = b - h * (b - a) / 2.0;
    match args.variant {
        NormVariant::Sup => {
            let left = al / (x - a)
                * ((x - a) * (x - a) / 4.0 + (c1 - (a + x) / 2.0) * (c1 - (a + x) / 2.0));
            let right = be / (b - x)
                * ((b - x) * (b - x) / 4.0 + (c2 - (x + b) / 2.0) * (c2 - (x + b) / 2.0));
            (left + right) * args.norm_value / asum
        }
        NormVariant::Lp(_) => {
            let q = conjugate(&args.variant);
            let y = spow(h * (a - b) / 2.0, q + 1.0);
            let left = al.powf(q) / (x - a).powf(q) * (spow(x - c1, q + 1.0) - y);
            let right =
                be.powf(q) / (b - x).powf(q) * (spow(b - (x + h * (b - a) / 2.0), q + 1.0) - y);
            spow(left + right, 1.0 / q) * args.norm_value / ((q + 1.0).powf(1.0 / q) * asum)
        }
        NormVariant::L1 => {
            let s = h * (b - a) / 2.0;
            let denom = (x - a) * (b - x);
            let even = asum - s * (al * (b - x) + be * (x - a)) / denom;
            let odd = (al - be) + s * (be * (x - a) - al * (b - x)) / denom;
            (even + odd.abs()) * args.norm_value / (2.0 * asum)
        }
    }
}

fn quadratic_plain(args: &CatalogArgs) -> f64 {
    let (a, b) = (args.iv.a(), args.iv.b());
    let x = args.x;
    let (al, be) = (args.weights.alpha(), args.weights.beta());
    let asum = args.weights.sum();
    match args.variant {
        NormVariant::Sup => {
            (al * (x - a) * (x - a) + be * (b - x) * (b - x)) * args.norm_value / (6.0 * asum)
        }
        NormVariant::Lp(_) => {
            let q = conjugate(&args.variant);
            (al.powf(q) * (x - a).powf(q + 1.0) + be.powf(q) * (b - x).powf(q + 1.0)).powf(1.0 / q)
                * args.norm_value
                / (2.0 * asum * (2.0 * q + 1.0).powf(1.0 / q))
        }
        NormVariant::L1 => {
            (al * (x - a) + be * (b - x) + (al * (x - a) - be * (b - x)).abs()) * args.norm_value
                / (4.0 * asum)
        }
    }
}

fn full_offset(args: &CatalogArgs) -> f64 {
    let (a, b) = (args.iv.a(), args.iv.b());
    let x = args.x;
    let (al, be) = (args.weights.alpha(), args.weights.beta());
    let asum = args.weights.sum();
    let mid = (a + b) / 2.0;
    match args.variant {
        NormVariant::Sup => {
            let half3 = ((b - a) / 2.0).powi(3);
            let xm3 = (x - mid).powi(3);
            (al / (x - a) * (xm3 + half3) - be / (b - x) * (half3 + xm3)) * args.norm_value
                / (6.0 * asum)
        }
        NormVariant::Lp(_) => {
            let q = conjugate(&args.variant);
            let e = 2.0 * q + 1.0;
            let y = spow((a - b) / 2.0, e);
            let xm = spow(x - mid, e);
            // As displayed: the weight powers are absent and a bare quarter
            // multiplies the root.
            let left = 1.0 / (x - a).powf(q) * (xm - y);
            let right = 1.0 / (b - x).powf(q) * (y - xm);
            spow(left + right, 1.0 / q) / e.powf(1.0 / q) * args.norm_value / 4.0
        }
        NormVariant::L1 => {
            let even = al * (x - a) + be * (b - x) - (b - a) * asum
                + (b - a) / 2.0 * (al / (x - a) + be / (b - x));
            let odd = be * (b - x) - al * (x - a)
                + (b - a) * (al - be)
                + (b - a) / 2.0 * (be / (b - x) - al / (x - a));
            (even + odd.abs()) * args.norm_value / (4.0 * asum)
        }
    }
}

fn full_offset_midpoint(args: &CatalogArgs) -> f64 {
    let (a, b) = (args.iv.a(), args.iv.b());
    let (al, be) = (args.weights.alpha(), args.weights.beta());
    let asum = args.weights.sum();
    let w = b - a;
    match args.variant {
        // Signed as displayed; negative whenever beta exceeds alpha.
        NormVariant::Sup => w * w / 24.0 * (al - be) / asum * args.norm_value,
        NormVariant::Lp(_) => {
            let q = conjugate(&args.variant);
            let e = 2.0 * q + 1.0;
            let y = spow((a - b) / 2.0, e);
            spow(
                be.powf(q) / w.powf(q) * y - al.powf(q) / w.powf(q) * y,
                1.0 / q,
            ) / e.powf(1.0 / q)
                * args.norm_value
                / asum
        }
        NormVariant::L1 => {
            let base = 1.0 - (a - b) / 2.0;
            (base + ((be - al) / asum * base).abs()) * args.norm_value / 4.0
        }
    }
}

fn half_offset(args: &CatalogArgs) -> f64 {
    let (a, b) = (args.iv.a(), args.iv.b());
    let x = args.x;
    let (al, be) = (args.weights.alpha(), args.weights.beta());
    let asum = args.weights.sum();
    let quarter = (b - a) / 4.0;
    let u1 = x - (a + quarter);
    let u2 = x - (b - quarter);
    match args.variant {
        NormVariant::Sup => {
            let q3 = quarter.powi(3);
            (al / (x - a) * (u1.powi(3) + q3) - be / (b - x) * (q3 + u2.powi(3))) * args.norm_value
                / (6.0 * asum)
        }
        NormVariant::Lp(_) => {
            let q = conjugate(&args.variant);
            let e = 2.0 * q + 1.0;
            let y = spow((a - b) / 4.0, e);
            let left = al.powf(q) / (x - a).powf(q) * (spow(u1, e) - y);
            let right = be.powf(q) / (b - x).powf(q) * (y - spow(u2, e));
            spow(left + right, 1.0 / q) * args.norm_value / (2.0 * e.powf(1.0 / q) * asum)
        }
        NormVariant::L1 => {
            let even = al * (x - a) + be * (b - x) - 0.5 * (b - a) * asum
                + (b - a) / 8.0 * (al / (x - a) + be / (b - x));
            let odd = be * (b - x) - al * (x - a)
                + 0.5 * (b - a) * (al - be)
                + (b - a) / 8.0 * (be / (b - x) - al / (x - a));
            (even + odd.abs()) * args.norm_value / (4.0 * asum)
        }
    }
}

fn half_offset_midpoint(args: &CatalogArgs) -> f64 {
    let (a, b) = (args.iv.a(), args.iv.b());
    let w = b - a;
    match args.variant {
        NormVariant::Sup => w * w * args.norm_value / 192.0,
        NormVariant::Lp(_) => {
            let q = conjugate(&args.variant);
            let e = 2.0 * q + 1.0;
            spow(w.powf(e) - spow(a - b, e), 1.0 / q) * args.norm_value
                / (16.0 * w * 2f64.powf(2.0 / q) * e.powf(1.0 / q))
        }
        NormVariant::L1 => w * args.norm_value / 16.0,
    }
}

fn half_offset_upper_quartile(args: &CatalogArgs) -> f64 {
    let (a, b) = (args.iv.a(), args.iv.b());
    let w = b - a;
    match args.variant {
        NormVariant::Sup => w * w * args.norm_value / 96.0,
        NormVariant::Lp(_) => {
            let q = conjugate(&args.variant);
            let e = 2.0 * q + 1.0;
            let y = spow((a - b) / 4.0, e);
            spow(1.0 / 3f64.powf(q) * ((w / 2.0).powf(e) - y) + y, 1.0 / q) * args.norm_value
                / (w * e.powf(1.0 / q))
        }
        NormVariant::L1 => (2.0 / 3.0 + (w / 2.0 - 1.0 / 3.0).abs()) * args.norm_value / 8.0,
    }
}

fn midpoint_family(args: &CatalogArgs) -> f64 {
    let (a, b) = (args.iv.a(), args.iv.b());
    let h = args.h;
    let w = b - a;
    match args.variant {
        NormVariant::Sup => (1.0 - h).powi(3) * w * w / 24.0 * args.norm_value,
        NormVariant::Lp(_) => {
            let q = conjugate(&args.variant);
            let e = 2.0 * q + 1.0;
            let scale = 2f64.powf(q) / w.powf(q);
            let big_x = (w / 2.0 * (1.0 - h)).powf(e);
            let big_y = spow(h * (a - b) / 2.0, e);
            // The two braces are exact negatives of each other as printed.
            spow(scale * (big_x - big_y) + scale * (big_y - big_x), 1.0 / q) * args.norm_value
                / (4.0 * e.powf(1.0 / q))
        }
        NormVariant::L1 => (w * (1.0 - 2.0 * h) + 2.0 * h * h) * args.norm_value / 8.0,
    }
}
