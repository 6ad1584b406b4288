//! Test-function corpus: twice-differentiable models with exact derivative
//! and antiderivative closures, plus the norm machinery used by every bound.

pub mod extrema;
pub mod integrate;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use extrema::{max_on, min_on, range_on, sup_abs_on};
pub use integrate::{default_tol, integrate_with_breaks, reference_integrate};

/// Closed interval [a, b] with a < b and both endpoints finite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidInterval { a, b });
        }
        Ok(Self { a, b })
    }

    #[inline]
    pub fn a(&self) -> f64 {
        self.a
    }

    #[inline]
    pub fn b(&self) -> f64 {
        self.b
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.b - self.a
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.a + self.b)
    }

    #[inline]
    pub fn contains(&self, t: f64) -> bool {
        self.a <= t && t <= self.b
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.a, self.b)
    }
}

/// Which norm of f'' a certified bound is expressed in.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NormVariant {
    /// Supremum norm of f''.
    Sup,
    /// L^p norm with 1 < p < infinity.
    Lp(f64),
    /// L^1 norm of f''.
    L1,
}

impl NormVariant {
    pub fn validate(&self) -> Result<()> {
        match self {
            NormVariant::Lp(p) if !(p.is_finite() && *p > 1.0) => Err(Error::InvalidNorm { p: *p }),
            _ => Ok(()),
        }
    }

    /// Conjugate exponent q with 1/p + 1/q = 1; None for Sup and L1
    /// (their kernel factors are the L1 norm and the sup of the kernel).
    pub fn conjugate_q(&self) -> Option<f64> {
        match self {
            NormVariant::Lp(p) => Some(p / (p - 1.0)),
            _ => None,
        }
    }

    /// Stable label used in reports and CLI output.
    pub fn label(&self) -> String {
        match self {
            NormVariant::Sup => "sup".to_string(),
            NormVariant::Lp(p) => format!("lp({p})"),
            NormVariant::L1 => "l1".to_string(),
        }
    }

    /// Parses "sup", "l1", or "lp:<p>".
    pub fn parse(s: &str) -> Result<Self> {
        let v = match s {
            "sup" => NormVariant::Sup,
            "l1" => NormVariant::L1,
            _ => match s.strip_prefix("lp:") {
                Some(num) => {
                    let p: f64 = num
                        .parse()
                        .map_err(|_| Error::InvalidArgument(format!("bad norm variant {s:?}")))?;
                    NormVariant::Lp(p)
                }
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "bad norm variant {s:?}; expected sup, l1, or lp:<p>"
                    )))
                }
            },
        };
        v.validate()?;
        Ok(v)
    }

    /// The four variants every sweep exercises by default.
    pub fn default_set() -> Vec<NormVariant> {
        vec![
            NormVariant::Sup,
            NormVariant::Lp(2.0),
            NormVariant::Lp(3.0),
            NormVariant::L1,
        ]
    }
}

pub type EvalFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type IntegralFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
pub type NormFn = Arc<dyn Fn(&Interval, &NormVariant) -> Option<f64> + Send + Sync>;

/// A twice continuously differentiable test function with optional exact
/// antiderivative and exact second-derivative norms.
#[derive(Clone)]
pub struct FunctionModel {
    pub id: String,
    pub f: EvalFn,
    pub f1: EvalFn,
    pub f2: EvalFn,
    /// Exact (lo, hi) -> integral of f over [lo, hi], when available.
    pub exact_integral: Option<IntegralFn>,
    /// Exact norm of f'' per variant, when available; None values fall back
    /// to the numeric machinery.
    pub exact_norm: Option<NormFn>,
}

impl fmt::Debug for FunctionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionModel")
            .field("id", &self.id)
            .field("exact_integral", &self.exact_integral.is_some())
            .field("exact_norm", &self.exact_norm.is_some())
            .finish()
    }
}

impl FunctionModel {
    pub fn new(
        id: &str,
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f1: impl Fn(f64) -> f64 + Send + Sync + 'static,
        f2: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            id: id.to_string(),
            f: Arc::new(f),
            f1: Arc::new(f1),
            f2: Arc::new(f2),
            exact_integral: None,
            exact_norm: None,
        }
    }

    pub fn with_exact_integral(
        mut self,
        g: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.exact_integral = Some(Arc::new(g));
        self
    }

    pub fn with_exact_norm(
        mut self,
        g: impl Fn(&Interval, &NormVariant) -> Option<f64> + Send + Sync + 'static,
    ) -> Self {
        self.exact_norm = Some(Arc::new(g));
        self
    }

    /// Constant model f(t) = c. Second derivative is identically zero, so
    /// every norm of f'' is exactly 0.
    pub fn constant(c: f64) -> Self {
        Self::new("constant", move |_| c, |_| 0.0, |_| 0.0)
            .with_exact_integral(move |lo, hi| c * (hi - lo))
            .with_exact_norm(|_, _| Some(0.0))
    }

    /// Affine model f(t) = m t + k; norms of f'' are exactly 0.
    pub fn linear(m: f64, k: f64) -> Self {
        Self::new("linear", move |t| m * t + k, move |_| m, |_| 0.0)
            .with_exact_integral(move |lo, hi| (hi - lo) * (0.5 * m * (hi + lo) + k))
            .with_exact_norm(|_, _| Some(0.0))
    }

    /// Integral of f over [lo, hi]: exact closure when present, otherwise
    /// the adaptive reference integrator at its default tolerance.
    pub fn integral(&self, lo: f64, hi: f64) -> Result<f64> {
        if let Some(g) = &self.exact_integral {
            let v = g(lo, hi);
            if !v.is_finite() {
                return Err(Error::NonFinite { t: lo });
            }
            return Ok(v);
        }
        let iv = Interval::new(lo, hi)?;
        reference_integrate(|t| (self.f)(t), &iv, default_tol(&iv))
    }
}

/// sign(u) |u|^(p+1) / (p+1): antiderivative of |t|^p.
fn abs_pow_antideriv(u: f64, p: f64) -> f64 {
    u.signum() * u.abs().powf(p + 1.0) / (p + 1.0)
}

fn sq_model() -> FunctionModel {
    FunctionModel::new("sq", |t| t * t, |t| 2.0 * t, |_| 2.0)
        .with_exact_integral(|lo, hi| (hi - lo) * (hi * hi + hi * lo + lo * lo) / 3.0)
        .with_exact_norm(|iv, v| {
            let w = iv.width();
            Some(match v {
                NormVariant::Sup => 2.0,
                NormVariant::L1 => 2.0 * w,
                NormVariant::Lp(p) => 2.0 * w.powf(1.0 / p),
            })
        })
}

fn cube_model() -> FunctionModel {
    FunctionModel::new("cube", |t| t * t * t, |t| 3.0 * t * t, |t| 6.0 * t)
        .with_exact_integral(|lo, hi| (hi - lo) * (hi + lo) * (hi * hi + lo * lo) / 4.0)
        .with_exact_norm(|iv, v| {
            let (a, b) = (iv.a(), iv.b());
            Some(match v {
                NormVariant::Sup => 6.0 * a.abs().max(b.abs()),
                NormVariant::L1 => 6.0 * (abs_pow_antideriv(b, 1.0) - abs_pow_antideriv(a, 1.0)),
                NormVariant::Lp(p) => {
                    let m = abs_pow_antideriv(b, *p) - abs_pow_antideriv(a, *p);
                    6.0 * m.powf(1.0 / p)
                }
            })
        })
}

fn exp_model() -> FunctionModel {
    FunctionModel::new("exp", f64::exp, f64::exp, f64::exp)
        .with_exact_integral(|lo, hi| lo.exp() * (hi - lo).exp_m1())
        .with_exact_norm(|iv, v| {
            let (a, b) = (iv.a(), iv.b());
            Some(match v {
                NormVariant::Sup => b.exp(),
                NormVariant::L1 => a.exp() * (b - a).exp_m1(),
                NormVariant::Lp(p) => ((p * a).exp() * (p * (b - a)).exp_m1() / p).powf(1.0 / p),
            })
        })
}

fn sin3_model() -> FunctionModel {
    FunctionModel::new(
        "sin3",
        |t| (3.0 * t).sin(),
        |t| 3.0 * (3.0 * t).cos(),
        |t| -9.0 * (3.0 * t).sin(),
    )
    // cos A - cos B = 2 sin((A+B)/2) sin((B-A)/2), stable for hi near lo.
    .with_exact_integral(|lo, hi| 2.0 / 3.0 * (1.5 * (lo + hi)).sin() * (1.5 * (hi - lo)).sin())
}

fn runge_model() -> FunctionModel {
    FunctionModel::new(
        "runge",
        |t| 1.0 / (1.0 + t * t),
        |t| {
            let d = 1.0 + t * t;
            -2.0 * t / (d * d)
        },
        |t| {
            let d = 1.0 + t * t;
            (6.0 * t * t - 2.0) / (d * d * d)
        },
    )
    .with_exact_integral(|lo, hi| hi.atan() - lo.atan())
}

fn log1p_model() -> FunctionModel {
    FunctionModel::new(
        "log1p",
        f64::ln_1p,
        |t| 1.0 / (1.0 + t),
        |t| {
            let d = 1.0 + t;
            -1.0 / (d * d)
        },
    )
    .with_exact_integral(|lo, hi| (1.0 + hi) * hi.ln_1p() - (1.0 + lo) * lo.ln_1p() - (hi - lo))
    // |f''| = (1+t)^(-2) is decreasing, so extrema and Lp integrals are exact.
    .with_exact_norm(|iv, v| {
        let (a, b) = (iv.a(), iv.b());
        if a <= -1.0 {
            return None;
        }
        Some(match v {
            NormVariant::Sup => (1.0 + a).powi(-2),
            NormVariant::L1 => 1.0 / (1.0 + a) - 1.0 / (1.0 + b),
            NormVariant::Lp(p) => {
                let e = 1.0 - 2.0 * p;
                (((1.0 + a).powf(e) - (1.0 + b).powf(e)) / (2.0 * p - 1.0)).powf(1.0 / p)
            }
        })
    })
}

/// The six stock models, in registry order.
pub fn default_corpus() -> Vec<FunctionModel> {
    vec![
        sq_model(),
        cube_model(),
        exp_model(),
        sin3_model(),
        runge_model(),
        log1p_model(),
    ]
}

/// Looks a stock model up by id.
pub fn corpus_model(id: &str) -> Result<FunctionModel> {
    default_corpus()
        .into_iter()
        .find(|m| m.id == id)
        .ok_or_else(|| Error::UnknownModel { id: id.to_string() })
}

const FD_POINTS: usize = 100;
const FD_SEED: u64 = 0x6f71_625f_6664; // stable seed for reproducible checks
const FD_TOL: f64 = 1e-6;

fn fd_step(t: f64, width: f64) -> f64 {
    (f64::EPSILON.cbrt() * (1.0 + t.abs())).min(5e-3 * width)
}

/// Checks the model's derivative closures against central differences at 100
/// seeded interior points, and the exact integral (when present) against the
/// reference integrator. Errors describe the first failing check.
pub fn validate_model(m: &FunctionModel, iv: &Interval) -> Result<()> {
    let (a, b) = (iv.a(), iv.b());
    let w = iv.width();
    let mut rng = ChaCha8Rng::seed_from_u64(FD_SEED);
    for _ in 0..FD_POINTS {
        let u: f64 = rng.random_range(0.02..=0.98);
        let t = a + u * w;
        let h = fd_step(t, w);
        for (name, exact, lo_val, hi_val) in [
            ("f'", (m.f1)(t), (m.f)(t - h), (m.f)(t + h)),
            ("f''", (m.f2)(t), (m.f1)(t - h), (m.f1)(t + h)),
        ] {
            let approx = (hi_val - lo_val) / (2.0 * h);
            if !exact.is_finite() || !approx.is_finite() {
                return Err(Error::ModelValidation {
                    id: m.id.clone(),
                    reason: format!("non-finite {name} near t = {t}"),
                });
            }
            let err = (exact - approx).abs();
            if err > FD_TOL * exact.abs().max(1.0) {
                return Err(Error::ModelValidation {
                    id: m.id.clone(),
                    reason: format!(
                        "{name} mismatch at t = {t}: closure {exact}, central difference {approx}"
                    ),
                });
            }
        }
    }
    if let Some(g) = &m.exact_integral {
        let exact = g(a, b);
        let cmp_tol = 1e-10 * exact.abs() + 1e-13;
        let numeric = reference_integrate(|t| (m.f)(t), iv, (0.1 * cmp_tol).max(1e-300))?;
        if (exact - numeric).abs() > cmp_tol {
            return Err(Error::ModelValidation {
                id: m.id.clone(),
                reason: format!(
                    "exact integral {exact} disagrees with reference integrator {numeric}"
                ),
            });
        }
    }
    Ok(())
}

/// Norm of f'' over `iv` in the requested variant. Exact closures win when
/// they cover the variant; otherwise the extremum scanner (Sup) or the
/// reference integrator (L1, Lp) supplies the value.
pub fn norm_f2(m: &FunctionModel, iv: &Interval, variant: &NormVariant) -> Result<f64> {
    variant.validate()?;
    if let Some(g) = &m.exact_norm {
        if let Some(v) = g(iv, variant) {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::ModelValidation {
                    id: m.id.clone(),
                    reason: format!("exact norm closure returned {v}"),
                });
            }
            return Ok(v);
        }
    }
    let f2 = m.f2.clone();
    match variant {
        NormVariant::Sup => sup_abs_on(&|t| f2(t), iv),
        NormVariant::L1 => {
            let tol = norm_tol(&f2, iv, 1.0)?;
            reference_integrate(|t| f2(t).abs(), iv, tol)
        }
        NormVariant::Lp(p) => {
            let p = *p;
            let tol = norm_tol(&f2, iv, p)?;
            let integral = reference_integrate(|t| f2(t).abs().powf(p), iv, tol)?;
            Ok(integral.powf(1.0 / p))
        }
    }
}

/// Absolute tolerance scaled to the rough magnitude of |f''|^p so that the
/// integral keeps roughly 1e-12 relative accuracy for large integrands.
fn norm_tol(f2: &EvalFn, iv: &Interval, p: f64) -> Result<f64> {
    let (a, w) = (iv.a(), iv.width());
    let mut rough: f64 = 0.0;
    for i in 0..=128 {
        let t = a + w * i as f64 / 128.0;
        let v = f2(t);
        if !v.is_finite() {
            return Err(Error::NonFinite { t });
        }
        rough = rough.max(v.abs());
    }
    Ok(1e-12 * w * rough.powf(p).max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> Interval {
        Interval::new(0.0, 1.0).unwrap()
    }

    #[test]
    fn interval_rejects_degenerate_and_non_finite() {
        assert!(Interval::new(1.0, 1.0).is_err());
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::new(f64::NAN, 1.0).is_err());
        assert!(Interval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn norm_variant_parsing_round_trips() {
        assert_eq!(NormVariant::parse("sup").unwrap(), NormVariant::Sup);
        assert_eq!(NormVariant::parse("l1").unwrap(), NormVariant::L1);
        assert_eq!(NormVariant::parse("lp:2").unwrap(), NormVariant::Lp(2.0));
        assert_eq!(NormVariant::parse("lp:1.5").unwrap(), NormVariant::Lp(1.5));
        assert!(NormVariant::parse("lp:1").is_err());
        assert!(NormVariant::parse("lp:abc").is_err());
        assert!(NormVariant::parse("linf").is_err());
        assert_eq!(NormVariant::Lp(2.0).conjugate_q(), Some(2.0));
        assert_eq!(NormVariant::Lp(3.0).conjugate_q(), Some(1.5));
        assert_eq!(NormVariant::Sup.conjugate_q(), None);
        assert_eq!(NormVariant::Lp(1.5).label(), "lp(1.5)");
    }

    #[test]
    fn every_stock_model_validates_on_both_default_intervals() {
        for iv in [unit(), Interval::new(-0.5, 2.0).unwrap()] {
            for m in default_corpus() {
                validate_model(&m, &iv).unwrap_or_else(|e| panic!("{}: {e}", m.id));
            }
        }
    }

    #[test]
    fn unknown_model_id_is_reported() {
        assert!(matches!(
            corpus_model("nope"),
            Err(Error::UnknownModel { .. })
        ));
        assert_eq!(corpus_model("runge").unwrap().id, "runge");
    }

    #[test]
    fn exact_norms_match_numeric_norms() {
        // Strip the exact-norm closure and compare against the numeric path.
        let iv2 = Interval::new(-0.5, 2.0).unwrap();
        for iv in [unit(), iv2] {
            for m in default_corpus() {
                if m.exact_norm.is_none() {
                    continue;
                }
                let mut numeric = m.clone();
                numeric.exact_norm = None;
                for v in NormVariant::default_set() {
                    let e = norm_f2(&m, &iv, &v).unwrap();
                    let n = norm_f2(&numeric, &iv, &v).unwrap();
                    assert!(
                        (e - n).abs() <= 1e-8 * e.abs().max(1.0),
                        "{} {} on {iv}: exact {e} numeric {n}",
                        m.id,
                        v.label()
                    );
                }
            }
        }
    }

    #[test]
    fn sup_norms_of_stock_models_match_hand_values() {
        let iv = unit();
        let cases = [
            ("sq", 2.0),
            ("cube", 6.0),
            ("exp", 1.0f64.exp()),
            ("sin3", 9.0),
            ("runge", 2.0),
            ("log1p", 1.0),
        ];
        for (id, want) in cases {
            let m = corpus_model(id).unwrap();
            let got = norm_f2(&m, &iv, &NormVariant::Sup).unwrap();
            assert!(
                (got - want).abs() < 1e-9 * want.max(1.0),
                "{id}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn constant_and_linear_models_have_zero_norm() {
        let iv = unit();
        for m in [
            FunctionModel::constant(3.5),
            FunctionModel::linear(2.0, -1.0),
        ] {
            for v in NormVariant::default_set() {
                assert_eq!(norm_f2(&m, &iv, &v).unwrap(), 0.0);
            }
            validate_model(&m, &iv).unwrap();
        }
    }

    #[test]
    fn integral_helper_prefers_exact_closure() {
        let m = corpus_model("exp").unwrap();
        let v = m.integral(0.0, 1.0).unwrap();
        assert!((v - (1.0f64.exp() - 1.0)).abs() < 1e-14);
        let plain = FunctionModel::new("e", f64::exp, f64::exp, f64::exp);
        let v2 = plain.integral(0.0, 1.0).unwrap();
        assert!((v - v2).abs() < 1e-10);
    }

    #[test]
    fn broken_derivative_fails_validation() {
        let bad = FunctionModel::new("bad", |t| t * t, |t| 2.0 * t + 0.01, |_| 2.0);
        assert!(matches!(
            validate_model(&bad, &unit()),
            Err(Error::ModelValidation { .. })
        ));
    }

    #[test]
    fn integrator_is_linear_on_corpus_pairs() {
        let iv = Interval::new(-0.5, 2.0).unwrap();
        let tol = default_tol(&iv);
        let corpus = default_corpus();
        let mut rng = ChaCha8Rng::seed_from_u64(0x6c69_6e65_6172);
        for _ in 0..12 {
            let i = rng.random_range(0..corpus.len());
            let j = rng.random_range(0..corpus.len());
            let (c1, c2): (f64, f64) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let (f, g) = (corpus[i].f.clone(), corpus[j].f.clone());
            let mixed = reference_integrate(|t| c1 * f(t) + c2 * g(t), &iv, tol).unwrap();
            let split = c1 * reference_integrate(|t| f(t), &iv, tol).unwrap()
                + c2 * reference_integrate(|t| g(t), &iv, tol).unwrap();
            assert!(
                (mixed - split).abs() <= 1e-9 * split.abs().max(1.0),
                "{} + {}: {mixed} vs {split}",
                corpus[i].id,
                corpus[j].id
            );
        }
    }

    #[test]
    fn integrator_is_additive_over_subintervals() {
        let iv = Interval::new(-0.5, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0x6164_6469_7469);
        for m in default_corpus() {
            let c: f64 = iv.a() + rng.random_range(0.1..=0.9) * iv.width();
            let left = Interval::new(iv.a(), c).unwrap();
            let right = Interval::new(c, iv.b()).unwrap();
            let whole = reference_integrate(|t| (m.f)(t), &iv, default_tol(&iv)).unwrap();
            let parts = reference_integrate(|t| (m.f)(t), &left, default_tol(&left)).unwrap()
                + reference_integrate(|t| (m.f)(t), &right, default_tol(&right)).unwrap();
            assert!(
                (whole - parts).abs() <= 1e-9 * whole.abs().max(1.0),
                "{}: whole {whole} vs parts {parts}",
                m.id
            );
        }
    }

    #[test]
    fn constant_second_derivative_obeys_lp_scaling() {
        // |f''| = 2 for the square model, so the Lp norm along the numeric
        // path must equal 2 (b - a)^(1/p).
        let mut numeric = corpus_model("sq").unwrap();
        numeric.exact_norm = None;
        for iv in [unit(), Interval::new(-0.5, 2.0).unwrap()] {
            for p in [1.5, 2.0, 3.0] {
                let got = norm_f2(&numeric, &iv, &NormVariant::Lp(p)).unwrap();
                let want = 2.0 * iv.width().powf(1.0 / p);
                assert!(
                    (got - want).abs() <= 1e-10 * want,
                    "p = {p} on {iv}: got {got}, want {want}"
                );
            }
        }
    }
}
