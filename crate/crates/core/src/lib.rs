//! Certified error bounds for weighted Ostrowski-type deviation functionals.
//!
//! The library is organized around one object: the deviation `tau` of a point
//! value of a smooth function from a two-sided weighted average of its
//! integral means, parametrized by an offset `h` that slides the kernel
//! vertices away from the interval endpoints. Everything else is built on
//! top of it:
//!
//! * [`corpus`] holds the twice-differentiable test functions, a reference
//!   integrator, and derivative-norm evaluation.
//! * [`kernel`] evaluates the piecewise quadratic (and linear) kernels and
//!   their closed-form moments, suprema, and power integrals.
//! * [`functional`] computes `tau` three independent ways (boundary terms,
//!   kernel integral, rearranged means) plus the Chebyshev functional.
//! * [`bounds`] turns kernel moments and derivative norms into certified
//!   upper bounds, and [`bounds::printed`] keeps the display forms of those
//!   bounds, constants preserved verbatim, for the audit to compare.
//! * [`quad`] derives quadrature rules with certified error bounds.
//! * [`cdf`] applies the machinery to cumulative distribution functions.
//! * [`report`] and [`harness`] produce deterministic verification sweeps,
//!   JSON reports, and audit CSVs.

#![forbid(unsafe_code)]

pub mod bounds;
pub mod cdf;
pub mod corpus;
pub mod error;
pub mod functional;
pub mod harness;
pub mod kernel;
pub mod quad;
pub mod report;

pub use bounds::{
    bound_oracle, chebyshev_bound, gruss_bound, perturbed_bound, BoundReport, PerturbedReport,
};
pub use cdf::{
    cdf_bound, cdf_enclosure, cdf_lhs, default_densities, pdf_model, CdfEnclosure, PdfModel,
};
pub use corpus::{
    corpus_model, default_corpus, norm_f2, validate_model, FunctionModel, Interval, NormVariant,
};
pub use error::{Error, Result};
pub use functional::{
    chebyshev_t, deviation_s, integral_mean, secant_slope_kappa, tau_alternate, tau_cerone,
    tau_linear, tau_main, tau_via_kernel, TauBreakdown,
};
pub use harness::{run_audit, run_verify, AuditRow, SweepGrid, Verdict};
pub use kernel::{kernel_stats, KernelConfig, KernelStats, Weights};
pub use quad::{adaptive, composite, single_panel, QuadratureCertificate};
pub use report::VerificationReport;
