//! Deterministic sweep harness and printed-formula auditor.
//!
//! The sweep walks a fixed parameter grid over the stock corpus and checks,
//! for every model and configuration: the boundary-form vs kernel-form
//! identity, the four certified bounds, and the two-stage refined chain.
//! The auditor compares every displayed special-case expression against the
//! kernel oracle and records agreement or disagreement; disagreements are
//! data, not failures.

use rayon::prelude::*;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;

use crate::bounds::printed::{
    catalog, catalog_ids, printed_main_bound, printed_n_of_x, CatalogArgs,
};
use crate::bounds::{bound_oracle_with_norm, kernel_factor, linear_kernel_factor, perturbed_bound};
use crate::corpus::{norm_f2, validate_model, FunctionModel, Interval, NormVariant};
use crate::error::{Error, Result};
use crate::functional::{tau_main, tau_via_kernel};
use crate::kernel::{
    admissible_x_range, kernel_stats, printed_kernel_inf, printed_kernel_sup, KernelConfig, Weights,
};
use crate::report::{
    finite_or_none, fmt_float, AuditJsonRow, BoundRow, IdentityRow, PerturbedRow, ReportMeta,
    ReportSummary, VerificationReport,
};

/// Relative margin keeping swept evaluation points away from the admissible
/// range's ends.
const X_MARGIN: f64 = 1e-6;

/// Agreement threshold on the audit's relative gap.
pub const AUDIT_AGREE_TOL: f64 = 1e-9;

const IDENTITY_TOL: f64 = 1e-8;
const SLACK_TOL: f64 = 1e-12;
const CHAIN_TOL: f64 = 1e-9;

/// The sweep parameter grid. Generation is fully deterministic: fields are
/// walked in declaration order and evaluation points are equispaced.
#[derive(Clone, Debug)]
pub struct SweepGrid {
    pub intervals: Vec<Interval>,
    pub h_values: Vec<f64>,
    pub weight_pairs: Vec<(f64, f64)>,
    pub x_count: usize,
    pub variants: Vec<NormVariant>,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            intervals: vec![
                Interval::new(0.0, 1.0).unwrap(),
                Interval::new(-0.5, 2.0).unwrap(),
            ],
            h_values: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            weight_pairs: vec![(1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (2.0, 1.0), (1.0, 3.0)],
            x_count: 9,
            variants: NormVariant::default_set(),
        }
    }
}

impl SweepGrid {
    /// Evaluation points for one interval and offset: equispaced strictly
    /// inside the admissible range with a relative margin. A collapsed
    /// range (h near 1) yields the single midpoint.
    fn x_points(&self, iv: &Interval, h: f64) -> Vec<f64> {
        let (lo, hi) = admissible_x_range(iv, h);
        let m = X_MARGIN * iv.width();
        let (lo, hi) = (lo + m, hi - m);
        if hi - lo <= 0.0 {
            return vec![iv.midpoint()];
        }
        (0..self.x_count)
            .map(|k| lo + (hi - lo) * (k + 1) as f64 / (self.x_count + 1) as f64)
            .collect()
    }

    /// Every kernel configuration the grid generates, in a fixed order.
    pub fn configs(&self) -> Result<Vec<KernelConfig>> {
        let mut out = Vec::new();
        for iv in &self.intervals {
            for &h in &self.h_values {
                for &(alpha, beta) in &self.weight_pairs {
                    let w = Weights::new(alpha, beta)?;
                    for x in self.x_points(iv, h) {
                        out.push(KernelConfig::new(*iv, w, h, x)?);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Canonical text form hashed into the report metadata.
    pub fn canonical_string(&self) -> String {
        let mut s = String::from("sweep-grid-v1\n");
        s.push_str("intervals:");
        for iv in &self.intervals {
            write!(s, " {},{}", fmt_float(iv.a()), fmt_float(iv.b())).unwrap();
        }
        s.push_str("\nh:");
        for h in &self.h_values {
            write!(s, " {}", fmt_float(*h)).unwrap();
        }
        s.push_str("\nweights:");
        for (alpha, beta) in &self.weight_pairs {
            write!(s, " {},{}", fmt_float(*alpha), fmt_float(*beta)).unwrap();
        }
        write!(s, "\nx_count: {}", self.x_count).unwrap();
        s.push_str("\nvariants:");
        for v in &self.variants {
            write!(s, " {}", v.label()).unwrap();
        }
        s.push('\n');
        s
    }

    pub fn grid_hash(&self) -> String {
        let digest = Sha256::digest(self.canonical_string().as_bytes());
        let mut hex = String::with_capacity(64);
        for byte in digest {
            write!(hex, "{byte:02x}").unwrap();
        }
        hex
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Agree,
    Disagree,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Agree => "agree",
            Verdict::Disagree => "disagree",
        }
    }
}

/// One printed-expression vs oracle comparison.
#[derive(Clone, Debug)]
pub struct AuditRow {
    pub eq_id: String,
    pub config: KernelConfig,
    pub variant: NormVariant,
    pub oracle_bound: f64,
    pub printed_bound: f64,
    pub rel_gap: f64,
    pub verdict: Verdict,
}

impl AuditRow {
    fn classify(
        eq_id: &str,
        config: KernelConfig,
        variant: NormVariant,
        oracle_bound: f64,
        printed_bound: f64,
    ) -> Self {
        let rel_gap = if printed_bound == 0.0 && oracle_bound == 0.0 {
            0.0
        } else if printed_bound != 0.0 && printed_bound.is_finite() {
            ((oracle_bound - printed_bound) / printed_bound).abs()
        } else {
            f64::INFINITY
        };
        let verdict = if rel_gap <= AUDIT_AGREE_TOL {
            Verdict::Agree
        } else {
            Verdict::Disagree
        };
        AuditRow {
            eq_id: eq_id.to_string(),
            config,
            variant,
            oracle_bound,
            printed_bound,
            rel_gap,
            verdict,
        }
    }

    pub fn to_json_row(&self) -> AuditJsonRow {
        let iv = self.config.iv();
        AuditJsonRow {
            eq_id: self.eq_id.clone(),
            a: iv.a(),
            b: iv.b(),
            h: self.config.h(),
            alpha: self.config.weights().alpha(),
            beta: self.config.weights().beta(),
            x: self.config.x(),
            variant: self.variant.label(),
            oracle: self.oracle_bound,
            printed: finite_or_none(self.printed_bound),
            rel_gap: finite_or_none(self.rel_gap),
            verdict: self.verdict.label().to_string(),
        }
    }
}

/// Compares every displayed expression to the kernel oracle across its
/// natural configuration family. Returns one row per (config, expression,
/// variant) triple.
pub fn run_audit(grid: &SweepGrid) -> Result<Vec<AuditRow>> {
    let mut rows = Vec::new();
    for cfg in grid.configs()? {
        for v in &grid.variants {
            let oracle = kernel_factor(&cfg, v)?;
            let printed = printed_main_bound(&cfg, 1.0, v)?;
            rows.push(AuditRow::classify("main", cfg, *v, oracle, printed));
        }
        let st = kernel_stats(&cfg, &[])?;
        rows.push(AuditRow::classify(
            "kernel_sup",
            cfg,
            NormVariant::Sup,
            st.sup,
            printed_kernel_sup(&cfg),
        ));
        rows.push(AuditRow::classify(
            "kernel_inf",
            cfg,
            NormVariant::Sup,
            st.inf,
            printed_kernel_inf(&cfg),
        ));
        rows.push(AuditRow::classify(
            "n_variance",
            cfg,
            NormVariant::Lp(2.0),
            st.n_value()?,
            printed_n_of_x(&cfg),
        ));
    }
    catalog_rows(grid, &mut rows)?;
    Ok(rows)
}

fn first_derivative_case(id: &str) -> bool {
    matches!(
        id,
        "ostrowski" | "ostrowski_lp" | "cerone" | "linear_offset"
    )
}

fn push_case(
    rows: &mut Vec<AuditRow>,
    id: &str,
    iv: &Interval,
    h: f64,
    w: Weights,
    x: f64,
    variants: &[NormVariant],
) -> Result<()> {
    let cfg = KernelConfig::new(*iv, w, h, x)?;
    for v in variants {
        let oracle = if first_derivative_case(id) {
            linear_kernel_factor(&cfg, v)?
        } else {
            kernel_factor(&cfg, v)?
        };
        let args = CatalogArgs {
            iv: *iv,
            x,
            h,
            weights: w,
            variant: *v,
            norm_value: 1.0,
        };
        let printed = catalog(id, &args)?;
        rows.push(AuditRow::classify(id, cfg, *v, oracle, printed));
    }
    Ok(())
}

// Each displayed special case is audited on the configuration family it is
// printed for: its intrinsic offset, its weight pattern (point-evaluation
// cases couple the weights to x; midpoint cases pin symmetric weights at
// the centre), and the grid's evaluation points elsewhere.
fn catalog_rows(grid: &SweepGrid, rows: &mut Vec<AuditRow>) -> Result<()> {
    debug_assert_eq!(catalog_ids().len(), 11);
    let sup_only = [NormVariant::Sup];
    for iv in &grid.intervals {
        let sym = Weights::symmetric();
        for x in grid.x_points(iv, 0.0) {
            let w = Weights::new(x - iv.a(), iv.b() - x)?;
            push_case(rows, "ostrowski", iv, 0.0, w, x, &sup_only)?;
            push_case(rows, "ostrowski_lp", iv, 0.0, w, x, &grid.variants)?;
        }
        for &(alpha, beta) in &grid.weight_pairs {
            let w = Weights::new(alpha, beta)?;
            for x in grid.x_points(iv, 0.0) {
                push_case(rows, "cerone", iv, 0.0, w, x, &grid.variants)?;
                push_case(rows, "quadratic_plain", iv, 0.0, w, x, &grid.variants)?;
            }
            for &h in &grid.h_values {
                for x in grid.x_points(iv, h) {
                    push_case(rows, "linear_offset", iv, h, w, x, &grid.variants)?;
                }
            }
            for x in grid.x_points(iv, 1.0) {
                push_case(rows, "full_offset", iv, 1.0, w, x, &grid.variants)?;
                push_case(rows, "full_offset_midpoint", iv, 1.0, w, x, &grid.variants)?;
            }
            for x in grid.x_points(iv, 0.5) {
                push_case(rows, "half_offset", iv, 0.5, w, x, &grid.variants)?;
            }
        }
        push_case(
            rows,
            "half_offset_midpoint",
            iv,
            0.5,
            sym,
            iv.midpoint(),
            &grid.variants,
        )?;
        push_case(
            rows,
            "half_offset_upper_quartile",
            iv,
            0.5,
            sym,
            iv.a() + 0.75 * iv.width(),
            &grid.variants,
        )?;
        for &h in &grid.h_values {
            push_case(
                rows,
                "midpoint_family",
                iv,
                h,
                sym,
                iv.midpoint(),
                &grid.variants,
            )?;
        }
    }
    Ok(())
}

struct RowBundle {
    identity: IdentityRow,
    bounds: Vec<BoundRow>,
    perturbed: PerturbedRow,
}

fn verify_one(
    m: &FunctionModel,
    cfg: &KernelConfig,
    norms: &[f64],
    variants: &[NormVariant],
) -> Result<RowBundle> {
    let iv = cfg.iv();
    let (a, b) = (iv.a(), iv.b());
    let (alpha, beta) = (cfg.weights().alpha(), cfg.weights().beta());
    let (h, x) = (cfg.h(), cfg.x());

    let tau_boundary = tau_main(m, cfg)?.total;
    let tau_kernel = tau_via_kernel(m, cfg)?;
    let identity = IdentityRow {
        model: m.id.clone(),
        a,
        b,
        h,
        alpha,
        beta,
        x,
        tau_boundary,
        tau_kernel,
        residual: (tau_boundary - tau_kernel).abs(),
    };

    let mut bounds = Vec::with_capacity(variants.len());
    for (v, norm_value) in variants.iter().zip(norms) {
        let rep = bound_oracle_with_norm(m, cfg, v, *norm_value)?;
        bounds.push(BoundRow {
            model: m.id.clone(),
            a,
            b,
            h,
            alpha,
            beta,
            x,
            variant: v.label(),
            tau: rep.tau,
            oracle_bound: rep.oracle_bound,
            slack: rep.slack,
            sharpness: rep.sharpness_ratio,
        });
    }

    let p = perturbed_bound(m, cfg)?;
    let perturbed = PerturbedRow {
        model: m.id.clone(),
        a,
        b,
        h,
        alpha,
        beta,
        x,
        lhs: p.lhs,
        n_of_x: p.n_of_x,
        bound_first: p.bound_first,
        bound_gruss: p.bound_gruss,
    };

    Ok(RowBundle {
        identity,
        bounds,
        perturbed,
    })
}

/// Runs the full sweep: validates the corpus, walks model x config rows in
/// parallel, embeds the printed-formula audit, and summarizes. The debug
/// flag seeds one artificial bound violation so the failure path stays
/// exercised end to end.
pub fn run_verify(
    grid: &SweepGrid,
    corpus: &[FunctionModel],
    inject_violation: bool,
) -> Result<VerificationReport> {
    let configs = grid.configs()?;
    if configs.is_empty() || corpus.is_empty() {
        return Err(Error::InvalidArgument(
            "verification needs a non-empty grid and corpus".to_string(),
        ));
    }
    for iv in &grid.intervals {
        for m in corpus {
            validate_model(m, iv)?;
        }
    }

    // Derivative norms depend only on (model, interval, variant); computing
    // them once keeps the sweep itself free of adaptive norm integrals.
    let mut norm_cache: Vec<Vec<Vec<f64>>> = Vec::with_capacity(corpus.len());
    for m in corpus {
        let mut per_iv = Vec::with_capacity(grid.intervals.len());
        for iv in &grid.intervals {
            let mut per_variant = Vec::with_capacity(grid.variants.len());
            for v in &grid.variants {
                per_variant.push(norm_f2(m, iv, v)?);
            }
            per_iv.push(per_variant);
        }
        norm_cache.push(per_iv);
    }

    let work: Vec<(usize, usize)> = (0..corpus.len())
        .flat_map(|mi| (0..configs.len()).map(move |ci| (mi, ci)))
        .collect();
    let bundles = work
        .par_iter()
        .map(|&(mi, ci)| {
            let cfg = &configs[ci];
            let iv_idx = grid
                .intervals
                .iter()
                .position(|iv| iv == cfg.iv())
                .expect("config interval comes from the grid");
            verify_one(&corpus[mi], cfg, &norm_cache[mi][iv_idx], &grid.variants)
        })
        .collect::<Result<Vec<RowBundle>>>()?;

    let mut identity = Vec::with_capacity(bundles.len());
    let mut bounds = Vec::with_capacity(bundles.len() * grid.variants.len());
    let mut perturbed = Vec::with_capacity(bundles.len());
    for bundle in bundles {
        identity.push(bundle.identity);
        bounds.extend(bundle.bounds);
        perturbed.push(bundle.perturbed);
    }

    if inject_violation {
        if let Some(row) = bounds.first_mut() {
            row.slack = -1.0;
        }
    }

    let mut violations = 0usize;
    for row in &identity {
        if row.residual > IDENTITY_TOL * row.tau_boundary.abs().max(1.0) {
            violations += 1;
        }
    }
    for row in &bounds {
        if row.slack < -SLACK_TOL * row.oracle_bound.abs().max(1.0) {
            violations += 1;
        }
    }
    for row in &perturbed {
        let tol = CHAIN_TOL * row.bound_gruss.max(1.0);
        if row.lhs > row.bound_first + tol || row.bound_first > row.bound_gruss + tol {
            violations += 1;
        }
    }

    let max_sharpness = bounds.iter().map(|r| r.sharpness).fold(0.0, f64::max);
    let max_identity_residual = identity.iter().map(|r| r.residual).fold(0.0, f64::max);

    let audit: Vec<AuditJsonRow> = run_audit(grid)?.iter().map(AuditRow::to_json_row).collect();
    let case_count = identity.len();

    Ok(VerificationReport {
        meta: ReportMeta {
            version: env!("CARGO_PKG_VERSION").to_string(),
            grid_hash: grid.grid_hash(),
            corpus_ids: corpus.iter().map(|m| m.id.clone()).collect(),
        },
        identity,
        bounds,
        perturbed,
        audit,
        summary: ReportSummary {
            configs: case_count,
            violations,
            max_sharpness,
            max_identity_residual,
        },
    })
}
