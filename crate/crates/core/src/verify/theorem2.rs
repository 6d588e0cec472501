//! Identities and two-sided bounds for the clipped weights
//! `g0(z) = min(z, B_n)` and `g1(z) = max(z, B_n)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::fractions::{esseen_fraction, rozovskii_fraction, sup_zl, FractionParams, SumContext, M};
use crate::gclass::GFunction;

/// Relative tolerance for the representation of the `g0` Rozovskii fraction.
pub const REPRESENTATION_TOL: f64 = 1e-10;

/// Relative slack for clauses that hold with equality in exact arithmetic.
/// Right limits at a breakpoint are products like `(b / b') * L` that can
/// round one ulp above their exact value.
pub const ROUNDING_TOL: f64 = 8.0 * f64::EPSILON;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub pass: bool,
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Theorem2Report {
    pub context: String,
    #[serde(with = "crate::ext::f64_ext")]
    pub eps: f64,
    #[serde(with = "crate::ext::f64_ext")]
    pub gamma: f64,
    pub clauses: Vec<Clause>,
}

impl Theorem2Report {
    pub fn pass(&self) -> bool {
        self.clauses.iter().all(|c| c.pass)
    }
}

fn within(value: f64, lower: f64, upper: f64, rel: f64) -> bool {
    value >= lower - rel * lower.abs() && value <= upper + rel * upper.abs()
}

fn clause(name: &'static str, value: f64, lower: f64, upper: f64, rel: f64) -> Clause {
    Clause {
        name,
        pass: within(value, lower, upper, rel),
        value,
        lower,
        upper,
    }
}

/// Evaluates every clause that applies to `(ctx, eps, gamma)`.
pub fn theorem2_checks(ctx: &SumContext, eps: f64, gamma: f64) -> Result<Theorem2Report> {
    let g0 = FractionParams::new(GFunction::clip_above(ctx.bn())?, eps, gamma)?;
    let g1 = FractionParams::new(GFunction::clip_below(ctx.bn())?, eps, gamma)?;
    let e1 = esseen_fraction(ctx, &g1).value;
    let r1 = rozovskii_fraction(ctx, &g1).value;
    let r0 = rozovskii_fraction(ctx, &g0).value;

    let mut clauses = Vec::new();

    if gamma.is_finite() {
        let m = M(ctx, eps).abs();
        let m_part = if m == 0.0 { 0.0 } else { gamma / eps.max(1.0) * m };
        let rhs = m_part + sup_zl(ctx, eps.min(1.0)).value;
        clauses.push(clause("rozovskii-g0-representation", r0, rhs, rhs, REPRESENTATION_TOL));
    }

    let e_hi = eps.max(1.0) * gamma.max(1.0);
    clauses.push(clause("esseen-g1-bounds", e1, 1.0, e_hi, ROUNDING_TOL));
    let r_hi = eps.max(1.0) * (gamma + 1.0);
    clauses.push(clause("rozovskii-g1-bounds", r1, 1.0, r_hi, ROUNDING_TOL));

    if eps <= 1.0 && gamma <= 1.0 {
        clauses.push(clause("esseen-g1-unit", e1, 1.0, 1.0, ROUNDING_TOL));
    }
    if eps <= 1.0 && ctx.is_symmetric() {
        clauses.push(clause("symmetric-esseen-g1-unit", e1, 1.0, 1.0, ROUNDING_TOL));
        clauses.push(clause("symmetric-rozovskii-g1-unit", r1, 1.0, 1.0, ROUNDING_TOL));
    }

    Ok(Theorem2Report {
        context: ctx.describe(),
        eps,
        gamma,
        clauses,
    })
}

/// The `(eps, gamma)` grid of the standard suite.
pub const SUITE_EPS: [f64; 5] = [0.25, 0.5, 1.0, 2.0, 4.0];
pub const SUITE_GAMMA: [f64; 3] = [0.25, 1.0, 4.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteSummary {
    pub contexts: usize,
    pub runs: usize,
    pub clauses: usize,
    pub failed_clauses: usize,
    /// Runs with at least one failing clause.
    pub failures: Vec<Theorem2Report>,
}

impl SuiteSummary {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs [`theorem2_checks`] on every context and grid point, in parallel
/// over contexts.
pub fn theorem2_suite(contexts: &[(String, SumContext)], eps: &[f64], gamma: &[f64]) -> Result<SuiteSummary> {
    let reports: Vec<Vec<Theorem2Report>> = contexts
        .par_iter()
        .map(|(label, ctx)| {
            let mut out = Vec::with_capacity(eps.len() * gamma.len());
            for &e in eps {
                for &g in gamma {
                    let mut r = theorem2_checks(ctx, e, g)?;
                    r.context = label.clone();
                    out.push(r);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let reports: Vec<Theorem2Report> = reports.into_iter().flatten().collect();
    let clauses = reports.iter().map(|r| r.clauses.len()).sum();
    let failed_clauses = reports.iter().flat_map(|r| &r.clauses).filter(|c| !c.pass).count();
    Ok(SuiteSummary {
        contexts: contexts.len(),
        runs: reports.len(),
        clauses,
        failed_clauses,
        failures: reports.into_iter().filter(|r| !r.pass()).collect(),
    })
}
