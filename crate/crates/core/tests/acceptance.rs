//! The seven acceptance criteria, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines are always printed.

mod common;

use std::time::{Duration, Instant};

use common::{close, g_functions, small_contexts, theorem2_contexts, Oracle};
use lindeberg_core::verify::constants::GAMMA_STAR;
use lindeberg_core::verify::{
    a1_lower_bound, default_corpus, gamma_star_constants, lower_bound_search, run_corpus, theorem2_suite, Family,
    InequalityId, SearchSpec, SUITE_EPS, SUITE_GAMMA,
};
use lindeberg_core::{
    delta_n, esseen_fraction, normal_cdf, osipov_fraction, rozovskii_fraction, DiscreteDistribution, FractionParams,
    GFunction, GSpec, Lambda, SumContext, M,
};
use rayon::prelude::*;

type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    match limit {
        Some(limit) => {
            o.pass &= took <= limit;
            o.detail = format!("{} ({took:.2?}, limit {limit:?})", o.detail);
        }
        None => o.detail = format!("{} ({took:.2?})", o.detail),
    }
    o
}

fn constants() -> Outcome {
    let a1 = a1_lower_bound();
    let g = match gamma_star_constants() {
        Ok(g) => g,
        Err(e) => return outcome(false, e.to_string()),
    };
    let pass = (a1.value - 0.54093).abs() <= 1e-4
        && (g.x0 - 5.487414).abs() <= 1e-5
        && (g.kappa - 0.5315).abs() <= 5e-4
        && (g.gamma_star - 0.5599).abs() <= 5e-4;
    outcome(
        pass,
        format!(
            "A1 >= {:.6}, x0 = {:.7}, kappa = {:.6}, gamma* = {:.6}",
            a1.value, g.x0, g.kappa, g.gamma_star
        ),
    )
}

fn identity_suite() -> Outcome {
    let contexts = theorem2_contexts();
    match theorem2_suite(&contexts, &SUITE_EPS, &SUITE_GAMMA) {
        Ok(s) => outcome(
            s.contexts >= 200 && s.pass(),
            format!(
                "{} contexts, {} clauses, {} failed",
                s.contexts, s.clauses, s.failed_clauses
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn fractions(ctx: &SumContext, g: &GFunction, eps: f64, gamma: f64) -> (f64, f64) {
    let p = FractionParams::new(g.clone(), eps, gamma).unwrap();
    (esseen_fraction(ctx, &p).value, rozovskii_fraction(ctx, &p).value)
}

fn le(a: f64, b: f64) -> bool {
    a <= b + 1e-12 * b.abs()
}

/// Every property violated on `ctx`, as messages.
fn property_violations(label: &str, ctx: &SumContext) -> Vec<String> {
    let mut bad = Vec::new();
    let mut eps_grid: Vec<f64> = (0..=400).map(|i| 10f64.powf(-3.0 + 6.0 * i as f64 / 400.0)).collect();
    for &b in ctx.breakpoints() {
        eps_grid.extend([b, b * (1.0 + 1e-12), b * (1.0 - 1e-12)]);
    }
    for &e in &eps_grid {
        let lam = Lambda(ctx, e);
        if lam > e || M(ctx, e).abs() > lam {
            bad.push(format!("{label}: third-moment bound at eps={e}"));
        }
    }
    let at_one = osipov_fraction(ctx, 1.0);
    let min = eps_grid
        .iter()
        .map(|&e| osipov_fraction(ctx, e))
        .fold(f64::INFINITY, f64::min);
    if (min - at_one).abs() > 1e-10 {
        bad.push(format!("{label}: osipov minimum {min} vs {at_one} at 1"));
    }

    let g0 = GFunction::clip_above(ctx.bn()).unwrap();
    let g1 = GFunction::clip_below(ctx.bn()).unwrap();
    for &eps in &SUITE_EPS {
        for &gamma in &SUITE_GAMMA {
            let (e0, r0) = fractions(ctx, &g0, eps, gamma);
            let (e1, r1) = fractions(ctx, &g1, eps, gamma);
            if eps <= 1.0 {
                if (e0, r0) != fractions(ctx, &GFunction::Identity, eps, gamma) {
                    bad.push(format!("{label}: clip-above differs from identity at {eps}, {gamma}"));
                }
                if (e1, r1) != fractions(ctx, &GFunction::ConstantOne, eps, gamma) {
                    bad.push(format!("{label}: clip-below differs from const at {eps}, {gamma}"));
                }
            }
            for (name, g) in g_functions(ctx.bn()) {
                let (e, r) = fractions(ctx, &g, eps, gamma);
                if !(le(e0, e) && le(e, e1) && le(r0, r) && le(r, r1)) {
                    bad.push(format!("{label}: sandwich for {name} at {eps}, {gamma}"));
                }
                for c in [1e-3, 0.37, 7.0, 1e3] {
                    let (es, rs) = fractions(ctx, &GFunction::scaled(c, g.clone()).unwrap(), eps, gamma);
                    if !close(e, es, 1e-12) || !close(r, rs, 1e-12) {
                        bad.push(format!("{label}: scale {c} changes {name} at {eps}, {gamma}"));
                    }
                }
            }
        }
    }
    bad
}

fn property_suite() -> Outcome {
    let contexts = theorem2_contexts();
    let bad: Vec<String> = contexts
        .par_iter()
        .flat_map(|(l, c)| property_violations(l, c))
        .collect();
    let first = bad.first().map(|b| format!(", first: {b}")).unwrap_or_default();
    outcome(
        bad.is_empty(),
        format!(
            "{} contexts x {} g, {} violations{}",
            contexts.len(),
            g_functions(1.0).len(),
            bad.len(),
            first
        ),
    )
}

fn oracle_violations(label: &str, ctx: &SumContext) -> Vec<String> {
    let eps = [0.25, 0.5, 1.0, 2.0, 4.0, f64::INFINITY];
    let gamma = [0.25, 1.0, 4.0, f64::INFINITY];
    let gs = g_functions(ctx.bn());
    let funcs: Vec<GFunction> = gs.iter().map(|(_, g)| g.clone()).collect();
    let oracle = Oracle::new(ctx, &eps, &funcs);
    let mut bad = Vec::new();
    for (name, g) in &gs {
        let w = oracle.weights(g);
        for &e in &eps {
            for &y in &gamma {
                let (fe, fr) = fractions(ctx, g, e, y);
                let (oe, or) = (oracle.esseen(&w, e, y), oracle.rozovskii(&w, e, y));
                if !close(fe, oe, 1e-9) || !close(fr, or, 1e-9) {
                    bad.push(format!("{label} {name} eps={e} gamma={y}: {fe} vs {oe}, {fr} vs {or}"));
                }
            }
        }
    }
    bad
}

fn sup_oracle() -> Outcome {
    let contexts = small_contexts(8);
    let bad: Vec<String> = contexts.par_iter().flat_map(|(l, c)| oracle_violations(l, c)).collect();
    let first = bad.first().map(|b| format!(", first: {b}")).unwrap_or_default();
    outcome(
        !contexts.is_empty() && bad.is_empty(),
        format!("{} contexts, {} violations{}", contexts.len(), bad.len(), first),
    )
}

fn harness() -> Outcome {
    let report = match run_corpus(&default_corpus(), &[]) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let s = &report.summary;
    let all_ids = InequalityId::ALL
        .iter()
        .all(|id| s.per_inequality.get(id).is_some_and(|x| x.checks > 0));
    let rows = |id: InequalityId, gamma: f64, constant: f64| {
        let hits: Vec<_> = report
            .reports
            .iter()
            .filter(|r| r.inequality == id && r.eps == Some(1.0) && r.gamma == Some(gamma))
            .collect();
        !hits.is_empty() && hits.iter().all(|r| r.pass && r.constant_used == constant)
    };
    let esseen_rows = rows(InequalityId::EsseenGGamma, 0.72, 2.7298);
    let rozovskii_rows = rows(InequalityId::RozovskiiGGamma, GAMMA_STAR, 2.7286);
    outcome(
        s.checks >= 1000 && all_ids && s.failures == 0 && esseen_rows && rozovskii_rows,
        format!(
            "{} contexts, {} checks, {} failures, all ids {all_ids}, (1, 0.72) rows {esseen_rows}, (1, gamma*) rows {rozovskii_rows}",
            s.contexts, s.checks, s.failures
        ),
    )
}

fn exact_delta() -> Outcome {
    let pm1 = DiscreteDistribution::symmetric_pm1();
    let d = |n| delta_n(&SumContext::iid(&pm1, n).unwrap()).unwrap().delta;
    let d1 = d(1);
    let d2 = d(2);
    let want1 = 0.5 - normal_cdf(-1.0);
    let worst = (1..=64).map(|n| d(n) * (n as f64).sqrt()).fold(0.0, f64::max);
    outcome(
        (d1 - want1).abs() <= 1e-12 && d2 == 0.25 && worst <= 0.4690,
        format!("delta1 = {d1}, delta2 = {d2}, max sqrt(n) delta_n = {worst:.6}"),
    )
}

fn search() -> Outcome {
    let g = GSpec::parse("clip-above:B").unwrap();
    let mut spec = SearchSpec::new(InequalityId::Kp, g, Family::TwoPoint, 1);
    spec.budget = 10_000;
    match lower_bound_search(&spec) {
        Ok(r) => outcome(
            r.best_ratio >= 0.50 && r.best_ratio <= 1.87 && r.evaluations <= 10_000,
            format!(
                "best ratio {:.6} at {:?} after {} evaluations",
                r.best_ratio, r.best_shape, r.evaluations
            ),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn main() {
    let criteria: [Criterion; 7] = [
        ("constant reproduction", Some(Duration::from_secs(1)), constants),
        ("identity suite", Some(Duration::from_secs(30)), identity_suite),
        ("property suite", None, property_suite),
        ("sup-oracle equivalence", None, sup_oracle),
        ("inequality harness", Some(Duration::from_secs(300)), harness),
        ("exact delta", None, exact_delta),
        ("lower-bound search", None, search),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let o = timed(limit, run);
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {} {name}: {verdict} {}", i + 1, o.detail);
        if !o.pass {
            failed.push(i + 1);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
