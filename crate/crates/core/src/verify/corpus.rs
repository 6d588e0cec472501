//! Batch checks over a corpus of contexts.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::clt::{convolve, kolmogorov_delta};
use crate::error::{Error, Result};
use crate::fractions::{FractionParams, SumContext};
use crate::gclass::{GFunction, GSpec};
use crate::verify::constants::{ESSEEN_TABLE, GAMMA_STAR, ROZOVSKII_TABLE};
use crate::verify::families::Family;
use crate::verify::inequalities::{check_with_delta, BoundReport, InequalityId};

/// The weights used by the default checks.
pub const DEFAULT_G_SPECS: [&str; 7] = [
    "identity",
    "const",
    "power:0.5",
    "clip-above:B",
    "clip-below:B",
    "scaled:7:power:0.3",
    "tabulated:[[0.25,0.5],[1,1],[4,1.5]]",
];

/// A family with a shape grid and a list of `n`. Families with more than
/// one shape parameter use the Cartesian power of `shapes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyGrid {
    pub family: Family,
    #[serde(with = "crate::ext::vec_f64_ext")]
    pub shapes: Vec<f64>,
    pub n: Vec<usize>,
}

/// Which parameter combinations to check for one inequality. Every element
/// of `g x eps x gamma` is checked; lists an id does not use may be omitted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckSpec {
    pub id: InequalityId,
    #[serde(default)]
    pub g: Vec<String>,
    #[serde(default, with = "crate::ext::vec_f64_ext")]
    pub eps: Vec<f64>,
    #[serde(default, with = "crate::ext::vec_f64_ext")]
    pub gamma: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub families: Vec<FamilyGrid>,
    /// `None` runs [`default_checks`].
    #[serde(default)]
    pub checks: Option<Vec<CheckSpec>>,
    #[serde(default)]
    pub prune_tol: f64,
}

impl CorpusSpec {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    pub fn empty() -> Self {
        Self {
            families: Vec::new(),
            checks: None,
            prune_tol: 0.0,
        }
    }

    /// The labelled contexts of the corpus, in grid order.
    pub fn contexts(&self) -> Result<Vec<(String, SumContext)>> {
        let mut out = Vec::new();
        for grid in &self.families {
            for shape in shape_product(&grid.shapes, grid.family.dim()) {
                for &n in &grid.n {
                    out.push((grid.family.label(&shape, n), grid.family.build(&shape, n)?));
                }
            }
        }
        Ok(out)
    }
}

fn shape_product(values: &[f64], dim: usize) -> Vec<Vec<f64>> {
    let mut acc = vec![Vec::new()];
    for _ in 0..dim {
        acc = acc
            .into_iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut next = prefix.clone();
                    next.push(v);
                    next
                })
            })
            .collect();
    }
    acc
}

/// The built-in corpus: two-, three-point and mixed families with
/// `n` up to 8.
pub fn default_corpus() -> CorpusSpec {
    let grid = |family, shapes: &[f64], n: &[usize]| FamilyGrid {
        family,
        shapes: shapes.to_vec(),
        n: n.to_vec(),
    };
    let p = [
        0.01, 0.02, 0.05, 0.08, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.55, 0.6, 0.65, 0.7, 0.75, 0.8, 0.85,
        0.9, 0.95, 0.98, 0.99,
    ];
    CorpusSpec {
        families: vec![
            grid(Family::TwoPoint, &p, &[1, 2, 4, 8]),
            grid(
                Family::SymmetricThreePoint,
                &[0.02, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0],
                &[1, 2, 4],
            ),
            grid(
                Family::ThreePoint,
                &[0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0, 1.2, 1.5, 1.8, 1.95],
                &[1, 2, 4],
            ),
            grid(
                Family::Oscillating,
                &[0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.8, 0.95],
                &[2, 4],
            ),
            grid(Family::TwoPointPair, &[0.05, 0.2, 0.5, 0.8], &[2, 4]),
            grid(Family::Mixture, &[0.1, 0.3, 0.5, 0.7, 0.9, 0.99], &[3, 6]),
        ],
        checks: None,
        prune_tol: 0.0,
    }
}

/// Symmetric and asymmetric two- and three-point laws with `n` in
/// `{1, 2, 4}`, 210 contexts in all.
pub fn theorem2_corpus() -> CorpusSpec {
    let grid = |family, k: usize, lo: f64, hi: f64| FamilyGrid {
        family,
        shapes: (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect(),
        n: vec![1, 2, 4],
    };
    CorpusSpec {
        families: vec![
            grid(Family::TwoPoint, 30, 0.01, 0.99),
            grid(Family::SymmetricThreePoint, 20, 0.05, 1.0),
            grid(Family::ThreePoint, 20, 0.05, 1.95),
        ],
        checks: None,
        prune_tol: 0.0,
    }
}

/// Parameter sets for all thirteen ids, chosen so that a table constant
/// exists for each.
pub fn default_checks() -> Vec<CheckSpec> {
    let gs: Vec<String> = DEFAULT_G_SPECS.iter().map(|s| s.to_string()).collect();
    let inf = f64::INFINITY;
    let spec = |id, g: &[String], eps: &[f64], gamma: &[f64]| CheckSpec {
        id,
        g: g.to_vec(),
        eps: eps.to_vec(),
        gamma: gamma.to_vec(),
    };
    let mut checks = vec![
        spec(InequalityId::Kp, &gs, &[], &[]),
        spec(InequalityId::Osipov1, &[], &[], &[]),
        spec(InequalityId::Osipov, &[], &[0.25, 0.5, 1.0, 2.0, 4.0, inf], &[]),
        spec(InequalityId::Esseen, &[], &[], &[]),
        spec(InequalityId::EsseenBounded, &[], &[], &[]),
        spec(InequalityId::Rozovskii, &[], &[], &[]),
        spec(InequalityId::WangAhmad, &gs, &[], &[]),
        spec(InequalityId::EsseenG, &gs, &[1.0, 2.0, inf], &[]),
        spec(InequalityId::RozovskiiG, &gs, &[0.5, 1.0, 1.21, 1.99, 2.63, 5.0], &[]),
        spec(
            InequalityId::EsseenGGamma,
            &gs,
            &[1.0, 2.0, inf],
            &[GAMMA_STAR, 0.72, 1.0, inf],
        ),
        spec(
            InequalityId::RozovskiiGGamma,
            &gs,
            &[0.5, 1.0, 1.21, 1.99, 2.12, 3.0, 5.0],
            &[GAMMA_STAR, 1.0, inf],
        ),
    ];
    for row in &ESSEEN_TABLE {
        checks.push(spec(InequalityId::EsseenGamma, &[], &[row.eps], &[row.gamma]));
    }
    for row in &ROZOVSKII_TABLE {
        checks.push(spec(InequalityId::RozovskiiGamma, &[], &[row.eps], &[row.gamma]));
    }
    checks
}

#[derive(Debug, Clone)]
struct Task {
    id: InequalityId,
    g: Option<GSpec>,
    eps: f64,
    gamma: f64,
}

fn expand(checks: &[CheckSpec], ids: &[InequalityId]) -> Result<Vec<Task>> {
    let mut tasks = Vec::new();
    for c in checks {
        if !ids.is_empty() && !ids.contains(&c.id) {
            continue;
        }
        let gs: Vec<Option<GSpec>> = if c.id.uses_g() {
            if c.g.is_empty() {
                return Err(Error::InvalidParameter(format!("{} needs a g list", c.id)));
            }
            c.g.iter().map(|s| GSpec::parse(s).map(Some)).collect::<Result<_>>()?
        } else {
            vec![None]
        };
        let or_one = |v: &[f64], used: bool| if used && !v.is_empty() { v.to_vec() } else { vec![1.0] };
        if c.id.uses_eps() && c.eps.is_empty() {
            return Err(Error::InvalidParameter(format!("{} needs an eps list", c.id)));
        }
        if c.id.uses_gamma() && c.gamma.is_empty() {
            return Err(Error::InvalidParameter(format!("{} needs a gamma list", c.id)));
        }
        for g in &gs {
            for &eps in &or_one(&c.eps, c.id.uses_eps()) {
                for &gamma in &or_one(&c.gamma, c.id.uses_gamma()) {
                    // surface missing constants before any work is done
                    c.id.constant(eps, gamma)?;
                    FractionParams::new(GFunction::Identity, eps, gamma)?;
                    tasks.push(Task {
                        id: c.id,
                        g: g.clone(),
                        eps,
                        gamma,
                    });
                }
            }
        }
    }
    Ok(tasks)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdSummary {
    pub checks: usize,
    pub failures: usize,
    #[serde(with = "crate::ext::f64_ext")]
    pub max_ratio: f64,
    /// Largest `ratio / constant_used`; below 1 means every check passed
    /// without using the pruning allowance.
    #[serde(with = "crate::ext::f64_ext")]
    pub max_utilization: f64,
    pub worst_context: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub contexts: usize,
    pub checks: usize,
    pub failures: usize,
    pub per_inequality: BTreeMap<InequalityId, IdSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub summary: CorpusSummary,
    /// Failing reports first, then the rest in corpus order.
    pub reports: Vec<BoundReport>,
}

fn run_context(label: &str, ctx: &SumContext, tasks: &[Task], prune_tol: f64) -> Result<Vec<BoundReport>> {
    let delta = kolmogorov_delta(&convolve(ctx, prune_tol)?);
    tasks
        .iter()
        .map(|t| {
            let g = match &t.g {
                Some(spec) => spec.resolve(ctx.bn())?,
                None => GFunction::Identity,
            };
            let params = FractionParams::new(g, t.eps, t.gamma)?;
            let mut r = check_with_delta(ctx, t.id, Some(&params), &delta)?;
            r.context = label.to_string();
            if let Some(spec) = &t.g {
                r.g = Some(spec.to_string());
            }
            Ok(r)
        })
        .collect()
}

/// Runs every check of `corpus` restricted to `ids` (all ids when empty) on
/// every context, in parallel over contexts.
pub fn run_corpus(corpus: &CorpusSpec, ids: &[InequalityId]) -> Result<CorpusReport> {
    if corpus.prune_tol.is_nan() || corpus.prune_tol < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "prune_tol must be non-negative, got {}",
            corpus.prune_tol
        )));
    }
    let checks = corpus.checks.clone().unwrap_or_else(default_checks);
    let tasks = expand(&checks, ids)?;
    let contexts = corpus.contexts()?;

    let per_context: Vec<Vec<BoundReport>> = contexts
        .par_iter()
        .map(|(label, ctx)| run_context(label, ctx, &tasks, corpus.prune_tol))
        .collect::<Result<_>>()?;
    let all: Vec<BoundReport> = per_context.into_iter().flatten().collect();

    let mut per_inequality: BTreeMap<InequalityId, IdSummary> = BTreeMap::new();
    for r in &all {
        let s = per_inequality.entry(r.inequality).or_insert(IdSummary {
            checks: 0,
            failures: 0,
            max_ratio: 0.0,
            max_utilization: 0.0,
            worst_context: None,
        });
        s.checks += 1;
        s.failures += usize::from(!r.pass);
        if r.ratio > s.max_ratio {
            s.max_ratio = r.ratio;
        }
        let u = r.ratio / r.constant_used;
        if u > s.max_utilization {
            s.max_utilization = u;
            s.worst_context = Some(r.context.clone());
        }
    }
    let (mut reports, passed): (Vec<_>, Vec<_>) = all.into_iter().partition(|r| !r.pass);
    let failures = reports.len();
    reports.extend(passed);

    Ok(CorpusReport {
        summary: CorpusSummary {
            contexts: contexts.len(),
            checks: reports.len(),
            failures,
            per_inequality,
        },
        reports,
    })
}
