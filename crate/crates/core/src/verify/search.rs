//! Search for contexts with a large ratio `Delta_n / fraction`.
//!
//! A coarse grid over the family's shape box seeds a compass search; further
//! compass searches start from seeded random points. The best ratio found is
//! a lower bound for the constant of the inequality, nothing more.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::clt::delta_n;
use crate::error::Result;
use crate::fractions::FractionParams;
use crate::gclass::{GFunction, GSpec};
use crate::verify::families::Family;
use crate::verify::inequalities::{check_with_delta, InequalityId};

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub id: InequalityId,
    pub g: GSpec,
    pub eps: f64,
    pub gamma: f64,
    pub family: Family,
    pub n: usize,
    /// Evaluations available to the compass searches. Grid points are not
    /// counted.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Grid points per shape dimension.
    pub grid: usize,
}

impl SearchSpec {
    pub fn new(id: InequalityId, g: GSpec, family: Family, n: usize) -> Self {
        Self {
            id,
            g,
            eps: 1.0,
            gamma: 1.0,
            family,
            n,
            budget: 10_000,
            restarts: 3,
            seed: 0x5eed,
            grid: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchResult {
    pub inequality: InequalityId,
    pub best_ratio: f64,
    pub best_shape: Vec<f64>,
    pub context: String,
    pub grid_best_ratio: f64,
    pub evaluations: usize,
    /// The constant of the inequality, an upper bound for `best_ratio`.
    pub constant: f64,
}

struct Objective<'a> {
    spec: &'a SearchSpec,
}

impl Objective<'_> {
    fn ratio(&self, shape: &[f64]) -> f64 {
        self.try_ratio(shape).unwrap_or(f64::NEG_INFINITY)
    }

    fn try_ratio(&self, shape: &[f64]) -> Result<f64> {
        let s = self.spec;
        let ctx = s.family.build(shape, s.n)?;
        let g: GFunction = s.g.resolve(ctx.bn())?;
        let params = FractionParams::new(g, s.eps, s.gamma)?;
        let report = check_with_delta(&ctx, s.id, Some(&params), &delta_n(&ctx)?)?;
        Ok(if report.ratio.is_nan() {
            f64::NEG_INFINITY
        } else {
            report.ratio
        })
    }
}

struct Local {
    x: Vec<f64>,
    f: f64,
    evals: usize,
}

fn compass(obj: &Objective, bounds: &[(f64, f64)], x0: Vec<f64>, f0: f64, budget: usize) -> Local {
    let mut x = x0;
    let mut f = f0;
    let mut steps: Vec<f64> = bounds.iter().map(|(lo, hi)| 0.05 * (hi - lo)).collect();
    let floors: Vec<f64> = bounds.iter().map(|(lo, hi)| 1e-12 * (hi - lo)).collect();
    let mut evals = 0;
    'outer: while evals < budget && steps.iter().zip(&floors).any(|(s, m)| s > m) {
        for i in 0..x.len() {
            for dir in [1.0, -1.0] {
                if evals >= budget {
                    break 'outer;
                }
                let mut y = x.clone();
                y[i] = (x[i] + dir * steps[i]).clamp(bounds[i].0, bounds[i].1);
                if y[i] == x[i] {
                    continue;
                }
                let fy = obj.ratio(&y);
                evals += 1;
                if fy > f {
                    x = y;
                    f = fy;
                    continue 'outer;
                }
            }
        }
        for s in &mut steps {
            *s *= 0.5;
        }
    }
    Local { x, f, evals }
}

/// Maximizes `Delta_n / fraction` over the shape box of `spec.family`.
pub fn lower_bound_search(spec: &SearchSpec) -> Result<SearchResult> {
    let (constant, _) = spec.id.constant(spec.eps, spec.gamma)?;
    FractionParams::new(GFunction::Identity, spec.eps, spec.gamma)?;
    let obj = Objective { spec };
    let bounds = spec.family.bounds();

    let axes: Vec<Vec<f64>> = bounds
        .iter()
        .map(|&(lo, hi)| {
            let k = spec.grid.max(2);
            (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect()
        })
        .collect();
    let mut points: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in &axes {
        points = points
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    let scored: Vec<(Vec<f64>, f64)> = points
        .into_par_iter()
        .map(|p| {
            let f = obj.ratio(&p);
            (p, f)
        })
        .collect();
    let (grid_x, grid_f) =
        scored.into_iter().fold(
            (Vec::new(), f64::NEG_INFINITY),
            |best, (p, f)| if f > best.1 { (p, f) } else { best },
        );

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut starts = vec![(grid_x.clone(), grid_f)];
    for _ in 0..spec.restarts {
        let x: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..=hi)).collect();
        starts.push((x, f64::NAN));
    }
    let share = spec.budget / starts.len();
    let mut extra = spec.budget % starts.len();
    let budgets: Vec<usize> = starts
        .iter()
        .map(|_| {
            let b = share + usize::from(extra > 0);
            extra = extra.saturating_sub(1);
            b
        })
        .collect();

    let locals: Vec<Local> = starts
        .into_par_iter()
        .zip(budgets)
        .map(|((x, f), budget)| {
            if budget == 0 {
                return Local {
                    x,
                    f: if f.is_nan() { f64::NEG_INFINITY } else { f },
                    evals: 0,
                };
            }
            let (f, used) = if f.is_nan() { (obj.ratio(&x), 1) } else { (f, 0) };
            let mut l = compass(&obj, &bounds, x, f, budget - used);
            l.evals += used;
            l
        })
        .collect();

    let evaluations = locals.iter().map(|l| l.evals).sum();
    let mut best = Local {
        x: grid_x,
        f: grid_f,
        evals: 0,
    };
    for l in locals {
        if l.f > best.f {
            best = l;
        }
    }
    Ok(SearchResult {
        inequality: spec.id,
        best_ratio: best.f,
        context: spec.family.label(&best.x, spec.n),
        best_shape: best.x,
        grid_best_ratio: grid_f,
        evaluations,
        constant,
    })
}
