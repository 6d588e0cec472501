//! Brute-force reference evaluations and shared corpora for the
//! integration tests. Nothing here uses the level tables of the library:
//! every quantity is recomputed from the atoms.

#![allow(dead_code)]

use lindeberg_core::verify::corpus::DEFAULT_G_SPECS;
use lindeberg_core::verify::{default_corpus, theorem2_corpus};
use lindeberg_core::{GFunction, GSpec, SumContext};

pub const ORACLE_GRID: usize = 100_000;

pub fn g_functions(bn: f64) -> Vec<(String, GFunction)> {
    DEFAULT_G_SPECS
        .iter()
        .map(|s| (s.to_string(), GSpec::parse(s).unwrap().resolve(bn).unwrap()))
        .collect()
}

/// Contexts of the built-in corpora with at most `max_atoms` atoms in total.
pub fn small_contexts(max_atoms: usize) -> Vec<(String, SumContext)> {
    let mut out = Vec::new();
    for spec in [default_corpus(), theorem2_corpus()] {
        for (label, ctx) in spec.contexts().unwrap() {
            let atoms: usize = ctx.summands().iter().map(|d| d.len()).sum();
            if atoms <= max_atoms && !out.iter().any(|(l, _): &(String, SumContext)| *l == label) {
                out.push((label, ctx));
            }
        }
    }
    out
}

pub fn theorem2_contexts() -> Vec<(String, SumContext)> {
    theorem2_corpus().contexts().unwrap()
}

/// Step functions recomputed from the atoms and sampled once per context
/// on a shared point set.
pub struct Oracle {
    atoms: Vec<(f64, f64)>,
    bn: f64,
    far: f64,
    z: Vec<f64>,
    l: Vec<f64>,
    m: Vec<f64>,
}

impl Oracle {
    /// The point set holds a tiny `z` for the limit at `0+`, every breakpoint
    /// with its one-sided neighbours, the kinks of every `g` in `gs`, the left
    /// limit at every finite `eps`, a geometric grid of [`ORACLE_GRID`] points
    /// and one far point standing in for infinity.
    pub fn new(ctx: &SumContext, eps: &[f64], gs: &[GFunction]) -> Self {
        let atoms: Vec<(f64, f64)> = ctx
            .summands()
            .iter()
            .flat_map(|d| d.atoms().iter().map(|a| (a.value, a.prob)))
            .collect();
        let bn = ctx.summands().iter().map(|d| d.variance()).sum::<f64>().sqrt();
        let mut b: Vec<f64> = atoms
            .iter()
            .filter(|(x, _)| *x != 0.0)
            .map(|(x, _)| x.abs() / bn)
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        let lo = b[0];
        let hi = *b.last().unwrap();
        let far = 1e30 * hi;

        let mut z = vec![1e-12 * lo, far];
        let mut near = |x: f64| z.extend([x, x * (1.0 + 1e-12), x * (1.0 - 1e-12)]);
        for &x in &b {
            near(x);
        }
        for g in gs {
            for k in g.kinks() {
                near(k / bn);
            }
        }
        z.extend(eps.iter().filter(|e| e.is_finite()).map(|e| e * (1.0 - 1e-12)));
        let top = eps.iter().copied().filter(|e| e.is_finite()).fold(1e3 * hi, f64::max);
        let bottom = 1e-6 * lo;
        let step = (top / bottom).ln() / (ORACLE_GRID - 1) as f64;
        z.extend((0..ORACLE_GRID).map(|i| bottom * (step * i as f64).exp()));
        z.retain(|&x| x > 0.0);

        let mut o = Self {
            atoms,
            bn,
            far,
            z,
            l: Vec::new(),
            m: Vec::new(),
        };
        o.l = o.z.iter().map(|&x| o.lindeberg(x)).collect();
        o.m = o.z.iter().map(|&x| o.third(x)).collect();
        o
    }

    /// `B^-2 sum E X^2 1(|X| >= zB)`, compared as `|x|/B >= z`.
    pub fn lindeberg(&self, z: f64) -> f64 {
        let s: f64 = self
            .atoms
            .iter()
            .filter(|(x, _)| x.abs() / self.bn >= z)
            .map(|(x, p)| x * x * p)
            .sum();
        s / (self.bn * self.bn)
    }

    /// `B^-3 sum E X^3 1(|X| < zB)`.
    pub fn third(&self, z: f64) -> f64 {
        let s: f64 = self
            .atoms
            .iter()
            .filter(|(x, _)| x.abs() / self.bn < z)
            .map(|(x, p)| x * x * x * p)
            .sum();
        s / (self.bn * self.bn * self.bn)
    }

    /// `G(z) = g(zB)/g(B)` on the point set.
    pub fn weights(&self, g: &GFunction) -> Weights {
        let g_bn = g.eval(self.bn).unwrap();
        Weights {
            w: self.z.iter().map(|&z| g.eval(z * self.bn).unwrap() / g_bn).collect(),
            g: g.clone(),
            g_bn,
        }
    }

    fn gamma_m(gamma: f64, m: f64) -> f64 {
        if m == 0.0 {
            0.0
        } else {
            gamma * m.abs()
        }
    }

    fn in_range(&self, z: f64, eps: f64) -> bool {
        z < eps && !(eps.is_finite() && z == self.far)
    }

    /// `sup_{0<z<eps} G(z)/z (gamma |M(z)| + z L(z))` over the point set.
    pub fn esseen(&self, w: &Weights, eps: f64, gamma: f64) -> f64 {
        let mut best = 0.0f64;
        for (i, &z) in self.z.iter().enumerate() {
            if !self.in_range(z, eps) {
                continue;
            }
            let a = Self::gamma_m(gamma, self.m[i]);
            let lead = if a == 0.0 { 0.0 } else { w.w[i] / z * a };
            best = best.max(lead + w.w[i] * self.l[i]);
        }
        best
    }

    /// `gamma G(eps)/eps |M(eps)| + sup_{0<z<eps} G(z) L(z)` over the point set.
    pub fn rozovskii(&self, w: &Weights, eps: f64, gamma: f64) -> f64 {
        let z_end = if eps.is_finite() { eps } else { self.far };
        let a = Self::gamma_m(gamma, self.third(z_end));
        let end_weight = w.g.eval(z_end * self.bn).unwrap() / w.g_bn;
        let endpoint = if a == 0.0 { 0.0 } else { end_weight / z_end * a };
        let mut best = 0.0f64;
        for (i, &z) in self.z.iter().enumerate() {
            if self.in_range(z, eps) {
                best = best.max(w.w[i] * self.l[i]);
            }
        }
        endpoint + best
    }
}

pub struct Weights {
    w: Vec<f64>,
    g: GFunction,
    g_bn: f64,
}

/// `|a - b| <= rel * max(|a|, |b|)`, with equal infinities agreeing.
pub fn close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}
