//! Lindeberg-type fractions of a sum of independent centered discrete
//! summands, with exact suprema over `z`.
//!
//! All quantities are expressed in the normalized variable `z = t / B_n`.
//! The normalized atom magnitudes `|x| / B_n` split `(0, inf)` into segments
//! `(b_j, b_{j+1}]` on which `L_n`, `M_n` and `Lambda_n` are constant (they are
//! left-continuous step functions). On a segment the objectives below have
//! the form `G(z) * (A / z + C)` with `G(z) = g(z B_n) / g(B_n)`, `A, C >= 0`.
//! For every supported kind of `g` that function has no interior maximum
//! between kinks of `g` (it is convex on affine pieces of `g`, and for
//! `z^delta` its only stationary point is a minimum), so the supremum over a
//! segment is found among the segment's end limits and the kinks of `g`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distributions::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::gclass::GFunction;

/// An independent collection of summands with `B_n^2 > 0`.
#[derive(Debug, Clone)]
pub struct SumContext {
    summands: Vec<DiscreteDistribution>,
    bn2: f64,
    bn: f64,
    table: LevelTable,
}

impl SumContext {
    pub fn new(summands: Vec<DiscreteDistribution>) -> Result<Self> {
        if summands.is_empty() {
            return Err(Error::EmptyContext);
        }
        let bn2: f64 = summands.iter().map(|d| d.variance()).sum();
        if !(bn2 > 0.0 && bn2.is_finite()) {
            return Err(Error::ZeroVariance { bn2 });
        }
        let bn = bn2.sqrt();
        let table = LevelTable::build(&summands, bn, true);
        Ok(Self {
            summands,
            bn2,
            bn,
            table,
        })
    }

    /// `n` independent copies of `d`.
    pub fn iid(d: &DiscreteDistribution, n: usize) -> Result<Self> {
        Self::new(vec![d.clone(); n])
    }

    pub fn summands(&self) -> &[DiscreteDistribution] {
        &self.summands
    }

    pub fn n(&self) -> usize {
        self.summands.len()
    }

    pub fn bn2(&self) -> f64 {
        self.bn2
    }

    pub fn bn(&self) -> f64 {
        self.bn
    }

    /// Sorted distinct normalized magnitudes `|x| / B_n` of nonzero atoms.
    pub fn breakpoints(&self) -> &[f64] {
        &self.table.breakpoints
    }

    pub fn is_symmetric(&self) -> bool {
        self.summands.iter().all(|d| d.is_symmetric())
    }

    /// Values of `(L_n, M_n, Lambda_n)` on every segment, in order.
    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        let t = &self.table;
        (0..t.l.len()).map(move |j| Segment {
            lo: if j == 0 { 0.0 } else { t.breakpoints[j - 1] },
            hi: t.breakpoints.get(j).copied().unwrap_or(f64::INFINITY),
            lindeberg: t.l[j],
            third: t.m[j],
            third_abs: t.lambda[j],
        })
    }

    /// Short text form, e.g. `2 x {-1:0.5, 1:0.5}`.
    pub fn describe(&self) -> String {
        let one = |d: &DiscreteDistribution| {
            let atoms: Vec<String> = d.atoms().iter().map(|a| format!("{}:{}", a.value, a.prob)).collect();
            format!("{{{}}}", atoms.join(", "))
        };
        let first = &self.summands[0];
        if self.summands.iter().all(|d| d == first) {
            format!("{} x {}", self.n(), one(first))
        } else {
            let parts: Vec<String> = self.summands.iter().map(one).collect();
            parts.join(" + ")
        }
    }

    pub(crate) fn table(&self) -> &LevelTable {
        &self.table
    }
}

/// The constant values of the step functions on `(lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub lo: f64,
    pub hi: f64,
    pub lindeberg: f64,
    pub third: f64,
    pub third_abs: f64,
}

/// Step-function tables over the normalized breakpoints.
#[derive(Debug, Clone)]
pub(crate) struct LevelTable {
    breakpoints: Vec<f64>,
    /// second-moment tail on each of the `m + 1` segments
    l: Vec<f64>,
    /// signed truncated third moment on each segment
    m: Vec<f64>,
    /// absolute truncated third moment on each segment
    lambda: Vec<f64>,
}

impl LevelTable {
    /// With `normalize` the tail column is divided by its total so that it is
    /// exactly 1 on the first segment; otherwise it holds `E X^2 1(..) / B^2`.
    pub(crate) fn build(summands: &[DiscreteDistribution], bn: f64, normalize: bool) -> Self {
        struct Contribution {
            mag: f64,
            second: f64,
            third: f64,
            positive: bool,
        }
        let mut items: Vec<Contribution> = summands
            .iter()
            .flat_map(|d| d.atoms().iter())
            .filter(|a| a.value != 0.0)
            .map(|a| {
                let mag = a.value.abs() / bn;
                Contribution {
                    mag,
                    second: mag * mag * a.prob,
                    third: mag * mag * mag * a.prob,
                    positive: a.value > 0.0,
                }
            })
            .collect();
        // Within a level, sort by contribution so that mirrored atoms are
        // summed in the same order on both signs and cancel exactly.
        items.sort_by(|a, b| a.mag.total_cmp(&b.mag).then(a.third.total_cmp(&b.third)));

        let mut breakpoints = Vec::new();
        let mut second = Vec::new();
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for c in &items {
            if breakpoints.last() != Some(&c.mag) {
                breakpoints.push(c.mag);
                second.push(0.0);
                pos.push(0.0);
                neg.push(0.0);
            }
            let i = breakpoints.len() - 1;
            second[i] += c.second;
            if c.positive {
                pos[i] += c.third;
            } else {
                neg[i] += c.third;
            }
        }

        let levels = breakpoints.len();
        let mut suffix = vec![0.0; levels + 1];
        for i in (0..levels).rev() {
            suffix[i] = suffix[i + 1] + second[i];
        }
        let total = suffix[0];
        let l: Vec<f64> = if normalize && total > 0.0 {
            suffix.iter().map(|s| s / total).collect()
        } else {
            suffix
        };

        let mut m = Vec::with_capacity(levels + 1);
        let mut lambda = Vec::with_capacity(levels + 1);
        let (mut pp, mut np) = (0.0, 0.0);
        m.push(0.0);
        lambda.push(0.0);
        for i in 0..levels {
            pp += pos[i];
            np += neg[i];
            m.push(pp - np);
            lambda.push(pp + np);
        }

        Self {
            breakpoints,
            l,
            m,
            lambda,
        }
    }

    /// Index `j` of the segment `(b_j, b_{j+1}]` containing `z`; 0 for `z <= b_1`.
    fn segment_of(&self, z: f64) -> usize {
        self.breakpoints.partition_point(|&b| b < z)
    }

    fn num_segments(&self) -> usize {
        self.l.len()
    }
}

/// Weight `G(z) = g(z B_n) / g(B_n)` together with its limits.
struct Weight<'a> {
    g: &'a GFunction,
    bn: f64,
    g_bn: f64,
}

impl<'a> Weight<'a> {
    fn new(g: &'a GFunction, bn: f64) -> Self {
        Self {
            g,
            bn,
            g_bn: g.value(bn),
        }
    }

    fn at(&self, z: f64) -> f64 {
        self.g.value(z * self.bn) / self.g_bn
    }

    fn at_zero(&self) -> f64 {
        self.g.limit_at_zero() / self.g_bn
    }

    /// `lim G(z) / z` as `z -> inf`.
    fn slope_at_infinity(&self) -> f64 {
        self.g.slope_at_infinity() * self.bn / self.g_bn
    }

    fn kinks(&self) -> Vec<f64> {
        self.g.kinks().into_iter().map(|k| k / self.bn).collect()
    }
}

/// Where a supremum is attained or approached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "z", rename_all = "kebab-case")]
pub enum Witness {
    /// Limit as `z -> 0+`.
    ZeroPlus,
    /// Attained at `z`.
    At(f64),
    /// Limit from the right at `z` (the point itself belongs to the previous segment).
    RightOf(f64),
    /// Limit from the left at the open right end of the range.
    LeftOf(f64),
    /// Limit as `z -> inf`.
    Infinity,
}

impl Witness {
    pub fn z(&self) -> f64 {
        match *self {
            Witness::ZeroPlus => 0.0,
            Witness::At(z) | Witness::RightOf(z) | Witness::LeftOf(z) => z,
            Witness::Infinity => f64::INFINITY,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::ZeroPlus => write!(f, "0+"),
            Witness::At(z) => write!(f, "{z}"),
            Witness::RightOf(z) => write!(f, "{z}+"),
            Witness::LeftOf(z) => write!(f, "{z}-"),
            Witness::Infinity => write!(f, "inf"),
        }
    }
}

/// A supremum with its witness, split into the third-moment part and the
/// Lindeberg part of the objective at the witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FractionValue {
    pub value: f64,
    pub witness: Witness,
    pub m_term: f64,
    pub l_term: f64,
}

/// `(g, eps, gamma)`; `eps = inf` and `gamma = inf` are accepted, with
/// `inf * 0 = 0` in the `gamma` product.
#[derive(Debug, Clone, PartialEq)]
pub struct FractionParams {
    pub g: GFunction,
    pub eps: f64,
    pub gamma: f64,
}

impl FractionParams {
    pub fn new(g: GFunction, eps: f64, gamma: f64) -> Result<Self> {
        if eps.is_nan() || eps <= 0.0 {
            return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
        }
        if gamma.is_nan() || gamma <= 0.0 {
            return Err(Error::InvalidParameter(format!("gamma must be positive, got {gamma}")));
        }
        Ok(Self { g, eps, gamma })
    }
}

fn times(gamma: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        gamma * x
    }
}

/// Supremum over `z in (0, eps)` of `G(z) * (A_j / z + C_j)` where `(A_j, C_j)`
/// are the coefficients on segment `j` of `table`.
fn segment_sup(
    table: &LevelTable,
    eps: f64,
    weight: &Weight<'_>,
    coeffs: impl Fn(usize) -> (f64, f64),
) -> FractionValue {
    let kinks = weight.kinks();
    let eval = |z: f64, a: f64, c: f64| {
        let w = weight.at(z);
        let m_term = if a == 0.0 { 0.0 } else { w * a / z };
        let l_term = if c == 0.0 { 0.0 } else { w * c };
        (m_term + l_term, m_term, l_term)
    };

    let mut best = FractionValue {
        value: f64::NEG_INFINITY,
        witness: Witness::ZeroPlus,
        m_term: 0.0,
        l_term: 0.0,
    };
    let mut offer = |(value, m_term, l_term): (f64, f64, f64), witness: Witness| {
        if value > best.value {
            best = FractionValue {
                value,
                witness,
                m_term,
                l_term,
            };
        }
    };

    let last = table.segment_of(eps).min(table.num_segments() - 1);
    for j in 0..=last {
        let (a, c) = coeffs(j);
        let lo = if j == 0 { 0.0 } else { table.breakpoints[j - 1] };
        let hi_raw = table.breakpoints.get(j).copied().unwrap_or(f64::INFINITY);
        let hi = hi_raw.min(eps);

        if j == 0 {
            // no atom lies strictly below the first breakpoint, so A_0 = 0
            debug_assert!(a == 0.0);
            let l_term = if c == 0.0 { 0.0 } else { weight.at_zero() * c };
            offer((l_term, 0.0, l_term), Witness::ZeroPlus);
        } else {
            offer(eval(lo, a, c), Witness::RightOf(lo));
        }

        for &k in &kinks {
            if k > lo && k < hi {
                offer(eval(k, a, c), Witness::At(k));
            }
        }

        if hi_raw < eps {
            offer(eval(hi_raw, a, c), Witness::At(hi_raw));
        } else if eps.is_finite() {
            offer(eval(eps, a, c), Witness::LeftOf(eps));
        } else {
            let m_term = if a == 0.0 { 0.0 } else { a * weight.slope_at_infinity() };
            let l_term = if c == 0.0 { 0.0 } else { f64::INFINITY };
            offer((m_term + l_term, m_term, l_term), Witness::Infinity);
        }
    }
    best
}

/// `L_n(z) = B_n^{-2} sum_k E X_k^2 1(|X_k| >= z B_n)`.
pub fn lindeberg_l(ctx: &SumContext, z: f64) -> f64 {
    let t = ctx.table();
    t.l[t.segment_of(z)]
}

/// `M_n(z) = B_n^{-3} sum_k E X_k^3 1(|X_k| < z B_n)`.
#[allow(non_snake_case)]
pub fn M(ctx: &SumContext, z: f64) -> f64 {
    let t = ctx.table();
    t.m[t.segment_of(z)]
}

/// `Lambda_n(eps) = B_n^{-3} sum_k E |X_k|^3 1(|X_k| < eps B_n)`.
#[allow(non_snake_case)]
pub fn Lambda(ctx: &SumContext, eps: f64) -> f64 {
    let t = ctx.table();
    t.lambda[t.segment_of(eps)]
}

pub fn katz_petrov_fraction(ctx: &SumContext, g: &GFunction) -> Result<f64> {
    let mut acc = 0.0;
    for d in ctx.summands() {
        acc += d.moment_g(g)?;
    }
    Ok(acc / (ctx.bn2() * g.value(ctx.bn())))
}

/// `L_n(eps) + Lambda_n(eps)`.
pub fn osipov_fraction(ctx: &SumContext, eps: f64) -> f64 {
    lindeberg_l(ctx, eps) + Lambda(ctx, eps)
}

/// `sup_{0 < z < eps} z L_n(z)`.
pub fn sup_zl(ctx: &SumContext, eps: f64) -> FractionValue {
    let t = ctx.table();
    let id = GFunction::Identity;
    segment_sup(t, eps, &Weight::new(&id, ctx.bn()), |j| (0.0, t.l[j]))
}

/// `sup_{0<z<eps} G(z) / z * (gamma |M_n(z)| + z L_n(z))`.
pub fn esseen_fraction(ctx: &SumContext, p: &FractionParams) -> FractionValue {
    let t = ctx.table();
    segment_sup(t, p.eps, &Weight::new(&p.g, ctx.bn()), |j| {
        (times(p.gamma, t.m[j].abs()), t.l[j])
    })
}

/// `gamma G(eps) / eps |M_n(eps)| + sup_{0<z<eps} G(z) L_n(z)`.
///
/// The witness refers to the supremum term; `m_term` is the endpoint term.
pub fn rozovskii_fraction(ctx: &SumContext, p: &FractionParams) -> FractionValue {
    let t = ctx.table();
    let weight = Weight::new(&p.g, ctx.bn());
    let m_eps = t.m[t.segment_of(p.eps)].abs();
    let endpoint = if p.eps.is_finite() {
        weight.at(p.eps) / p.eps
    } else {
        weight.slope_at_infinity()
    };
    let m_term = times(p.gamma, times(endpoint, m_eps));
    let sup = segment_sup(t, p.eps, &weight, |j| (0.0, t.l[j]));
    FractionValue {
        value: m_term + sup.value,
        witness: sup.witness,
        m_term,
        l_term: sup.value,
    }
}

fn per_summand_sum(ctx: &SumContext, mut term: impl FnMut(&LevelTable) -> f64) -> f64 {
    ctx.summands()
        .iter()
        .map(|d| term(&LevelTable::build(std::slice::from_ref(d), ctx.bn(), false)))
        .sum()
}

/// `B_n^{-3} sum_k sup_{z>0} { |mu_k(z)| + z sigma_k^2(z) }`.
pub fn esseen_classic_fraction(ctx: &SumContext) -> f64 {
    let id = GFunction::Identity;
    let weight = Weight::new(&id, ctx.bn());
    per_summand_sum(ctx, |t| {
        segment_sup(t, f64::INFINITY, &weight, |j| (t.m[j].abs(), t.l[j])).value
    })
}

/// As [`esseen_classic_fraction`] with the supremum restricted to `0 < z < B_n`.
pub fn esseen_bounded_fraction(ctx: &SumContext) -> f64 {
    let id = GFunction::Identity;
    let weight = Weight::new(&id, ctx.bn());
    per_summand_sum(ctx, |t| segment_sup(t, 1.0, &weight, |j| (t.m[j].abs(), t.l[j])).value)
}

/// `B_n^{-3} sum_k ( |mu_k(B_n)| + sup_{0<z<B_n} z sigma_k^2(z) )`.
pub fn rozovskii_classic_fraction(ctx: &SumContext) -> f64 {
    let id = GFunction::Identity;
    let weight = Weight::new(&id, ctx.bn());
    per_summand_sum(ctx, |t| {
        let m_one = t.m[t.segment_of(1.0)].abs();
        m_one + segment_sup(t, 1.0, &weight, |j| (0.0, t.l[j])).value
    })
}

/// `(B_n^2 g(B_n))^{-1} sum_k sup_{z>0} g(z)/z ( |mu_k(z)| + z sigma_k^2(z) )`.
pub fn wang_ahmad_fraction(ctx: &SumContext, g: &GFunction) -> f64 {
    let weight = Weight::new(g, ctx.bn());
    per_summand_sum(ctx, |t| {
        segment_sup(t, f64::INFINITY, &weight, |j| (t.m[j].abs(), t.l[j])).value
    })
}
