//! Exact law of the normalized sum and its Kolmogorov distance to the
//! standard normal.

use serde::{Deserialize, Serialize};

use crate::distributions::Atom;
use crate::error::{Error, Result};
use crate::fractions::SumContext;

/// Upper limit on the number of atoms an intermediate convolution may hold.
pub const MAX_SUPPORT: usize = 10_000_000;

/// Atoms of `S_n / B_n`, sorted by value, plus the mass removed by pruning.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumDistribution {
    atoms: Vec<Atom>,
    dropped_mass: f64,
}

impl SumDistribution {
    /// Builds a distribution from atoms with distinct values. Mass not
    /// accounted for by the atoms is recorded as dropped.
    pub fn from_atoms(mut atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::EmptyAtomList);
        }
        for a in &atoms {
            if !a.value.is_finite() || (a.prob.is_nan() || a.prob < 0.0) {
                return Err(Error::InvalidAtom {
                    value: a.value,
                    prob: a.prob,
                });
            }
        }
        atoms.sort_by(|a, b| a.value.total_cmp(&b.value));
        if atoms.windows(2).any(|w| w[0].value == w[1].value) {
            return Err(Error::InvalidParameter("duplicate atom values".into()));
        }
        let total: f64 = atoms.iter().map(|a| a.prob).sum();
        if total > 1.0 + 1e-12 {
            return Err(Error::NonUnitMass { total });
        }
        Ok(Self {
            atoms,
            dropped_mass: (1.0 - total).max(0.0),
        })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn dropped_mass(&self) -> f64 {
        self.dropped_mass
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.prob).sum()
    }
}

/// Exact distribution of `sum_k X_k / B_n`.
///
/// Summands are convolved in order of increasing support size; equal partial
/// sums are merged by exact float equality after each step. Atoms whose
/// probability falls below `prune_tol` are dropped and their mass is
/// accumulated in [`SumDistribution::dropped_mass`].
pub fn convolve(ctx: &SumContext, prune_tol: f64) -> Result<SumDistribution> {
    if prune_tol.is_nan() || prune_tol < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "prune tolerance must be non-negative, got {prune_tol}"
        )));
    }
    let mut order: Vec<_> = ctx.summands().iter().collect();
    order.sort_by_key(|d| d.len());

    let mut current: Vec<(f64, f64)> = vec![(0.0, 1.0)];
    let mut dropped = 0.0;
    let mut scratch: Vec<(f64, f64)> = Vec::new();
    for d in order {
        let projected = current.len() as u128 * d.len() as u128;
        if projected > MAX_SUPPORT as u128 {
            return Err(Error::SupportTooLarge {
                projected,
                limit: MAX_SUPPORT,
            });
        }
        scratch.clear();
        for &(s, p) in &current {
            for a in d.atoms() {
                scratch.push((s + a.value, p * a.prob));
            }
        }
        scratch.sort_by(|a, b| a.0.total_cmp(&b.0));

        current.clear();
        for &(v, p) in &scratch {
            match current.last_mut() {
                Some(last) if last.0 == v => last.1 += p,
                _ => current.push((v, p)),
            }
        }
        if prune_tol > 0.0 {
            current.retain(|&(_, p)| {
                if p < prune_tol {
                    dropped += p;
                    false
                } else {
                    true
                }
            });
        }
    }

    let bn = ctx.bn();
    let atoms = current
        .into_iter()
        .map(|(v, p)| Atom { value: v / bn, prob: p })
        .collect();
    Ok(SumDistribution {
        atoms,
        dropped_mass: dropped,
    })
}

/// Standard normal distribution function.
///
/// Evaluated as `erfc(-x / sqrt 2) / 2` with the FreeBSD msun complementary
/// error function, which keeps full relative accuracy in the lower tail.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * std::f64::consts::FRAC_1_SQRT_2)
}

/// Which one-sided limit of the empirical distribution function realizes the
/// Kolmogorov distance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    /// `P(S < x)`
    Left,
    /// `P(S <= x)`
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KolmogorovDistance {
    pub delta: f64,
    /// Additive uncertainty from pruned mass.
    pub uncertainty: f64,
    pub argsup: f64,
    pub side: Side,
}

/// `sup_x |P(S < x) - Phi(x)|`, evaluated at both one-sided limits of every
/// atom (the supremum of a step function minus a continuous increasing one).
pub fn kolmogorov_delta(s: &SumDistribution) -> KolmogorovDistance {
    let mut best = KolmogorovDistance {
        delta: 0.0,
        uncertainty: s.dropped_mass,
        argsup: f64::NAN,
        side: Side::Left,
    };
    let mut below = 0.0;
    for a in &s.atoms {
        let phi = normal_cdf(a.value);
        let left = (below - phi).abs();
        let right = (below + a.prob - phi).abs();
        if left > best.delta {
            best.delta = left;
            best.argsup = a.value;
            best.side = Side::Left;
        }
        if right > best.delta {
            best.delta = right;
            best.argsup = a.value;
            best.side = Side::Right;
        }
        below += a.prob;
    }
    best
}

/// Convolves exactly and measures the distance in one call.
pub fn delta_n(ctx: &SumContext) -> Result<KolmogorovDistance> {
    Ok(kolmogorov_delta(&convolve(ctx, 0.0)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DiscreteDistribution;

    fn pm1(n: usize) -> SumContext {
        SumContext::iid(&DiscreteDistribution::symmetric_pm1(), n).unwrap()
    }

    #[test]
    fn convolve_examples() {
        let s = convolve(&pm1(1), 0.0).unwrap();
        assert_eq!(
            s.atoms(),
            &[Atom { value: -1.0, prob: 0.5 }, Atom { value: 1.0, prob: 0.5 }]
        );
        assert_eq!(s.dropped_mass(), 0.0);

        let s = convolve(&pm1(2), 0.0).unwrap();
        let r2 = std::f64::consts::SQRT_2;
        let values: Vec<f64> = s.atoms().iter().map(|a| a.value).collect();
        let probs: Vec<f64> = s.atoms().iter().map(|a| a.prob).collect();
        assert_eq!(probs, vec![0.25, 0.5, 0.25]);
        assert!((values[0] + r2).abs() < 1e-15 && values[1] == 0.0 && (values[2] - r2).abs() < 1e-15);

        let s = convolve(&pm1(4), 0.0).unwrap();
        let values: Vec<f64> = s.atoms().iter().map(|a| a.value).collect();
        let probs: Vec<f64> = s.atoms().iter().map(|a| a.prob * 16.0).collect();
        assert_eq!(values, vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
        assert_eq!(probs, vec![1.0, 4.0, 6.0, 4.0, 1.0]);
    }

    #[test]
    fn pruning_reports_dropped_mass() {
        let s = convolve(&pm1(20), 1e-5).unwrap();
        assert!(s.dropped_mass() > 0.0);
        assert!(s.atoms().iter().all(|a| a.prob >= 1e-5));
        assert!((s.total_mass() + s.dropped_mass() - 1.0).abs() < 1e-12);
        let exact = convolve(&pm1(20), 0.0).unwrap();
        assert_eq!(exact.atoms().len(), 21);
        let d = kolmogorov_delta(&s);
        assert!((d.delta - kolmogorov_delta(&exact).delta).abs() <= d.uncertainty);
        assert!(convolve(&pm1(2), -1.0).is_err());
    }

    #[test]
    fn support_guard() {
        let d = DiscreteDistribution::new(&(0..16).map(|i| (i as f64 - 7.5, 1.0 / 16.0)).collect::<Vec<_>>()).unwrap();
        // incommensurable scales keep the support growing like 16^n
        let wide: Vec<DiscreteDistribution> = (0..7)
            .map(|k| {
                let s = ((k + 2) as f64).sqrt();
                DiscreteDistribution::new(&d.atoms().iter().map(|a| (a.value * s, a.prob)).collect::<Vec<_>>()).unwrap()
            })
            .collect();
        let ctx = SumContext::new(wide).unwrap();
        assert!(matches!(convolve(&ctx, 0.0), Err(Error::SupportTooLarge { .. })));
    }

    #[test]
    fn normal_cdf_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert!((normal_cdf(1.0) - 0.841_344_746_068_542_9).abs() < 1e-15);
        assert_eq!(normal_cdf(-40.0), 0.0);
        assert_eq!(normal_cdf(40.0), 1.0);
        assert!(normal_cdf(-37.0) > 0.0);
    }

    #[test]
    fn delta_examples() {
        let d1 = delta_n(&pm1(1)).unwrap();
        assert!((d1.delta - (0.5 - normal_cdf(-1.0))).abs() < 1e-15);
        let d2 = delta_n(&pm1(2)).unwrap();
        assert_eq!(d2.delta, 0.25);
        assert_eq!(d2.argsup, 0.0);
    }

    #[test]
    fn discretized_normal_is_close() {
        let step = 0.01;
        let atoms: Vec<Atom> = (-800..800)
            .map(|i| {
                let lo = i as f64 * step;
                let hi = lo + step;
                Atom {
                    value: lo + 0.5 * step,
                    prob: normal_cdf(hi) - normal_cdf(lo),
                }
            })
            .collect();
        let s = SumDistribution::from_atoms(atoms).unwrap();
        assert!(kolmogorov_delta(&s).delta < step);
    }
}
