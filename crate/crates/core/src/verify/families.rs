//! Parametric families of sum contexts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::DiscreteDistribution;
use crate::error::{Error, Result};
use crate::fractions::SumContext;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `n` copies of the two-point law with `P(X = 1) = p`, `P(X = -p/(1-p)) = 1 - p`.
    TwoPoint,
    /// `n` copies of `P(X = +-1) = p/2`, `P(X = 0) = 1 - p`.
    SymmetricThreePoint,
    /// `n` copies of `P(X = -1) = 1/2`, `P(X = s) = P(X = 2 - s) = 1/4`.
    ThreePoint,
    /// Two-point summands with alternating sign, `X_k =d (-1)^k X`.
    Oscillating,
    /// Two-point summands alternating between parameters `p` and `q`.
    TwoPointPair,
    /// A cycle of three different laws sharing the parameter `p`.
    Mixture,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::TwoPoint,
        Family::SymmetricThreePoint,
        Family::ThreePoint,
        Family::Oscillating,
        Family::TwoPointPair,
        Family::Mixture,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::TwoPoint => "two-point",
            Family::SymmetricThreePoint => "symmetric-three-point",
            Family::ThreePoint => "three-point",
            Family::Oscillating => "oscillating",
            Family::TwoPointPair => "two-point-pair",
            Family::Mixture => "mixture",
        }
    }

    /// Admissible box for the shape parameters.
    pub fn bounds(self) -> Vec<(f64, f64)> {
        let p = (1e-4, 1.0 - 1e-4);
        match self {
            Family::TwoPoint | Family::Oscillating | Family::Mixture => vec![p],
            Family::SymmetricThreePoint => vec![(1e-4, 1.0)],
            Family::ThreePoint => vec![(0.01, 1.99)],
            Family::TwoPointPair => vec![p, p],
        }
    }

    pub fn dim(self) -> usize {
        self.bounds().len()
    }

    fn summand(self, k: usize, shape: &[f64]) -> Result<DiscreteDistribution> {
        let p = shape[0];
        match self {
            Family::TwoPoint => DiscreteDistribution::two_point(p, 1.0),
            Family::SymmetricThreePoint => {
                if p >= 1.0 {
                    Ok(DiscreteDistribution::symmetric_pm1())
                } else {
                    DiscreteDistribution::new(&[(-1.0, 0.5 * p), (0.0, 1.0 - p), (1.0, 0.5 * p)])
                }
            }
            Family::ThreePoint => DiscreteDistribution::new(&[(-1.0, 0.5), (p, 0.25), (2.0 - p, 0.25)]),
            Family::Oscillating => DiscreteDistribution::two_point(p, if k & 1 == 0 { 1.0 } else { -1.0 }),
            Family::TwoPointPair => DiscreteDistribution::two_point(shape[k % 2], 1.0),
            Family::Mixture => match k % 3 {
                0 => DiscreteDistribution::two_point(p, 1.0),
                1 => DiscreteDistribution::new(&[(-2.0, 0.5 * p), (0.0, 1.0 - p), (2.0, 0.5 * p)]),
                _ => DiscreteDistribution::new(&[(-0.5, 0.5), (0.5 * p, 0.25), (1.0 - 0.5 * p, 0.25)]),
            },
        }
    }

    /// The context with `n` summands at `shape`.
    pub fn build(self, shape: &[f64], n: usize) -> Result<SumContext> {
        if shape.len() != self.dim() {
            return Err(Error::InvalidParameter(format!(
                "{} takes {} shape parameter(s), got {}",
                self.name(),
                self.dim(),
                shape.len()
            )));
        }
        for (&x, &(lo, hi)) in shape.iter().zip(&self.bounds()) {
            if !(x >= lo && x <= hi) {
                return Err(Error::InvalidParameter(format!(
                    "{} shape {x} outside [{lo}, {hi}]",
                    self.name()
                )));
            }
        }
        let summands = (0..n).map(|k| self.summand(k, shape)).collect::<Result<Vec<_>>>()?;
        SumContext::new(summands)
    }

    pub fn label(self, shape: &[f64], n: usize) -> String {
        let s: Vec<String> = shape.iter().map(|x| x.to_string()).collect();
        format!("{}({}) n={n}", self.name(), s.join(","))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s.trim())
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}
