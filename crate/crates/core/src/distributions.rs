//! Zero-mean finite discrete random variables and their truncated moments.
//!
//! Tail and truncation indicators follow a fixed convention: second-moment
//! tails include the boundary (`|x| >= z`), third-moment truncations exclude
//! it (`|x| < z`).

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gclass::GFunction;

/// Absolute tolerance on the total probability mass.
pub const MASS_TOLERANCE: f64 = 1e-12;

/// Relative tolerance on the mean, measured against `E|X|`.
pub const MEAN_TOLERANCE: f64 = 1e-12;

/// One support point of a discrete distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub value: f64,
    pub prob: f64,
}

/// A centered distribution on finitely many points.
///
/// Atoms are sorted by value and values are pairwise distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    atoms: Vec<Atom>,
}

impl DiscreteDistribution {
    /// Builds a distribution from raw `(value, prob)` pairs.
    ///
    /// Equal values (compared with `==`, no epsilon) are merged by summing
    /// their probabilities.
    pub fn new(raw_atoms: &[(f64, f64)]) -> Result<Self> {
        if raw_atoms.is_empty() {
            return Err(Error::EmptyAtomList);
        }
        for &(value, prob) in raw_atoms {
            if !value.is_finite() || !prob.is_finite() || prob <= 0.0 || prob > 1.0 {
                return Err(Error::InvalidAtom { value, prob });
            }
        }

        let mut sorted: Vec<(f64, f64)> = raw_atoms.to_vec();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));

        let mut atoms: Vec<Atom> = Vec::with_capacity(sorted.len());
        for (value, prob) in sorted {
            match atoms.last_mut() {
                Some(last) if last.value == value => last.prob += prob,
                _ => atoms.push(Atom { value, prob }),
            }
        }

        let total: f64 = atoms.iter().map(|a| a.prob).sum();
        if (total - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::NonUnitMass { total });
        }

        let mean: f64 = atoms.iter().map(|a| a.value * a.prob).sum();
        let abs_mean: f64 = atoms.iter().map(|a| a.value.abs() * a.prob).sum();
        if mean.abs() > MEAN_TOLERANCE * abs_mean {
            return Err(Error::NonZeroMean { mean });
        }

        Ok(Self { atoms })
    }

    /// The degenerate distribution concentrated at 0.
    pub fn point_mass_at_zero() -> Self {
        Self {
            atoms: vec![Atom { value: 0.0, prob: 1.0 }],
        }
    }

    /// Symmetric Bernoulli on `{-1, 1}`.
    pub fn symmetric_pm1() -> Self {
        Self::new(&[(-1.0, 0.5), (1.0, 0.5)]).expect("valid by construction")
    }

    /// Two-point law taking value `s` with probability `p` and
    /// `-p s / (1 - p)` otherwise.
    pub fn two_point(p: f64, s: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) || !(s.is_finite() && s != 0.0) {
            return Err(Error::InvalidParameter(format!(
                "two-point law needs p in (0,1) and s != 0, got p={p}, s={s}"
            )));
        }
        Self::new(&[(s, p), (-p * s / (1.0 - p), 1.0 - p)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// True when the atom list is mirror-symmetric about 0 with equal
    /// probabilities (exact comparison).
    pub fn is_symmetric(&self) -> bool {
        let n = self.atoms.len();
        (0..n).all(|i| {
            let a = self.atoms[i];
            let b = self.atoms[n - 1 - i];
            a.value == -b.value && a.prob == b.prob
        })
    }

    pub fn variance(&self) -> f64 {
        self.atoms.iter().map(|a| a.value * a.value * a.prob).sum()
    }

    /// `E X^2 1(|X| >= z)`.
    pub fn truncated_second(&self, z: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.value.abs() >= z)
            .map(|a| a.value * a.value * a.prob)
            .sum()
    }

    /// `E X^3 1(|X| < z)`.
    pub fn truncated_third_alg(&self, z: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.value.abs() < z)
            .map(|a| a.value * a.value * a.value * a.prob)
            .sum()
    }

    /// `E |X|^3 1(|X| < z)`.
    pub fn truncated_third_abs(&self, z: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| a.value.abs() < z)
            .map(|a| a.value.abs().powi(3) * a.prob)
            .sum()
    }

    /// `E X^2 g(|X|)`; atoms at 0 contribute nothing and `g(0)` is never
    /// evaluated.
    pub fn moment_g(&self, g: &GFunction) -> Result<f64> {
        let mut acc = 0.0;
        for a in self.atoms.iter().filter(|a| a.value != 0.0) {
            let gz = g
                .eval(a.value.abs())
                .map_err(|_| Error::GFunctionDomain { z: a.value.abs() })?;
            acc += a.value * a.value * gz * a.prob;
        }
        Ok(acc)
    }

    /// Reads the `{"atoms": [[value, prob], ...]}` file format.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let file: DistributionFile = serde_json::from_str(text)?;
        let raw = file
            .atoms
            .iter()
            .map(|[v, p]| Ok((v.to_f64()?, p.to_f64()?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(&raw)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&text)
    }

    pub fn to_json_string(&self) -> String {
        let file = DistributionFile {
            atoms: self
                .atoms
                .iter()
                .map(|a| [Number::Num(a.value), Number::Num(a.prob)])
                .collect(),
        };
        serde_json::to_string(&file).expect("finite floats serialize")
    }
}

/// Convenience free-function form of [`DiscreteDistribution::new`].
pub fn make_discrete(raw_atoms: &[(f64, f64)]) -> Result<DiscreteDistribution> {
    DiscreteDistribution::new(raw_atoms)
}

#[derive(Debug, Serialize, Deserialize)]
struct DistributionFile {
    atoms: Vec<[Number; 2]>,
}

/// A JSON number, or a decimal string holding one.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub(crate) enum Number {
    Num(f64),
    Str(String),
}

impl Number {
    pub(crate) fn to_f64(&self) -> Result<f64> {
        match self {
            Number::Num(x) => Ok(*x),
            Number::Str(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("not a decimal number: {s:?}"))),
        }
    }
}
