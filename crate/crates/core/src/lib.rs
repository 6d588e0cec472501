//! Convergence-rate fractions for the Lindeberg central limit theorem,
//! exact Kolmogorov distances of discrete normalized sums, and a harness
//! checking the classical bounds against each other.
//!
//! ```
//! use lindeberg_core::{DiscreteDistribution, FractionParams, GFunction, SumContext, esseen_fraction, delta_n};
//!
//! let ctx = SumContext::iid(&DiscreteDistribution::symmetric_pm1(), 4).unwrap();
//! let p = FractionParams::new(GFunction::Identity, 1.0, 1.0).unwrap();
//! assert_eq!(esseen_fraction(&ctx, &p).value, 0.5);
//! assert!(delta_n(&ctx).unwrap().delta < 0.5);
//! ```

pub mod clt;
pub mod distributions;
pub mod error;
pub mod ext;
pub mod fractions;
pub mod gclass;
pub mod verify;

pub use clt::{convolve, delta_n, kolmogorov_delta, normal_cdf, KolmogorovDistance, Side, SumDistribution};
pub use distributions::{make_discrete, Atom, DiscreteDistribution};
pub use error::{Error, Result};
pub use fractions::{
    esseen_bounded_fraction, esseen_classic_fraction, esseen_fraction, katz_petrov_fraction, lindeberg_l,
    osipov_fraction, rozovskii_classic_fraction, rozovskii_fraction, sup_zl, wang_ahmad_fraction, FractionParams,
    FractionValue, Lambda, Segment, SumContext, Witness, M,
};
pub use gclass::{check_membership, envelope_check, validate_gclass, GFunction, GSpec, Level, Tabulated};
pub use verify::{BoundReport, InequalityId};
