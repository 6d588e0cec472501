//! Checks of the inequalities, identities and constants.

pub mod constants;
pub mod corpus;
pub mod families;
pub mod inequalities;
pub mod search;
pub mod special;
pub mod theorem2;

pub use constants::{esseen_constant, rozovskii_constant, Lookup, TableEntry, GAMMA_STAR};
pub use corpus::{
    default_checks, default_corpus, run_corpus, theorem2_corpus, CheckSpec, CorpusReport, CorpusSpec, CorpusSummary,
    FamilyGrid,
};
pub use families::Family;
pub use inequalities::{check_inequality, check_with_delta, BoundReport, InequalityId};
pub use search::{lower_bound_search, SearchResult, SearchSpec};
pub use special::{a1_lower_bound, gamma_star_constants, A1LowerBound, GammaStarConstants};
pub use theorem2::{theorem2_checks, theorem2_suite, Clause, SuiteSummary, Theorem2Report, SUITE_EPS, SUITE_GAMMA};
