//! Published constants: absolute constants of the classical bounds and the
//! tabulated upper bounds `A_E(eps, gamma)` and `A_R(eps, gamma)`.

use serde::Serialize;

use crate::error::{Error, Result};

/// `gamma_* = 1 / sqrt(6 kappa)`, to double precision.
pub const GAMMA_STAR: f64 = 0.559_952_987_676_390_3;

/// `A_1 <= 1.87` for every `g` in the class.
pub const A1_UPPER: f64 = 1.87;
/// Berry-Esseen constant, i.i.d. summands.
pub const A1_UPPER_IID_BE: f64 = 0.4690;
/// Berry-Esseen constant, general summands.
pub const A1_UPPER_BE: f64 = 0.5583;
/// `A_1 >= sup_{x>0} |1/(1+x^2) - Phi(-x)|`.
pub const A1_LOWER: f64 = 0.54093;
/// `A_4 <= A_E(1, 1) <= 2.73`.
pub const AE_1_1: f64 = 2.73;
/// `A_3 <= A_E(inf, 1) <= 2.66`.
pub const AE_INF_1: f64 = 2.66;
/// `A_5 <= A_R(1, 1) <= 2.73`.
pub const AR_1_1: f64 = 2.73;
/// `A_6 <= 2.73`.
pub const A6_UPPER: f64 = 2.73;

pub const GAMMA_STAR_ROUNDED: f64 = 0.5599;
pub const KAPPA_ROUNDED: f64 = 0.5315;
pub const X0_ROUNDED: f64 = 5.487414;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TableEntry {
    #[serde(with = "crate::ext::f64_ext")]
    pub eps: f64,
    #[serde(with = "crate::ext::f64_ext")]
    pub gamma: f64,
    pub value: f64,
}

const INF: f64 = f64::INFINITY;

const fn e(eps: f64, gamma: f64, value: f64) -> TableEntry {
    TableEntry { eps, gamma, value }
}

/// Upper bounds for `A_E(eps, gamma)`.
pub static ESSEEN_TABLE: [TableEntry; 23] = [
    e(1.21, 0.2, 2.8904),
    e(1.24, 0.2, 2.8900),
    e(INF, 0.2, 2.8846),
    e(1.76, 0.4, 2.7360),
    e(5.94, 0.4, 2.7300),
    e(INF, 0.4, 2.7299),
    e(1.0, GAMMA_STAR, 2.7367),
    e(1.87, GAMMA_STAR, 2.6999),
    e(INF, GAMMA_STAR, 2.6919),
    e(1.0, 0.72, 2.7298),
    e(1.0, INF, 2.7286),
    e(4.35, 1.0, 2.6600),
    e(INF, 1.0, 2.6588),
    e(INF, 0.97, 2.6599),
    e(2.56, INF, 2.6500),
    e(2.62, 5.0, 2.6500),
    e(2.65, 4.0, 2.6500),
    e(2.74, 3.0, 2.6500),
    e(3.13, 2.0, 2.6500),
    e(4.0, 1.62, 2.6500),
    e(5.37, 1.5, 2.6500),
    e(INF, 1.43, 2.6500),
    e(INF, INF, 2.6409),
];

/// Upper bounds for `A_R(eps, gamma)`.
pub static ROZOVSKII_TABLE: [TableEntry; 10] = [
    e(1.21, 0.2, 2.8700),
    e(5.39, 0.2, 2.8635),
    e(1.76, 0.4, 2.6999),
    e(2.63, 0.4, 2.6933),
    e(0.5, GAMMA_STAR, 3.0396),
    e(1.0, GAMMA_STAR, 2.7286),
    e(1.99, GAMMA_STAR, 2.6600),
    e(2.12, GAMMA_STAR, 2.6593),
    e(3.0, GAMMA_STAR, 2.6769),
    e(5.0, GAMMA_STAR, 2.7562),
];

/// A constant together with the table row it came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lookup {
    pub value: f64,
    pub entry: TableEntry,
}

/// Smallest tabulated `A_E(eps', gamma')` with `eps' <= eps_max` and
/// `gamma' <= gamma`. Since `A_E` decreases in both arguments this bounds
/// `A_E(eps_max, gamma)` from above.
pub fn esseen_constant(eps_max: f64, gamma: f64) -> Result<Lookup> {
    ESSEEN_TABLE
        .iter()
        .filter(|t| t.eps <= eps_max && t.gamma <= gamma)
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .map(|t| Lookup {
            value: t.value,
            entry: *t,
        })
        .ok_or_else(|| Error::NoConstantAvailable {
            what: format!("A_E(eps <= {eps_max}, gamma <= {gamma})"),
        })
}

/// Smallest tabulated `A_R(eps, gamma')` with `gamma' <= gamma`. `A_R` is only
/// known to decrease in `gamma`, so `eps` must match a row exactly.
pub fn rozovskii_constant(eps: f64, gamma: f64) -> Result<Lookup> {
    ROZOVSKII_TABLE
        .iter()
        .filter(|t| t.eps == eps && t.gamma <= gamma)
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .map(|t| Lookup {
            value: t.value,
            entry: *t,
        })
        .ok_or_else(|| Error::NoConstantAvailable {
            what: format!("A_R(eps = {eps}, gamma <= {gamma})"),
        })
}

/// Scalar constants, for display.
pub fn scalar_constants() -> Vec<(&'static str, f64)> {
    vec![
        ("A1_upper", A1_UPPER),
        ("A1_upper_iid_BE", A1_UPPER_IID_BE),
        ("A1_upper_BE", A1_UPPER_BE),
        ("A1_lower", A1_LOWER),
        ("AE_1_1", AE_1_1),
        ("AE_inf_1", AE_INF_1),
        ("AR_1_1", AR_1_1),
        ("A6_upper", A6_UPPER),
        ("gamma_star", GAMMA_STAR_ROUNDED),
        ("kappa", KAPPA_ROUNDED),
        ("x0", X0_ROUNDED),
    ]
}
