//! One inequality check: fraction, constant, `Delta_n`, verdict.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clt::{delta_n, KolmogorovDistance};
use crate::error::{Error, Result};
use crate::fractions::{
    esseen_bounded_fraction, esseen_classic_fraction, esseen_fraction, katz_petrov_fraction, osipov_fraction,
    rozovskii_classic_fraction, rozovskii_fraction, wang_ahmad_fraction, FractionParams, FractionValue, SumContext,
};
use crate::gclass::GFunction;
use crate::verify::constants::{
    esseen_constant, rozovskii_constant, Lookup, A1_UPPER, A6_UPPER, AE_1_1, AE_INF_1, AR_1_1,
};

/// The bounds checked by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum InequalityId {
    /// `Delta_n <= A_1 L_n(g)` (Katz-Petrov fraction).
    Kp,
    /// `Delta_n <= A_1 (L_n(1) + Lambda_n(1))`.
    Osipov1,
    /// `Delta_n <= A_1 (L_n(eps) + Lambda_n(eps))`.
    Osipov,
    Esseen,
    EsseenBounded,
    Rozovskii,
    WangAhmad,
    EsseenGamma,
    RozovskiiGamma,
    EsseenG,
    RozovskiiG,
    EsseenGGamma,
    RozovskiiGGamma,
}

impl InequalityId {
    pub const ALL: [InequalityId; 13] = [
        InequalityId::Kp,
        InequalityId::Osipov1,
        InequalityId::Osipov,
        InequalityId::Esseen,
        InequalityId::EsseenBounded,
        InequalityId::Rozovskii,
        InequalityId::WangAhmad,
        InequalityId::EsseenGamma,
        InequalityId::RozovskiiGamma,
        InequalityId::EsseenG,
        InequalityId::RozovskiiG,
        InequalityId::EsseenGGamma,
        InequalityId::RozovskiiGGamma,
    ];

    pub fn name(self) -> &'static str {
        match self {
            InequalityId::Kp => "KP",
            InequalityId::Osipov1 => "OSIPOV1",
            InequalityId::Osipov => "OSIPOV",
            InequalityId::Esseen => "ESSEEN",
            InequalityId::EsseenBounded => "ESSEEN_BOUNDED",
            InequalityId::Rozovskii => "ROZOVSKII",
            InequalityId::WangAhmad => "WANG_AHMAD",
            InequalityId::EsseenGamma => "ESSEEN_GAMMA",
            InequalityId::RozovskiiGamma => "ROZOVSKII_GAMMA",
            InequalityId::EsseenG => "ESSEEN_G",
            InequalityId::RozovskiiG => "ROZOVSKII_G",
            InequalityId::EsseenGGamma => "ESSEEN_G_GAMMA",
            InequalityId::RozovskiiGGamma => "ROZOVSKII_G_GAMMA",
        }
    }

    pub fn uses_g(self) -> bool {
        use InequalityId::*;
        matches!(
            self,
            Kp | WangAhmad | EsseenG | RozovskiiG | EsseenGGamma | RozovskiiGGamma
        )
    }

    pub fn uses_eps(self) -> bool {
        use InequalityId::*;
        matches!(
            self,
            Osipov | EsseenGamma | RozovskiiGamma | EsseenG | RozovskiiG | EsseenGGamma | RozovskiiGGamma
        )
    }

    pub fn uses_gamma(self) -> bool {
        use InequalityId::*;
        matches!(self, EsseenGamma | RozovskiiGamma | EsseenGGamma | RozovskiiGGamma)
    }

    /// The constant of the bound for the given parameters, with a label
    /// naming where it came from.
    pub fn constant(self, eps: f64, gamma: f64) -> Result<(f64, String)> {
        use InequalityId::*;
        let table = |name: &str, l: Lookup, factor: f64| {
            let label = format!(
                "{name}(eps={}, gamma={}) = {}",
                fmt_ext(l.entry.eps),
                fmt_ext(l.entry.gamma),
                l.value
            );
            if factor == 1.0 {
                (l.value, label)
            } else {
                (factor * l.value, format!("{factor} * {label}"))
            }
        };
        Ok(match self {
            Kp | Osipov1 | Osipov => (A1_UPPER, format!("A1 <= {A1_UPPER}")),
            Esseen => (AE_INF_1, format!("A3 <= {AE_INF_1}")),
            EsseenBounded => (AE_1_1, format!("A4 <= {AE_1_1}")),
            Rozovskii => (AR_1_1, format!("A5 <= {AR_1_1}")),
            WangAhmad => (A6_UPPER, format!("A6 <= {A6_UPPER}")),
            EsseenGamma => table("A_E", esseen_constant(eps, gamma)?, 1.0),
            RozovskiiGamma => table("A_R", rozovskii_constant(eps, gamma)?, 1.0),
            EsseenG => table("A_E", esseen_constant(eps.min(1.0), 1.0)?, 1.0),
            EsseenGGamma => table("A_E", esseen_constant(eps.min(1.0), gamma)?, 1.0),
            RozovskiiG | RozovskiiGGamma => {
                let gamma = if self == RozovskiiG { 1.0 } else { gamma };
                if eps.is_infinite() {
                    return Err(Error::NoConstantAvailable {
                        what: format!("{} with eps = inf", self.name()),
                    });
                }
                table("A_R", rozovskii_constant(eps, gamma)?, eps.max(1.0))
            }
        })
    }
}

fn fmt_ext(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        x.to_string()
    }
}

impl fmt::Display for InequalityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InequalityId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_uppercase().replace('-', "_");
        InequalityId::ALL
            .into_iter()
            .find(|id| id.name() == key)
            .ok_or_else(|| Error::Parse(format!("unknown inequality id {s:?}")))
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub inequality: InequalityId,
    pub context: String,
    #[serde(default)]
    pub g: Option<String>,
    #[serde(default, with = "crate::ext::opt_f64_ext")]
    pub eps: Option<f64>,
    #[serde(default, with = "crate::ext::opt_f64_ext")]
    pub gamma: Option<f64>,
    #[serde(with = "crate::ext::f64_ext")]
    pub fraction_value: f64,
    pub constant_used: f64,
    pub constant_source: String,
    pub delta_n: f64,
    pub delta_uncertainty: f64,
    #[serde(with = "crate::ext::f64_ext")]
    pub ratio: f64,
    pub pass: bool,
    #[serde(default)]
    pub witness: Option<String>,
}

fn require(id: InequalityId, params: Option<&FractionParams>) -> Result<&FractionParams> {
    params.ok_or_else(|| Error::InvalidParameter(format!("{id} needs parameters (g, eps, gamma)")))
}

/// Checks `id` on `ctx`, computing `Delta_n` by exact convolution.
pub fn check_inequality(ctx: &SumContext, id: InequalityId, params: Option<&FractionParams>) -> Result<BoundReport> {
    check_with_delta(ctx, id, params, &delta_n(ctx)?)
}

/// Checks `id` on `ctx` against an already computed distance.
///
/// Parameters that `id` does not use are ignored and left out of the report.
pub fn check_with_delta(
    ctx: &SumContext,
    id: InequalityId,
    params: Option<&FractionParams>,
    delta: &KolmogorovDistance,
) -> Result<BoundReport> {
    use InequalityId::*;
    let p = if id.uses_g() || id.uses_eps() {
        Some(require(id, params)?)
    } else {
        None
    };
    let eps = p.map_or(1.0, |p| p.eps);
    let gamma = if id.uses_gamma() {
        p.map_or(1.0, |p| p.gamma)
    } else {
        1.0
    };
    let g = p.map_or(GFunction::Identity, |p| p.g.clone());

    let (constant, source) = id.constant(eps, gamma)?;

    let with = |g: GFunction| FractionParams::new(g, eps, gamma);
    let sup = |v: FractionValue| (v.value, Some(v.witness.to_string()));
    let (fraction, witness) = match id {
        Kp => (katz_petrov_fraction(ctx, &g)?, None),
        Osipov1 => (osipov_fraction(ctx, 1.0), None),
        Osipov => (osipov_fraction(ctx, eps), None),
        Esseen => (esseen_classic_fraction(ctx), None),
        EsseenBounded => (esseen_bounded_fraction(ctx), None),
        Rozovskii => (rozovskii_classic_fraction(ctx), None),
        WangAhmad => (wang_ahmad_fraction(ctx, &g), None),
        EsseenGamma => sup(esseen_fraction(ctx, &with(GFunction::Identity)?)),
        RozovskiiGamma => sup(rozovskii_fraction(ctx, &with(GFunction::Identity)?)),
        EsseenG | EsseenGGamma => sup(esseen_fraction(ctx, &with(g.clone())?)),
        RozovskiiG | RozovskiiGGamma => sup(rozovskii_fraction(ctx, &with(g.clone())?)),
    };

    let bound = constant * fraction;
    Ok(BoundReport {
        inequality: id,
        context: ctx.describe(),
        g: id.uses_g().then(|| g.to_string()),
        eps: id.uses_eps().then_some(eps),
        gamma: id.uses_gamma().then_some(gamma),
        fraction_value: fraction,
        constant_used: constant,
        constant_source: source,
        delta_n: delta.delta,
        delta_uncertainty: delta.uncertainty,
        ratio: delta.delta / fraction,
        pass: delta.delta - delta.uncertainty <= bound,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DiscreteDistribution;
    use crate::verify::constants::GAMMA_STAR;

    fn pm1() -> SumContext {
        SumContext::iid(&DiscreteDistribution::symmetric_pm1(), 1).unwrap()
    }

    #[test]
    fn katz_petrov_on_pm1() {
        let p = FractionParams::new(GFunction::Identity, 1.0, 1.0).unwrap();
        let r = check_inequality(&pm1(), InequalityId::Kp, Some(&p)).unwrap();
        assert_eq!(r.fraction_value, 1.0);
        assert_eq!(r.constant_used, 1.87);
        assert!((r.delta_n - 0.341_344_746_068_542_9).abs() < 1e-12);
        assert!((r.ratio - r.delta_n).abs() < 1e-15);
        assert!(r.pass);
        assert!(r.eps.is_none() && r.gamma.is_none());
    }

    #[test]
    fn table_rows_are_used() {
        let ctx = pm1();
        let g0 = GFunction::clip_above(ctx.bn()).unwrap();
        let p = FractionParams::new(g0, 1.0, 0.72).unwrap();
        let r = check_inequality(&ctx, InequalityId::EsseenGGamma, Some(&p)).unwrap();
        assert_eq!(r.constant_used, 2.7298);
        assert!(r.pass);

        let g1 = GFunction::clip_below(ctx.bn()).unwrap();
        let p = FractionParams::new(g1, 0.5, GAMMA_STAR).unwrap();
        let r = check_inequality(&ctx, InequalityId::RozovskiiGGamma, Some(&p)).unwrap();
        assert_eq!(r.constant_used, 3.0396);
        assert_eq!(r.fraction_value, 1.0);
        assert!(r.pass);
    }

    #[test]
    fn rozovskii_without_constant() {
        let p = FractionParams::new(GFunction::Identity, f64::INFINITY, 1.0).unwrap();
        let err = check_inequality(&pm1(), InequalityId::RozovskiiGGamma, Some(&p)).unwrap_err();
        assert!(matches!(err, Error::NoConstantAvailable { .. }));
        assert!(check_inequality(&pm1(), InequalityId::EsseenG, None).is_err());
    }

    #[test]
    fn pass_respects_uncertainty() {
        let ctx = pm1();
        let delta = KolmogorovDistance {
            delta: 3.0,
            uncertainty: 1.2,
            argsup: 0.0,
            side: crate::clt::Side::Left,
        };
        let r = check_with_delta(&ctx, InequalityId::Osipov1, None, &delta).unwrap();
        assert_eq!(r.fraction_value, 1.0);
        assert!(r.pass);
        let delta = KolmogorovDistance {
            uncertainty: 1.0,
            ..delta
        };
        assert!(
            !check_with_delta(&ctx, InequalityId::Osipov1, None, &delta)
                .unwrap()
                .pass
        );
    }

    #[test]
    fn id_names_round_trip() {
        for id in InequalityId::ALL {
            assert_eq!(id.name().parse::<InequalityId>().unwrap(), id);
            let json = serde_json::to_string(&id).unwrap();
            assert_eq!(json, format!("\"{}\"", id.name()));
        }
    }
}
