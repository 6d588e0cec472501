//! The class of weight functions `g` that are increasing on `(0, inf)` and for
//! which `z / g(z)` is increasing too (both in the wide sense).
//!
//! `g(0)` is never evaluated. Limits at `0+` and at infinity are computed per
//! kind by [`GFunction::limit_at_zero`] and [`GFunction::slope_at_infinity`].

use std::fmt;
use std::path::Path;

use crate::distributions::Number;
use crate::error::{Error, Result};

/// Relative slack used by membership and envelope checks.
pub const VALIDATION_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum GFunction {
    /// `g(z) = z`.
    Identity,
    /// `g(z) = 1`.
    ConstantOne,
    /// `g(z) = z^delta`, `delta` in `[0, 1]`.
    Power(f64),
    /// `g(z) = min(z, a)`.
    ClipAbove(f64),
    /// `g(z) = max(z, a)`.
    ClipBelow(f64),
    /// `g(z) = c * inner(z)`.
    Scaled(f64, Box<GFunction>),
    /// Piecewise-linear interpolation of knots.
    Tabulated(Tabulated),
}

/// Knots `(z, g)` with `z` strictly increasing and both coordinates positive.
///
/// Between knots the function is linear. Beyond the last knot the last piece is
/// continued (or held constant if it decreases). Below the first knot the
/// first piece is continued when it stays positive down to 0, otherwise the
/// ratio `z / g(z)` is held constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated {
    knots: Vec<(f64, f64)>,
}

impl Tabulated {
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::InvalidGFunction("tabulated g needs at least one knot".into()));
        }
        for &(z, g) in &knots {
            if !(z.is_finite() && z > 0.0 && g.is_finite() && g > 0.0) {
                return Err(Error::InvalidGFunction(format!(
                    "knot ({z}, {g}) must have positive finite coordinates"
                )));
            }
        }
        if knots.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidGFunction(
                "tabulated knots must be strictly increasing in z".into(),
            ));
        }
        Ok(Self { knots })
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    fn first_piece(&self) -> (f64, f64) {
        // intercept and slope of the first linear piece
        match self.knots.as_slice() {
            [(_, g)] => (*g, 0.0),
            [(z0, g0), (z1, g1), ..] => {
                let q = (g1 - g0) / (z1 - z0);
                (g0 - q * z0, q)
            }
            [] => unreachable!(),
        }
    }

    fn last_slope(&self) -> f64 {
        let n = self.knots.len();
        if n < 2 {
            return 0.0;
        }
        let (z0, g0) = self.knots[n - 2];
        let (z1, g1) = self.knots[n - 1];
        ((g1 - g0) / (z1 - z0)).max(0.0)
    }

    fn value(&self, z: f64) -> f64 {
        let (z_first, g_first) = self.knots[0];
        let (z_last, g_last) = *self.knots.last().unwrap();
        if z <= z_first {
            let (p, q) = self.first_piece();
            return if p >= 0.0 { p + q * z } else { g_first * z / z_first };
        }
        if z >= z_last {
            return g_last + self.last_slope() * (z - z_last);
        }
        let i = self.knots.partition_point(|&(k, _)| k <= z);
        let (z0, g0) = self.knots[i - 1];
        let (z1, g1) = self.knots[i];
        g0 + (g1 - g0) * (z - z0) / (z1 - z0)
    }

    fn limit_at_zero(&self) -> f64 {
        let (p, _) = self.first_piece();
        p.max(0.0)
    }

    /// Membership probe grid: knots, midpoints and one point on each
    /// extension. Exact for piecewise-linear functions.
    pub fn natural_grid(&self) -> Vec<f64> {
        let mut grid = vec![self.knots[0].0 * 0.5];
        for w in self.knots.windows(2) {
            grid.push(w[0].0);
            grid.push(0.5 * (w[0].0 + w[1].0));
        }
        let last = self.knots.last().unwrap().0;
        grid.push(last);
        grid.push(last * 2.0);
        grid
    }
}

impl GFunction {
    pub fn power(delta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&delta) {
            return Err(Error::InvalidGFunction(format!("power exponent {delta} not in [0, 1]")));
        }
        Ok(GFunction::Power(delta))
    }

    pub fn clip_above(a: f64) -> Result<Self> {
        check_positive("clip-above level", a)?;
        Ok(GFunction::ClipAbove(a))
    }

    pub fn clip_below(a: f64) -> Result<Self> {
        check_positive("clip-below level", a)?;
        Ok(GFunction::ClipBelow(a))
    }

    pub fn scaled(c: f64, inner: GFunction) -> Result<Self> {
        check_positive("scale factor", c)?;
        Ok(GFunction::Scaled(c, Box::new(inner)))
    }

    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self> {
        Ok(GFunction::Tabulated(Tabulated::new(knots)?))
    }

    /// `g(z)` for `z > 0`.
    pub fn eval(&self, z: f64) -> Result<f64> {
        if z.is_nan() || z <= 0.0 {
            return Err(Error::DomainError { z });
        }
        Ok(self.value(z))
    }

    /// Unchecked evaluation; callers guarantee `z > 0`.
    pub(crate) fn value(&self, z: f64) -> f64 {
        match self {
            GFunction::Identity => z,
            GFunction::ConstantOne => 1.0,
            GFunction::Power(d) => {
                if *d == 0.0 {
                    1.0
                } else if *d == 1.0 {
                    z
                } else {
                    z.powf(*d)
                }
            }
            GFunction::ClipAbove(a) => z.min(*a),
            GFunction::ClipBelow(a) => z.max(*a),
            GFunction::Scaled(c, inner) => c * inner.value(z),
            GFunction::Tabulated(t) => t.value(z),
        }
    }

    /// `lim_{z -> 0+} g(z)`.
    pub fn limit_at_zero(&self) -> f64 {
        match self {
            GFunction::Identity => 0.0,
            GFunction::ConstantOne => 1.0,
            GFunction::Power(d) => {
                if *d == 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            GFunction::ClipAbove(_) => 0.0,
            GFunction::ClipBelow(a) => *a,
            GFunction::Scaled(c, inner) => c * inner.limit_at_zero(),
            GFunction::Tabulated(t) => t.limit_at_zero(),
        }
    }

    /// `lim_{z -> inf} g(z) / z`.
    pub fn slope_at_infinity(&self) -> f64 {
        match self {
            GFunction::Identity | GFunction::ClipBelow(_) => 1.0,
            GFunction::ConstantOne | GFunction::ClipAbove(_) => 0.0,
            GFunction::Power(d) => {
                if *d == 1.0 {
                    1.0
                } else {
                    0.0
                }
            }
            GFunction::Scaled(c, inner) => c * inner.slope_at_infinity(),
            GFunction::Tabulated(t) => t.last_slope(),
        }
    }

    /// Points where `g` is not smooth.
    pub fn kinks(&self) -> Vec<f64> {
        match self {
            GFunction::ClipAbove(a) | GFunction::ClipBelow(a) => vec![*a],
            GFunction::Scaled(_, inner) => inner.kinks(),
            GFunction::Tabulated(t) => t.knots.iter().map(|k| k.0).collect(),
            _ => Vec::new(),
        }
    }

    /// Membership test on a grid natural to the kind. Built-in kinds are
    /// members by construction; tabulated functions are probed at knots,
    /// midpoints and on both extensions.
    pub fn is_member(&self) -> bool {
        match self {
            GFunction::Scaled(_, inner) => inner.is_member(),
            GFunction::Tabulated(t) => validate_gclass(self, &t.natural_grid()),
            _ => true,
        }
    }
}

fn check_positive(what: &str, x: f64) -> Result<()> {
    if x.is_finite() && x > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidGFunction(format!(
            "{what} must be positive and finite, got {x}"
        )))
    }
}

/// Which monotonicity requirement a grid probe broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    NotIncreasing,
    RatioNotIncreasing,
    BadGrid,
}

/// The first consecutive grid pair at which membership fails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub kind: ViolationKind,
    pub left: f64,
    pub right: f64,
}

/// Checks both monotonicity conditions on consecutive grid points.
pub fn check_membership(g: &GFunction, grid: &[f64]) -> std::result::Result<(), Violation> {
    let bad_grid = |l, r| Violation {
        kind: ViolationKind::BadGrid,
        left: l,
        right: r,
    };
    if grid.len() < 2 {
        return Err(bad_grid(f64::NAN, f64::NAN));
    }
    for w in grid.windows(2) {
        let (z0, z1) = (w[0], w[1]);
        if !(z0 > 0.0 && z1 >= z0 && z1.is_finite()) {
            return Err(bad_grid(z0, z1));
        }
        let (g0, g1) = (g.value(z0), g.value(z1));
        if g1 < g0 * (1.0 - VALIDATION_SLACK) {
            return Err(Violation {
                kind: ViolationKind::NotIncreasing,
                left: z0,
                right: z1,
            });
        }
        if z1 / g1 < (z0 / g0) * (1.0 - VALIDATION_SLACK) {
            return Err(Violation {
                kind: ViolationKind::RatioNotIncreasing,
                left: z0,
                right: z1,
            });
        }
    }
    Ok(())
}

pub fn validate_gclass(g: &GFunction, probe_grid: &[f64]) -> bool {
    check_membership(g, probe_grid).is_ok()
}

/// `min(z/a, 1) <= g(z)/g(a) <= max(z/a, 1)` up to [`VALIDATION_SLACK`].
pub fn envelope_check(g: &GFunction, a: f64, z: f64) -> bool {
    let ratio = g.value(z) / g.value(a);
    let lo = (z / a).min(1.0);
    let hi = (z / a).max(1.0);
    ratio >= lo * (1.0 - VALIDATION_SLACK) && ratio <= hi * (1.0 + VALIDATION_SLACK)
}

impl fmt::Display for GFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GFunction::Identity => write!(f, "identity"),
            GFunction::ConstantOne => write!(f, "const"),
            GFunction::Power(d) => write!(f, "power:{d}"),
            GFunction::ClipAbove(a) => write!(f, "clip-above:{a}"),
            GFunction::ClipBelow(a) => write!(f, "clip-below:{a}"),
            GFunction::Scaled(c, inner) => write!(f, "scaled:{c}:{inner}"),
            GFunction::Tabulated(t) => write!(f, "tabulated:{}", knots_json(&t.knots)),
        }
    }
}

fn knots_json(knots: &[(f64, f64)]) -> String {
    let pairs: Vec<[f64; 2]> = knots.iter().map(|&(z, g)| [z, g]).collect();
    serde_json::to_string(&pairs).expect("finite knots")
}

/// A level for the clip kinds: a number, or the context's `B_n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Level {
    Fixed(f64),
    Bn,
}

impl Level {
    fn resolve(self, bn: f64) -> f64 {
        match self {
            Level::Fixed(a) => a,
            Level::Bn => bn,
        }
    }
}

/// Parsed form of a g-function spec string. Clip levels may refer to `B`,
/// which is bound to a context's `B_n` by [`GSpec::resolve`].
///
/// Grammar: `identity`, `const`, `power:D`, `clip-above:A`, `clip-below:A`,
/// `scaled:C:<spec>`, `tabulated:@path.json` or `tabulated:[[z,g],...]`.
#[derive(Debug, Clone, PartialEq)]
pub enum GSpec {
    Identity,
    Const,
    Power(f64),
    ClipAbove(Level),
    ClipBelow(Level),
    Scaled(f64, Box<GSpec>),
    Tabulated { source: String, knots: Vec<(f64, f64)> },
}

impl GSpec {
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let (head, rest) = match spec.split_once(':') {
            Some((h, r)) => (h, Some(r)),
            None => (spec, None),
        };
        let need = || rest.ok_or_else(|| Error::InvalidGFunction(format!("{head} needs an argument in {spec:?}")));
        match head {
            "identity" if rest.is_none() => Ok(GSpec::Identity),
            "const" if rest.is_none() => Ok(GSpec::Const),
            "power" => {
                let d = parse_number(need()?)?;
                GFunction::power(d)?;
                Ok(GSpec::Power(d))
            }
            "clip-above" => Ok(GSpec::ClipAbove(parse_level(need()?)?)),
            "clip-below" => Ok(GSpec::ClipBelow(parse_level(need()?)?)),
            "scaled" => {
                let (c, inner) = need()?
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidGFunction(format!("scaled needs c:<inner> in {spec:?}")))?;
                let c = parse_number(c)?;
                check_positive("scale factor", c)?;
                Ok(GSpec::Scaled(c, Box::new(GSpec::parse(inner)?)))
            }
            "tabulated" => {
                let arg = need()?;
                let (source, text) = match arg.strip_prefix('@') {
                    Some(path) => (arg.to_string(), read_knot_file(path)?),
                    None => (arg.to_string(), arg.to_string()),
                };
                let knots = parse_knots(&text)?;
                Tabulated::new(knots.clone())?;
                Ok(GSpec::Tabulated { source, knots })
            }
            _ => Err(Error::InvalidGFunction(format!("unknown g-function spec {spec:?}"))),
        }
    }

    pub fn resolve(&self, bn: f64) -> Result<GFunction> {
        match self {
            GSpec::Identity => Ok(GFunction::Identity),
            GSpec::Const => Ok(GFunction::ConstantOne),
            GSpec::Power(d) => GFunction::power(*d),
            GSpec::ClipAbove(l) => GFunction::clip_above(l.resolve(bn)),
            GSpec::ClipBelow(l) => GFunction::clip_below(l.resolve(bn)),
            GSpec::Scaled(c, inner) => GFunction::scaled(*c, inner.resolve(bn)?),
            GSpec::Tabulated { knots, .. } => GFunction::tabulated(knots.clone()),
        }
    }

    /// True when the spec refers to the context scale `B`.
    pub fn depends_on_bn(&self) -> bool {
        match self {
            GSpec::ClipAbove(Level::Bn) | GSpec::ClipBelow(Level::Bn) => true,
            GSpec::Scaled(_, inner) => inner.depends_on_bn(),
            _ => false,
        }
    }
}

impl std::str::FromStr for GSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GSpec::parse(s)
    }
}

impl fmt::Display for GSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = |l: &Level| match l {
            Level::Fixed(a) => a.to_string(),
            Level::Bn => "B".to_string(),
        };
        match self {
            GSpec::Identity => write!(f, "identity"),
            GSpec::Const => write!(f, "const"),
            GSpec::Power(d) => write!(f, "power:{d}"),
            GSpec::ClipAbove(l) => write!(f, "clip-above:{}", level(l)),
            GSpec::ClipBelow(l) => write!(f, "clip-below:{}", level(l)),
            GSpec::Scaled(c, inner) => write!(f, "scaled:{c}:{inner}"),
            GSpec::Tabulated { source, .. } => write!(f, "tabulated:{source}"),
        }
    }
}

fn parse_number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::InvalidGFunction(format!("not a number: {s:?}")))
}

fn parse_level(s: &str) -> Result<Level> {
    if s.trim() == "B" {
        return Ok(Level::Bn);
    }
    let a = parse_number(s)?;
    check_positive("clip level", a)?;
    Ok(Level::Fixed(a))
}

fn read_knot_file(path: &str) -> Result<String> {
    std::fs::read_to_string(Path::new(path)).map_err(|e| Error::Io(format!("{path}: {e}")))
}

fn parse_knots(text: &str) -> Result<Vec<(f64, f64)>> {
    let pairs: Vec<[Number; 2]> =
        serde_json::from_str(text).map_err(|e| Error::InvalidGFunction(format!("bad knot list: {e}")))?;
    pairs.iter().map(|[z, g]| Ok((z.to_f64()?, g.to_f64()?))).collect()
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn builtin() -> impl Strategy<Value = GFunction> {
        prop_oneof![
            Just(GFunction::Identity),
            Just(GFunction::ConstantOne),
            (0.0f64..=1.0).prop_map(GFunction::Power),
            (0.01f64..100.0).prop_map(GFunction::ClipAbove),
            (0.01f64..100.0).prop_map(GFunction::ClipBelow),
            (1e-3f64..1e3, 0.0f64..=1.0).prop_map(|(c, d)| GFunction::Scaled(c, Box::new(GFunction::Power(d)))),
        ]
    }

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
    }

    proptest! {
        #[test]
        fn envelope_holds_for_builtins(g in builtin(), a in 1e-3f64..1e3) {
            for z in log_grid(1e-6, 1e6, 1000) {
                prop_assert!(envelope_check(&g, a, z), "g={g} a={a} z={z}");
            }
        }

        #[test]
        fn builtins_are_members(g in builtin(), c in 1e-3f64..1e3) {
            let grid = log_grid(1e-6, 1e6, 400);
            prop_assert!(validate_gclass(&g, &grid));
            let scaled = GFunction::Scaled(c, Box::new(g.clone()));
            prop_assert!(validate_gclass(&scaled, &grid));
        }

        #[test]
        fn clips_are_members(a in 1e-3f64..1e3) {
            let grid = log_grid(1e-6, 1e6, 400);
            prop_assert!(validate_gclass(&GFunction::ClipAbove(a), &grid));
            prop_assert!(validate_gclass(&GFunction::ClipBelow(a), &grid));
        }

        #[test]
        fn eval_is_continuous(g in builtin(), z in 1e-3f64..1e3) {
            let h = 1e-9 * z;
            let d = (g.value(z + h) - g.value(z)).abs();
            prop_assert!(d <= 1e-6 * g.value(z).max(1.0), "jump {d} at {z}");
        }
    }
}
