//! Derived constants: the root `x0` defining `kappa` and `gamma_*`, and the
//! lower bound for `A_1`.

use serde::Serialize;

use crate::clt::normal_cdf;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaStarConstants {
    pub x0: f64,
    pub kappa: f64,
    pub gamma_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct A1LowerBound {
    pub x_star: f64,
    pub value: f64,
}

fn root_equation(x: f64) -> f64 {
    let (s, c) = x.sin_cos();
    8.0 * (c - 1.0) + 8.0 * x * s - 4.0 * x * x * c - x * x * x * s
}

/// Bisection for a sign change of `f` on `[lo, hi]`, down to `tol` or to
/// adjacent floats.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if (f_lo * f_hi).is_nan() || f_lo * f_hi > 0.0 {
        return Err(Error::RootNotBracketed { lo, hi });
    }
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if (f_mid < 0.0) == (f_lo < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `x0` in `(pi, 2 pi)`, then `kappa(x0)` and `gamma_* = 1 / sqrt(6 kappa)`.
pub fn gamma_star_constants() -> Result<GammaStarConstants> {
    use std::f64::consts::PI;
    let x0 = bisect(root_equation, PI, 2.0 * PI, 1e-13)?;
    let (s, c) = x0.sin_cos();
    let kappa = ((c - 1.0 + 0.5 * x0 * x0).powi(2) + (s - x0).powi(2)).sqrt() / (x0 * x0);
    Ok(GammaStarConstants {
        x0,
        kappa,
        gamma_star: 1.0 / (6.0 * kappa).sqrt(),
    })
}

/// `|1/(1+x^2) - Phi(-x)|`.
pub fn a1_gap(x: f64) -> f64 {
    (1.0 / (1.0 + x * x) - normal_cdf(-x)).abs()
}

/// Golden-section maximization of a unimodal `f` on `[a, b]`.
pub fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while b - a > tol {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// `sup_{x>0} |1/(1+x^2) - Phi(-x)|`: coarse scan of `(0, 20]`, then
/// golden-section refinement around every local maximum of the scan.
pub fn a1_lower_bound() -> A1LowerBound {
    const STEPS: usize = 2000;
    let h = 20.0 / STEPS as f64;
    let xs: Vec<f64> = (1..=STEPS).map(|i| i as f64 * h).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| a1_gap(x)).collect();
    let mut best = A1LowerBound {
        x_star: xs[0],
        value: ys[0],
    };
    for i in 0..STEPS {
        let left = if i == 0 { a1_gap(0.0) } else { ys[i - 1] };
        let right = if i + 1 < STEPS { ys[i + 1] } else { f64::NEG_INFINITY };
        if ys[i] >= left && ys[i] >= right {
            let lo = (xs[i] - h).max(0.0);
            let (x, v) = golden_max(a1_gap, lo, xs[i] + h, 1e-10);
            if v > best.value {
                best = A1LowerBound { x_star: x, value: v };
            }
        }
    }
    best
}
