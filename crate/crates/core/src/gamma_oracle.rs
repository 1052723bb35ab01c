//! Closed forms for the log-power core integrals.
//!
//! Every core integrand met in this crate reduces, after `y = ∓ln r`, to
//!
//! ```text
//! ∫₁^∞ e^{-s y} y^m dy = s^{-(m+1)} Γ(m+1, s)
//! ```
//!
//! so the upper incomplete Gamma function gives the exact value. The routines
//! here never touch the quadrature code and serve as its ground truth.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radial::PoincareParams;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_7;

/// Lanczos approximation, g = 607/128, 15 terms.
const LANCZOS_G: f64 = 607.0 / 128.0;
const LANCZOS_COEF: [f64; 15] = [
    0.999_999_999_999_997_1,
    57.156_235_665_862_92,
    -59.597_960_355_475_49,
    14.136_097_974_741_747,
    -0.491_913_816_097_620_2,
    3.399_464_998_481_189e-5,
    4.652_362_892_704_858e-5,
    -9.837_447_530_487_956e-5,
    1.580_887_032_249_125e-4,
    -2.102_644_417_241_048_8e-4,
    2.174_396_181_152_126_5e-4,
    -1.643_181_065_367_639e-4,
    8.441_822_398_385_275e-5,
    -2.619_083_840_158_141e-5,
    3.689_918_265_953_162e-6,
];

const MAX_ITER: usize = 100_000;

/// A Gamma-type value kept alongside its logarithm so large arguments stay usable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaValue {
    pub value: f64,
    pub log_value: f64,
}

impl GammaValue {
    fn from_log(log_value: f64) -> Self {
        GammaValue {
            value: log_value.exp(),
            log_value,
        }
    }
}

/// ln Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::invalid(format!("log_gamma needs x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1-x) = π / sin(πx)
        let s = (std::f64::consts::PI * x).sin();
        return std::f64::consts::PI.ln() - s.ln() - ln_gamma_unchecked(1.0 - x);
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEF[0];
    for (i, c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    LN_SQRT_2PI + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Γ(a, s) = ∫_s^∞ e^{-t} t^{a-1} dt for a > 0, s > 0.
///
/// Series for the lower function when `s < a`, Lentz continued fraction otherwise.
pub fn upper_incomplete_gamma(a: f64, s: f64) -> Result<GammaValue> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(Error::invalid(format!("incomplete gamma needs a > 0, got {a}")));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::invalid(format!("incomplete gamma needs s > 0, got {s}")));
    }
    let ln_full = ln_gamma_unchecked(a);
    let log_value = if s < a {
        let ln_lower = ln_lower_series(a, s)?;
        let ratio = (ln_lower - ln_full).exp();
        ln_full + (-ratio).ln_1p()
    } else {
        ln_upper_continued_fraction(a, s)?
    };
    Ok(GammaValue::from_log(log_value))
}

fn ln_lower_series(a: f64, s: f64) -> Result<f64> {
    // γ(a,s) = e^{-s} s^a / a · Σ_n s^n / ((a+1)…(a+n))
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut denom = a;
    for _ in 0..MAX_ITER {
        denom += 1.0;
        term *= s / denom;
        sum += term;
        if term < sum * 1e-17 {
            return Ok(-s + a * s.ln() - a.ln() + sum.ln());
        }
    }
    Err(Error::NotConverged(format!("incomplete gamma series a={a}, s={s}")))
}

fn ln_upper_continued_fraction(a: f64, s: f64) -> Result<f64> {
    const TINY: f64 = 1e-300;
    let mut b = s + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            return Ok(-s + a * s.ln() + h.ln());
        }
    }
    Err(Error::NotConverged(format!("incomplete gamma fraction a={a}, s={s}")))
}

/// ln ∫₁^∞ e^{-s y} y^m dy.
pub fn ln_core_integral(s: f64, m: f64) -> Result<f64> {
    if !(s > 0.0) {
        return Err(Error::Divergent(format!("core integral needs decay rate s > 0, got {s}")));
    }
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::invalid(format!("core integral needs m >= 0, got {m}")));
    }
    let g = upper_incomplete_gamma(m + 1.0, s)?;
    Ok(g.log_value - (m + 1.0) * s.ln())
}

/// ∫₁^∞ e^{-s y} y^m dy = s^{-(m+1)} Γ(m+1, s).
pub fn core_integral(s: f64, m: f64) -> Result<f64> {
    ln_core_integral(s, m).map(f64::exp)
}

/// Which side of the critical exponent a core norm is taken on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoreSide {
    /// Unit ball, core `(-ln r)^Δ` on `(0, 1/e]`, requires `p < p₀`.
    Interior,
    /// Exterior of the ball, core `(ln r)^Δ` on `[e, ∞)`, requires `p > p₀`.
    Exterior,
}

fn decay_rate(p: f64, params: &PoincareParams, side: CoreSide) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::invalid(format!("p must be a finite value >= 1, got {p}")));
    }
    let s = match side {
        CoreSide::Interior => params.d as f64 - p * (1.0 + params.alpha),
        CoreSide::Exterior => p * (1.0 + params.alpha) - params.d as f64,
    };
    if s > 0.0 {
        Ok(s)
    } else {
        Err(Error::Divergent(format!(
            "p = {p} is on the wrong side of the critical exponent {} for {side:?}",
            params.p0
        )))
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 1.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("Delta must satisfy Delta > 1, got {delta}")))
    }
}

fn ln_sphere(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    std::f64::consts::LN_2 + h * std::f64::consts::PI.ln() - ln_gamma_unchecked(h)
}

/// Exact `|δ^{-α} grad u|_p` restricted to the log-power core, δ = |x|.
pub fn grad_core_norm_on(p: f64, params: &PoincareParams, delta: f64, side: CoreSide) -> Result<f64> {
    check_delta(delta)?;
    let s = decay_rate(p, params, side)?;
    let ln_int = ln_core_integral(s, p * (delta - 1.0))?;
    Ok(((ln_sphere(params.d) + p * delta.ln() + ln_int) / p).exp())
}

/// Exact `|u / δ^{1+α}|_p` restricted to the (uncentered) log-power core, δ = |x|.
pub fn func_core_norm_on(p: f64, params: &PoincareParams, delta: f64, side: CoreSide) -> Result<f64> {
    check_delta(delta)?;
    let s = decay_rate(p, params, side)?;
    let ln_int = ln_core_integral(s, p * delta)?;
    Ok(((ln_sphere(params.d) + ln_int) / p).exp())
}

/// Bounded-case core gradient norm; requires `p < d(1+α)`.
pub fn grad_core_norm(p: f64, params: &PoincareParams, delta: f64) -> Result<f64> {
    grad_core_norm_on(p, params, delta, CoreSide::Interior)
}

/// Bounded-case core function norm; requires `p < d(1+α)`.
pub fn func_core_norm(p: f64, params: &PoincareParams, delta: f64) -> Result<f64> {
    func_core_norm_on(p, params, delta, CoreSide::Interior)
}

/// Stirling's approximation `x ln x − x − ½ ln x + ½ ln 2π`.
pub fn stirling_log_gamma(x: f64) -> f64 {
    x * x.ln() - x - 0.5 * x.ln() + LN_SQRT_2PI
}
