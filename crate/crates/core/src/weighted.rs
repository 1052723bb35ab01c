//! Log-power weights, weighted averages and the p,q machinery.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_log_log, LinearFit};
use crate::optimize::golden_section_min;
use crate::par_map;
use crate::psi::PsiFunction;
use crate::quadrature::{self, grad_norm_weighted, lp_norm, NormSpec, QuadratureConfig};
use crate::radial::{center, DomainSpec, PoincareParams, Quantity, RadialProfile};

/// `log⁺ z = max(1, |ln z|)`.
pub fn log_plus(z: f64) -> f64 {
    z.ln().abs().max(1.0)
}

/// Slowly varying factor `S(z)` for `z ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SlowVarying {
    #[default]
    One,
    /// `ln(1 + z)`
    Log1p,
}

impl SlowVarying {
    pub fn eval(&self, z: f64) -> f64 {
        match self {
            SlowVarying::One => 1.0,
            SlowVarying::Log1p => z.ln_1p(),
        }
    }
}

/// `w(δ) = δ^θ · (log⁺ δ)^B · S(log⁺ δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub delta_power: f64,
    pub log_power: f64,
    pub slow: SlowVarying,
}

impl Default for WeightSpec {
    fn default() -> Self {
        Self::unit()
    }
}

impl WeightSpec {
    pub fn unit() -> Self {
        WeightSpec {
            delta_power: 0.0,
            log_power: 0.0,
            slow: SlowVarying::One,
        }
    }

    pub fn delta_power(theta: f64) -> Self {
        WeightSpec {
            delta_power: theta,
            ..Self::unit()
        }
    }

    pub fn new(delta_power: f64, log_power: f64, slow: SlowVarying) -> Result<Self> {
        if !delta_power.is_finite() {
            return Err(Error::invalid(format!("delta power must be finite, got {delta_power}")));
        }
        if !log_power.is_finite() || log_power < 0.0 {
            return Err(Error::invalid(format!("log power must be finite and >= 0, got {log_power}")));
        }
        Ok(WeightSpec {
            delta_power,
            log_power,
            slow,
        })
    }

    pub fn is_unit(&self) -> bool {
        *self == Self::unit()
    }

    /// `ln w` given `ln δ`.
    pub(crate) fn ln_factor(&self, ln_delta: f64) -> f64 {
        let mut l = if self.delta_power == 0.0 { 0.0 } else { self.delta_power * ln_delta };
        if self.log_power == 0.0 && self.slow == SlowVarying::One {
            return l;
        }
        let lp = ln_delta.abs().max(1.0);
        if self.log_power != 0.0 {
            l += self.log_power * lp.ln();
        }
        if self.slow != SlowVarying::One {
            l += self.slow.eval(lp).ln();
        }
        l
    }

    /// `w(δ)`.
    pub fn eval(&self, delta: f64) -> f64 {
        self.ln_factor(delta.ln()).exp()
    }
}

/// `(1 − B₂ + B₁)₊`.
pub fn log_weight_exponent(b1: f64, b2: f64) -> Result<f64> {
    if !(b1 > 0.0) || !(b2 > 0.0) || !b1.is_finite() || !b2.is_finite() {
        return Err(Error::invalid(format!("need min(B1, B2) > 0, got B1 = {b1}, B2 = {b2}")));
    }
    Ok((1.0 - b2 + b1).max(0.0))
}

/// Left and right sides of the log-weighted inequality, before the constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogWeightParts {
    pub p: f64,
    /// `|f · (log⁺δ)^{B₁} S(log⁺δ) / δ^{1+α}|_p`
    pub lhs: f64,
    /// `| |grad f| (log⁺δ)^{B₂} S(log⁺δ) / δ^α |_p`
    pub rhs: f64,
    /// `[p / |d − p(1+α)|]^{(1−B₂+B₁)₊}`
    pub factor: f64,
    pub ratio: f64,
    pub converged: bool,
}

/// LHS ÷ (factor · RHS) of the log-weighted Poincaré inequality.
///
/// `f` is used as given; center it first on bounded domains.
#[allow(clippy::too_many_arguments)]
pub fn log_weight_ratio_parts(
    f: &RadialProfile,
    domain: &DomainSpec,
    params: &PoincareParams,
    p: f64,
    b1: f64,
    b2: f64,
    slow: SlowVarying,
    quad: &QuadratureConfig,
) -> Result<LogWeightParts> {
    let exponent = log_weight_exponent(b1, b2)?;
    let gap = params.gap(p).abs();
    if gap == 0.0 {
        return Err(Error::Pole(p));
    }
    let lhs_spec = NormSpec {
        quantity: Quantity::Value,
        p,
        multiplier: WeightSpec::new(-(1.0 + params.alpha), b1, slow)?,
        measure: WeightSpec::unit(),
        band: None,
    };
    let lhs = lp_norm(f, domain, &lhs_spec, quad)?;
    let factor = (p / gap).powf(exponent);
    if lhs.value == 0.0 {
        return Ok(LogWeightParts {
            p,
            lhs: 0.0,
            rhs: f64::NAN,
            factor,
            ratio: 0.0,
            converged: lhs.converged,
        });
    }
    let rhs_spec = NormSpec {
        quantity: Quantity::Gradient,
        multiplier: WeightSpec::new(-params.alpha, b2, slow)?,
        ..lhs_spec
    };
    let rhs = lp_norm(f, domain, &rhs_spec, quad)?;
    if rhs.value == 0.0 {
        return Err(Error::ZeroDenominator(format!("weighted gradient norm vanishes at p = {p}")));
    }
    Ok(LogWeightParts {
        p,
        lhs: lhs.value,
        rhs: rhs.value,
        factor,
        ratio: lhs.value / (factor * rhs.value),
        converged: lhs.converged && rhs.converged,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn log_weight_ratio(
    f: &RadialProfile,
    domain: &DomainSpec,
    params: &PoincareParams,
    p: f64,
    b1: f64,
    b2: f64,
    slow: SlowVarying,
    quad: &QuadratureConfig,
) -> Result<f64> {
    log_weight_ratio_parts(f, domain, params, p, b1, b2, slow, quad).map(|r| r.ratio)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogWeightScan {
    pub rows: Vec<LogWeightParts>,
    /// ln ratio against ln |d − p(1+α)|
    pub fit: LinearFit,
}

/// Evaluates the log-weight ratio at each `p`, centering `f` first.
#[allow(clippy::too_many_arguments)]
pub fn log_weight_scan(
    f: &RadialProfile,
    domain: &DomainSpec,
    params: &PoincareParams,
    ps: &[f64],
    b1: f64,
    b2: f64,
    slow: SlowVarying,
    quad: &QuadratureConfig,
) -> Result<LogWeightScan> {
    let f0 = center(f, domain, quad)?;
    let mut rows = par_map(ps, |&p| log_weight_ratio_parts(&f0, domain, params, p, b1, b2, slow, quad))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| a.p.total_cmp(&b.p));
    let gaps: Vec<f64> = rows.iter().map(|r| params.gap(r.p).abs()).collect();
    let ratios: Vec<f64> = rows.iter().map(|r| r.ratio).collect();
    let fit = fit_log_log(&gaps, &ratios)?;
    Ok(LogWeightScan { rows, fit })
}

/// `−1 + 1/(p(1+α)) − 1/q`, for `q > p(1+α)`.
pub fn pq_exponent(p: f64, q: f64, alpha: f64) -> Result<f64> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::invalid(format!("alpha must exceed -1, got {alpha}")));
    }
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::invalid(format!("p must be finite and >= 1, got {p}")));
    }
    let pa = p * (1.0 + alpha);
    if !(q > pa) {
        return Err(Error::invalid(format!("need q > p(1+alpha) = {pa}, got q = {q}")));
    }
    Ok(-1.0 + 1.0 / pa - 1.0 / q)
}

/// Infimum of the ν objective and where it is attained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuValue {
    pub q: f64,
    pub value: f64,
    pub argmin_p: f64,
}

pub const NU_GRID_POINTS: usize = 512;

fn nu_objective(p: f64, q: f64, alpha: f64, psi: f64) -> f64 {
    let pa = p * (1.0 + alpha);
    let e = -1.0 + 1.0 / pa - 1.0 / q;
    let v = (q - pa).abs().powf(e) * psi;
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

fn nu_inf(lo: f64, hi: f64, q: f64, alpha: f64, psi: &(dyn Fn(f64) -> f64 + Sync), points: usize) -> Result<NuValue> {
    if !(hi > lo) {
        return Err(Error::invalid(format!("empty admissible p-range [{lo}, {hi})")));
    }
    if points < 3 {
        return Err(Error::invalid("the nu grid needs at least 3 points"));
    }
    let step = (hi - lo) / points as f64;
    let ps: Vec<f64> = (0..points).map(|i| lo + step * i as f64).collect();
    let vals = par_map(&ps, |&p| nu_objective(p, q, alpha, psi(p)));
    let (k, best) = vals
        .iter()
        .enumerate()
        .fold((0, f64::INFINITY), |acc, (i, &v)| if v < acc.1 { (i, v) } else { acc });
    if !best.is_finite() {
        return Err(Error::NonFinite(format!("nu objective is infinite on the whole grid at q = {q}")));
    }
    let a = if k == 0 { lo } else { ps[k - 1] };
    let b = (ps[k] + step).min(hi);
    let (x, fx) = golden_section_min(|p| nu_objective(p, q, alpha, psi(p)), a, b, 1e-13 * (1.0 + hi), 200);
    let (argmin_p, value) = if fx <= best { (x, fx) } else { (ps[k], best) };
    Ok(NuValue { q, value, argmin_p })
}

/// `ν(q) = inf_{p ∈ [1, q/(1+α))} |q − p(1+α)|^{−1 + 1/(p(1+α)) − 1/q} ψ(p)`.
///
/// The range is intersected with ψ's interval. A uniform grid of `points`
/// locates the best cell, which golden-section search then refines.
pub fn nu_transform(psi: &PsiFunction, alpha: f64, q: f64, points: usize) -> Result<NuValue> {
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::invalid(format!("alpha must exceed -1, got {alpha}")));
    }
    if !(q > 1.0 + alpha) || !q.is_finite() {
        return Err(Error::invalid(format!("need finite q > 1 + alpha, got {q}")));
    }
    let iv = psi.interval();
    let lo = iv.a.max(1.0);
    let hi = (q / (1.0 + alpha)).min(iv.b);
    nu_inf(lo, hi, q, alpha, &|p| psi.value(p).unwrap_or(f64::INFINITY), points)
}

/// `(∫ f w / ∫ w, [∫ |f|^p w]^{1/p})` on a bounded domain.
pub fn weighted_average_and_norm(
    f: &RadialProfile,
    domain: &DomainSpec,
    w: &WeightSpec,
    p: f64,
    quad: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let average = weighted_average(f, domain, w, quad)?;
    let spec = NormSpec {
        quantity: Quantity::Value,
        p,
        multiplier: WeightSpec::unit(),
        measure: *w,
        band: None,
    };
    let norm = lp_norm(f, domain, &spec, quad)?;
    Ok((average, norm.value))
}

/// `u_w = ∫ f w / ∫ w`.
pub fn weighted_average(f: &RadialProfile, domain: &DomainSpec, w: &WeightSpec, quad: &QuadratureConfig) -> Result<f64> {
    if !domain.is_bounded() {
        return Err(Error::invalid("weighted averages need the bounded domain"));
    }
    let mass = quadrature::weight_mass(domain, w, None, quad)?;
    if !(mass.value > 0.0) || !mass.value.is_finite() {
        return Err(Error::Divergent(format!("weight integral is {}", mass.value)));
    }
    if let Some(c) = f.constant_value() {
        return Ok(c);
    }
    let num = quadrature::radial_integral(f, domain, w, None, quad)?;
    Ok(num.value / mass.value)
}

/// `f − u_w`.
pub fn center_weighted(f: &RadialProfile, domain: &DomainSpec, w: &WeightSpec, quad: &QuadratureConfig) -> Result<RadialProfile> {
    Ok(f.shifted(weighted_average(f, domain, w, quad)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuBoundRow {
    pub q: f64,
    /// `|(u − u_w)/δ^{1+α}|_q`
    pub lhs: f64,
    pub nu: f64,
    pub argmin_p: f64,
    pub k: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuBoundReport {
    pub rows: Vec<NuBoundRow>,
    pub k: f64,
    pub k_doubled: f64,
    pub grid_stable: bool,
}

/// Checks `|(u − u_w)/δ^{1+α}|_q ≤ K ν(q)` over a q-scan with ψ(p) taken as
/// the measured `| |grad u| / δ^α |_p`.
///
/// ν is evaluated on a grid of `points` (and again on `2 · points` for the
/// stability flag).
pub fn nu_bound_report(
    u: &RadialProfile,
    domain: &DomainSpec,
    params: &PoincareParams,
    w: &WeightSpec,
    qs: &[f64],
    points: usize,
    quad: &QuadratureConfig,
) -> Result<NuBoundReport> {
    let u0 = center_weighted(u, domain, w, quad)?;
    let alpha = params.alpha;
    let psi = |p: f64| {
        grad_norm_weighted(u, domain, p, alpha, quad)
            .map(|n| n.value)
            .unwrap_or(f64::INFINITY)
    };
    let run = |pts: usize| -> Result<Vec<NuBoundRow>> {
        qs.iter()
            .map(|&q| {
                if !(q > 1.0 + alpha) {
                    return Err(Error::invalid(format!("need q > 1 + alpha, got {q}")));
                }
                let lhs = quadrature::lp_norm_weighted(&u0, domain, q, 1.0 + alpha, quad)?.value;
                let nu = nu_inf(1.0, q / (1.0 + alpha), q, alpha, &psi, pts)?;
                Ok(NuBoundRow {
                    q,
                    lhs,
                    nu: nu.value,
                    argmin_p: nu.argmin_p,
                    k: lhs / nu.value,
                })
            })
            .collect()
    };
    let rows = run(points)?;
    let doubled = run(2 * points)?;
    let k = rows.iter().map(|r| r.k).fold(0.0, f64::max);
    let k_doubled = doubled.iter().map(|r| r.k).fold(0.0, f64::max);
    if !k.is_finite() || !k_doubled.is_finite() {
        return Err(Error::NonFinite("nu bound constant".into()));
    }
    Ok(NuBoundReport {
        rows,
        k,
        k_doubled,
        grid_stable: (k_doubled - k).abs() <= 0.05 * k,
    })
}
