//! Poincaré operator norms and the sharpness of the `p / |d − p(1+α)|` factor.
//!
//! The central quantity is
//!
//! ```text
//! V(f, p) = |f⁰ / δ^{1+α}|_p · |d − p(1+α)| / p  ÷  | |grad f| / δ^α |_p
//! ```
//!
//! which stays bounded above for every f on a Poincaré domain and, for the
//! extremal families `u_Δ` and `v_Δ`, bounded below as p approaches the
//! critical exponent (and as p → ∞ on the exterior domain).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::{fit_log_log, LinearFit};
use crate::par_map;
use crate::psi::{GridSpec, PsiFunction};
use crate::quadrature::{grad_norm_weighted, lp_norm_weighted, QuadratureConfig};
use crate::radial::{center, make_u_delta, make_v_delta, DeltaModel, DomainSpec, PoincareParams, RadialProfile};

/// `p₀ = d(1+α)`.
pub fn critical_exponent(params: &PoincareParams) -> f64 {
    params.d as f64 * (1.0 + params.alpha)
}

/// Both norms that make up V(f, p), and V itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioParts {
    pub p: f64,
    /// `|f⁰ / δ^{1+α}|_p`
    pub numerator: f64,
    /// `| |grad f| / δ^α |_p`
    pub denominator: f64,
    pub v: f64,
    pub converged: bool,
}

fn check_domain(domain: &DomainSpec, params: &PoincareParams) -> Result<()> {
    if domain.dimension != params.d {
        return Err(Error::invalid(format!(
            "domain dimension {} does not match d = {}",
            domain.dimension, params.d
        )));
    }
    Ok(())
}

/// Computes V(f, p) with its numerator and denominator.
///
/// `f` is used as given; center it first on bounded domains.
pub fn poincare_ratio_parts(
    f: &RadialProfile,
    domain: &DomainSpec,
    params: &PoincareParams,
    p: f64,
    quad: &QuadratureConfig,
) -> Result<RatioParts> {
    check_domain(domain, params)?;
    let gap = params.gap(p).abs();
    if gap == 0.0 {
        return Err(Error::Pole(p));
    }
    let num = lp_norm_weighted(f, domain, p, 1.0 + params.alpha, quad)?;
    if num.value == 0.0 {
        return Ok(RatioParts {
            p,
            numerator: 0.0,
            denominator: grad_norm_weighted(f, domain, p, params.alpha, quad).map_or(0.0, |n| n.value),
            v: 0.0,
            converged: num.converged,
        });
    }
    let den = grad_norm_weighted(f, domain, p, params.alpha, quad)?;
    if den.value == 0.0 {
        return Err(Error::ZeroDenominator(format!("gradient norm vanishes at p = {p}")));
    }
    Ok(RatioParts {
        p,
        numerator: num.value,
        denominator: den.value,
        v: num.value * gap / p / den.value,
        converged: num.converged && den.converged,
    })
}

/// V(f, p).
pub fn poincare_ratio(
    f: &RadialProfile,
    domain: &DomainSpec,
    params: &PoincareParams,
    p: f64,
    quad: &QuadratureConfig,
) -> Result<f64> {
    poincare_ratio_parts(f, domain, params, p, quad).map(|r| r.v)
}

/// Empirical constant of the BGLS operator-norm bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Report {
    pub estimated_c: f64,
    pub argmax_p: f64,
    /// Relative change of the estimate under grid doubling is below 5 %.
    pub grid_stable: bool,
    pub doubled_c: f64,
    /// `(p, per-p ratio)` on the base grid.
    pub rows: Vec<(f64, f64)>,
}

const GRID_STABILITY: f64 = 0.05;
const POLE_GUARD: f64 = 1e-12;

fn per_p_ratios(
    f0: &RadialProfile,
    domain: &DomainSpec,
    params: &PoincareParams,
    points: &[f64],
    quad: &QuadratureConfig,
) -> Result<Vec<(f64, f64)>> {
    let admissible: Vec<f64> = points
        .iter()
        .copied()
        .filter(|&p| params.gap(p).abs() > POLE_GUARD)
        .collect();
    if admissible.is_empty() {
        return Err(Error::invalid("no grid point away from the critical exponent"));
    }
    par_map(&admissible, |&p| poincare_ratio(f0, domain, params, p, quad).map(|v| (p, v)))
        .into_iter()
        .collect()
}

fn sup_of(rows: &[(f64, f64)]) -> (f64, f64) {
    rows.iter()
        .fold((f64::NEG_INFINITY, f64::NAN), |best, &(p, v)| if v > best.0 { (v, p) } else { best })
}

/// Estimates the constant in `||T_{α,δ} f||G(ψ_{α,d}) ≤ C || |grad f| ||G(ψ)`.
///
/// For each p the ratio `[|T f|_p / ψ_{α,d}(p)] / [| |grad f| |_p / ψ(p)]` is
/// evaluated in the ψ-free form V(f, p), so ψ only fixes the exponent range.
pub fn theorem1_verify(
    f: &RadialProfile,
    domain: &DomainSpec,
    params: &PoincareParams,
    psi: &PsiFunction,
    grid: &GridSpec,
    quad: &QuadratureConfig,
) -> Result<Theorem1Report> {
    let f0 = center(f, domain, quad)?;
    let interval = psi.interval();
    let base = per_p_ratios(&f0, domain, params, &grid.points_for(&interval)?, quad)?;
    let doubled = per_p_ratios(
        &f0,
        domain,
        params,
        &grid.with_points(2 * grid.points).points_for(&interval)?,
        quad,
    )?;
    let (c, argmax_p) = sup_of(&base);
    let (c2, _) = sup_of(&doubled);
    if !c.is_finite() || !c2.is_finite() {
        return Err(Error::NonFinite("per-p ratio".into()));
    }
    let grid_stable = if c == 0.0 { c2 == 0.0 } else { (c2 - c).abs() <= GRID_STABILITY * c };
    Ok(Theorem1Report {
        estimated_c: c,
        argmax_p,
        grid_stable,
        doubled_c: c2,
        rows: base,
    })
}

/// Finite constant `K` with `|T f|_p ≤ K ψ_out(p)` wherever `| |grad f| |_p ≤ ψ_in(p)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub k: f64,
    pub k_doubled: f64,
    pub admissible_points: usize,
    pub total_points: usize,
    pub grid_stable: bool,
}

fn membership_k(
    f0: &RadialProfile,
    domain: &DomainSpec,
    params: &PoincareParams,
    psi_in: &PsiFunction,
    psi_out: &PsiFunction,
    points: &[f64],
    quad: &QuadratureConfig,
) -> Result<(f64, usize, usize)> {
    let pts: Vec<f64> = points.iter().copied().filter(|&p| params.gap(p).abs() > POLE_GUARD).collect();
    let rows = par_map(&pts, |&p| -> Result<Option<f64>> {
        let parts = poincare_ratio_parts(f0, domain, params, p, quad)?;
        if parts.denominator <= psi_in.value(p)? {
            Ok(Some(parts.numerator / psi_out.value(p)?))
        } else {
            Ok(None)
        }
    });
    let mut k = 0.0f64;
    let mut admissible = 0;
    for r in rows {
        if let Some(ratio) = r? {
            admissible += 1;
            k = k.max(ratio);
        }
    }
    Ok((k, admissible, pts.len()))
}

/// Checks a membership statement `T f ∈ G(ψ_out)` given `|grad f| ∈ G(ψ_in)`.
pub fn membership_constant(
    f: &RadialProfile,
    domain: &DomainSpec,
    params: &PoincareParams,
    psi_in: &PsiFunction,
    psi_out: &PsiFunction,
    grid: &GridSpec,
    quad: &QuadratureConfig,
) -> Result<MembershipReport> {
    let f0 = center(f, domain, quad)?;
    let interval = psi_in.interval();
    let (k, admissible_points, total_points) =
        membership_k(&f0, domain, params, psi_in, psi_out, &grid.points_for(&interval)?, quad)?;
    let (k_doubled, _, _) = membership_k(
        &f0,
        domain,
        params,
        psi_in,
        psi_out,
        &grid.with_points(2 * grid.points).points_for(&interval)?,
        quad,
    )?;
    let grid_stable = if k == 0.0 { k_doubled == 0.0 } else { (k_doubled - k).abs() <= GRID_STABILITY * k };
    Ok(MembershipReport {
        k,
        k_doubled,
        admissible_points,
        total_points,
        grid_stable,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScanCase {
    /// `u_Δ` on the ball, `p → p₀⁻`.
    BoundedBelow,
    /// `v_Δ` on the exterior, `p → p₀⁺`.
    UnboundedAbove,
    /// `v_Δ` on the exterior, `p → ∞`.
    UnboundedInfinity,
}

impl ScanCase {
    /// Maps a grid value (an offset ε, or p itself for the infinity case) to p.
    fn exponent(&self, params: &PoincareParams, x: f64) -> f64 {
        match self {
            ScanCase::BoundedBelow => params.p0 - x,
            ScanCase::UnboundedAbove => params.p0 + x,
            ScanCase::UnboundedInfinity => x,
        }
    }
}

/// Geometric list of `count` values from `hi` down to `lo`.
pub fn geometric_list(hi: f64, lo: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![hi];
    }
    (0..count)
        .map(|i| hi * (lo / hi).powf(i as f64 / (count - 1) as f64))
        .collect()
}

/// 12 offsets from 0.3 down to 1e-3.
pub fn default_epsilons() -> Vec<f64> {
    geometric_list(0.3, 1e-3, 12)
}

/// 12 exponents log-spaced over `[10, 200]`.
pub fn default_infinity_exponents() -> Vec<f64> {
    geometric_list(10.0, 200.0, 12)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub p: f64,
    /// `|p − p₀|`
    pub eps: f64,
    pub num_norm: f64,
    pub den_norm: f64,
    #[serde(rename = "V")]
    pub v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DroppedRow {
    pub p: f64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanMeta {
    pub profile: String,
    pub delta_model: DeltaModel,
    pub quadrature: QuadratureConfig,
    pub grid: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanResult {
    pub case: ScanCase,
    pub delta: f64,
    pub params: PoincareParams,
    pub rows: Vec<ScanRow>,
    /// ln V against ln |d − p(1+α)|
    pub fit: LinearFit,
    pub numerator_fit: LinearFit,
    pub denominator_fit: LinearFit,
    pub dropped: Vec<DroppedRow>,
    pub meta: ScanMeta,
}

impl ScanResult {
    pub fn min_v(&self) -> f64 {
        self.rows.iter().map(|r| r.v).fold(f64::INFINITY, f64::min)
    }

    pub fn max_v(&self) -> f64 {
        self.rows.iter().map(|r| r.v).fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max V / min V`.
    pub fn v_spread(&self) -> f64 {
        self.max_v() / self.min_v()
    }
}

/// Scans V(f, p) for the extremal family of `case`.
///
/// `grid` holds offsets `ε = |p − p₀|` for the two critical cases and the
/// exponents p themselves for [`ScanCase::UnboundedInfinity`]. Rows that
/// diverge or do not converge are dropped and listed, never imputed.
pub fn sharpness_scan(
    case: ScanCase,
    delta: f64,
    params: &PoincareParams,
    quad: &QuadratureConfig,
    grid: &[f64],
) -> Result<ScanResult> {
    if !params.admissible_bounded() {
        return Err(Error::invalid(format!(
            "the scans need d(1+alpha) > 1, got {}",
            params.p0
        )));
    }
    let (profile, domain, name) = match case {
        ScanCase::BoundedBelow => (
            make_u_delta(delta)?,
            DomainSpec::ball(params.d, DeltaModel::DistanceToOrigin)?,
            "u_delta",
        ),
        ScanCase::UnboundedAbove | ScanCase::UnboundedInfinity => {
            (make_v_delta(delta)?, DomainSpec::exterior(params.d)?, "v_delta")
        }
    };
    let f0 = center(&profile, &domain, quad)?;
    let outcomes = par_map(grid, |&x| {
        let p = case.exponent(params, x);
        if !(p >= 1.0) || !p.is_finite() {
            return Err(DroppedRow {
                p,
                reason: "exponent below 1".into(),
            });
        }
        match poincare_ratio_parts(&f0, &domain, params, p, quad) {
            Ok(parts) if parts.converged && parts.v > 0.0 && parts.v.is_finite() => Ok(ScanRow {
                p,
                eps: (p - params.p0).abs(),
                num_norm: parts.numerator,
                den_norm: parts.denominator,
                v: parts.v,
            }),
            Ok(parts) if !parts.converged => Err(DroppedRow {
                p,
                reason: "quadrature did not converge".into(),
            }),
            Ok(parts) => Err(DroppedRow {
                p,
                reason: format!("degenerate ratio {}", parts.v),
            }),
            Err(e) => Err(DroppedRow { p, reason: e.to_string() }),
        }
    });
    let mut rows = Vec::new();
    let mut dropped = Vec::new();
    for o in outcomes {
        match o {
            Ok(r) => rows.push(r),
            Err(d) => dropped.push(d),
        }
    }
    rows.sort_by(|a, b| a.p.total_cmp(&b.p));
    dropped.sort_by(|a, b| a.p.total_cmp(&b.p));
    if rows.len() < 2 {
        return Err(Error::Divergent(format!(
            "only {} usable rows in the scan; dropped: {:?}",
            rows.len(),
            dropped
        )));
    }
    let gaps: Vec<f64> = rows.iter().map(|r| params.gap(r.p).abs()).collect();
    let col = |f: fn(&ScanRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let fit = fit_log_log(&gaps, &col(|r| r.v))?;
    let numerator_fit = fit_log_log(&gaps, &col(|r| r.num_norm))?;
    let denominator_fit = fit_log_log(&gaps, &col(|r| r.den_norm))?;
    Ok(ScanResult {
        case,
        delta,
        params: *params,
        rows,
        fit,
        numerator_fit,
        denominator_fit,
        dropped,
        meta: ScanMeta {
            profile: name.into(),
            delta_model: domain.delta_model,
            quadrature: *quad,
            grid: grid.to_vec(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::psi::make_power_psi;
    use approx::assert_relative_eq;

    #[test]
    fn critical_exponents() {
        assert_eq!(critical_exponent(&PoincareParams::new(0.0, 3).unwrap()), 3.0);
        assert_eq!(critical_exponent(&PoincareParams::new(0.5, 2).unwrap()), 3.0);
        let low = PoincareParams::new(-0.5, 2).unwrap();
        assert_eq!(critical_exponent(&low), 1.0);
        assert!(!low.admissible_bounded());
        assert!(sharpness_scan(ScanCase::BoundedBelow, 2.0, &low, &QuadratureConfig::default(), &[0.1]).is_err());
    }

    #[test]
    fn constant_profile_has_zero_ratio() {
        let params = PoincareParams::new(0.0, 3).unwrap();
        let dom = DomainSpec::ball(3, DeltaModel::DistanceToOrigin).unwrap();
        let q = QuadratureConfig::default();
        let f0 = center(&RadialProfile::constant(&dom, 4.0), &dom, &q).unwrap();
        assert_eq!(poincare_ratio(&f0, &dom, &params, 2.0, &q).unwrap(), 0.0);
        let psi = make_power_psi(1.0, 3.0, 1.0, 1.0).unwrap();
        let grid = GridSpec::default().with_points(16);
        let rep = theorem1_verify(&RadialProfile::constant(&dom, 4.0), &dom, &params, &psi, &grid, &q).unwrap();
        assert_eq!(rep.estimated_c, 0.0);
        assert!(rep.grid_stable);
    }

    #[test]
    fn ratio_is_scale_invariant() {
        let params = PoincareParams::new(0.0, 2).unwrap();
        let dom = DomainSpec::ball(2, DeltaModel::DistanceToOrigin).unwrap();
        let q = QuadratureConfig::default();
        let u0 = center(&make_u_delta(2.0).unwrap(), &dom, &q).unwrap();
        let v1 = poincare_ratio(&u0, &dom, &params, 1.7, &q).unwrap();
        for c in [-3.0, 0.25, 17.0] {
            let vc = poincare_ratio(&u0.scaled(c), &dom, &params, 1.7, &q).unwrap();
            assert_relative_eq!(vc, v1, max_relative = 1e-10);
        }
    }

    #[test]
    fn pole_and_dimension_errors() {
        let params = PoincareParams::new(0.0, 2).unwrap();
        let dom = DomainSpec::ball(2, DeltaModel::DistanceToOrigin).unwrap();
        let q = QuadratureConfig::default();
        let u = make_u_delta(2.0).unwrap();
        assert!(matches!(poincare_ratio(&u, &dom, &params, 2.0, &q), Err(Error::Pole(_))));
        let dom3 = DomainSpec::ball(3, DeltaModel::DistanceToOrigin).unwrap();
        assert!(poincare_ratio(&u, &dom3, &params, 1.5, &q).is_err());
    }

    #[test]
    fn geometric_list_endpoints() {
        let e = default_epsilons();
        assert_eq!(e.len(), 12);
        assert_eq!(e[0], 0.3);
        assert_relative_eq!(e[11], 1e-3, max_relative = 1e-12);
        let p = default_infinity_exponents();
        assert_eq!(p[0], 10.0);
        assert_relative_eq!(p[11], 200.0, max_relative = 1e-12);
    }
}
