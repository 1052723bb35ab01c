use bgls::poincare::{geometric_list, sharpness_scan, theorem1_verify, ScanCase};
use bgls::psi::{make_power_psi, make_tail_psi, ExponentInterval, GridSpec, PsiFunction};
use bgls::quadrature::{lp_norm, oracle_sweep, NormSpec, QuadratureConfig};
use bgls::radial::{
    center, make_u_delta, make_v_delta, DeltaModel, DomainShape, DomainSpec, PoincareParams, Quantity, RadialProfile,
};
use bgls::weighted::nu_transform;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::*;
use crate::error::{CliError, CliResult};
use crate::plot::{Plot, Series};

/// Everything a command produces.
pub struct Output {
    pub result: Value,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
    pub footer: Vec<(&'static str, String)>,
    pub plot: Plot,
    /// Set when the run completed but a checked property failed.
    pub failure: Option<CliError>,
}

pub fn run(cmd: &Command) -> CliResult<Output> {
    match cmd {
        Command::Norm(a) => norm(a),
        Command::Sharpness(a) => sharpness(a),
        Command::Theorem1(a) => theorem1(a),
        Command::Nu(a) => nu(a),
        Command::OracleCheck(a) => oracle(a),
    }
}

fn to_value<T: Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Internal(format!("serialization: {e}")))
}

fn quad(c: &CommonArgs) -> CliResult<QuadratureConfig> {
    let q = QuadratureConfig {
        rel_tol: c.rel_tol,
        abs_tol: c.abs_tol,
        max_depth: c.max_depth,
        tail_cap: c.tail_cap,
    };
    q.validate()?;
    Ok(q)
}

fn params(c: &CommonArgs) -> CliResult<PoincareParams> {
    Ok(PoincareParams::new(c.alpha, c.d)?)
}

fn domain(c: &CommonArgs, profile: ProfileArg) -> CliResult<DomainSpec> {
    let shape = match (c.domain, profile) {
        (Some(DomainArg::Ball), _) => DomainShape::UnitBall,
        (Some(DomainArg::Exterior), _) => DomainShape::ExteriorUnitBall,
        (None, ProfileArg::VDelta) => DomainShape::ExteriorUnitBall,
        (None, _) => DomainShape::UnitBall,
    };
    let model = match c.delta_model {
        DeltaModelArg::Origin => DeltaModel::DistanceToOrigin,
        DeltaModelArg::Boundary => DeltaModel::DistanceToBoundary,
    };
    if shape == DomainShape::ExteriorUnitBall && model == DeltaModel::DistanceToBoundary {
        return Err(CliError::Config("the exterior domain uses delta(x) = |x|; drop --delta-model boundary".into()));
    }
    Ok(DomainSpec::new(shape, c.d, model)?)
}

fn profile(kind: ProfileArg, c: f64, delta: f64, dom: &DomainSpec, core_only: bool) -> CliResult<RadialProfile> {
    let f = match kind {
        ProfileArg::Const => {
            if !c.is_finite() {
                return Err(CliError::Config(format!("--c must be finite, got {c}")));
            }
            RadialProfile::constant(dom, c)
        }
        ProfileArg::UDelta => {
            if !dom.is_bounded() {
                return Err(CliError::Config("u-delta lives on the unit ball".into()));
            }
            make_u_delta(delta)?
        }
        ProfileArg::VDelta => {
            if dom.is_bounded() {
                return Err(CliError::Config("v-delta lives on the exterior domain".into()));
            }
            make_v_delta(delta)?
        }
    };
    Ok(if core_only { f.core_only() } else { f })
}

fn psi(a: &PsiArgs, default: PsiKind, p0: f64) -> CliResult<PsiFunction> {
    let kind = a.psi.unwrap_or(default);
    let psi = match kind {
        PsiKind::One => PsiFunction::constant(ExponentInterval::new(a.psi_a, a.psi_b.unwrap_or(f64::INFINITY))?, 1.0)?,
        PsiKind::Power => make_power_psi(a.psi_a, a.psi_b.unwrap_or(p0), a.beta, a.gamma)?,
        PsiKind::Tail => {
            if a.psi_b.is_some() {
                return Err(CliError::Config("the tail family lives on (a, inf); drop --psi-b".into()));
            }
            make_tail_psi(a.psi_a, a.beta, a.gamma)?
        }
    };
    Ok(psi.scaled(a.psi_scale)?)
}

fn check_count(count: usize) -> CliResult<()> {
    if count < 2 {
        return Err(CliError::Config(format!("--count must be at least 2, got {count}")));
    }
    Ok(())
}

fn p_grid(g: &PGridArgs, p0: f64) -> CliResult<Vec<f64>> {
    if !g.p.is_empty() {
        return Ok(g.p.clone());
    }
    check_count(g.count)?;
    let (lo, hi) = (g.p_min, g.p_max);
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(CliError::Config(format!("need finite --p-min < --p-max, got {lo} and {hi}")));
    }
    let n = g.count;
    let mut ps: Vec<f64> = match g.spacing {
        Spacing::Linear => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
        Spacing::Geometric => geometric_list(lo, hi, n),
        Spacing::GeometricToP0 => {
            let (e_lo, e_hi) = ((lo - p0).abs(), (hi - p0).abs());
            let side = if hi <= p0 {
                -1.0
            } else if lo >= p0 {
                1.0
            } else {
                return Err(CliError::Config(format!("the p-range [{lo}, {hi}] straddles p0 = {p0}")));
            };
            if e_lo == 0.0 || e_hi == 0.0 {
                return Err(CliError::Config("a geometric grid cannot touch p0".into()));
            }
            geometric_list(e_lo, e_hi, n).into_iter().map(|e| p0 + side * e).collect()
        }
    };
    ps.sort_by(f64::total_cmp);
    Ok(ps)
}

fn norm(a: &NormArgs) -> CliResult<Output> {
    let c = &a.common;
    let q = quad(c)?;
    let pr = params(c)?;
    let dom = domain(c, a.f)?;
    let mut f = profile(a.f, a.c, c.delta, &dom, a.core_only)?;
    if a.center {
        f = center(&f, &dom, &q)?;
    }
    let psi = psi(&a.psi, PsiKind::One, pr.p0)?;
    let ps = p_grid(&a.grid, pr.p0)?;
    let quantity = match a.quantity {
        QuantityArg::Value => Quantity::Value,
        QuantityArg::Gradient => Quantity::Gradient,
    };
    let rows = ps
        .par_iter()
        .map(|&p| -> CliResult<(f64, f64, f64, bool)> {
            let n = lp_norm(&f, &dom, &NormSpec::new(quantity, p, a.weight_exp), &q)?;
            let w = psi.value(p)?;
            Ok((p, n.value, w, n.converged))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let ratios: Vec<f64> = rows.iter().map(|r| r.1 / r.2).collect();
    let (mut best, mut arg) = (f64::NEG_INFINITY, f64::NAN);
    for (r, &ratio) in rows.iter().zip(&ratios) {
        if ratio > best {
            best = ratio;
            arg = r.0;
        }
    }
    let result = json!({
        "rows": rows.iter().zip(&ratios).map(|(r, &ratio)| json!({
            "p": r.0, "norm": r.1, "psi": r.2, "ratio": ratio, "converged": r.3,
        })).collect::<Vec<_>>(),
        "bgls_norm": best,
        "argmax_p": arg,
    });
    Ok(Output {
        result,
        header: vec!["p", "norm", "psi", "ratio"],
        rows: rows.iter().zip(&ratios).map(|(r, &ratio)| vec![r.0, r.1, r.2, ratio]).collect(),
        footer: vec![("bgls_norm", num(best)), ("argmax_p", num(arg))],
        plot: Plot {
            title: "weighted L_p norm".into(),
            x_label: "p".into(),
            y_label: "norm".into(),
            log_x: false,
            log_y: true,
            series: vec![
                Series { name: "|f|_p".into(), points: rows.iter().map(|r| (r.0, r.1)).collect() },
                Series { name: "ratio".into(), points: rows.iter().zip(&ratios).map(|(r, &x)| (r.0, x)).collect() },
            ],
        },
        failure: None,
    })
}

fn sharpness(a: &SharpnessArgs) -> CliResult<Output> {
    let c = &a.common;
    let q = quad(c)?;
    let pr = params(c)?;
    if c.delta_model != DeltaModelArg::Origin {
        return Err(CliError::Config("sharpness scans use delta(x) = |x|".into()));
    }
    check_count(a.count)?;
    let (case, grid, expected_domain) = match a.case {
        CaseArg::BoundedBelow => (ScanCase::BoundedBelow, eps_grid(a)?, DomainArg::Ball),
        CaseArg::UnboundedAbove => (ScanCase::UnboundedAbove, eps_grid(a)?, DomainArg::Exterior),
        CaseArg::UnboundedInfinity => {
            if !(a.p_min >= 1.0 && a.p_min < a.p_max && a.p_max.is_finite()) {
                return Err(CliError::Config(format!("need 1 <= --p-min < --p-max, got {} and {}", a.p_min, a.p_max)));
            }
            (ScanCase::UnboundedInfinity, geometric_list(a.p_min, a.p_max, a.count), DomainArg::Exterior)
        }
    };
    if let Some(d) = c.domain {
        if d != expected_domain {
            return Err(CliError::Config(format!("case {:?} runs on the {:?} domain", a.case, expected_domain)));
        }
    }
    let scan = sharpness_scan(case, c.delta, &pr, &q, &grid)?;
    let fit = match a.report {
        ReportArg::Slope => scan.fit,
        ReportArg::NumeratorSlope => scan.numerator_fit,
        ReportArg::DenominatorSlope => scan.denominator_fit,
    };
    let mut result = to_value(&scan)?;
    result["report"] = to_value(&a.report)?;
    result["reported_fit"] = to_value(&fit)?;
    let infinity = case == ScanCase::UnboundedInfinity;
    let x = |r: &bgls::poincare::ScanRow| if infinity { r.p } else { r.eps };
    Ok(Output {
        result,
        header: vec!["p", "eps", "num_norm", "den_norm", "V"],
        rows: scan.rows.iter().map(|r| vec![r.p, r.eps, r.num_norm, r.den_norm, r.v]).collect(),
        footer: vec![("slope", num(fit.slope)), ("residual", num(fit.residual))],
        plot: Plot {
            title: format!("V(f, p), {:?}", a.case),
            x_label: if infinity { "p".into() } else { "|p - p0|".into() },
            y_label: "value".into(),
            log_x: true,
            log_y: true,
            series: vec![
                Series { name: "V".into(), points: scan.rows.iter().map(|r| (x(r), r.v)).collect() },
                Series { name: "numerator".into(), points: scan.rows.iter().map(|r| (x(r), r.num_norm)).collect() },
                Series { name: "gradient".into(), points: scan.rows.iter().map(|r| (x(r), r.den_norm)).collect() },
            ],
        },
        failure: None,
    })
}

fn eps_grid(a: &SharpnessArgs) -> CliResult<Vec<f64>> {
    if !(a.eps_min > 0.0 && a.eps_min < a.eps_max && a.eps_max.is_finite()) {
        return Err(CliError::Config(format!("need 0 < --eps-min < --eps-max, got {} and {}", a.eps_min, a.eps_max)));
    }
    Ok(geometric_list(a.eps_max, a.eps_min, a.count))
}

fn theorem1(a: &Theorem1Args) -> CliResult<Output> {
    let c = &a.common;
    let q = quad(c)?;
    let pr = params(c)?;
    let dom = domain(c, a.f)?;
    let f = profile(a.f, a.c, c.delta, &dom, false)?;
    let psi = psi(&a.psi, PsiKind::Power, pr.p0)?;
    let rep = theorem1_verify(&f, &dom, &pr, &psi, &GridSpec::default().with_points(a.grid_points), &q)?;
    Ok(Output {
        result: to_value(&rep)?,
        header: vec!["p", "ratio"],
        rows: rep.rows.iter().map(|&(p, r)| vec![p, r]).collect(),
        footer: vec![
            ("estimated_c", num(rep.estimated_c)),
            ("argmax_p", num(rep.argmax_p)),
            ("doubled_c", num(rep.doubled_c)),
            ("grid_stable", rep.grid_stable.to_string()),
        ],
        plot: Plot {
            title: "per-p ratio".into(),
            x_label: "p".into(),
            y_label: "ratio".into(),
            log_x: false,
            log_y: false,
            series: vec![Series { name: "ratio".into(), points: rep.rows.clone() }],
        },
        failure: None,
    })
}

fn nu(a: &NuArgs) -> CliResult<Output> {
    let c = &a.common;
    let pr = params(c)?;
    let psi = psi(&a.psi, PsiKind::One, pr.p0)?;
    let qs = if !a.q.is_empty() {
        a.q.clone()
    } else {
        check_count(a.count)?;
        if a.q_min.partial_cmp(&a.q_max) != Some(std::cmp::Ordering::Less) {
            return Err(CliError::Config(format!("need --q-min < --q-max, got {} and {}", a.q_min, a.q_max)));
        }
        (0..a.count)
            .map(|i| a.q_min + (a.q_max - a.q_min) * i as f64 / (a.count - 1) as f64)
            .collect()
    };
    let rows = qs
        .iter()
        .map(|&q| Ok(nu_transform(&psi, c.alpha, q, a.grid_points)?))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Output {
        result: json!({ "rows": to_value(&rows)? }),
        header: vec!["q", "nu", "argmin_p"],
        rows: rows.iter().map(|r| vec![r.q, r.value, r.argmin_p]).collect(),
        footer: vec![],
        plot: Plot {
            title: "nu(q)".into(),
            x_label: "q".into(),
            y_label: "nu".into(),
            log_x: false,
            log_y: true,
            series: vec![Series { name: "nu".into(), points: rows.iter().map(|r| (r.q, r.value)).collect() }],
        },
        failure: None,
    })
}

fn oracle(a: &OracleArgs) -> CliResult<Output> {
    let q = quad(&a.common)?;
    if a.s_count < 2 || a.m_count < 2 {
        return Err(CliError::Config("--s-count and --m-count must be at least 2".into()));
    }
    if !(a.s_min > 0.0 && a.s_min < a.s_max) || a.m_max.is_nan() || a.m_max <= 0.0 {
        return Err(CliError::Config("need 0 < --s-min < --s-max and --m-max > 0".into()));
    }
    let mut grid = Vec::new();
    for s in geometric_list(a.s_min, a.s_max, a.s_count) {
        for j in 0..a.m_count {
            grid.push((s, a.m_max * j as f64 / (a.m_count - 1) as f64));
        }
    }
    let sweep = oracle_sweep(&grid, &q)?;
    let failure = (sweep.max_rel_err > a.tolerance || sweep.rows.iter().any(|r| !r.converged)).then(|| {
        CliError::Internal(format!(
            "quadrature disagrees with the closed form: max relative error {:e} > {:e}",
            sweep.max_rel_err, a.tolerance
        ))
    });
    let mut result = to_value(&sweep)?;
    result["tolerance"] = json!(a.tolerance);
    result["passed"] = json!(failure.is_none());
    Ok(Output {
        result,
        header: vec!["s", "m", "oracle", "quadrature", "rel_err"],
        rows: sweep.rows.iter().map(|r| vec![r.s, r.m, r.oracle, r.quadrature, r.rel_err]).collect(),
        footer: vec![("max_rel_err", num(sweep.max_rel_err))],
        plot: Plot {
            title: "quadrature vs closed form".into(),
            x_label: "s".into(),
            y_label: "relative error".into(),
            log_x: true,
            log_y: true,
            series: vec![Series {
                name: "rel_err".into(),
                points: sweep.rows.iter().map(|r| (r.s, r.rel_err.max(1e-17))).collect(),
            }],
        },
        failure,
    })
}

/// Shortest representation that parses back to the same `f64`.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}
