use bgls::poincare::{critical_exponent, geometric_list, sharpness_scan, ScanCase};
use bgls::psi::{make_power_psi, transform_alpha_d};
use bgls::quadrature::QuadratureConfig;
use bgls::radial::{make_u_delta, make_v_delta, PoincareParams};
use serde::Serialize;

pub const MAX_POINTS: usize = 2000;
pub const MAX_SCAN_ROWS: usize = 40;

#[derive(Debug, Serialize)]
pub struct Curve {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct PsiCurve {
    pub p: Vec<f64>,
    pub psi: Vec<f64>,
    pub transformed: Vec<f64>,
    pub p0: f64,
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

fn check_points(points: usize) -> Result<(), String> {
    if (2..=MAX_POINTS).contains(&points) {
        Ok(())
    } else {
        Err(format!("points must lie in 2..={MAX_POINTS}, got {points}"))
    }
}

fn finite_or_null(v: f64) -> f64 {
    if v.is_finite() { v } else { f64::NAN }
}

pub fn profile_curve(kind: &str, delta: f64, points: usize) -> Result<String, String> {
    check_points(points)?;
    let (profile, lo, hi) = match kind {
        "u" => (make_u_delta(delta).map_err(|e| e.to_string())?, 1e-3, 1.0),
        "v" => (make_v_delta(delta).map_err(|e| e.to_string())?, 1.0, 20.0),
        other => return Err(format!("unknown profile {other:?}, expected \"u\" or \"v\"")),
    };
    let step = (hi - lo) / (points - 1) as f64;
    let mut curve = Curve { x: Vec::with_capacity(points), y: Vec::with_capacity(points), dy: Vec::with_capacity(points) };
    for i in 0..points {
        let r = lo + step * i as f64;
        curve.x.push(r);
        curve.y.push(profile.value(r).map_err(|e| e.to_string())?);
        curve.dy.push(profile.derivative(r).map_err(|e| e.to_string())?);
    }
    to_json(&curve)
}

pub fn sharpness(case: &str, delta: f64, alpha: f64, d: usize, count: usize) -> Result<String, String> {
    if !(2..=MAX_SCAN_ROWS).contains(&count) {
        return Err(format!("count must lie in 2..={MAX_SCAN_ROWS}, got {count}"));
    }
    let params = PoincareParams::new(alpha, d).map_err(|e| e.to_string())?;
    let (case, grid) = match case {
        "bounded" => (ScanCase::BoundedBelow, geometric_list(0.3, 1e-3, count)),
        "above" => (ScanCase::UnboundedAbove, geometric_list(0.3, 1e-3, count)),
        "infinity" => (ScanCase::UnboundedInfinity, geometric_list(200.0, 10.0, count)),
        other => return Err(format!("unknown case {other:?}, expected bounded, above or infinity")),
    };
    let scan = sharpness_scan(case, delta, &params, &QuadratureConfig::default(), &grid).map_err(|e| e.to_string())?;
    to_json(&scan)
}

pub fn psi_curve(a: f64, b: f64, beta: f64, gamma: f64, alpha: f64, d: usize, points: usize) -> Result<String, String> {
    check_points(points)?;
    let psi = make_power_psi(a, b, beta, gamma).map_err(|e| e.to_string())?;
    let params = PoincareParams::new(alpha, d).map_err(|e| e.to_string())?;
    let t = transform_alpha_d(&psi, &params);
    let mut out = PsiCurve { p: Vec::new(), psi: Vec::new(), transformed: Vec::new(), p0: critical_exponent(&params) };
    // open interval, so the samples stay off both endpoints
    let step = (b - a) / (points + 1) as f64;
    for i in 1..=points {
        let p = a + step * i as f64;
        out.p.push(p);
        out.psi.push(finite_or_null(psi.value(p).map_err(|e| e.to_string())?));
        out.transformed.push(finite_or_null(t.value(p).map_err(|e| e.to_string())?));
    }
    to_json(&out)
}
