//! The ten acceptance criteria, one line of output each.
//!
//! The report goes straight to the stderr handle, so it shows even when the
//! test harness captures output.

use assert_cmd::Command;
use bgls::poincare::*;
use bgls::psi::*;
use bgls::quadrature::*;
use bgls::radial::*;
use bgls::weighted::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::io::Write;
use std::path::Path;
use std::time::Instant;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn params2() -> PoincareParams {
    PoincareParams::new(0.0, 2).unwrap()
}

fn bounded_scan() -> Result<ScanResult, String> {
    sharpness_scan(ScanCase::BoundedBelow, 2.0, &params2(), &QuadratureConfig::default(), &default_epsilons()).map_err(err)
}

fn oracle_equivalence() -> Outcome {
    let sweep = oracle_sweep(&default_oracle_grid(), &QuadratureConfig::default()).map_err(err)?;
    let all_converged = sweep.rows.iter().all(|r| r.converged);
    check(
        sweep.rows.len() == 48 && all_converged && sweep.max_rel_err <= 1e-6,
        format!("{} points, max relative error {:.3e} (limit 1e-6)", sweep.rows.len(), sweep.max_rel_err),
    )
}

fn gradient_exponent() -> Outcome {
    let scan = bounded_scan()?;
    let slope = scan.denominator_fit.slope;
    check((slope + 1.5).abs() <= 0.1, format!("slope {slope:.4} (target -1.5 ± 0.1)"))
}

fn centered_exponent() -> Outcome {
    let scan = bounded_scan()?;
    let slope = scan.numerator_fit.slope;
    check((slope + 2.5).abs() <= 0.1, format!("slope {slope:.4} (target -2.5 ± 0.1)"))
}

fn bounded_ratio() -> Outcome {
    let scan = bounded_scan()?;
    let (slope, min_v) = (scan.fit.slope, scan.min_v());
    check(
        scan.rows.len() == 12 && slope.abs() <= 0.15 && min_v >= 0.01,
        format!("{} rows, V slope {slope:.4} (0 ± 0.15), min V {min_v:.4} (≥ 0.01)", scan.rows.len()),
    )
}

fn unbounded_ratio() -> Outcome {
    let q = QuadratureConfig::default();
    let near = sharpness_scan(ScanCase::UnboundedAbove, 2.0, &params2(), &q, &default_epsilons()).map_err(err)?;
    let far = sharpness_scan(ScanCase::UnboundedInfinity, 2.0, &params2(), &q, &default_infinity_exponents()).map_err(err)?;
    let (slope, spread) = (near.fit.slope, far.v_spread());
    check(
        near.rows.len() == 12 && far.rows.len() == 12 && slope.abs() <= 0.15 && spread <= 3.0,
        format!("V slope near p0 {slope:.4} (0 ± 0.15), max/min V on [10, 200] {spread:.4} (≤ 3)"),
    )
}

fn operator_norm() -> Outcome {
    let q = QuadratureConfig::default();
    let ball = DomainSpec::ball(2, DeltaModel::DistanceToOrigin).map_err(err)?;
    let u = make_u_delta(2.0).map_err(err)?;
    let psi = make_power_psi(1.0, 2.0, 1.0, 1.0).map_err(err)?;
    let grid = GridSpec::default();
    let rep = theorem1_verify(&u, &ball, &params2(), &psi, &grid, &q).map_err(err)?;
    let rescaled = theorem1_verify(&u, &ball, &params2(), &psi.scaled(37.5).map_err(err)?, &grid, &q).map_err(err)?;
    let identical = format!("{rep:?}") == format!("{rescaled:?}");
    let change = (rep.doubled_c / rep.estimated_c - 1.0).abs();
    check(
        rep.estimated_c.is_finite() && rep.grid_stable && change < 0.05 && identical,
        format!(
            "C = {:.6} at p = {:.4}, doubled-grid change {:.2e} (< 5%), rescaled psi identical: {identical}",
            rep.estimated_c, rep.argmax_p, change
        ),
    )
}

/// Two levels joined by a monotone bridge.
fn random_step(rng: &mut ChaCha8Rng) -> (RadialProfile, f64, f64, f64) {
    let c1 = rng.gen_range(0.1..5.0);
    let c2 = rng.gen_range(0.1..5.0);
    let r1 = rng.gen_range(0.1..0.5);
    let r2 = r1 + rng.gen_range(0.05..0.45);
    let bridge = hermite_bridge(r1, r2, c1, 0.0, c2, 0.0).unwrap();
    let f = RadialProfile::from_segments(vec![
        Segment { r_lo: 0.0, r_hi: r1, kind: SegmentKind::Constant(c1) },
        Segment { r_lo: r1, r_hi: r2, kind: SegmentKind::Bridge(bridge) },
        Segment { r_lo: r2, r_hi: 1.0, kind: SegmentKind::Constant(c2) },
    ])
    .unwrap();
    (f, c1, c2, r1)
}

fn norm_lemmas() -> Outcome {
    let q = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_b915);
    let mut failures = Vec::new();
    let mut checks = 0;
    for case in 0..50 {
        let d = rng.gen_range(2..5usize);
        let dom = DomainSpec::ball(d, DeltaModel::DistanceToOrigin).map_err(err)?;
        let (f, c1, c2, r1) = random_step(&mut rng);
        let p = rng.gen_range(1.0..6.0);
        let cut = rng.gen_range(0.1..0.9);
        let whole = lp_norm_weighted(&f, &dom, p, 0.0, &q).map_err(err)?.value;
        let lo = lp_norm_on_subset(&f, &dom, p, 0.0, 0.0, cut, &q).map_err(err)?.value;
        let hi = lp_norm_on_subset(&f, &dom, p, 0.0, cut, 1.0, &q).map_err(err)?.value;
        checks += 1;
        if whole > (lo + hi) * (1.0 + 1e-9) {
            failures.push(format!("case {case}: subadditivity at p = {p}"));
        }
        let (m, big_m) = (c1, c1.max(c2));
        let mu_d1 = dom.measure() * r1.powi(d as i32);
        checks += 2;
        if m * mu_d1.min(1.0) > whole * (1.0 + 1e-9) {
            failures.push(format!("case {case}: lower bound at p = {p}"));
        }
        if whole > big_m * dom.measure().max(1.0) * (1.0 + 1e-9) {
            failures.push(format!("case {case}: upper bound at p = {p}"));
        }
    }
    check(
        failures.is_empty(),
        format!("50 seeded profiles, {checks} inequalities, {} violations {failures:?}", failures.len()),
    )
}

fn closed_forms() -> Outcome {
    let h = solve_h(1.0, 1.0, -1.0).map_err(err)?;
    let golden = (1.0 + 5f64.sqrt()) / 2.0;
    let one = PsiFunction::constant(ExponentInterval::new(1.0, f64::INFINITY).map_err(err)?, 1.0).map_err(err)?;
    let nu = nu_transform(&one, 0.0, 2.0, NU_GRID_POINTS).map_err(err)?.value;
    check(
        (h - golden).abs() <= 1e-10 && (nu - 1.0).abs() <= 1e-6,
        format!("h - golden ratio = {:.1e}, nu(2) - 1 = {:.1e}", h - golden, nu - 1.0),
    )
}

fn log_weights() -> Outcome {
    let q = QuadratureConfig::default();
    let ball = DomainSpec::ball(2, DeltaModel::DistanceToOrigin).map_err(err)?;
    let ps: Vec<f64> = default_epsilons().iter().map(|e| 2.0 - e).collect();
    let u = make_u_delta(2.0).map_err(err)?;
    let scan = log_weight_scan(&u, &ball, &params2(), &ps, 1.0, 0.5, SlowVarying::Log1p, &q).map_err(err)?;
    let spots = [
        pq_exponent(1.0, 2.0, 0.0).map_err(err)?,
        pq_exponent(1.0, 4.0, 1.0).map_err(err)?,
        pq_exponent(2.0, 5.0, 0.0).map_err(err)?,
    ];
    let slope = scan.fit.slope;
    check(
        slope.abs() <= 0.2 && spots == [-0.5, -0.75, -0.7],
        format!("log-weight slope {slope:.4} (0 ± 0.2), pq exponents {spots:?}"),
    )
}

fn cli_determinism() -> Outcome {
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases: [(&str, &[&str]); 3] = [
        ("sharpness.csv", &["sharpness"]),
        ("sharpness.json", &["sharpness", "--case", "unbounded-infinity", "--format", "json"]),
        ("theorem1.json", &["theorem1", "--grid-points", "32", "--format", "json"]),
    ];
    let mut runs = 0;
    for (file, args) in cases {
        let expected = std::fs::read(golden.join(file)).map_err(err)?;
        for threads in ["1", "1", "4", "4"] {
            let out = Command::cargo_bin("bgls").map_err(err)?.arg("--threads").arg(threads).args(args).output().map_err(err)?;
            runs += 1;
            if !out.status.success() || out.stdout != expected {
                return Err(format!("{file} differs with {threads} threads"));
            }
        }
    }
    Ok(format!("{runs} runs over 3 golden files, byte-identical at 1 and 4 threads"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("oracle equivalence", oracle_equivalence),
        ("gradient exponent", gradient_exponent),
        ("centered exponent", centered_exponent),
        ("bounded V", bounded_ratio),
        ("unbounded V", unbounded_ratio),
        ("operator norm", operator_norm),
        ("norm lemmas", norm_lemmas),
        ("closed forms", closed_forms),
        ("log weights", log_weights),
        ("cli determinism", cli_determinism),
    ];
    let mut failed = Vec::new();
    let mut report = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match &outcome {
            Ok(detail) => writeln!(report, "[PASS] {:>2} {name}: {detail} ({secs:.2}s)", i + 1).unwrap(),
            Err(detail) => {
                writeln!(report, "[FAIL] {:>2} {name}: {detail} ({secs:.2}s)", i + 1).unwrap();
                failed.push(i + 1);
            }
        }
    }
    std::io::stderr().write_all(&report).unwrap();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
