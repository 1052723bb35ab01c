use approx::assert_relative_eq;
use bgls::gamma_oracle::{core_integral, upper_incomplete_gamma};
use bgls::poincare::*;
use bgls::psi::*;
use bgls::quadrature::*;
use bgls::radial::*;
use bgls::weighted::*;
use proptest::prelude::*;
use std::f64::consts::E;

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        ..ProptestConfig::default()
    }
}

/// Log-power core on (0, 1/e], a bridge from it to the level `v1` at `r1`,
/// then that level out to the sphere.
fn core_profile(delta: f64, r1: f64, v1: f64, c: f64) -> RadialProfile {
    let a = 1.0 / E;
    let bridge = hermite_bridge(a, r1, 1.0, -E * delta, v1, 0.0).unwrap();
    RadialProfile::from_segments(vec![
        Segment {
            r_lo: 0.0,
            r_hi: a,
            kind: SegmentKind::LogPowerCore {
                exponent: delta,
                orientation: Orientation::Inner,
            },
        },
        Segment { r_lo: a, r_hi: r1, kind: SegmentKind::Bridge(bridge) },
        Segment { r_lo: r1, r_hi: 1.0, kind: SegmentKind::Constant(v1) },
    ])
    .unwrap()
    .scaled(c)
}

fn core_profiles() -> impl Strategy<Value = RadialProfile> {
    (1.1f64..3.0, 0.5f64..0.9, -2.0f64..2.0, prop_oneof![-5.0f64..-0.2, 0.2f64..5.0])
        .prop_map(|(delta, r1, v1, c)| core_profile(delta, r1, v1, c))
}

/// Level `c1` on [0, r1], a monotone bridge, level `c2` on [r2, 1].
fn step_profile(c1: f64, c2: f64, r1: f64, r2: f64) -> RadialProfile {
    let bridge = hermite_bridge(r1, r2, c1, 0.0, c2, 0.0).unwrap();
    RadialProfile::from_segments(vec![
        Segment { r_lo: 0.0, r_hi: r1, kind: SegmentKind::Constant(c1) },
        Segment { r_lo: r1, r_hi: r2, kind: SegmentKind::Bridge(bridge) },
        Segment { r_lo: r2, r_hi: 1.0, kind: SegmentKind::Constant(c2) },
    ])
    .unwrap()
}

fn quad() -> QuadratureConfig {
    QuadratureConfig::default()
}

proptest! {
    #![proptest_config(cfg(50))]

    #[test]
    fn norm_is_subadditive_over_disjoint_bands(f in core_profiles(), p in 1.0f64..6.0, d in 2usize..5, cut in 0.1f64..0.9) {
        let dom = DomainSpec::ball(d, DeltaModel::DistanceToOrigin).unwrap();
        let q = quad();
        let whole = lp_norm_weighted(&f, &dom, p, 0.0, &q).unwrap().value;
        let lo = lp_norm_on_subset(&f, &dom, p, 0.0, 0.0, cut, &q).unwrap().value;
        let hi = lp_norm_on_subset(&f, &dom, p, 0.0, cut, 1.0, &q).unwrap().value;
        prop_assert!(whole <= (lo + hi) * (1.0 + 1e-9));
        // the bands also recombine exactly in the p-th power
        prop_assert!(((lo.powf(p) + hi.powf(p)).powf(1.0 / p) / whole - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bounded_positive_norms_sit_between_level_bounds(
        c1 in 0.1f64..5.0, c2 in 0.1f64..5.0, r1 in 0.1f64..0.5, w in 0.05f64..0.45, d in 2usize..5,
    ) {
        let dom = DomainSpec::ball(d, DeltaModel::DistanceToOrigin).unwrap();
        let f = step_profile(c1, c2, r1, r1 + w);
        let (m, big_m) = (c1, c1.max(c2));
        // f ≥ m = c1 on the inner ball D₁ of radius r1
        let mu_d1 = dom.measure() * r1.powi(d as i32);
        for k in 0..11 {
            let p = 1.0 + 0.5 * k as f64;
            let n = lp_norm_weighted(&f, &dom, p, 0.0, &quad()).unwrap().value;
            prop_assert!(m * mu_d1.min(1.0) <= n * (1.0 + 1e-9), "p = {}", p);
            prop_assert!(n <= big_m * dom.measure().max(1.0) * (1.0 + 1e-9), "p = {}", p);
        }
    }

    #[test]
    fn holder_across_exponents(f in core_profiles(), p in 1.0f64..4.0, extra in 0.0f64..4.0, d in 2usize..5) {
        let dom = DomainSpec::ball(d, DeltaModel::DistanceToOrigin).unwrap();
        let qq = p + extra;
        let np = lp_norm_weighted(&f, &dom, p, 0.0, &quad()).unwrap().value;
        let nq = lp_norm_weighted(&f, &dom, qq, 0.0, &quad()).unwrap().value;
        prop_assert!(np <= nq * dom.measure().powf(1.0 / p - 1.0 / qq) * (1.0 + 1e-9));
    }

    #[test]
    fn norms_are_absolutely_homogeneous(f in core_profiles(), p in 1.0f64..6.0, c in -10.0f64..10.0) {
        prop_assume!(c.abs() > 1e-3);
        let dom = DomainSpec::ball(2, DeltaModel::DistanceToOrigin).unwrap();
        let n = lp_norm_weighted(&f, &dom, p, 0.0, &quad()).unwrap().value;
        let nc = lp_norm_weighted(&f.scaled(c), &dom, p, 0.0, &quad()).unwrap().value;
        prop_assert!((nc / (c.abs() * n) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ratio_is_positive_for_nonconstant_profiles(f in core_profiles(), p in 1.05f64..1.95) {
        let dom = DomainSpec::ball(2, DeltaModel::DistanceToOrigin).unwrap();
        let params = PoincareParams::new(0.0, 2).unwrap();
        let f0 = center(&f, &dom, &quad()).unwrap();
        let parts = poincare_ratio_parts(&f0, &dom, &params, p, &quad()).unwrap();
        prop_assert!(parts.converged);
        prop_assert!(parts.v > 0.0 && parts.v.is_finite());
    }
}

proptest! {
    #![proptest_config(cfg(100))]

    #[test]
    fn quadrature_matches_the_gamma_oracle(s in 0.05f64..5.0, m in 0.0f64..12.0) {
        let exact = core_integral(s, m).unwrap();
        let numeric = core_integral_by_quadrature(s, m, &quad()).unwrap();
        prop_assert!(numeric.converged);
        prop_assert!(((numeric.value - exact) / exact).abs() <= 1e-6);
    }

    #[test]
    fn incomplete_gamma_recurrence(m in 0.0f64..20.0, s in 0.01f64..30.0) {
        let g1 = upper_incomplete_gamma(m + 1.0, s).unwrap().value;
        let g2 = upper_incomplete_gamma(m + 2.0, s).unwrap().value;
        let rhs = (m + 1.0) * g1 + s.powf(m + 1.0) * (-s).exp();
        prop_assert!(((g2 - rhs) / g2).abs() <= 1e-10);
    }

    #[test]
    fn solve_h_residual(a in 1.0f64..5.0, beta in 0.05f64..3.0, gamma in -3.0f64..-0.05) {
        // the root sits near a + a^{γ/β}; skip roots that crowd a
        prop_assume!(a.powf(gamma / beta) > 1e-3 * beta * a);
        let h = solve_h(a, beta, gamma).unwrap();
        prop_assert!(h > a);
        let rhs = h.powf(-gamma);
        prop_assert!(((h - a).powf(-beta) - rhs).abs() <= 1e-12 * rhs);
    }

    #[test]
    fn derivative_matches_central_differences(delta in 1.2f64..3.0, r in 0.001f64..0.999, outer in any::<bool>()) {
        let (f, x) = if outer {
            (make_v_delta(delta).unwrap(), 1.0 + 20.0 * r)
        } else {
            (make_u_delta(delta).unwrap(), r)
        };
        let knots: Vec<f64> = f.segments().iter().map(|s| s.r_hi).collect();
        prop_assume!(knots.iter().all(|k| (k - x).abs() > 1e-4));
        let h = 1e-6;
        let fd = (f.value(x + h).unwrap() - f.value(x - h).unwrap()) / (2.0 * h);
        let exact = f.derivative(x).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-5 * exact.abs() + 1e-7, "{} vs {}", fd, exact);
    }

    #[test]
    fn bgls_norm_scales_with_its_inputs(c in 0.01f64..100.0, beta in 0.0f64..2.0, gamma in 0.0f64..2.0) {
        let psi = make_power_psi(1.0, 3.0, beta, gamma).unwrap();
        let grid = GridSpec::default().with_points(64);
        let lp = |p: f64| Ok((4.0 * std::f64::consts::PI / 3.0).powf(1.0 / p));
        let base = bgls_norm(lp, &psi, &grid).unwrap();
        let scaled = bgls_norm(|p| Ok(c * lp(p)?), &psi, &grid).unwrap();
        prop_assert!((scaled.value / (c * base.value) - 1.0).abs() < 1e-14);
        let against = bgls_norm(lp, &psi.scaled(c).unwrap(), &grid).unwrap();
        prop_assert!((against.value * c / base.value - 1.0).abs() < 1e-14);
        prop_assert_eq!(against.argmax_p, base.argmax_p);
    }
}

proptest! {
    #![proptest_config(cfg(1000))]

    #[test]
    fn transform_identity(
        a in 1.0f64..3.0, len in 0.5f64..5.0, beta in 0.0f64..2.0, gamma in 0.0f64..2.0,
        t in 0.001f64..0.999, alpha in -0.9f64..2.0, d in 2usize..6,
    ) {
        let psi = make_power_psi(a, a + len, beta, gamma).unwrap();
        let params = PoincareParams::new(alpha, d).unwrap();
        let p = a + t * len;
        prop_assume!(params.gap(p) != 0.0);
        let out = transform_alpha_d(&psi, &params).value(p).unwrap();
        let lhs = out * params.gap(p).abs();
        let rhs = p * psi.value(p).unwrap();
        prop_assert!((lhs / rhs - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn log_plus_is_at_least_one(lz in -50.0f64..50.0) {
        let z = lz.exp();
        let v = log_plus(z);
        prop_assert!(v >= 1.0);
        prop_assert_eq!(v == z.ln().abs(), z.ln().abs() >= 1.0);
    }

    #[test]
    fn pq_exponent_lies_in_minus_one_zero(p in 1.0f64..20.0, alpha in -0.9f64..3.0, extra in 1e-6f64..100.0) {
        let pa = p * (1.0 + alpha);
        prop_assume!(pa > 1.0);
        let e = pq_exponent(p, pa + extra, alpha).unwrap();
        prop_assert!(e > -1.0 && e < 0.0);
    }
}

proptest! {
    #![proptest_config(cfg(30))]

    #[test]
    fn nu_is_monotone_in_psi(beta in 0.0f64..2.0, gamma in 0.0f64..2.0, q in 1.2f64..2.8, bump in 0.0f64..3.0) {
        let iv = ExponentInterval::new(1.0, 3.0).unwrap();
        let psi1 = make_power_psi(1.0, 3.0, beta, gamma).unwrap();
        let inner = psi1.clone();
        let psi2 = PsiFunction::custom(iv, move |p| inner.value(p).unwrap() + bump * (p - 1.0)).unwrap();
        let n1 = nu_transform(&psi1, 0.0, q, NU_GRID_POINTS).unwrap();
        let n2 = nu_transform(&psi2, 0.0, q, NU_GRID_POINTS).unwrap();
        prop_assert!(n1.value <= n2.value * (1.0 + 1e-9));
    }
}

#[test]
fn core_integral_monotone_in_s_and_m() {
    let ss = [0.05, 0.1, 0.3, 1.0, 2.0, 5.0];
    let ms = [0.0, 1.0, 2.5, 6.0, 12.0];
    for &m in &ms {
        for w in ss.windows(2) {
            assert!(core_integral(w[1], m).unwrap() < core_integral(w[0], m).unwrap());
        }
    }
    for &s in &ss {
        for w in ms.windows(2) {
            assert!(core_integral(s, w[1]).unwrap() > core_integral(s, w[0]).unwrap());
        }
    }
}

#[test]
fn narrow_interval_recovers_the_plain_norm() {
    let dom = DomainSpec::ball(2, DeltaModel::DistanceToOrigin).unwrap();
    let u = make_u_delta(2.0).unwrap();
    let lp = |p: f64| Ok(lp_norm_weighted(&u, &dom, p, 0.0, &quad())?.value);
    let r = 2.5;
    let target = lp(r).unwrap();
    let mut prev = f64::INFINITY;
    for eps in [0.1, 0.01] {
        let psi = make_power_psi(r - eps, r + eps, 0.0, 0.0).unwrap();
        let n = bgls_norm(lp, &psi, &GridSpec::default().with_points(64)).unwrap();
        let err = (n.value - target).abs();
        assert!(n.value >= target * (1.0 - 1e-12));
        assert!(err < prev);
        prev = err;
    }
    assert!(prev / target < 0.05);
}

#[test]
fn power_tail_is_continuous_at_h() {
    for (a, beta, gamma) in [(1.0, 1.0, -1.0), (2.0, 2.0, -2.0), (1.5, 0.3, -0.7)] {
        let psi = make_tail_psi(a, beta, gamma).unwrap();
        let h = solve_h(a, beta, gamma).unwrap();
        let below = (h - a).powf(-beta);
        let above = h.powf(gamma.abs());
        assert_relative_eq!(below, above, max_relative = 1e-12);
        assert_relative_eq!(psi.value(h).unwrap(), above, max_relative = 1e-12);
    }
}

#[test]
fn scan_does_not_depend_on_grid_order() {
    let params = PoincareParams::new(0.0, 2).unwrap();
    let eps = default_epsilons();
    let mut rev = eps.clone();
    rev.reverse();
    let a = sharpness_scan(ScanCase::BoundedBelow, 2.0, &params, &quad(), &eps).unwrap();
    let b = sharpness_scan(ScanCase::BoundedBelow, 2.0, &params, &quad(), &rev).unwrap();
    assert_eq!(a.rows, b.rows);
    assert_eq!(a.fit, b.fit);
}

#[test]
fn knots_stay_c1_for_all_profiles() {
    for delta in [1.5, 2.0, 3.0] {
        for f in [make_u_delta(delta).unwrap(), make_v_delta(delta).unwrap()] {
            let (dv, dd) = f.knot_mismatch();
            assert!(dv <= 1e-10 && dd <= 1e-10);
        }
    }
}
