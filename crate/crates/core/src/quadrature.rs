//! Weighted L_p norms of radial profiles by radial reduction.
//!
//! Everything is integrated in log scale: an integrand is supplied as
//! `(ln |g(t)|, sign g(t))`, each piece is rescaled by its own peak before the
//! Gauss–Kronrod rule runs, and pieces are merged with a log-sum-exp. This keeps
//! `|f|_p^p` representable for p in the hundreds and for log-power cores whose
//! mass sits at `y = −ln r` in the millions.
//!
//! Log-power cores are integrated in `y = ∓ln r`, where they become
//! `y^m e^{−s y}`. Ends at `r = 0`, `r = ∞` and (for the boundary distance)
//! `r = 1` are swept with pieces of doubling width until the contributions
//! die out; a sweep that never dies out reports divergence.

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma_oracle::ln_gamma_unchecked;
use crate::radial::{DeltaModel, DomainSpec, Orientation, Quantity, RadialProfile, Segment, SegmentKind};
use crate::weighted::WeightSpec;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    /// Absolute floor, relative to the integral of `|integrand|` on each piece.
    pub abs_tol: f64,
    /// Maximum bisection depth of a single piece.
    pub max_depth: usize,
    /// Optional outer radius at which exterior integrals are truncated.
    pub tail_cap: Option<f64>,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            rel_tol: 1e-9,
            abs_tol: 1e-12,
            max_depth: 60,
            tail_cap: None,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol > 0.0) {
            return Err(Error::invalid("quadrature tolerances must be positive"));
        }
        if self.max_depth < 10 {
            return Err(Error::invalid("quadrature max_depth must be at least 10"));
        }
        if let Some(cap) = self.tail_cap {
            if !(cap > 1.0) {
                return Err(Error::invalid("tail_cap must exceed 1"));
            }
        }
        Ok(())
    }

    /// Same settings with both tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        QuadratureConfig {
            rel_tol: self.rel_tol / factor,
            abs_tol: self.abs_tol / factor,
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: f64,
    pub est_abs_error: f64,
    pub converged: bool,
}

/// A signed integral `∫_D g dx`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub est_abs_error: f64,
    pub converged: bool,
}

/// Surface area of the unit sphere in R^d, `2π^{d/2} / Γ(d/2)`.
pub fn sphere_surface(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::invalid("sphere_surface needs d >= 1"));
    }
    Ok(sphere_surface_unchecked(d))
}

pub(crate) fn sphere_surface_unchecked(d: usize) -> f64 {
    ln_sphere_surface(d).exp()
}

fn ln_sphere_surface(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    std::f64::consts::LN_2 + h * std::f64::consts::PI.ln() - ln_gamma_unchecked(h)
}

// --- Gauss–Kronrod 7/15 ---------------------------------------------------

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Rule {
    value: f64,
    abs_value: f64,
    err: f64,
}

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> Rule {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    let mut abs_k = fc.abs() * WGK[7];
    let mut fv = [0.0f64; 14];
    for j in 0..7 {
        let x = h * XGK[j];
        let (f1, f2) = (f(c - x), f(c + x));
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kron += WGK[j] * (f1 + f2);
        abs_k += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = kron * 0.5;
    let mut asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        asc += WGK[j] * ((fv[2 * j] - mean).abs() + (fv[2 * j + 1] - mean).abs());
    }
    let hk = h.abs();
    let asc = asc * hk;
    let mut err = ((kron - gauss) * h).abs();
    if asc != 0.0 && err != 0.0 {
        err = asc * (200.0 * err / asc).powf(1.5).min(1.0);
    }
    let abs_value = abs_k * hk;
    if abs_value > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * abs_value);
    }
    Rule {
        value: kron * h,
        abs_value,
        err,
    }
}

#[derive(Debug, Clone, Copy)]
struct Cell15 {
    a: f64,
    b: f64,
    depth: usize,
    rule: Rule,
}

impl PartialEq for Cell15 {
    fn eq(&self, other: &Self) -> bool {
        self.rule.err == other.rule.err
    }
}
impl Eq for Cell15 {}
impl PartialOrd for Cell15 {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Cell15 {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rule.err.total_cmp(&other.rule.err)
    }
}

const MAX_CELLS: usize = 20_000;

/// Globally adaptive GK15 on a finite interval.
fn adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Rule2 {
    let first = gk15(f, a, b);
    let mut heap = BinaryHeap::new();
    let (mut value, mut abs_value, mut err) = (first.value, first.abs_value, first.err);
    heap.push(Cell15 { a, b, depth: 0, rule: first });
    loop {
        let tol = (cfg.rel_tol * value.abs()).max(cfg.abs_tol * abs_value);
        if err <= tol || !err.is_finite() && !value.is_finite() {
            return Rule2 {
                value,
                abs_value,
                err,
                converged: err.is_finite() && err <= tol,
            };
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= cfg.max_depth || heap.len() >= MAX_CELLS || mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            return Rule2 {
                value,
                abs_value,
                err,
                converged: false,
            };
        }
        let left = gk15(f, worst.a, mid);
        let right = gk15(f, mid, worst.b);
        value += left.value + right.value - worst.rule.value;
        abs_value += left.abs_value + right.abs_value - worst.rule.abs_value;
        err += left.err + right.err - worst.rule.err;
        heap.push(Cell15 { a: worst.a, b: mid, depth: worst.depth + 1, rule: left });
        heap.push(Cell15 { a: mid, b: worst.b, depth: worst.depth + 1, rule: right });
        // keep the running sums honest against cancellation drift
        if heap.len() % 64 == 0 {
            value = heap.iter().map(|c| c.rule.value).sum();
            abs_value = heap.iter().map(|c| c.rule.abs_value).sum();
            err = heap.iter().map(|c| c.rule.err).sum();
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Rule2 {
    value: f64,
    abs_value: f64,
    err: f64,
    converged: bool,
}

// --- log-scaled accumulation ----------------------------------------------

/// `exp(shift) · {sum, abs_sum, err}`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct LogAcc {
    shift: f64,
    sum: f64,
    abs_sum: f64,
    err: f64,
    converged: bool,
}

impl LogAcc {
    pub(crate) fn zero() -> Self {
        LogAcc {
            shift: f64::NEG_INFINITY,
            sum: 0.0,
            abs_sum: 0.0,
            err: 0.0,
            converged: true,
        }
    }

    fn is_zero(&self) -> bool {
        self.abs_sum == 0.0 || self.shift == f64::NEG_INFINITY
    }

    pub(crate) fn add(&mut self, other: &LogAcc) {
        self.converged &= other.converged;
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            let c = self.converged;
            *self = *other;
            self.converged = c;
            return;
        }
        let shift = self.shift.max(other.shift);
        let (ka, kb) = ((self.shift - shift).exp(), (other.shift - shift).exp());
        self.sum = self.sum * ka + other.sum * kb;
        self.abs_sum = self.abs_sum * ka + other.abs_sum * kb;
        self.err = self.err * ka + other.err * kb;
        self.shift = shift;
    }

    /// ln of the integral of |integrand|.
    fn ln_abs_mass(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.shift + self.abs_sum.ln()
        }
    }

    pub(crate) fn ln_abs(&self) -> f64 {
        if self.sum == 0.0 {
            f64::NEG_INFINITY
        } else {
            self.shift + self.sum.abs().ln()
        }
    }

    pub(crate) fn sign(&self) -> f64 {
        if self.sum == 0.0 {
            0.0
        } else {
            self.sum.signum()
        }
    }

    /// Error estimate relative to the integral of |integrand|.
    pub(crate) fn rel_err(&self) -> f64 {
        if self.abs_sum == 0.0 {
            0.0
        } else {
            self.err / self.abs_sum
        }
    }

    fn ln_err(&self) -> f64 {
        if self.err == 0.0 || self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.shift + self.err.ln()
        }
    }
}

const SHIFT_SAMPLES: usize = 33;

/// Integrates `sign · exp(L(t))` over `[a, b]`; `f` returns `(L, sign)`.
fn integrate_piece(f: &impl Fn(f64) -> (f64, f64), a: f64, b: f64, cfg: &QuadratureConfig) -> LogAcc {
    let sample_max = |n: usize| {
        (0..n)
            .map(|i| f(a + (b - a) * (i as f64 + 0.5) / n as f64).0)
            .filter(|l| l.is_finite())
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let mut shift = sample_max(SHIFT_SAMPLES);
    if shift == f64::NEG_INFINITY {
        shift = sample_max(16 * SHIFT_SAMPLES);
    }
    if shift == f64::NEG_INFINITY {
        // nothing visible on a dense sample; let the rule itself find mass
        shift = 0.0;
    }
    for _ in 0..6 {
        let seen = Cell::new(f64::NEG_INFINITY);
        let g = |t: f64| {
            let (l, s) = f(t);
            if l > seen.get() {
                seen.set(l);
            }
            if s == 0.0 {
                0.0
            } else {
                s * (l - shift).exp()
            }
        };
        let rule = adaptive(&g, a, b, cfg);
        let peak = seen.get();
        if peak.is_finite() && peak > shift + 30.0 {
            shift = peak;
            continue;
        }
        if rule.abs_value == 0.0 && peak.is_finite() && peak < shift - 600.0 {
            shift = peak;
            continue;
        }
        return LogAcc {
            shift,
            sum: rule.value,
            abs_sum: rule.abs_value,
            err: rule.err,
            converged: rule.converged,
        };
    }
    LogAcc {
        converged: false,
        ..LogAcc::zero()
    }
}

const MAX_SWEEP_PIECES: usize = 96;

/// Integrates over `[0, ∞)` (optionally truncated at `cap`) with pieces of
/// doubling width, stopping once the pieces are negligible and shrinking.
/// Beyond this the mass is not representable as an `f64`.
const LN_MASS_LIMIT: f64 = 700.0;

fn sweep(f: &impl Fn(f64) -> (f64, f64), cap: Option<f64>, cfg: &QuadratureConfig) -> Result<LogAcc> {
    let mut acc = LogAcc::zero();
    let (mut t0, mut w) = (0.0f64, 1.0f64);
    let mut prev = f64::NEG_INFINITY;
    let mut prev_negligible = false;
    let ln_small = (1e-3 * cfg.rel_tol).ln();
    for k in 0..MAX_SWEEP_PIECES {
        let mut t1 = t0 + w;
        let capped = matches!(cap, Some(c) if t1 >= c);
        if let Some(c) = cap {
            t1 = t1.min(c);
        }
        if t1 > t0 {
            let piece = integrate_piece(f, t0, t1, cfg);
            acc.add(&piece);
            let mass = piece.ln_abs_mass();
            if mass == f64::NEG_INFINITY && k >= 3 && acc.is_zero() {
                return Ok(acc);
            }
            if acc.ln_abs_mass() > LN_MASS_LIMIT {
                break;
            }
            let negligible = mass <= acc.ln_abs_mass() + ln_small;
            let shrinking = mass < prev && f(t1).0 < f(0.5 * (t0 + t1)).0;
            // an integrand that underflows right after a growing piece has
            // left the representable range, it has not decayed
            let vanished = mass == f64::NEG_INFINITY && prev_negligible;
            if k >= 2 && negligible && (shrinking || vanished) {
                return Ok(acc);
            }
            prev_negligible = k >= 1 && negligible;
            prev = mass;
        }
        if capped {
            return Ok(acc);
        }
        t0 = t1;
        w *= 2.0;
    }
    Err(Error::Divergent(format!(
        "integrand mass keeps growing out to sweep coordinate {t0:e}"
    )))
}

// --- radial integrands -----------------------------------------------------

/// What is being integrated: `|g|^power · m(δ)^power · w(δ)` against `r^{d−1} dr`
/// (with sign kept when `signed`).
#[derive(Debug, Clone)]
pub(crate) struct RadialIntegrand<'a> {
    pub profile: &'a RadialProfile,
    pub quantity: Quantity,
    pub power: f64,
    pub signed: bool,
    pub multiplier: &'a WeightSpec,
    pub measure: &'a WeightSpec,
}

#[derive(Debug, Clone, Copy)]
enum Mapping {
    /// r ∈ [a, b]
    Plain { a: f64, b: f64 },
    /// ln r = sgn·y, y ∈ [a, b]
    LogFinite { sgn: f64, a: f64, b: f64 },
    /// ln r = sgn·(y0 + τ)
    LogTail { sgn: f64, y0: f64 },
    /// r = r0 e^{−τ}
    ToZero { r0: f64 },
    /// r = r0 e^{τ}
    ToInfinity { r0: f64 },
    /// r = 1 − t0 e^{−τ}
    ToBoundary { t0: f64 },
}

#[derive(Debug, Clone, Copy)]
struct Point {
    lr: f64,
    /// ln(1 − r), when known more accurately than from `lr`
    ln_one_minus_r: Option<f64>,
    ln_jac: f64,
}

impl Mapping {
    fn point(&self, t: f64) -> Point {
        match *self {
            Mapping::Plain { .. } => Point {
                lr: t.ln(),
                ln_one_minus_r: Some((1.0 - t).ln()),
                ln_jac: 0.0,
            },
            Mapping::LogFinite { sgn, .. } => Point {
                lr: sgn * t,
                ln_one_minus_r: None,
                ln_jac: sgn * t,
            },
            Mapping::LogTail { sgn, y0 } => {
                let lr = sgn * (y0 + t);
                Point {
                    lr,
                    ln_one_minus_r: None,
                    ln_jac: lr,
                }
            }
            Mapping::ToZero { r0 } => {
                let lr = r0.ln() - t;
                Point {
                    lr,
                    ln_one_minus_r: None,
                    ln_jac: lr,
                }
            }
            Mapping::ToInfinity { r0 } => {
                let lr = r0.ln() + t;
                Point {
                    lr,
                    ln_one_minus_r: None,
                    ln_jac: lr,
                }
            }
            Mapping::ToBoundary { t0 } => {
                let ln_t = t0.ln() - t;
                Point {
                    lr: (-ln_t.exp()).ln_1p(),
                    ln_one_minus_r: Some(ln_t),
                    ln_jac: ln_t,
                }
            }
        }
    }

    /// Upper limit of the sweep coordinate implied by an outer radius cap.
    fn cap(&self, tail_cap: Option<f64>) -> Option<f64> {
        let c = tail_cap?.ln();
        match *self {
            Mapping::LogTail { sgn, y0 } if sgn > 0.0 => Some((c - y0).max(0.0)),
            Mapping::ToInfinity { r0 } => Some((c - r0.ln()).max(0.0)),
            _ => None,
        }
    }
}

impl RadialIntegrand<'_> {
    fn ln_delta(&self, domain: &DomainSpec, pt: &Point) -> f64 {
        match domain.delta_model {
            DeltaModel::DistanceToOrigin => pt.lr,
            DeltaModel::DistanceToBoundary => pt.ln_one_minus_r.unwrap_or_else(|| (-pt.lr.exp_m1()).ln()),
        }
    }

    fn eval(&self, domain: &DomainSpec, segment: &Segment, mapping: &Mapping, t: f64) -> (f64, f64) {
        let pt = mapping.point(t);
        let (lg, sg) = self.profile.ln_abs_on(segment, pt.lr, self.quantity);
        if sg == 0.0 {
            return (f64::NEG_INFINITY, 0.0);
        }
        let ln_delta = self.ln_delta(domain, &pt);
        let lm = self.multiplier.ln_factor(ln_delta);
        let lw = self.measure.ln_factor(ln_delta);
        let l = self.power * (lg + lm) + lw + (domain.dimension as f64 - 1.0) * pt.lr + pt.ln_jac;
        if l.is_nan() {
            return (f64::NEG_INFINITY, 0.0);
        }
        let sign = if self.signed { sg } else { 1.0 };
        (l, sign)
    }

    fn mappings(&self, domain: &DomainSpec, segment: &Segment, lo: f64, hi: f64) -> Vec<Mapping> {
        if let SegmentKind::LogPowerCore { orientation, .. } = segment.kind {
            return match orientation {
                Orientation::Inner => {
                    let y_lo = -hi.ln();
                    if lo == 0.0 {
                        vec![Mapping::LogTail { sgn: -1.0, y0: y_lo }]
                    } else {
                        vec![Mapping::LogFinite { sgn: -1.0, a: y_lo, b: -lo.ln() }]
                    }
                }
                Orientation::Outer => {
                    let y_lo = lo.ln();
                    if hi == f64::INFINITY {
                        vec![Mapping::LogTail { sgn: 1.0, y0: y_lo }]
                    } else {
                        vec![Mapping::LogFinite { sgn: 1.0, a: y_lo, b: hi.ln() }]
                    }
                }
            };
        }
        let boundary_end = domain.is_bounded() && domain.delta_model == DeltaModel::DistanceToBoundary && hi >= 1.0;
        let a = if lo == 0.0 { 0.25 * hi.min(4.0) } else { lo };
        let b = if hi == f64::INFINITY {
            (2.0 * a).max(a + 1.0)
        } else if boundary_end {
            hi - 0.25 * (hi - a)
        } else {
            hi
        };
        let mut out = Vec::with_capacity(3);
        if lo == 0.0 {
            out.push(Mapping::ToZero { r0: a });
        }
        out.push(Mapping::Plain { a, b });
        if hi == f64::INFINITY {
            out.push(Mapping::ToInfinity { r0: b });
        } else if boundary_end {
            out.push(Mapping::ToBoundary { t0: 1.0 - b });
        }
        out
    }

    /// `∫ integrand · r^{d−1} dr` over the domain (or the band), without the sphere factor.
    pub(crate) fn integrate(
        &self,
        domain: &DomainSpec,
        band: Option<(f64, f64)>,
        quad: &QuadratureConfig,
    ) -> Result<LogAcc> {
        quad.validate()?;
        let (d_lo, d_hi) = domain.radial_range();
        let (b_lo, b_hi) = band.unwrap_or((d_lo, d_hi));
        if !(b_lo >= d_lo && b_hi <= d_hi && b_lo <= b_hi) {
            return Err(Error::invalid(format!(
                "band [{b_lo}, {b_hi}] is not inside the radial range [{d_lo}, {d_hi}]"
            )));
        }
        let mut acc = LogAcc::zero();
        for segment in self.profile.segments() {
            let lo = segment.r_lo.max(b_lo);
            let hi = segment.r_hi.min(b_hi);
            if !(lo < hi) || self.profile.vanishes_on(segment, self.quantity) {
                continue;
            }
            for mapping in self.mappings(domain, segment, lo, hi) {
                let f = |t: f64| self.eval(domain, segment, &mapping, t);
                let part = match mapping {
                    Mapping::Plain { a, b } | Mapping::LogFinite { a, b, .. } => integrate_piece(&f, a, b, quad),
                    _ => sweep(&f, mapping.cap(quad.tail_cap), quad)?,
                };
                acc.add(&part);
            }
        }
        Ok(acc)
    }
}

// --- public norm API ---------------------------------------------------------

/// Full description of a weighted radial norm
/// `[∫_D |g · m(δ)|^p w(δ) dx]^{1/p}`, optionally restricted to a radial band.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub quantity: Quantity,
    pub p: f64,
    /// Raised to the power p together with the function.
    pub multiplier: WeightSpec,
    /// Measure density, not raised to p.
    pub measure: WeightSpec,
    pub band: Option<(f64, f64)>,
}

impl NormSpec {
    /// `|g · δ^{−weight_exp}|_p`.
    pub fn new(quantity: Quantity, p: f64, weight_exp: f64) -> Self {
        NormSpec {
            quantity,
            p,
            multiplier: WeightSpec::delta_power(-weight_exp),
            measure: WeightSpec::unit(),
            band: None,
        }
    }

    pub fn with_band(mut self, r_lo: f64, r_hi: f64) -> Self {
        self.band = Some((r_lo, r_hi));
        self
    }
}

/// Evaluates the norm described by `spec`.
///
/// Divergent tails or endpoints return [`Error::Divergent`]; running out of
/// subdivision depth returns a result with `converged == false`.
pub fn lp_norm(profile: &RadialProfile, domain: &DomainSpec, spec: &NormSpec, quad: &QuadratureConfig) -> Result<NormResult> {
    let p = spec.p;
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::invalid(format!("p must be a finite value >= 1, got {p}")));
    }
    let integrand = RadialIntegrand {
        profile,
        quantity: spec.quantity,
        power: p,
        signed: false,
        multiplier: &spec.multiplier,
        measure: &spec.measure,
    };
    let acc = integrand.integrate(domain, spec.band, quad)?;
    let ln_int = acc.ln_abs();
    if ln_int == f64::NEG_INFINITY {
        return Ok(NormResult {
            value: 0.0,
            est_abs_error: 0.0,
            converged: acc.converged,
        });
    }
    let ln_value = (ln_sphere_surface(domain.dimension) + ln_int) / p;
    if ln_value > f64::MAX.ln() {
        return Err(Error::NonFinite(format!("norm overflows (ln = {ln_value})")));
    }
    let value = ln_value.exp();
    let rel = acc.rel_err() / p;
    let est_abs_error = value * rel;
    let converged = acc.converged && est_abs_error <= quad.rel_tol * value + quad.abs_tol;
    Ok(NormResult {
        value,
        est_abs_error,
        converged,
    })
}

/// `[∫_D |f|^p δ^{−p·weight_exp} dx]^{1/p}`.
pub fn lp_norm_weighted(
    profile: &RadialProfile,
    domain: &DomainSpec,
    p: f64,
    weight_exp: f64,
    quad: &QuadratureConfig,
) -> Result<NormResult> {
    lp_norm(profile, domain, &NormSpec::new(Quantity::Value, p, weight_exp), quad)
}

/// `| |grad f| δ^{−weight_exp} |_p`.
pub fn grad_norm_weighted(
    profile: &RadialProfile,
    domain: &DomainSpec,
    p: f64,
    weight_exp: f64,
    quad: &QuadratureConfig,
) -> Result<NormResult> {
    lp_norm(profile, domain, &NormSpec::new(Quantity::Gradient, p, weight_exp), quad)
}

/// The weighted norm restricted to the radial band `r_lo ≤ |x| ≤ r_hi`.
pub fn lp_norm_on_subset(
    profile: &RadialProfile,
    domain: &DomainSpec,
    p: f64,
    weight_exp: f64,
    r_lo: f64,
    r_hi: f64,
    quad: &QuadratureConfig,
) -> Result<NormResult> {
    lp_norm(
        profile,
        domain,
        &NormSpec::new(Quantity::Value, p, weight_exp).with_band(r_lo, r_hi),
        quad,
    )
}

/// Signed `∫_D f · w(δ) dx` over the domain or a band.
///
/// Converged means the error estimate is within `rel_tol` of `∫_D |f| w dx`.
pub fn radial_integral(
    profile: &RadialProfile,
    domain: &DomainSpec,
    measure: &WeightSpec,
    band: Option<(f64, f64)>,
    quad: &QuadratureConfig,
) -> Result<IntegralResult> {
    let unit = WeightSpec::unit();
    let integrand = RadialIntegrand {
        profile,
        quantity: Quantity::Value,
        power: 1.0,
        signed: true,
        multiplier: &unit,
        measure,
    };
    let acc = integrand.integrate(domain, band, quad)?;
    let ln_omega = ln_sphere_surface(domain.dimension);
    let value = acc.sign() * (ln_omega + acc.ln_abs()).exp();
    let est_abs_error = (ln_omega + acc.ln_err()).exp();
    if !value.is_finite() {
        return Err(Error::NonFinite("radial integral overflows".into()));
    }
    // cancellation is a property of the data, so accuracy is judged against ∫|f w|
    let mass = (ln_omega + acc.ln_abs_mass()).exp();
    let converged = acc.converged && est_abs_error <= quad.rel_tol * value.abs().max(mass) + quad.abs_tol;
    Ok(IntegralResult {
        value,
        est_abs_error,
        converged,
    })
}

/// `∫_band w(δ) dx`; the measure of the band when `w ≡ 1`.
pub fn weight_mass(domain: &DomainSpec, measure: &WeightSpec, band: Option<(f64, f64)>, quad: &QuadratureConfig) -> Result<IntegralResult> {
    radial_integral(&RadialProfile::constant(domain, 1.0), domain, measure, band, quad)
}

/// `∫₁^∞ e^{−s y} y^m dy` by quadrature, written as the planar integral of
/// `(−ln r)^m r^{s−2}` over the disk of radius `1/e`.
pub fn core_integral_by_quadrature(s: f64, m: f64, quad: &QuadratureConfig) -> Result<IntegralResult> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::invalid(format!("decay rate must be positive, got {s}")));
    }
    if !(m >= 0.0) || !m.is_finite() {
        return Err(Error::invalid(format!("power must be finite and >= 0, got {m}")));
    }
    let kind = if m == 0.0 {
        SegmentKind::Constant(1.0)
    } else {
        SegmentKind::LogPowerCore {
            exponent: m,
            orientation: Orientation::Inner,
        }
    };
    let a = (-1.0f64).exp();
    let profile = RadialProfile::from_segments(vec![
        Segment { r_lo: 0.0, r_hi: a, kind },
        Segment { r_lo: a, r_hi: 1.0, kind: SegmentKind::Zero },
    ])?;
    let domain = DomainSpec::ball(2, DeltaModel::DistanceToOrigin)?;
    let r = radial_integral(&profile, &domain, &WeightSpec::delta_power(s - 2.0), None, quad)?;
    let omega = 2.0 * std::f64::consts::PI;
    Ok(IntegralResult {
        value: r.value / omega,
        est_abs_error: r.est_abs_error / omega,
        converged: r.converged,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub s: f64,
    pub m: f64,
    pub oracle: f64,
    pub quadrature: f64,
    pub rel_err: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSweep {
    pub rows: Vec<OracleRow>,
    pub max_rel_err: f64,
}

/// 8 decay rates log-spaced over `[0.05, 5]` times 6 powers spaced over `[0, 12]`.
pub fn default_oracle_grid() -> Vec<(f64, f64)> {
    let mut grid = Vec::with_capacity(48);
    for i in 0..8 {
        let s = 0.05 * 100f64.powf(i as f64 / 7.0);
        for j in 0..6 {
            grid.push((s, 12.0 * j as f64 / 5.0));
        }
    }
    grid
}

/// Compares [`core_integral_by_quadrature`] with the incomplete-Gamma closed form.
pub fn oracle_sweep(grid: &[(f64, f64)], quad: &QuadratureConfig) -> Result<OracleSweep> {
    let rows = crate::par_map(grid, |&(s, m)| -> Result<OracleRow> {
        let oracle = crate::gamma_oracle::core_integral(s, m)?;
        let q = core_integral_by_quadrature(s, m, quad)?;
        Ok(OracleRow {
            s,
            m,
            oracle,
            quadrature: q.value,
            rel_err: ((q.value - oracle) / oracle).abs(),
            converged: q.converged,
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;
    let max_rel_err = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    Ok(OracleSweep { rows, max_rel_err })
}
