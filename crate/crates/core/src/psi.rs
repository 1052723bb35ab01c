//! Generating functions ψ and Bilateral Grand Lebesgue Space norms.
//!
//! `||f||G(ψ) = sup_{a<p<b} |f|_p / ψ(p)`. The supremum is taken over a grid
//! that refines geometrically toward both ends of `(a, b)`, where the ratio
//! attains its extremes for every family used here.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par_map;
use crate::radial::PoincareParams;

/// `1 ≤ a < b ≤ ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentInterval {
    pub a: f64,
    /// `f64::INFINITY` for an unbounded interval.
    pub b: f64,
}

impl ExponentInterval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !(a >= 1.0) {
            return Err(Error::invalid(format!("lower exponent must be finite and >= 1, got {a}")));
        }
        if b.is_nan() || !(b > a) {
            return Err(Error::invalid(format!("need a < b, got a = {a}, b = {b}")));
        }
        Ok(ExponentInterval { a, b })
    }

    pub fn is_bounded(&self) -> bool {
        self.b.is_finite()
    }

    pub fn contains(&self, p: f64) -> bool {
        p > self.a && p < self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PsiFamily {
    /// `(p − a)^{−β} (b − p)^{−γ}`
    PowerBilateral { beta: f64, gamma: f64 },
    /// `(p − a)^{−β}` below `h`, `p^{|γ|}` from `h` on.
    PowerTail { beta: f64, gamma: f64, h: f64 },
    Custom,
}

type Evaluator = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A generating function `ψ ∈ Ψ(a, b)`, evaluated as `scale · base(p)`.
#[derive(Clone)]
pub struct PsiFunction {
    interval: ExponentInterval,
    family: PsiFamily,
    scale: f64,
    base: Evaluator,
}

impl fmt::Debug for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PsiFunction")
            .field("interval", &self.interval)
            .field("family", &self.family)
            .field("scale", &self.scale)
            .finish_non_exhaustive()
    }
}

const VALIDATION_SAMPLES: usize = 1024;

impl PsiFunction {
    /// Wraps an arbitrary positive evaluator and checks it on a dense sample.
    pub fn custom(interval: ExponentInterval, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Result<Self> {
        let psi = PsiFunction {
            interval,
            family: PsiFamily::Custom,
            scale: 1.0,
            base: Arc::new(f),
        };
        psi.validate()?;
        Ok(psi)
    }

    /// `ψ ≡ c` on the interval.
    pub fn constant(interval: ExponentInterval, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::invalid(format!("constant psi must be positive, got {c}")));
        }
        Self::custom(interval, move |_| c)
    }

    pub fn interval(&self) -> ExponentInterval {
        self.interval
    }

    pub fn family(&self) -> PsiFamily {
        self.family
    }

    /// ψ(p) on the closed interval; endpoint blow-ups come back as `+∞`.
    pub fn value(&self, p: f64) -> Result<f64> {
        let ExponentInterval { a, b } = self.interval;
        if !(p >= a && p <= b) {
            return Err(Error::invalid(format!("p = {p} outside the psi interval [{a}, {b}]")));
        }
        Ok(self.scale * (self.base)(p))
    }

    /// `c · ψ`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::invalid(format!("psi scale must be positive, got {c}")));
        }
        Ok(PsiFunction {
            scale: self.scale * c,
            ..self.clone()
        })
    }

    /// Positivity on a dense interior sample, with a positive infimum.
    pub fn validate(&self) -> Result<()> {
        let ExponentInterval { a, b } = self.interval;
        let hi = if b.is_finite() { b } else { a + 1000.0 };
        let mut inf = f64::INFINITY;
        for i in 0..VALIDATION_SAMPLES {
            let p = a + (hi - a) * (i as f64 + 0.5) / VALIDATION_SAMPLES as f64;
            let v = self.scale * (self.base)(p);
            if v.is_nan() || !(v > 0.0) {
                return Err(Error::invalid(format!("psi({p}) = {v} is not positive")));
            }
            inf = inf.min(v);
        }
        if !(inf > 0.0) {
            return Err(Error::invalid("psi has zero infimum on the sample"));
        }
        Ok(())
    }
}

fn check_exponent(name: &str, v: f64) -> Result<()> {
    if !v.is_finite() || v < 0.0 {
        return Err(Error::invalid(format!("{name} must be a finite value >= 0, got {v}")));
    }
    Ok(())
}

/// `ψ(p) = (p − a)^{−β} (b − p)^{−γ}` on a bounded interval.
pub fn make_power_psi(a: f64, b: f64, beta: f64, gamma: f64) -> Result<PsiFunction> {
    if !b.is_finite() {
        return Err(Error::invalid("the bilateral power family needs a finite b"));
    }
    let interval = ExponentInterval::new(a, b)?;
    check_exponent("beta", beta)?;
    check_exponent("gamma", gamma)?;
    Ok(PsiFunction {
        interval,
        family: PsiFamily::PowerBilateral { beta, gamma },
        scale: 1.0,
        base: Arc::new(move |p| (p - a).powf(-beta) * (b - p).powf(-gamma)),
    })
}

/// Root `h > a` of the continuity equation `(h − a)^{−β} = h^{−γ}`.
///
/// In logs, `F(h) = −β ln(h − a) + γ ln h` falls strictly from `+∞` when
/// `β > 0` and `γ ≤ 0`, so bracketing plus bisection finds the unique root.
/// Bisection runs until the bracket is two adjacent doubles. The relative
/// residual is then about `β · ulp(h) / (h − a)`, below `1e-12` unless the
/// root crowds `a`.
pub fn solve_h(a: f64, beta: f64, gamma: f64) -> Result<f64> {
    if !a.is_finite() || !(a >= 1.0) {
        return Err(Error::invalid(format!("a must be finite and >= 1, got {a}")));
    }
    check_exponent("beta", beta)?;
    if !gamma.is_finite() || gamma > 0.0 {
        return Err(Error::invalid(format!("gamma must be <= 0 for the tail family, got {gamma}")));
    }
    if beta == 0.0 && gamma == 0.0 {
        return Err(Error::NoRoot("the continuity equation is degenerate for beta = gamma = 0".into()));
    }
    if beta == 0.0 {
        // 1 = h^{|γ|} only at h = 1, which is never above a ≥ 1
        return Err(Error::NoRoot(format!(
            "with beta = 0 the continuity equation has its root at h = 1, outside (a, inf) for a = {a}"
        )));
    }
    let f = |h: f64| -beta * (h - a).ln() + gamma * h.ln();
    let mut lo = a + f64::EPSILON * a.max(1.0);
    if !(f(lo) > 0.0) {
        return Err(Error::NoRoot(format!("continuity equation has no root above a = {a}")));
    }
    let mut hi = a + 1.0;
    while f(hi) > 0.0 {
        lo = hi;
        hi = a + 2.0 * (hi - a);
        if !hi.is_finite() {
            return Err(Error::NoRoot("continuity equation bracket escaped to infinity".into()));
        }
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(if f(lo).abs() <= f(hi).abs() { lo } else { hi })
}

/// `ψ(p) = (p − a)^{−β}` on `(a, h]`, `p^{|γ|}` on `[h, ∞)`.
pub fn make_tail_psi(a: f64, beta: f64, gamma: f64) -> Result<PsiFunction> {
    let h = solve_h(a, beta, gamma)?;
    let interval = ExponentInterval::new(a, f64::INFINITY)?;
    let growth = gamma.abs();
    Ok(PsiFunction {
        interval,
        family: PsiFamily::PowerTail { beta, gamma, h },
        scale: 1.0,
        base: Arc::new(move |p| if p < h { (p - a).powf(-beta) } else { p.powf(growth) }),
    })
}

/// `ψ_{α,d}(p) = p ψ(p) / |d − p(1+α)|`; `+∞` exactly at `p = p₀`.
pub fn transform_alpha_d(psi: &PsiFunction, params: &PoincareParams) -> PsiFunction {
    let inner = psi.clone();
    let params = *params;
    PsiFunction {
        interval: psi.interval,
        family: PsiFamily::Custom,
        scale: 1.0,
        base: Arc::new(move |p| {
            let gap = params.gap(p).abs();
            if gap == 0.0 {
                return f64::INFINITY;
            }
            let v = inner.scale * (inner.base)(p);
            p * v / gap
        }),
    }
}

/// Exponent grid for the supremum in the BGLS norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub points: usize,
    /// Closest approach to an endpoint, as a fraction of the interval length.
    pub endpoint_offset: f64,
    /// Upper limit used in place of `b = ∞`.
    pub infinite_cap: f64,
    /// A ratio still rising into an endpoint beyond this value is reported infinite.
    pub divergence_cap: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            points: 256,
            endpoint_offset: 1e-6,
            infinite_cap: 200.0,
            divergence_cap: 1e12,
        }
    }
}

impl GridSpec {
    pub fn with_points(mut self, points: usize) -> Self {
        self.points = points;
        self
    }

    /// Grid over the open interval, geometrically refined toward each end.
    pub fn points_for(&self, interval: &ExponentInterval) -> Result<Vec<f64>> {
        if self.points < 4 {
            return Err(Error::invalid("a grid needs at least 4 points"));
        }
        if !(self.endpoint_offset > 0.0 && self.endpoint_offset < 0.5) {
            return Err(Error::invalid("endpoint_offset must lie in (0, 0.5)"));
        }
        let a = interval.a;
        let (b, log_tail) = if interval.is_bounded() {
            (interval.b, false)
        } else {
            if !(self.infinite_cap > a) {
                return Err(Error::invalid(format!("infinite_cap {} must exceed a = {a}", self.infinite_cap)));
            }
            (self.infinite_cap, true)
        };
        let len = b - a;
        let half = 0.5 * len;
        let n_left = self.points.div_ceil(2);
        let n_right = self.points - n_left + 1;
        let offsets = |n: usize| -> Vec<f64> {
            let ratio = (self.endpoint_offset * len / half).powf(1.0 / (n as f64 - 1.0).max(1.0));
            (0..n).map(|i| half * ratio.powi(i as i32)).collect()
        };
        let mut pts: Vec<f64> = offsets(n_left).into_iter().map(|o| a + o).collect();
        if log_tail {
            let (m, top) = (a + half, b);
            let steps = n_right - 1;
            pts.extend((1..=steps).map(|i| m * (top / m).powf(i as f64 / steps as f64)));
        } else {
            pts.extend(offsets(n_right).into_iter().skip(1).map(|o| b - o));
        }
        pts.sort_by(f64::total_cmp);
        pts.dedup();
        Ok(pts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BglsNorm {
    /// `+∞` when `infinite` is set.
    pub value: f64,
    pub infinite: bool,
    pub argmax_p: f64,
    pub grid_size: usize,
}

const RUN_INTO_ENDPOINT: usize = 8;

/// Per-point ratios `|f|_p / ψ(p)` on the grid. `C/∞` counts as 0.
pub fn bgls_ratios<F>(lp_norm: F, psi: &PsiFunction, points: &[f64]) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let rows = par_map(points, |&p| -> Result<(f64, f64)> {
        let norm = lp_norm(p)?;
        let w = psi.value(p)?;
        if norm.is_nan() || w.is_nan() {
            return Err(Error::NonFinite(format!("NaN ratio at p = {p}")));
        }
        let ratio = if w == f64::INFINITY {
            if norm.is_finite() {
                0.0
            } else {
                return Err(Error::NonFinite(format!("infinite norm against infinite psi at p = {p}")));
            }
        } else {
            norm / w
        };
        Ok((p, ratio))
    });
    rows.into_iter().collect()
}

/// `sup_p |f|_p / ψ(p)` over the grid built from `grid`.
pub fn bgls_norm<F>(lp_norm: F, psi: &PsiFunction, grid: &GridSpec) -> Result<BglsNorm>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let points = grid.points_for(&psi.interval())?;
    let rows = bgls_ratios(lp_norm, psi, &points)?;
    Ok(reduce_ratios(&rows, grid.divergence_cap))
}

pub(crate) fn reduce_ratios(rows: &[(f64, f64)], divergence_cap: f64) -> BglsNorm {
    let (mut best, mut arg) = (rows[0].1, 0usize);
    for (i, &(_, r)) in rows.iter().enumerate().skip(1) {
        if r > best {
            best = r;
            arg = i;
        }
    }
    let n = rows.len();
    let rising_into = |idx: &[usize]| idx.windows(2).all(|w| rows[w[1]].1 > rows[w[0]].1);
    let k = RUN_INTO_ENDPOINT.min(n);
    let runaway = best > divergence_cap
        && ((arg == 0 && rising_into(&(0..k).rev().collect::<Vec<_>>()))
            || (arg == n - 1 && rising_into(&(n - k..n).collect::<Vec<_>>())));
    let infinite = best == f64::INFINITY || runaway;
    BglsNorm {
        value: if infinite { f64::INFINITY } else { best },
        infinite,
        argmax_p: rows[arg].0,
        grid_size: n,
    }
}
