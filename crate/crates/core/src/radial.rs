//! Radial test functions on the unit ball and its exterior.
//!
//! A [`RadialProfile`] is a chain of segments over the radial range of a domain.
//! Log-power cores carry the singular behaviour, cubic bridges glue them to
//! constants with C¹ continuity. Profiles also carry a scale and a symbolic
//! constant offset, so `f = scale · raw(r) − offset`; centering only moves the
//! offset and the raw core stays comparable with the closed forms.

use std::f64::consts::E;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureConfig};
use crate::weighted::WeightSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainShape {
    UnitBall,
    ExteriorUnitBall,
}

/// How the weight distance δ(x) is measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DeltaModel {
    /// δ(x) = |x|
    DistanceToOrigin,
    /// δ(x) = 1 − |x| (unit ball only)
    DistanceToBoundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub shape: DomainShape,
    pub dimension: usize,
    pub delta_model: DeltaModel,
}

impl DomainSpec {
    pub fn new(shape: DomainShape, dimension: usize, delta_model: DeltaModel) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::invalid(format!("dimension must be >= 2, got {dimension}")));
        }
        if shape == DomainShape::ExteriorUnitBall && delta_model != DeltaModel::DistanceToOrigin {
            return Err(Error::invalid(
                "the exterior domain measures delta as the distance to the origin",
            ));
        }
        Ok(DomainSpec {
            shape,
            dimension,
            delta_model,
        })
    }

    pub fn ball(dimension: usize, delta_model: DeltaModel) -> Result<Self> {
        Self::new(DomainShape::UnitBall, dimension, delta_model)
    }

    pub fn exterior(dimension: usize) -> Result<Self> {
        Self::new(DomainShape::ExteriorUnitBall, dimension, DeltaModel::DistanceToOrigin)
    }

    pub fn is_bounded(&self) -> bool {
        self.shape == DomainShape::UnitBall
    }

    /// Radial range `(r_min, r_max)`; the ball excludes the origin only nominally.
    pub fn radial_range(&self) -> (f64, f64) {
        match self.shape {
            DomainShape::UnitBall => (0.0, 1.0),
            DomainShape::ExteriorUnitBall => (1.0, f64::INFINITY),
        }
    }

    /// Lebesgue measure of the domain.
    pub fn measure(&self) -> f64 {
        match self.shape {
            DomainShape::UnitBall => {
                quadrature::sphere_surface_unchecked(self.dimension) / self.dimension as f64
            }
            DomainShape::ExteriorUnitBall => f64::INFINITY,
        }
    }
}

/// α, the dimension, and the critical exponent `p₀ = d(1+α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareParams {
    pub alpha: f64,
    pub d: usize,
    pub p0: f64,
}

impl PoincareParams {
    pub fn new(alpha: f64, d: usize) -> Result<Self> {
        if !(alpha > -1.0) || !alpha.is_finite() {
            return Err(Error::invalid(format!("alpha must lie in (-1, inf), got {alpha}")));
        }
        if d < 2 {
            return Err(Error::invalid(format!("dimension must be >= 2, got {d}")));
        }
        Ok(PoincareParams {
            alpha,
            d,
            p0: d as f64 * (1.0 + alpha),
        })
    }

    /// The bounded case needs a nonempty exponent range `1 < p < p₀`.
    pub fn admissible_bounded(&self) -> bool {
        self.p0 > 1.0
    }

    /// `d − p(1+α)`, signed.
    pub fn gap(&self, p: f64) -> f64 {
        self.d as f64 - p * (1.0 + self.alpha)
    }
}

/// δ(r) for a point at radius `r`.
pub fn delta_of_r(domain: &DomainSpec, r: f64) -> Result<f64> {
    let (lo, hi) = domain.radial_range();
    if !(r >= lo && r <= hi) || r.is_nan() {
        return Err(Error::invalid(format!("radius {r} outside the domain range [{lo}, {hi}]")));
    }
    Ok(match domain.delta_model {
        DeltaModel::DistanceToOrigin => r,
        DeltaModel::DistanceToBoundary => 1.0 - r,
    })
}

/// Which radial function a norm is taken of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Quantity {
    Value,
    /// |grad f| = |f′(r)| for radial f.
    Gradient,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Orientation {
    /// `(−ln r)^Δ`, for r < 1
    Inner,
    /// `(ln r)^Δ`, for r > 1
    Outer,
}

/// Cubic in the shifted variable `x = r − r0`: `c0 + c1 x + c2 x² + c3 x³`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicBridge {
    pub r0: f64,
    pub coef: [f64; 4],
}

impl CubicBridge {
    pub fn value(&self, r: f64) -> f64 {
        let x = r - self.r0;
        let [c0, c1, c2, c3] = self.coef;
        c0 + x * (c1 + x * (c2 + x * c3))
    }

    pub fn derivative(&self, r: f64) -> f64 {
        let x = r - self.r0;
        let [_, c1, c2, c3] = self.coef;
        c1 + x * (2.0 * c2 + 3.0 * x * c3)
    }
}

/// The cubic Hermite interpolant matching values and slopes at both ends.
pub fn hermite_bridge(r0: f64, r1: f64, v0: f64, d0: f64, v1: f64, d1: f64) -> Result<CubicBridge> {
    let h = r1 - r0;
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::invalid(format!("bridge interval [{r0}, {r1}] is degenerate")));
    }
    let slope = (v1 - v0) / h;
    let c2 = (3.0 * slope - 2.0 * d0 - d1) / h;
    let c3 = (d0 + d1 - 2.0 * slope) / (h * h);
    Ok(CubicBridge {
        r0,
        coef: [v0, d0, c2, c3],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum SegmentKind {
    LogPowerCore { exponent: f64, orientation: Orientation },
    Bridge(CubicBridge),
    Constant(f64),
    Zero,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub r_lo: f64,
    pub r_hi: f64,
    pub kind: SegmentKind,
}

impl Segment {
    /// Raw value at radius `r` (scale and offset not applied).
    pub fn value(&self, r: f64) -> f64 {
        match self.kind {
            SegmentKind::LogPowerCore { exponent, orientation } => log_coordinate(r, orientation).powf(exponent),
            SegmentKind::Bridge(b) => b.value(r),
            SegmentKind::Constant(c) => c,
            SegmentKind::Zero => 0.0,
        }
    }

    pub fn derivative(&self, r: f64) -> f64 {
        match self.kind {
            SegmentKind::LogPowerCore { exponent, orientation } => {
                let y = log_coordinate(r, orientation);
                let sign = match orientation {
                    Orientation::Inner => -1.0,
                    Orientation::Outer => 1.0,
                };
                sign * exponent * y.powf(exponent - 1.0) / r
            }
            SegmentKind::Bridge(b) => b.derivative(r),
            SegmentKind::Constant(_) | SegmentKind::Zero => 0.0,
        }
    }

    /// `(ln |g|, sign g)` of the raw value or derivative, from `ln r`.
    ///
    /// Cores are evaluated in the log coordinate so radii far below the
    /// smallest positive double still produce finite logarithms.
    pub(crate) fn ln_abs(&self, lr: f64, quantity: Quantity) -> (f64, f64) {
        match (self.kind, quantity) {
            (SegmentKind::LogPowerCore { exponent, orientation }, q) => {
                let (y, sign_d) = match orientation {
                    Orientation::Inner => (-lr, -1.0),
                    Orientation::Outer => (lr, 1.0),
                };
                if !(y > 0.0) {
                    return (f64::NEG_INFINITY, 0.0);
                }
                match q {
                    Quantity::Value => (exponent * y.ln(), 1.0),
                    Quantity::Gradient => (exponent.ln() + (exponent - 1.0) * y.ln() - lr, sign_d),
                }
            }
            (SegmentKind::Bridge(b), q) => {
                let r = lr.exp();
                let v = match q {
                    Quantity::Value => b.value(r),
                    Quantity::Gradient => b.derivative(r),
                };
                ln_signed(v)
            }
            (SegmentKind::Constant(c), Quantity::Value) => ln_signed(c),
            _ => (f64::NEG_INFINITY, 0.0),
        }
    }
}

fn log_coordinate(r: f64, orientation: Orientation) -> f64 {
    match orientation {
        Orientation::Inner => -r.ln(),
        Orientation::Outer => r.ln(),
    }
}

pub(crate) fn ln_signed(v: f64) -> (f64, f64) {
    if v == 0.0 {
        (f64::NEG_INFINITY, 0.0)
    } else {
        (v.abs().ln(), v.signum())
    }
}

/// `(ln |X − c|, sign(X − c))` where X is given as `(ln |X|, sign X)`.
pub(crate) fn ln_abs_sub(ln_x: f64, sign_x: f64, c: f64) -> (f64, f64) {
    if c == 0.0 {
        return (ln_x, sign_x);
    }
    if sign_x == 0.0 || ln_x == f64::NEG_INFINITY {
        return ln_signed(-c);
    }
    let ln_c = c.abs().ln();
    let ln_one_minus = |ratio: f64| -> (f64, f64) {
        if ratio < 1.0 {
            ((-ratio).ln_1p(), 1.0)
        } else if ratio > 1.0 {
            ((ratio - 1.0).ln(), -1.0)
        } else {
            (f64::NEG_INFINITY, 0.0)
        }
    };
    if ln_x >= ln_c {
        // X − c = X (1 − c/X)
        let ratio = c * sign_x * (-ln_x).exp();
        let (l, s) = ln_one_minus(ratio);
        (ln_x + l, sign_x * s)
    } else {
        // X − c = −c (1 − X/c)
        let ratio = sign_x * c.signum() * (ln_x - ln_c).exp();
        let (l, s) = ln_one_minus(ratio);
        (ln_c + l, -c.signum() * s)
    }
}

/// A piecewise radial function `f(r) = scale · raw(r) − offset`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    segments: Vec<Segment>,
    scale: f64,
    offset: f64,
}

impl RadialProfile {
    /// Builds a profile from contiguous segments.
    pub fn from_segments(segments: Vec<Segment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::invalid("a profile needs at least one segment"));
        }
        for (i, s) in segments.iter().enumerate() {
            if !(s.r_lo >= 0.0 && s.r_lo < s.r_hi) {
                return Err(Error::invalid(format!("segment {i} has bad range [{}, {}]", s.r_lo, s.r_hi)));
            }
            if let SegmentKind::LogPowerCore { exponent, orientation } = s.kind {
                if !(exponent > 0.0) {
                    return Err(Error::invalid(format!("core exponent must be positive, got {exponent}")));
                }
                let ok = match orientation {
                    Orientation::Inner => s.r_hi <= 1.0,
                    Orientation::Outer => s.r_lo >= 1.0,
                };
                if !ok {
                    return Err(Error::invalid(format!("core segment {i} crosses r = 1")));
                }
            }
            if i > 0 && segments[i - 1].r_hi != s.r_lo {
                return Err(Error::invalid(format!("segments {} and {i} are not contiguous", i - 1)));
            }
        }
        Ok(RadialProfile {
            segments,
            scale: 1.0,
            offset: 0.0,
        })
    }

    /// `f ≡ c` over the domain's radial range.
    pub fn constant(domain: &DomainSpec, c: f64) -> Self {
        let (r_lo, r_hi) = domain.radial_range();
        RadialProfile {
            segments: vec![Segment {
                r_lo,
                r_hi,
                kind: SegmentKind::Constant(c),
            }],
            scale: 1.0,
            offset: 0.0,
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn range(&self) -> (f64, f64) {
        (self.segments[0].r_lo, self.segments[self.segments.len() - 1].r_hi)
    }

    /// `c · f`.
    pub fn scaled(&self, c: f64) -> Self {
        RadialProfile {
            segments: self.segments.clone(),
            scale: self.scale * c,
            offset: self.offset * c,
        }
    }

    /// `f − c`.
    pub fn shifted(&self, c: f64) -> Self {
        RadialProfile {
            segments: self.segments.clone(),
            scale: self.scale,
            offset: self.offset + c,
        }
    }

    /// Drops every bridge, keeping only the log-power cores and constants.
    pub fn core_only(&self) -> Self {
        let segments = self
            .segments
            .iter()
            .map(|s| match s.kind {
                SegmentKind::Bridge(_) => Segment { kind: SegmentKind::Zero, ..*s },
                _ => *s,
            })
            .collect();
        RadialProfile {
            segments,
            scale: self.scale,
            offset: self.offset,
        }
    }

    fn locate(&self, r: f64) -> Option<&Segment> {
        let (lo, hi) = self.range();
        if !(r >= lo && r <= hi) {
            return None;
        }
        let idx = self.segments.partition_point(|s| s.r_hi <= r);
        Some(&self.segments[idx.min(self.segments.len() - 1)])
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        let seg = self
            .locate(r)
            .ok_or_else(|| Error::invalid(format!("radius {r} outside the profile range")))?;
        Ok(self.scale * seg.value(r) - self.offset)
    }

    pub fn derivative(&self, r: f64) -> Result<f64> {
        let seg = self
            .locate(r)
            .ok_or_else(|| Error::invalid(format!("radius {r} outside the profile range")))?;
        Ok(self.scale * seg.derivative(r))
    }

    /// `(ln |g|, sign g)` for the value or gradient on `segment`, at `ln r`.
    pub(crate) fn ln_abs_on(&self, segment: &Segment, lr: f64, quantity: Quantity) -> (f64, f64) {
        if let (SegmentKind::Constant(c), Quantity::Value) = (segment.kind, quantity) {
            return ln_signed(self.scale * c - self.offset);
        }
        let (l, s) = segment.ln_abs(lr, quantity);
        let (l, s) = if self.scale == 0.0 {
            (f64::NEG_INFINITY, 0.0)
        } else {
            (l + self.scale.abs().ln(), s * self.scale.signum())
        };
        match quantity {
            Quantity::Value => ln_abs_sub(l, s, self.offset),
            Quantity::Gradient => (l, s),
        }
    }

    /// Whether `quantity` vanishes identically on `segment`.
    pub(crate) fn vanishes_on(&self, segment: &Segment, quantity: Quantity) -> bool {
        match (segment.kind, quantity) {
            (_, _) if self.scale == 0.0 && (quantity == Quantity::Gradient || self.offset == 0.0) => true,
            (SegmentKind::Zero, Quantity::Value) => self.offset == 0.0,
            (SegmentKind::Constant(c), Quantity::Value) => self.scale * c - self.offset == 0.0,
            (SegmentKind::Zero | SegmentKind::Constant(_), Quantity::Gradient) => true,
            _ => false,
        }
    }

    /// The value of `f` if it is constant over its whole range.
    pub fn constant_value(&self) -> Option<f64> {
        let mut raw = None;
        for s in &self.segments {
            let v = match s.kind {
                SegmentKind::Constant(c) => c,
                SegmentKind::Zero => 0.0,
                _ => return None,
            };
            match raw {
                None => raw = Some(v),
                Some(prev) if prev != v => return None,
                _ => {}
            }
        }
        raw.map(|v| self.scale * v - self.offset)
    }

    /// Largest mismatch of one-sided values and derivatives across interior knots.
    pub fn knot_mismatch(&self) -> (f64, f64) {
        self.segments.windows(2).fold((0.0f64, 0.0f64), |(mv, md), w| {
            let r = w[0].r_hi;
            let dv = (w[0].value(r) - w[1].value(r)).abs();
            let dd = (w[0].derivative(r) - w[1].derivative(r)).abs();
            (mv.max(dv), md.max(dd))
        })
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 1.0 && delta.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "Delta must satisfy Delta > 1, got {delta}"
        )))
    }
}

/// Bounded-case extremal: `(−ln r)^Δ` on `(0, 1/e]`, a cubic bridge down to zero
/// on `[1/e, 2/e]`, then zero up to the unit sphere.
pub fn make_u_delta(delta: f64) -> Result<RadialProfile> {
    check_delta(delta)?;
    let (a, b) = (1.0 / E, 2.0 / E);
    // the core's slope at 1/e is −eΔ
    let bridge = hermite_bridge(a, b, 1.0, -E * delta, 0.0, 0.0)?;
    RadialProfile::from_segments(vec![
        Segment {
            r_lo: 0.0,
            r_hi: a,
            kind: SegmentKind::LogPowerCore {
                exponent: delta,
                orientation: Orientation::Inner,
            },
        },
        Segment {
            r_lo: a,
            r_hi: b,
            kind: SegmentKind::Bridge(bridge),
        },
        Segment {
            r_lo: b,
            r_hi: 1.0,
            kind: SegmentKind::Zero,
        },
    ])
}

/// Unbounded-case extremal: zero on `[1, e/2]`, a cubic bridge up to the core on
/// `[e/2, e]`, then `(ln r)^Δ` on `[e, ∞)`.
pub fn make_v_delta(delta: f64) -> Result<RadialProfile> {
    check_delta(delta)?;
    let (a, b) = (E / 2.0, E);
    let bridge = hermite_bridge(a, b, 0.0, 0.0, 1.0, delta / E)?;
    RadialProfile::from_segments(vec![
        Segment {
            r_lo: 1.0,
            r_hi: a,
            kind: SegmentKind::Zero,
        },
        Segment {
            r_lo: a,
            r_hi: b,
            kind: SegmentKind::Bridge(bridge),
        },
        Segment {
            r_lo: b,
            r_hi: f64::INFINITY,
            kind: SegmentKind::LogPowerCore {
                exponent: delta,
                orientation: Orientation::Outer,
            },
        },
    ])
}

/// Mean over the domain, `∫_D f dx / |D|`.
pub fn mean_value(profile: &RadialProfile, domain: &DomainSpec, quad: &QuadratureConfig) -> Result<f64> {
    if !domain.is_bounded() {
        return Err(Error::invalid("the mean is only defined on the bounded domain"));
    }
    let integral = quadrature::radial_integral(profile, domain, &WeightSpec::unit(), None, quad)?;
    if !integral.converged {
        return Err(Error::NotConverged("mean value integral".into()));
    }
    Ok(integral.value / domain.measure())
}

/// `f⁰ = f − mean(f)` on the ball; the identity on the exterior domain.
pub fn center(profile: &RadialProfile, domain: &DomainSpec, quad: &QuadratureConfig) -> Result<RadialProfile> {
    if !domain.is_bounded() {
        return Ok(profile.clone());
    }
    let mean = match profile.constant_value() {
        Some(c) => c,
        None => mean_value(profile, domain, quad)?,
    };
    Ok(profile.shifted(mean))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn bridge_examples() {
        let zero = hermite_bridge(0.0, 1.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(zero.coef, [0.0; 4]);
        let line = hermite_bridge(0.0, 1.0, 0.0, 1.0, 1.0, 1.0).unwrap();
        for r in [0.0, 0.3, 0.77, 1.0] {
            assert_relative_eq!(line.value(r), r, epsilon = 1e-15);
        }
        let smooth = hermite_bridge(0.0, 1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        for r in [0.0, 0.25, 0.5, 0.9] {
            assert_relative_eq!(smooth.value(r), 2.0 * r * r * r - 3.0 * r * r + 1.0, epsilon = 1e-15);
        }
        assert_relative_eq!(smooth.value(0.5), 0.5, epsilon = 1e-15);
        assert!(hermite_bridge(1.0, 1.0, 0.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn u_delta_values() {
        let u = make_u_delta(2.0).unwrap();
        assert_relative_eq!(u.value((-2.0f64).exp()).unwrap(), 4.0, max_relative = 1e-14);
        assert_relative_eq!(u.value(1.0 / E).unwrap(), 1.0, max_relative = 1e-14);
        let core = &u.segments()[0];
        assert_relative_eq!(core.derivative(1.0 / E), -E * 2.0, max_relative = 1e-14);
        for r in [2.0 / E, 0.8, 1.0] {
            assert_eq!(u.value(r).unwrap(), 0.0);
        }
        assert!(make_u_delta(1.0).is_err());
        assert!(make_u_delta(0.5).is_err());
    }

    #[test]
    fn v_delta_values() {
        let v = make_v_delta(2.0).unwrap();
        assert_relative_eq!(v.value(E * E).unwrap(), 4.0, max_relative = 1e-14);
        assert_relative_eq!(v.value(E).unwrap(), 1.0, max_relative = 1e-14);
        let (bridge, core) = (&v.segments()[1], &v.segments()[2]);
        assert_relative_eq!(bridge.derivative(E), 2.0 / E, max_relative = 1e-14);
        assert_relative_eq!(core.derivative(E), 2.0 / E, max_relative = 1e-14);
        assert_eq!(v.value(1.2).unwrap(), 0.0);
        assert!(make_v_delta(0.9).is_err());
    }

    #[test]
    fn knots_are_c1() {
        for delta in [1.5, 2.0, 3.0] {
            for prof in [make_u_delta(delta).unwrap(), make_v_delta(delta).unwrap()] {
                let (dv, dd) = prof.knot_mismatch();
                assert!(dv <= 1e-10 && dd <= 1e-10, "Delta={delta}: {dv} {dd}");
            }
        }
    }

    #[test]
    fn delta_models() {
        let ball_b = DomainSpec::ball(3, DeltaModel::DistanceToBoundary).unwrap();
        let ball_o = DomainSpec::ball(3, DeltaModel::DistanceToOrigin).unwrap();
        let ext = DomainSpec::exterior(3).unwrap();
        assert_eq!(delta_of_r(&ball_b, 0.25).unwrap(), 0.75);
        assert_eq!(delta_of_r(&ball_o, 0.25).unwrap(), 0.25);
        assert_eq!(delta_of_r(&ext, 3.0).unwrap(), 3.0);
        assert!(delta_of_r(&ball_o, 1.5).is_err());
        assert!(delta_of_r(&ext, 0.5).is_err());
        assert!(DomainSpec::new(DomainShape::ExteriorUnitBall, 3, DeltaModel::DistanceToBoundary).is_err());
        assert!(DomainSpec::ball(1, DeltaModel::DistanceToOrigin).is_err());
    }

    #[test]
    fn params_validation() {
        let p = PoincareParams::new(0.5, 2).unwrap();
        assert_eq!(p.p0, 3.0);
        assert!(PoincareParams::new(-1.0, 2).is_err());
        assert!(PoincareParams::new(0.0, 1).is_err());
        assert!(!PoincareParams::new(-0.5, 2).unwrap().admissible_bounded());
    }

    #[test]
    fn ln_abs_sub_matches_direct_arithmetic() {
        for &(x, c) in &[(3.0, 1.0), (0.5, 2.0), (-2.0, 0.7), (1e-30, 0.2), (1e30, -4.0), (2.0, 2.0), (0.0, 1.5)] {
            let (lx, sx) = ln_signed(x);
            let (l, s) = ln_abs_sub(lx, sx, c);
            let direct = x - c;
            if direct == 0.0 {
                assert_eq!(l, f64::NEG_INFINITY);
            } else {
                assert_relative_eq!(l.exp(), direct.abs(), max_relative = 1e-13);
                assert_eq!(s, direct.signum());
            }
        }
    }

    #[test]
    fn constant_centers_to_zero() {
        let dom = DomainSpec::ball(3, DeltaModel::DistanceToOrigin).unwrap();
        let f = RadialProfile::constant(&dom, 5.0);
        let f0 = center(&f, &dom, &QuadratureConfig::default()).unwrap();
        for r in [0.01, 0.5, 1.0] {
            assert_eq!(f0.value(r).unwrap(), 0.0);
        }
    }

    #[test]
    fn exterior_centering_is_identity() {
        let dom = DomainSpec::exterior(2).unwrap();
        let v = make_v_delta(2.0).unwrap();
        assert_eq!(center(&v, &dom, &QuadratureConfig::default()).unwrap(), v);
    }
}
