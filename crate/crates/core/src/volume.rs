//! Volumes of the ends `(−∞, r0] × B` of a warped metric.
//!
//! The cross-section at `r` has volume `2π v h^{2n−2} vol(B)`. Left tails are
//! integrated in closed form, the spliced middle by adaptive Simpson.

use std::f64::consts::TAU;

use thiserror::Error;

use crate::certify::MetricSpec;
use crate::warpfn::{PieceKind, WarpError};

/// Absolute tolerance of the adaptive quadrature over the whole middle.
pub const QUADRATURE_TOL: f64 = 1e-12;
const MAX_DEPTH: u32 = 48;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum VolumeError {
    #[error("tube radius must be positive, got {0}")]
    NonpositiveRadius(f64),
    #[error("r = {r} lies beyond the end boundary r0 = {r0}")]
    OutOfDomain { r: f64, r0: f64 },
    #[error("base volume must be positive and finite, got {0}")]
    InvalidBaseVolume(f64),
    #[error("r0 = {0} is outside the domain of the metric")]
    InvalidBoundary(f64),
    #[error("no closed form for the left tail ({0})")]
    UnsupportedTail(String),
    #[error(transparent)]
    Warp(#[from] WarpError),
}

/// Circumference and fiber scale of the tube `F(r)` at distance `r` from a
/// totally geodesic `𝐇^{n−2}` in `𝐇ⁿ`: `(2π sinh r, cosh r)`.
pub fn tube_geometry(r: f64) -> Result<(f64, f64), VolumeError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(VolumeError::NonpositiveRadius(r));
    }
    Ok((TAU * r.sinh(), r.cosh()))
}

/// An end `(−∞, r0] × B` of the metric in `spec`, `vol(B) = vol_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct EndSpec {
    pub metric: MetricSpec,
    pub vol_b: f64,
    pub r0: f64,
}

impl EndSpec {
    pub fn new(metric: MetricSpec, vol_b: f64, r0: f64) -> Result<Self, VolumeError> {
        if !(vol_b.is_finite() && vol_b > 0.0) {
            return Err(VolumeError::InvalidBaseVolume(vol_b));
        }
        let (lo, hi) = metric.domain();
        if !(r0.is_finite() && lo < r0 && r0 < hi) {
            return Err(VolumeError::InvalidBoundary(r0));
        }
        Ok(Self { metric, vol_b, r0 })
    }

    fn exponent(&self) -> i32 {
        2 * self.metric.n as i32 - 2
    }

    fn density(&self, r: f64) -> Result<f64, VolumeError> {
        let v = self.metric.v.eval_jet(r)?.value;
        let h = self.metric.h.eval_jet(r)?.value;
        Ok(v * h.powi(self.exponent()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EndVolume {
    Finite(f64),
    Divergent { reason: String },
}

impl EndVolume {
    pub fn is_finite(&self) -> bool {
        matches!(self, EndVolume::Finite(_))
    }
}

/// `2π v(r) h(r)^{2n−2} vol(B)` for `r ≤ r0`.
pub fn cross_section_volume(end: &EndSpec, r: f64) -> Result<f64, VolumeError> {
    if r > end.r0 {
        return Err(VolumeError::OutOfDomain { r, r0: end.r0 });
    }
    Ok(TAU * end.vol_b * end.density(r)?)
}

/// Volume of `[a, b] × B` by adaptive Simpson, split at the knots.
pub fn volume_between(end: &EndSpec, a: f64, b: f64) -> Result<f64, VolumeError> {
    if b > end.r0 {
        return Err(VolumeError::OutOfDomain { r: b, r0: end.r0 });
    }
    if !(a < b) {
        return Ok(0.0);
    }
    let (lo, _) = end.metric.domain();
    if !(a > lo || (a == lo && lo.is_finite())) {
        return Err(VolumeError::InvalidBoundary(a));
    }
    let mut cuts: Vec<f64> = end.metric.v.knots();
    cuts.extend(end.metric.h.knots());
    cuts.retain(|&x| a < x && x < b);
    cuts.sort_by(f64::total_cmp);
    let mut points = vec![a];
    points.extend(cuts);
    points.push(b);

    // the domain is open: nudge a finite left end inside
    let nudge = if a == lo { 1e-12 * (b - a) } else { 0.0 };
    let f = |r: f64| end.density(r.max(a + nudge));
    let mut total = 0.0;
    for w in points.windows(2) {
        let tol = QUADRATURE_TOL * (w[1] - w[0]) / (b - a);
        total += adaptive_simpson(&f, w[0], w[1], tol)?;
    }
    Ok(TAU * end.vol_b * total)
}

/// Volume of `(−∞, r0] × B`, or `Divergent`.
pub fn end_volume(end: &EndSpec) -> Result<EndVolume, VolumeError> {
    let (lo, _) = end.metric.domain();
    if lo.is_finite() {
        return Ok(EndVolume::Finite(volume_between(end, lo, end.r0)?));
    }
    let (v, h) = (&end.metric.v, &end.metric.h);
    let s = v.dilation();
    if h.dilation() != s {
        return Err(VolumeError::UnsupportedTail(
            "v and h carry different dilations".into(),
        ));
    }
    let (pv, ph) = (&v.pieces()[0], &h.pieces()[0]);
    // both functions are on their left tail up to c (base coordinates)
    let c = pv.end.min(ph.end).min(end.r0 / s);
    let m = end.exponent();
    let tail = match tail_integral(&pv.kind, &ph.kind, m, c) {
        Tail::Finite(x) => x * s.powi(m + 2),
        Tail::Divergent(reason) => return Ok(EndVolume::Divergent { reason }),
        Tail::Unknown => {
            return Err(VolumeError::UnsupportedTail(format!(
                "v {:?}, h {:?}",
                pv.kind, ph.kind
            )));
        }
    };
    let middle = volume_between(end, c * s, end.r0)?;
    Ok(EndVolume::Finite(TAU * end.vol_b * tail + middle))
}

enum Tail {
    Finite(f64),
    Divergent(String),
    Unknown,
}

/// `∫_{−∞}^{c} v h^m du` for left-tail kinds.
fn tail_integral(v: &PieceKind, h: &PieceKind, m: i32, c: f64) -> Tail {
    let k = f64::from(m + 1);
    match (v, h) {
        (PieceKind::Const(_), _) => Tail::Divergent("v is constant on an infinite tail".into()),
        (PieceKind::Exp, PieceKind::Exp) => Tail::Finite((k * c).exp() / k),
        (PieceKind::Exp, PieceKind::ExpShift(tau)) => {
            Tail::Finite(((c.exp() + tau).powi(m + 1) - tau.powi(m + 1)) / k)
        }
        (PieceKind::Exp, PieceKind::Const(b)) => Tail::Finite(b.powi(m) * c.exp()),
        _ => Tail::Unknown,
    }
}

fn adaptive_simpson(
    f: &impl Fn(f64) -> Result<f64, VolumeError>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, VolumeError> {
    let (fa, fm, fb) = (f(a)?, f(0.5 * (a + b))?, f(b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> Result<f64, VolumeError>,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, VolumeError> {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?,
    )
}
