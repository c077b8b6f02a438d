//! Construction of the warping pair `(v, h)` joining exponential (or
//! constant) left tails to the hyperbolic tails `sinh`, `cosh` on `[ε, ∞)`.
//!
//! The middle of `[-ρ, ε]` is filled with quintic Hermite segments that match
//! full 2-jets at every knot. The single quintic on the whole interval is
//! tried first. When it is not convex and increasing, a chain of segments is
//! used whose second derivative is a positive piecewise-linear profile (a
//! plateau, two end ramps and one triangular bump). The bump is placed so the
//! profile has the mass `f'(ε) - f'(-ρ)` and the first moment demanded by
//! `f(ε)`. That is solvable exactly when the two tangent lines at the ends
//! meet strictly inside the interval.

use super::{Piece, PieceKind, ScalarJet, WarpError, WarpingFunction};

/// Grid step used for positivity verification.
pub const POSITIVITY_GRID_STEP: f64 = 1e-3;
/// Factor applied to `ρ` after a failed attempt.
pub const RETRY_GROWTH: f64 = 1.25;
/// Retries after the first attempt.
pub const MAX_RETRIES: usize = 40;

const RHO_RESOLUTION: f64 = 1e-6;

/// Which left tails the construction uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricVariant {
    /// `v = h = e^r` on `(-∞, -ρ]`: strictly negative curvature, cusp-like ends.
    PaperNegative,
    /// `v = h = e^{-ρ}` on `(-∞, -ρ]`: product ends, curvature only `≤ 0`.
    HeintzeSchroeder,
    /// `v = e^r`, `h = e^r + τ` on `(-∞, -ρ]`.
    Fujiwara { tau: f64 },
}

impl MetricVariant {
    pub fn validate(&self) -> Result<(), WarpError> {
        match *self {
            MetricVariant::Fujiwara { tau } if !(tau.is_finite() && tau > 0.0) => Err(
                WarpError::InvalidParams(format!("Fujiwara variant needs tau > 0, got {tau}")),
            ),
            _ => Ok(()),
        }
    }

    /// Whether `h, v, h', v', h'', v''` must be strictly positive on `[-ρ, ε]`.
    pub fn strict(&self) -> bool {
        !matches!(self, MetricVariant::HeintzeSchroeder)
    }

    pub fn name(&self) -> &'static str {
        match self {
            MetricVariant::PaperNegative => "paper",
            MetricVariant::HeintzeSchroeder => "heintze-schroeder",
            MetricVariant::Fujiwara { .. } => "fujiwara",
        }
    }

    /// Left tail kinds `(v, h)` for the given `ρ`.
    fn left_tails(&self, rho: f64) -> (PieceKind, PieceKind) {
        match *self {
            MetricVariant::PaperNegative => (PieceKind::Exp, PieceKind::Exp),
            MetricVariant::HeintzeSchroeder => {
                let c = (-rho).exp();
                (PieceKind::Const(c), PieceKind::Const(c))
            }
            MetricVariant::Fujiwara { tau } => (PieceKind::Exp, PieceKind::ExpShift(tau)),
        }
    }
}

/// Abscissa where the tangent line at `(a, left)` meets the tangent line at
/// `(b, right)`; `None` for parallel lines.
pub fn tangent_intersection(a: f64, left: &ScalarJet, b: f64, right: &ScalarJet) -> Option<f64> {
    let slope_gap = left.d1 - right.d1;
    if slope_gap == 0.0 {
        return None;
    }
    Some((right.value - right.d1 * b - left.value + left.d1 * a) / slope_gap)
}

/// Convex interpolation with these end jets needs the left slope below the
/// right slope and the tangent lines to meet strictly inside `(a, b)`.
fn tangents_meet_inside(a: f64, left: &ScalarJet, b: f64, right: &ScalarJet) -> bool {
    if !(left.d1 < right.d1) {
        return false;
    }
    matches!(tangent_intersection(a, left, b, right), Some(x) if a < x && x < b)
}

fn rho_feasible(eps: f64, rho: f64) -> bool {
    let e = (-rho).exp();
    let left = ScalarJet::new(e, e, e);
    let cosh = ScalarJet::new(eps.cosh(), eps.sinh(), eps.cosh());
    let sinh = ScalarJet::new(eps.sinh(), eps.cosh(), eps.sinh());
    tangents_meet_inside(-rho, &left, eps, &cosh) && tangents_meet_inside(-rho, &left, eps, &sinh)
}

/// Smallest `ρ > 0` (to `1e-6`) for which the tangent to `e^r` at `-ρ` meets
/// the tangents to both `cosh` and `sinh` at `ε` strictly inside `(-ρ, ε)`.
pub fn choose_rho(eps: f64) -> Result<f64, WarpError> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(WarpError::InvalidEpsilon(eps));
    }
    if rho_feasible(eps, RHO_RESOLUTION) {
        return Ok(RHO_RESOLUTION);
    }
    let mut hi = 1e-3;
    while !rho_feasible(eps, hi) {
        hi *= 2.0;
        if hi > 1e12 {
            return Err(WarpError::InvalidEpsilon(eps));
        }
    }
    // locate the first feasible point of a uniform scan, then bisect below it
    const SCAN: usize = 4096;
    let mut lo = 0.0;
    for k in 1..=SCAN {
        let x = hi * k as f64 / SCAN as f64;
        if rho_feasible(eps, x) {
            hi = x;
            break;
        }
        lo = x;
    }
    while hi - lo > RHO_RESOLUTION * 0.5 {
        let mid = 0.5 * (lo + hi);
        if rho_feasible(eps, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// How the middle of a warping function was filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterpolantMethod {
    SingleQuintic,
    ConvexChain { segments: usize },
}

/// Result of the grid positivity check on `[-ρ, ε]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositivityReport {
    pub grid_step: f64,
    pub samples: usize,
    pub min_value: f64,
    pub min_d1: f64,
    pub min_d2: f64,
    pub strict: bool,
}

impl PositivityReport {
    pub fn passed(&self) -> bool {
        if self.strict {
            self.min_value > 0.0 && self.min_d1 > 0.0 && self.min_d2 > 0.0
        } else {
            self.min_value > 0.0 && self.min_d1 >= 0.0 && self.min_d2 >= 0.0
        }
    }
}

/// The constructed pair and how it was obtained.
#[derive(Debug, Clone)]
pub struct InterpolantPair {
    pub v: WarpingFunction,
    pub h: WarpingFunction,
    pub eps: f64,
    pub rho: f64,
    pub variant: MetricVariant,
    pub attempts: usize,
    pub v_method: InterpolantMethod,
    pub h_method: InterpolantMethod,
    pub v_report: PositivityReport,
    pub h_report: PositivityReport,
}

/// Builds `(v, h)` for the given variant, growing `ρ` by [`RETRY_GROWTH`]
/// whenever the middle cannot be made positive.
pub fn build_interpolant(
    eps: f64,
    rho: f64,
    variant: MetricVariant,
) -> Result<InterpolantPair, WarpError> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(WarpError::InvalidEpsilon(eps));
    }
    if !(rho.is_finite() && rho > 0.0) {
        return Err(WarpError::InvalidParams(format!(
            "rho must be positive, got {rho}"
        )));
    }
    variant.validate()?;
    if variant == MetricVariant::PaperNegative {
        let min_rho = choose_rho(eps)?;
        if rho < min_rho - RHO_RESOLUTION {
            return Err(WarpError::InvalidParams(format!(
                "rho = {rho} is below the tangent-line threshold {min_rho}"
            )));
        }
    }

    let mut rho = rho;
    let mut reason = String::new();
    for attempt in 1..=MAX_RETRIES + 1 {
        match try_build(eps, rho, variant) {
            Ok((v, vm, vr, h, hm, hr)) => {
                return Ok(InterpolantPair {
                    v,
                    h,
                    eps,
                    rho,
                    variant,
                    attempts: attempt,
                    v_method: vm,
                    h_method: hm,
                    v_report: vr,
                    h_report: hr,
                })
            }
            Err(why) => reason = why,
        }
        rho *= RETRY_GROWTH;
    }
    Err(WarpError::ConstructionFailed {
        attempts: MAX_RETRIES + 1,
        last_rho: rho / RETRY_GROWTH,
        reason,
    })
}

type Built = (WarpingFunction, InterpolantMethod, PositivityReport);

#[allow(clippy::type_complexity)]
fn try_build(
    eps: f64,
    rho: f64,
    variant: MetricVariant,
) -> Result<
    (
        WarpingFunction,
        InterpolantMethod,
        PositivityReport,
        WarpingFunction,
        InterpolantMethod,
        PositivityReport,
    ),
    String,
> {
    let (v_left, h_left) = variant.left_tails(rho);
    let strict = variant.strict();
    let (v, vm, vr) =
        build_one(-rho, eps, v_left, PieceKind::Sinh, strict).map_err(|e| format!("v: {e}"))?;
    let (h, hm, hr) =
        build_one(-rho, eps, h_left, PieceKind::Cosh, strict).map_err(|e| format!("h: {e}"))?;
    Ok((v, vm, vr, h, hm, hr))
}

fn build_one(
    a: f64,
    b: f64,
    left_kind: PieceKind,
    right_kind: PieceKind,
    strict: bool,
) -> Result<Built, String> {
    let left = left_kind.eval(0.0, 0.0, a);
    let right = right_kind.eval(0.0, 0.0, b);

    let mut candidates: Vec<(Vec<Piece>, InterpolantMethod)> = vec![(
        vec![Piece::new(a, b, PieceKind::QuinticHermite { left, right })],
        InterpolantMethod::SingleQuintic,
    )];
    if let Some(chain) = convex_chain(a, b, left, right) {
        let segments = chain.len();
        candidates.push((chain, InterpolantMethod::ConvexChain { segments }));
    }

    let mut last = String::from("tangent lines do not meet inside the interval");
    for (middle, method) in candidates {
        let report = check_positivity(&middle, strict);
        if !report.passed() {
            last = format!(
                "positivity failed on grid (min f = {:e}, f' = {:e}, f'' = {:e})",
                report.min_value, report.min_d1, report.min_d2
            );
            continue;
        }
        let mut pieces = Vec::with_capacity(middle.len() + 2);
        pieces.push(Piece::new(f64::NEG_INFINITY, a, left_kind.clone()));
        pieces.extend(middle);
        pieces.push(Piece::new(b, f64::INFINITY, right_kind.clone()));
        match WarpingFunction::new(pieces) {
            Ok(f) => return Ok((f, method, report)),
            Err(e) => last = e.to_string(),
        }
    }
    Err(last)
}

/// Samples every piece on an aligned grid of step at most [`POSITIVITY_GRID_STEP`].
fn check_positivity(pieces: &[Piece], strict: bool) -> PositivityReport {
    let mut report = PositivityReport {
        grid_step: 0.0,
        samples: 0,
        min_value: f64::INFINITY,
        min_d1: f64::INFINITY,
        min_d2: f64::INFINITY,
        strict,
    };
    for p in pieces {
        let len = p.end - p.start;
        let cells = (len / POSITIVITY_GRID_STEP).ceil().max(1.0) as usize;
        report.grid_step = report.grid_step.max(len / cells as f64);
        for k in 0..=cells {
            let r = if k == cells {
                p.end
            } else {
                p.start + len * k as f64 / cells as f64
            };
            let j = p.eval(r);
            report.samples += 1;
            report.min_value = report.min_value.min(j.value);
            report.min_d1 = report.min_d1.min(j.d1);
            report.min_d2 = report.min_d2.min(j.d2);
        }
    }
    report
}

/// Mass and first moment about `b` (weight `b - s`) of a polyline.
fn mass_moment(nodes: &[(f64, f64)], b: f64) -> (f64, f64) {
    nodes.windows(2).fold((0.0, 0.0), |(m, n), w| {
        let ((s0, y0), (s1, y1)) = (w[0], w[1]);
        let len = s1 - s0;
        let (w0, w1) = (b - s0, b - s1);
        (
            m + 0.5 * len * (y0 + y1),
            n + len * (w0 * (2.0 * y0 + y1) + w1 * (y0 + 2.0 * y1)) / 6.0,
        )
    })
}

/// Shortest chain segment. Shorter segments hide below the verification grid
/// and make the Hermite coefficients ill-conditioned.
pub const MIN_SEGMENT: f64 = POSITIVITY_GRID_STEP;

/// C² chain on `[a, b]` whose second derivative is a polyline. Among the
/// candidate profiles the one maximizing `min f''/f ÷ max f''/f` over the
/// interior nodes is kept. `None` when the end jets admit no convex increasing join with
/// segments of length at least [`MIN_SEGMENT`].
fn convex_chain(a: f64, b: f64, left: ScalarJet, right: ScalarJet) -> Option<Vec<Piece>> {
    let len = b - a;
    let mass = right.d1 - left.d1;
    let moment = right.value - left.value - left.d1 * len;
    if !(mass > 0.0 && moment > 0.0 && moment < mass * len && left.d2 >= 0.0 && right.d2 >= 0.0) {
        return None;
    }
    let len2 = len * len;
    let plateau_max = (mass / len)
        .min(2.0 * moment / len2)
        .min(2.0 * (len * mass - moment) / len2);

    let mut best: Option<(f64, Vec<(f64, f64)>)> = None;
    for k in 1..=30 {
        let plateau = plateau_max * 0.5_f64.powi(k);
        for j in 2..=40 {
            let ramp = len * 0.5_f64.powi(j);
            if ramp < MIN_SEGMENT {
                break;
            }
            let base = [
                (a, left.d2),
                (a + ramp, plateau),
                (b - ramp, plateau),
                (b, right.d2),
            ];
            let (m0, n0) = mass_moment(&base, b);
            let bump_mass = mass - m0;
            if !(bump_mass > 0.0) {
                continue;
            }
            let centre = b - (moment - n0) / bump_mass;
            let gap = (centre - (a + ramp)).min((b - ramp) - centre);
            for frac in [0.2, 0.4, 0.6, 0.8, 0.95] {
                let half = frac * gap;
                if !(half >= MIN_SEGMENT && gap - half >= MIN_SEGMENT) {
                    continue;
                }
                let peak = plateau + bump_mass / half;
                let nodes = vec![
                    (a, left.d2),
                    (a + ramp, plateau),
                    (centre - half, plateau),
                    (centre, peak),
                    (centre + half, plateau),
                    (b - ramp, plateau),
                    (b, right.d2),
                ];
                let Some(score) = chain_quality(&nodes, left) else {
                    continue;
                };
                if best.as_ref().is_none_or(|(s, _)| score > *s) {
                    best = Some((score, nodes));
                }
            }
        }
    }
    let (_, nodes) = best?;
    integrate_profile(&nodes, left, right)
}

/// `min f''/f ÷ max f''/f` over the interior nodes of a profile integrated
/// from `left`.
fn chain_quality(nodes: &[(f64, f64)], left: ScalarJet) -> Option<f64> {
    let mut cur = left;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for (i, w) in nodes.windows(2).enumerate() {
        let ((s0, y0), (s1, y1)) = (w[0], w[1]);
        let l = s1 - s0;
        cur = ScalarJet::new(
            cur.value + cur.d1 * l + l * l * (2.0 * y0 + y1) / 6.0,
            cur.d1 + 0.5 * l * (y0 + y1),
            y1,
        );
        if !(cur.value > 0.0) {
            return None;
        }
        if i + 2 < nodes.len() {
            lo = lo.min(y1 / cur.value);
            hi = hi.max(y1 / cur.value);
        }
    }
    (hi > 0.0).then(|| lo / hi)
}

/// Integrates the second-derivative polyline from the left jet; each segment
/// becomes a quintic Hermite piece (exactly the cubic it integrates to).
fn integrate_profile(
    nodes: &[(f64, f64)],
    left: ScalarJet,
    right: ScalarJet,
) -> Option<Vec<Piece>> {
    let mut jets = Vec::with_capacity(nodes.len());
    let mut cur = left;
    jets.push(cur);
    for w in nodes.windows(2) {
        let ((s0, y0), (s1, y1)) = (w[0], w[1]);
        let len = s1 - s0;
        if !(len > 0.0) {
            return None;
        }
        cur = ScalarJet::new(
            cur.value + cur.d1 * len + len * len * (2.0 * y0 + y1) / 6.0,
            cur.d1 + 0.5 * len * (y0 + y1),
            y1,
        );
        jets.push(cur);
    }
    let end = jets.last_mut().expect("nonempty");
    let scale = right.value.abs().max(right.d1.abs()).max(1.0);
    if end.max_abs_diff(&right) > 1e-9 * scale {
        return None;
    }
    *end = right;
    Some(
        nodes
            .windows(2)
            .zip(jets.windows(2))
            .map(|(n, j)| {
                Piece::new(
                    n[0].0,
                    n[1].0,
                    PieceKind::QuinticHermite {
                        left: j[0],
                        right: j[1],
                    },
                )
            })
            .collect(),
    )
}
