//! Bounds on the sectional curvature of `dr² + v²dθ² + h² g_{𝐇^{n−2}}`.
//!
//! The curvature operator is diagonal in the coordinate bivectors, so the
//! range of `sec` is the range of the four profiles `K1..K4`. The domain is
//! cut at the union of the knots of `v` and `h`. Segments on which `(v, h)`
//! is a recognized analytic pair get exact extremes. Every other segment is
//! sampled (step ≤ 1e−3, at least 4 cells) and each cell's maximum is
//! inflated by twice its midpoint second difference, halving cells where that
//! margin swamps a negative value. On polynomial
//! segments the sign of `f, f', f''` is also settled from Bernstein
//! coefficients. This is a sampling-based certificate, not interval
//! arithmetic.

use std::fmt;

use thiserror::Error;

use crate::frame::{principal_from_jets, PrincipalCurvatures};
use crate::warpfn::{
    bernstein_sign, derivative, fmt_real, key_values, parse_prefixed, parse_real, restrict,
    write_prefixed, InterpolantPair, MetricVariant, ParseError, Piece, PieceKind, PolySign,
    WarpError, WarpingFunction,
};

/// Largest sampling step on non-analytic segments.
pub const CERTIFY_STEP: f64 = 1e-3;
const MIN_CELLS: usize = 4;
const BERNSTEIN_DEPTH: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CertifyError {
    #[error(transparent)]
    Warp(#[from] WarpError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("segment ({lo}, {hi}) is unbounded and has no closed-form curvature")]
    UnsupportedTail { lo: f64, hi: f64 },
    #[error("certification failed: upper bound {upper} ({reason})")]
    CertificationFailed { upper: f64, reason: String },
    #[error("lower bound is not a finite negative number")]
    UnboundedInput,
}

/// The metric `dr² + v² dθ² + h² g_{𝐇^{n−2}}` with its construction data.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpec {
    pub v: WarpingFunction,
    pub h: WarpingFunction,
    pub n: usize,
    pub eps: Option<f64>,
    pub rho: Option<f64>,
    pub variant: Option<MetricVariant>,
}

impl MetricSpec {
    pub fn new(v: WarpingFunction, h: WarpingFunction, n: usize) -> Result<Self, CertifyError> {
        if n < 2 {
            return Err(CertifyError::InvalidSpec(format!(
                "dimension must be at least 2, got {n}"
            )));
        }
        let spec = Self {
            v,
            h,
            n,
            eps: None,
            rho: None,
            variant: None,
        };
        let (lo, hi) = spec.domain();
        if !(lo < hi) {
            return Err(CertifyError::InvalidSpec(
                "v and h have disjoint domains".into(),
            ));
        }
        Ok(spec)
    }

    pub fn from_pair(pair: &InterpolantPair, n: usize) -> Result<Self, CertifyError> {
        let mut spec = Self::new(pair.v.clone(), pair.h.clone(), n)?;
        spec.eps = Some(pair.eps);
        spec.rho = Some(pair.rho);
        spec.variant = Some(pair.variant);
        Ok(spec)
    }

    /// `v = sinh`, `h = cosh`: real hyperbolic space.
    pub fn hyperbolic(n: usize) -> Result<Self, CertifyError> {
        Self::new(WarpingFunction::sinh(), WarpingFunction::cosh(), n)
    }

    /// Common domain of the functions that enter the curvature.
    pub fn domain(&self) -> (f64, f64) {
        let (a, b) = self.v.domain();
        if self.n < 3 {
            return (a, b);
        }
        let (c, d) = self.h.domain();
        (a.max(c), b.min(d))
    }

    /// The spec of the metric scaled by `s²`.
    pub fn rescaled(&self, s: f64) -> Result<Self, CertifyError> {
        Ok(Self {
            v: self.v.rescaled(s)?,
            h: self.h.rescaled(s)?,
            n: self.n,
            eps: self.eps.map(|e| e * s),
            rho: self.rho.map(|r| r * s),
            variant: self.variant,
        })
    }

    pub fn principal(&self, r: f64) -> Result<PrincipalCurvatures, CertifyError> {
        let v = self.v.eval_jet(r)?;
        let h = if self.n >= 3 {
            self.h.eval_jet(r)?
        } else {
            crate::ScalarJet::new(1.0, 0.0, 0.0)
        };
        Ok(principal_from_jets(v, h, self.n))
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n = {}\n", self.n);
        match self.variant {
            Some(MetricVariant::Fujiwara { tau }) => {
                out += &format!("variant = fujiwara\ntau = {}\n", fmt_real(tau));
            }
            Some(v) => out += &format!("variant = {}\n", v.name()),
            None => out += "variant = none\n",
        }
        if let Some(e) = self.eps {
            out += &format!("eps = {}\n", fmt_real(e));
        }
        if let Some(r) = self.rho {
            out += &format!("rho = {}\n", fmt_real(r));
        }
        out += &write_prefixed(&self.v, "v.");
        out += &write_prefixed(&self.h, "h.");
        out
    }

    pub fn parse(text: &str) -> Result<Self, CertifyError> {
        let kv = key_values(text)?;
        let find = |key: &str| {
            kv.iter()
                .find(|(_, k, _)| k == key)
                .map(|(l, _, v)| (*l, v.as_str()))
        };
        let (line, n) = find("n").ok_or_else(|| ParseError::Missing("n".into()))?;
        let n: usize = n.parse().map_err(|_| ParseError::Syntax {
            line,
            message: format!("bad dimension `{n}`"),
        })?;
        let real = |key: &str| -> Result<Option<f64>, ParseError> {
            find(key).map(|(l, v)| parse_real(l, v)).transpose()
        };
        let variant = match find("variant") {
            None | Some((_, "none")) => None,
            Some((_, "paper")) => Some(MetricVariant::PaperNegative),
            Some((_, "heintze-schroeder")) => Some(MetricVariant::HeintzeSchroeder),
            Some((_, "fujiwara")) => {
                let tau = real("tau")?.ok_or_else(|| ParseError::Missing("tau".into()))?;
                Some(MetricVariant::Fujiwara { tau })
            }
            Some((line, other)) => {
                return Err(ParseError::Syntax {
                    line,
                    message: format!("unknown variant `{other}`"),
                }
                .into())
            }
        };
        let mut spec = Self::new(parse_prefixed(&kv, "v.")?, parse_prefixed(&kv, "h.")?, n)?;
        spec.eps = real("eps")?;
        spec.rho = real("rho")?;
        spec.variant = variant;
        if let Some(v) = variant {
            v.validate()?;
        }
        Ok(spec)
    }
}

/// One row of [`principal_profiles`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub r: f64,
    pub k: PrincipalCurvatures,
}

pub fn principal_profiles(
    spec: &MetricSpec,
    r_grid: &[f64],
) -> Result<Vec<ProfileRow>, CertifyError> {
    r_grid
        .iter()
        .map(|&r| {
            Ok(ProfileRow {
                r,
                k: spec.principal(r)?,
            })
        })
        .collect()
}

/// A one-sided bound; `attained` is false when the extreme is only a limit
/// (or a strict inequality has been established).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    pub value: f64,
    pub attained: bool,
}

impl Bound {
    fn new(value: f64, attained: bool) -> Self {
        // `+ 0.0` folds a limit of `-0.0` into `0.0`
        Self {
            value: value + 0.0,
            attained,
        }
    }

    fn exact(value: f64) -> Self {
        Self::new(value, true)
    }

    fn limit(value: f64) -> Self {
        Self::new(value, false)
    }

    /// `sup < 0` established: either the value is negative or it is `0`
    /// and never reached.
    pub fn strictly_negative(&self) -> bool {
        self.value < 0.0 || (self.value == 0.0 && !self.attained)
    }

    fn max(self, other: Bound) -> Bound {
        if other.value > self.value {
            other
        } else if other.value == self.value {
            Bound {
                value: self.value,
                attained: self.attained || other.attained,
            }
        } else {
            self
        }
    }

    fn min(self, other: Bound) -> Bound {
        if other.value < self.value {
            other
        } else if other.value == self.value {
            Bound {
                value: self.value,
                attained: self.attained || other.attained,
            }
        } else {
            self
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum LowerBound {
    Finite(Bound),
    /// `inf sec = −∞`; `witness` lists `(r, K4(r))`.
    Unbounded {
        witness: Vec<(f64, f64)>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertificateMethod {
    pub segments: usize,
    pub analytic_segments: usize,
    pub sampled_segments: usize,
    pub max_step: f64,
    pub max_margin: f64,
    /// Sampled segments whose sign was settled by Bernstein coefficients.
    pub sign_certified_segments: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    pub n: usize,
    pub upper: Bound,
    pub lower: LowerBound,
    pub method: CertificateMethod,
    /// Whether the variant asks for `sec < 0` (false for product ends).
    pub strict: bool,
}

impl fmt::Display for BoundCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "kind = sampling-based certificate with closed-form analytic segments"
        )?;
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "upper = {}", fmt_real(self.upper.value))?;
        writeln!(f, "upper_attained = {}", self.upper.attained)?;
        writeln!(f, "strict = {}", self.strict)?;
        match &self.lower {
            LowerBound::Finite(b) => {
                writeln!(f, "lower = {}", fmt_real(b.value))?;
                writeln!(f, "lower_attained = {}", b.attained)?;
            }
            LowerBound::Unbounded { witness } => {
                writeln!(f, "lower = unbounded")?;
                for (r, k) in witness {
                    writeln!(f, "witness = {} {}", fmt_real(*r), fmt_real(*k))?;
                }
            }
        }
        let m = &self.method;
        writeln!(f, "segments = {}", m.segments)?;
        writeln!(f, "analytic_segments = {}", m.analytic_segments)?;
        writeln!(f, "sampled_segments = {}", m.sampled_segments)?;
        writeln!(f, "sign_certified_segments = {}", m.sign_certified_segments)?;
        writeln!(f, "max_step = {}", fmt_real(m.max_step))?;
        writeln!(f, "max_margin = {}", fmt_real(m.max_margin))
    }
}

/// Extremes of one profile on one segment.
#[derive(Debug, Clone, Copy)]
struct Extremes {
    sup: Bound,
    inf: Bound,
}

impl Extremes {
    fn constant(k: f64) -> Self {
        Self {
            sup: Bound::exact(k),
            inf: Bound::exact(k),
        }
    }
}

/// Endpoint of a segment in base coordinates: value and whether it is a limit.
fn endpoint(x: f64) -> (f64, bool) {
    (x, x.is_finite())
}

/// Extremes of a function monotone on `[a, b]` (in base coordinates).
fn monotone(f: impl Fn(f64) -> f64, a: f64, b: f64, increasing: bool) -> Extremes {
    let (a, a_in) = endpoint(a);
    let (b, b_in) = endpoint(b);
    let (fa, fb) = (f(a), f(b));
    let (lo, hi) = (Bound::new(fa, a_in), Bound::new(fb, b_in));
    if increasing {
        Extremes { sup: hi, inf: lo }
    } else {
        Extremes { sup: lo, inf: hi }
    }
}

/// Closed-form extremes of the profiles `[K1, K2, K3, K4]` for a recognized
/// pair on `[a, b]` (base coordinates, unit dilation).
fn analytic_extremes(v: &PieceKind, h: &PieceKind, a: f64, b: f64) -> Option<[Extremes; 4]> {
    match (v, h) {
        (PieceKind::Sinh, PieceKind::Cosh) => Some([Extremes::constant(-1.0); 4]),
        (PieceKind::Exp, PieceKind::Exp) => Some([
            Extremes::constant(-1.0),
            Extremes::constant(-1.0),
            Extremes::constant(-1.0),
            monotone(|u| -1.0 - (-2.0 * u).exp(), a, b, true),
        ]),
        (PieceKind::Exp, PieceKind::ExpShift(tau)) => {
            let tau = *tau;
            let k12 = monotone(|u| -u.exp() / (u.exp() + tau), a, b, false);
            let k4 = |u: f64| {
                let x = u.exp();
                -(1.0 + x * x) / ((x + tau) * (x + tau))
            };
            // K4 increases for e^u < 1/τ and decreases after
            let peak = -tau.ln();
            let k4x = if b <= peak {
                monotone(k4, a, b, true)
            } else if a >= peak {
                monotone(k4, a, b, false)
            } else {
                let left = monotone(k4, a, peak, true);
                let right = monotone(k4, peak, b, false);
                Extremes {
                    sup: Bound::exact(-1.0 / (1.0 + tau * tau)),
                    inf: left.inf.min(right.inf),
                }
            };
            Some([k12, k12, Extremes::constant(-1.0), k4x])
        }
        (PieceKind::Const(_), PieceKind::Const(c)) => Some([
            Extremes::constant(0.0),
            Extremes::constant(0.0),
            Extremes::constant(0.0),
            Extremes::constant(-1.0 / (c * c)),
        ]),
        _ => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sign {
    Negative,
    NonPositive,
    Unknown,
}

/// Signs of `(f, f', f'')` of a piece on `[a, b]` (base coordinates).
fn piece_signs(p: &Piece, a: f64, b: f64) -> [PolySign; 3] {
    use PolySign::*;
    match &p.kind {
        PieceKind::Exp | PieceKind::ExpShift(_) => [Positive; 3],
        PieceKind::Const(_) => [Positive, NonNegative, NonNegative],
        PieceKind::Cosh => [Positive, if a > 0.0 { Positive } else { Unknown }, Positive],
        PieceKind::Sinh => [Positive, Positive, if a > 0.0 { Positive } else { Unknown }],
        PieceKind::QuinticHermite { .. } => {
            let c = p.monomial().expect("spline piece");
            let len = p.end - p.start;
            let (t0, t1) = ((a - p.start) / len, (b - p.start) / len);
            let d1 = derivative(&c);
            let d2 = derivative(&d1);
            [&c[..], &d1[..], &d2[..]]
                .map(|q| bernstein_sign(&restrict(q, t0, t1), BERNSTEIN_DEPTH))
        }
    }
}

/// Sign of each profile from the signs of `v` and `h`: `K1 = −h'v'/(hv)`,
/// `K2 = −h''/h`, `K3 = −v''/v`, `K4 = −1/h² − (h'/h)² < 0`.
fn profile_signs(v: [PolySign; 3], h: [PolySign; 3]) -> [Sign; 4] {
    use PolySign::*;
    let of = |s: &[PolySign]| {
        if s.iter().all(|&x| x == Positive) {
            Sign::Negative
        } else if s.iter().all(|&x| x != Unknown) {
            Sign::NonPositive
        } else {
            Sign::Unknown
        }
    };
    let positive = v[0] == Positive && h[0] == Positive;
    if !positive {
        return [Sign::Unknown, Sign::Unknown, Sign::Unknown, Sign::Negative];
    }
    [of(&[v[1], h[1]]), of(&[h[2]]), of(&[v[2]]), Sign::Negative]
}

fn profile_values(k: &PrincipalCurvatures) -> [Option<f64>; 4] {
    [k.k1, k.k2, Some(k.k3), k.k4]
}

struct SampledSegment {
    extremes: [Option<Extremes>; 4],
    step: f64,
    margin: f64,
    sign_certified: bool,
}

/// Depth limit for cell subdivision.
const REFINE_DEPTH: u32 = 16;

struct CellBounds {
    sup: [f64; 4],
    inf: [f64; 4],
    margin: f64,
}

/// Bounds on one cell from its end values and midpoint. The margin is twice
/// the midpoint second difference, which overestimates `|K''| δ²/8` for
/// smooth `K`. The cell is halved while the margin is not small against the
/// upper bound of a negative profile.
fn refine_cell(
    eval: &impl Fn(f64) -> Result<[Option<f64>; 4], CertifyError>,
    x0: f64,
    x1: f64,
    k0: [Option<f64>; 4],
    k1: [Option<f64>; 4],
    depth: u32,
) -> Result<CellBounds, CertifyError> {
    let xm = 0.5 * (x0 + x1);
    let km = eval(xm)?;
    let mut out = CellBounds {
        sup: [f64::NEG_INFINITY; 4],
        inf: [f64::INFINITY; 4],
        margin: 0.0,
    };
    let mut split = false;
    for q in 0..4 {
        let (Some(a), Some(m), Some(b)) = (k0[q], km[q], k1[q]) else {
            continue;
        };
        let margin = 2.0 * (a - 2.0 * m + b).abs();
        let top = a.max(m).max(b);
        out.sup[q] = top + margin;
        out.inf[q] = a.min(m).min(b) - margin;
        out.margin = out.margin.max(margin);
        if top < 0.0 && margin > -0.25 * top {
            split = true;
        }
    }
    if !split || depth >= REFINE_DEPTH {
        return Ok(out);
    }
    let left = refine_cell(eval, x0, xm, k0, km, depth + 1)?;
    let right = refine_cell(eval, xm, x1, km, k1, depth + 1)?;
    for q in 0..4 {
        out.sup[q] = left.sup[q].max(right.sup[q]);
        out.inf[q] = left.inf[q].min(right.inf[q]);
    }
    out.margin = left.margin.max(right.margin);
    Ok(out)
}

fn sample_segment(spec: &MetricSpec, a: f64, b: f64) -> Result<SampledSegment, CertifyError> {
    let cells = ((b - a) / CERTIFY_STEP).ceil().max(MIN_CELLS as f64) as usize;
    let step = (b - a) / cells as f64;
    // the domain itself is open, so its finite ends are approached from inside
    let (lo, hi) = spec.domain();
    let nudge = 1e-9 * (b - a);
    let rows: Vec<[Option<f64>; 4]> = (0..=cells)
        .map(|k| {
            let r = if k == cells { b } else { a + step * k as f64 };
            let r = r.clamp(lo + nudge, hi - nudge);
            spec.principal(r).map(|p| profile_values(&p))
        })
        .collect::<Result<_, _>>()?;

    // signs of v, h (and their derivatives) on the whole segment
    let mid = 0.5 * (a + b);
    let pv = &spec.v.pieces()[spec.v.piece_index(mid)?];
    let sv = spec.v.dilation();
    let vsig = piece_signs(pv, a / sv, b / sv);
    let hsig = if spec.n >= 3 {
        let ph = &spec.h.pieces()[spec.h.piece_index(mid)?];
        let sh = spec.h.dilation();
        piece_signs(ph, a / sh, b / sh)
    } else {
        [PolySign::Positive; 3]
    };
    let signs = profile_signs(vsig, hsig);

    let eval = |r: f64| -> Result<[Option<f64>; 4], CertifyError> {
        spec.principal(r.clamp(lo + nudge, hi - nudge))
            .map(|p| profile_values(&p))
    };
    let mut sup = [f64::NEG_INFINITY; 4];
    let mut inf = [f64::INFINITY; 4];
    let mut margin_max: f64 = 0.0;
    for i in 0..cells {
        let x0 = a + step * i as f64;
        let x1 = if i + 1 == cells { b } else { x0 + step };
        let cell = refine_cell(&eval, x0, x1, rows[i], rows[i + 1], 0)?;
        for q in 0..4 {
            sup[q] = sup[q].max(cell.sup[q]);
            inf[q] = inf[q].min(cell.inf[q]);
        }
        margin_max = margin_max.max(cell.margin);
    }

    let mut extremes = [None; 4];
    let mut sign_certified = false;
    for q in 0..4 {
        if rows[0][q].is_none() {
            continue;
        }
        let upper = match signs[q] {
            Sign::Negative if sup[q] >= 0.0 => {
                sign_certified = true;
                Bound::limit(0.0)
            }
            Sign::NonPositive if sup[q] > 0.0 => {
                sign_certified = true;
                Bound::exact(0.0)
            }
            _ => Bound::exact(sup[q]),
        };
        extremes[q] = Some(Extremes {
            sup: upper,
            inf: Bound::exact(inf[q]),
        });
    }
    Ok(SampledSegment {
        extremes,
        step,
        margin: margin_max,
        sign_certified,
    })
}

/// Segment boundaries: the domain ends and every knot of `v` and `h` inside.
fn segments(spec: &MetricSpec) -> Vec<(f64, f64)> {
    let (lo, hi) = spec.domain();
    let mut cuts: Vec<f64> = spec.v.knots();
    if spec.n >= 3 {
        cuts.extend(spec.h.knots());
    }
    cuts.retain(|&x| lo < x && x < hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut points = vec![lo];
    points.extend(cuts);
    points.push(hi);
    points.windows(2).map(|w| (w[0], w[1])).collect()
}

fn interior_point(a: f64, b: f64) -> f64 {
    match (a.is_finite(), b.is_finite()) {
        (true, true) => 0.5 * (a + b),
        (true, false) => a + 1.0,
        (false, true) => b - 1.0,
        (false, false) => 0.0,
    }
}

fn witness_points(spec: &MetricSpec, right_end: f64) -> Vec<(f64, f64)> {
    let base = spec.rho.map_or(right_end, |rho| -rho);
    [1.0, 5.0, 10.0]
        .iter()
        .filter_map(|d| {
            let r = base.min(right_end) - d;
            spec.principal(r).ok().and_then(|k| k.k4).map(|k| (r, k))
        })
        .collect()
}

/// Upper and lower bounds on `sec` over the whole domain.
pub fn certify_bounds(spec: &MetricSpec) -> Result<BoundCertificate, CertifyError> {
    let mut upper = Bound::exact(f64::NEG_INFINITY);
    let mut lower = Bound::exact(f64::INFINITY);
    let mut unbounded_at: Option<f64> = None;
    let mut method = CertificateMethod {
        segments: 0,
        analytic_segments: 0,
        sampled_segments: 0,
        max_step: 0.0,
        max_margin: 0.0,
        sign_certified_segments: 0,
    };
    let same_dilation = spec.n < 3 || spec.v.dilation() == spec.h.dilation();
    for (a, b) in segments(spec) {
        method.segments += 1;
        let mid = interior_point(a, b);
        let kv = &spec.v.pieces()[spec.v.piece_index(mid)?].kind;
        let kh = &spec.h.pieces()[if spec.n >= 3 {
            spec.h.piece_index(mid)?
        } else {
            0
        }]
        .kind;
        let s = spec.v.dilation();
        let analytic = if same_dilation {
            analytic_extremes(kv, kh, a / s, b / s)
        } else {
            None
        };
        let extremes: [Option<Extremes>; 4] = if let Some(ex) = analytic {
            method.analytic_segments += 1;
            let scale = 1.0 / (s * s);
            let present = [spec.n >= 3, spec.n >= 3, true, spec.n >= 4];
            let mut out = [None; 4];
            for q in 0..4 {
                if present[q] {
                    let e = ex[q];
                    out[q] = Some(Extremes {
                        sup: Bound::new(e.sup.value * scale, e.sup.attained),
                        inf: Bound::new(e.inf.value * scale, e.inf.attained),
                    });
                }
            }
            out
        } else {
            if !(a.is_finite() && b.is_finite()) {
                return Err(CertifyError::UnsupportedTail { lo: a, hi: b });
            }
            let seg = sample_segment(spec, a, b)?;
            method.sampled_segments += 1;
            method.max_step = method.max_step.max(seg.step);
            method.max_margin = method.max_margin.max(seg.margin);
            if seg.sign_certified {
                method.sign_certified_segments += 1;
            }
            seg.extremes
        };
        for e in extremes.iter().flatten() {
            upper = upper.max(e.sup);
            if e.inf.value == f64::NEG_INFINITY {
                unbounded_at.get_or_insert(b);
            } else {
                lower = lower.min(e.inf);
            }
        }
    }
    let lower = match unbounded_at {
        Some(b) => LowerBound::Unbounded {
            witness: witness_points(spec, b),
        },
        None => LowerBound::Finite(lower),
    };
    Ok(BoundCertificate {
        n: spec.n,
        upper,
        lower,
        method,
        strict: spec.variant.is_none_or(|v| v.strict()),
    })
}

/// [`certify_bounds`], failing when the variant's sign requirement is not met:
/// `upper < 0` for the paper construction, `sup < 0` (possibly as a limit)
/// for Fujiwara ends, `upper ≤ 0` for product ends.
pub fn certify_upper_bound(spec: &MetricSpec) -> Result<BoundCertificate, CertifyError> {
    let cert = certify_bounds(spec)?;
    let u = cert.upper;
    let failure = match spec.variant {
        Some(MetricVariant::PaperNegative) if !(u.value < 0.0) => {
            Some("strictly negative bound required")
        }
        Some(MetricVariant::Fujiwara { .. }) if !u.strictly_negative() => {
            Some("sup sec < 0 required")
        }
        Some(MetricVariant::HeintzeSchroeder) if !(u.value <= 0.0) => {
            Some("nonpositive bound required")
        }
        _ => None,
    };
    match failure {
        Some(reason) => Err(CertifyError::CertificationFailed {
            upper: u.value,
            reason: reason.into(),
        }),
        None => Ok(cert),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pinching {
    Finite {
        lower: Bound,
        upper: Bound,
    },
    Unbounded {
        upper: Bound,
        witness: Vec<(f64, f64)>,
    },
}

pub fn pinching(spec: &MetricSpec) -> Result<Pinching, CertifyError> {
    let cert = certify_bounds(spec)?;
    Ok(match cert.lower {
        LowerBound::Finite(lower) => Pinching::Finite {
            lower,
            upper: cert.upper,
        },
        LowerBound::Unbounded { witness } => Pinching::Unbounded {
            upper: cert.upper,
            witness,
        },
    })
}

/// Scale `s` with `lower / s² = −1`, and the rescaled bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rescaling {
    pub scale: f64,
    pub lower: f64,
    pub upper: f64,
}

pub fn rescale_to_unit_lower_bound(cert: &BoundCertificate) -> Result<Rescaling, CertifyError> {
    match cert.lower {
        LowerBound::Finite(b) if b.value < 0.0 && b.value.is_finite() => {
            let scale = (-b.value).sqrt();
            let s2 = scale * scale;
            Ok(Rescaling {
                scale,
                lower: b.value / s2,
                upper: cert.upper.value / s2,
            })
        }
        _ => Err(CertifyError::UnboundedInput),
    }
}
