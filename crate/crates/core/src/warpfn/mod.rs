//! Warping functions of the radial coordinate.
//!
//! A [`WarpingFunction`] is a positive function on an open interval of `r`,
//! assembled from analytic pieces (`e^r`, `e^r + τ`, `cosh`, `sinh`,
//! constants) and quintic Hermite segments, glued with matching 2-jets. The
//! whole function may carry a dilation `s`, meaning `f(r) = s · base(r / s)`;
//! this is the warping function of the metric scaled by `s²`.

mod interp;
mod poly;
mod text;

use std::fmt;

use thiserror::Error;

pub use interp::{
    build_interpolant, choose_rho, tangent_intersection, InterpolantMethod, InterpolantPair,
    MetricVariant, PositivityReport, MAX_RETRIES, POSITIVITY_GRID_STEP, RETRY_GROWTH,
};
pub use poly::PolySign;
pub use text::{fmt_real, key_values, parse_prefixed, parse_real, write_prefixed, ParseError};

pub(crate) use poly::{bernstein_sign, derivative, hermite_monomial, restrict};

/// Tolerance for jet agreement at interior knots.
pub const GLUING_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WarpError {
    #[error("r = {r} is outside the domain ({lo}, {hi})")]
    OutOfDomain { r: f64, lo: f64, hi: f64 },
    #[error("invalid piece: {0}")]
    InvalidPiece(String),
    #[error("pieces do not partition the domain: {0}")]
    Partition(String),
    #[error("jet mismatch {mismatch:e} at knot r = {knot}")]
    GluingMismatch { knot: f64, mismatch: f64 },
    #[error("warping function is not positive near r = {r}")]
    NonPositive { r: f64 },
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(f64),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("construction failed after {attempts} attempts (last rho = {last_rho}): {reason}")]
    ConstructionFailed {
        attempts: usize,
        last_rho: f64,
        reason: String,
    },
}

/// Value and first two derivatives of a scalar function of `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarJet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl ScalarJet {
    pub const fn new(value: f64, d1: f64, d2: f64) -> Self {
        Self { value, d1, d2 }
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite() && self.d1.is_finite() && self.d2.is_finite()
    }

    pub fn max_abs_diff(&self, other: &ScalarJet) -> f64 {
        (self.value - other.value)
            .abs()
            .max((self.d1 - other.d1).abs())
            .max((self.d2 - other.d2).abs())
    }

    fn max_abs(&self) -> f64 {
        self.value.abs().max(self.d1.abs()).max(self.d2.abs())
    }

    /// `(ln f)' = f'/f`.
    pub fn log_derivative(&self) -> f64 {
        self.d1 / self.value
    }
}

/// Closed form (or spline) used on one piece.
#[derive(Debug, Clone, PartialEq)]
pub enum PieceKind {
    /// `e^r`
    Exp,
    /// `e^r + τ`, `τ > 0`
    ExpShift(f64),
    Cosh,
    /// `sinh r`; only admissible for `r > 0`.
    Sinh,
    /// Positive constant.
    Const(f64),
    /// Quintic matching `left` at the piece start and `right` at the piece end.
    QuinticHermite {
        left: ScalarJet,
        right: ScalarJet,
    },
}

impl PieceKind {
    pub fn is_analytic(&self) -> bool {
        !matches!(self, PieceKind::QuinticHermite { .. })
    }

    pub(crate) fn eval(&self, start: f64, end: f64, r: f64) -> ScalarJet {
        match *self {
            PieceKind::Exp => {
                let e = r.exp();
                ScalarJet::new(e, e, e)
            }
            PieceKind::ExpShift(tau) => {
                let e = r.exp();
                ScalarJet::new(e + tau, e, e)
            }
            PieceKind::Cosh => ScalarJet::new(r.cosh(), r.sinh(), r.cosh()),
            PieceKind::Sinh => ScalarJet::new(r.sinh(), r.cosh(), r.sinh()),
            PieceKind::Const(c) => ScalarJet::new(c, 0.0, 0.0),
            PieceKind::QuinticHermite {
                ref left,
                ref right,
            } => poly::hermite_eval(start, end, left, right, r),
        }
    }

    pub(crate) fn name(&self) -> &'static str {
        match self {
            PieceKind::Exp => "exp",
            PieceKind::ExpShift(_) => "expshift",
            PieceKind::Cosh => "cosh",
            PieceKind::Sinh => "sinh",
            PieceKind::Const(_) => "const",
            PieceKind::QuinticHermite { .. } => "quintic",
        }
    }
}

/// One piece on the half-open interval `[start, end)` (base coordinates).
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub start: f64,
    pub end: f64,
    pub kind: PieceKind,
}

impl Piece {
    pub fn new(start: f64, end: f64, kind: PieceKind) -> Self {
        Self { start, end, kind }
    }

    pub(crate) fn eval(&self, r: f64) -> ScalarJet {
        self.kind.eval(self.start, self.end, r)
    }

    /// Monomial coefficients in `t = (r - start)/(end - start)` for spline pieces.
    pub(crate) fn monomial(&self) -> Option<[f64; 6]> {
        match &self.kind {
            PieceKind::QuinticHermite { left, right } => {
                Some(hermite_monomial(self.end - self.start, left, right))
            }
            _ => None,
        }
    }
}

/// Positive piecewise function of `r` with C² gluing at interior knots.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpingFunction {
    pieces: Vec<Piece>,
    dilation: f64,
}

impl WarpingFunction {
    /// Validates the partition, positivity and C² gluing of `pieces`.
    pub fn new(pieces: Vec<Piece>) -> Result<Self, WarpError> {
        Self::with_dilation(pieces, 1.0)
    }

    pub fn with_dilation(pieces: Vec<Piece>, dilation: f64) -> Result<Self, WarpError> {
        if !(dilation.is_finite() && dilation > 0.0) {
            return Err(WarpError::InvalidParams(format!(
                "dilation must be positive, got {dilation}"
            )));
        }
        validate_pieces(&pieces)?;
        Ok(Self { pieces, dilation })
    }

    /// A single analytic piece on `(lo, hi)`.
    pub fn analytic(kind: PieceKind, lo: f64, hi: f64) -> Result<Self, WarpError> {
        Self::new(vec![Piece::new(lo, hi, kind)])
    }

    /// `e^r` on the whole line.
    pub fn exp() -> Self {
        Self::analytic(PieceKind::Exp, f64::NEG_INFINITY, f64::INFINITY).expect("exp is valid")
    }

    /// `e^r + τ` on the whole line.
    pub fn exp_shift(tau: f64) -> Result<Self, WarpError> {
        Self::analytic(PieceKind::ExpShift(tau), f64::NEG_INFINITY, f64::INFINITY)
    }

    /// `cosh r` on the whole line.
    pub fn cosh() -> Self {
        Self::analytic(PieceKind::Cosh, f64::NEG_INFINITY, f64::INFINITY).expect("cosh is valid")
    }

    /// `sinh r` on `(0, ∞)`.
    pub fn sinh() -> Self {
        Self::analytic(PieceKind::Sinh, 0.0, f64::INFINITY).expect("sinh is valid")
    }

    pub fn constant(c: f64) -> Result<Self, WarpError> {
        Self::analytic(PieceKind::Const(c), f64::NEG_INFINITY, f64::INFINITY)
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn dilation(&self) -> f64 {
        self.dilation
    }

    /// Open domain `(lo, hi)` in `r`.
    pub fn domain(&self) -> (f64, f64) {
        let s = self.dilation;
        (
            self.pieces[0].start * s,
            self.pieces[self.pieces.len() - 1].end * s,
        )
    }

    pub fn contains(&self, r: f64) -> bool {
        let (lo, hi) = self.domain();
        lo < r && r < hi
    }

    /// Interior knots in `r`.
    pub fn knots(&self) -> Vec<f64> {
        self.pieces[1..]
            .iter()
            .map(|p| p.start * self.dilation)
            .collect()
    }

    /// Index of the piece owning `r` (pieces are `[start, end)`).
    pub fn piece_index(&self, r: f64) -> Result<usize, WarpError> {
        if !self.contains(r) {
            let (lo, hi) = self.domain();
            return Err(WarpError::OutOfDomain { r, lo, hi });
        }
        let u = r / self.dilation;
        Ok(self.pieces.iter().rposition(|p| p.start <= u).unwrap_or(0))
    }

    /// `(f(r), f'(r), f''(r))`.
    pub fn eval_jet(&self, r: f64) -> Result<ScalarJet, WarpError> {
        let idx = self.piece_index(r)?;
        let s = self.dilation;
        let base = self.pieces[idx].eval(r / s);
        Ok(ScalarJet::new(s * base.value, base.d1, base.d2 / s))
    }

    /// The warping function of the metric scaled by `scale²`.
    pub fn rescaled(&self, scale: f64) -> Result<Self, WarpError> {
        Self::with_dilation(self.pieces.clone(), self.dilation * scale)
    }

    /// Largest jet disagreement over interior knots.
    pub fn max_knot_mismatch(&self) -> f64 {
        self.pieces
            .windows(2)
            .map(|w| w[0].eval(w[1].start).max_abs_diff(&w[1].eval(w[1].start)))
            .fold(0.0, f64::max)
    }
}

fn validate_pieces(pieces: &[Piece]) -> Result<(), WarpError> {
    if pieces.is_empty() {
        return Err(WarpError::Partition("no pieces".into()));
    }
    for (i, p) in pieces.iter().enumerate() {
        if p.start.is_nan() || p.end.is_nan() || p.start >= p.end {
            return Err(WarpError::Partition(format!(
                "piece {i} has empty interval [{}, {})",
                p.start, p.end
            )));
        }
        if i > 0 && p.start.is_infinite() {
            return Err(WarpError::Partition(format!(
                "interior knot {i} is not finite"
            )));
        }
        if i + 1 < pieces.len() && p.end.is_infinite() {
            return Err(WarpError::Partition(format!(
                "interior knot after piece {i} is not finite"
            )));
        }
        if i + 1 < pieces.len() && p.end != pieces[i + 1].start {
            return Err(WarpError::Partition(format!(
                "gap or overlap between {} and {}",
                p.end,
                pieces[i + 1].start
            )));
        }
        validate_kind(p, i == 0)?;
    }
    for w in pieces.windows(2) {
        let knot = w[1].start;
        let l = w[0].eval(knot);
        let r = w[1].eval(knot);
        let mismatch = l.max_abs_diff(&r);
        if !(mismatch <= GLUING_TOLERANCE * l.max_abs().max(1.0)) {
            return Err(WarpError::GluingMismatch { knot, mismatch });
        }
    }
    Ok(())
}

fn validate_kind(p: &Piece, first: bool) -> Result<(), WarpError> {
    match p.kind {
        PieceKind::Exp | PieceKind::Cosh => Ok(()),
        PieceKind::ExpShift(tau) => {
            if tau.is_finite() && tau > 0.0 {
                Ok(())
            } else {
                Err(WarpError::InvalidPiece(format!(
                    "exp shift needs tau > 0, got {tau}"
                )))
            }
        }
        PieceKind::Const(c) => {
            if c.is_finite() && c > 0.0 {
                Ok(())
            } else {
                Err(WarpError::InvalidPiece(format!(
                    "constant must be positive, got {c}"
                )))
            }
        }
        PieceKind::Sinh => {
            // the domain's own lower end is open, so sinh may start at 0 there
            if p.start > 0.0 || (first && p.start == 0.0) {
                Ok(())
            } else {
                Err(WarpError::NonPositive { r: p.start })
            }
        }
        PieceKind::QuinticHermite { left, right } => {
            if !(p.start.is_finite() && p.end.is_finite()) {
                return Err(WarpError::InvalidPiece(
                    "quintic piece needs a finite interval".into(),
                ));
            }
            if !(left.is_finite() && right.is_finite()) {
                return Err(WarpError::InvalidPiece(
                    "quintic jets must be finite".into(),
                ));
            }
            let coeffs = hermite_monomial(p.end - p.start, &left, &right);
            if bernstein_sign(&coeffs, 12) == PolySign::Positive {
                return Ok(());
            }
            // fall back to dense sampling at the positivity grid step
            let cells = ((p.end - p.start) / POSITIVITY_GRID_STEP).ceil().max(1.0) as usize;
            for k in 0..=cells {
                let r = p.start + (p.end - p.start) * k as f64 / cells as f64;
                if !(p.eval(r).value > 0.0) {
                    return Err(WarpError::NonPositive { r });
                }
            }
            Ok(())
        }
    }
}

impl fmt::Display for WarpingFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&text::write_function(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_jets() {
        let j = WarpingFunction::exp().eval_jet(0.0).unwrap();
        assert_eq!(j, ScalarJet::new(1.0, 1.0, 1.0));
        let j = WarpingFunction::cosh().eval_jet(0.0).unwrap();
        assert_eq!(j, ScalarJet::new(1.0, 0.0, 1.0));
        let j = WarpingFunction::sinh().eval_jet(1.0).unwrap();
        // sinh(1), cosh(1) from the Taylor series oracle
        let (mut s, mut c, mut term) = (0.0, 0.0, 1.0);
        for k in 0..30 {
            if k > 0 {
                term /= k as f64;
            }
            if k % 2 == 0 {
                c += term;
            } else {
                s += term;
            }
        }
        assert!(
            (j.value - s).abs() < 1e-15 && (j.d1 - c).abs() < 1e-15 && (j.d2 - s).abs() < 1e-15
        );
        assert!((j.value - 1.175201).abs() < 1e-6 && (j.d1 - 1.543081).abs() < 1e-6);
    }

    #[test]
    fn out_of_domain() {
        let f = WarpingFunction::sinh();
        assert!(matches!(
            f.eval_jet(0.0),
            Err(WarpError::OutOfDomain { .. })
        ));
        assert!(matches!(
            f.eval_jet(-1.0),
            Err(WarpError::OutOfDomain { .. })
        ));
        let g = WarpingFunction::analytic(PieceKind::Cosh, -1.0, 1.0).unwrap();
        assert!(g.eval_jet(1.0).is_err());
        assert!(g.eval_jet(0.999).is_ok());
    }

    #[test]
    fn rejects_bad_partitions() {
        let gap = vec![
            Piece::new(f64::NEG_INFINITY, 0.0, PieceKind::Exp),
            Piece::new(0.1, f64::INFINITY, PieceKind::Exp),
        ];
        assert!(matches!(
            WarpingFunction::new(gap),
            Err(WarpError::Partition(_))
        ));
        let kink = vec![
            Piece::new(f64::NEG_INFINITY, 0.0, PieceKind::Exp),
            Piece::new(0.0, f64::INFINITY, PieceKind::Cosh),
        ];
        assert!(matches!(
            WarpingFunction::new(kink),
            Err(WarpError::GluingMismatch { .. })
        ));
        assert!(WarpingFunction::constant(0.0).is_err());
        assert!(WarpingFunction::exp_shift(-0.5).is_err());
        assert!(WarpingFunction::analytic(PieceKind::Sinh, -1.0, 1.0).is_err());
    }

    #[test]
    fn spline_glued_between_analytic_tails() {
        let a = -1.0;
        let b = 0.5;
        let left = PieceKind::Exp.eval(0.0, 0.0, a);
        let right = PieceKind::Cosh.eval(0.0, 0.0, b);
        // cosh'(0.5) < e^-1 * ... check only gluing here; positivity is separate
        let f = WarpingFunction::new(vec![
            Piece::new(f64::NEG_INFINITY, a, PieceKind::Exp),
            Piece::new(a, b, PieceKind::QuinticHermite { left, right }),
            Piece::new(b, f64::INFINITY, PieceKind::Cosh),
        ])
        .unwrap();
        assert!(f.max_knot_mismatch() <= 1e-12);
        assert_eq!(f.knots(), vec![a, b]);
        assert_eq!(f.piece_index(a).unwrap(), 1);
        assert_eq!(f.piece_index(b).unwrap(), 2);
    }

    #[test]
    fn dilation_scales_jets() {
        let f = WarpingFunction::exp().rescaled(2.0).unwrap();
        let j = f.eval_jet(1.0).unwrap();
        let e = 0.5_f64.exp();
        assert!((j.value - 2.0 * e).abs() < 1e-15);
        assert!((j.d1 - e).abs() < 1e-15);
        assert!((j.d2 - e / 2.0).abs() < 1e-15);
        let s = WarpingFunction::sinh().rescaled(3.0).unwrap();
        assert_eq!(s.domain(), (0.0, f64::INFINITY));
    }

    #[test]
    fn central_difference_matches_d1_at_second_order() {
        // ratio test: halving the step divides the error by ~4
        let a = -2.0;
        let b = 0.3;
        let left = PieceKind::Exp.eval(0.0, 0.0, a);
        let right = PieceKind::Cosh.eval(0.0, 0.0, b);
        let f = WarpingFunction::new(vec![
            Piece::new(f64::NEG_INFINITY, a, PieceKind::Exp),
            Piece::new(a, b, PieceKind::QuinticHermite { left, right }),
            Piece::new(b, f64::INFINITY, PieceKind::Cosh),
        ])
        .unwrap();
        for &r in &[-3.0, -1.1, 0.0, 1.2] {
            let j = f.eval_jet(r).unwrap();
            let err = |d: f64| {
                ((f.eval_jet(r + d).unwrap().value - f.eval_jet(r - d).unwrap().value) / (2.0 * d)
                    - j.d1)
                    .abs()
            };
            let (e1, e2) = (err(1e-2), err(5e-3));
            let ratio = e1 / e2;
            assert!((3.5..4.5).contains(&ratio), "r = {r}: ratio {ratio}");
        }
    }
}
