//! Line-oriented text form of a warping function.
//!
//! ```text
//! dilation = 1.0000000000000000e0
//! piece = -inf -9.9328263968697070e0 exp
//! piece = -9.9328263968697070e0 1.0000000000000001e-1 quintic l0 l1 l2 r0 r1 r2
//! piece = 1.0000000000000001e-1 inf sinh
//! ```
//!
//! Numbers are written with 17 significant digits, which round-trips `f64`
//! exactly. Keys may carry a prefix (`v.piece`, `h.dilation`) so several
//! functions can share one file.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Piece, PieceKind, ScalarJet, WarpError, WarpingFunction};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing {0}")]
    Missing(String),
    #[error(transparent)]
    Invalid(#[from] WarpError),
}

/// Formats a number with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn write_function(f: &WarpingFunction) -> String {
    write_prefixed(f, "")
}

/// Serializes `f` with every key prefixed by `prefix`.
pub fn write_prefixed(f: &WarpingFunction, prefix: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{prefix}dilation = {}", fmt_real(f.dilation()));
    for p in f.pieces() {
        let _ = write!(
            out,
            "{prefix}piece = {} {} {}",
            fmt_real(p.start),
            fmt_real(p.end),
            p.kind.name()
        );
        match &p.kind {
            PieceKind::ExpShift(x) | PieceKind::Const(x) => {
                let _ = write!(out, " {}", fmt_real(*x));
            }
            PieceKind::QuinticHermite { left, right } => {
                for x in [
                    left.value,
                    left.d1,
                    left.d2,
                    right.value,
                    right.d1,
                    right.d2,
                ] {
                    let _ = write!(out, " {}", fmt_real(x));
                }
            }
            _ => {}
        }
        out.push('\n');
    }
    out
}

/// Splits `text` into `(line number, key, value)` triples, skipping blank
/// lines and `#` comments.
pub fn key_values(text: &str) -> Result<Vec<(usize, String, String)>, ParseError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| ParseError::Syntax {
            line: i + 1,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        out.push((i + 1, k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn parse_real(line: usize, s: &str) -> Result<f64, ParseError> {
    s.parse::<f64>().map_err(|_| ParseError::Syntax {
        line,
        message: format!("not a number: `{s}`"),
    })
}

fn parse_piece(line: usize, value: &str) -> Result<Piece, ParseError> {
    let fields: Vec<&str> = value.split_whitespace().collect();
    let syntax = |message: String| ParseError::Syntax { line, message };
    if fields.len() < 3 {
        return Err(syntax(format!(
            "piece needs `start end kind`, got `{value}`"
        )));
    }
    let start = parse_real(line, fields[0])?;
    let end = parse_real(line, fields[1])?;
    let nums = fields[3..]
        .iter()
        .map(|s| parse_real(line, s))
        .collect::<Result<Vec<_>, _>>()?;
    let arity = |n: usize| {
        if nums.len() == n {
            Ok(())
        } else {
            Err(syntax(format!(
                "`{}` takes {n} parameters, got {}",
                fields[2],
                nums.len()
            )))
        }
    };
    let kind = match fields[2] {
        "exp" => arity(0).map(|_| PieceKind::Exp)?,
        "cosh" => arity(0).map(|_| PieceKind::Cosh)?,
        "sinh" => arity(0).map(|_| PieceKind::Sinh)?,
        "expshift" => arity(1).map(|_| PieceKind::ExpShift(nums[0]))?,
        "const" => arity(1).map(|_| PieceKind::Const(nums[0]))?,
        "quintic" => arity(6).map(|_| PieceKind::QuinticHermite {
            left: ScalarJet::new(nums[0], nums[1], nums[2]),
            right: ScalarJet::new(nums[3], nums[4], nums[5]),
        })?,
        other => return Err(syntax(format!("unknown piece kind `{other}`"))),
    };
    Ok(Piece::new(start, end, kind))
}

/// Builds the function described by the `prefix`-keyed entries of `entries`;
/// other keys are ignored.
pub fn parse_prefixed(
    entries: &[(usize, String, String)],
    prefix: &str,
) -> Result<WarpingFunction, ParseError> {
    let mut dilation = 1.0;
    let mut pieces = Vec::new();
    for (line, key, value) in entries {
        let Some(rest) = key.strip_prefix(prefix) else {
            continue;
        };
        match rest {
            "dilation" => dilation = parse_real(*line, value)?,
            "piece" => pieces.push(parse_piece(*line, value)?),
            _ => {}
        }
    }
    if pieces.is_empty() {
        return Err(ParseError::Missing(format!("{prefix}piece")));
    }
    Ok(WarpingFunction::with_dilation(pieces, dilation)?)
}

impl std::str::FromStr for WarpingFunction {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_prefixed(&key_values(s)?, "")
    }
}
