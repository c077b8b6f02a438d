//! Quintic Hermite segments and Bernstein sign tests for polynomial pieces.

use super::ScalarJet;

/// Evaluates the quintic matching `left` at `a` and `right` at `b` (full 2-jets).
///
/// Uses the Hermite basis in `t = (r - a) / (b - a)`; the value basis pair is
/// folded into `left.value + (right.value - left.value) * H(t)` so endpoint
/// jets are reproduced exactly.
pub(crate) fn hermite_eval(
    a: f64,
    b: f64,
    left: &ScalarJet,
    right: &ScalarJet,
    r: f64,
) -> ScalarJet {
    let len = b - a;
    let t = (r - a) / len;
    let (t2, t3, t4) = (t * t, t * t * t, t * t * t * t);
    let t5 = t4 * t;

    let dv = right.value - left.value;
    let p0d = left.d1 * len;
    let p0dd = left.d2 * len * len;
    let p1d = right.d1 * len;
    let p1dd = right.d2 * len * len;

    // (value, first, second) derivative in t of each basis function
    let h1 = (
        t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5,
        1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4,
        -36.0 * t + 96.0 * t2 - 60.0 * t3,
    );
    let h2 = (
        0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5),
        0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4),
        0.5 * (2.0 - 18.0 * t + 36.0 * t2 - 20.0 * t3),
    );
    let h3 = (
        10.0 * t3 - 15.0 * t4 + 6.0 * t5,
        30.0 * t2 - 60.0 * t3 + 30.0 * t4,
        60.0 * t - 180.0 * t2 + 120.0 * t3,
    );
    let h4 = (
        -4.0 * t3 + 7.0 * t4 - 3.0 * t5,
        -12.0 * t2 + 28.0 * t3 - 15.0 * t4,
        -24.0 * t + 84.0 * t2 - 60.0 * t3,
    );
    let h5 = (
        0.5 * (t3 - 2.0 * t4 + t5),
        0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4),
        0.5 * (6.0 * t - 24.0 * t2 + 20.0 * t3),
    );

    let value = left.value + dv * h3.0 + p0d * h1.0 + p0dd * h2.0 + p1d * h4.0 + p1dd * h5.0;
    let dt = dv * h3.1 + p0d * h1.1 + p0dd * h2.1 + p1d * h4.1 + p1dd * h5.1;
    let dtt = dv * h3.2 + p0d * h1.2 + p0dd * h2.2 + p1d * h4.2 + p1dd * h5.2;
    ScalarJet::new(value, dt / len, dtt / (len * len))
}

/// Monomial coefficients `c[k]` of the quintic in `t = (r - a)/(b - a)`.
pub(crate) fn hermite_monomial(len: f64, left: &ScalarJet, right: &ScalarJet) -> [f64; 6] {
    let p0 = left.value;
    let p0d = left.d1 * len;
    let p0dd = left.d2 * len * len;
    let p1 = right.value;
    let p1d = right.d1 * len;
    let p1dd = right.d2 * len * len;
    let dv = p1 - p0;
    [
        p0,
        p0d,
        0.5 * p0dd,
        10.0 * dv - 6.0 * p0d - 4.0 * p1d - 0.5 * (3.0 * p0dd - p1dd),
        -15.0 * dv + 8.0 * p0d + 7.0 * p1d + 0.5 * (3.0 * p0dd - 2.0 * p1dd),
        6.0 * dv - 3.0 * p0d - 3.0 * p1d - 0.5 * (p0dd - p1dd),
    ]
}

/// Coefficients of the derivative (in the same variable).
pub(crate) fn derivative(coeffs: &[f64]) -> Vec<f64> {
    if coeffs.len() <= 1 {
        return vec![0.0];
    }
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| k as f64 * c)
        .collect()
}

/// Re-expresses `p(t)` on the subinterval `[t0, t1]` as `q(s) = p(t0 + (t1 - t0) s)`.
pub(crate) fn restrict(coeffs: &[f64], t0: f64, t1: f64) -> Vec<f64> {
    let n = coeffs.len();
    let span = t1 - t0;
    // Horner composition with the affine map s -> t0 + span * s
    let mut out = vec![0.0; n];
    for &c in coeffs.iter().rev() {
        // out <- out * (t0 + span s) + c
        let mut next = vec![0.0; n];
        for k in 0..n {
            if out[k] == 0.0 {
                continue;
            }
            next[k] += out[k] * t0;
            if k + 1 < n {
                next[k + 1] += out[k] * span;
            }
        }
        next[0] += c;
        out = next;
    }
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

fn to_bernstein(coeffs: &[f64]) -> Vec<f64> {
    let n = coeffs.len() - 1;
    (0..=n)
        .map(|k| {
            (0..=k)
                .map(|j| binomial(k, j) / binomial(n, j) * coeffs[j])
                .sum()
        })
        .collect()
}

/// Sign of a polynomial on `[0, 1]` established from its Bernstein form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolySign {
    Positive,
    NonNegative,
    Unknown,
}

/// Classifies the sign of `p` on `[0, 1]`, subdividing up to `depth` times when
/// the Bernstein coefficients are inconclusive.
pub(crate) fn bernstein_sign(coeffs: &[f64], depth: u32) -> PolySign {
    let b = to_bernstein(coeffs);
    if b.iter().all(|&x| x > 0.0) {
        return PolySign::Positive;
    }
    if b.iter().all(|&x| x >= 0.0) {
        return PolySign::NonNegative;
    }
    // A negative endpoint value is a definite failure.
    if b[0] < 0.0 || b[b.len() - 1] < 0.0 || depth == 0 {
        return PolySign::Unknown;
    }
    let left = bernstein_sign(&restrict(coeffs, 0.0, 0.5), depth - 1);
    let right = bernstein_sign(&restrict(coeffs, 0.5, 1.0), depth - 1);
    match (left, right) {
        (PolySign::Positive, PolySign::Positive) => PolySign::Positive,
        (PolySign::Unknown, _) | (_, PolySign::Unknown) => PolySign::Unknown,
        _ => PolySign::NonNegative,
    }
}
