//! Finite-difference Riemann tensor of a coordinate metric.
//!
//! Christoffel symbols come from 4th-order central differences of `g`, and
//! the curvature from 4th-order central differences of the Christoffel
//! symbols. The result shares nothing with the frame formulas in
//! [`crate::frame`] and serves as their check.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use thiserror::Error;

use crate::frame::CurvatureComponents;
use crate::warpfn::WarpingFunction;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("point {0:?} is outside the chart domain")]
    OutsideDomain(Vec<f64>),
    #[error("stencil around {point:?} with step {step} leaves the chart domain")]
    DomainMargin { point: Vec<f64>, step: f64 },
    #[error("metric is singular at {0:?}")]
    Singular(Vec<f64>),
    #[error("frame is not orthonormal (defect {0:e})")]
    FrameNotOrthonormal(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("finite-difference step must be positive, got {0}")]
    BadStep(f64),
}

type MetricFn = dyn Fn(&[f64]) -> DMatrix<f64> + Send + Sync;
type DomainFn = dyn Fn(&[f64]) -> bool + Send + Sync;

/// A metric in coordinates: `point ↦ g(point)`, defined where `inside` holds.
#[derive(Clone)]
pub struct ChartMetric {
    dim: usize,
    inside: Arc<DomainFn>,
    metric: Arc<MetricFn>,
}

impl fmt::Debug for ChartMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ChartMetric")
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

impl ChartMetric {
    pub fn new(
        dim: usize,
        inside: impl Fn(&[f64]) -> bool + Send + Sync + 'static,
        metric: impl Fn(&[f64]) -> DMatrix<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            inside: Arc::new(inside),
            metric: Arc::new(metric),
        }
    }

    /// Identity metric on `ℝⁿ`.
    pub fn euclidean(dim: usize) -> Self {
        Self::new(dim, |_| true, move |_| DMatrix::identity(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn contains(&self, p: &[f64]) -> bool {
        p.len() == self.dim && p.iter().all(|x| x.is_finite()) && (self.inside)(p)
    }

    pub fn metric_at(&self, p: &[f64]) -> Result<DMatrix<f64>, OracleError> {
        if !self.contains(p) {
            return Err(OracleError::OutsideDomain(p.to_vec()));
        }
        Ok((self.metric)(p))
    }
}

/// `dr² + v² dθ² + (h²/y²)(dx₁² + … + dx_{n−3}² + dy²)` on coordinates
/// `(r, θ, x₁, …, x_{n−3}, y)`, `y > 0`.
pub fn chart_warped_hyperbolic(
    v: &WarpingFunction,
    h: &WarpingFunction,
    n: usize,
) -> Result<ChartMetric, OracleError> {
    if n < 3 {
        return Err(OracleError::Dimension(format!(
            "warped hyperbolic chart needs n ≥ 3, got {n}"
        )));
    }
    let (v1, h1) = (v.clone(), h.clone());
    let (v2, h2) = (v.clone(), h.clone());
    Ok(ChartMetric::new(
        n,
        move |p| p[n - 1] > 0.0 && v1.contains(p[0]) && h1.contains(p[0]),
        move |p| {
            let vr = v2.eval_jet(p[0]).expect("checked domain").value;
            let hr = h2.eval_jet(p[0]).expect("checked domain").value;
            let y = p[n - 1];
            let mut g = DMatrix::zeros(n, n);
            g[(0, 0)] = 1.0;
            g[(1, 1)] = vr * vr;
            for a in 2..n {
                g[(a, a)] = hr * hr / (y * y);
            }
            g
        },
    ))
}

/// `dr² + h₁²dx² + h₂²dy² + h₃²(dz − x dy)²` on coordinates `(r, x, y, z)`.
/// The fields `∂x`, `∂y + x∂z`, `∂z` satisfy `[X₁, X₂] = X₃`.
pub fn chart_heisenberg(
    h1: &WarpingFunction,
    h2: &WarpingFunction,
    h3: &WarpingFunction,
) -> ChartMetric {
    let hs = [h1.clone(), h2.clone(), h3.clone()];
    let hd = hs.clone();
    ChartMetric::new(
        4,
        move |p| hd.iter().all(|h| h.contains(p[0])),
        move |p| {
            let [a, b, c] = [0, 1, 2].map(|i| hs[i].eval_jet(p[0]).expect("checked domain").value);
            let x = p[1];
            let c2 = c * c;
            let mut g = DMatrix::zeros(4, 4);
            g[(0, 0)] = 1.0;
            g[(1, 1)] = a * a;
            g[(2, 2)] = b * b + x * x * c2;
            g[(2, 3)] = -x * c2;
            g[(3, 2)] = -x * c2;
            g[(3, 3)] = c2;
            g
        },
    )
}

/// Orthonormal frame `(∂r, ∂θ/v, (y/h)∂x₁, …, (y/h)∂y)` of [`chart_warped_hyperbolic`].
pub fn warped_hyperbolic_frame(
    v: &WarpingFunction,
    h: &WarpingFunction,
    point: &[f64],
) -> Result<Vec<Vec<f64>>, OracleError> {
    let n = point.len();
    let vr = v
        .eval_jet(point[0])
        .map_err(|_| OracleError::OutsideDomain(point.to_vec()))?
        .value;
    let hr = h
        .eval_jet(point[0])
        .map_err(|_| OracleError::OutsideDomain(point.to_vec()))?
        .value;
    let y = point[n - 1];
    Ok((0..n)
        .map(|a| {
            let mut e = vec![0.0; n];
            e[a] = match a {
                0 => 1.0,
                1 => 1.0 / vr,
                _ => y / hr,
            };
            e
        })
        .collect())
}

/// Orthonormal frame `(∂r, ∂x/h₁, (∂y + x∂z)/h₂, ∂z/h₃)` of [`chart_heisenberg`].
pub fn heisenberg_frame(
    h: [&WarpingFunction; 3],
    point: &[f64],
) -> Result<Vec<Vec<f64>>, OracleError> {
    let mut hv = [0.0; 3];
    for (i, f) in h.iter().enumerate() {
        hv[i] = f
            .eval_jet(point[0])
            .map_err(|_| OracleError::OutsideDomain(point.to_vec()))?
            .value;
    }
    let x = point[1];
    Ok(vec![
        vec![1.0, 0.0, 0.0, 0.0],
        vec![0.0, 1.0 / hv[0], 0.0, 0.0],
        vec![0.0, 0.0, 1.0 / hv[1], x / hv[1]],
        vec![0.0, 0.0, 0.0, 1.0 / hv[2]],
    ])
}

/// Finite-difference settings; the scheme is central and 4th order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FDConfig {
    pub step: f64,
}

impl Default for FDConfig {
    fn default() -> Self {
        Self { step: 1e-3 }
    }
}

/// 4th-order central difference of `f` along coordinate `axis`.
fn central<F>(p: &[f64], axis: usize, h: f64, f: F) -> Result<Vec<f64>, OracleError>
where
    F: Fn(&[f64]) -> Result<Vec<f64>, OracleError>,
{
    let shifted = |k: f64| {
        let mut q = p.to_vec();
        q[axis] += k * h;
        f(&q)
    };
    let (m2, m1, p1, p2) = (shifted(-2.0)?, shifted(-1.0)?, shifted(1.0)?, shifted(2.0)?);
    Ok((0..m1.len())
        .map(|i| (m2[i] - 8.0 * m1[i] + 8.0 * p1[i] - p2[i]) / (12.0 * h))
        .collect())
}

/// `Γ^a_bc` at `p`, flattened `(a*n + b)*n + c`.
fn christoffel(chart: &ChartMetric, p: &[f64], h: f64) -> Result<Vec<f64>, OracleError> {
    let n = chart.dim();
    let margin = |q: &[f64]| -> Result<Vec<f64>, OracleError> {
        chart
            .metric_at(q)
            .map(|g| g.iter().copied().collect())
            .map_err(|_| OracleError::DomainMargin {
                point: p.to_vec(),
                step: h,
            })
    };
    let g = margin(p)?;
    let ginv = DMatrix::from_column_slice(n, n, &g)
        .try_inverse()
        .ok_or_else(|| OracleError::Singular(p.to_vec()))?;
    // dg[c][(a, b)] = ∂_c g_ab (column-major inside, symmetric anyway)
    let dg: Vec<Vec<f64>> = (0..n)
        .map(|c| central(p, c, h, margin))
        .collect::<Result<_, _>>()?;
    let d = |c: usize, a: usize, b: usize| dg[c][a + n * b];
    let mut gamma = vec![0.0; n * n * n];
    for a in 0..n {
        for b in 0..n {
            for c in b..n {
                let s: f64 = (0..n)
                    .map(|e| ginv[(a, e)] * (d(b, e, c) + d(c, e, b) - d(e, b, c)))
                    .sum();
                gamma[(a * n + b) * n + c] = 0.5 * s;
                gamma[(a * n + c) * n + b] = 0.5 * s;
            }
        }
    }
    Ok(gamma)
}

/// Lowered curvature `L[a][b][c][d] = ⟨R(∂_a, ∂_b)∂_c, ∂_d⟩` at `point`, with
/// `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]`.
pub fn riemann_fd(
    chart: &ChartMetric,
    point: &[f64],
    cfg: &FDConfig,
) -> Result<CurvatureComponents, OracleError> {
    let n = chart.dim();
    let h = cfg.step;
    if !(h.is_finite() && h > 0.0) {
        return Err(OracleError::BadStep(h));
    }
    if point.len() != n {
        return Err(OracleError::Dimension(format!(
            "point has {} coordinates, chart has {n}",
            point.len()
        )));
    }
    let g = chart.metric_at(point)?;
    let gamma = christoffel(chart, point, h)?;
    let dgamma: Vec<Vec<f64>> = (0..n)
        .map(|a| central(point, a, h, |q| christoffel(chart, q, h)))
        .collect::<Result<_, _>>()?;
    let gm = |a: usize, b: usize, c: usize| gamma[(a * n + b) * n + c];
    let dgm = |x: usize, a: usize, b: usize, c: usize| dgamma[x][(a * n + b) * n + c];

    // R^e_{c a b}: R(∂_a, ∂_b)∂_c = R^e_{cab} ∂_e
    let mut up = vec![0.0; n * n * n * n];
    for e in 0..n {
        for c in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut s = dgm(a, e, b, c) - dgm(b, e, a, c);
                    for f in 0..n {
                        s += gm(e, a, f) * gm(f, b, c) - gm(e, b, f) * gm(f, a, c);
                    }
                    up[((e * n + c) * n + a) * n + b] = s;
                }
            }
        }
    }
    let mut out = CurvatureComponents::zeros(n);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let s: f64 = (0..n)
                        .map(|e| g[(d, e)] * up[((e * n + c) * n + a) * n + b])
                        .sum();
                    out.set(a, b, c, d, s);
                }
            }
        }
    }
    Ok(out)
}

/// Sectional curvature of the coordinate plane `(∂_a, ∂_b)`.
pub fn coordinate_sectional(
    chart: &ChartMetric,
    table: &CurvatureComponents,
    point: &[f64],
    a: usize,
    b: usize,
) -> Result<f64, OracleError> {
    let g = chart.metric_at(point)?;
    Ok(table.get(a, b, b, a) / (g[(a, a)] * g[(b, b)] - g[(a, b)] * g[(a, b)]))
}

/// Contracts a coordinate table with `frame` (vectors in coordinates).
pub fn contract(table: &CurvatureComponents, frame: &[Vec<f64>]) -> CurvatureComponents {
    let n = table.dim();
    let mut cur: Vec<f64> = (0..n.pow(4))
        .map(|idx| {
            let (a, b, c, d) = (
                idx / (n * n * n),
                (idx / (n * n)) % n,
                (idx / n) % n,
                idx % n,
            );
            table.get(a, b, c, d)
        })
        .collect();
    // contract one slot at a time; after four passes the slot order is restored
    for _ in 0..4 {
        let mut next = vec![0.0; n.pow(4)];
        for big in 0..n {
            for rest in 0..n.pow(3) {
                let s: f64 = (0..n)
                    .map(|a| frame[big][a] * cur[a * n.pow(3) + rest])
                    .sum();
                // rotate: the contracted slot moves to the back
                next[rest * n + big] = s;
            }
        }
        cur = next;
    }
    let mut out = CurvatureComponents::zeros(n);
    for (idx, v) in cur.into_iter().enumerate() {
        out.set(
            idx / (n * n * n),
            (idx / (n * n)) % n,
            (idx / n) % n,
            idx % n,
            v,
        );
    }
    out
}

/// Worst componentwise discrepancy between the oracle and an expected frame table.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameReport {
    pub max_discrepancy: f64,
    pub worst: (usize, usize, usize, usize),
    pub oracle: CurvatureComponents,
}

fn frame_defect(
    chart: &ChartMetric,
    frame: &[Vec<f64>],
    point: &[f64],
) -> Result<f64, OracleError> {
    let g = chart.metric_at(point)?;
    let n = chart.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let ip: f64 = (0..n)
                .flat_map(|a| (0..n).map(move |b| (a, b)))
                .map(|(a, b)| frame[i][a] * g[(a, b)] * frame[j][b])
                .sum();
            worst = worst.max((ip - f64::from(u8::from(i == j))).abs());
        }
    }
    Ok(worst)
}

/// Frame components of the oracle tensor compared against `expected`.
pub fn frame_compare(
    chart: &ChartMetric,
    frame: &[Vec<f64>],
    point: &[f64],
    cfg: &FDConfig,
    expected: &CurvatureComponents,
) -> Result<FrameReport, OracleError> {
    let n = chart.dim();
    if frame.len() != n || frame.iter().any(|e| e.len() != n) || expected.dim() != n {
        return Err(OracleError::Dimension(format!(
            "frame or table does not match chart dimension {n}"
        )));
    }
    let defect = frame_defect(chart, frame, point)?;
    if defect > 1e-10 {
        return Err(OracleError::FrameNotOrthonormal(defect));
    }
    let oracle = contract(&riemann_fd(chart, point, cfg)?, frame);
    let mut report = FrameReport {
        max_discrepancy: 0.0,
        worst: (0, 0, 0, 0),
        oracle,
    };
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    let diff = (report.oracle.get(a, b, c, d) - expected.get(a, b, c, d)).abs();
                    if diff > report.max_discrepancy {
                        report.max_discrepancy = diff;
                        report.worst = (a, b, c, d);
                    }
                }
            }
        }
    }
    Ok(report)
}

/// Outcome of a step-halving test.
#[derive(Debug, Clone, PartialEq)]
pub enum ConvergenceStatus {
    Reliable,
    /// Error at the coarse step is already at round-off level; no order is computed.
    RoundoffFloor,
    Unreliable(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub step: f64,
    pub error_step: f64,
    pub error_half: f64,
    pub order: Option<f64>,
    pub status: ConvergenceStatus,
}

/// Default coarse step of [`convergence_check`]; large enough that truncation
/// error dominates round-off at both steps.
pub const CONVERGENCE_STEP: f64 = 0.04;

/// Runs [`riemann_fd`] at `step` and `step/2` against the constant-curvature
/// truth `κ (g_bc g_ad − g_ac g_bd)` and reports `log₂` of the error ratio.
pub fn convergence_check(
    chart: &ChartMetric,
    point: &[f64],
    step: f64,
    kappa: f64,
) -> ConvergenceReport {
    let mut report = ConvergenceReport {
        step,
        error_step: f64::NAN,
        error_half: f64::NAN,
        order: None,
        status: ConvergenceStatus::Reliable,
    };
    let g = match chart.metric_at(point) {
        Ok(g) => g,
        Err(e) => {
            report.status = ConvergenceStatus::Unreliable(e.to_string());
            return report;
        }
    };
    let n = chart.dim();
    let err = |h: f64| -> Result<f64, OracleError> {
        let t = riemann_fd(chart, point, &FDConfig { step: h })?;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let truth = kappa * (g[(b, c)] * g[(a, d)] - g[(a, c)] * g[(b, d)]);
                        worst = worst.max((t.get(a, b, c, d) - truth).abs());
                    }
                }
            }
        }
        Ok(worst)
    };
    let (e1, e2) = match (err(step), err(0.5 * step)) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => {
            report.status = ConvergenceStatus::Unreliable(e.to_string());
            return report;
        }
    };
    report.error_step = e1;
    report.error_half = e2;
    // round-off of a second difference of O(1) data at the fine step
    let floor = 64.0 * f64::EPSILON / (0.25 * step * step);
    if e1 <= floor {
        report.status = ConvergenceStatus::RoundoffFloor;
        return report;
    }
    let order = (e1 / e2).log2();
    report.order = Some(order);
    if e2 <= floor {
        report.status =
            ConvergenceStatus::Unreliable(format!("fine-step error {e2:e} is at round-off level"));
    } else if !(3.0..=5.0).contains(&order) {
        report.status =
            ConvergenceStatus::Unreliable(format!("observed order {order:.3} is far from 4"));
    }
    report
}
