//! Curvature of `g = dr² + g_r` in the orthonormal frame `(∂r, Y₁, …, Y_m)`.
//!
//! `g_r(Xᵢ, Xⱼ) = hᵢ(r)² δᵢⱼ` for r-independent fields `Xᵢ` with constant
//! brackets `[Xᵢ, Xⱼ] = Σ c_ij^k X_k`, and `Yᵢ = Xᵢ / hᵢ`.
//!
//! Conventions: `R(X,Y) = ∇_X∇_Y − ∇_Y∇_X − ∇_[X,Y]` and
//! `sec(A, B) = ⟨R(A,B)B, A⟩`. Frame index 0 is `∂r` and fiber index `i`
//! (0-based in this API) is frame index `i + 1`. `∇_{∂r} Yᵢ = 0`.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::warpfn::{ScalarJet, WarpError, WarpingFunction};

/// Off-diagonal tolerance for the curvature operator.
pub const DIAGONAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FrameError {
    #[error(transparent)]
    Warp(#[from] WarpError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("structure constants are not antisymmetric at ({i}, {j}, {k})")]
    NotAntisymmetric { i: usize, j: usize, k: usize },
    #[error("curvature operator is not diagonal in the coordinate bivector basis (off-diagonal {max_offdiag:e})")]
    NotDiagonalizable { max_offdiag: f64 },
    #[error("warping functions differ inside a constant-curvature block at r = {r}")]
    BlockMismatch { r: f64 },
}

/// Structure constants `c_ij^k` of the fields `Xᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameBracketData {
    m: usize,
    c: Vec<f64>,
}

impl FrameBracketData {
    /// All brackets zero.
    pub fn abelian(m: usize) -> Self {
        Self {
            m,
            c: vec![0.0; m * m * m],
        }
    }

    /// From a dense `m³` table indexed `c[(i*m + j)*m + k]`.
    pub fn new(m: usize, c: Vec<f64>) -> Result<Self, FrameError> {
        if c.len() != m * m * m {
            return Err(FrameError::Dimension(format!(
                "expected {} structure constants, got {}",
                m * m * m,
                c.len()
            )));
        }
        let data = Self { m, c };
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let (x, y) = (data.get(i, j, k), data.get(j, i, k));
                    if (x + y).abs() > 1e-12 * x.abs().max(1.0) {
                        return Err(FrameError::NotAntisymmetric { i, j, k });
                    }
                }
            }
        }
        Ok(data)
    }

    /// Sets `c_ij^k = value` and `c_ji^k = -value`.
    pub fn with(mut self, i: usize, j: usize, k: usize, value: f64) -> Self {
        let m = self.m;
        self.c[(i * m + j) * m + k] = value;
        self.c[(j * m + i) * m + k] = -value;
        self
    }

    /// Heisenberg algebra, `[X₁, X₂] = X₃`.
    pub fn heisenberg() -> Self {
        Self::abelian(3).with(0, 1, 2, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.c[(i * self.m + j) * self.m + k]
    }

    pub fn is_abelian(&self) -> bool {
        self.c.iter().all(|&x| x == 0.0)
    }
}

/// The warping functions `h₁, …, h_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct WarpProfile {
    h: Vec<WarpingFunction>,
}

impl WarpProfile {
    pub fn new(h: Vec<WarpingFunction>) -> Result<Self, FrameError> {
        if h.is_empty() {
            return Err(FrameError::Dimension(
                "profile needs at least one warping function".into(),
            ));
        }
        Ok(Self { h })
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn functions(&self) -> &[WarpingFunction] {
        &self.h
    }

    pub fn jets(&self, r: f64) -> Result<Vec<ScalarJet>, WarpError> {
        self.h.iter().map(|f| f.eval_jet(r)).collect()
    }

    fn log_derivatives(&self, r: f64) -> Result<Vec<f64>, WarpError> {
        Ok(self
            .jets(r)?
            .iter()
            .map(ScalarJet::log_derivative)
            .collect())
    }
}

/// Dense `m³` table indexed `(i, j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table3 {
    m: usize,
    data: Vec<f64>,
}

impl Table3 {
    fn zeros(m: usize) -> Self {
        Self {
            m,
            data: vec![0.0; m * m * m],
        }
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.data[(i * self.m + j) * self.m + k]
    }

    fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        self.data[(i * self.m + j) * self.m + k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0.0)
    }
}

/// `b_ijk = ⟨[Yᵢ, Yⱼ], Y_k⟩ = c_ij^k h_k / (hᵢ hⱼ)`.
pub fn bracket_coeffs(
    data: &FrameBracketData,
    prof: &WarpProfile,
    r: f64,
) -> Result<Table3, FrameError> {
    check_dims(data, prof)?;
    let m = data.dim();
    let h: Vec<f64> = prof.jets(r)?.iter().map(|j| j.value).collect();
    let mut b = Table3::zeros(m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                let c = data.get(i, j, k);
                if c != 0.0 {
                    b.set(i, j, k, c * h[k] / (h[i] * h[j]));
                }
            }
        }
    }
    Ok(b)
}

/// `Q_ijk = b_ijk + b_kij + b_kji`, twice the Koszul coefficient `⟨∇_{Yᵢ}Yⱼ, Y_k⟩`.
pub fn q_coeffs(b: &Table3) -> Table3 {
    let m = b.dim();
    let mut q = Table3::zeros(m);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                q.set(i, j, k, b.get(i, j, k) + b.get(k, i, j) + b.get(k, j, i));
            }
        }
    }
    q
}

/// `∇_{Yᵢ}Yⱼ = −(hᵢ'/hᵢ) δᵢⱼ ∂r + Σ_k (Q_ijk / 2) Y_k`, as (radial, fiber) coefficients.
pub fn connection(
    i: usize,
    j: usize,
    prof: &WarpProfile,
    b: &Table3,
    r: f64,
) -> Result<(f64, Vec<f64>), FrameError> {
    let m = b.dim();
    if prof.dim() != m || i >= m || j >= m {
        return Err(FrameError::Dimension(format!(
            "indices ({i}, {j}) with m = {m}"
        )));
    }
    let radial = if i == j {
        -prof.h[i].eval_jet(r)?.log_derivative()
    } else {
        0.0
    };
    let fiber = (0..m)
        .map(|k| 0.5 * (b.get(i, j, k) + b.get(k, i, j) + b.get(k, j, i)))
        .collect();
    Ok((radial, fiber))
}

fn mixed_from(a: &[f64], b: &Table3, i: usize, j: usize, k: usize) -> f64 {
    0.5 * (b.get(i, j, k) * (a[k] - a[j])
        + b.get(k, i, j) * (a[j] - a[k])
        + b.get(k, j, i) * (2.0 * a[i] - a[j] - a[k]))
}

fn mixed_erroneous_from(a: &[f64], b: &Table3, i: usize, j: usize, k: usize) -> f64 {
    0.5 * (a[j] + a[k]) * (b.get(j, i, k) + b.get(i, k, j) + b.get(j, k, i))
}

fn check_indices(prof: &WarpProfile, b: &Table3, idx: [usize; 3]) -> Result<(), FrameError> {
    let m = b.dim();
    if prof.dim() != m || idx.iter().any(|&x| x >= m) {
        return Err(FrameError::Dimension(format!(
            "indices {idx:?} with m = {m}"
        )));
    }
    Ok(())
}

/// `⟨R(∂r, Yᵢ)Yⱼ, Y_k⟩`, with
/// `2⟨R(∂r,Yᵢ)Yⱼ,Y_k⟩ = b_ijk (ln h_k/hⱼ)' + b_kij (ln hⱼ/h_k)' + b_kji (ln hᵢ²/(hⱼh_k))'`.
pub fn mixed_term(
    i: usize,
    j: usize,
    k: usize,
    prof: &WarpProfile,
    b: &Table3,
    r: f64,
) -> Result<f64, FrameError> {
    check_indices(prof, b, [i, j, k])?;
    Ok(mixed_from(&prof.log_derivatives(r)?, b, i, j, k))
}

/// The formula `⟨R(∂r,Yᵢ)Yⱼ,Y_k⟩ = (ln hⱼh_k)'/2 · (b_jik + b_ikj + b_jki)` found in
/// earlier literature. It is wrong when brackets do not vanish and is kept
/// only as a comparator.
pub fn mixed_term_erroneous(
    i: usize,
    j: usize,
    k: usize,
    prof: &WarpProfile,
    b: &Table3,
    r: f64,
) -> Result<f64, FrameError> {
    check_indices(prof, b, [i, j, k])?;
    Ok(mixed_erroneous_from(&prof.log_derivatives(r)?, b, i, j, k))
}

/// One block of a product fiber: the fiber indices in `indices` span a
/// factor of constant curvature `kappa` for the unscaled metric, warped by
/// the (common) function of those indices.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureBlock {
    pub indices: Vec<usize>,
    pub kappa: f64,
}

type FiberFn = dyn Fn(f64, usize, usize, usize, usize) -> f64 + Send + Sync;

/// Curvature `⟨R_{g_r}(Yᵢ,Yⱼ)Y_k,Y_l⟩` of the fiber metric.
#[derive(Clone)]
pub enum FiberCurvature {
    /// Product of constant-curvature factors, no cross terms. Indices in no
    /// block are flat.
    ConstantCurvatureBlocks(Vec<CurvatureBlock>),
    /// Left-invariant metric with orthonormal frame `Yᵢ`, from the brackets.
    LieFrame,
    /// `(r, i, j, k, l) ↦ ⟨R_{g_r}(Yᵢ,Yⱼ)Y_k,Y_l⟩`.
    Custom(Arc<FiberFn>),
}

impl fmt::Debug for FiberCurvature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiberCurvature::ConstantCurvatureBlocks(b) => {
                f.debug_tuple("ConstantCurvatureBlocks").field(b).finish()
            }
            FiberCurvature::LieFrame => f.write_str("LieFrame"),
            FiberCurvature::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl FiberCurvature {
    /// Flat fiber.
    pub fn flat() -> Self {
        FiberCurvature::ConstantCurvatureBlocks(Vec::new())
    }

    fn table(&self, b: &Table3, jets: &[ScalarJet], r: f64) -> Result<Vec<f64>, FrameError> {
        let m = b.dim();
        let mut out = vec![0.0; m * m * m * m];
        let at = |i: usize, j: usize, k: usize, l: usize| ((i * m + j) * m + k) * m + l;
        match self {
            FiberCurvature::ConstantCurvatureBlocks(blocks) => {
                for block in blocks {
                    if block.indices.iter().any(|&x| x >= m) {
                        return Err(FrameError::Dimension(format!(
                            "block {:?} with m = {m}",
                            block.indices
                        )));
                    }
                    let Some(&first) = block.indices.first() else {
                        continue;
                    };
                    let h = jets[first].value;
                    if block
                        .indices
                        .iter()
                        .any(|&x| (jets[x].value - h).abs() > 1e-12 * h.abs())
                    {
                        return Err(FrameError::BlockMismatch { r });
                    }
                    let kappa = block.kappa / (h * h);
                    for &i in &block.indices {
                        for &j in &block.indices {
                            if i == j {
                                continue;
                            }
                            out[at(i, j, j, i)] += kappa;
                            out[at(i, j, i, j)] -= kappa;
                        }
                    }
                }
            }
            FiberCurvature::LieFrame => {
                let q = q_coeffs(b);
                let g = |i, j, k| 0.5 * q.get(i, j, k);
                for i in 0..m {
                    for j in 0..m {
                        for k in 0..m {
                            for l in 0..m {
                                let mut s = 0.0;
                                for p in 0..m {
                                    s += g(j, k, p) * g(i, p, l)
                                        - g(i, k, p) * g(j, p, l)
                                        - b.get(i, j, p) * g(p, k, l);
                                }
                                out[at(i, j, k, l)] = s;
                            }
                        }
                    }
                }
            }
            FiberCurvature::Custom(f) => {
                for i in 0..m {
                    for j in 0..m {
                        for k in 0..m {
                            for l in 0..m {
                                out[at(i, j, k, l)] = f(r, i, j, k, l);
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// `⟨R(E_a,E_b)E_c,E_d⟩` over the frame `E₀ = ∂r`, `E_{i+1} = Yᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureComponents {
    n: usize,
    data: Vec<f64>,
}

impl CurvatureComponents {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    /// Number of frame vectors (the manifold dimension).
    pub fn dim(&self) -> usize {
        self.n
    }

    fn at(&self, a: usize, b: usize, c: usize, d: usize) -> usize {
        ((a * self.n + b) * self.n + c) * self.n + d
    }

    pub fn get(&self, a: usize, b: usize, c: usize, d: usize) -> f64 {
        self.data[self.at(a, b, c, d)]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, d: usize, v: f64) {
        let idx = self.at(a, b, c, d);
        self.data[idx] = v;
    }

    /// `sec(E_a, E_b) = ⟨R(E_a,E_b)E_b,E_a⟩`.
    pub fn sectional(&self, a: usize, b: usize) -> f64 {
        self.get(a, b, b, a)
    }

    /// Largest violation of antisymmetry and pair symmetry.
    pub fn symmetry_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let x = self.get(a, b, c, d);
                        worst = worst
                            .max((x + self.get(b, a, c, d)).abs())
                            .max((x + self.get(a, b, d, c)).abs())
                            .max((x - self.get(c, d, a, b)).abs());
                    }
                }
            }
        }
        worst
    }

    /// Largest `|R(a,b,c,d) + R(b,c,a,d) + R(c,a,b,d)|`.
    pub fn bianchi_defect(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    for d in 0..n {
                        let s = self.get(a, b, c, d) + self.get(b, c, a, d) + self.get(c, a, b, d);
                        worst = worst.max(s.abs());
                    }
                }
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &CurvatureComponents) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

fn check_dims(data: &FrameBracketData, prof: &WarpProfile) -> Result<(), FrameError> {
    if data.dim() != prof.dim() {
        return Err(FrameError::Dimension(format!(
            "{} structure-constant indices but {} warping functions",
            data.dim(),
            prof.dim()
        )));
    }
    Ok(())
}

/// Full curvature table of `dr² + g_r` at `r`.
///
/// Fiber block: Gauss equation `R(i,j,k,l) = R_{g_r}(i,j,k,l) − aᵢaⱼ(δ_il δ_jk − δ_ik δ_jl)`
/// with `aᵢ = hᵢ'/hᵢ`. Two radial indices: `⟨R(Yᵢ,∂r)∂r,Yⱼ⟩ = −δᵢⱼ hᵢ''/hᵢ`.
/// One radial index: [`mixed_term`]. The remaining entries follow from the
/// tensor symmetries or vanish.
pub fn assemble_curvature(
    data: &FrameBracketData,
    prof: &WarpProfile,
    fiber: &FiberCurvature,
    r: f64,
) -> Result<CurvatureComponents, FrameError> {
    check_dims(data, prof)?;
    let m = data.dim();
    let jets = prof.jets(r)?;
    let a: Vec<f64> = jets.iter().map(ScalarJet::log_derivative).collect();
    let b = bracket_coeffs(data, prof, r)?;
    let rf = fiber.table(&b, &jets, r)?;

    let mut out = CurvatureComponents::zeros(m + 1);
    for i in 0..m {
        for j in 0..m {
            for k in 0..m {
                for l in 0..m {
                    let delta = f64::from(u8::from(i == l && j == k))
                        - f64::from(u8::from(i == k && j == l));
                    let v = rf[((i * m + j) * m + k) * m + l] - a[i] * a[j] * delta;
                    out.set(i + 1, j + 1, k + 1, l + 1, v);
                }
            }
        }
    }
    if !b.is_zero() {
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let t = mixed_from(&a, &b, i, j, k);
                    let (i, j, k) = (i + 1, j + 1, k + 1);
                    out.set(0, i, j, k, t);
                    out.set(i, 0, j, k, -t);
                    out.set(j, k, 0, i, t);
                    out.set(j, k, i, 0, -t);
                }
            }
        }
    }
    for (i, jet) in jets.iter().enumerate() {
        let k = -jet.d2 / jet.value;
        let i = i + 1;
        out.set(i, 0, 0, i, k);
        out.set(0, i, i, 0, k);
        out.set(0, i, 0, i, -k);
        out.set(i, 0, i, 0, -k);
    }
    Ok(out)
}

/// The fiber data of `dr² + v² dθ² + h² g_{𝐇^{n−2}}`: `m = n − 1`,
/// `h₁ = v`, `h₂ = … = h_m = h`, a flat circle block and a curvature −1 block.
pub fn warped_hyperbolic_model(
    v: &WarpingFunction,
    h: &WarpingFunction,
    n: usize,
) -> Result<(FrameBracketData, WarpProfile, FiberCurvature), FrameError> {
    if n < 2 {
        return Err(FrameError::Dimension(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    let m = n - 1;
    let mut fns = vec![v.clone()];
    fns.extend(std::iter::repeat_n(h.clone(), m - 1));
    let blocks = if m > 1 {
        vec![CurvatureBlock {
            indices: (1..m).collect(),
            kappa: -1.0,
        }]
    } else {
        Vec::new()
    };
    Ok((
        FrameBracketData::abelian(m),
        WarpProfile::new(fns)?,
        FiberCurvature::ConstantCurvatureBlocks(blocks),
    ))
}

/// Coordinate-plane sectional curvatures of `dr² + v²dθ² + h² g_{𝐇^{n−2}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalCurvatures {
    /// `sec(Yᵢ, Y₁) = −h'v'/(hv)`, needs `n ≥ 3`.
    pub k1: Option<f64>,
    /// `sec(Yᵢ, ∂r) = −h''/h`, needs `n ≥ 3`.
    pub k2: Option<f64>,
    /// `sec(Y₁, ∂r) = −v''/v`.
    pub k3: f64,
    /// `sec(Yᵢ, Yⱼ) = −1/h² − (h'/h)²`, needs `n ≥ 4`.
    pub k4: Option<f64>,
}

impl PrincipalCurvatures {
    pub fn values(&self) -> Vec<f64> {
        [self.k1, self.k2, Some(self.k3), self.k4]
            .into_iter()
            .flatten()
            .collect()
    }

    pub fn min(&self) -> f64 {
        self.values().into_iter().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Closed-form principal curvatures from the jets of `v` and `h`.
pub fn principal_from_jets(v: ScalarJet, h: ScalarJet, n: usize) -> PrincipalCurvatures {
    let k3 = -v.d2 / v.value;
    if n < 3 {
        return PrincipalCurvatures {
            k1: None,
            k2: None,
            k3,
            k4: None,
        };
    }
    let ah = h.d1 / h.value;
    PrincipalCurvatures {
        k1: Some(-ah * v.d1 / v.value),
        k2: Some(-h.d2 / h.value),
        k3,
        k4: (n >= 4).then(|| -1.0 / (h.value * h.value) - ah * ah),
    }
}

pub fn paper_principal_curvatures(
    v: &WarpingFunction,
    h: &WarpingFunction,
    n: usize,
    r: f64,
) -> Result<PrincipalCurvatures, FrameError> {
    if n < 2 {
        return Err(FrameError::Dimension(format!(
            "dimension must be at least 2, got {n}"
        )));
    }
    let vj = v.eval_jet(r)?;
    let hj = if n >= 3 {
        h.eval_jet(r)?
    } else {
        ScalarJet::new(1.0, 0.0, 0.0)
    };
    Ok(principal_from_jets(vj, hj, n))
}

/// Curvature operator in the coordinate bivector basis `E_a ∧ E_b`, `a < b`.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureOperator {
    /// Bivector basis, lexicographic.
    pub pairs: Vec<(usize, usize)>,
    /// `M[(ab),(cd)] = ⟨R(E_a,E_b)E_d,E_c⟩`; diagonal entries are sectional curvatures.
    pub matrix: Vec<Vec<f64>>,
}

impl CurvatureOperator {
    pub fn from_components(c: &CurvatureComponents) -> Self {
        let n = c.dim();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .collect();
        let matrix = pairs
            .iter()
            .map(|&(a, b)| pairs.iter().map(|&(x, y)| c.get(a, b, y, x)).collect())
            .collect();
        Self { pairs, matrix }
    }

    pub fn max_offdiagonal(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (p, row) in self.matrix.iter().enumerate() {
            for (q, x) in row.iter().enumerate() {
                if p != q {
                    worst = worst.max(x.abs());
                }
            }
        }
        worst
    }

    /// Eigenvalues read off the diagonal once the matrix is verified diagonal.
    pub fn eigenvalues(&self) -> Result<Vec<f64>, FrameError> {
        let off = self.max_offdiagonal();
        if off > DIAGONAL_TOLERANCE {
            return Err(FrameError::NotDiagonalizable { max_offdiag: off });
        }
        Ok((0..self.pairs.len()).map(|p| self.matrix[p][p]).collect())
    }
}

/// `(min, max)` of the coordinate-plane sectional curvatures, which are the
/// extremes of `sec` when the curvature operator is diagonal.
pub fn curvature_operator_extremes(c: &CurvatureComponents) -> Result<(f64, f64), FrameError> {
    let eig = CurvatureOperator::from_components(c).eigenvalues()?;
    Ok(eig
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        }))
}
