//! Flat circle bundles with rotation holonomy, given at the level of
//! `H₁(X) = ℤ^k ⊕ T`: one angle (in turns) per free generator and one exact
//! rational angle per cyclic torsion summand `ℤ/dⱼ`.

use num_integer::Integer;
use num_rational::Ratio;
use thiserror::Error;

pub type Turns = Ratio<i64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BundleError {
    #[error("torsion order must be at least 2, got {0}")]
    InvalidOrder(i64),
    #[error("expected {expected} {what} angles, got {got}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{what} angle {angle} is not in [0, 1)")]
    AngleRange { what: &'static str, angle: f64 },
    #[error("torsion summand {index}: {order} × {angle} is not an integer")]
    TorsionOrderMismatch {
        index: usize,
        order: i64,
        angle: Turns,
    },
    #[error("deformation parameter must lie in [0, 1], got {0}")]
    ParameterRange(f64),
}

/// Holonomy `H₁(X) → SO(2)` of an orientable flat circle bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientableFlatBundle {
    pub rank: usize,
    pub torsion: Vec<i64>,
    pub free_angles: Vec<f64>,
    pub torsion_angles: Vec<Turns>,
}

impl OrientableFlatBundle {
    pub fn new(
        rank: usize,
        torsion: Vec<i64>,
        free_angles: Vec<f64>,
        torsion_angles: Vec<Turns>,
    ) -> Result<Self, BundleError> {
        let b = Self {
            rank,
            torsion,
            free_angles,
            torsion_angles,
        };
        validate(&b)?;
        Ok(b)
    }
}

pub fn validate(b: &OrientableFlatBundle) -> Result<(), BundleError> {
    if b.free_angles.len() != b.rank {
        return Err(BundleError::LengthMismatch {
            what: "free",
            expected: b.rank,
            got: b.free_angles.len(),
        });
    }
    if b.torsion_angles.len() != b.torsion.len() {
        return Err(BundleError::LengthMismatch {
            what: "torsion",
            expected: b.torsion.len(),
            got: b.torsion_angles.len(),
        });
    }
    for &a in &b.free_angles {
        if !(a.is_finite() && (0.0..1.0).contains(&a)) {
            return Err(BundleError::AngleRange {
                what: "free",
                angle: a,
            });
        }
    }
    for (index, (&order, &angle)) in b.torsion.iter().zip(&b.torsion_angles).enumerate() {
        if order < 2 {
            return Err(BundleError::InvalidOrder(order));
        }
        if angle < Turns::from_integer(0) || angle >= Turns::from_integer(1) {
            return Err(BundleError::AngleRange {
                what: "torsion",
                angle: ratio_to_f64(angle),
            });
        }
        if !(angle * order).is_integer() {
            return Err(BundleError::TorsionOrderMismatch {
                index,
                order,
                angle,
            });
        }
    }
    Ok(())
}

fn ratio_to_f64(r: Turns) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Signed representative of an angle in `(−1/2, 1/2]`.
fn signed(a: f64) -> f64 {
    if a > 0.5 {
        a - 1.0
    } else {
        a
    }
}

/// Holonomy at time `t` of the straight-line contraction of the free angles
/// (along the shorter arc); torsion angles stay fixed.
pub fn deform(b: &OrientableFlatBundle, t: f64) -> Result<OrientableFlatBundle, BundleError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(BundleError::ParameterRange(t));
    }
    validate(b)?;
    if t == 0.0 {
        return Ok(b.clone());
    }
    let free_angles = b
        .free_angles
        .iter()
        .map(|&a| (signed(a) * (1.0 - t)).rem_euclid(1.0))
        // also folds -0.0 into 0.0
        .map(|a| if a >= 1.0 || a == 0.0 { 0.0 } else { a })
        .collect();
    Ok(OrientableFlatBundle {
        free_angles,
        ..b.clone()
    })
}

/// Order of the finite holonomy image at `t = 1`: the degree of a finite
/// cover on which the deformed bundle becomes trivial.
pub fn trivializing_cover_degree(b: &OrientableFlatBundle) -> Result<u64, BundleError> {
    validate(b)?;
    Ok(b.torsion_angles
        .iter()
        .fold(1i64, |acc, a| acc.lcm(a.denom())) as u64)
}

/// A flat `O(2)` circle bundle, described by the orientable bundle it pulls
/// back to on the orientation double cover.
#[derive(Debug, Clone, PartialEq)]
pub struct NonOrientableFlatBundle {
    pub orientation_cover: OrientableFlatBundle,
}

/// Degree over the base: the orientation double cover followed by a
/// trivializing cover of the pulled-back orientable bundle.
pub fn trivializing_cover_degree_nonorientable(
    b: &NonOrientableFlatBundle,
) -> Result<u64, BundleError> {
    Ok(2 * trivializing_cover_degree(&b.orientation_cover)?)
}
