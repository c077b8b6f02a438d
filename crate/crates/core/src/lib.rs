//! Numerical tools for warped-product metrics `dr² + Σ hᵢ(r)² gᵢ`: warping
//! functions and their construction, frame curvature, a finite-difference
//! curvature oracle, curvature bounds, end volumes, flat circle bundles,
//! handle bookkeeping and geodesic triangles in `ℝ × tree`.

pub mod bundle;
pub mod certify;
pub mod frame;
pub mod morse;
pub mod oracle;
pub mod treegraded;
pub mod volume;
pub mod warpfn;

pub use warpfn::{ScalarJet, WarpError, WarpingFunction};
