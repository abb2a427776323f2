//! Floating point abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Scalar type for geometry, control and simulation: `f32` or `f64`.
///
/// The associated constants are the precision-dependent tolerances; the
/// values quoted in the docs are those of `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute accuracy of the convex set distance engine (1e-9 m).
    const DISTANCE_TOL: Self;
    /// Largest accepted asymmetry `max |S - S^T|` for symmetric inputs (1e-12).
    const SYMMETRY_TOL: Self;
    /// Relative threshold below which an eigenvalue counts as zero (1e-12).
    const EIGEN_TOL: Self;

    /// Converts an `f64` literal. Panics only if the value is not representable,
    /// which never happens for finite literals and `f32`/`f64`.
    #[inline]
    fn c(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const DISTANCE_TOL: Self = 1e-9;
    const SYMMETRY_TOL: Self = 1e-12;
    const EIGEN_TOL: Self = 1e-12;
}

impl Real for f32 {
    const DISTANCE_TOL: Self = 1e-5;
    const SYMMETRY_TOL: Self = 1e-6;
    const EIGEN_TOL: Self = 1e-6;
}
