//! Scalar abstraction shared by every numeric routine in the crate.
//!
//! All algorithms are written against [`Real`] so they run in `f32` or `f64`.
//! Tolerances quoted in double precision are widened to a multiple of the
//! machine epsilon for narrower types, see [`Real::tol`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Floating point type usable by the solvers: `f32` or `f64`.
pub trait Real: Float + FloatConst + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static {
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64;

    /// `base` when representable, otherwise a small multiple of epsilon.
    fn tol(base: f64) -> Self {
        let floor = Self::epsilon() * Self::lit(16.0);
        Self::lit(base).max(floor)
    }
}

impl Real for f32 {
    fn lit(x: f64) -> Self {
        x as f32
    }

    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    fn lit(x: f64) -> Self {
        x
    }

    fn to_f64_lossy(self) -> f64 {
        self
    }
}
