//! Scalar abstraction over the floating-point element type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};

/// Floating-point scalar the numerical kernels are generic over.
///
/// Implemented for `f32` and `f64`. Tolerances written as `f64` literals are
/// converted through [`Scalar::real`]; kernels that need a resolution floor
/// use [`Scalar::tolerance`] so that `f32` instantiations do not demand
/// sub-epsilon accuracy.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssignOps + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant into the scalar type.
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    /// The requested tolerance, floored at a small multiple of machine epsilon.
    fn tolerance(x: f64) -> Self {
        Self::real(x).max(Self::epsilon() * Self::real(8.0))
    }

    /// Lossy view as `f64`, used for diagnostics and reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
