//! Floating-point abstraction for the numeric kernels.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};

/// Scalar type the physics and network kernels are generic over.
///
/// `f64` is the production type; `f32` is supported for sanity checks and
/// memory-bound experiments.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + NumAssignOps + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion from `f64`; every literal in the kernels goes
    /// through here.
    fn of(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("finite literal converts to scalar")
    }

    fn as_f64(self) -> f64 {
        <Self as ToPrimitive>::to_f64(&self).expect("scalar converts to f64")
    }

    /// Numerically stable `ln(1 + exp(x))`.
    fn softplus(self) -> Self {
        let zero = Self::zero();
        let pos = if self > zero { self } else { zero };
        pos + (-self.abs()).exp().ln_1p()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softplus_matches_naive_in_safe_range() {
        for &x in &[-20.0, -3.0, -1e-9, 0.0, 0.5, 7.0, 20.0] {
            let naive = (1.0f64 + x.exp()).ln();
            assert!((Scalar::softplus(x) - naive).abs() < 1e-12);
        }
    }

    #[test]
    fn softplus_survives_extreme_arguments() {
        assert_eq!(Scalar::softplus(-800.0f64), 0.0);
        let big = Scalar::softplus(800.0f64);
        assert!((big - 800.0).abs() < 1e-9);
        let f32_big = Scalar::softplus(120.0f32);
        assert!(f32_big.is_finite() && (f32_big - 120.0).abs() < 1e-3);
    }
}
