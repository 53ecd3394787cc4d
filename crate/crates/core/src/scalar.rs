//! Scalar abstraction shared by every numerical routine in the crate.
//!
//! All state carriers and algorithms are generic over [`Real`], which is
//! satisfied by `f32` and `f64`. Tolerances are expressed in `f64` and
//! widened to the working precision with [`Real::tol`], so a check written
//! as `1e-12` stays meaningful in single precision.

use nalgebra::{Complex, DMatrix, DVector, RealField};
use num_traits::ToPrimitive;

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real: RealField + Copy + ToPrimitive {
    /// Converts an `f64` literal into the working precision.
    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    /// Converts a count or index into the working precision.
    #[inline]
    fn count(n: usize) -> Self {
        nalgebra::convert(n as f64)
    }

    /// Lossy conversion back to `f64` (reporting, serialization).
    #[inline]
    fn as_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    /// A tolerance of at least `x`, floored at a few hundred ulps of the
    /// working precision.
    #[inline]
    fn tol(x: f64) -> Self {
        let floor = Self::default_epsilon() * Self::lit(256.0);
        let t = Self::lit(x);
        if t > floor {
            t
        } else {
            floor
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type C<T> = Complex<T>;
pub type CMatrix<T> = DMatrix<Complex<T>>;
pub type CVector<T> = DVector<Complex<T>>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// `e^{iθ}`.
#[inline]
pub(crate) fn cis<T: Real>(theta: T) -> Complex<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// `(-i)^n`.
#[inline]
pub(crate) fn minus_i_pow<T: Real>(n: usize) -> Complex<T> {
    match n % 4 {
        0 => cr(T::one()),
        1 => c(T::zero(), -T::one()),
        2 => cr(-T::one()),
        _ => c(T::zero(), T::one()),
    }
}

#[inline]
pub(crate) fn norm_sqr<T: Real>(z: Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}

/// `ln(π e ħ)`, the entropic lower bound per mode.
#[inline]
pub fn ln_pi_e_hbar<T: Real>(hbar: T) -> T {
    (T::pi() * T::e() * hbar).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_floor_tracks_precision() {
        assert_eq!(f64::tol(1e-6), 1e-6);
        assert!(f32::tol(1e-12) > 1e-6);
        assert_eq!(f32::lit(0.5), 0.5f32);
    }

    #[test]
    fn powers_of_minus_i() {
        let mut z = cr(1.0f64);
        for n in 0..8 {
            let want = minus_i_pow::<f64>(n);
            assert!((z - want).norm_sqr() < 1e-30);
            z *= c(0.0, -1.0);
        }
    }
}
