//! Scalar abstraction shared by every module.
//!
//! All numerics are written against [`Real`], a thin layer over nalgebra's
//! [`RealField`] that adds primitive conversions from num-traits. Complex
//! quantities are `num_complex::Complex<T>`.

use nalgebra::{DMatrix, DVector, RealField};
use num_complex::Complex;
use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the library (implemented for `f32` and `f64`).
pub trait Real: RealField + Copy + FromPrimitive + ToPrimitive {
    /// Machine epsilon of the type.
    const EPS: f64;

    /// Converts an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Converts a tolerance in `(0, 1)` stated for double precision into this type:
    /// `x = eps64^a` becomes `eps^a`, so 1e-9 maps to about 1e-4 in single precision.
    #[inline]
    fn tol(x: f64) -> Self {
        if Self::EPS <= f64::EPSILON || !(x > 0.0 && x < 1.0) {
            return Self::lit(x);
        }
        Self::lit(Self::EPS.powf(x.ln() / f64::EPSILON.ln()))
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    const EPS: f64 = f64::EPSILON;
}

impl Real for f32 {
    const EPS: f64 = f32::EPSILON as f64;
}

/// Dense complex matrix.
pub type ComplexMatrix<T> = DMatrix<Complex<T>>;
/// Dense complex column vector.
pub type ComplexVector<T> = DVector<Complex<T>>;

#[inline]
pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn i_unit<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

#[inline]
pub(crate) fn modulus<T: Real>(z: Complex<T>) -> T {
    // hypot-style to avoid overflow in the squares
    let a = z.re.abs();
    let b = z.im.abs();
    let (big, small) = if a >= b { (a, b) } else { (b, a) };
    if big == T::zero() {
        T::zero()
    } else {
        let r = small / big;
        big * (T::one() + r * r).sqrt()
    }
}

/// Complex square root (principal branch).
pub(crate) fn csqrt<T: Real>(z: Complex<T>) -> Complex<T> {
    let r = modulus(z);
    if r == T::zero() {
        return Complex::new(T::zero(), T::zero());
    }
    let half = T::lit(0.5);
    let re = ((r + z.re) * half).max(T::zero()).sqrt();
    let im_mag = ((r - z.re) * half).max(T::zero()).sqrt();
    let im = if z.im < T::zero() { -im_mag } else { im_mag };
    Complex::new(re, im)
}

/// `exp(z)` for complex `z`.
pub(crate) fn cexp<T: Real>(z: Complex<T>) -> Complex<T> {
    let m = z.re.exp();
    Complex::new(m * z.im.cos(), m * z.im.sin())
}

/// Total order on complex numbers: by real part, then imaginary part.
pub(crate) fn lex_cmp<T: Real>(a: &Complex<T>, b: &Complex<T>) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

/// Inner product `(x, y) = x^* y`, conjugate-linear in the first slot.
pub fn inner<T: Real>(x: &ComplexVector<T>, y: &ComplexVector<T>) -> Complex<T> {
    x.iter()
        .zip(y.iter())
        .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b)
}

/// Euclidean norm of a complex vector.
pub fn vnorm<T: Real>(x: &ComplexVector<T>) -> T {
    x.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csqrt_matches_principal_branch() {
        let z = Complex::new(-4.0_f64, 0.0);
        let s = csqrt(z);
        assert!((s - Complex::new(0.0, 2.0)).norm() < 1e-15);
        let z = Complex::new(3.0_f64, -4.0);
        let s = csqrt(z);
        assert!((s * s - z).norm() < 1e-14);
        assert!(s.re > 0.0);
    }

    #[test]
    fn tolerance_scales_for_single_precision() {
        assert_eq!(f64::tol(1e-12), 1e-12);
        let (a, b) = (f32::tol(1e-12), f32::tol(1e-9));
        assert!(a > 10.0 * f32::EPSILON && a < 1e-4);
        assert!(b > a && b < 1e-3);
        assert!((f32::tol(f64::EPSILON) - f32::EPSILON).abs() < 1e-12);
    }
}
