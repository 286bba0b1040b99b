//! Thin wrappers over `libm` so call sites read like ordinary float code.

use num_complex::Complex64;

pub(crate) const PI: f64 = core::f64::consts::PI;

#[inline]
pub(crate) fn sin(x: f64) -> f64 {
    libm::sin(x)
}
#[inline]
pub(crate) fn cos(x: f64) -> f64 {
    libm::cos(x)
}
#[inline]
pub(crate) fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}
#[inline]
pub(crate) fn exp(x: f64) -> f64 {
    libm::exp(x)
}
#[inline]
pub(crate) fn asin(x: f64) -> f64 {
    libm::asin(x)
}
#[inline]
pub(crate) fn acos(x: f64) -> f64 {
    libm::acos(x)
}
#[inline]
pub(crate) fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}
#[inline]
pub(crate) fn log10(x: f64) -> f64 {
    libm::log10(x)
}
#[inline]
pub(crate) fn pow(x: f64, y: f64) -> f64 {
    libm::pow(x, y)
}
#[inline]
pub(crate) fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

#[inline]
pub(crate) fn to_rad(deg: f64) -> f64 {
    deg * (PI / 180.0)
}
#[inline]
pub(crate) fn to_deg(rad: f64) -> f64 {
    rad * (180.0 / PI)
}

#[inline]
pub(crate) fn cabs(z: Complex64) -> f64 {
    hypot(z.re, z.im)
}
#[inline]
pub(crate) fn carg(z: Complex64) -> f64 {
    atan2(z.im, z.re)
}
#[inline]
pub(crate) fn from_polar(r: f64, theta: f64) -> Complex64 {
    Complex64::new(r * cos(theta), r * sin(theta))
}

/// `10·log10(x)`; non-positive input maps to `-inf`.
#[inline]
pub(crate) fn db10(x: f64) -> f64 {
    if x > 0.0 {
        10.0 * log10(x)
    } else {
        f64::NEG_INFINITY
    }
}

/// Wraps an angle in degrees to (-180, 180].
pub(crate) fn wrap_deg(a: f64) -> f64 {
    let mut w = libm::fmod(a, 360.0);
    if w <= -180.0 {
        w += 360.0;
    } else if w > 180.0 {
        w -= 360.0;
    }
    w
}
