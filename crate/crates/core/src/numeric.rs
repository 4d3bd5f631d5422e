//! Small numeric helpers: unit complex numbers and integrality assertions.

use crate::errors::{Error, Result};
use num_complex::Complex64;

/// `exp(2 pi i k / n)` computed from the rational phase, so that exact
/// fractions of a turn stay exactly reproducible.
pub fn unit_root(k: i64, n: i64) -> Complex64 {
    debug_assert!(n > 0);
    let k = k.rem_euclid(n);
    let phase = core::f64::consts::TAU * (k as f64) / (n as f64);
    Complex64::new(cos(phase), sin(phase))
}

#[cfg(feature = "std")]
fn cos(x: f64) -> f64 {
    x.cos()
}
#[cfg(feature = "std")]
fn sin(x: f64) -> f64 {
    x.sin()
}
#[cfg(not(feature = "std"))]
fn cos(x: f64) -> f64 {
    libm::cos(x)
}
#[cfg(not(feature = "std"))]
fn sin(x: f64) -> f64 {
    libm::sin(x)
}

pub fn abs(x: f64) -> f64 {
    if x < 0.0 {
        -x
    } else {
        x
    }
}

fn round(x: f64) -> f64 {
    #[cfg(feature = "std")]
    {
        x.round()
    }
    #[cfg(not(feature = "std"))]
    {
        libm::round(x)
    }
}

/// Asserts that `z` is within `tol` of a non-negative integer and returns it.
pub fn as_nonneg_int(z: Complex64, tol: f64) -> Result<u64> {
    let r = round(z.re);
    if abs(z.im) > tol || abs(z.re - r) > tol || r < -0.5 {
        return Err(Error::NotIntegral { re: z.re, im: z.im });
    }
    Ok(r as u64)
}

/// Asserts that `z` is within `tol` of an integer (of either sign).
pub fn as_int(z: Complex64, tol: f64) -> Result<i64> {
    let r = round(z.re);
    if abs(z.im) > tol || abs(z.re - r) > tol {
        return Err(Error::NotIntegral { re: z.re, im: z.im });
    }
    Ok(r as i64)
}

/// True when two complex values agree within `tol` in both coordinates.
pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    abs(a.re - b.re) <= tol && abs(a.im - b.im) <= tol
}
