//! Complex log-gamma by the Stirling series, shifted upward with the
//! recurrence until |z| >= 15, and reflection into the right half-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const STIRLING_MIN_MODULUS: f64 = 15.0;

/// B_{2k} / (2k (2k - 1)) for k = 1..=10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_741_780_329_736_4;

/// True when `s` is exactly 0, -1, -2, ...
pub(crate) fn is_nonpositive_integer(s: Complex64) -> bool {
    s.im == 0.0 && s.re <= 0.0 && s.re == s.re.round()
}

/// sin(pi z) with the real part reduced exactly modulo 2 first, so zeros at
/// the integers are exact and nearby values keep full relative precision.
pub(crate) fn sin_pi(z: Complex64) -> Complex64 {
    let n = z.re.round();
    let frac = z.re - n;
    let sign = if n.rem_euclid(2.0) == 0.0 { 1.0 } else { -1.0 };
    let (s, c) = (PI * frac).sin_cos();
    let y = PI * z.im;
    Complex64::new(s * y.cosh(), c * y.sinh()) * sign
}

/// Continuous-branch log-gamma for Re z >= 1/2.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let mut z = z;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.norm() < STIRLING_MIN_MODULUS {
        shift += z.ln();
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut power = inv;
    for &c in &STIRLING {
        series += power * c;
        power *= inv2;
    }
    (z - 0.5) * z.ln() - z + HALF_LN_TWO_PI + series - shift
}

/// Some logarithm of Gamma(z), not reduced to a particular branch.
pub(crate) fn ln_gamma_any(z: Complex64) -> Complex64 {
    if z.re >= 0.5 {
        ln_gamma_right(z)
    } else {
        Complex64::new(PI.ln(), 0.0) - sin_pi(z).ln() - ln_gamma_right(1.0 - z)
    }
}

fn principal(z: Complex64) -> Complex64 {
    let mut im = z.im.rem_euclid(2.0 * PI);
    if im > PI {
        im -= 2.0 * PI;
    }
    Complex64::new(z.re, im)
}

fn check(name: &'static str, s: Complex64) -> Result<()> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::InvalidArgument(format!("{name}: non-finite argument {s}")));
    }
    Ok(())
}

/// Principal value of log Gamma(s): imaginary part in (-pi, pi].
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    check("log_gamma", s)?;
    if is_nonpositive_integer(s) {
        return Err(Error::Pole {
            function: "log_gamma",
            re: s.re,
            im: s.im,
        });
    }
    Ok(principal(ln_gamma_any(s)))
}

pub fn gamma(s: Complex64) -> Result<Complex64> {
    check("gamma", s)?;
    if is_nonpositive_integer(s) {
        return Err(Error::Pole {
            function: "gamma",
            re: s.re,
            im: s.im,
        });
    }
    Ok(ln_gamma_any(s).exp())
}

/// 1/Gamma(s), which is entire.
pub(crate) fn recip_gamma(s: Complex64) -> Complex64 {
    if is_nonpositive_integer(s) {
        Complex64::new(0.0, 0.0)
    } else {
        (-ln_gamma_any(s)).exp()
    }
}

/// Gamma_R(s) = pi^{-s/2} Gamma(s/2).
pub fn gamma_r(s: Complex64) -> Result<Complex64> {
    check("gamma_r", s)?;
    if is_nonpositive_integer(s / 2.0) {
        return Err(Error::Pole {
            function: "gamma_r",
            re: s.re,
            im: s.im,
        });
    }
    Ok((-s / 2.0 * PI.ln() + ln_gamma_any(s / 2.0)).exp())
}

/// Gamma_C(s) = (2 pi)^{1-s} Gamma(s).
pub fn gamma_c(s: Complex64) -> Result<Complex64> {
    check("gamma_c", s)?;
    if is_nonpositive_integer(s) {
        return Err(Error::Pole {
            function: "gamma_c",
            re: s.re,
            im: s.im,
        });
    }
    Ok(((1.0 - s) * (2.0 * PI).ln() + ln_gamma_any(s)).exp())
}
