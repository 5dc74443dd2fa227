//! Riemann zeta and the two odd quadratic Dirichlet L-functions, by
//! Euler-Maclaurin summation of Hurwitz zeta in the half-plane Re s >= 0 and
//! by their functional equations to the left of it.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::gamma::{ln_gamma_any, recip_gamma, sin_pi};
use crate::error::{Error, Result};

/// B_{2k} / (2k)! for k = 1..=10.
const BERNOULLI_SCALED: [f64; 10] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
    43_867.0 / 798.0 / 6_402_373_705_728_000.0,
    -174_611.0 / 330.0 / 2_432_902_008_176_640_000.0,
];

/// The nontrivial real characters of conductor 4 and 8.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CharacterId {
    ChiMinus4,
    ChiMinus8,
}

impl CharacterId {
    pub fn modulus(self) -> u32 {
        match self {
            CharacterId::ChiMinus4 => 4,
            CharacterId::ChiMinus8 => 8,
        }
    }

    pub fn value(self, n: u64) -> i32 {
        match self {
            CharacterId::ChiMinus4 => match n % 4 {
                1 => 1,
                3 => -1,
                _ => 0,
            },
            CharacterId::ChiMinus8 => match n % 8 {
                1 | 3 => 1,
                5 | 7 => -1,
                _ => 0,
            },
        }
    }
}

fn cutoff(s: Complex64) -> usize {
    (10.0 * (1.0 + s.im.abs())).ceil() as usize
}

/// (e^z - 1) / z, continuous at z = 0.
fn exprel(z: Complex64) -> Complex64 {
    if z.norm() < 1e-4 {
        1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0))
    } else {
        (z.exp() - 1.0) / z
    }
}

/// Euler-Maclaurin for zeta(s, a) with the `1/(s-1)` pole removed when
/// `regularize` is set: the returned value is zeta(s, a) - 1/(s - 1).
fn hurwitz_em(s: Complex64, a: f64, regularize: bool) -> Complex64 {
    let n = cutoff(s);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        sum += (-s * (k as f64 + a).ln()).exp();
    }
    let x = n as f64 + a;
    let ln_x = x.ln();
    let x_pow = (-s * ln_x).exp();
    let one_minus_s = 1.0 - s;
    sum += if regularize {
        -ln_x * exprel(one_minus_s * ln_x)
    } else {
        x * x_pow / (s - 1.0)
    };
    sum += x_pow * 0.5;
    // rising factorial s (s+1) ... (s + 2k - 2) times x^{-s-2k+1}
    let mut rising = s;
    let mut power = x_pow / x;
    let inv_x2 = 1.0 / (x * x);
    for (k, &b) in BERNOULLI_SCALED.iter().enumerate() {
        sum += rising * power * b;
        let j = 2.0 * k as f64;
        rising *= (s + j + 1.0) * (s + j + 2.0);
        power *= inv_x2;
    }
    sum
}

fn check_finite(name: &str, s: Complex64) -> Result<()> {
    if s.re.is_finite() && s.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name}: non-finite argument {s}")))
    }
}

/// Riemann zeta function, continued to all s != 1.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    check_finite("riemann_zeta", s)?;
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole {
            function: "riemann_zeta",
            re: 1.0,
            im: 0.0,
        });
    }
    Ok(zeta_unchecked(s))
}

fn zeta_unchecked(s: Complex64) -> Complex64 {
    if s.re >= 0.0 {
        return hurwitz_em(s, 1.0, false);
    }
    // zeta(s) = 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
    let one_minus_s = 1.0 - s;
    let sine = sin_pi(s / 2.0);
    if sine == Complex64::new(0.0, 0.0) {
        return sine;
    }
    let log_factor = s * 2f64.ln() + (s - 1.0) * PI.ln() + ln_gamma_any(one_minus_s);
    log_factor.exp() * sine * hurwitz_em(one_minus_s, 1.0, false)
}

/// L(s, chi) for the two odd characters; entire.
pub fn dirichlet_l(chi: CharacterId, s: Complex64) -> Result<Complex64> {
    check_finite("dirichlet_l", s)?;
    Ok(l_unchecked(chi, s))
}

fn l_unchecked(chi: CharacterId, s: Complex64) -> Complex64 {
    let q = chi.modulus() as f64;
    if s.re >= 0.0 {
        let mut sum = Complex64::new(0.0, 0.0);
        for a in 1..=chi.modulus() {
            let c = chi.value(a as u64);
            if c != 0 {
                sum += hurwitz_em(s, a as f64 / q, true) * c as f64;
            }
        }
        return (-s * q.ln()).exp() * sum;
    }
    // Lambda(s) = (q/pi)^{(s+1)/2} Gamma((s+1)/2) L(s) is invariant under s -> 1 - s
    let one_minus_s = 1.0 - s;
    let log_factor = (0.5 - s) * (q / PI).ln() + ln_gamma_any(1.0 - s / 2.0);
    log_factor.exp() * recip_gamma((s + 1.0) / 2.0) * l_unchecked(chi, one_minus_s)
}
