//! Gamma factors, zeta and L-functions, and the completed functions Z_K and
//! xi_K of the three supported fields.

mod gamma;
mod zeta;

use num_complex::Complex64;

pub use gamma::{gamma, gamma_c, gamma_r, log_gamma};
pub use zeta::{dirichlet_l, riemann_zeta, CharacterId};

use crate::error::{Error, Result};
use crate::field_data::{FieldId, FieldSpec};

/// A point of the complex plane.
pub type ComplexPoint = Complex64;

/// Distance from a removable singularity of the product form of Z_K inside
/// which the functional equation is used instead.
const REMOVABLE_RADIUS: f64 = 1e-7;

/// Radius around s = 0 and s = 1 inside which xi_K is linearized.
const XI_LINEAR_RADIUS: f64 = 1e-8;

/// The quadratic character attached to an imaginary quadratic field.
pub fn field_character(field: &FieldSpec) -> Option<CharacterId> {
    match field.id {
        FieldId::RationalQ => None,
        FieldId::GaussianQi => Some(CharacterId::ChiMinus4),
        FieldId::QSqrtMinus2 => Some(CharacterId::ChiMinus8),
    }
}

fn pole(function: &'static str, s: Complex64) -> Error {
    Error::Pole {
        function,
        re: s.re,
        im: s.im,
    }
}

/// Dedekind zeta function: zeta(s) for Q, zeta(s) L(s, chi_D) otherwise.
pub fn dedekind_zeta(field: &FieldSpec, s: ComplexPoint) -> Result<ComplexPoint> {
    let z = riemann_zeta(s).map_err(|e| match e {
        Error::Pole { .. } => pole("dedekind_zeta", s),
        other => other,
    })?;
    match field_character(field) {
        None => Ok(z),
        Some(chi) => Ok(z * dirichlet_l(chi, s)?),
    }
}

/// Nearest negative integer at which the gamma factor has a pole cancelled
/// by a trivial zero of zeta_K.
fn near_removable_point(field: &FieldSpec, s: Complex64) -> bool {
    if s.re > -0.5 || s.im.abs() > REMOVABLE_RADIUS {
        return false;
    }
    let k = s.re.round();
    let on_lattice = if field.is_real_place() {
        k.rem_euclid(2.0) == 0.0
    } else {
        true
    };
    on_lattice && (s - Complex64::new(k, 0.0)).norm() < REMOVABLE_RADIUS
}

/// Z_K(s) = Gamma_R(s)^{r1} Gamma_C(s)^{r2} zeta_K(s).
pub fn completed_z(field: &FieldSpec, s: ComplexPoint) -> Result<ComplexPoint> {
    if !s.re.is_finite() || !s.im.is_finite() {
        return Err(Error::InvalidArgument(format!("completed_z: non-finite argument {s}")));
    }
    if s == Complex64::new(0.0, 0.0) || s == Complex64::new(1.0, 0.0) {
        return Err(pole("completed_z", s));
    }
    if near_removable_point(field, s) {
        let abs_d = field.abs_disc as f64;
        let factor = ((0.5 - s) * abs_d.ln()).exp();
        return Ok(factor * completed_z(field, 1.0 - s)?);
    }
    let gamma_factor = if field.is_real_place() {
        gamma_r(s)?
    } else {
        gamma_c(s)?
    };
    Ok(gamma_factor * dedekind_zeta(field, s)?)
}

fn xi_product(field: &FieldSpec, s: Complex64) -> Result<Complex64> {
    let abs_d = field.abs_disc as f64;
    let scale = (s / 2.0 * abs_d.ln()).exp() * s * (s - 1.0) / field.c_k;
    Ok(scale * completed_z(field, s)?)
}

/// xi_K(s) = c_K^{-1} s (s - 1) |D|^{s/2} Z_K(s); entire, equal to 1 at 0 and 1.
pub fn xi(field: &FieldSpec, s: ComplexPoint) -> Result<ComplexPoint> {
    let one = Complex64::new(1.0, 0.0);
    if s == Complex64::new(0.0, 0.0) || s == one {
        return Ok(one);
    }
    let to_one = s - 1.0;
    if s.norm() < XI_LINEAR_RADIUS || to_one.norm() < XI_LINEAR_RADIUS {
        // xi(1 + h) = 1 + xi'(1) h + O(h^2), and xi'(0) = -xi'(1) by symmetry
        let h = 1e-3;
        let slope = (xi_product(field, one + h)? - xi_product(field, one - h)?) / (2.0 * h);
        return Ok(if s.norm() < XI_LINEAR_RADIUS {
            one - slope * s
        } else {
            one + slope * to_one
        });
    }
    let value = xi_product(field, s)?;
    // real on the real axis
    Ok(if s.im == 0.0 {
        Complex64::new(value.re, 0.0)
    } else {
        value
    })
}
