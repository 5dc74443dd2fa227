//! Constants of the three supported number fields and the archimedean
//! test functions.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// One of the three fields whose xi function is the moment function of a
/// positive random variable: Q, Q(sqrt(-1)) and Q(sqrt(-2)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FieldId {
    #[serde(rename = "Q")]
    RationalQ,
    #[serde(rename = "Qi")]
    GaussianQi,
    #[serde(rename = "Q2")]
    QSqrtMinus2,
}

impl FieldId {
    pub const ALL: [FieldId; 3] = [FieldId::RationalQ, FieldId::GaussianQi, FieldId::QSqrtMinus2];

    /// Short name used on the command line and in reports.
    pub fn short_name(self) -> &'static str {
        match self {
            FieldId::RationalQ => "Q",
            FieldId::GaussianQi => "Qi",
            FieldId::QSqrtMinus2 => "Q2",
        }
    }

    pub fn spec(self) -> FieldSpec {
        field_spec(self)
    }
}

impl std::fmt::Display for FieldId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.short_name())
    }
}

impl std::str::FromStr for FieldId {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Q" | "rationals" => Ok(FieldId::RationalQ),
            "Qi" | "gaussian" => Ok(FieldId::GaussianQi),
            "Q2" | "sqrt-minus-2" => Ok(FieldId::QSqrtMinus2),
            other => Err(invalid(format!(
                "unknown field '{other}' (expected Q, Qi, Q2, rationals, gaussian or sqrt-minus-2)"
            ))),
        }
    }
}

/// Immutable invariants of a supported field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSpec {
    pub id: FieldId,
    /// Signed discriminant.
    pub discriminant: i64,
    pub abs_disc: u64,
    pub r1: u32,
    pub r2: u32,
    /// Number of roots of unity.
    pub w: u32,
    pub class_number: u32,
    pub regulator: f64,
    /// Residue constant 2^r1 (2 pi)^r2 h R / w.
    pub c_k: f64,
    /// O_K = Z + sqrt(-d) Z; zero for the rationals.
    pub lattice_d: u32,
}

impl FieldSpec {
    pub fn is_real_place(&self) -> bool {
        self.r1 == 1
    }

    pub fn kernel(&self) -> ArchimedeanKernel {
        if self.is_real_place() {
            ArchimedeanKernel::Real
        } else {
            ArchimedeanKernel::Complex
        }
    }

    pub fn sqrt_abs_disc(&self) -> f64 {
        (self.abs_disc as f64).sqrt()
    }
}

fn residue_constant(r1: u32, r2: u32, h: u32, regulator: f64, w: u32) -> f64 {
    2f64.powi(r1 as i32) * (2.0 * PI).powi(r2 as i32) * h as f64 * regulator / w as f64
}

/// Returns the constant record for `id`.
pub fn field_spec(id: FieldId) -> FieldSpec {
    let (discriminant, r1, r2, w, c_k, lattice_d) = match id {
        FieldId::RationalQ => (1, 1, 0, 2, 1.0, 0),
        FieldId::GaussianQi => (-4, 0, 1, 4, PI / 2.0, 1),
        FieldId::QSqrtMinus2 => (-8, 0, 1, 2, PI, 2),
    };
    let spec = FieldSpec {
        id,
        discriminant,
        abs_disc: discriminant.unsigned_abs(),
        r1,
        r2,
        w,
        class_number: 1,
        regulator: 1.0,
        c_k,
        lattice_d,
    };
    let formula = residue_constant(r1, r2, spec.class_number, spec.regulator, w);
    assert!(
        ((spec.c_k - formula) / formula).abs() < 1e-15,
        "c_K table disagrees with 2^r1 (2pi)^r2 hR/w for {id}"
    );
    debug_assert_eq!(spec.r1 + spec.r2, 1);
    debug_assert!(spec.lattice_d == 0 || spec.abs_disc == 4 * spec.lattice_d as u64);
    spec
}

/// The archimedean test function whose zeta integral is s(s-1) times the
/// gamma factor of the place.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ArchimedeanKernel {
    Real,
    Complex,
}

impl ArchimedeanKernel {
    /// Radius at which the kernel changes sign.
    pub fn sign_change_radius(self) -> f64 {
        match self {
            ArchimedeanKernel::Real => (3.0 / (2.0 * PI)).sqrt(),
            ArchimedeanKernel::Complex => (1.0 / PI).sqrt(),
        }
    }

    /// Evaluates the kernel without argument checks; `radius` must be >= 0.
    #[inline]
    pub(crate) fn eval_unchecked(self, radius: f64) -> f64 {
        let r2 = radius * radius;
        match self {
            ArchimedeanKernel::Real => 2.0 * PI * r2 * (2.0 * PI * r2 - 3.0) * (-PI * r2).exp(),
            ArchimedeanKernel::Complex => 4.0 * PI * r2 * (PI * r2 - 1.0) * (-2.0 * PI * r2).exp(),
        }
    }
}

/// Evaluates f_inf at a nonnegative radius.
pub fn kernel_eval(kernel: ArchimedeanKernel, radius: f64) -> Result<f64> {
    if !radius.is_finite() || radius < 0.0 {
        return Err(invalid(format!("kernel radius must be finite and >= 0, got {radius}")));
    }
    Ok(kernel.eval_unchecked(radius))
}
