//! Li coefficients of xi_K by a contour integral around s = 1, and the first
//! two cumulants of L = -log X from the density.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::xi;
use crate::density::DensityModel;
use crate::error::{invalid, Error, Result};
use crate::field_data::{FieldId, FieldSpec};
use crate::report::VerificationReport;

pub const MAX_ORDER: u32 = 8;
pub const MAX_RADIUS: f64 = 0.25;
pub const DEFAULT_RADIUS: f64 = 0.2;
pub const IDENTITY_TOL: f64 = 1e-6;
pub const POSITIVITY_MARGIN: f64 = 1e-4;
const IMAGINARY_TOL: f64 = 1e-10;
const BASE_NODES: usize = 256;
const MAX_NODES: usize = 1 << 14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LiReport {
    pub field: FieldId,
    pub n: u32,
    pub lambda_contour: f64,
    /// Only orders 1 and 2 have a probabilistic route.
    pub lambda_probabilistic: Option<f64>,
    pub agreement: f64,
    pub positive: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CumulantPair {
    pub kappa1: f64,
    pub kappa2: f64,
}

/// log xi_K on the circle 1 + r e^{i theta_k}, continued from the real
/// point theta = 0.
fn log_xi_on_circle(field: &FieldSpec, radius: f64, nodes: usize) -> Result<Vec<Complex64>> {
    let values: Vec<Complex64> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / nodes as f64;
            xi(field, Complex64::new(1.0 + radius * theta.cos(), radius * theta.sin()))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(nodes);
    let mut phase = values[0].arg();
    out.push(Complex64::new(values[0].norm().ln(), phase));
    // the closing step back to theta = 0 must also be continuous
    for k in 1..=nodes {
        let jump = (values[k % nodes] / values[k - 1]).arg();
        if jump.abs() > PI / 2.0 {
            return Err(Error::BranchTracking { node: k, jump });
        }
        phase += jump;
        if k < nodes {
            out.push(Complex64::new(values[k].norm().ln(), phase));
        }
    }
    let winding = phase - values[0].arg();
    if winding.abs() > PI {
        return Err(invalid(format!(
            "xi has a zero inside the contour of radius {radius} (winding {winding})"
        )));
    }
    Ok(out)
}

fn contour_once(field: &FieldSpec, n: u32, radius: f64, nodes: usize) -> Result<f64> {
    let logs = log_xi_on_circle(field, radius, nodes)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for (k, log_xi) in logs.iter().enumerate() {
        let theta = 2.0 * PI * k as f64 / nodes as f64;
        let e = Complex64::from_polar(1.0, theta);
        let s = 1.0 + radius * e;
        let phi = s.powi(n as i32 - 1) * log_xi;
        acc += phi * Complex64::from_polar(1.0, -(n as f64) * theta);
    }
    let mean = acc / nodes as f64;
    let value = mean * (n as f64 / radius.powi(n as i32));
    // conjugate symmetry cancels the imaginary part up to rounding of the
    // node sum, which the 1/r^n scaling amplifies
    let rounding = f64::EPSILON * logs.iter().map(|l| l.norm()).fold(0.0, f64::max) * n as f64 / radius.powi(n as i32)
        * (1.0 + radius).powi(n as i32 - 1);
    if value.im.abs() > IMAGINARY_TOL.max(16.0 * rounding) {
        return Err(Error::ImaginaryResidue(value.im));
    }
    Ok(value.re)
}

/// lambda_n = 1/(n-1)! d^n/ds^n [s^{n-1} log xi_K(s)] at s = 1.
pub fn li_lambda_contour(field: &FieldSpec, n: u32, radius: f64) -> Result<f64> {
    if !(1..=MAX_ORDER).contains(&n) {
        return Err(invalid(format!("Li order must be in 1..={MAX_ORDER}, got {n}")));
    }
    if !(radius > 0.0 && radius <= MAX_RADIUS) {
        return Err(invalid(format!(
            "contour radius must be in (0, {MAX_RADIUS}], got {radius}"
        )));
    }
    let mut nodes = BASE_NODES;
    loop {
        match contour_once(field, n, radius, nodes) {
            Err(Error::BranchTracking { .. }) if nodes < MAX_NODES => nodes *= 2,
            other => return other,
        }
    }
}

/// kappa_1 = -int log t psi, kappa_2 = int log^2 t psi - kappa_1^2.
pub fn cumulants(field: &FieldSpec, model: &DensityModel) -> Result<CumulantPair> {
    if model.field().id != field.id {
        return Err(invalid(format!(
            "density model for {} used with field {}",
            model.field().id,
            field.id
        )));
    }
    let (first, second) = rayon::join(
        || model.expectation(|t: f64| t.ln(), 1.0),
        || model.expectation(|t: f64| t.ln().powi(2), 1.0),
    );
    let kappa1 = -first?.value;
    let kappa2 = second?.value - kappa1 * kappa1;
    Ok(CumulantPair { kappa1, kappa2 })
}

/// Probabilistic lambda_1 = kappa_1 - log sqrt|D| and lambda_2 = 2 lambda_1 + kappa_2.
pub fn lambda_probabilistic(field: &FieldSpec, k: &CumulantPair) -> [f64; 2] {
    let l1 = k.kappa1 - field.sqrt_abs_disc().ln();
    [l1, 2.0 * l1 + k.kappa2]
}

/// Li reports for orders 1..=n_max, both routes where available.
pub fn li_reports(field: &FieldSpec, n_max: u32, radius: f64) -> Result<Vec<LiReport>> {
    if !(1..=MAX_ORDER).contains(&n_max) {
        return Err(invalid(format!("Li order must be in 1..={MAX_ORDER}, got {n_max}")));
    }
    let probabilistic = cumulants(field, &DensityModel::new(field.id)).map(|k| lambda_probabilistic(field, &k))?;
    (1..=n_max)
        .map(|n| {
            let lambda_contour = li_lambda_contour(field, n, radius)?;
            let lambda_probabilistic = (n <= 2).then(|| probabilistic[n as usize - 1]);
            Ok(LiReport {
                field: field.id,
                n,
                lambda_contour,
                lambda_probabilistic,
                agreement: lambda_probabilistic.map_or(0.0, |p| (lambda_contour - p).abs()),
                positive: lambda_contour > 0.0,
            })
        })
        .collect()
}

/// lambda_1 > 0, lambda_2 > 0, and both cumulant identities, with the
/// lambdas from the contour and the cumulants from the density.
pub fn check_proposition(field: &FieldSpec) -> Result<Vec<VerificationReport>> {
    let (lambdas, k) = rayon::join(
        || -> Result<(f64, f64)> {
            Ok((
                li_lambda_contour(field, 1, DEFAULT_RADIUS)?,
                li_lambda_contour(field, 2, DEFAULT_RADIUS)?,
            ))
        },
        || cumulants(field, &DensityModel::new(field.id)),
    );
    let (l1, l2) = lambdas?;
    let k = k?;
    let log_sqrt_d = field.sqrt_abs_disc().ln();
    let id = Some(field.id);
    // positivity reports carry the shortfall below the margin as residual
    let positive = |name: &str, value: f64| {
        VerificationReport::new(name, id, (POSITIVITY_MARGIN - value).max(0.0), 0.0)
            .param("lambda", value)
            .param("margin", POSITIVITY_MARGIN)
    };
    Ok(vec![
        positive("li-lambda1-positive", l1),
        positive("li-lambda2-positive", l2),
        VerificationReport::new(
            "li-kappa1-identity",
            id,
            (k.kappa1 - log_sqrt_d - l1).abs(),
            IDENTITY_TOL,
        )
        .param("kappa1", k.kappa1)
        .param("log_sqrt_disc", log_sqrt_d)
        .param("lambda1", l1),
        VerificationReport::new("li-kappa2-identity", id, (l2 - 2.0 * l1 - k.kappa2).abs(), IDENTITY_TOL)
            .param("kappa2", k.kappa2)
            .param("lambda1", l1)
            .param("lambda2", l2),
    ])
}
