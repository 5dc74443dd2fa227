//! Two-dimensional Poisson summation for the complex kernel, with the
//! Fourier transform computed numerically on a grid instead of assumed.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use zetalaw::verify::{check_lattice_selfdual, dual_covolume, DUAL_NORM_EXPONENT};
use zetalaw::{kernel_eval, ArchimedeanKernel, FieldId};

const HALF_WIDTH: f64 = 4.0;
const STEP: f64 = 0.02;

fn f(r: f64) -> f64 {
    kernel_eval(ArchimedeanKernel::Complex, r).unwrap()
}

/// Transform of f(|v|) under e^{-2 pi i <v, w>} on R^2 at |w| = rho, by the
/// trapezoidal rule on [-4, 4]^2. Radial, so evaluate at w = (rho, 0) and
/// sum the grid columns once.
struct GridTransform {
    xs: Vec<f64>,
    column_sums: Vec<f64>,
}

impl GridTransform {
    fn new() -> Self {
        let n = (2.0 * HALF_WIDTH / STEP).round() as i64;
        let xs: Vec<f64> = (0..=n).map(|i| -HALF_WIDTH + i as f64 * STEP).collect();
        let column_sums = xs
            .iter()
            .map(|&x| xs.iter().map(|&y| f(x.hypot(y))).sum::<f64>() * STEP * STEP)
            .collect();
        Self { xs, column_sums }
    }

    fn at(&self, rho: f64) -> f64 {
        self.xs
            .iter()
            .zip(&self.column_sums)
            .map(|(&x, &g)| g * (2.0 * PI * x * rho).cos())
            .sum()
    }
}

#[test]
fn numeric_transform_is_self_dual_up_to_scaling() {
    // with the standard measure, the transform is f(rho / 2) / 2
    let ft = GridTransform::new();
    for rho in [0.0, 0.3, 1.0, 1.7, 2.5, 4.0] {
        assert!((ft.at(rho) - f(rho / 2.0) / 2.0).abs() < 1e-12, "rho = {rho}");
    }
}

#[test]
fn lattice_poisson_against_numeric_transform() {
    let ft = GridTransform::new();
    for d in [1u32, 2] {
        let sd = (d as f64).sqrt();
        let id = if d == 1 {
            FieldId::GaussianQi
        } else {
            FieldId::QSqrtMinus2
        };
        for x in [0.5, 1.0, 2.0] {
            // Lambda = x (Z + sqrt(d) i Z), covolume x^2 sqrt(d); its dual has
            // basis 1/x and i / (x sqrt d)
            let n = 40i64;
            let mut lhs = 0.0;
            let mut rhs = 0.0;
            let mut cache: HashMap<i64, f64> = HashMap::new();
            for a in -n..=n {
                for b in -n..=n {
                    lhs += f(x * ((a * a) as f64 + d as f64 * (b * b) as f64).sqrt());
                    let key = d as i64 * a * a + b * b;
                    let rho = ((a * a) as f64 + (b * b) as f64 / d as f64).sqrt() / x;
                    if rho > 8.0 {
                        continue;
                    }
                    rhs += *cache.entry(key).or_insert_with(|| ft.at(rho));
                }
            }
            rhs /= x * x * sd;
            assert!((lhs - rhs).abs() < 1e-9, "d={d} x={x}: {lhs} vs {rhs}");

            // the library's calibrated identity agrees with the oracle
            let report = check_lattice_selfdual(&id.spec(), Complex64::new(0.0, x), 40).unwrap();
            let lib_rhs = report.parameter("rhs").unwrap() + f(0.0);
            assert!((lib_rhs - rhs).abs() < 1e-9, "d={d} x={x}: {lib_rhs} vs {rhs}");
            assert!(report.passed);
        }
        assert_eq!(DUAL_NORM_EXPONENT, 2);
        assert!((dual_covolume(d) - 2.0 * sd).abs() < 1e-15);
    }
}
