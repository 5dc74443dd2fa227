//! zeta_K against its Dirichlet series and Euler product.

use num_complex::Complex64;
use zetalaw::{dedekind_zeta, FieldId};

/// Number of ideals of norm n, from an independent count of lattice points
/// a^2 + d b^2 = n divided by the number of units.
fn ideal_counts(id: FieldId, limit: usize) -> Vec<f64> {
    let mut a_n = vec![0.0; limit + 1];
    match id {
        FieldId::RationalQ => a_n.iter_mut().skip(1).for_each(|a| *a = 1.0),
        _ => {
            let (d, units) = if id == FieldId::GaussianQi {
                (1usize, 4.0)
            } else {
                (2, 2.0)
            };
            let bound = (limit as f64).sqrt() as i64 + 1;
            for a in -bound..=bound {
                for b in -bound..=bound {
                    let n = (a * a) as usize + d * (b * b) as usize;
                    if n >= 1 && n <= limit {
                        a_n[n] += 1.0 / units;
                    }
                }
            }
        }
    }
    a_n
}

fn primes(limit: usize) -> Vec<u64> {
    let mut sieve = vec![true; limit + 1];
    let mut out = Vec::new();
    for p in 2..=limit {
        if sieve[p] {
            out.push(p as u64);
            (p * p..=limit).step_by(p).for_each(|m| sieve[m] = false);
        }
    }
    out
}

/// Splitting type of p: 2 split, 1 ramified, 0 inert.
fn split(id: FieldId, p: u64) -> u8 {
    match id {
        FieldId::RationalQ => 1,
        FieldId::GaussianQi => match p % 4 {
            1 => 2,
            3 => 0,
            _ => 1,
        },
        FieldId::QSqrtMinus2 => match p % 8 {
            1 | 3 => 2,
            5 | 7 => 0,
            _ => 1,
        },
    }
}

#[test]
fn dirichlet_series_matches() {
    const N: usize = 100_000;
    let points = [
        Complex64::new(3.0, 0.0),
        Complex64::new(3.5, 4.0),
        Complex64::new(4.0, -12.0),
    ];
    for id in FieldId::ALL {
        let a_n = ideal_counts(id, N);
        let f = id.spec();
        for &s in &points {
            let series: Complex64 = (1..=N).map(|n| a_n[n] * (-s * (n as f64).ln()).exp()).sum();
            let got = dedekind_zeta(&f, s).unwrap();
            // tail <= 2 sum_{n > N} n^{-3} < N^{-2}
            assert!((got - series).norm() < 1e-9, "{id} at {s}: {got} vs {series}");
        }
    }
}

#[test]
fn euler_product_matches() {
    let ps = primes(10_000);
    for id in FieldId::ALL {
        let f = id.spec();
        for s in [
            Complex64::new(4.0, 0.0),
            Complex64::new(4.0, 3.0),
            Complex64::new(5.0, -20.0),
        ] {
            let mut product = Complex64::new(1.0, 0.0);
            for &p in &ps {
                let x = (-s * (p as f64).ln()).exp();
                product *= match split(id, p) {
                    2 => 1.0 / ((1.0 - x) * (1.0 - x)),
                    1 => 1.0 / (1.0 - x),
                    _ => 1.0 / (1.0 - x * x),
                };
            }
            let got = dedekind_zeta(&f, s).unwrap();
            assert!((got - product).norm() < 1e-10, "{id} at {s}: {got} vs {product}");
        }
    }
}

#[test]
fn quadratic_zeta_factors() {
    // zeta_K = zeta * L(chi); at s = 2 for Q(i) this is zeta(2) * Catalan
    let catalan = 0.915_965_594_177_219_f64;
    let want = std::f64::consts::PI.powi(2) / 6.0 * catalan;
    let got = dedekind_zeta(&FieldId::GaussianQi.spec(), Complex64::new(2.0, 0.0)).unwrap();
    assert!((got.re - want).abs() < 1e-13 && got.im == 0.0, "{got}");
}
