//! Density of the random variable X with E[X^s] = |D|^{-s/2} xi_K(s).
//!
//! The density is the normalized fiber integral of the adelic test function
//! over ideles of norm t. After summing over K^x it reduces to a lattice sum of
//! the archimedean kernel f_inf:
//!
//! ```text
//! psi(t) = t^{-1} sum_{l in O_K \ 0} f_inf(x l),   |x|_inf = t
//! ```
//!
//! where |x|_inf is the usual absolute value for Q and the squared modulus for
//! the imaginary quadratic fields. Explicitly
//!
//! ```text
//! Q:          psi(t) = sum_{n>=1} 4 pi n^2 t (2 pi n^2 t^2 - 3) e^{-pi n^2 t^2}
//! Q(sqrt-d):  psi(t) = sum_{n>=1} r_d(n) 4 pi n (pi t n - 1) e^{-2 pi t n}
//! ```
//!
//! Poisson summation and the self-duality of f_inf give the flip relation
//! psi_Y(1/y) = y^3 psi_Y(y) for Y = sqrt|D| X, which is used below the flip
//! point so that the series always runs at an argument where it converges fast
//! and every term is nonnegative.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::field_data::{field_spec, ArchimedeanKernel, FieldId, FieldSpec};
use crate::quad::{integrate_segments, Integral, QuadValue, QuadratureConfig};

/// Largest norm for which the representation counts are precomputed.
const PREFILL_NORM: u64 = 4096;
const MAX_TERMS: u64 = 10_000_000;

/// Number of (a, b) in Z^2 with a^2 + d b^2 = n, by enumerating b and testing
/// n - d b^2 for being a perfect square.
pub fn rep_count(d: u32, n: u64) -> Result<u64> {
    if !(1..=2).contains(&d) {
        return Err(invalid(format!("lattice parameter must be 1 or 2, got {d}")));
    }
    if n == 0 {
        return Err(invalid("rep_count is defined for n >= 1"));
    }
    Ok(rep_count_unchecked(d as u64, n))
}

fn rep_count_unchecked(d: u64, n: u64) -> u64 {
    let b_max = (n / d).isqrt();
    let mut count = 0;
    for b in 0..=b_max {
        let rest = n - d * b * b;
        let a = rest.isqrt();
        if a * a == rest {
            let a_mult = if a == 0 { 1 } else { 2 };
            let b_mult = if b == 0 { 1 } else { 2 };
            count += a_mult * b_mult;
        }
    }
    count
}

/// Cached r_d(n) for 1 <= n <= max_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RepCountTable {
    d: u32,
    counts: Vec<u32>,
}

impl RepCountTable {
    pub fn new(d: u32, max_n: u64) -> Result<Self> {
        rep_count(d, 1)?;
        let counts = (0..=max_n)
            .map(|n| {
                if n == 0 {
                    0
                } else {
                    rep_count_unchecked(d as u64, n) as u32
                }
            })
            .collect();
        Ok(Self { d, counts })
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn max_n(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    /// r_d(n), computed on the fly beyond the cached range.
    pub fn count(&self, n: u64) -> u64 {
        match self.counts.get(n as usize) {
            Some(&c) if n > 0 => c as u64,
            _ => rep_count_unchecked(self.d as u64, n),
        }
    }

    /// Sum of r_d(n) over 1 <= n <= limit.
    pub fn cumulative(&self, limit: u64) -> u64 {
        (1..=limit).map(|n| self.count(n)).sum()
    }
}

/// Which representation produced a density value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    Direct,
    Flipped,
}

/// A truncated series evaluation with its certified tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesSum {
    pub value: f64,
    pub terms: u64,
    /// Smallest summand (after the global prefactor).
    pub min_term: f64,
    pub tail_bound: f64,
    pub branch: Branch,
}

/// Lattice-sum representation of psi_K with truncation control.
#[derive(Debug, Clone)]
pub struct DensityModel {
    field: FieldSpec,
    kernel: ArchimedeanKernel,
    truncation_eps: f64,
    flip_point: f64,
    quad: QuadratureConfig,
    reps: Option<Arc<RepCountTable>>,
}

impl DensityModel {
    pub const DEFAULT_EPS: f64 = 1e-16;
    pub const DEFAULT_FLIP: f64 = 1.0;

    pub fn new(id: FieldId) -> Self {
        Self::with_params(field_spec(id), Self::DEFAULT_EPS, Self::DEFAULT_FLIP).expect("default parameters are valid")
    }

    /// `flip_point` is measured on the rescaled variable y = sqrt|D| t.
    pub fn with_params(field: FieldSpec, truncation_eps: f64, flip_point: f64) -> Result<Self> {
        if !(truncation_eps > 0.0 && truncation_eps <= 1e-8) {
            return Err(invalid(format!(
                "truncation_eps must lie in (0, 1e-8], got {truncation_eps}"
            )));
        }
        if !(0.5..=2.0).contains(&flip_point) {
            return Err(invalid(format!("flip_point must lie in [0.5, 2], got {flip_point}")));
        }
        let reps = if field.is_real_place() {
            None
        } else {
            Some(Arc::new(RepCountTable::new(field.lattice_d, PREFILL_NORM)?))
        };
        Ok(Self {
            field,
            kernel: field.kernel(),
            truncation_eps,
            flip_point,
            quad: QuadratureConfig::default(),
            reps,
        })
    }

    pub fn with_quadrature(mut self, quad: QuadratureConfig) -> Self {
        self.quad = quad;
        self
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn kernel(&self) -> ArchimedeanKernel {
        self.kernel
    }

    pub fn truncation_eps(&self) -> f64 {
        self.truncation_eps
    }

    pub fn flip_point(&self) -> f64 {
        self.flip_point
    }

    pub fn quadrature(&self) -> &QuadratureConfig {
        &self.quad
    }

    fn sqrt_d(&self) -> f64 {
        self.field.sqrt_abs_disc()
    }

    /// The series summed term by term at `t`, with no flip.
    pub fn direct_series(&self, t: f64) -> Result<SeriesSum> {
        check_argument(t)?;
        // every term below e^{-700} times a polynomial factor
        let exponent = if self.reps.is_none() { PI * t * t } else { 2.0 * PI * t };
        if exponent > 700.0 {
            return Ok(SeriesSum {
                value: 0.0,
                terms: 0,
                min_term: 0.0,
                tail_bound: 0.0,
                branch: Branch::Direct,
            });
        }
        match &self.reps {
            None => self.rational_series(t),
            Some(reps) => self.quadratic_series(reps, t),
        }
    }

    /// psi(t) through the flip relation: y^{-3} times the series at
    /// 1/(|D| t), where y = sqrt|D| t.
    pub fn flipped_series(&self, t: f64) -> Result<SeriesSum> {
        check_argument(t)?;
        let abs_d = self.field.abs_disc as f64;
        let y = self.sqrt_d() * t;
        let dual = self.direct_series(1.0 / (abs_d * t))?;
        if dual.value == 0.0 {
            return Ok(SeriesSum {
                value: 0.0,
                min_term: dual.min_term.min(0.0),
                branch: Branch::Flipped,
                ..dual
            });
        }
        let scale = y.powi(-3);
        Ok(SeriesSum {
            value: scale * dual.value,
            min_term: scale * dual.min_term,
            tail_bound: scale * dual.tail_bound,
            terms: dual.terms,
            branch: Branch::Flipped,
        })
    }

    /// Evaluates psi with the branch chosen by the flip point.
    pub fn evaluate(&self, t: f64) -> Result<SeriesSum> {
        check_argument(t)?;
        if self.sqrt_d() * t < self.flip_point {
            self.flipped_series(t)
        } else {
            self.direct_series(t)
        }
    }

    /// psi(t).
    pub fn density(&self, t: f64) -> Result<f64> {
        Ok(self.evaluate(t)?.value)
    }

    /// Density of Y = sqrt|D| X at y.
    pub fn rescaled_density(&self, y: f64) -> Result<f64> {
        check_argument(y)?;
        let r = self.sqrt_d();
        Ok(self.density(y / r)? / r)
    }

    fn density_unchecked(&self, t: f64) -> f64 {
        self.density(t).unwrap_or(f64::NAN)
    }

    fn rational_series(&self, t: f64) -> Result<SeriesSum> {
        // psi(t) = (2/t) sum_{n>=1} f(n t); envelope 8 pi^2 n^4 t^3 e^{-pi n^2 t^2}
        let monotone_from = (3.0 / (2.0 * PI)).sqrt().max((2.0 / PI).sqrt()) / t;
        let mut sum = 0.0;
        let mut min_term = f64::INFINITY;
        let mut n = 1u64;
        loop {
            let x = n as f64 * t;
            let term = 2.0 / t * self.kernel.eval_unchecked(x);
            sum += term;
            min_term = min_term.min(term);
            let m = n as f64;
            if m >= monotone_from {
                let envelope = 8.0 * PI * PI * m.powi(4) * t.powi(3) * (-PI * x * x).exp();
                let slope = 2.0 * PI * t * t * m - 4.0 / m;
                if envelope < self.truncation_eps / 10.0 && slope > 0.0 {
                    let tail = envelope / slope;
                    if tail < self.truncation_eps {
                        return Ok(SeriesSum {
                            value: sum,
                            terms: n,
                            min_term,
                            tail_bound: tail,
                            branch: Branch::Direct,
                        });
                    }
                }
            }
            n += 1;
            if n > MAX_TERMS {
                return Err(Error::Truncation {
                    bound: f64::INFINITY,
                    limit: self.truncation_eps,
                });
            }
        }
    }

    fn quadratic_series(&self, reps: &RepCountTable, t: f64) -> Result<SeriesSum> {
        // psi(t) = sum r_d(n) 4 pi n (pi t n - 1) e^{-2 pi t n};
        // r_d(n) <= 6 sqrt(n) gives the envelope 24 pi^2 t n^{5/2} e^{-2 pi t n}
        let monotone_from = (2.0 / (PI * t)).max(2.5 / (2.0 * PI * t));
        let mut sum = 0.0;
        let mut min_term = f64::INFINITY;
        let mut n = 1u64;
        loop {
            let m = n as f64;
            let r = reps.count(n);
            if r > 0 {
                let term = r as f64 * 4.0 * PI * m * (PI * t * m - 1.0) * (-2.0 * PI * t * m).exp();
                sum += term;
                min_term = min_term.min(term);
            }
            if m >= monotone_from {
                let envelope = 24.0 * PI * PI * t * m.powf(2.5) * (-2.0 * PI * t * m).exp();
                let slope = 2.0 * PI * t - 2.5 / m;
                if envelope < self.truncation_eps / 10.0 && slope > 0.0 {
                    let tail = envelope / slope;
                    if tail < self.truncation_eps {
                        return Ok(SeriesSum {
                            value: sum,
                            terms: n,
                            min_term,
                            tail_bound: tail,
                            branch: Branch::Direct,
                        });
                    }
                }
            }
            n += 1;
            if n > MAX_TERMS {
                return Err(Error::Truncation {
                    bound: f64::INFINITY,
                    limit: self.truncation_eps,
                });
            }
        }
    }

    /// Certified bound on the mass of y^{+-sigma} psi_Y(y) outside [1/Y, Y].
    fn tail_bound(&self, window: f64, sigma: f64) -> f64 {
        // lower tail maps to int_Y^inf v^{sigma+1} psi_Y(v) dv under y -> 1/y,
        // which dominates the upper tail for v >= 1
        let (c, a, b, k) = if self.field.is_real_place() {
            (16.0 * PI * PI, sigma + 4.0, PI, 2.0)
        } else {
            let abs_d = self.field.abs_disc as f64;
            (48.0 * PI * PI / abs_d, sigma + 2.0, 2.0 * PI / abs_d.sqrt(), 1.0)
        };
        let slope = b * k * window.powf(k - 1.0) - a / window;
        if slope <= 0.0 {
            return f64::INFINITY;
        }
        2.0 * c * window.powf(a) * (-b * window.powf(k)).exp() / slope
    }

    /// Smallest power-of-two window [1/Y, Y] on the y-scale whose tail bound
    /// for weights growing like y^{+-sigma} is below the configured tolerance.
    fn window(&self, sigma: f64) -> Result<(f64, f64)> {
        let scale = (self.field.abs_disc as f64).powf(sigma.abs() / 2.0).max(1.0);
        let mut y = 8.0;
        while y <= 1024.0 {
            let bound = scale * self.tail_bound(y, sigma.abs());
            if bound < self.quad.tail_tol {
                return Ok((y, bound));
            }
            y *= 2.0;
        }
        Err(Error::Truncation {
            bound: scale * self.tail_bound(1024.0, sigma.abs()),
            limit: self.quad.tail_tol,
        })
    }

    fn log_breakpoints(&self, y_window: f64) -> Vec<f64> {
        let shift = self.sqrt_d().ln();
        let k = y_window.log2().round() as i32;
        (-k..=k).map(|j| j as f64 * 2f64.ln() - shift).collect()
    }

    /// int_0^inf g(t) psi(t) dt for weights with |g(t)| <= C (y^sigma + y^-sigma).
    pub fn expectation<T, G>(&self, g: G, sigma: f64) -> Result<Integral<T>>
    where
        T: QuadValue,
        G: Fn(f64) -> T,
    {
        let (y_window, tail) = self.window(sigma)?;
        let points = self.log_breakpoints(y_window);
        let mut result = integrate_segments(
            |u: f64| {
                let t = u.exp();
                g(t) * (self.density_unchecked(t) * t)
            },
            &points,
            &self.quad,
        )?;
        result.error += tail;
        Ok(result)
    }

    /// int_0^inf t^s psi(t) dt.
    pub fn mellin(&self, s: Complex64) -> Result<Complex64> {
        if !s.re.is_finite() || !s.im.is_finite() {
            return Err(invalid(format!("mellin: non-finite exponent {s}")));
        }
        let integral = self.expectation(|t| (s * t.ln()).exp(), s.re.abs() + 1.0)?;
        Ok(integral.value)
    }

    fn integrate_log_range(&self, t0: f64, t1: f64) -> Result<f64> {
        if t1 <= t0 {
            return Ok(0.0);
        }
        let (u0, u1) = (t0.ln(), t1.ln());
        let mut points = vec![u0];
        let inner: Vec<f64> = self
            .log_breakpoints(1024.0)
            .into_iter()
            .filter(|&u| u > u0 && u < u1)
            .collect();
        points.extend(inner);
        points.push(u1);
        Ok(integrate_segments(
            |u: f64| {
                let t = u.exp();
                self.density_unchecked(t) * t
            },
            &points,
            &self.quad,
        )?
        .value)
    }

    /// t-range outside of which at most `tail_tol` mass lies on either side.
    fn mass_window(&self) -> Result<(f64, f64)> {
        let (y, _) = self.window(0.0)?;
        let r = self.sqrt_d();
        Ok((1.0 / (y * r), y / r))
    }

    /// P(X <= t).
    pub fn cdf(&self, t: f64) -> Result<f64> {
        check_argument(t)?;
        let (lo, hi) = self.mass_window()?;
        let value = if t <= lo {
            self.integrate_log_range(t / 16.0, t)?
        } else if t >= hi {
            1.0 - self.survival(t)?
        } else {
            self.integrate_log_range(lo, t)?
        };
        Ok(value.clamp(0.0, 1.0))
    }

    /// P(X > t).
    pub fn survival(&self, t: f64) -> Result<f64> {
        check_argument(t)?;
        let (lo, hi) = self.mass_window()?;
        let value = if t >= hi {
            self.integrate_log_range(t, 16.0 * t)?
        } else if t <= lo {
            1.0 - self.cdf(t)?
        } else {
            self.integrate_log_range(t, hi)?
        };
        Ok(value.clamp(0.0, 1.0))
    }

    /// CDF at each point of an ascending list, accumulated segment by segment.
    pub fn cdf_sorted(&self, ts: &[f64]) -> Result<Vec<f64>> {
        if ts.is_empty() {
            return Ok(Vec::new());
        }
        if ts.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("cdf_sorted needs ascending arguments"));
        }
        let first = self.cdf(ts[0])?;
        let increments: Vec<f64> = ts
            .par_windows(2)
            .map(|w| self.integrate_log_range(w[0], w[1]))
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(ts.len());
        let mut acc = first;
        out.push(acc);
        for inc in increments {
            acc += inc;
            out.push(acc.min(1.0));
        }
        Ok(out)
    }

    /// The t with P(X <= t) = p, to |cdf - p| <= 1e-12.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(invalid(format!("quantile needs p in (0, 1), got {p}")));
        }
        let (lo, hi) = self.mass_window()?;
        let (mut a, mut b) = (lo.ln(), hi.ln());
        let mut fa = self.cdf(lo)? - p;
        let fb = self.cdf(hi)? - p;
        if fa > 0.0 || fb < 0.0 {
            return Err(Error::RootFinding(format!("p = {p} not bracketed by the mass window")));
        }
        // safeguarded Newton in u = ln t; d/du cdf(e^u) = t psi(t)
        let mut u = 0.5 * (a + b);
        for _ in 0..200 {
            let t = u.exp();
            let f = self.cdf(t)? - p;
            if f.abs() <= 1e-12 {
                return Ok(t);
            }
            if f < 0.0 {
                a = u;
                fa = f;
            } else {
                b = u;
            }
            let slope = t * self.density(t)?;
            let newton = u - f / slope;
            u = if slope > 0.0 && newton > a && newton < b {
                newton
            } else {
                0.5 * (a + b)
            };
            if b - a < 1e-15 {
                return Ok(u.exp());
            }
        }
        Err(Error::RootFinding(format!(
            "no convergence for p = {p} (last residual {fa:.3e})"
        )))
    }

    pub fn median(&self) -> Result<f64> {
        self.quantile(0.5)
    }

    /// Quantiles for an ascending list of probabilities. The CDF is
    /// accumulated once on a log grid and each root is polished inside its
    /// bracketing cell, so the cost does not grow with the distance from the
    /// window edge.
    pub fn quantiles_sorted(&self, ps: &[f64]) -> Result<Vec<f64>> {
        if ps.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
            return Err(invalid("quantiles need p in (0, 1)"));
        }
        if ps.windows(2).any(|w| w[1] < w[0]) {
            return Err(invalid("quantiles_sorted needs ascending probabilities"));
        }
        let (lo, hi) = self.mass_window()?;
        let grid = log_grid(lo, hi, 513);
        let cdf = self.cdf_sorted(&grid)?;
        ps.par_iter()
            .map(|&p| {
                let j = cdf.partition_point(|&c| c <= p);
                if j == 0 || j == grid.len() {
                    return Err(Error::RootFinding(format!("p = {p} not bracketed by the mass window")));
                }
                self.polish_quantile(p, grid[j - 1], cdf[j - 1], grid[j])
            })
            .collect()
    }

    /// Root of base + int_{t0}^t psi = p for t in [t0, t1].
    fn polish_quantile(&self, p: f64, t0: f64, base: f64, t1: f64) -> Result<f64> {
        let (mut a, mut b) = (t0.ln(), t1.ln());
        let mut u = 0.5 * (a + b);
        for _ in 0..200 {
            let t = u.exp();
            let f = base + self.integrate_log_range(t0, t)? - p;
            if f.abs() <= 1e-12 {
                return Ok(t);
            }
            if f < 0.0 {
                a = u;
            } else {
                b = u;
            }
            let slope = t * self.density(t)?;
            let newton = u - f / slope;
            u = if slope > 0.0 && newton > a && newton < b {
                newton
            } else {
                0.5 * (a + b)
            };
            if b - a < 1e-15 {
                return Ok(u.exp());
            }
        }
        Err(Error::RootFinding(format!("no convergence for p = {p}")))
    }
}

fn check_argument(t: f64) -> Result<()> {
    if t.is_finite() && t > 0.0 {
        Ok(())
    } else {
        Err(invalid(format!("density argument must be finite and > 0, got {t}")))
    }
}

/// psi_K(t).
pub fn density(model: &DensityModel, t: f64) -> Result<f64> {
    model.density(t)
}

/// int_0^t psi_K(u) du.
pub fn density_cdf(model: &DensityModel, t: f64) -> Result<f64> {
    model.cdf(t)
}

/// int_0^inf t^s psi_K(t) dt.
pub fn mellin(model: &DensityModel, s: Complex64) -> Result<Complex64> {
    model.mellin(s)
}

/// Minimum of psi over `grid`, evaluated in parallel.
pub fn min_density(model: &DensityModel, grid: &[f64]) -> Result<f64> {
    let values: Vec<f64> = grid.par_iter().map(|&t| model.density(t)).collect::<Result<_>>()?;
    Ok(values.into_iter().fold(f64::INFINITY, f64::min))
}

/// `count` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}
