//! Inverse-CDF sampling of X.
//!
//! ln t is tabulated at p = i/(N+1) and interpolated by monotone cubic
//! Hermite with exact slopes d ln t/dp = 1/(t psi(t)). Beyond the end nodes
//! the tail mass is modelled as C v^a e^{-b v^k}, with v = t in the upper tail
//! and v = 1/t in the lower one, which is the leading behaviour of the series
//! and of its flip.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analytic::xi;
use crate::density::DensityModel;
use crate::error::{invalid, Result};
use crate::field_data::FieldId;
use crate::report::VerificationReport;

pub const MIN_TABLE_SIZE: usize = 64;
pub const DEFAULT_TABLE_SIZE: usize = 1023;
/// Moment checks pass within this many standard errors.
pub const MOMENT_Z_TOL: f64 = 4.0;
pub const MAX_MOMENT_ORDER: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
struct Tail {
    a: f64,
    b: f64,
    k: f64,
    log_c: f64,
    v_edge: f64,
    /// The variable is 1/t.
    reciprocal: bool,
}

impl Tail {
    fn new(a: f64, b: f64, k: f64, t_edge: f64, mass_edge: f64, reciprocal: bool) -> Self {
        let v_edge = if reciprocal { 1.0 / t_edge } else { t_edge };
        let log_c = mass_edge.ln() - a * v_edge.ln() + b * v_edge.powf(k);
        Self {
            a,
            b,
            k,
            log_c,
            v_edge,
            reciprocal,
        }
    }

    fn log_mass(&self, v: f64) -> f64 {
        self.log_c + self.a * v.ln() - self.b * v.powf(self.k)
    }

    /// The t beyond the edge node carrying tail mass `mass`.
    fn invert(&self, mass: f64) -> f64 {
        let target = mass.ln();
        let mut lo = self.v_edge;
        let mut hi = 2.0 * self.v_edge;
        while self.log_mass(hi) > target {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if self.log_mass(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= 1e-15 * hi {
                break;
            }
        }
        let v = 0.5 * (lo + hi);
        if self.reciprocal {
            1.0 / v
        } else {
            v
        }
    }
}

/// Monotone inverse CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseCdfTable {
    probabilities: Vec<f64>,
    log_quantiles: Vec<f64>,
    slopes: Vec<f64>,
    lower: Tail,
    upper: Tail,
}

impl InverseCdfTable {
    fn new(model: &DensityModel, size: usize) -> Result<Self> {
        let step = 1.0 / (size as f64 + 1.0);
        let probabilities: Vec<f64> = (1..=size).map(|i| i as f64 * step).collect();
        let quantiles = model.quantiles_sorted(&probabilities)?;
        if quantiles.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(crate::error::Error::RootFinding(
                "table quantiles are not increasing".into(),
            ));
        }
        let log_quantiles: Vec<f64> = quantiles.iter().map(|t| t.ln()).collect();
        let mut slopes: Vec<f64> = quantiles
            .iter()
            .map(|&t| model.density(t).map(|psi| 1.0 / (t * psi)))
            .collect::<Result<_>>()?;
        limit_slopes(&probabilities, &log_quantiles, &mut slopes);
        let field = model.field();
        let (t_first, t_last) = (quantiles[0], quantiles[size - 1]);
        let (lower, upper) = if field.is_real_place() {
            (
                Tail::new(3.0, PI, 2.0, t_first, step, true),
                Tail::new(2.0, PI, 2.0, t_last, step, false),
            )
        } else {
            let abs_d = field.abs_disc as f64;
            (
                Tail::new(2.0, 2.0 * PI / abs_d, 1.0, t_first, step, true),
                Tail::new(1.0, 2.0 * PI, 1.0, t_last, step, false),
            )
        };
        Ok(Self {
            probabilities,
            log_quantiles,
            slopes,
            lower,
            upper,
        })
    }

    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn quantiles(&self) -> Vec<f64> {
        self.log_quantiles.iter().map(|z| z.exp()).collect()
    }

    /// Interpolated quantile for p in (0, 1).
    pub fn quantile(&self, p: f64) -> f64 {
        let n = self.len();
        let (p_first, p_last) = (self.probabilities[0], self.probabilities[n - 1]);
        if p < p_first {
            return self.lower.invert(p);
        }
        if p > p_last {
            return self.upper.invert(1.0 - p);
        }
        let j = (self.probabilities.partition_point(|&q| q <= p)).clamp(1, n - 1) - 1;
        let (p0, p1) = (self.probabilities[j], self.probabilities[j + 1]);
        let h = p1 - p0;
        let s = (p - p0) / h;
        let (s2, s3) = (s * s, s * s * s);
        let z = (2.0 * s3 - 3.0 * s2 + 1.0) * self.log_quantiles[j]
            + (s3 - 2.0 * s2 + s) * h * self.slopes[j]
            + (-2.0 * s3 + 3.0 * s2) * self.log_quantiles[j + 1]
            + (s3 - s2) * h * self.slopes[j + 1];
        z.exp()
    }
}

/// Fritsch-Carlson limiter: keeps each Hermite cell monotone.
fn limit_slopes(x: &[f64], y: &[f64], m: &mut [f64]) {
    for j in 0..x.len() - 1 {
        let delta = (y[j + 1] - y[j]) / (x[j + 1] - x[j]);
        let alpha = m[j] / delta;
        let beta = m[j + 1] / delta;
        let r = alpha.hypot(beta);
        if r > 3.0 {
            m[j] = 3.0 / r * alpha * delta;
            m[j + 1] = 3.0 / r * beta * delta;
        }
    }
}

/// ChaCha8 stream plus a shared inverse-CDF table.
#[derive(Debug, Clone)]
pub struct SamplerState {
    pub field: FieldId,
    pub seed: u64,
    table: Arc<InverseCdfTable>,
    rng: ChaCha8Rng,
}

impl SamplerState {
    pub fn table(&self) -> &InverseCdfTable {
        &self.table
    }

    /// `count` draws; advances the stream.
    pub fn sample(&mut self, count: usize) -> Vec<f64> {
        (0..count)
            .map(|_| {
                let u: f64 = self.rng.sample(Open01);
                self.table.quantile(u)
            })
            .collect()
    }

    /// An independent stream over the same table, for per-thread sampling.
    pub fn fork(&self, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream + 1);
        Self {
            field: self.field,
            seed: self.seed,
            table: Arc::clone(&self.table),
            rng,
        }
    }
}

impl PartialEq for SamplerState {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.seed == other.seed && self.table == other.table && self.rng == other.rng
    }
}

pub fn build_sampler(model: &DensityModel, table_size: usize, seed: u64) -> Result<SamplerState> {
    if table_size < MIN_TABLE_SIZE {
        return Err(invalid(format!(
            "table size must be at least {MIN_TABLE_SIZE}, got {table_size}"
        )));
    }
    Ok(SamplerState {
        field: model.field().id,
        seed,
        table: Arc::new(InverseCdfTable::new(model, table_size)?),
        rng: ChaCha8Rng::seed_from_u64(seed),
    })
}

pub fn sample(state: &mut SamplerState, count: usize) -> Vec<f64> {
    state.sample(count)
}

/// Sample moments (1/N) sum x^s against |D|^{-s/2} xi_K(s); the residual is
/// the largest deviation in standard errors.
pub fn validate_samples(state: &SamplerState, samples: &[f64], s_values: &[f64]) -> Result<VerificationReport> {
    if samples.len() < 2 {
        return Err(invalid("moment validation needs at least two samples"));
    }
    if let Some(s) = s_values.iter().find(|s| !(s.abs() <= MAX_MOMENT_ORDER)) {
        return Err(invalid(format!(
            "moment order must satisfy |s| <= {MAX_MOMENT_ORDER}, got {s}"
        )));
    }
    let field = state.field.spec();
    let n = samples.len() as f64;
    let mut worst: f64 = 0.0;
    let mut report_params = Vec::new();
    for &s in s_values {
        let powers: Vec<f64> = samples.iter().map(|x| x.powf(s)).collect();
        let mean = powers.iter().sum::<f64>() / n;
        let var = powers.iter().map(|p| (p - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        let expected = (field.abs_disc as f64).powf(-s / 2.0) * xi(&field, Complex64::new(s, 0.0))?.re;
        let diff = (mean - expected).abs();
        let z = if se > 0.0 {
            diff / se
        } else if diff <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(z);
        report_params.push((s, mean, expected, se));
    }
    let mut report = VerificationReport::new("sample-moments", Some(state.field), worst, MOMENT_Z_TOL)
        .param("samples", n)
        .param("seed", state.seed as f64);
    for (s, mean, expected, se) in report_params {
        report = report
            .param(format!("moment[{s}]"), mean)
            .param(format!("expected[{s}]"), expected)
            .param(format!("std_error[{s}]"), se);
    }
    Ok(report)
}

/// sup |F_N - F| between the empirical and exact CDF.
pub fn ks_statistic(model: &DensityModel, samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(invalid("KS statistic needs samples"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let cdf = model.cdf_sorted(&sorted)?;
    let n = sorted.len() as f64;
    Ok(cdf
        .iter()
        .enumerate()
        .map(|(i, &f)| (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs()))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_node_matches_bisection() {
        let model = DensityModel::new(FieldId::GaussianQi);
        let state = build_sampler(&model, 127, 1).unwrap();
        let node = state.table().quantiles()[63];
        assert_eq!(state.table().probabilities()[63], 0.5);
        let (mut a, mut b) = (0.01f64, 10.0f64);
        for _ in 0..60 {
            let m = (a * b).sqrt();
            if model.cdf(m).unwrap() < 0.5 {
                a = m;
            } else {
                b = m;
            }
        }
        assert!((node - a).abs() < 1e-9 * a, "{node} vs {a}");
    }

    #[test]
    fn table_monotone_and_deterministic() {
        let model = DensityModel::new(FieldId::RationalQ);
        let a = build_sampler(&model, 64, 7).unwrap();
        let b = build_sampler(&model, 64, 7).unwrap();
        assert_eq!(a, b);
        let q = a.table().quantiles();
        assert!(q.windows(2).all(|w| w[1] > w[0]) && q[0] > 0.0);
        assert!(build_sampler(&model, 63, 7).is_err());
    }

    #[test]
    fn interpolation_and_tails_are_monotone() {
        for id in FieldId::ALL {
            let state = build_sampler(&DensityModel::new(id), 64, 0).unwrap();
            let table = state.table();
            let mut prev = 0.0;
            for i in 1..20000 {
                let p = i as f64 / 20000.0;
                let t = table.quantile(p);
                assert!(t > prev, "{id}: p={p}");
                prev = t;
            }
            assert!(table.quantile(1e-300) > 0.0);
            assert!(table.quantile(1.0 - 1e-16).is_finite());
        }
    }

    #[test]
    fn tails_follow_the_cdf() {
        for id in FieldId::ALL {
            let model = DensityModel::new(id);
            let state = build_sampler(&model, 64, 0).unwrap();
            for p in [1e-3, 1e-6] {
                let t = state.table().quantile(p);
                let lower = model.cdf(t).unwrap();
                assert!((lower / p).ln().abs() < 0.2, "{id}: cdf({t}) = {lower} for p = {p}");
                let t = state.table().quantile(1.0 - p);
                let upper = model.survival(t).unwrap();
                assert!((upper / p).ln().abs() < 0.2, "{id}: sf({t}) = {upper} for p = {p}");
            }
        }
    }

    #[test]
    fn round_trip() {
        for id in FieldId::ALL {
            let model = DensityModel::new(id);
            let state = build_sampler(&model, DEFAULT_TABLE_SIZE, 0).unwrap();
            for p in [0.01, 0.1, 0.5, 0.9, 0.99] {
                let got = model.cdf(state.table().quantile(p)).unwrap();
                assert!((got - p).abs() < 1e-6, "{id}: {p} -> {got}");
            }
        }
    }

    #[test]
    fn streams_are_reproducible() {
        let model = DensityModel::new(FieldId::QSqrtMinus2);
        let mut a = build_sampler(&model, 64, 42).unwrap();
        let mut b = a.clone();
        assert_eq!(a.sample(100), b.sample(100));
        assert_ne!(a.sample(10), a.fork(0).sample(10));
        let zero = validate_samples(&a, &a.clone().sample(100), &[0.0]).unwrap();
        assert_eq!(zero.residual, 0.0);
        assert!(validate_samples(&a, &[1.0, 2.0], &[3.5]).is_err());
    }
}
