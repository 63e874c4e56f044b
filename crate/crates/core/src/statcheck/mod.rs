//! Statistical and numerical checks shared by every generator.

mod gates;

pub use gates::{
    composite_identity_error, distribution_gates, pretest_violations, selftest, DistributionVerdict, GateReport,
    GateRun, SelftestConfig, GATE_SEEDS, RATIO_COST_TARGET,
};

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use statrs::function::erf::erfc;
use thiserror::Error;

use crate::fastfuncs::{g_reference, mobius_inverse, HApprox, SinCos16Coeffs};
use crate::method::NormalParams;

/// Smallest sample accepted by the goodness-of-fit tests.
pub const MIN_GOF_SAMPLES: usize = 100;
/// Smallest grid accepted by [`approx_error_grid`].
pub const MIN_GRID_POINTS: usize = 100_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatError {
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample {0} lies outside [0, 1)")]
    OutOfRange(f64),
    #[error("sample is not finite: {0}")]
    NonFinite(f64),
    #[error("reference distribution needs sigma > 0")]
    DegenerateScale,
    #[error("no tabulated critical value for alpha = {0}")]
    UnsupportedAlpha(f64),
    #[error("grid needs at least {needed} points, got {got}")]
    GridTooSmall { needed: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub n: usize,
    pub mean: f64,
    /// Unbiased (n - 1) variance.
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
    pub min: f64,
    pub max: f64,
}

/// One-pass central moments (Welford, extended to third and fourth order).
pub fn moments(samples: &[f64]) -> Result<SampleStats, StatError> {
    if samples.len() < 2 {
        return Err(StatError::TooFewSamples {
            needed: 2,
            got: samples.len(),
        });
    }
    let (mut mean, mut m2, mut m3, mut m4) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut min, mut max) = (f64::INFINITY, f64::NEG_INFINITY);
    for (i, &x) in samples.iter().enumerate() {
        let n = (i + 1) as f64;
        let delta = x - mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * (n - 1.0);
        mean += delta_n;
        m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * m2 - 4.0 * delta_n * m3;
        m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * m2;
        m2 += term1;
        min = min.min(x);
        max = max.max(x);
    }
    let n = samples.len() as f64;
    let (skewness, excess_kurtosis) = if m2 > 0.0 {
        (n.sqrt() * m3 / m2.powf(1.5), n * m4 / (m2 * m2) - 3.0)
    } else {
        (0.0, 0.0)
    };
    Ok(SampleStats {
        n: samples.len(),
        mean,
        variance: m2 / (n - 1.0),
        skewness,
        excess_kurtosis,
        min,
        max,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GofResult {
    pub statistic: f64,
    pub critical_value_at_alpha: f64,
    pub alpha: f64,
    /// `statistic < critical_value_at_alpha`
    pub pass: bool,
}

impl GofResult {
    fn new(statistic: f64, critical: f64, alpha: f64) -> Self {
        GofResult {
            statistic,
            critical_value_at_alpha: critical,
            alpha,
            pass: statistic < critical,
        }
    }
}

/// Kolmogorov-Smirnov test against U[0, 1) at `alpha = 0.01`.
pub fn ks_uniform(samples: &[f64]) -> Result<GofResult, StatError> {
    ks_uniform_at(samples, 0.01)
}

/// Kolmogorov-Smirnov test against U[0, 1). The critical value is the
/// asymptotic `sqrt(-ln(alpha / 2) / 2) / sqrt(n)`.
pub fn ks_uniform_at(samples: &[f64], alpha: f64) -> Result<GofResult, StatError> {
    if samples.len() < MIN_GOF_SAMPLES {
        return Err(StatError::TooFewSamples {
            needed: MIN_GOF_SAMPLES,
            got: samples.len(),
        });
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(StatError::UnsupportedAlpha(alpha));
    }
    if let Some(&bad) = samples.iter().find(|u| !(0.0..1.0).contains(*u)) {
        return Err(StatError::OutOfRange(bad));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &u)| {
            let above = (i + 1) as f64 / n - u;
            let below = u - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    let critical = (-(alpha / 2.0).ln() / 2.0).sqrt() / n.sqrt();
    Ok(GofResult::new(d, critical, alpha))
}

/// Asymptotic critical values of A² for a fully specified null distribution
/// (Anderson and Darling 1954; Marsaglia and Marsaglia 2004).
pub const AD_CRITICAL: [(f64, f64); 5] = [
    (0.10, 1.933),
    (0.05, 2.492),
    (0.025, 3.070),
    (0.01, 3.857),
    (0.001, 5.973),
];

/// Anderson-Darling test against N(mu, sigma²) with known parameters, at `alpha = 0.01`.
pub fn ad_normal(samples: &[f64], params: NormalParams) -> Result<GofResult, StatError> {
    ad_normal_at(samples, params, 0.01)
}

pub fn ad_normal_at(samples: &[f64], params: NormalParams, alpha: f64) -> Result<GofResult, StatError> {
    if samples.len() < MIN_GOF_SAMPLES {
        return Err(StatError::TooFewSamples {
            needed: MIN_GOF_SAMPLES,
            got: samples.len(),
        });
    }
    if params.sigma() <= 0.0 {
        return Err(StatError::DegenerateScale);
    }
    let critical = AD_CRITICAL
        .iter()
        .find(|(a, _)| *a == alpha)
        .map(|&(_, c)| c)
        .ok_or(StatError::UnsupportedAlpha(alpha))?;
    if let Some(&bad) = samples.iter().find(|x| !x.is_finite()) {
        return Err(StatError::NonFinite(bad));
    }
    let mut z: Vec<f64> = samples.iter().map(|x| (x - params.mu()) / params.sigma()).collect();
    z.sort_unstable_by(f64::total_cmp);
    // ln F(z) and ln(1 - F(z)), each from the non-cancelling erfc side
    let ln_cdf = |z: f64| (0.5 * erfc(-z * FRAC_1_SQRT_2)).ln();
    let ln_sf = |z: f64| (0.5 * erfc(z * FRAC_1_SQRT_2)).ln();
    let n = z.len();
    let sum: f64 = (0..n)
        .map(|i| (2 * i + 1) as f64 * (ln_cdf(z[i]) + ln_sf(z[n - 1 - i])))
        .sum();
    let a2 = -(n as f64) - sum / n as f64;
    Ok(GofResult::new(a2, critical, alpha))
}

/// Fast function to compare against its double-precision reference.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ApproxFn {
    /// Polynomial sin/cos with four doublings, `v` on `[0, 1)`.
    SinCos16,
    /// Batched `g(u)`, `u` on `[0, 1 - 1e-6]`.
    GFast,
    /// `h(v)` against `g(u(v))`, `v` on `[-1, 1]`.
    EvalH,
}

/// Max absolute error of a fast kernel over an equispaced grid of `n_points`.
pub fn approx_error_grid(f: ApproxFn, n_points: usize) -> Result<f64, StatError> {
    if n_points < MIN_GRID_POINTS {
        return Err(StatError::GridTooSmall {
            needed: MIN_GRID_POINTS,
            got: n_points,
        });
    }
    let happ = HApprox::standard();
    let err = match f {
        ApproxFn::SinCos16 => {
            let coeffs = SinCos16Coeffs::default();
            (0..n_points)
                .map(|i| {
                    let v = i as f64 / n_points as f64;
                    let (s, c) = coeffs.sin_cos(v);
                    let (rs, rc) = (TAU * v - PI).sin_cos();
                    (s - rs).abs().max((c - rc).abs())
                })
                .fold(0.0, f64::max)
        }
        ApproxFn::GFast => {
            let top = 1.0 - 1e-6;
            let u: Vec<f64> = (0..n_points).map(|i| top * i as f64 / (n_points - 1) as f64).collect();
            let mut g = vec![0.0; n_points];
            happ.g_fast(&u, &mut g);
            u.iter()
                .zip(&g)
                .map(|(&ui, gi)| (gi - g_reference(ui)).abs())
                .fold(0.0, f64::max)
        }
        ApproxFn::EvalH => (0..n_points)
            .map(|i| {
                let v = (-1.0 + 2.0 * i as f64 / (n_points - 1) as f64).min(1.0);
                (happ.eval(v) - g_reference(mobius_inverse(v, happ.rho))).abs()
            })
            .fold(0.0, f64::max),
    };
    Ok(err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::method::{generator, Method};
    use crate::uniform::{UniformSource, UniformStream};

    #[test]
    fn constant_and_pair_moments() {
        let s = moments(&[1.0; 4]).unwrap();
        assert_eq!((s.mean, s.variance), (1.0, 0.0));
        let s = moments(&[-1.0, 1.0]).unwrap();
        assert_eq!((s.mean, s.variance), (0.0, 2.0));
        assert_eq!((s.min, s.max), (-1.0, 1.0));
        assert!(matches!(moments(&[1.0]), Err(StatError::TooFewSamples { .. })));
    }

    #[test]
    fn moments_match_two_pass() {
        let x: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1 + 1e6).collect();
        let s = moments(&x).unwrap();
        let n = x.len() as f64;
        let mean = x.iter().sum::<f64>() / n;
        let m2 = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        let m3 = x.iter().map(|v| (v - mean).powi(3)).sum::<f64>() / n;
        let m4 = x.iter().map(|v| (v - mean).powi(4)).sum::<f64>() / n;
        assert!((s.mean - mean).abs() < 1e-8);
        assert!((s.variance - m2 * n / (n - 1.0)).abs() < 1e-8);
        assert!((s.skewness - m3 / m2.powf(1.5)).abs() < 1e-8);
        assert!((s.excess_kurtosis - (m4 / (m2 * m2) - 3.0)).abs() < 1e-8);
    }

    #[test]
    fn normal_shape_moments() {
        let mut g = generator(Method::B1, NormalParams::standard(), 101);
        let n = 1_000_000;
        let mut x = vec![0.0; n];
        g.fill(&mut x);
        let s = moments(&x).unwrap();
        assert!(s.skewness.abs() < 4.0 * (6.0 / n as f64).sqrt(), "{}", s.skewness);
        assert!(
            s.excess_kurtosis.abs() < 4.0 * (24.0 / n as f64).sqrt(),
            "{}",
            s.excess_kurtosis
        );
    }

    #[test]
    fn ks_grid_and_point_mass() {
        let n = 1000;
        let grid: Vec<f64> = (0..n).map(|i| i as f64 / n as f64).collect();
        let r = ks_uniform(&grid).unwrap();
        assert!((r.statistic - 1.0 / n as f64).abs() < 1e-12);
        assert!(r.pass);
        let r = ks_uniform(&vec![0.5; n]).unwrap();
        assert!(!r.pass);
        assert!(matches!(ks_uniform(&[0.1; 10]), Err(StatError::TooFewSamples { .. })));
        let mut bad = grid.clone();
        bad[3] = 1.0;
        assert_eq!(ks_uniform(&bad), Err(StatError::OutOfRange(1.0)));
    }

    #[test]
    fn ks_stream_uniforms() {
        let mut s = UniformStream::new(2024);
        let mut u = vec![0.0; 1_000_000];
        s.fill_uniform(&mut u);
        let r = ks_uniform(&u).unwrap();
        assert!(r.pass, "{r:?}");
        assert!((r.critical_value_at_alpha - 1.6276 / 1000.0).abs() < 1e-6);
    }

    #[test]
    fn ad_detects_mislabelled_uniforms() {
        let mut s = UniformStream::new(1);
        let mut u = vec![0.0; 10_000];
        s.fill_uniform(&mut u);
        assert!(!ad_normal(&u, NormalParams::standard()).unwrap().pass);
    }

    #[test]
    fn ad_passes_b3_and_p2() {
        for m in [Method::B3, Method::P2] {
            let mut g = generator(m, NormalParams::standard(), 8);
            let mut x = vec![0.0; 1_000_000];
            g.fill(&mut x);
            let r = ad_normal(&x, NormalParams::standard()).unwrap();
            assert!(r.pass, "{m}: {r:?}");
        }
    }

    #[test]
    fn ad_small_exact_case() {
        // n = 100 quantile midpoints of N(0,1): F(x_i) = (i - 1/2)/n exactly,
        // so the statistic has a closed form computed independently

        let x: Vec<f64> = (0..100)
            .map(|i| {
                let p = (i as f64 + 0.5) / 100.0;
                -std::f64::consts::SQRT_2 * statrs::function::erf::erfc_inv(2.0 * p)
            })
            .collect();
        let r = ad_normal(&x, NormalParams::standard()).unwrap();
        assert!((r.statistic - 0.011495132744073544).abs() < 1e-9, "{}", r.statistic);
        assert!(r.pass);
        assert_eq!(
            ad_normal_at(&x, NormalParams::standard(), 0.2),
            Err(StatError::UnsupportedAlpha(0.2))
        );
        assert_eq!(
            ad_normal(&x, NormalParams::new(0.0, 0.0).unwrap()),
            Err(StatError::DegenerateScale)
        );
    }

    #[test]
    fn approximation_grids() {
        assert!(approx_error_grid(ApproxFn::SinCos16, 1_000_000).unwrap() < 1e-10);
        assert!(approx_error_grid(ApproxFn::GFast, 1_000_000).unwrap() < 1e-10);
        assert!(approx_error_grid(ApproxFn::EvalH, 1_000_000).unwrap() < 2e-11);
        assert!(approx_error_grid(ApproxFn::EvalH, 10).is_err());
    }
}
