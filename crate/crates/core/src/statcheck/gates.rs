//! Pass/fail gates over whole generators, used by `vecnormal selftest`.

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use super::{ad_normal, approx_error_grid, ks_uniform, moments, ApproxFn, GofResult};
use crate::fastfuncs::{fit_h_coeffs, HApprox};
use crate::method::{generator, Method, NormalParams};
use crate::polar::{polar_candidates, PolarCandidates};
use crate::ratio::{exact_accept, pretest, Pretest, Ratio};
use crate::uniform::{UniformSource, UniformStream};

/// Fixed seeds for the distribution gates.
pub const GATE_SEEDS: [u64; 3] = [0x5EED_0001, 0x5EED_0002, 0x5EED_0003];

/// Uniforms per Ratio-method deviate, as quoted for the acceptance gate.
pub const RATIO_COST_TARGET: f64 = 2.7406;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelftestConfig {
    /// Sample size of each statistical gate.
    pub n: usize,
    pub seeds: [u64; 3],
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            n: 1_000_000,
            seeds: GATE_SEEDS,
        }
    }
}

/// One line of the selftest table.
#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
    pub note: String,
}

impl fmt::Display for GateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<40} {:>13.6e} {:>13.6e}  {:<4}  {}",
            self.name,
            self.value,
            self.limit,
            if self.pass { "PASS" } else { "FAIL" },
            self.note
        )
    }
}

/// Moment and normality checks for one seed.
#[derive(Debug, Clone, PartialEq)]
pub struct GateRun {
    pub seed: u64,
    pub mean: f64,
    pub variance: f64,
    pub mean_ok: bool,
    pub var_ok: bool,
    pub ad: GofResult,
}

/// Outcome of the distribution gates over several seeds, with a gate passing
/// when at least two thirds of the seeds pass it.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionVerdict {
    pub method: Method,
    pub params: NormalParams,
    pub n: usize,
    pub runs: Vec<GateRun>,
}

impl DistributionVerdict {
    fn majority(&self, f: impl Fn(&GateRun) -> bool) -> (usize, bool) {
        let k = self.runs.iter().filter(|r| f(r)).count();
        (k, 3 * k >= 2 * self.runs.len())
    }

    /// `(seeds passing, gate passes)` for `|mean - mu| < 4 sigma / sqrt(n)`.
    pub fn mean_gate(&self) -> (usize, bool) {
        self.majority(|r| r.mean_ok)
    }

    /// `(seeds passing, gate passes)` for `|var - sigma²| < 4 sigma² sqrt(2/n)`.
    pub fn variance_gate(&self) -> (usize, bool) {
        self.majority(|r| r.var_ok)
    }

    /// `(seeds passing, gate passes)` for Anderson-Darling at alpha = 0.01.
    pub fn ad_gate(&self) -> (usize, bool) {
        self.majority(|r| r.ad.pass)
    }

    pub fn pass(&self) -> bool {
        self.mean_gate().1 && self.variance_gate().1 && self.ad_gate().1
    }
}

pub fn distribution_gates(method: Method, params: NormalParams, n: usize, seeds: &[u64]) -> DistributionVerdict {
    let (mu, sigma) = (params.mu(), params.sigma());
    let nf = n as f64;
    let mut buf = vec![0.0; n];
    let runs = seeds
        .iter()
        .map(|&seed| {
            generator(method, params, seed).fill(&mut buf);
            let stats = moments(&buf).expect("gate sample size is at least 2");
            let ad = ad_normal(&buf, params).expect("gate sample size is at least 100");
            GateRun {
                seed,
                mean: stats.mean,
                variance: stats.variance,
                mean_ok: (stats.mean - mu).abs() < 4.0 * sigma / nf.sqrt(),
                var_ok: (stats.variance - sigma * sigma).abs() < 4.0 * sigma * sigma * (2.0 / nf).sqrt(),
                ad,
            }
        })
        .collect();
    DistributionVerdict {
        method,
        params,
        n,
        runs,
    }
}

fn report(name: impl Into<String>, value: f64, limit: f64, pass: bool, note: impl Into<String>) -> GateReport {
    GateReport {
        name: name.into(),
        value,
        limit,
        pass,
        note: note.into(),
    }
}

fn ks_report(name: &str, samples: &[f64]) -> GateReport {
    match ks_uniform(samples) {
        Ok(r) => report(name, r.statistic, r.critical_value_at_alpha, r.pass, "KS, alpha = 0.01"),
        Err(e) => report(name, f64::NAN, f64::NAN, false, e.to_string()),
    }
}

/// Runs every gate and returns one report per gate, in a fixed order.
pub fn selftest(config: &SelftestConfig) -> Vec<GateReport> {
    let n = config.n.max(super::MIN_GOF_SAMPLES);
    let grid = n.max(super::MIN_GRID_POINTS);
    let mut out = Vec::new();

    // approximation accuracy
    let e = approx_error_grid(ApproxFn::SinCos16, grid).unwrap_or(f64::NAN);
    out.push(report(
        "sincos16 max abs error",
        e,
        1e-10,
        e < 1e-10,
        format!("{grid} points"),
    ));
    match fit_h_coeffs(1.0, 15) {
        Ok(h) => out.push(report(
            "h(v) certified error (rho=1, deg 15)",
            h.certified_error,
            2e-11,
            h.certified_error < 2e-11,
            "refit",
        )),
        Err(e) => out.push(report(
            "h(v) certified error (rho=1, deg 15)",
            f64::NAN,
            2e-11,
            false,
            e.to_string(),
        )),
    }
    let e = approx_error_grid(ApproxFn::GFast, grid).unwrap_or(f64::NAN);
    out.push(report(
        "g_fast max abs error",
        e,
        1e-10,
        e <= 1e-10,
        format!("{grid} points"),
    ));
    let e = composite_identity_error(grid);
    out.push(report(
        "sqrt(u) h(v(u)) vs sqrt(-ln(1-u))",
        e,
        1e-10,
        e < 1e-10,
        format!("{grid} points"),
    ));

    // rejection and uniformity properties
    let mut stream = UniformStream::new(config.seeds[0]);
    let mut cand = PolarCandidates::default();
    let k = polar_candidates(&mut stream, n, &mut cand);
    let frac = k as f64 / n as f64;
    let tol = 4.0 * (FRAC_PI_4 * (1.0 - FRAC_PI_4) / n as f64).sqrt();
    out.push(report(
        "polar acceptance - pi/4",
        (frac - FRAC_PI_4).abs(),
        tol,
        (frac - FRAC_PI_4).abs() < tol,
        format!("{k}/{n} accepted"),
    ));
    out.push(ks_report("polar accepted s uniform", &cand.s[..k]));

    let mut u = vec![0.0; 2 * n];
    stream.fill_uniform(&mut u);
    let max_sq: Vec<f64> = u.chunks_exact(2).map(|p| p[0].max(p[1]).powi(2)).collect();
    out.push(ks_report("max(u1,u2)^2 uniform", &max_sq));
    out.push(ks_report("uniform stream", &u[..n]));

    let mut ratio = Ratio::new(NormalParams::standard(), config.seeds[0]);
    let mut dev = vec![0.0; n];
    ratio.fill(&mut dev);
    let per = ratio.stream().draws() as f64 / n as f64;
    let rel = (per / RATIO_COST_TARGET - 1.0).abs();
    out.push(report(
        "r1 uniforms per deviate",
        per,
        RATIO_COST_TARGET,
        rel < 0.02,
        "within 2%",
    ));
    let c = ratio.counters();
    let log_frac = c.exact_tests as f64 / c.candidates as f64;
    out.push(report(
        "r1 log-evaluation fraction",
        log_frac,
        0.05,
        log_frac < 0.05,
        "",
    ));

    let violations = pretest_violations(config.seeds[1], n);
    out.push(report(
        "r1 pretest contradictions",
        violations as f64,
        0.0,
        violations == 0,
        format!("{n} candidates"),
    ));
    let mut plain = Ratio::new(NormalParams::standard(), config.seeds[0]);
    plain.set_pretests(false);
    let mut dev2 = vec![0.0; n];
    plain.fill(&mut dev2);
    let same = dev == dev2;
    out.push(report(
        "r1 output without pretests identical",
        if same { 0.0 } else { 1.0 },
        0.0,
        same,
        "",
    ));

    for (method, expect) in [(Method::B1, 1.0), (Method::B2, 1.0), (Method::B3, 1.5)] {
        let mut g = generator(method, NormalParams::standard(), config.seeds[0]);
        g.fill(&mut dev);
        let per = g.uniforms_drawn() as f64 / n as f64;
        out.push(report(
            format!("{method} uniforms per deviate"),
            per,
            expect,
            per == expect,
            "exact",
        ));
    }
    let mut g = generator(Method::P2, NormalParams::standard(), config.seeds[0]);
    g.fill(&mut dev);
    let per = g.uniforms_drawn() as f64 / n as f64;
    let expect = 1.0 / FRAC_PI_4;
    out.push(report(
        "P2 uniforms per deviate",
        per,
        expect,
        (per / expect - 1.0).abs() < 0.01,
        "4/pi within 1%",
    ));

    // distributions
    for method in Method::ALL {
        for (mu, sigma) in [(0.0, 1.0), (3.0, 2.0)] {
            let params = NormalParams::new(mu, sigma).expect("fixed gate parameters are valid");
            let v = distribution_gates(method, params, n, &config.seeds);
            let label = format!("{method} N({mu},{sigma}^2)");
            let runs = v.runs.len();
            let worst_mean = v.runs.iter().map(|r| (r.mean - mu).abs()).fold(0.0, f64::max);
            let (k, ok) = v.mean_gate();
            out.push(report(
                format!("{label} mean"),
                worst_mean,
                4.0 * sigma / (n as f64).sqrt(),
                ok,
                format!("{k}/{runs} seeds"),
            ));
            let worst_var = v
                .runs
                .iter()
                .map(|r| (r.variance - sigma * sigma).abs())
                .fold(0.0, f64::max);
            let (k, ok) = v.variance_gate();
            out.push(report(
                format!("{label} variance"),
                worst_var,
                4.0 * sigma * sigma * (2.0 / n as f64).sqrt(),
                ok,
                format!("{k}/{runs} seeds"),
            ));
            let worst_ad = v.runs.iter().map(|r| r.ad.statistic).fold(0.0, f64::max);
            let (k, ok) = v.ad_gate();
            out.push(report(
                format!("{label} Anderson-Darling"),
                worst_ad,
                v.runs[0].ad.critical_value_at_alpha,
                ok,
                format!("{k}/{runs} seeds"),
            ));
        }
    }
    out
}

/// Max of `|sqrt(u) h(v(u)) - sqrt(-ln(1 - u))|` over `points + 1` grid points on `[0, tau]`.
pub fn composite_identity_error(points: usize) -> f64 {
    let h = HApprox::standard();
    (0..=points)
        .map(|i| {
            let u = h.tau * i as f64 / points as f64;
            (u.sqrt() * h.eval(h.mobius(u)) - (-(1.0 - u).ln()).sqrt()).abs()
        })
        .fold(0.0, f64::max)
}

/// Pretest classifications contradicted by the exact test over `n` random candidates.
pub fn pretest_violations(seed: u64, n: usize) -> usize {
    let mut s = UniformStream::new(seed);
    let mut uv = vec![0.0; 2 * n];
    s.fill_uniform(&mut uv);
    let u: Vec<f64> = uv.iter().step_by(2).copied().collect();
    let v: Vec<f64> = uv.iter().skip(1).step_by(2).copied().collect();
    let mut class = vec![Pretest::Borderline; n];
    pretest(&u, &v, &mut class);
    (0..n)
        .filter(|&i| match class[i] {
            Pretest::Accept => !exact_accept(u[i], v[i]),
            Pretest::Reject => exact_accept(u[i], v[i]),
            Pretest::Borderline => false,
        })
        .count()
}
