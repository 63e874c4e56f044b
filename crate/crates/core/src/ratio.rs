//! Ratio-of-uniforms generator with quick accept/reject pretests.
//!
//! A candidate `(u, v)` maps to `U = 1 - u` in `(0, 1]`,
//! `V = sqrt(8/e) (v - 1/2)` and `x = V / U`. It is accepted when
//! `x^2 <= -4 ln(U)`. Before paying for the logarithm, each candidate is
//! classified against an inner region (sure accept) and an outer region (sure
//! reject); only the borderline remainder is gathered for the exact test.
//!
//! The bounding regions are Leva's quadratic forms around the acceptance
//! curve, together with the elementary bound `-ln U >= 1 - U`, which is
//! tight near `U = 1` where the quadratic forms leave a gap.

use std::f64::consts::E;
use std::marker::PhantomData;

use crate::buffer::{fill_exact, RejectionBuffer, RejectionRound};
use crate::kernel::{MathKernel, StdMath};
use crate::method::{Method, NormalGenerator, NormalParams};
use crate::uniform::{UniformSource, UniformStream};

/// `sqrt(8/e)`, width of the `V` range.
pub fn v_scale() -> f64 {
    (8.0 / E).sqrt()
}

/// Probability that a candidate is accepted, `sqrt(pi e) / 4`.
pub fn acceptance_probability() -> f64 {
    (std::f64::consts::PI * E).sqrt() / 4.0
}

/// Extra candidates proposed per requested deviate, on top of `1 / acceptance`.
pub const OVERSAMPLE_MARGIN: f64 = 1.05;

/// Coefficients of the quadratic pretests
/// `Q = (U - s)^2 + (|V| - t) (a (|V| - t) - b (U - s))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PretestConstants {
    pub s: f64,
    pub t: f64,
    pub a: f64,
    pub b: f64,
    /// `Q < inner` lies inside the acceptance region.
    pub inner: f64,
    /// `Q > outer` lies outside it.
    pub outer: f64,
}

/// Leva (1992).
pub const LEVA: PretestConstants = PretestConstants {
    s: 0.449871,
    t: -0.386595,
    a: 0.19600,
    b: 0.25472,
    inner: 0.27597,
    outer: 0.27846,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pretest {
    Accept,
    Reject,
    Borderline,
}

impl PretestConstants {
    /// Classifies a candidate given `U = 1 - u` and `V`.
    #[inline]
    pub fn classify(&self, big_u: f64, big_v: f64) -> Pretest {
        let x = big_u - self.s;
        let y = big_v.abs() - self.t;
        let q = x * x + y * (self.a * y - self.b * x);
        let v2 = big_v * big_v;
        if q < self.inner || v2 <= 4.0 * big_u * big_u * (1.0 - big_u) {
            Pretest::Accept
        } else if q > self.outer {
            Pretest::Reject
        } else {
            Pretest::Borderline
        }
    }
}

/// Exact acceptance test on raw uniforms: `x^2 <= -4 ln(1 - u)`.
pub fn exact_accept(u: f64, v: f64) -> bool {
    let big_u = 1.0 - u;
    let x = v_scale() * (v - 0.5) / big_u;
    x * x <= -4.0 * big_u.ln()
}

/// Batch pretest on raw uniforms `u, v` in `[0, 1)`.
pub fn pretest(u: &[f64], v: &[f64], out: &mut [Pretest]) {
    assert!(u.len() == v.len() && out.len() >= u.len());
    let scale = v_scale();
    for ((c, &ui), &vi) in out.iter_mut().zip(u).zip(v) {
        *c = LEVA.classify(1.0 - ui, scale * (vi - 0.5));
    }
}

/// Per-round bookkeeping, cumulative.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RatioCounters {
    pub candidates: u64,
    pub quick_accepts: u64,
    pub quick_rejects: u64,
    /// Candidates that went through the logarithm.
    pub exact_tests: u64,
    pub accepted: u64,
}

struct RatioCore<S, K> {
    stream: S,
    params: NormalParams,
    pretests: bool,
    uniforms: Vec<f64>,
    x: Vec<f64>,
    big_u: Vec<f64>,
    keep: Vec<bool>,
    borderline: Vec<usize>,
    counters: RatioCounters,
    _kernel: PhantomData<K>,
}

impl<S: UniformSource, K: MathKernel> RejectionRound for RatioCore<S, K> {
    fn candidates_for(&self, need: usize) -> usize {
        (need as f64 / acceptance_probability() * OVERSAMPLE_MARGIN)
            .ceil()
            .max(1.0) as usize
    }

    fn round(&mut self, candidates: usize, out: &mut Vec<f64>) {
        let scale = v_scale();
        self.uniforms.resize(2 * candidates, 0.0);
        self.stream.fill_uniform(&mut self.uniforms);
        self.x.resize(candidates, 0.0);
        self.big_u.resize(candidates, 0.0);
        self.keep.resize(candidates, false);
        self.borderline.clear();

        for (j, uv) in self.uniforms.chunks_exact(2).enumerate() {
            let big_u = 1.0 - uv[0];
            let big_v = scale * (uv[1] - 0.5);
            self.x[j] = big_v / big_u;
            self.big_u[j] = big_u;
            let class = if self.pretests {
                LEVA.classify(big_u, big_v)
            } else {
                Pretest::Borderline
            };
            self.keep[j] = class == Pretest::Accept;
            match class {
                Pretest::Accept => self.counters.quick_accepts += 1,
                Pretest::Reject => self.counters.quick_rejects += 1,
                Pretest::Borderline => self.borderline.push(j),
            }
        }

        // exact test on the gathered borderline set
        for &j in &self.borderline {
            let x = self.x[j];
            self.keep[j] = x * x <= -4.0 * K::ln(self.big_u[j]);
        }
        self.counters.candidates += candidates as u64;
        self.counters.exact_tests += self.borderline.len() as u64;

        let (mu, sigma) = (self.params.mu(), self.params.sigma());
        let before = out.len();
        out.extend(
            self.x
                .iter()
                .zip(&self.keep)
                .filter(|(_, &k)| k)
                .map(|(&x, _)| sigma * x + mu),
        );
        self.counters.accepted += (out.len() - before) as u64;
    }
}

pub struct Ratio<S = UniformStream, K = StdMath> {
    core: RatioCore<S, K>,
    buffer: RejectionBuffer,
}

impl Ratio {
    pub fn new(params: NormalParams, seed: u64) -> Self {
        Self::with_kernel(params, UniformStream::new(seed))
    }
}

impl<S: UniformSource> Ratio<S, StdMath> {
    pub fn with_source(params: NormalParams, stream: S) -> Self {
        Self::with_kernel(params, stream)
    }
}

impl<S: UniformSource, K: MathKernel> Ratio<S, K> {
    pub fn with_kernel(params: NormalParams, stream: S) -> Self {
        Ratio {
            core: RatioCore {
                stream,
                params,
                pretests: true,
                uniforms: Vec::new(),
                x: Vec::new(),
                big_u: Vec::new(),
                keep: Vec::new(),
                borderline: Vec::new(),
                counters: RatioCounters::default(),
                _kernel: PhantomData,
            },
            buffer: RejectionBuffer::default(),
        }
    }

    /// With pretests off every candidate takes the exact test. The output is
    /// identical either way.
    pub fn set_pretests(&mut self, enabled: bool) {
        self.core.pretests = enabled;
    }

    pub fn counters(&self) -> RatioCounters {
        self.core.counters
    }

    pub fn stream(&self) -> &S {
        &self.core.stream
    }

    pub fn fill(&mut self, out: &mut [f64]) {
        fill_exact(&mut self.core, &mut self.buffer, out)
    }
}

impl<S: UniformSource, K: MathKernel> NormalGenerator for Ratio<S, K> {
    fn fill(&mut self, out: &mut [f64]) {
        Ratio::fill(self, out)
    }

    fn uniforms_drawn(&self) -> u64 {
        self.core.stream.draws()
    }

    fn method(&self) -> Method {
        Method::R1
    }
}
