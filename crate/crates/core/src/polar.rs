//! Polar-method generators.
//!
//! Candidates `(x, y)` uniform on `[-1, 1)^2` are proposed in batches, the
//! ones with `s = x^2 + y^2 >= 1` are compressed out, and each survivor yields
//! two deviates.
//!
//! * P1: `r = sigma sqrt(-2 ln(s) / s)`, deviates `r x + mu`, `r y + mu`.
//! * P2: `1 - s` is uniform and independent of the angle, so the radius can be
//!   `sigma g(s) = sigma sqrt(-ln(1 - s) / s)` instead, evaluated with the
//!   `h(v)` polynomial for `s <= tau` and library routines above. Deviates are
//!   `x r sqrt(2) + mu`, `y r sqrt(2) + mu`.
//!
//! Surplus deviates from a round are held in a [`RejectionBuffer`], so the
//! output sequence does not depend on how a caller partitions its fills.

use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::marker::PhantomData;

use crate::buffer::{fill_exact, RejectionBuffer, RejectionRound};
use crate::fastfuncs::HApprox;
use crate::kernel::{MathKernel, StdMath};
use crate::method::{Method, NormalGenerator, NormalParams};
use crate::uniform::{UniformSource, UniformStream};

/// Candidate pairs proposed per requested pair are `(4/pi)` times this margin.
pub const OVERSAMPLE_MARGIN: f64 = 1.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolarVariant {
    P1,
    P2,
}

/// Accepted candidates of a round, compacted to the front.
#[derive(Debug, Clone, Default)]
pub struct PolarCandidates {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub s: Vec<f64>,
    raw: Vec<f64>,
}

/// Proposes `m` candidate pairs (2m signed uniforms, interleaved `x, y`) and
/// compresses the accepted ones (`s < 1`) to the front of `cand`. Returns the
/// accepted count `k`; `cand.{x,y,s}[..k]` hold them in proposal order.
pub fn polar_candidates<S: UniformSource>(stream: &mut S, m: usize, cand: &mut PolarCandidates) -> usize {
    cand.raw.resize(2 * m, 0.0);
    stream.fill_uniform_signed(&mut cand.raw);
    cand.x.resize(m, 0.0);
    cand.y.resize(m, 0.0);
    cand.s.resize(m, 0.0);
    let mut k = 0;
    for xy in cand.raw.chunks_exact(2) {
        let (x, y) = (xy[0], xy[1]);
        let s = x * x + y * y;
        // branch-free compress: always write, advance only on accept
        cand.x[k] = x;
        cand.y[k] = y;
        cand.s[k] = s;
        k += (s < 1.0) as usize;
    }
    k
}

struct PolarCore<S, K> {
    stream: S,
    params: NormalParams,
    variant: PolarVariant,
    happ: HApprox,
    cand: PolarCandidates,
    radius: Vec<f64>,
    tail: Vec<usize>,
    accepted_total: u64,
    proposed_total: u64,
    _kernel: PhantomData<K>,
}

impl<S: UniformSource, K: MathKernel> PolarCore<S, K> {
    fn radii_p1(&mut self, k: usize) {
        let sigma = self.params.sigma();
        for (r, &s) in self.radius[..k].iter_mut().zip(&self.cand.s[..k]) {
            // s = 0 means x = y = 0; any finite radius gives (mu, mu)
            *r = if s == 0.0 {
                0.0
            } else {
                sigma * K::sqrt(-2.0 * K::ln(s) / s)
            };
        }
    }

    fn radii_p2(&mut self, k: usize) {
        let sigma = self.params.sigma();
        let tau = self.happ.tau;
        self.tail.clear();
        for (j, (r, &s)) in self.radius[..k].iter_mut().zip(&self.cand.s[..k]).enumerate() {
            *r = sigma * K::h(&self.happ, self.happ.mobius(s));
            if s > tau {
                self.tail.push(j);
            }
        }
        for &j in &self.tail {
            let s = self.cand.s[j];
            self.radius[j] = sigma * K::sqrt(-K::ln(1.0 - s) / s);
        }
    }
}

impl<S: UniformSource, K: MathKernel> RejectionRound for PolarCore<S, K> {
    fn candidates_for(&self, need: usize) -> usize {
        let pairs = need.div_ceil(2) as f64;
        (pairs / FRAC_PI_4 * OVERSAMPLE_MARGIN).ceil().max(1.0) as usize
    }

    fn round(&mut self, candidates: usize, out: &mut Vec<f64>) {
        let k = polar_candidates(&mut self.stream, candidates, &mut self.cand);
        self.proposed_total += candidates as u64;
        self.accepted_total += k as u64;
        self.radius.resize(k.max(self.radius.len()), 0.0);
        let mu = self.params.mu();
        match self.variant {
            PolarVariant::P1 => {
                self.radii_p1(k);
                for j in 0..k {
                    let r = self.radius[j];
                    out.push(r * self.cand.x[j] + mu);
                    out.push(r * self.cand.y[j] + mu);
                }
            }
            PolarVariant::P2 => {
                self.radii_p2(k);
                for j in 0..k {
                    let r = self.radius[j] * SQRT_2;
                    out.push(self.cand.x[j] * r + mu);
                    out.push(self.cand.y[j] * r + mu);
                }
            }
        }
    }
}

pub struct Polar<S = UniformStream, K = StdMath> {
    core: PolarCore<S, K>,
    buffer: RejectionBuffer,
}

impl Polar {
    pub fn new(variant: PolarVariant, params: NormalParams, seed: u64) -> Self {
        Self::with_kernel(variant, params, UniformStream::new(seed))
    }
}

impl<S: UniformSource> Polar<S, StdMath> {
    pub fn with_source(variant: PolarVariant, params: NormalParams, stream: S) -> Self {
        Self::with_kernel(variant, params, stream)
    }
}

impl<S: UniformSource, K: MathKernel> Polar<S, K> {
    pub fn with_kernel(variant: PolarVariant, params: NormalParams, stream: S) -> Self {
        Polar {
            core: PolarCore {
                stream,
                params,
                variant,
                happ: HApprox::standard().clone(),
                cand: PolarCandidates::default(),
                radius: Vec::new(),
                tail: Vec::new(),
                accepted_total: 0,
                proposed_total: 0,
                _kernel: PhantomData,
            },
            buffer: RejectionBuffer::default(),
        }
    }

    pub fn variant(&self) -> PolarVariant {
        self.core.variant
    }

    pub fn stream(&self) -> &S {
        &self.core.stream
    }

    pub fn buffer(&self) -> &RejectionBuffer {
        &self.buffer
    }

    /// `(accepted, proposed)` candidate pairs so far.
    pub fn acceptance_counts(&self) -> (u64, u64) {
        (self.core.accepted_total, self.core.proposed_total)
    }

    /// Writes exactly `out.len()` deviates, buffering any surplus.
    pub fn fill(&mut self, out: &mut [f64]) {
        fill_exact(&mut self.core, &mut self.buffer, out)
    }
}

impl<S: UniformSource, K: MathKernel> NormalGenerator for Polar<S, K> {
    fn fill(&mut self, out: &mut [f64]) {
        Polar::fill(self, out)
    }

    fn uniforms_drawn(&self) -> u64 {
        self.core.stream.draws()
    }

    fn method(&self) -> Method {
        match self.core.variant {
            PolarVariant::P1 => Method::P1,
            PolarVariant::P2 => Method::P2,
        }
    }
}
