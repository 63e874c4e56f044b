//! Box-Muller generators.
//!
//! * B1: `r = sigma sqrt(-2 ln(1 - u))`, deviates `r sin(2 pi v - pi) + mu`
//!   and `r cos(2 pi v - pi) + mu`.
//! * B2: as B1 with the polynomial sin/cos kernel.
//! * B3: three uniforms per pair. `m = max(u1, u2)` and `u = m^2` is again
//!   uniform, so `sqrt(u)` costs nothing. For `u <= tau` the radius is
//!   `sigma m h(v(u))`, otherwise `sigma sqrt(-ln(1 - u))` through the library
//!   routines on a gathered tail list. Deviates are `mu + c r sqrt(2)` and
//!   `mu + s r sqrt(2)`.

use std::f64::consts::{PI, SQRT_2, TAU};
use std::marker::PhantomData;

use crate::fastfuncs::{HApprox, SinCos16Coeffs};
use crate::kernel::{MathKernel, StdMath};
use crate::method::{Method, NormalGenerator, NormalParams, BLOCK};
use crate::uniform::{UniformSource, UniformStream};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoxMullerVariant {
    B1,
    B2,
    B3,
}

impl BoxMullerVariant {
    /// Uniforms consumed per pair of deviates.
    pub fn uniforms_per_pair(self) -> usize {
        match self {
            BoxMullerVariant::B1 | BoxMullerVariant::B2 => 2,
            BoxMullerVariant::B3 => 3,
        }
    }
}

pub struct BoxMuller<S = UniformStream, K = StdMath> {
    stream: S,
    params: NormalParams,
    variant: BoxMullerVariant,
    sincos: SinCos16Coeffs,
    happ: HApprox,
    // second deviate of the last pair when an odd count was requested
    spare: Option<f64>,
    uniforms: Vec<f64>,
    pairs: Vec<f64>,
    radius: Vec<f64>,
    tail: Vec<usize>,
    tail_values: Vec<f64>,
    _kernel: PhantomData<K>,
}

impl BoxMuller {
    pub fn new(variant: BoxMullerVariant, params: NormalParams, seed: u64) -> Self {
        Self::with_kernel(variant, params, UniformStream::new(seed))
    }
}

impl<S: UniformSource> BoxMuller<S, StdMath> {
    pub fn with_source(variant: BoxMullerVariant, params: NormalParams, stream: S) -> Self {
        Self::with_kernel(variant, params, stream)
    }
}

impl<S: UniformSource, K: MathKernel> BoxMuller<S, K> {
    pub fn with_kernel(variant: BoxMullerVariant, params: NormalParams, stream: S) -> Self {
        BoxMuller {
            stream,
            params,
            variant,
            sincos: SinCos16Coeffs::default(),
            happ: HApprox::standard().clone(),
            spare: None,
            uniforms: Vec::with_capacity(3 * BLOCK / 2),
            pairs: Vec::with_capacity(BLOCK),
            radius: Vec::with_capacity(BLOCK / 2),
            tail: Vec::new(),
            tail_values: Vec::new(),
            _kernel: PhantomData,
        }
    }

    /// Replaces the `h(v)` approximation used by B3.
    pub fn set_h_approx(&mut self, happ: HApprox) {
        self.happ = happ;
    }

    pub fn variant(&self) -> BoxMullerVariant {
        self.variant
    }

    pub fn params(&self) -> NormalParams {
        self.params
    }

    pub fn stream(&self) -> &S {
        &self.stream
    }

    /// Writes `out.len()` deviates, starting with any spare left by the previous call.
    pub fn fill(&mut self, out: &mut [f64]) {
        let mut rest = out;
        if rest.is_empty() {
            return;
        }
        if let Some(spare) = self.spare.take() {
            rest[0] = spare;
            rest = &mut rest[1..];
        }
        while !rest.is_empty() {
            let pairs = rest.len().div_ceil(2).min(BLOCK / 2);
            self.produce_pairs(pairs);
            let take = rest.len().min(2 * pairs);
            rest[..take].copy_from_slice(&self.pairs[..take]);
            if take < 2 * pairs {
                self.spare = Some(self.pairs[take]);
            }
            rest = &mut rest[take..];
        }
    }

    fn produce_pairs(&mut self, pairs: usize) {
        let per_pair = self.variant.uniforms_per_pair();
        self.uniforms.resize(per_pair * pairs, 0.0);
        self.stream.fill_uniform(&mut self.uniforms);
        self.pairs.resize(2 * pairs, 0.0);
        match self.variant {
            BoxMullerVariant::B1 => self.pairs_b1(),
            BoxMullerVariant::B2 => self.pairs_b2(),
            BoxMullerVariant::B3 => self.pairs_b3(),
        }
    }

    fn pairs_b1(&mut self) {
        let (mu, sigma) = (self.params.mu(), self.params.sigma());
        for (uv, out) in self.uniforms.chunks_exact(2).zip(self.pairs.chunks_exact_mut(2)) {
            let r = sigma * K::sqrt(-2.0 * K::ln(1.0 - uv[0]));
            let (s, c) = K::sin_cos(TAU * uv[1] - PI);
            out[0] = r * s + mu;
            out[1] = r * c + mu;
        }
    }

    fn pairs_b2(&mut self) {
        let (mu, sigma) = (self.params.mu(), self.params.sigma());
        for (uv, out) in self.uniforms.chunks_exact(2).zip(self.pairs.chunks_exact_mut(2)) {
            let r = sigma * K::sqrt(-2.0 * K::ln(1.0 - uv[0]));
            let (s, c) = K::sincos16(&self.sincos, uv[1]);
            out[0] = r * s + mu;
            out[1] = r * c + mu;
        }
    }

    fn pairs_b3(&mut self) {
        let (mu, sigma) = (self.params.mu(), self.params.sigma());
        let tau = self.happ.tau;
        let pairs = self.pairs.len() / 2;
        self.radius.resize(pairs, 0.0);
        self.tail.clear();

        for (i, (u, r)) in self.uniforms.chunks_exact(3).zip(self.radius.iter_mut()).enumerate() {
            let m = u[0].max(u[1]);
            let uu = m * m;
            *r = sigma * m * K::h(&self.happ, self.happ.mobius(uu));
            if uu > tau {
                self.tail.push(i);
            }
        }

        // gather, evaluate with library routines, scatter
        self.tail_values.clear();
        self.tail_values.extend(self.tail.iter().map(|&i| {
            let m = self.uniforms[3 * i].max(self.uniforms[3 * i + 1]);
            m * m
        }));
        for u in self.tail_values.iter_mut() {
            *u = sigma * K::sqrt(-K::ln(1.0 - *u));
        }
        for (&i, &r) in self.tail.iter().zip(&self.tail_values) {
            self.radius[i] = r;
        }

        for ((u, r), out) in self
            .uniforms
            .chunks_exact(3)
            .zip(&self.radius)
            .zip(self.pairs.chunks_exact_mut(2))
        {
            let (s, c) = K::sincos16(&self.sincos, u[2]);
            let scaled = r * SQRT_2;
            out[0] = mu + c * scaled;
            out[1] = mu + s * scaled;
        }
    }
}

impl<S: UniformSource, K: MathKernel> NormalGenerator for BoxMuller<S, K> {
    fn fill(&mut self, out: &mut [f64]) {
        BoxMuller::fill(self, out)
    }

    fn uniforms_drawn(&self) -> u64 {
        self.stream.draws()
    }

    fn method(&self) -> Method {
        match self.variant {
            BoxMullerVariant::B1 => Method::B1,
            BoxMullerVariant::B2 => Method::B2,
            BoxMullerVariant::B3 => Method::B3,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uniform::ReplayUniforms;
    use proptest::prelude::*;

    const ALL: [BoxMullerVariant; 3] = [BoxMullerVariant::B1, BoxMullerVariant::B2, BoxMullerVariant::B3];

    fn stub(variant: BoxMullerVariant, values: Vec<f64>) -> BoxMuller<ReplayUniforms> {
        BoxMuller::with_source(variant, NormalParams::standard(), ReplayUniforms::new(values))
    }

    fn draw(variant: BoxMullerVariant, params: NormalParams, seed: u64, n: usize) -> Vec<f64> {
        let mut g = BoxMuller::new(variant, params, seed);
        let mut out = vec![0.0; n];
        g.fill(&mut out);
        out
    }

    #[test]
    fn b1_hand_evaluated_pair() {
        let u = 1.0 - (-2.0f64).exp();
        let mut g = stub(BoxMullerVariant::B1, vec![u, 0.75]);
        let mut out = [0.0; 2];
        g.fill(&mut out);
        assert!((out[0] - 2.0).abs() < 1e-12, "{out:?}");
        assert!(out[1].abs() < 1e-12);
    }

    #[test]
    fn b2_matches_b1_on_same_inputs() {
        let u = 1.0 - (-2.0f64).exp();
        let mut b1 = stub(BoxMullerVariant::B1, vec![u, 0.75, 0.3, 0.1, 0.99, 0.6]);
        let mut b2 = stub(BoxMullerVariant::B2, vec![u, 0.75, 0.3, 0.1, 0.99, 0.6]);
        let mut x = [0.0; 6];
        let mut y = [0.0; 6];
        b1.fill(&mut x);
        b2.fill(&mut y);
        for (a, b) in x.iter().zip(&y) {
            assert!((a - b).abs() < 4e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn b3_zero_radius() {
        let mut g = stub(BoxMullerVariant::B3, vec![0.0, 0.0, 0.75]);
        let mut out = [1.0; 2];
        g.fill(&mut out);
        assert_eq!(out, [0.0, 0.0]);
    }

    #[test]
    fn b3_agrees_with_b1() {
        // u = 1 - e^-2 sits below tau, so this exercises the h(v) path
        let u = 1.0 - (-2.0f64).exp();
        assert!(u < 8.0 / 9.0);
        let m = u.sqrt();
        let mut g = stub(BoxMullerVariant::B3, vec![m, m, 0.75]);
        let mut out = [0.0; 2];
        g.fill(&mut out);
        assert!((out[1] - 2.0).abs() < 1e-9, "{out:?}");
        assert!(out[0].abs() < 1e-9);

        // u = 1 - e^-3 takes the library tail: r sqrt(2) = sqrt(6)
        let u = 1.0 - (-3.0f64).exp();
        assert!(u > 8.0 / 9.0);
        let m = u.sqrt();
        let mut g = stub(BoxMullerVariant::B3, vec![m, m, 0.75]);
        g.fill(&mut out);
        assert!((out[1] - 6f64.sqrt()).abs() < 1e-9, "{out:?}");

        // bulk path against B1 on the same logical (u, angle)
        let m: f64 = 0.8;
        let mut b3 = stub(BoxMullerVariant::B3, vec![0.3, m, 0.6]);
        let mut b1 = stub(BoxMullerVariant::B1, vec![m * m, 0.6]);
        let (mut x, mut y) = ([0.0; 2], [0.0; 2]);
        b3.fill(&mut x);
        b1.fill(&mut y);
        // B3 emits (cos, sin), B1 emits (sin, cos)
        assert!((x[0] - y[1]).abs() < 1e-9);
        assert!((x[1] - y[0]).abs() < 1e-9);
    }

    #[test]
    fn zero_sigma_gives_mean() {
        let params = NormalParams::new(2.5, 0.0).unwrap();
        for v in ALL {
            assert!(draw(v, params, 4, 1001).iter().all(|&x| x == 2.5), "{v:?}");
        }
    }

    #[test]
    fn b1_mean_million() {
        let params = NormalParams::new(3.0, 2.0).unwrap();
        let out = draw(BoxMullerVariant::B1, params, 17, 1_000_000);
        let mean = out.iter().sum::<f64>() / out.len() as f64;
        assert!((mean - 3.0).abs() < 4.0 * 2.0 / 1e3, "{mean}");
    }

    #[test]
    fn b3_variance_million() {
        let out = draw(BoxMullerVariant::B3, NormalParams::standard(), 23, 1_000_000);
        let n = out.len() as f64;
        let mean = out.iter().sum::<f64>() / n;
        let var = out.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        assert!((var - 1.0).abs() < 4.0 * (2.0 / n).sqrt(), "{var}");
    }

    #[test]
    fn uniform_consumption_is_exact() {
        for (v, per_dev) in [
            (BoxMullerVariant::B1, 1.0),
            (BoxMullerVariant::B2, 1.0),
            (BoxMullerVariant::B3, 1.5),
        ] {
            let mut g = BoxMuller::new(v, NormalParams::standard(), 1);
            let mut out = vec![0.0; 100_000];
            g.fill(&mut out);
            assert_eq!(g.stream().draws() as f64, per_dev * 100_000.0, "{v:?}");
        }
    }

    #[test]
    fn odd_counts_use_the_spare() {
        for v in ALL {
            let whole = draw(v, NormalParams::standard(), 8, 9);
            let mut g = BoxMuller::new(v, NormalParams::standard(), 8);
            let mut parts = Vec::new();
            for len in [3, 1, 5] {
                let mut buf = vec![0.0; len];
                g.fill(&mut buf);
                parts.extend(buf);
            }
            assert_eq!(parts, whole, "{v:?}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn partition_invariance(seed in any::<u64>(), cuts in prop::collection::vec(0usize..5000, 1..6)) {
            for v in ALL {
                let total: usize = cuts.iter().sum();
                let whole = draw(v, NormalParams::standard(), seed, total);
                let mut g = BoxMuller::new(v, NormalParams::standard(), seed);
                let mut parts = Vec::with_capacity(total);
                for &len in &cuts {
                    let mut buf = vec![0.0; len];
                    g.fill(&mut buf);
                    parts.extend(buf);
                }
                prop_assert_eq!(parts, whole);
            }
        }
    }
}
