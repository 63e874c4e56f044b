use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::boxmuller::{BoxMuller, BoxMullerVariant};
use crate::kernel::{MathKernel, StdMath};
use crate::polar::{Polar, PolarVariant};
use crate::ratio::Ratio;
use crate::uniform::{UniformSource, UniformStream};

/// Deviates produced per internal batch.
pub const BLOCK: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("standard deviation must be finite and non-negative, got {0}")]
    InvalidSigma(f64),
    #[error("mean must be finite, got {0}")]
    InvalidMu(f64),
    #[error("unknown method {0:?} (expected one of b1, b2, b3, p1, p2, r1)")]
    UnknownMethod(String),
}

/// Target mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalParams {
    mu: f64,
    sigma: f64,
}

impl NormalParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self, ParamError> {
        if !mu.is_finite() {
            return Err(ParamError::InvalidMu(mu));
        }
        if !(sigma.is_finite() && sigma >= 0.0) {
            return Err(ParamError::InvalidSigma(sigma));
        }
        Ok(NormalParams { mu, sigma })
    }

    /// N(0, 1).
    pub const fn standard() -> Self {
        NormalParams { mu: 0.0, sigma: 1.0 }
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl Default for NormalParams {
    fn default() -> Self {
        Self::standard()
    }
}

/// The six generators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Box-Muller with library `ln`, `sqrt`, `sin`, `cos`.
    B1,
    /// Box-Muller with the polynomial sin/cos kernel.
    B2,
    /// B2 plus the `h(v)` radius kernel and the max-of-two square-root trick.
    B3,
    /// Polar method with library `ln` and `sqrt`.
    P1,
    /// Polar method with the `h(v)` radius kernel.
    P2,
    /// Ratio of uniforms with quick accept/reject pretests.
    R1,
}

impl Method {
    pub const ALL: [Method; 6] = [Method::B1, Method::B2, Method::B3, Method::P1, Method::P2, Method::R1];

    pub fn name(self) -> &'static str {
        match self {
            Method::B1 => "b1",
            Method::B2 => "b2",
            Method::B3 => "b3",
            Method::P1 => "p1",
            Method::P2 => "p2",
            Method::R1 => "r1",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name().to_uppercase())
    }
}

impl FromStr for Method {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ParamError::UnknownMethod(s.to_string()))
    }
}

/// Exact-count batch interface shared by all generators.
pub trait NormalGenerator {
    /// Overwrites `out` with the next `out.len()` deviates.
    fn fill(&mut self, out: &mut [f64]);

    /// Uniforms drawn from the underlying source so far.
    fn uniforms_drawn(&self) -> u64;

    fn method(&self) -> Method;
}

/// Builds a generator seeded from a fresh [`UniformStream`].
pub fn generator(method: Method, params: NormalParams, seed: u64) -> Box<dyn NormalGenerator> {
    generator_with::<UniformStream, StdMath>(method, params, UniformStream::new(seed))
}

/// Builds a generator over any uniform source.
pub fn generator_from_source<S>(method: Method, params: NormalParams, source: S) -> Box<dyn NormalGenerator>
where
    S: UniformSource + 'static,
{
    generator_with::<S, StdMath>(method, params, source)
}

/// Builds a generator with an explicit math kernel.
pub fn generator_with<S, K>(method: Method, params: NormalParams, source: S) -> Box<dyn NormalGenerator>
where
    S: UniformSource + 'static,
    K: MathKernel + 'static,
{
    match method {
        Method::B1 => Box::new(BoxMuller::<S, K>::with_kernel(BoxMullerVariant::B1, params, source)),
        Method::B2 => Box::new(BoxMuller::<S, K>::with_kernel(BoxMullerVariant::B2, params, source)),
        Method::B3 => Box::new(BoxMuller::<S, K>::with_kernel(BoxMullerVariant::B3, params, source)),
        Method::P1 => Box::new(Polar::<S, K>::with_kernel(PolarVariant::P1, params, source)),
        Method::P2 => Box::new(Polar::<S, K>::with_kernel(PolarVariant::P2, params, source)),
        Method::R1 => Box::new(Ratio::<S, K>::with_kernel(params, source)),
    }
}
