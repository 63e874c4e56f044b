//! Batch-oriented normal random number generation.
//!
//! Six generators fill whole slices at a time from a lagged-Fibonacci
//! uniform stream:
//!
//! * Box-Muller with library trig ([`method::Method::B1`]), with a fast
//!   polynomial sin/cos ([`method::Method::B2`]), and with the
//!   max-of-two-uniforms radius evaluated through a polynomial
//!   ([`method::Method::B3`]);
//! * the polar method with library math ([`method::Method::P1`]) and with the
//!   polynomial radius ([`method::Method::P2`]);
//! * the ratio-of-uniforms method with quick accept/reject bounds
//!   ([`method::Method::R1`]).
//!
//! ```
//! use vecnormal::method::{generator, Method, NormalParams};
//!
//! let mut g = generator(Method::P2, NormalParams::new(3.0, 2.0).unwrap(), 7);
//! let mut x = vec![0.0; 1000];
//! g.fill(&mut x);
//! assert!(x.iter().all(|v| v.is_finite()));
//! ```

pub mod bench;
pub mod boxmuller;
pub mod buffer;
pub mod chebyshev;
pub mod cli;
pub mod fastfuncs;
pub mod kernel;
pub mod method;
pub mod polar;
pub mod ratio;
pub mod statcheck;
pub mod uniform;
