//! Uniform input streams.
//!
//! [`UniformStream`] is an additive lagged-Fibonacci generator
//! `x[n] = x[n-607] + x[n-273] (mod 2^64)`. Outputs keep the top 53 bits of
//! each word, so every value lies in `[0, 1)`: zero is possible, one is not.

/// Long lag of the recurrence.
pub const LONG_LAG: usize = 607;
/// Short lag of the recurrence.
pub const SHORT_LAG: usize = 273;

const WARM_UP: usize = 10 * LONG_LAG;
const INV_2_53: f64 = 1.0 / (1u64 << 53) as f64;

/// A source of uniform doubles in `[0, 1)`.
///
/// Every generator in this crate draws its uniforms through this trait, which
/// lets tests replay fixed inputs with [`ReplayUniforms`].
pub trait UniformSource {
    /// Overwrites `out` with consecutive draws.
    fn fill_uniform(&mut self, out: &mut [f64]);

    /// Total number of uniforms drawn so far.
    fn draws(&self) -> u64;

    /// Overwrites `out` with `2u - 1` for consecutive draws `u`, so values lie in `[-1, 1)`.
    fn fill_uniform_signed(&mut self, out: &mut [f64]) {
        self.fill_uniform(out);
        for x in out.iter_mut() {
            *x = 2.0 * *x - 1.0;
        }
    }
}

/// Seedable additive lagged-Fibonacci generator with lags (607, 273).
#[derive(Clone)]
pub struct UniformStream {
    lag_table: Box<[u64; LONG_LAG]>,
    // lag_table[index_r] holds x[n-R], lag_table[index_s] holds x[n-S]
    index_r: usize,
    index_s: usize,
    seed: u64,
    count_generated: u64,
}

impl std::fmt::Debug for UniformStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("UniformStream")
            .field("seed", &self.seed)
            .field("index_r", &self.index_r)
            .field("index_s", &self.index_s)
            .field("count_generated", &self.count_generated)
            .finish_non_exhaustive()
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl UniformStream {
    /// Builds a stream from any 64-bit seed, including zero.
    pub fn new(seed: u64) -> Self {
        let mut state = seed;
        let mut table = Box::new([0u64; LONG_LAG]);
        for word in table.iter_mut() {
            *word = splitmix64(&mut state);
        }
        // An odd word guarantees the maximal period of the additive recurrence.
        table[0] |= 1;
        let mut stream = UniformStream {
            lag_table: table,
            index_r: 0,
            index_s: LONG_LAG - SHORT_LAG,
            seed,
            count_generated: 0,
        };
        for _ in 0..WARM_UP {
            stream.next_word();
        }
        stream
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of uniforms emitted since construction (warm-up excluded).
    pub fn count_generated(&self) -> u64 {
        self.count_generated
    }

    /// Read-only view of the current lag table.
    pub fn lag_table(&self) -> &[u64] {
        &self.lag_table[..]
    }

    #[inline]
    fn next_word(&mut self) -> u64 {
        let x = self.lag_table[self.index_r].wrapping_add(self.lag_table[self.index_s]);
        self.lag_table[self.index_r] = x;
        self.index_r += 1;
        if self.index_r == LONG_LAG {
            self.index_r = 0;
        }
        self.index_s += 1;
        if self.index_s == LONG_LAG {
            self.index_s = 0;
        }
        x
    }

    /// Next uniform in `[0, 1)`.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        self.count_generated += 1;
        (self.next_word() >> 11) as f64 * INV_2_53
    }
}

impl UniformSource for UniformStream {
    fn fill_uniform(&mut self, out: &mut [f64]) {
        for x in out.iter_mut() {
            *x = (self.next_word() >> 11) as f64 * INV_2_53;
        }
        self.count_generated += out.len() as u64;
    }

    fn draws(&self) -> u64 {
        self.count_generated
    }
}

/// Replays a fixed list of uniforms, cycling when exhausted.
///
/// Intended for fixtures that need known inputs to a generator.
#[derive(Debug, Clone)]
pub struct ReplayUniforms {
    values: Vec<f64>,
    pos: usize,
    drawn: u64,
}

impl ReplayUniforms {
    /// # Panics
    ///
    /// If `values` is empty or contains anything outside `[0, 1)`.
    pub fn new(values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "replay source needs at least one value");
        assert!(
            values.iter().all(|u| (0.0..1.0).contains(u)),
            "replayed uniforms must lie in [0, 1)"
        );
        ReplayUniforms {
            values,
            pos: 0,
            drawn: 0,
        }
    }
}

impl UniformSource for ReplayUniforms {
    fn fill_uniform(&mut self, out: &mut [f64]) {
        for x in out.iter_mut() {
            *x = self.values[self.pos];
            self.pos = (self.pos + 1) % self.values.len();
        }
        self.drawn += out.len() as u64;
    }

    fn draws(&self) -> u64 {
        self.drawn
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn draw(seed: u64, n: usize) -> Vec<f64> {
        let mut s = UniformStream::new(seed);
        let mut out = vec![0.0; n];
        s.fill_uniform(&mut out);
        out
    }

    #[test]
    fn deterministic() {
        assert_eq!(draw(1, 5000), draw(1, 5000));
    }

    #[test]
    fn seeds_differ() {
        let a = draw(1, 10_000);
        let b = draw(2, 10_000);
        let same = a.iter().zip(&b).filter(|(x, y)| x == y).count();
        assert!(same <= 100, "{same} coincident positions");
    }

    #[test]
    fn zero_seed_is_valid() {
        let s = UniformStream::new(0);
        assert!(s.lag_table().iter().any(|&w| w != 0));
        let out = draw(0, 1000);
        assert!(out.iter().any(|&u| u != out[0]));
    }

    #[test]
    fn empty_fill_leaves_state() {
        let mut s = UniformStream::new(9);
        let before = s.clone();
        s.fill_uniform(&mut []);
        assert_eq!(s.count_generated(), 0);
        assert_eq!(s.lag_table(), before.lag_table());
        assert_eq!(s.next_f64(), before.clone().next_f64());
    }

    #[test]
    fn three_then_five_is_eight() {
        let mut s = UniformStream::new(42);
        let mut a = [0.0; 3];
        let mut b = [0.0; 5];
        s.fill_uniform(&mut a);
        s.fill_uniform(&mut b);
        assert_eq!(s.count_generated(), 8);
        let whole = draw(42, 8);
        assert_eq!(&whole[..3], &a);
        assert_eq!(&whole[3..], &b);
    }

    #[test]
    fn mean_of_million() {
        let out = draw(3, 1_000_000);
        let mean = out.iter().sum::<f64>() / out.len() as f64;
        let tol = 4.0 * (1.0 / 12.0 / 1e6f64).sqrt();
        assert!((mean - 0.5).abs() < tol, "mean {mean}");
    }

    #[test]
    fn signed_endpoints_and_mean() {
        let mut r = ReplayUniforms::new(vec![0.0, 0.5]);
        let mut out = [0.0; 2];
        r.fill_uniform_signed(&mut out);
        assert_eq!(out, [-1.0, 0.0]);

        let mut s = UniformStream::new(5);
        let mut out = vec![0.0; 1_000_000];
        s.fill_uniform_signed(&mut out);
        assert!(out.iter().all(|x| (-1.0..1.0).contains(x)));
        let mean = out.iter().sum::<f64>() / out.len() as f64;
        let tol = 4.0 * ((4.0 / 12.0) / 1e6f64).sqrt();
        assert!(mean.abs() < tol, "mean {mean}");
        assert_eq!(s.draws(), 1_000_000);
    }

    #[test]
    fn serial_correlation_small() {
        let out = draw(11, 1_000_000);
        let n = out.len();
        let mean = out.iter().sum::<f64>() / n as f64;
        let var = out.iter().map(|u| (u - mean).powi(2)).sum::<f64>() / n as f64;
        let bound = 4.0 / (n as f64).sqrt();
        for lag in 1..=100 {
            let cov = (0..n - lag)
                .map(|i| (out[i] - mean) * (out[i + lag] - mean))
                .sum::<f64>()
                / (n - lag) as f64;
            let r = cov / var;
            assert!(r.abs() < bound, "lag {lag}: r = {r}");
        }
    }

    proptest! {
        #[test]
        fn partition_invariance(seed in any::<u64>(), a in 0usize..700, b in 0usize..700) {
            let mut s = UniformStream::new(seed);
            let mut x = vec![0.0; a];
            let mut y = vec![0.0; b];
            s.fill_uniform(&mut x);
            s.fill_uniform(&mut y);
            x.extend(y);
            prop_assert_eq!(x, draw(seed, a + b));
        }

        #[test]
        fn outputs_in_unit_interval(seed in any::<u64>()) {
            prop_assert!(draw(seed, 2000).iter().all(|u| (0.0..1.0).contains(u)));
        }
    }
}
