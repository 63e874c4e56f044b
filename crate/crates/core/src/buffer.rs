//! Carry-over storage that turns batch rejection sampling into an
//! exact-count fill.

use crate::method::BLOCK;

/// Surplus deviates from the last candidate round, delivered first on the next fill.
#[derive(Debug, Clone)]
pub struct RejectionBuffer {
    storage: Vec<f64>,
    start: usize,
    capacity: usize,
}

impl Default for RejectionBuffer {
    fn default() -> Self {
        Self::with_capacity(2 * BLOCK)
    }
}

impl RejectionBuffer {
    pub fn with_capacity(capacity: usize) -> Self {
        RejectionBuffer {
            storage: Vec::with_capacity(capacity),
            start: 0,
            capacity,
        }
    }

    pub fn len(&self) -> usize {
        self.storage.len() - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Pending deviates, oldest first.
    pub fn pending(&self) -> &[f64] {
        &self.storage[self.start..]
    }

    /// Moves as many pending deviates as fit into `out`; returns how many.
    pub fn drain_into(&mut self, out: &mut [f64]) -> usize {
        let k = self.len().min(out.len());
        out[..k].copy_from_slice(&self.storage[self.start..self.start + k]);
        self.start += k;
        if self.start == self.storage.len() {
            self.storage.clear();
            self.start = 0;
        }
        k
    }

    fn staging(&mut self) -> &mut Vec<f64> {
        debug_assert!(self.is_empty());
        self.storage.clear();
        self.start = 0;
        &mut self.storage
    }
}

/// One vectorised propose/accept pass of a rejection method.
pub(crate) trait RejectionRound {
    /// Candidates to propose so that about `need` deviates come out.
    fn candidates_for(&self, need: usize) -> usize;

    /// Proposes `candidates` candidates and appends the resulting deviates,
    /// in candidate order, to `out`.
    fn round(&mut self, candidates: usize, out: &mut Vec<f64>);
}

/// Delivers exactly `out.len()` deviates: buffered ones first, then fresh
/// rounds of at most [`BLOCK`] deviates, keeping any surplus for next time.
pub(crate) fn fill_exact<R: RejectionRound>(core: &mut R, buffer: &mut RejectionBuffer, out: &mut [f64]) {
    let mut filled = buffer.drain_into(out);
    while filled < out.len() {
        let need = (out.len() - filled).min(BLOCK);
        let capacity = buffer.capacity;
        let staging = buffer.staging();
        while staging.len() < need {
            let m = core.candidates_for(need - staging.len());
            core.round(m, staging);
        }
        assert!(staging.len() <= capacity, "rejection buffer overflow");
        filled += buffer.drain_into(&mut out[filled..]);
    }
}
