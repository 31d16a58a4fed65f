use std::collections::VecDeque;

use num_complex::Complex64;

use super::ops::OpCounters;
use crate::error::{invalid, Result};

/// Values of the three sliding sums at one index n.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorState {
    /// G(n) = Σ_{m<N/2} r*(n+m) r(n+m+N/2)
    pub g: Complex64,
    /// M(n) = Σ_{m<N/2} |r(n+m+N/2)|²
    pub m: f64,
    /// Q(n), the quarter-lag estimate; zero when the correlator runs without it.
    pub q: Complex64,
}

/// O(1)-per-sample sliding correlator over the last N samples.
///
/// Each product enters its sum once and is cached until it leaves, so an
/// update costs one complex multiplication for G and one for Q.
#[derive(Debug, Clone)]
pub struct Correlator {
    n_fft: usize,
    with_q: bool,
    /// r(n) .. r(n+N-1)
    recent: VecDeque<Complex64>,
    /// r*(k) r(k+N/2) for k = n .. n+N/2-1
    g_terms: VecDeque<Complex64>,
    /// |r(k)|² for k = n+N/2 .. n+N-1
    energies: VecDeque<f64>,
    /// r*(k) r(k+N/4) for k = n .. n+3N/4-1
    q_terms: VecDeque<Complex64>,
    state: CorrelatorState,
    ops: OpCounters,
    pushed: u64,
}

impl Correlator {
    /// Direct evaluation at the first index from `head = r(n0) .. r(n0+N-1)`.
    /// Initialization is not booked in the operation counters.
    pub fn new(n_fft: usize, with_q: bool, head: &[Complex64]) -> Result<Self> {
        if n_fft < 4 || !n_fft.is_multiple_of(4) {
            return Err(invalid(format!("n_fft must be a positive multiple of 4, got {n_fft}")));
        }
        if head.len() != n_fft {
            return Err(invalid(format!(
                "correlator needs {n_fft} samples to start, got {}",
                head.len()
            )));
        }
        let half = n_fft / 2;
        let quarter = n_fft / 4;
        let g_terms: VecDeque<Complex64> = (0..half).map(|k| head[k].conj() * head[k + half]).collect();
        let energies: VecDeque<f64> = head[half..].iter().map(|s| s.norm_sqr()).collect();
        let q_terms: VecDeque<Complex64> = if with_q {
            (0..3 * quarter).map(|k| head[k].conj() * head[k + quarter]).collect()
        } else {
            VecDeque::new()
        };
        let g = g_terms.iter().sum();
        let m = energies.iter().sum();
        let q = if with_q {
            let group = |from: usize| q_terms.range(from..from + quarter).sum::<Complex64>();
            (group(0) + group(quarter) * 2.0 + group(2 * quarter)) * 0.5
        } else {
            Complex64::default()
        };
        Ok(Self {
            n_fft,
            with_q,
            recent: head.iter().copied().collect(),
            g_terms,
            energies,
            q_terms,
            state: CorrelatorState { g, m, q },
            ops: OpCounters::default(),
            pushed: 0,
        })
    }

    pub fn n_fft(&self) -> usize {
        self.n_fft
    }

    pub fn state(&self) -> CorrelatorState {
        self.state
    }

    pub fn ops(&self) -> OpCounters {
        self.ops
    }

    pub(crate) fn ops_mut(&mut self) -> &mut OpCounters {
        &mut self.ops
    }

    /// Samples consumed after initialization.
    pub fn samples_pushed(&self) -> u64 {
        self.pushed
    }

    /// Consumes r(n+N) and advances from index n to n+1.
    pub fn push(&mut self, sample: Complex64) -> CorrelatorState {
        let half = self.n_fft / 2;
        let quarter = self.n_fft / 4;
        self.recent.pop_front();
        self.recent.push_back(sample);
        let ops = &mut self.ops;

        // G(n) = G(n-1) - r*(n-1)r(n-1+N/2) + r*(n+N/2-1)r(n+N-1)
        let entering = ops.conj_mul(self.recent[half - 1], sample);
        let leaving = self.g_terms.pop_front().expect("window is full");
        self.g_terms.push_back(entering);
        let g = ops.csub(self.state.g, leaving);
        self.state.g = ops.cadd(g, entering);

        // M(n) = M(n-1) - |r(n+N/2-1)|² + |r(n+N-1)|²
        let energy = ops.norm_sqr(sample);
        let leaving = self.energies.pop_front().expect("window is full");
        self.energies.push_back(energy);
        let m = ops.sub(self.state.m, leaving);
        self.state.m = ops.add(m, energy);

        if self.with_q {
            // Q(n) = Q(n-1) + ½[p(n+3N/4-1) + p(n+N/2-1) - p(n+N/4-1) - p(n-1)],
            // p(k) = r*(k) r(k+N/4)
            let entering = ops.conj_mul(self.recent[3 * quarter - 1], sample);
            let delta = ops.cadd(entering, self.q_terms[half]);
            let delta = ops.csub(delta, self.q_terms[quarter]);
            let delta = ops.csub(delta, self.q_terms[0]);
            let delta = ops.scale(delta, 0.5);
            self.state.q = ops.cadd(self.state.q, delta);
            self.q_terms.pop_front();
            self.q_terms.push_back(entering);
        }
        self.pushed += 1;
        self.state
    }
}
