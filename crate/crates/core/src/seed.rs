//! Deterministic per-trial generators.
//!
//! Every trial owns a ChaCha8 stream keyed by SHA-256 of the master seed,
//! the cell coordinates and the trial index, so results do not depend on
//! scheduling or on how many trials run.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub fn trial_rng(master_seed: u64, cell: &[f64], trial: u64) -> ChaCha8Rng {
    let mut h = Sha256::new();
    h.update(master_seed.to_le_bytes());
    h.update((cell.len() as u64).to_le_bytes());
    for c in cell {
        h.update(c.to_bits().to_le_bytes());
    }
    h.update(trial.to_le_bytes());
    ChaCha8Rng::from_seed(h.finalize().into())
}
