//! Counter-based random substreams.
//!
//! Every stochastic unit of work (a trial, a codeword attempt, a simulation
//! run) draws from its own ChaCha stream keyed by the master seed and an index
//! path. Results therefore do not depend on scheduling or worker count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives the stream for `path` under `master`.
pub fn substream(master: u64, path: &[u64]) -> SimRng {
    let mut state = master;
    for &p in path {
        state = splitmix64(&mut state) ^ p.wrapping_mul(0xD6E8_FEB8_6659_FD93);
    }
    let mut seed = [0u8; 32];
    for chunk in seed.chunks_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    ChaCha8Rng::from_seed(seed)
}

/// A 64-bit seed for `path` under `master`, for handing to components that
/// take a seed rather than a stream.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    rand::RngCore::next_u64(&mut substream(master, path))
}
