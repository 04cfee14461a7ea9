//! Counter-derived random streams.
//!
//! Every trial draws from its own ChaCha8 stream, keyed by `(master seed,
//! grid point)` and selected by the trial counter. Results therefore depend
//! only on the indices, never on how trials are scheduled across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// A family of streams sharing one key; `trial(t)` selects stream `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamFamily {
    key: [u8; 32],
}

impl StreamFamily {
    pub fn new(master_seed: u64, point: u64) -> Self {
        let mut state = master_seed ^ point.wrapping_mul(0xD1B5_4A32_D192_ED03);
        // burn one output so that (seed, 0) and (seed ^ c, 1) do not share a prefix
        splitmix64(&mut state);
        let mut key = [0u8; 32];
        for chunk in key.chunks_exact_mut(8) {
            chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
        }
        Self { key }
    }

    pub fn trial(&self, index: u64) -> Stream {
        let mut rng = ChaCha8Rng::from_seed(self.key);
        rng.set_stream(index);
        rng
    }
}

/// Stream `index` of the family keyed by `master_seed` alone.
pub fn stream(master_seed: u64, index: u64) -> Stream {
    StreamFamily::new(master_seed, u64::MAX).trial(index)
}
