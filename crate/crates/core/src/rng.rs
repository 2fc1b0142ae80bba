//! Seed-keyed random streams.
//!
//! Every random draw in the crate comes from a [`RngStream`] identified by a
//! master seed plus a `(voter_id, purpose)` key. The master seed fixes the
//! ChaCha20 key and the stream key selects one of its 2⁶⁴ independent
//! streams, so the same key always reproduces the same sequence no matter
//! how work is scheduled across threads.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// What a stream is used for. Occupies the top byte of the ChaCha stream id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Purpose {
    SocietyMean = 1,
    VoterTruth = 2,
    Records = 3,
    CentralNoise = 4,
    VoterNoise = 5,
    FunctionalNoise = 6,
    PrivacyGroups = 7,
    TestScenarios = 8,
    Neighbors = 9,
}

const VOTER_ID_BITS: u32 = 56;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub master_seed: u64,
    pub voter_id: u64,
    pub purpose: Purpose,
}

impl RngStream {
    pub fn new(master_seed: u64, voter_id: u64, purpose: Purpose) -> Self {
        assert!(
            voter_id < 1 << VOTER_ID_BITS,
            "voter id {voter_id} does not fit the stream key"
        );
        Self {
            master_seed,
            voter_id,
            purpose,
        }
    }

    /// A fresh generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha20Rng {
        let mut rng = ChaCha20Rng::from_seed(expand_seed(self.master_seed));
        rng.set_stream(((self.purpose as u64) << VOTER_ID_BITS) | self.voter_id);
        rng
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn expand_seed(seed: u64) -> [u8; 32] {
    let mut state = seed;
    let mut out = [0u8; 32];
    for chunk in out.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    out
}

/// Derives a child seed from a master seed and a path of indices, e.g.
/// `(cell, trial)` in a sweep.
pub fn derive_seed(master: u64, path: &[u64]) -> u64 {
    let mut state = master;
    let mut out = splitmix64(&mut state);
    for &p in path {
        state ^= p.wrapping_mul(0xD6E8_FEB8_6659_FD93);
        out = splitmix64(&mut state);
    }
    out
}
