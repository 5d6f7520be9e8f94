//! Deterministic random-number substreams.
//!
//! Every replicate owns one ChaCha8 stream per purpose. The key depends on the
//! master seed and a fixed purpose label, the stream id is the replicate index,
//! so results do not depend on how replicates are scheduled across workers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose labels for the substreams of one replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamLabel {
    /// Increments of the first (alpha1) stable component.
    FirstComponent,
    /// Increments of the second (alpha2) stable component.
    SecondComponent,
    /// The Poisson layer.
    Poisson,
}

impl StreamLabel {
    fn tag(self) -> u64 {
        match self {
            StreamLabel::FirstComponent => 0x5354_4142_4c45_0001,
            StreamLabel::SecondComponent => 0x5354_4142_4c45_0002,
            StreamLabel::Poisson => 0x504f_4953_534f_4e00,
        }
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generator for `(master_seed, label, replicate)`.
pub fn substream(master_seed: u64, label: StreamLabel, replicate: u64) -> ChaCha8Rng {
    let mut state = master_seed ^ label.tag();
    let mut key = [0u8; 32];
    for chunk in key.chunks_exact_mut(8) {
        chunk.copy_from_slice(&splitmix64(&mut state).to_le_bytes());
    }
    let mut rng = ChaCha8Rng::from_seed(key);
    rng.set_stream(replicate);
    rng
}

/// The three generators used by one replicate.
pub struct ReplicateRngs {
    pub first: ChaCha8Rng,
    pub second: ChaCha8Rng,
    pub poisson: ChaCha8Rng,
}

impl ReplicateRngs {
    pub fn new(master_seed: u64, replicate: u64) -> Self {
        ReplicateRngs {
            first: substream(master_seed, StreamLabel::FirstComponent, replicate),
            second: substream(master_seed, StreamLabel::SecondComponent, replicate),
            poisson: substream(master_seed, StreamLabel::Poisson, replicate),
        }
    }
}
