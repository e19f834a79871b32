//! Deterministic stream derivation.
//!
//! Every Gaussian stream in the crate is keyed by `(master seed, domain tag,
//! two indices)`. The key is absorbed into a SplitMix64 chain and expanded to
//! a 256-bit ChaCha seed, so a (seed, mode index, path index) triple
//! determines its standard-normal stream independently of every other
//! stream. This is what makes Monte Carlo runs reproducible under any
//! parallel schedule: workers never share generator state.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Scalar fBm sampling, Cholesky route.
pub const DOMAIN_FBM_CHOLESKY: u64 = 0x01;
/// Scalar fBm sampling, circulant-embedding route.
pub const DOMAIN_FBM_CIRCULANT: u64 = 0x02;
/// Per-mode seed derivation inside a cylindrical ensemble.
pub const DOMAIN_MODE: u64 = 0x03;
/// Per-path seed derivation inside a Monte Carlo run.
pub const DOMAIN_PATH: u64 = 0x04;
/// Randomized test fields (validation suites, contraction probes).
pub const DOMAIN_FIELD: u64 = 0x05;

/// SplitMix64 finalizer: a full-avalanche 64-bit permutation.
fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Absorb one word into the running state; the word is avalanched before
/// the xor so that small integer tags (mode indices, path indices) diffuse
/// across all 64 bits and distinct tag tuples cannot cancel.
fn absorb(state: u64, word: u64) -> u64 {
    mix(state ^ mix(word))
}

/// Collapse `(master, domain, a, b)` to a single well-mixed 64-bit label.
///
/// Used to derive stored sub-seeds (for example the per-mode seed recorded in
/// an [`crate::fbm::FbmPath`]); labels for distinct inputs are distinct for
/// all practical purposes.
pub fn derive_seed(master: u64, domain: u64, a: u64, b: u64) -> u64 {
    let mut s = mix(master);
    s = absorb(s, domain);
    s = absorb(s, a);
    absorb(s, b)
}

/// Deterministic ChaCha stream for `(master, domain, a, b)`.
pub fn derive_rng(master: u64, domain: u64, a: u64, b: u64) -> ChaCha12Rng {
    let label = derive_seed(master, domain, a, b);
    let mut seed = [0u8; 32];
    for (i, chunk) in seed.chunks_exact_mut(8).enumerate() {
        chunk.copy_from_slice(&mix(label.wrapping_add(i as u64)).to_le_bytes());
    }
    ChaCha12Rng::from_seed(seed)
}
