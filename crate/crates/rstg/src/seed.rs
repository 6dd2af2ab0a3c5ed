//! Per-trial seed derivation.
//!
//! A trial's seed is a fixed hash of `(master_seed, trial index)` and every
//! random stream inside the trial hashes that seed with a stream tag, so a
//! trial's randomness does not depend on which worker runs it or when, and
//! the seed stored in a record is enough to replay it.

/// SplitMix64 finaliser.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for stream `tag` of trial `index` under `master`.
pub fn derive_seed(master: u64, index: u64, tag: u64) -> u64 {
    mix(mix(mix(master) ^ index) ^ tag.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

/// Seed of trial `index` under `master`.
pub fn trial_seed(master: u64, index: u64) -> u64 {
    derive_seed(master, index, 0)
}

/// Seed of stream `tag` inside the trial seeded with `seed`.
pub fn stream_seed(seed: u64, tag: u64) -> u64 {
    derive_seed(seed, u64::MAX, tag)
}

/// Seed of per-point setup (not tied to any trial).
pub fn point_seed(master: u64, point: u64, tag: u64) -> u64 {
    derive_seed(derive_seed(master, u64::MAX, u64::MAX), point, tag)
}

/// Named random streams used inside one trial.
pub mod stream {
    pub const GRAPH: u64 = 1;
    pub const SECOND_GRAPH: u64 = 2;
    pub const TREE: u64 = 3;
    pub const COUPLING: u64 = 4;
    pub const SOLVER: u64 = 5;
    pub const WALK: u64 = 6;
    pub const PATHS: u64 = 7;
}
