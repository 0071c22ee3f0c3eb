//! Deterministic seed derivation.
//!
//! Every random draw in the toolkit comes from a ChaCha stream seeded
//! through these helpers, so a run is a pure function of its base seed.

/// SplitMix64 step. Standard finalizer, good avalanche, no state needed.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Derive a child seed from `base` for a named purpose and an index.
///
/// The tag keeps streams for different purposes (init, attacks, trials)
/// disjoint even when their indices collide.
pub fn derive(base: u64, tag: &str, index: u64) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for b in tag.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    splitmix64(base ^ splitmix64(h ^ index.wrapping_mul(0x9e3779b97f4a7c15)))
}
