//! Deterministic sub-seed derivation.
//!
//! Every stochastic stage derives its RNG seed from a master seed and its
//! grid coordinates, so adding or removing one stage never perturbs the
//! random streams of another.

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a sub-seed as a pure function of `master` and `coords`.
pub fn derive_seed(master: u64, coords: &[u64]) -> u64 {
    let mut state = mix(master);
    for &c in coords {
        state = mix(state ^ mix(c));
    }
    state
}

/// Folds a name into a coordinate (FNV-1a) so techniques can be keyed by
/// name without positional coupling.
pub fn name_coord(name: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}
