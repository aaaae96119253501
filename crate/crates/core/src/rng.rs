//! Seeded randomness.
//!
//! Every stochastic component takes a caller-owned generator. A run is
//! reproduced from one master seed: component streams are derived with
//! [`sub_seed`] from a fixed label such as `"ga"`, `"split"` or `"generate"`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Portable, reproducible generator used throughout the crate.
pub type SeededRng = ChaCha8Rng;

/// Generator for `label`, derived from `master`.
pub fn component_rng(master: u64, label: &str) -> SeededRng {
    SeededRng::seed_from_u64(sub_seed(master, label))
}

/// Derives a child seed: FNV-1a over the label bytes, xored into the
/// master seed, then one SplitMix64 finalization round.
pub fn sub_seed(master: u64, label: &str) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for byte in label.bytes() {
        hash ^= u64::from(byte);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    splitmix64(master ^ hash)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn labels_give_distinct_streams() {
        assert_ne!(sub_seed(7, "ga"), sub_seed(7, "split"));
        assert_ne!(sub_seed(7, "ga"), sub_seed(8, "ga"));
        assert_eq!(sub_seed(7, "ga"), sub_seed(7, "ga"));
    }

    #[test]
    fn component_rng_is_reproducible() {
        let a: Vec<u64> = component_rng(1, "x").random_iter().take(4).collect();
        let b: Vec<u64> = component_rng(1, "x").random_iter().take(4).collect();
        assert_eq!(a, b);
    }
}
