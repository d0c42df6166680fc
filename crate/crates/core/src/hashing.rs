//! Seeded hash family. One master seed fixes every per-row hash function, so
//! a whole experiment is reproducible from a single integer.

use crate::params::ItemId;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// Stafford's mix13 finalizer (the splitmix64 output function).
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Two mixing rounds keyed by `seed`.
#[inline]
pub fn hash_with_seed(value: u64, seed: u64) -> u64 {
    mix64(mix64(value.wrapping_add(seed)) ^ seed.rotate_left(32))
}

/// splitmix64 step; also used for seed expansion elsewhere in the crate.
#[inline]
pub fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(GOLDEN);
    mix64(*state)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Index = 1,
    Sign = 2,
    Unit = 3,
    Bit = 4,
    Raw = 5,
}

fn derive_seed(master: u64, row: usize, kind: Kind) -> u64 {
    let tagged = mix64(master ^ (kind as u64).wrapping_mul(0xd6e8_feb8_6659_fd93));
    mix64(tagged.wrapping_add((row as u64 + 1).wrapping_mul(GOLDEN)))
}

/// Per-row index, sign, unit-interval and raw hashes plus one bit-string hash,
/// all derived from `master_seed`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HashFamily {
    master_seed: u64,
    index_seeds: Vec<u64>,
    sign_seeds: Vec<u64>,
    unit_seeds: Vec<u64>,
    raw_seeds: Vec<u64>,
    bit_seed: u64,
}

impl HashFamily {
    pub fn new(master_seed: u64, rows: usize) -> Self {
        let seeds = |kind| {
            (0..rows)
                .map(|r| derive_seed(master_seed, r, kind))
                .collect()
        };
        HashFamily {
            master_seed,
            index_seeds: seeds(Kind::Index),
            sign_seeds: seeds(Kind::Sign),
            unit_seeds: seeds(Kind::Unit),
            raw_seeds: seeds(Kind::Raw),
            bit_seed: derive_seed(master_seed, 0, Kind::Bit),
        }
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn rows(&self) -> usize {
        self.index_seeds.len()
    }

    /// Bucket in `[0, width)` for `item` in `row`.
    #[inline]
    pub fn index_hash(&self, item: ItemId, row: usize, width: usize) -> usize {
        let h = hash_with_seed(item.0, self.index_seeds[row]);
        // multiply-shift range reduction
        ((h as u128 * width as u128) >> 64) as usize
    }

    /// `+1` or `-1`.
    #[inline]
    pub fn sign_hash(&self, item: ItemId, row: usize) -> i32 {
        let h = hash_with_seed(item.0, self.sign_seeds[row]);
        if h >> 63 == 0 {
            1
        } else {
            -1
        }
    }

    /// Uniform real strictly inside `(0, 1)`: the midpoint of one of 2^52
    /// equal cells, so neither endpoint is reachable.
    #[inline]
    pub fn unit_hash(&self, item: ItemId, row: usize) -> f64 {
        let h = hash_with_seed(item.0, self.unit_seeds[row]);
        ((h >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
    }

    /// The item's 64-bit hash truncated to its leading `bits` bits,
    /// right-aligned.
    #[inline]
    pub fn bit_hash(&self, item: ItemId, bits: u32) -> u64 {
        debug_assert!((1..=64).contains(&bits));
        let h = hash_with_seed(item.0, self.bit_seed);
        if bits >= 64 {
            h
        } else {
            h >> (64 - bits)
        }
    }

    /// Full 64-bit per-row hash for callers that slice bits themselves.
    #[inline]
    pub fn raw_hash(&self, item: ItemId, row: usize) -> u64 {
        hash_with_seed(item.0, self.raw_seeds[row])
    }
}
