//! Synthetic Zipf streams and random splitting into multiset pairs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hashing::hash_with_seed;
use crate::params::ItemId;

const RANK_SALT: u64 = 0x7a69_7066_5f72_616e;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZipfSpec {
    pub n_items: usize,
    pub n_distinct: usize,
    pub alpha: f64,
    pub seed: u64,
}

impl ZipfSpec {
    fn validate(&self) -> Result<()> {
        if self.n_distinct == 0 {
            return Err(Error::InvalidParameter(
                "n_distinct must be at least 1".into(),
            ));
        }
        if !(self.alpha >= 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be finite and non-negative, got {}",
                self.alpha
            )));
        }
        Ok(())
    }
}

/// Identifier for the item of a given 1-based rank.
pub fn rank_id(rank: usize) -> ItemId {
    ItemId(hash_with_seed(rank as u64, RANK_SALT))
}

/// Inverse-CDF sampler over ranks `1..=n` with `P(r) ∝ r^(−alpha)`.
#[derive(Clone, Debug)]
pub struct ZipfSampler {
    cdf: Vec<f64>,
}

impl ZipfSampler {
    pub fn new(n_distinct: usize, alpha: f64) -> Self {
        let mut acc = 0.0;
        let mut cdf: Vec<f64> = (1..=n_distinct)
            .map(|r| {
                acc += (r as f64).powf(-alpha);
                acc
            })
            .collect();
        let total = acc;
        for c in &mut cdf {
            *c /= total;
        }
        if let Some(last) = cdf.last_mut() {
            *last = 1.0;
        }
        ZipfSampler { cdf }
    }

    /// 1-based rank.
    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cdf
            .partition_point(|&c| c <= u)
            .min(self.cdf.len() - 1)
            + 1
    }

    pub fn probability(&self, rank: usize) -> f64 {
        let hi = self.cdf[rank - 1];
        let lo = if rank >= 2 { self.cdf[rank - 2] } else { 0.0 };
        hi - lo
    }
}

/// `n_items` i.i.d. Zipf draws, each rank mapped to a fixed [`ItemId`].
pub fn zipf_stream(spec: &ZipfSpec) -> Result<Vec<ItemId>> {
    spec.validate()?;
    let sampler = ZipfSampler::new(spec.n_distinct, spec.alpha);
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Ok((0..spec.n_items)
        .map(|_| rank_id(sampler.sample(&mut rng)))
        .collect())
}

/// Route every element independently: to the first output with probability
/// `p`, otherwise to the second. Relative order is kept on both sides.
pub fn random_split(stream: &[ItemId], p: f64, seed: u64) -> Result<(Vec<ItemId>, Vec<ItemId>)> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "split probability must be in [0, 1], got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut first = Vec::with_capacity((stream.len() as f64 * p) as usize + 16);
    let mut second = Vec::with_capacity((stream.len() as f64 * (1.0 - p)) as usize + 16);
    for &x in stream {
        if rng.gen::<f64>() < p {
            first.push(x);
        } else {
            second.push(x);
        }
    }
    Ok((first, second))
}
