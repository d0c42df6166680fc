use crate::baselines::SetSketch;
use crate::error::{Error, Result};
use crate::hashing::HashFamily;
use crate::params::{Algo, ItemId, JaccardEstimate};

/// Position of the leftmost 1-bit in a `width`-bit string, 1-based; an
/// all-zero string gives `width + 1`.
#[inline]
pub fn rho(bits: u64, width: u32) -> u8 {
    debug_assert!((1..=64).contains(&width));
    let aligned = if width == 64 {
        bits
    } else {
        bits << (64 - width)
    };
    if aligned == 0 {
        (width + 1) as u8
    } else {
        (aligned.leading_zeros() + 1) as u8
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HllCardinality {
    pub estimate: f64,
    /// `2.5 L < E <= 2^32 / 30`, where the raw estimator applies.
    pub in_range: bool,
}

/// `L = 2^M` registers fed by an `N`-bit hash: the leading `M` bits pick a
/// register, `ρ` of the remaining `N − M` bits is max-ed into it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HllRegisters {
    registers: Vec<u8>,
    m_bits: u32,
    n_bits: u32,
    hash: HashFamily,
}

impl HllRegisters {
    pub const DEFAULT_M: u32 = 11;
    pub const DEFAULT_N: u32 = 64;

    pub fn new(m_bits: u32, n_bits: u32, seed: u64) -> Result<Self> {
        if m_bits < 7 || m_bits >= n_bits || n_bits > 64 {
            return Err(Error::InvalidParameter(format!(
                "need 7 <= M < N <= 64, got M = {m_bits}, N = {n_bits}"
            )));
        }
        Ok(HllRegisters {
            registers: vec![0; 1 << m_bits],
            m_bits,
            n_bits,
            hash: HashFamily::new(seed, 1),
        })
    }

    pub fn registers(&self) -> &[u8] {
        &self.registers
    }

    pub fn len(&self) -> usize {
        self.registers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.registers.iter().all(|&r| r == 0)
    }

    #[inline]
    pub fn insert(&mut self, item: ItemId) {
        let h = self.hash.bit_hash(item, self.n_bits);
        let tail_bits = self.n_bits - self.m_bits;
        let idx = (h >> tail_bits) as usize;
        let tail = h & ((1u64 << tail_bits) - 1);
        let r = rho(tail, tail_bits);
        let slot = &mut self.registers[idx];
        if r > *slot {
            *slot = r;
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.m_bits != other.m_bits
            || self.n_bits != other.n_bits
            || self.hash.master_seed() != other.hash.master_seed()
        {
            return Err(Error::Incompatible(
                "HyperLogLog register arrays differ in M, N or seed".into(),
            ));
        }
        Ok(())
    }

    /// Register-wise max: the registers the union stream would have produced.
    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (r, &o) in out.registers.iter_mut().zip(&other.registers) {
            *r = (*r).max(o);
        }
        Ok(out)
    }

    pub fn cardinality(&self) -> HllCardinality {
        hll_cardinality(self)
    }
}

/// `E = α_L L² / Σ 2^(−a_i)` with `α_L = 0.7213 / (1 + 0.7213 / L)`.
pub fn hll_cardinality(r: &HllRegisters) -> HllCardinality {
    let l = r.len() as f64;
    let alpha = 0.7213 / (1.0 + 0.7213 / l);
    let harmonic: f64 = r.registers.iter().map(|&a| (-(a as f64)).exp2()).sum();
    let estimate = alpha * l * l / harmonic;
    HllCardinality {
        estimate,
        in_range: estimate > 2.5 * l && estimate <= 2f64.powi(32) / 30.0,
    }
}

/// `(|A| + |B| − |A ∪ B|) / |A ∪ B|`, every cardinality estimated from
/// registers. A side that saw no items has cardinality zero.
pub fn hll_jaccard(a: &HllRegisters, b: &HllRegisters) -> Result<JaccardEstimate> {
    let u = a.union(b)?;
    if a.is_empty() || b.is_empty() {
        return Ok(JaccardEstimate::new(0.0, Algo::Hll));
    }
    let ea = hll_cardinality(a).estimate;
    let eb = hll_cardinality(b).estimate;
    let eu = hll_cardinality(&u).estimate;
    Ok(JaccardEstimate::new((ea + eb - eu) / eu, Algo::Hll))
}

impl SetSketch for HllRegisters {
    fn algo(&self) -> Algo {
        Algo::Hll
    }

    fn insert_key(&mut self, key: ItemId) {
        self.insert(key);
    }

    fn estimate_set(&self, other: &Self) -> Result<JaccardEstimate> {
        hll_jaccard(self, other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hll(seed: u64, items: impl IntoIterator<Item = u64>) -> HllRegisters {
        let mut h = HllRegisters::new(11, 64, seed).unwrap();
        for x in items {
            h.insert(ItemId(x));
        }
        h
    }

    #[test]
    fn rho_examples() {
        assert_eq!(rho(0b1000, 4), 1);
        assert_eq!(rho(0b0001, 4), 4);
        assert_eq!(rho(0, 4), 5);
        assert_eq!(rho(0, 53), 54);
        assert_eq!(rho(1 << 63, 64), 1);
    }

    #[test]
    fn defaults() {
        assert_eq!(HllRegisters::DEFAULT_M, 11);
        assert_eq!(HllRegisters::DEFAULT_N, 64);
        let h = HllRegisters::new(11, 64, 0).unwrap();
        assert_eq!(h.len(), 2048);
        assert!(HllRegisters::new(6, 64, 0).is_err());
        assert!(HllRegisters::new(11, 11, 0).is_err());
    }

    #[test]
    fn registers_bounded() {
        let h = hll(3, 0..200_000);
        assert!(h.registers().iter().all(|&r| r as u32 <= 64 - 11 + 1));
    }

    #[test]
    fn cardinality_within_five_percent() {
        let n = 100_000u64;
        let mean_rel: f64 = (0..20)
            .map(|seed| {
                let c = hll(seed, seed * 10_000_000..seed * 10_000_000 + n).cardinality();
                assert!(c.in_range);
                (c.estimate - n as f64).abs() / n as f64
            })
            .sum::<f64>()
            / 20.0;
        assert!(mean_rel <= 0.05, "mean relative error {mean_rel}");
    }

    #[test]
    fn union_law() {
        let a = hll(5, 0..30_000);
        let b = hll(5, 20_000..60_000);
        assert_eq!(a.union(&b).unwrap(), hll(5, 0..60_000));
    }

    #[test]
    fn jaccard_examples() {
        let a = hll(1, 0..50_000);
        assert_eq!(hll_jaccard(&a, &a).unwrap().raw, 1.0);
        assert_eq!(hll_jaccard(&hll(1, []), &a).unwrap().value, 0.0);
        assert!(hll_jaccard(&a, &hll(2, 0..10)).is_err());

        let mean: f64 = (0..20)
            .map(|seed| {
                let a = hll(seed, 0..50_000);
                let b = hll(seed, 25_000..75_000);
                hll_jaccard(&a, &b).unwrap().value
            })
            .sum::<f64>()
            / 20.0;
        assert!((mean - 1.0 / 3.0).abs() <= 0.1, "mean {mean}");
    }
}
