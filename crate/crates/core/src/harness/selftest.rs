//! Quick invariant checks runnable from the command line.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::baselines::expand_exact;
use crate::datagen::{random_split, zipf_stream, ZipfSpec};
use crate::error::Result;
use crate::oracle::ExactMultiset;
use crate::params::{ItemId, SketchParams};
use crate::sketch::{CmSimiSketch, CountSimiSketch, FormalSimiSketch, SalsaSimiSketch};

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn zipf_pair(rng: &mut ChaCha8Rng) -> Result<(Vec<ItemId>, Vec<ItemId>)> {
    let spec = ZipfSpec {
        n_items: rng.gen_range(100..5_000),
        n_distinct: rng.gen_range(10..2_000),
        alpha: [0.3, 0.6, 1.0][rng.gen_range(0..3)],
        seed: rng.gen(),
    };
    random_split(&zipf_stream(&spec)?, 0.5, rng.gen())
}

fn multiset(s: &[ItemId]) -> ExactMultiset {
    s.iter().copied().collect()
}

fn cm_overestimates(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut violations = 0;
    for _ in 0..50 {
        let (a, b) = zipf_pair(rng)?;
        let j = multiset(&a).jaccard(&multiset(&b))?;
        let params = SketchParams::new(
            [1, 2, 4][rng.gen_range(0..3)],
            rng.gen_range(8..256),
            rng.gen(),
        )?;
        let mut sa = CmSimiSketch::new(params);
        let mut sb = CmSimiSketch::new(params);
        for &x in &a {
            sa.insert(x)?;
        }
        for &x in &b {
            sb.insert(x)?;
        }
        if sa.estimate_jaccard(&sb)?.raw < j {
            violations += 1;
        }
    }
    Ok((
        violations == 0,
        format!("{violations} violations in 50 pairs"),
    ))
}

fn algebra(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut bad = 0;
    for _ in 0..100 {
        let (a, b) = zipf_pair(rng)?;
        let (ma, mb) = (multiset(&a), multiset(&b));
        if ma.intersect_cardinality(&mb) + ma.union_cardinality(&mb)
            != ma.cardinality() + mb.cardinality()
        {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{bad} failures in 100 pairs")))
}

fn linearity(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut bad = 0;
    for _ in 0..20 {
        let (s1, s2) = zipf_pair(rng)?;
        let params = SketchParams::new(rng.gen_range(1..4), rng.gen_range(8..128), rng.gen())?;
        let both: Vec<ItemId> = s1.iter().chain(&s2).copied().collect();

        let build_cm = |s: &[ItemId]| -> Result<CmSimiSketch> {
            let mut k = CmSimiSketch::new(params);
            s.iter().try_for_each(|&x| k.insert(x))?;
            Ok(k)
        };
        let build_count = |s: &[ItemId]| -> Result<CountSimiSketch> {
            let mut k = CountSimiSketch::new(params);
            s.iter().try_for_each(|&x| k.insert(x))?;
            Ok(k)
        };
        let build_formal = |s: &[ItemId]| -> Result<FormalSimiSketch> {
            let mut k = FormalSimiSketch::new(params);
            s.iter().try_for_each(|&x| k.insert(x))?;
            Ok(k)
        };
        bad += (build_cm(&s1)?.merge(&build_cm(&s2)?)? != build_cm(&both)?) as usize;
        bad += (build_count(&s1)?.merge(&build_count(&s2)?)? != build_count(&both)?) as usize;
        bad += (build_formal(&s1)?.merge(&build_formal(&s2)?)? != build_formal(&both)?) as usize;
    }
    Ok((bad == 0, format!("{bad} mismatches in 60 merges")))
}

fn salsa_conservation(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let params = SketchParams::new(2, 16, rng.gen())?;
    let mut s = SalsaSimiSketch::new(params)?;
    let n = 20_000u64;
    for _ in 0..n {
        s.insert(ItemId(rng.gen_range(0..64)))?;
    }
    let sums: Vec<u64> = s
        .dump()
        .iter()
        .map(|row| row.iter().map(|c| c.cm).sum())
        .collect();
    Ok((
        sums.iter().all(|&x| x == n),
        format!("row sums {sums:?}, expected {n}"),
    ))
}

fn adapter_bridge(rng: &mut ChaCha8Rng) -> Result<(bool, String)> {
    let mut bad = 0;
    for _ in 0..50 {
        let (a, b) = zipf_pair(rng)?;
        let j = multiset(&a).jaccard(&multiset(&b))?;
        let ea: ExactMultiset = expand_exact(a).iter().map(|o| o.key()).collect();
        let eb: ExactMultiset = expand_exact(b).iter().map(|o| o.key()).collect();
        if ea.jaccard(&eb)? != j {
            bad += 1;
        }
    }
    Ok((bad == 0, format!("{bad} mismatches in 50 pairs")))
}

type Check = fn(&mut ChaCha8Rng) -> Result<(bool, String)>;

/// Run every check with a fixed seed.
pub fn run_selftest(seed: u64) -> Vec<CheckOutcome> {
    let checks: [(&'static str, Check); 5] = [
        ("cm-overestimates", cm_overestimates),
        ("multiset-algebra", algebra),
        ("sketch-linearity", linearity),
        ("salsa-conservation", salsa_conservation),
        ("adapter-bridge", adapter_bridge),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    checks
        .iter()
        .map(|(name, check)| match check(&mut rng) {
            Ok((passed, detail)) => CheckOutcome {
                name,
                passed,
                detail,
            },
            Err(e) => CheckOutcome {
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes() {
        for outcome in run_selftest(1) {
            assert!(outcome.passed, "{}: {}", outcome.name, outcome.detail);
        }
    }
}
