use num_bigint::BigUint;

use super::{for_each_subset, HittingSet, Provenance, Target};
use crate::error::{Error, Result};
use crate::rng::SeedRng;

/// The grid `{0..base-1}^r`. When it has more than `cap` points it is
/// truncated to the first `cap` points in graded-sparse order: by number of
/// nonzero entries, then support (lexicographic), then values
/// (lexicographic). The result is sorted lexicographically as usual.
pub fn grid_hitting_set(r: usize, base: u64, cap: u64) -> Result<HittingSet> {
    if r == 0 || base == 0 {
        return Err(Error::InfeasibleParameters("grid needs r >= 1 and base >= 1".into()));
    }
    let full = BigUint::from(base).pow(r as u32);
    let truncated = full > BigUint::from(cap);
    let want = if truncated { cap as usize } else { usize::try_from(&full).expect("fits under cap") };
    let mut flat: Vec<u64> = Vec::with_capacity(want * r);
    let mut count = 0usize;
    for j in 0..=r {
        if count >= want {
            break;
        }
        for_each_subset(r, j, |support| {
            let mut vals = vec![1u64; j];
            loop {
                if count >= want {
                    return false;
                }
                let start = flat.len();
                flat.resize(start + r, 0);
                for (&i, &v) in support.iter().zip(&vals) {
                    flat[start + i] = v;
                }
                count += 1;
                let Some(pos) = (0..j).rev().find(|&t| vals[t] + 1 < base) else {
                    return true;
                };
                vals[pos] += 1;
                for v in vals[pos + 1..].iter_mut() {
                    *v = 1;
                }
            }
        });
    }
    let target = Target::new("grid", [("r", r as u64), ("base", base)]);
    let prov = Provenance::Grid { base, cap, full_size: full.to_string(), truncated };
    HittingSet::from_flat(r, flat, target, prov)
}

/// `count` points uniform in `{0..2*d*count-1}^r`.
pub fn sz_points(r: usize, d: u64, count: usize, seed: u64) -> Vec<Vec<u64>> {
    let bound = (2 * d.max(1) * count.max(1) as u64).max(1);
    let mut rng = SeedRng::new(seed);
    (0..count).map(|_| (0..r).map(|_| rng.below(bound)).collect()).collect()
}
