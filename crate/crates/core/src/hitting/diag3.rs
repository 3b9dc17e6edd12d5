use super::{for_each_subset, HittingSet, Provenance, Target, DEFAULT_CAP};
use crate::error::{Error, Result};

/// Least `l` with `2^l > k * e`.
pub fn diag3_level(e: u64, k: u64) -> u32 {
    let ke = (k as u128) * (e as u128);
    (0..=128u32).find(|&l| l >= 128 || (1u128 << l) > ke).unwrap_or(128)
}

/// Number of points of [`diag3_hitting_set`]: `sum_{j <= min(l, r)} C(r, j) e^j`,
/// saturating at `u128::MAX`.
pub fn diag3_size(r: usize, e: u64, k: u64) -> u128 {
    let top = (diag3_level(e, k) as usize).min(r);
    let mut total: u128 = 0;
    let mut binom: u128 = 1;
    let mut epow: u128 = 1;
    for j in 0..=top {
        if j > 0 {
            binom = binom.saturating_mul((r - j + 1) as u128) / j as u128;
            epow = epow.saturating_mul(e as u128);
        }
        total = total.saturating_add(binom.saturating_mul(epow));
    }
    total
}

/// All vectors in `{0..e}^r` with at most `min(l, r)` nonzero entries, where
/// `l` is least with `2^l > k e`. Hits every nonzero sum of at most `k`
/// powers of affine forms in `r` variables of degree at most `e`.
pub fn diag3_hitting_set(r: usize, e: u64, k: u64) -> Result<HittingSet> {
    diag3_hitting_set_capped(r, e, k, DEFAULT_CAP)
}

pub fn diag3_hitting_set_capped(r: usize, e: u64, k: u64, cap: u64) -> Result<HittingSet> {
    if r == 0 || e == 0 || k == 0 {
        return Err(Error::InfeasibleParameters("r, e and k must be at least 1".into()));
    }
    let size = diag3_size(r, e, k);
    if size > cap as u128 {
        return Err(Error::ExplosionGuard { what: "diagonal depth-3 hitting set".into(), size: size.to_string(), cap });
    }
    let l = diag3_level(e, k);
    let mut flat = Vec::with_capacity(size as usize * r);
    for j in 0..=(l as usize).min(r) {
        for_each_subset(r, j, |support| {
            let mut vals = vec![1u64; j];
            loop {
                let mut p = vec![0u64; r];
                for (&i, &v) in support.iter().zip(&vals) {
                    p[i] = v;
                }
                flat.extend(p);
                let Some(pos) = (0..j).rev().find(|&t| vals[t] < e) else {
                    break;
                };
                vals[pos] += 1;
                for v in vals[pos + 1..].iter_mut() {
                    *v = 1;
                }
            }
            true
        });
    }
    let target = Target::new("diagonal-depth-3", [("r", r as u64), ("e", e), ("k", k)]);
    HittingSet::from_flat(r, flat, target, Provenance::Diag3 { l, e, k })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_examples() {
        assert_eq!(diag3_level(3, 2), 3);
        let h = diag3_hitting_set(3, 3, 2).unwrap();
        assert_eq!(h.len(), 64);
        let h = diag3_hitting_set(10, 1, 1).unwrap();
        assert_eq!(h.len(), 11);
        assert_eq!(diag3_size(10, 1, 1), 11);
        assert_eq!(diag3_size(3, 3, 2), 64);
    }

    #[test]
    fn guarded() {
        assert!(matches!(diag3_hitting_set_capped(20, 4, 3, 1000), Err(Error::ExplosionGuard { .. })));
    }
}
