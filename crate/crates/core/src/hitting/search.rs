use num_traits::Zero;
use serde::Serialize;

use super::{checked_pow, HittingSet, Provenance, Target, DEFAULT_CAP};
use crate::algebra::rat::rat_from_u64;
use crate::algebra::{MPoly, Rat};
use crate::error::{Error, Result};

/// Grid parameters of the existence argument for hitting sets against
/// circuits of size `s` and degree `d` in `r` variables: a random subset of
/// `{0..u-1}^r` of the given size is a hitting set with high probability.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HsParameters {
    pub grid_bound: u128,
    pub size_bound: u128,
}

/// `u = 2 s (d+1)^2` and size `6 (s+1+r)^2`.
pub fn hs_parameters(r: u64, s: u64, d: u64) -> HsParameters {
    let (r, s, d) = (r as u128, s as u128, d as u128);
    HsParameters { grid_bound: 2 * s * (d + 1) * (d + 1), size_bound: 6 * (s + 1 + r) * (s + 1 + r) }
}

pub fn greedy_hitting_set(r: usize, family: &[MPoly], u: u64) -> Result<HittingSet> {
    greedy_hitting_set_capped(r, family, u, DEFAULT_CAP)
}

/// Greedy set cover over `{0..u-1}^r`: repeatedly takes the first grid point
/// (lexicographically) that is nonzero on the most members not yet hit.
pub fn greedy_hitting_set_capped(r: usize, family: &[MPoly], u: u64, cap: u64) -> Result<HittingSet> {
    if u == 0 {
        return Err(Error::InfeasibleParameters("grid bound u must be at least 1".into()));
    }
    for (j, f) in family.iter().enumerate() {
        if f.nvars() != r {
            return Err(Error::VariableMismatch(format!("member {j} has {} variables, expected {r}", f.nvars())));
        }
        if f.is_zero() {
            return Err(Error::ZeroMember { member: j });
        }
    }
    let target = Target::new("family", [("r", r as u64), ("members", family.len() as u64)]);
    let prov = Provenance::Greedy { grid_bound: u, family_size: family.len() };
    if family.is_empty() {
        return HittingSet::new(r, Vec::new(), target, prov);
    }
    let size = checked_pow(u, r).filter(|&s| s <= cap).ok_or_else(|| Error::ExplosionGuard {
        what: format!("grid {{0..{}}}^{r}", u - 1),
        size: num_bigint::BigUint::from(u).pow(r as u32).to_string(),
        cap,
    })? as usize;
    let grid_point = |mut idx: usize| -> Vec<u64> {
        let mut p = vec![0u64; r];
        for slot in p.iter_mut().rev() {
            *slot = (idx as u64) % u;
            idx /= u as usize;
        }
        p
    };
    // hits[i] = members nonzero at grid point i.
    let mut hits: Vec<Vec<usize>> = Vec::with_capacity(size);
    let mut hittable = vec![false; family.len()];
    for i in 0..size {
        let pt: Vec<Rat> = grid_point(i).into_iter().map(rat_from_u64).collect();
        let mut h = Vec::new();
        for (j, f) in family.iter().enumerate() {
            if !f.eval(&pt)?.is_zero() {
                h.push(j);
                hittable[j] = true;
            }
        }
        hits.push(h);
    }
    if let Some(member) = hittable.iter().position(|&b| !b) {
        return Err(Error::Unhittable { member });
    }
    let mut done = vec![false; family.len()];
    let mut remaining = family.len();
    let mut chosen = Vec::new();
    while remaining > 0 {
        let (best, _) = hits
            .iter()
            .enumerate()
            .map(|(i, h)| (i, h.iter().filter(|&&j| !done[j]).count()))
            .fold((0, 0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        for &j in &hits[best] {
            if !done[j] {
                done[j] = true;
                remaining -= 1;
            }
        }
        chosen.push(grid_point(best));
    }
    HittingSet::new(r, chosen, target, prov)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{indexed_vars, rat};

    #[test]
    fn single_point_hits_all() {
        let v = indexed_vars("x", 2);
        let x1 = MPoly::var(&v, 0);
        let x2 = MPoly::var(&v, 1);
        let fam = vec![x1.clone(), x2.clone(), &x1 + &x2];
        let h = greedy_hitting_set(2, &fam, 2).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.point(0), &[1, 1]);
        assert!(greedy_hitting_set(2, &[], 2).unwrap().is_empty());
        assert_eq!(greedy_hitting_set(2, &[MPoly::zero(&v)], 2), Err(Error::ZeroMember { member: 0 }));
        let sq = &(&x1 * &x1) - &x1;
        assert_eq!(greedy_hitting_set(2, &[x1.clone(), sq], 2), Err(Error::Unhittable { member: 1 }));
        assert!(greedy_hitting_set(2, &[x1.scale(&rat(2))], 3).is_ok());
    }

    #[test]
    fn parameters() {
        let p = hs_parameters(2, 3, 1);
        assert_eq!(p.grid_bound, 24);
        assert_eq!(p.size_bound, 216);
    }
}
