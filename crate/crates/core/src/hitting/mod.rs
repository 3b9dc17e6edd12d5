//! Hitting sets: explicit constructions, greedy search, and the converse
//! extraction of a multilinear polynomial vanishing on a given set.

mod diag3;
mod grid;
mod hardpoly;
mod nw;
mod search;

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::rat::rat_from_u64;
use crate::algebra::Rat;
use crate::circuit::Circuit;
use crate::error::{Error, Result};

pub use diag3::{diag3_hitting_set, diag3_hitting_set_capped, diag3_level, diag3_size};
pub use grid::{grid_hitting_set, sz_points};
pub use hardpoly::{hard_poly_from_hitting_set, multilinear_monomials};
pub use nw::{nw_design, nw_hitting_set, nw_hitting_set_capped};
pub use search::{greedy_hitting_set, greedy_hitting_set_capped, hs_parameters, HsParameters};

/// Default cap on the number of points any construction may emit.
pub const DEFAULT_CAP: u64 = 1_000_000;

/// The circuit class a hitting set claims to hit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Target {
    pub class: String,
    #[serde(default)]
    pub params: BTreeMap<String, u64>,
}

impl Target {
    pub fn new<'a>(class: &str, params: impl IntoIterator<Item = (&'a str, u64)>) -> Target {
        Target { class: class.into(), params: params.into_iter().map(|(k, v)| (k.to_string(), v)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Diag3 {
        l: u32,
        e: u64,
        k: u64,
    },
    Nw {
        n: usize,
        d: u64,
        m: usize,
        universe: usize,
        grid_base: u64,
        design: Vec<Vec<usize>>,
        /// Bit length of the largest coordinate emitted.
        max_bits: u64,
    },
    Greedy {
        grid_bound: u64,
        family_size: usize,
    },
    Grid {
        base: u64,
        cap: u64,
        full_size: String,
        truncated: bool,
    },
    External {
        #[serde(default)]
        source: String,
    },
}

/// Distinct points of `N^r` in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSet", into = "RawSet")]
pub struct HittingSet {
    r: usize,
    len: usize,
    coords: Vec<u64>,
    target: Target,
    provenance: Provenance,
}

#[derive(Clone, Serialize, Deserialize)]
struct RawSet {
    r: usize,
    points: Vec<Vec<i128>>,
    #[serde(default)]
    target: Target,
    provenance: Provenance,
}

impl TryFrom<RawSet> for HittingSet {
    type Error = Error;

    fn try_from(raw: RawSet) -> Result<HittingSet> {
        let mut pts = Vec::with_capacity(raw.points.len());
        for p in raw.points {
            if p.len() != raw.r {
                return Err(Error::ArityMismatch { expected: raw.r, got: p.len() });
            }
            let mut q = Vec::with_capacity(p.len());
            for x in p {
                if x < 0 {
                    return Err(Error::NegativeCoordinate);
                }
                q.push(u64::try_from(x).map_err(|_| Error::Parse(format!("coordinate {x} exceeds 64 bits")))?);
            }
            pts.push(q);
        }
        HittingSet::new(raw.r, pts, raw.target, raw.provenance)
    }
}

impl From<HittingSet> for RawSet {
    fn from(h: HittingSet) -> RawSet {
        RawSet {
            r: h.r,
            points: h.points().map(|p| p.iter().map(|&x| x as i128).collect()).collect(),
            target: h.target,
            provenance: h.provenance,
        }
    }
}

impl HittingSet {
    /// Sorts and deduplicates `points`.
    pub fn new(r: usize, mut points: Vec<Vec<u64>>, target: Target, provenance: Provenance) -> Result<HittingSet> {
        if let Some(p) = points.iter().find(|p| p.len() != r) {
            return Err(Error::ArityMismatch { expected: r, got: p.len() });
        }
        points.sort_unstable();
        points.dedup();
        Ok(HittingSet { r, len: points.len(), coords: points.concat(), target, provenance })
    }

    /// Same as [`HittingSet::new`] for points given flat, `r` coordinates each.
    pub fn from_flat(r: usize, flat: Vec<u64>, target: Target, provenance: Provenance) -> Result<HittingSet> {
        if r == 0 {
            return Err(Error::DimensionMismatch("flat points need r >= 1".into()));
        }
        if !flat.len().is_multiple_of(r) {
            return Err(Error::ArityMismatch { expected: r, got: flat.len() % r });
        }
        let pt = |i: usize| &flat[i * r..(i + 1) * r];
        let mut idx: Vec<usize> = (0..flat.len() / r).collect();
        idx.sort_unstable_by(|&a, &b| pt(a).cmp(pt(b)));
        idx.dedup_by(|a, b| pt(*a) == pt(*b));
        let mut coords = Vec::with_capacity(idx.len() * r);
        for &i in &idx {
            coords.extend_from_slice(pt(i));
        }
        Ok(HittingSet { r, len: idx.len(), coords, target, provenance })
    }

    pub fn external(r: usize, points: Vec<Vec<u64>>, source: &str) -> Result<HittingSet> {
        HittingSet::new(r, points, Target::default(), Provenance::External { source: source.into() })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn point(&self, i: usize) -> &[u64] {
        &self.coords[i * self.r..(i + 1) * self.r]
    }

    pub fn points(&self) -> impl Iterator<Item = &[u64]> + '_ {
        (0..self.len).map(move |i| self.point(i))
    }

    pub fn rat_point(&self, i: usize) -> Vec<Rat> {
        self.point(i).iter().map(|&x| rat_from_u64(x)).collect()
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn contains(&self, p: &[u64]) -> bool {
        if p.len() != self.r {
            return false;
        }
        let (mut lo, mut hi) = (0, self.len);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.point(mid).cmp(p) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Index of the first point where the single-output `circuit` is nonzero.
    pub fn first_hit(&self, circuit: &Circuit) -> Result<Option<usize>> {
        if circuit.arity() != self.r {
            return Err(Error::ArityMismatch { expected: self.r, got: circuit.arity() });
        }
        for i in 0..self.len {
            if !circuit.eval1(&self.rat_point(i))?.is_zero() {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Indices of family members that vanish on every point.
    pub fn verify(&self, family: &[Circuit]) -> Result<Vec<usize>> {
        let mut missed = Vec::new();
        for (j, c) in family.iter().enumerate() {
            if self.first_hit(c)?.is_none() {
                missed.push(j);
            }
        }
        Ok(missed)
    }
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns `false`.
pub(crate) fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut s: Vec<usize> = (0..k).collect();
    loop {
        if !f(&s) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| s[i] < n - k + i) else {
            return;
        };
        s[i] += 1;
        for j in i + 1..k {
            s[j] = s[j - 1] + 1;
        }
    }
}

/// `base^e`, `None` on overflow.
pub(crate) fn checked_pow(base: u64, e: usize) -> Option<u64> {
    (0..e).try_fold(1u64, |acc, _| acc.checked_mul(base))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subsets_in_lex_order() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, |s| {
            seen.push(s.to_vec());
            true
        });
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut empty = 0;
        for_each_subset(3, 0, |_| {
            empty += 1;
            true
        });
        assert_eq!(empty, 1);
    }

    #[test]
    fn json_round_trip_and_checks() {
        let h = HittingSet::external(2, vec![vec![3, 1], vec![0, 2], vec![3, 1]], "test").unwrap();
        assert_eq!(h.len(), 2);
        assert_eq!(h.point(0), &[0, 2]);
        assert!(h.contains(&[3, 1]) && !h.contains(&[1, 3]));
        let s = serde_json::to_string(&h).unwrap();
        let back: HittingSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, h);
        let neg = r#"{"r":1,"points":[[-1]],"provenance":{"kind":"external"}}"#;
        let err = serde_json::from_str::<HittingSet>(neg).unwrap_err();
        assert!(err.to_string().contains("negative"));
    }
}
