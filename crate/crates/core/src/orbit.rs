//! Orbit-closure intersection for simultaneous conjugation.
//!
//! Two tuples have intersecting orbit closures exactly when all trace
//! invariants agree, and traces of words of length at most `m^2` generate the
//! invariant ring. The randomized test compares the symbolic trace
//! difference `T_l(X, A) - T_l(X, A')` at random integer `X`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::modular::{matmul_mod, mulmod, random_prime, rat_mod};
use crate::algebra::{format_rat, Rat};
use crate::error::{Error, Result};
use crate::invariants::{necklaces_up_to, trace_monomial, MatrixTuple, Necklace};
use crate::rng::SeedRng;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub m: usize,
    pub r: usize,
    pub max_len: usize,
    pub values: BTreeMap<Necklace, Rat>,
}

impl Signature {
    /// Values in key order.
    pub fn vector(&self) -> Vec<Rat> {
        self.values.values().cloned().collect()
    }

    /// First necklace (in key order) on which the two signatures differ.
    pub fn first_difference(&self, other: &Signature) -> Option<Necklace> {
        self.values
            .iter()
            .zip(&other.values)
            .find(|((_, a), (_, b))| a != b)
            .map(|((k, _), _)| k.clone())
    }
}

#[derive(Serialize)]
struct WireEntry {
    necklace: Vec<usize>,
    orbit_size: usize,
    value: String,
}

impl Serialize for Signature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct W {
            m: usize,
            r: usize,
            max_len: usize,
            values: Vec<WireEntry>,
        }
        W {
            m: self.m,
            r: self.r,
            max_len: self.max_len,
            values: self
                .values
                .iter()
                .map(|(n, v)| WireEntry {
                    necklace: n.canonical.letters().to_vec(),
                    orbit_size: n.orbit_size,
                    value: format_rat(v),
                })
                .collect(),
        }
        .serialize(s)
    }
}

/// `T_[a](A)` for every necklace of length `1..=max_len` (default `m^2`).
pub fn signature(a: &MatrixTuple, max_len: Option<usize>) -> Result<Signature> {
    let max_len = max_len.unwrap_or(a.m() * a.m());
    if max_len == 0 {
        return Err(Error::DimensionMismatch("max_len must be positive".into()));
    }
    let mut values = BTreeMap::new();
    for n in necklaces_up_to(a.r(), max_len) {
        let v = trace_monomial(&n.canonical, a)?;
        values.insert(n, v);
    }
    Ok(Signature { m: a.m(), r: a.r(), max_len, values })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decision {
    pub intersect: bool,
    /// For a negative answer of the signature test, the first necklace whose
    /// trace differs.
    pub witness: Option<Necklace>,
}

pub fn intersects_deterministic(a: &MatrixTuple, b: &MatrixTuple, max_len: Option<usize>) -> Result<Decision> {
    a.same_shape(b)?;
    let sa = signature(a, max_len)?;
    let sb = signature(b, max_len)?;
    let witness = sa.first_difference(&sb);
    Ok(Decision { intersect: witness.is_none(), witness })
}

/// Randomized test: for each `l = 1..=m^2`, `trials` random `X` (`m^2 x m^2`
/// integer matrices with entries in `[0, 2*l*trials*m^2)`). Returns `false`
/// as soon as a difference is nonzero.
///
/// Differences are evaluated modulo a random 61-bit prime drawn from `seed`;
/// a nonzero residue certifies a nonzero difference.
pub fn intersects_randomized(a: &MatrixTuple, b: &MatrixTuple, trials: usize, seed: u64) -> Result<bool> {
    a.same_shape(b)?;
    let (m, r) = (a.m(), a.r());
    let k = m * m;
    let n = k * m;
    let root = SeedRng::new(seed);
    let mut prng = root.split(0);
    let (p, ra, rb) = loop {
        let p = random_prime(&mut prng);
        let reduce = |t: &MatrixTuple| -> Option<Vec<Vec<u64>>> {
            t.matrices().iter().map(|x| x.flat().iter().map(|v| rat_mod(v, p)).collect()).collect()
        };
        if let (Some(ra), Some(rb)) = (reduce(a), reduce(b)) {
            break (p, ra, rb);
        }
    };
    // Sum_i X_i (x) U_i mod p.
    let kron = |xs: &[Vec<u64>], us: &[Vec<u64>]| -> Vec<u64> {
        let mut out = vec![0u64; n * n];
        for (x, u) in xs.iter().zip(us) {
            for (xi, xr) in x.chunks(k).enumerate() {
                for (xj, &xv) in xr.iter().enumerate() {
                    for ui in 0..m {
                        for uj in 0..m {
                            let cell = &mut out[(xi * m + ui) * n + xj * m + uj];
                            *cell = (*cell + mulmod(xv, u[ui * m + uj], p)) % p;
                        }
                    }
                }
            }
        }
        out
    };
    let trace = |x: &[u64]| (0..n).fold(0u64, |acc, i| (acc + x[i * n + i]) % p);
    for l in 1..=k {
        let mut rng = root.split(l as u64);
        let bound = (2 * l * trials.max(1) * k) as u64;
        for _ in 0..trials {
            let xs: Vec<Vec<u64>> = (0..r).map(|_| (0..k * k).map(|_| rng.below(bound)).collect()).collect();
            let (ma, mb) = (kron(&xs, &ra), kron(&xs, &rb));
            let (mut pa, mut pb) = (ma.clone(), mb.clone());
            for _ in 1..l {
                pa = matmul_mod(&pa, &ma, n, p);
                pb = matmul_mod(&pb, &mb, n, p);
            }
            if trace(&pa) != trace(&pb) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Mat};
    use num_traits::Zero;

    fn single(rows: &[&[i64]]) -> MatrixTuple {
        MatrixTuple::new(vec![Mat::from_i64(rows)]).unwrap()
    }

    #[test]
    fn zero_and_nilpotent_signatures() {
        let z = signature(&MatrixTuple::zeros(2, 2), None).unwrap();
        assert!(z.values.values().all(Zero::is_zero));
        assert_eq!(z.values.len(), 2 + 3 + 4 + 6);
        let n = signature(&single(&[&[0, 1], &[0, 0]]), None).unwrap();
        assert!(n.values.values().all(Zero::is_zero));
    }

    #[test]
    fn diagonal_power_sums() {
        let s = signature(&single(&[&[1, 0], &[0, 2]]), None).unwrap();
        assert_eq!(s.vector(), vec![rat(3), rat(5), rat(9), rat(17)]);
    }

    #[test]
    fn fixtures() {
        let nil = single(&[&[0, 1], &[0, 0]]);
        let zero = MatrixTuple::zeros(2, 1);
        assert!(intersects_deterministic(&nil, &zero, None).unwrap().intersect);
        assert!(intersects_randomized(&nil, &zero, 5, 0).unwrap());
        let d10 = single(&[&[1, 0], &[0, 0]]);
        let d11 = single(&[&[1, 0], &[0, 1]]);
        let dec = intersects_deterministic(&d10, &d11, None).unwrap();
        assert!(!dec.intersect);
        assert_eq!(dec.witness.unwrap().canonical.letters(), &[1]);
        assert!(!intersects_randomized(&d10, &d11, 5, 0).unwrap());
    }

    #[test]
    fn shape_mismatch() {
        let a = MatrixTuple::zeros(2, 1);
        let b = MatrixTuple::zeros(2, 2);
        assert!(matches!(intersects_deterministic(&a, &b, None), Err(Error::ShapeMismatch(_))));
        assert!(matches!(intersects_randomized(&a, &b, 1, 0), Err(Error::ShapeMismatch(_))));
    }
}
