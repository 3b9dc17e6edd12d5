use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, ToPrimitive};

use super::{checked_pow, HittingSet, Provenance, Target, DEFAULT_CAP};
use crate::algebra::rat::{is_integer, rat_from_u64};
use crate::algebra::{MPoly, Rat};
use crate::error::{Error, Result};
use crate::rng::SeedRng;

fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

fn max_intersection(sets: &[Vec<usize>]) -> usize {
    let mut worst = 0;
    for (i, a) in sets.iter().enumerate() {
        let sa: BTreeSet<_> = a.iter().collect();
        for b in &sets[i + 1..] {
            worst = worst.max(b.iter().filter(|x| sa.contains(x)).count());
        }
    }
    worst
}

/// Sets `{(i, f(i)) : i < m}` for the first `n` polynomials `f` over `F_q`
/// of degree at most `t`, element `(i, y)` encoded as `i * width + fold(y)`.
fn polynomial_design(n: usize, m: usize, q: usize, width: usize) -> Vec<Vec<usize>> {
    let mut t = 0;
    while (q as u128).pow(t as u32 + 1) < n as u128 {
        t += 1;
    }
    (0..n)
        .map(|idx| {
            let mut coeffs = Vec::with_capacity(t + 1);
            let mut rest = idx;
            for _ in 0..=t {
                coeffs.push(rest % q);
                rest /= q;
            }
            let mut set: Vec<usize> = (0..m)
                .map(|i| {
                    let y = coeffs.iter().rev().fold(0, |acc, &c| (acc * i + c) % q);
                    i * width + y % width
                })
                .collect();
            set.sort_unstable();
            set
        })
        .collect()
}

fn random_design(n: usize, m: usize, bound: usize) -> Option<Vec<Vec<usize>>> {
    let universe = m * m;
    let mut rng = SeedRng::new(0x4e57);
    let mut sets: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut attempts = 0;
    while sets.len() < n {
        attempts += 1;
        if attempts > 500 * n {
            return None;
        }
        let mut pool: Vec<usize> = (0..universe).collect();
        for i in 0..m {
            let j = i + rng.below((universe - i) as u64) as usize;
            pool.swap(i, j);
        }
        let mut cand = pool[..m].to_vec();
        cand.sort_unstable();
        let ok = sets.iter().all(|s| s.iter().filter(|x| cand.binary_search(x).is_ok()).count() <= bound);
        if ok && !sets.contains(&cand) {
            sets.push(cand);
        }
    }
    Some(sets)
}

/// Relabels the union of the sets as `0..l` preserving order.
fn compress(sets: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let union: BTreeMap<usize, usize> =
        sets.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().enumerate().map(|(i, x)| (x, i)).collect();
    sets.into_iter().map(|s| s.into_iter().map(|x| union[&x]).collect()).collect()
}

/// `n` subsets of `[l]` (0-based), each of size `m`, with pairwise
/// intersections at most `ceil(log2 n)`.
///
/// The polynomial-graph design over the least prime `q >= m` lives on
/// `m * q` elements. When that exceeds `m^2` the values are folded mod `m`,
/// and failing that a seeded search inside `[m^2]` is tried; if both break
/// the intersection bound the unfolded design is returned.
pub fn nw_design(n: usize, m: usize) -> Result<Vec<Vec<usize>>> {
    let bound = ceil_log2(n);
    if n == 0 || m == 0 || m < bound + 1 {
        return Err(Error::InfeasibleParameters(format!(
            "design with n={n} sets of size m={m} needs n >= 1 and m >= ceil(log2 n) + 1 = {}",
            bound + 1
        )));
    }
    let q = (m.max(2)..).find(|&q| is_prime(q)).expect("primes are unbounded");
    let plain = polynomial_design(n, m, q, q);
    if m * q <= m * m || n == 1 {
        return Ok(compress(plain));
    }
    let folded = polynomial_design(n, m, q, m);
    let distinct = folded.iter().collect::<BTreeSet<_>>().len() == n;
    if distinct && max_intersection(&folded) <= bound {
        return Ok(compress(folded));
    }
    if let Some(found) = random_design(n, m, bound) {
        return Ok(compress(found));
    }
    Ok(compress(plain))
}

pub fn nw_hitting_set(n: usize, d: u64, m: usize, p: &MPoly) -> Result<HittingSet> {
    nw_hitting_set_capped(n, d, m, p, DEFAULT_CAP)
}

/// `{ (p(a|R_1), ..., p(a|R_n)) : a in {1..D}^l }` with `D = d m + 1`.
pub fn nw_hitting_set_capped(n: usize, d: u64, m: usize, p: &MPoly, cap: u64) -> Result<HittingSet> {
    if p.nvars() != m {
        return Err(Error::VariableMismatch(format!("polynomial has {} variables, expected {m}", p.nvars())));
    }
    if p.is_zero() || !p.is_multilinear() {
        return Err(Error::InfeasibleParameters("p must be a nonzero multilinear polynomial".into()));
    }
    let design = nw_design(n, m)?;
    let l = design.iter().flatten().max().map_or(0, |&x| x + 1);
    let base = d
        .checked_mul(m as u64)
        .and_then(|x| x.checked_add(1))
        .ok_or_else(|| Error::InfeasibleParameters("D = d m + 1 overflows".into()))?;
    let size = checked_pow(base, l).filter(|&s| s <= cap).ok_or_else(|| Error::ExplosionGuard {
        what: format!("NW grid [{base}]^{l}"),
        size: num_bigint::BigUint::from(base).pow(l as u32).to_string(),
        cap,
    })?;
    let mut a = vec![1u64; l];
    let mut flat = Vec::with_capacity(size as usize * n);
    let mut max_bits = 0u64;
    for _ in 0..size {
        for set in &design {
            let sub: Vec<Rat> = set.iter().map(|&j| rat_from_u64(a[j])).collect();
            let v = p.eval(&sub)?;
            if v.is_negative() {
                return Err(Error::NegativeCoordinate);
            }
            if !is_integer(&v) {
                return Err(Error::InfeasibleParameters(format!("p takes the non-integer value {v}")));
            }
            let x = v.to_integer();
            max_bits = max_bits.max(x.bits());
            flat.push(x.to_u64().ok_or_else(|| Error::ExplosionGuard {
                what: "NW point coordinate".into(),
                size: format!("{} bits", x.bits()),
                cap: 64,
            })?);
        }
        if let Some(pos) = (0..l).rev().find(|&t| a[t] < base) {
            a[pos] += 1;
            for x in a[pos + 1..].iter_mut() {
                *x = 1;
            }
        }
    }
    let target = Target::new("nw", [("n", n as u64), ("d", d), ("m", m as u64)]);
    let prov = Provenance::Nw { n, d, m, universe: l, grid_base: base, design, max_bits };
    HittingSet::from_flat(n, flat, target, prov)
}
