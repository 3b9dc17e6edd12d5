use std::ops::{Add, Mul};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{probably_zero, EsopFlags, EsopSet, Family, InvariantSpec, SpecProvenance, Store};
use crate::algebra::Rat;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::hitting::HittingSet;
use crate::invariants::{generic_trace_circuit, necklaces, roabp_trace_circuit, MatrixTuple, Necklace};
use crate::orbit::{signature, Signature};
use crate::rng::SeedRng;

/// Evaluates `T_l(b, A) = sum over necklaces [w] of length l of
/// |[w]| tr(b_w) tr(A_w)` without building circuits.
#[derive(Debug)]
pub struct TraceEvaluator {
    pub m: usize,
    pub r: usize,
    generic: Vec<OnceLock<Circuit>>,
    necklaces: Vec<Necklace>,
    /// Necklaces of length `l` sit at `starts[l-1]..starts[l]`.
    starts: Vec<usize>,
    /// Prefix tree of the canonical words: `(parent, letter)`, letters 0-based.
    trie: Vec<(Option<usize>, usize)>,
    node_of: Vec<usize>,
}

#[derive(Clone, Debug)]
enum Ints {
    Small(Vec<i64>),
    Big(Vec<BigInt>),
}

#[derive(Clone, Debug)]
enum Wide {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

/// Per-point trace features, filled on demand.
#[derive(Default)]
pub(crate) struct FeatureCache {
    feats: Vec<Ints>,
}

fn trie_traces<T>(k: usize, mats: &[Vec<T>], trie: &[(Option<usize>, usize)], node_of: &[usize]) -> Vec<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    let mut prods: Vec<Vec<T>> = Vec::with_capacity(trie.len());
    for &(parent, letter) in trie {
        let b = &mats[letter];
        let p = match parent {
            None => b.clone(),
            Some(q) => {
                let a = &prods[q];
                let mut out = vec![T::zero(); k * k];
                for i in 0..k {
                    for t in 0..k {
                        let x = &a[i * k + t];
                        if x.is_zero() {
                            continue;
                        }
                        for j in 0..k {
                            out[i * k + j] = out[i * k + j].clone() + x.clone() * b[t * k + j].clone();
                        }
                    }
                }
                out
            }
        };
        prods.push(p);
    }
    node_of
        .iter()
        .map(|&n| (0..k).fold(T::zero(), |acc, i| acc + prods[n][i * k + i].clone()))
        .collect()
}

impl TraceEvaluator {
    fn new(m: usize, r: usize) -> TraceEvaluator {
        let k = m * m;
        let mut all = Vec::new();
        let mut starts = vec![0];
        for l in 1..=k {
            all.extend(necklaces(r, l));
            starts.push(all.len());
        }
        let mut trie: Vec<(Option<usize>, usize)> = Vec::new();
        let mut index: std::collections::HashMap<Vec<usize>, usize> = Default::default();
        let mut node_of = Vec::with_capacity(all.len());
        for n in &all {
            let letters = n.canonical.letters();
            let mut parent = None;
            for end in 1..=letters.len() {
                let key = letters[..end].to_vec();
                let id = *index.entry(key).or_insert_with(|| {
                    trie.push((parent, letters[end - 1] - 1));
                    trie.len() - 1
                });
                parent = Some(id);
            }
            node_of.push(parent.expect("nonempty word"));
        }
        TraceEvaluator { m, r, generic: (0..k).map(|_| OnceLock::new()).collect(), necklaces: all, starts, trie, node_of }
    }

    fn k(&self) -> usize {
        self.m * self.m
    }

    pub(crate) fn spec_count(&self, source: &HittingSet) -> usize {
        source.len() * self.k()
    }

    /// `(point index, l)` of spec `i`.
    pub fn locate(&self, i: usize) -> (usize, usize) {
        (i / self.k(), i % self.k() + 1)
    }

    pub fn generic_circuit(&self, l: usize) -> Result<&Circuit> {
        let cell = self.generic.get(l.wrapping_sub(1)).ok_or_else(|| Error::IndexOutOfRange(format!("l = {l}")))?;
        if let Some(c) = cell.get() {
            return Ok(c);
        }
        let c = generic_trace_circuit(self.m, self.r, l, self.k())?;
        Ok(cell.get_or_init(|| c))
    }

    /// `T_l(b, U)` as a circuit over the entries of `U`.
    pub fn spec_circuit(&self, point: &[u64], l: usize) -> Result<Circuit> {
        let fixed: Vec<(usize, Rat)> =
            point.iter().enumerate().map(|(i, &x)| (i, crate::algebra::rat::rat_from_u64(x))).collect();
        self.generic_circuit(l)?.specialize(&fixed)
    }

    fn features(&self, point: &[u64]) -> Ints {
        let k = self.k();
        let kk = k * k;
        let max = point.iter().copied().max().unwrap_or(0) as u128;
        // |tr(b_w)| <= k^l max^l.
        let bound = (0..k).try_fold(1u128, |acc, _| acc.checked_mul(k as u128)?.checked_mul(max.max(1)));
        if bound.is_some_and(|b| b < 1 << 62) {
            let mats: Vec<Vec<i64>> = (0..self.r).map(|i| point[i * kk..(i + 1) * kk].iter().map(|&x| x as i64).collect()).collect();
            Ints::Small(trie_traces(k, &mats, &self.trie, &self.node_of))
        } else {
            let mats: Vec<Vec<BigInt>> =
                (0..self.r).map(|i| point[i * kk..(i + 1) * kk].iter().map(|&x| BigInt::from(x)).collect()).collect();
            Ints::Big(trie_traces(k, &mats, &self.trie, &self.node_of))
        }
    }

    fn sig_values(&self, sig: &Signature) -> Result<Vec<Rat>> {
        self.necklaces
            .iter()
            .map(|n| sig.values.get(n).cloned().ok_or_else(|| Error::ShapeMismatch(format!("signature lacks {n}"))))
            .collect()
    }

    /// `T_l(b, A)` given the necklace signature of `A` (lengths up to `m^2`).
    pub fn value(&self, point: &[u64], l: usize, sig: &Signature) -> Result<Rat> {
        let vals = self.sig_values(sig)?;
        let f = self.features(point);
        let mut acc = Rat::zero();
        for j in self.starts[l - 1]..self.starts[l] {
            let t = match &f {
                Ints::Small(v) => BigInt::from(v[j]),
                Ints::Big(v) => v[j].clone(),
            };
            acc += Rat::from_integer(t * self.necklaces[j].orbit_size) * &vals[j];
        }
        Ok(acc)
    }

    /// Index of the first spec taking different values on `a` and `b`.
    pub(crate) fn first_separating(
        &self,
        source: &HittingSet,
        a: &MatrixTuple,
        b: &MatrixTuple,
        cache: &mut FeatureCache,
    ) -> Result<Option<usize>> {
        let k = self.k();
        let va = self.sig_values(&signature(a, Some(k))?)?;
        let vb = self.sig_values(&signature(b, Some(k))?)?;
        let diff: Vec<Rat> = va.iter().zip(&vb).zip(&self.necklaces).map(|((x, y), n)| (x - y) * Rat::from_integer(n.orbit_size.into())).collect();
        if diff.iter().all(Zero::is_zero) {
            return Ok(None);
        }
        let den = diff.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<BigInt> = diff.iter().map(|x| x.numer() * (&den / x.denom())).collect();
        let delta = widen(ints);
        let active: Vec<usize> = (1..=k).filter(|&l| (self.starts[l - 1]..self.starts[l]).any(|j| !diff[j].is_zero())).collect();
        for p in 0..source.len() {
            if cache.feats.len() <= p {
                cache.feats.push(self.features(source.point(p)));
            }
            let f = &cache.feats[p];
            for &l in &active {
                if !dot_is_zero(f, &delta, self.starts[l - 1]..self.starts[l]) {
                    return Ok(Some(p * k + l - 1));
                }
            }
        }
        Ok(None)
    }
}

impl TraceEvaluator {
    /// Specs `i` with `T_l(b, tA) != t^l T_l(b, A)`.
    pub(crate) fn scaling_violations(&self, source: &HittingSet, a: &MatrixTuple, t: &Rat) -> Result<Vec<usize>> {
        let k = self.k();
        let ta = a.map(|x| x.scale(t));
        let weighted = |x: &MatrixTuple| -> Result<(Wide, BigInt)> {
            let vals = self.sig_values(&signature(x, Some(k))?)?;
            let den = vals.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            let ints: Vec<BigInt> =
                vals.iter().zip(&self.necklaces).map(|(v, n)| v.numer() * (&den / v.denom()) * n.orbit_size).collect();
            Ok((widen(ints), den))
        };
        let (wa, da) = weighted(a)?;
        let (wt, dt) = weighted(&ta)?;
        // T_l(b, tA) / dt == t^l T_l(b, A) / da, cleared of denominators.
        let factors: Vec<(BigInt, BigInt)> = (1..=k as u32)
            .map(|l| (&da * t.denom().pow(l), &dt * t.numer().pow(l)))
            .collect();
        let mut bad = Vec::new();
        for p in 0..source.len() {
            let f = self.features(source.point(p));
            for l in 1..=k {
                let range = self.starts[l - 1]..self.starts[l];
                let (lhs, rhs) = &factors[l - 1];
                if dot(&f, &wt, range.clone()) * lhs != dot(&f, &wa, range) * rhs {
                    bad.push(p * k + l - 1);
                }
            }
        }
        Ok(bad)
    }
}

fn widen(ints: Vec<BigInt>) -> Wide {
    match ints.iter().map(|x| i128::try_from(x).ok()).collect::<Option<Vec<i128>>>() {
        Some(v) => Wide::Small(v),
        None => Wide::Big(ints),
    }
}

fn dot(f: &Ints, d: &Wide, range: std::ops::Range<usize>) -> BigInt {
    if let (Ints::Small(f), Wide::Small(d)) = (f, d) {
        let mut acc: i128 = 0;
        let fits = range.clone().all(|j| match (f[j] as i128).checked_mul(d[j]).and_then(|x| acc.checked_add(x)) {
            Some(v) => {
                acc = v;
                true
            }
            None => false,
        });
        if fits {
            return BigInt::from(acc);
        }
    }
    range
        .map(|j| {
            let x = match f {
                Ints::Small(v) => BigInt::from(v[j]),
                Ints::Big(v) => v[j].clone(),
            };
            let y = match d {
                Wide::Small(v) => BigInt::from(v[j]),
                Wide::Big(v) => v[j].clone(),
            };
            x * y
        })
        .sum()
}

fn dot_is_zero(f: &Ints, d: &Wide, range: std::ops::Range<usize>) -> bool {
    dot(f, d, range).is_zero()
}

/// `{ T_l(b, U) : b in B, 1 <= l <= m^2 }` with `B` over the entries of `r`
/// matrices of size `m^2`.
pub fn matrix_esop(m: usize, r: usize, b: &HittingSet) -> Result<EsopSet> {
    if m == 0 || r == 0 {
        return Err(Error::InfeasibleParameters("m and r must be positive".into()));
    }
    let want = r * m.pow(4);
    if b.r() != want {
        return Err(Error::ArityMismatch { expected: want, got: b.r() });
    }
    Ok(EsopSet {
        flags: EsopFlags { separating_claimed: true, strict: false },
        family: Family::Matrix { m, r },
        arity: r * m * m,
        sources: vec![b.clone()],
        store: Store::Trace(Arc::new(TraceEvaluator::new(m, r))),
        dropped: Vec::new(),
    })
}

/// `trace(prod_{j<=l} sum_i y_j^i U_i)` at every point `y` of `ys[l-1]`.
/// Identically zero specializations are dropped.
pub fn matrix_esop_roabp(m: usize, r: usize, ys: &[HittingSet]) -> Result<EsopSet> {
    if m == 0 || r == 0 {
        return Err(Error::InfeasibleParameters("m and r must be positive".into()));
    }
    let mut specs = Vec::new();
    let mut dropped = Vec::new();
    let mut rng = SeedRng::new(0x524f);
    for (j, y) in ys.iter().enumerate() {
        let l = j + 1;
        if y.r() != l {
            return Err(Error::ArityMismatch { expected: l, got: y.r() });
        }
        let generic = roabp_trace_circuit(m, r, l)?;
        for p in y.points() {
            let fixed: Vec<(usize, Rat)> = p.iter().enumerate().map(|(i, &x)| (i, crate::algebra::rat::rat_from_u64(x))).collect();
            let circuit = generic.specialize(&fixed)?;
            let provenance = SpecProvenance::Roabp { point: p.to_vec(), l };
            if circuit.is_syntactically_zero() || probably_zero(&circuit, 3, &mut rng)? {
                dropped.push(provenance);
            } else {
                specs.push(InvariantSpec { circuit, degree: l as u32, provenance });
            }
        }
    }
    EsopSet::from_specs(
        Family::Roabp { m, r },
        r * m * m,
        EsopFlags { separating_claimed: true, strict: false },
        ys.to_vec(),
        specs,
        dropped,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Mat};
    use crate::esop::esop_signature;
    use crate::hitting::grid_hitting_set;
    use crate::invariants::{generic_trace_dense, MatrixTuple};

    #[test]
    fn scaling_checked_per_spec() {
        let b = grid_hitting_set(32, 3, 50).unwrap();
        let s = matrix_esop(2, 2, &b).unwrap();
        let mut rng = SeedRng::new(9);
        let a = MatrixTuple::random(2, 2, -4, 4, &mut rng);
        let t = crate::algebra::ratio(-3, 2);
        assert!(s.scaling_violations(&a.flatten(), &t).unwrap().is_empty());
        for i in [0, 7, 101, 199] {
            assert!(s.spec(i).unwrap().scaling_holds(&a.flatten(), &t).unwrap());
        }
    }

    #[test]
    fn evaluator_matches_circuits_and_kronecker() {
        let b = grid_hitting_set(32, 3, 300).unwrap();
        let s = matrix_esop(2, 2, &b).unwrap();
        assert_eq!(s.len(), 300 * 4);
        let mut rng = SeedRng::new(5);
        for i in (0..s.len()).step_by(97) {
            let a = MatrixTuple::random(2, 2, -3, 3, &mut rng);
            let spec = s.spec(i).unwrap();
            let fast = s.eval_spec(i, &a.flatten()).unwrap();
            assert_eq!(spec.eval(&a.flatten()).unwrap(), fast);
            let SpecProvenance::Trace { ref point, l } = spec.provenance else { panic!() };
            let x = MatrixTuple::from_flat(4, 2, &point.iter().map(|&v| rat(v as i64)).collect::<Vec<_>>()).unwrap();
            assert_eq!(generic_trace_dense(&x, &a, l).unwrap(), fast);
            assert!(spec.scaling_holds(&a.flatten(), &rat(3)).unwrap());
        }
    }

    #[test]
    fn arity_checked() {
        let b = grid_hitting_set(8, 2, 10).unwrap();
        assert_eq!(matrix_esop(2, 2, &b).unwrap_err(), Error::ArityMismatch { expected: 32, got: 8 });
    }

    #[test]
    fn roabp_examples() {
        let y = HittingSet::external(1, vec![vec![1]], "t").unwrap();
        let s = matrix_esop_roabp(2, 1, &[y]).unwrap();
        let a = MatrixTuple::new(vec![Mat::diag(&[rat(1), rat(0)])]).unwrap();
        let b = MatrixTuple::new(vec![Mat::diag(&[rat(1), rat(1)])]).unwrap();
        assert_eq!(esop_signature(&s, &a).unwrap(), vec![rat(1)]);
        assert_eq!(esop_signature(&s, &b).unwrap(), vec![rat(2)]);
        let zero = HittingSet::external(2, vec![vec![0, 0], vec![1, 2]], "t").unwrap();
        let one = HittingSet::external(1, vec![vec![2]], "t").unwrap();
        let s = matrix_esop_roabp(2, 2, &[one, zero]).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.dropped, vec![SpecProvenance::Roabp { point: vec![0, 0], l: 2 }]);
    }
}
