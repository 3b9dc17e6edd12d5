use std::collections::BTreeMap;

use num_bigint::{BigInt, RandBigInt};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{probably_zero, EsopFlags, EsopSet, Family, InvariantSpec, SpecProvenance, Store};
use crate::algebra::rat::rat_from_u64;
use crate::algebra::{format_rat, make_vars, MPoly, Rat};
use crate::circuit::{from_mpoly, homogeneous_components, Builder, Circuit, NodeId};
use crate::error::{Error, Result};
use crate::hitting::HittingSet;
use crate::invariants::sign;
use crate::rng::SeedRng;

use itertools::Itertools;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarietyDescriptor {
    pub name: String,
    pub params: BTreeMap<String, u64>,
}

/// Closure of the image of `v -> F(v, .)`, given by a circuit `F(v, x)` over
/// `arity_v` inputs `v` followed by `arity_x` inputs `x`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitVariety {
    pub arity_v: usize,
    pub arity_x: usize,
    pub circuit: Circuit,
    pub degree_in_v: u32,
    pub descriptor: VarietyDescriptor,
}

impl ExplicitVariety {
    pub fn new(arity_v: usize, arity_x: usize, circuit: Circuit, degree_in_v: u32, descriptor: VarietyDescriptor) -> Result<Self> {
        if circuit.arity() != arity_v + arity_x {
            return Err(Error::ArityMismatch { expected: arity_v + arity_x, got: circuit.arity() });
        }
        let true_degree = circuit.degree_bound_in(&(0..arity_v).collect::<Vec<_>>()).into_iter().max().unwrap_or(0);
        if true_degree > u64::from(degree_in_v) {
            return Err(Error::DegreeCapTooSmall { cap: degree_in_v, needed: true_degree as u32 });
        }
        Ok(ExplicitVariety { arity_v, arity_x, circuit, degree_in_v, descriptor })
    }

    /// `F(v, x)` expanded over `v1.., x1..`.
    pub fn expand(&self, limit: usize) -> Result<MPoly> {
        let vars = make_vars((1..=self.arity_v).map(|i| format!("v{i}")).chain((1..=self.arity_x).map(|i| format!("x{i}"))));
        Ok(self.circuit.to_mpoly_with(&vars, limit)?.remove(0))
    }

    /// Number of distinct monomials `g_j(x)` in `F = sum_j f_j(v) g_j(x)`.
    pub fn x_monomial_count(&self, limit: usize) -> Result<usize> {
        let f = self.expand(limit)?;
        let xs: Vec<usize> = (self.arity_v..self.arity_v + self.arity_x).collect();
        Ok(f.split_by(&xs).len())
    }

    /// Degree-`c` part in `v` of `F(v, b)`, as a circuit over `v`.
    pub fn component_at(&self, b: &[u64], c: u32) -> Result<Circuit> {
        if b.len() != self.arity_x {
            return Err(Error::ArityMismatch { expected: self.arity_x, got: b.len() });
        }
        let fixed: Vec<(usize, Rat)> = b.iter().enumerate().map(|(i, &x)| (self.arity_v + i, rat_from_u64(x))).collect();
        let g = self.circuit.specialize(&fixed)?;
        let v: Vec<usize> = (0..self.arity_v).collect();
        let mut comps = homogeneous_components(&g, &v, self.degree_in_v)?;
        if c > self.degree_in_v {
            return Err(Error::IndexOutOfRange(format!("component {c} above degree {}", self.degree_in_v)));
        }
        Ok(comps.swap_remove(c as usize).simplify())
    }
}

fn leibniz_det(b: &mut Builder, y: &[Vec<NodeId>]) -> NodeId {
    let m = y.len();
    let mut terms = Vec::new();
    for perm in (0..m).permutations(m) {
        let factors: Vec<NodeId> = (0..m).map(|i| y[i][perm[i]]).collect();
        let t = b.product(&factors);
        terms.push(if sign(&perm) > 0 { t } else { b.neg(t) });
    }
    b.sum(&terms)
}

/// Division-free determinant by dynamic programming over the set of used
/// columns: row `i` picks a column not in the set.
fn subset_dp_det(b: &mut Builder, y: &[Vec<NodeId>]) -> NodeId {
    let m = y.len();
    let mut dp: Vec<Option<NodeId>> = vec![None; 1 << m];
    dp[0] = Some(b.one());
    for mask in 0..(1usize << m) {
        let Some(cur) = dp[mask] else { continue };
        let i = mask.count_ones() as usize;
        if i == m {
            continue;
        }
        for j in 0..m {
            if mask & (1 << j) != 0 {
                continue;
            }
            // Inversions added by placing column j after the columns in mask.
            let above = (mask >> (j + 1)).count_ones();
            let t = b.mul(cur, y[i][j]);
            let t = if above % 2 == 0 { t } else { b.neg(t) };
            let next = mask | (1 << j);
            dp[next] = Some(match dp[next] {
                None => t,
                Some(prev) => b.add(prev, t),
            });
        }
    }
    dp[(1 << m) - 1].expect("full mask reached")
}

/// `F(v, x) = det(v X)`: `v` is an `m^2 x m^2` matrix (row-major inputs
/// first), `X` the `m^2` entries of an `m x m` matrix read as a vector and the
/// product reshaped row-major.
pub fn delta_det_variety(m: usize) -> Result<ExplicitVariety> {
    if m == 0 {
        return Err(Error::InfeasibleParameters("m must be positive".into()));
    }
    let k = m * m;
    let mut b = Builder::new(k * k + k);
    let x: Vec<NodeId> = (0..k).map(|t| b.input(k * k + t)).collect();
    let y: Vec<Vec<NodeId>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let row = i * m + j;
                    let terms: Vec<NodeId> = (0..k)
                        .map(|t| {
                            let v = b.input(row * k + t);
                            b.mul(v, x[t])
                        })
                        .collect();
                    b.sum(&terms)
                })
                .collect()
        })
        .collect();
    let out = if m <= 3 { leibniz_det(&mut b, &y) } else { subset_dp_det(&mut b, &y) };
    let desc = VarietyDescriptor { name: "delta_det".into(), params: BTreeMap::from([("m".to_string(), m as u64)]) };
    ExplicitVariety::new(k * k, k, b.finish(vec![out]), m as u32, desc)
}

/// `F(v, x) = sum_mu a_mu mu(v) mu(x)` over the monomials of `p`.
pub fn toric_variety(p: &MPoly) -> Result<ExplicitVariety> {
    if p.is_zero() {
        return Err(Error::InfeasibleParameters("p must be nonzero".into()));
    }
    if !p.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let n = p.nvars();
    let vars = make_vars(p.vars().iter().map(|s| format!("v_{s}")).chain(p.vars().iter().cloned()));
    let mut f = MPoly::zero(&vars);
    for (e, c) in p.terms() {
        f.add_term(e.iter().chain(e.iter()).copied().collect(), c.clone());
    }
    let desc = VarietyDescriptor {
        name: "toric".into(),
        params: BTreeMap::from([("n".to_string(), n as u64), ("degree".to_string(), u64::from(p.total_degree()))]),
    };
    ExplicitVariety::new(n, n, from_mpoly(&f), p.total_degree(), desc)
}

/// `{ F(v, b)_c : b in T, 1 <= c <= degree_in_v }`, dropping components
/// that vanish at random probes.
pub fn strict_esop(w: &ExplicitVariety, t: &HittingSet) -> Result<EsopSet> {
    if t.r() != w.arity_x {
        return Err(Error::ArityMismatch { expected: w.arity_x, got: t.r() });
    }
    let mut rng = SeedRng::new(0x5354);
    let mut specs = Vec::new();
    let mut dropped = Vec::new();
    for b in t.points() {
        for c in 1..=w.degree_in_v {
            let circuit = w.component_at(b, c)?;
            let provenance = SpecProvenance::Strict { point: b.to_vec(), c };
            if circuit.is_syntactically_zero() || probably_zero(&circuit, 3, &mut rng)? {
                dropped.push(provenance);
            } else {
                specs.push(InvariantSpec { circuit, degree: c, provenance });
            }
        }
    }
    EsopSet::from_specs(
        Family::Strict { variety: w.descriptor.clone(), degree_in_v: w.degree_in_v },
        w.arity_v,
        EsopFlags { separating_claimed: false, strict: true },
        vec![t.clone()],
        specs,
        dropped,
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroLocusReport {
    pub trials: usize,
    /// Sampled `v` whose image point is nonzero.
    pub tested: usize,
    pub passed: bool,
    pub witness: Option<Vec<String>>,
}

/// For random `v` with `F(v, .)` not identically zero, some spec must be
/// nonzero at `v`.
pub fn zero_locus_check(w: &ExplicitVariety, s: &EsopSet, trials: usize, seed: u64) -> Result<ZeroLocusReport> {
    if s.arity != w.arity_v {
        return Err(Error::ArityMismatch { expected: w.arity_v, got: s.arity });
    }
    let root = SeedRng::new(seed);
    let mut tested = 0;
    for trial in 0..trials {
        let mut rng = root.split(trial as u64);
        let v: Vec<Rat> = (0..w.arity_v).map(|_| rng.rat_int(-2, 2)).collect();
        let deg_x = w.circuit.degree_bound_in(&(w.arity_v..w.arity_v + w.arity_x).collect::<Vec<_>>())[0];
        let range = 1000 * (deg_x + 1);
        let mut nonzero = false;
        for _ in 0..3 {
            let mut pt = v.clone();
            pt.extend((0..w.arity_x).map(|_| rat_from_u64(rng.below(range))));
            if !w.circuit.eval1(&pt)?.is_zero() {
                nonzero = true;
                break;
            }
        }
        if !nonzero {
            continue;
        }
        tested += 1;
        let mut hit = false;
        for i in 0..s.len() {
            if !s.eval_spec(i, &v)?.is_zero() {
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(ZeroLocusReport { trials, tested, passed: false, witness: Some(v.iter().map(format_rat).collect()) });
        }
    }
    Ok(ZeroLocusReport { trials, tested, passed: true, witness: None })
}

/// `count` linear forms in `t` coordinates with random integer coefficients
/// of at most `bits` bits (sign included).
pub fn random_linear_forms(t: usize, count: usize, bits: u64, seed: u64) -> Vec<Vec<BigInt>> {
    let mut rng = SeedRng::new(seed);
    let hi = BigInt::one() << bits;
    (0..count).map(|_| (0..t).map(|_| rng.inner().gen_bigint_range(&-&hi, &hi)).collect()).collect()
}

impl EsopSet {
    /// Specs `L_r(s_1, .., s_t)` for the given linear forms; all specs must
    /// have the same degree.
    pub fn combine(&self, forms: &[Vec<BigInt>]) -> Result<EsopSet> {
        let Store::Listed(specs) = &self.store else {
            return Err(Error::InfeasibleParameters("combine needs listed specs".into()));
        };
        if specs.iter().map(|s| s.degree).dedup().count() > 1 {
            return Err(Error::NotHomogeneous);
        }
        let degree = specs.first().map_or(0, |s| s.degree);
        let mut out = Vec::with_capacity(forms.len());
        for (j, form) in forms.iter().enumerate() {
            if form.len() != specs.len() {
                return Err(Error::ArityMismatch { expected: specs.len(), got: form.len() });
            }
            let mut b = Builder::new(self.arity);
            let mut terms = Vec::new();
            for (s, a) in specs.iter().zip(form) {
                if a.is_zero() {
                    continue;
                }
                let node = b.embed(&s.circuit, |b, i| b.input(i))[0];
                terms.push((node, Rat::from_integer(a.clone())));
            }
            let root = b.linear(&terms);
            out.push(InvariantSpec {
                circuit: b.finish(vec![root]),
                degree,
                provenance: SpecProvenance::Strict { point: vec![j as u64], c: degree },
            });
        }
        EsopSet::from_specs(self.family.clone(), self.arity, self.flags, self.sources.clone(), out, Vec::new())
    }
}
