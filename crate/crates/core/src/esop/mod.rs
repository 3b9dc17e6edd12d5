//! Explicit systems of parameters: invariants indexed by the points of a
//! hitting set, together with sample-based checks of separation and of the
//! zero locus.

mod matrix;
mod variety;

use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebra::Rat;
use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::hitting::HittingSet;
use crate::invariants::{random_invertible, MatrixTuple};
use crate::orbit::{intersects_deterministic, signature, Signature};
use crate::rng::SeedRng;
use crate::smt::RepSpec;

pub use matrix::{matrix_esop, matrix_esop_roabp, TraceEvaluator};
pub use variety::{
    delta_det_variety, random_linear_forms, strict_esop, toric_variety, zero_locus_check, ExplicitVariety,
    VarietyDescriptor, ZeroLocusReport,
};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EsopFlags {
    pub separating_claimed: bool,
    pub strict: bool,
}

/// Which point and degree index produced a spec.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpecProvenance {
    Trace { point: Vec<u64>, l: usize },
    Roabp { point: Vec<u64>, l: usize },
    Strict { point: Vec<u64>, c: u32 },
    Hilbert { point: Vec<u64>, c: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantSpec {
    pub circuit: Circuit,
    pub degree: u32,
    pub provenance: SpecProvenance,
}

impl InvariantSpec {
    pub fn eval(&self, point: &[Rat]) -> Result<Rat> {
        self.circuit.eval1(point)
    }

    /// `s(t v) = t^degree s(v)`.
    pub fn scaling_holds(&self, point: &[Rat], t: &Rat) -> Result<bool> {
        let scaled: Vec<Rat> = point.iter().map(|x| x * t).collect();
        let lhs = self.eval(&scaled)?;
        let rhs = self.eval(point)? * crate::algebra::rat::pow_rat(t, self.degree);
        Ok(lhs == rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    Matrix { m: usize, r: usize },
    Roabp { m: usize, r: usize },
    Strict { variety: VarietyDescriptor, degree_in_v: u32 },
    Hilbert { rep: RepSpec, c_max: usize, derksen_bound: String },
}

#[derive(Clone, Debug)]
enum Store {
    Listed(Vec<InvariantSpec>),
    Trace(Arc<TraceEvaluator>),
}

/// A set of invariant specs over the coordinates of `V` (`arity` of them).
/// Matrix families keep their specs implicit: spec `i` is `T_l(b, U)` for
/// the point `b` with index `i / m^2` and `l = i % m^2 + 1`.
#[derive(Clone, Debug)]
pub struct EsopSet {
    pub flags: EsopFlags,
    pub family: Family,
    pub arity: usize,
    pub sources: Vec<HittingSet>,
    store: Store,
    /// Specs found to be identically zero.
    pub dropped: Vec<SpecProvenance>,
}

impl PartialEq for EsopSet {
    fn eq(&self, other: &Self) -> bool {
        self.flags == other.flags
            && self.family == other.family
            && self.arity == other.arity
            && self.sources == other.sources
            && self.dropped == other.dropped
            && self.len() == other.len()
            && match (&self.store, &other.store) {
                (Store::Listed(a), Store::Listed(b)) => a == b,
                (Store::Trace(_), Store::Trace(_)) => true,
                _ => false,
            }
    }
}

impl EsopSet {
    pub fn from_specs(
        family: Family,
        arity: usize,
        flags: EsopFlags,
        sources: Vec<HittingSet>,
        specs: Vec<InvariantSpec>,
        dropped: Vec<SpecProvenance>,
    ) -> Result<EsopSet> {
        if let Some(s) = specs.iter().find(|s| s.circuit.arity() != arity) {
            return Err(Error::ArityMismatch { expected: arity, got: s.circuit.arity() });
        }
        Ok(EsopSet { flags, family, arity, sources, store: Store::Listed(specs), dropped })
    }

    pub fn len(&self) -> usize {
        match &self.store {
            Store::Listed(v) => v.len(),
            Store::Trace(t) => t.spec_count(&self.sources[0]),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn provenance(&self, i: usize) -> SpecProvenance {
        match &self.store {
            Store::Listed(v) => v[i].provenance.clone(),
            Store::Trace(t) => {
                let (p, l) = t.locate(i);
                SpecProvenance::Trace { point: self.sources[0].point(p).to_vec(), l }
            }
        }
    }

    pub fn spec(&self, i: usize) -> Result<InvariantSpec> {
        match &self.store {
            Store::Listed(v) => v.get(i).cloned().ok_or_else(|| Error::IndexOutOfRange(format!("spec {i} of {}", v.len()))),
            Store::Trace(t) => {
                if i >= self.len() {
                    return Err(Error::IndexOutOfRange(format!("spec {i} of {}", self.len())));
                }
                let (p, l) = t.locate(i);
                let point = self.sources[0].point(p);
                Ok(InvariantSpec {
                    circuit: t.spec_circuit(point, l)?,
                    degree: l as u32,
                    provenance: SpecProvenance::Trace { point: point.to_vec(), l },
                })
            }
        }
    }

    /// Materialized specs; refuses more than `limit`.
    pub fn specs(&self, limit: usize) -> Result<Vec<InvariantSpec>> {
        if self.len() > limit {
            return Err(Error::ExplosionGuard { what: "listing specs".into(), size: self.len().to_string(), cap: limit as u64 });
        }
        (0..self.len()).map(|i| self.spec(i)).collect()
    }

    pub fn trace_evaluator(&self) -> Option<&TraceEvaluator> {
        match &self.store {
            Store::Trace(t) => Some(t),
            Store::Listed(_) => None,
        }
    }

    /// Indices of specs violating `f(t p) = t^deg f(p)`.
    pub fn scaling_violations(&self, point: &[Rat], t: &Rat) -> Result<Vec<usize>> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: point.len() });
        }
        match &self.store {
            Store::Listed(v) => {
                let mut bad = Vec::new();
                for (i, spec) in v.iter().enumerate() {
                    if !spec.scaling_holds(point, t)? {
                        bad.push(i);
                    }
                }
                Ok(bad)
            }
            Store::Trace(ev) => ev.scaling_violations(&self.sources[0], &MatrixTuple::from_flat(ev.m, ev.r, point)?, t),
        }
    }

    pub fn eval_spec(&self, i: usize, point: &[Rat]) -> Result<Rat> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: point.len() });
        }
        match &self.store {
            Store::Listed(v) => v[i].eval(point),
            Store::Trace(t) => {
                let (p, l) = t.locate(i);
                let a = MatrixTuple::from_flat(t.m, t.r, point)?;
                t.value(self.sources[0].point(p), l, &signature(&a, Some(t.m * t.m))?)
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RawEsop {
    flags: EsopFlags,
    family: Family,
    arity: usize,
    source_hitting_sets: Vec<HittingSet>,
    spec_count: usize,
    /// Absent for matrix families, whose specs are re-derived from the
    /// source set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    specs: Option<Vec<InvariantSpec>>,
    #[serde(default)]
    dropped: Vec<SpecProvenance>,
}

impl Serialize for EsopSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let specs = match &self.store {
            Store::Listed(v) => Some(v.clone()),
            Store::Trace(_) => None,
        };
        RawEsop {
            flags: self.flags,
            family: self.family.clone(),
            arity: self.arity,
            source_hitting_sets: self.sources.clone(),
            spec_count: self.len(),
            specs,
            dropped: self.dropped.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EsopSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = RawEsop::deserialize(d)?;
        let set = match (&raw.family, raw.specs) {
            (Family::Matrix { m, r }, None) => {
                let source = raw.source_hitting_sets.first().ok_or_else(|| D::Error::custom("matrix family needs a source set"))?;
                let mut set = matrix_esop(*m, *r, source).map_err(D::Error::custom)?;
                set.flags = raw.flags;
                set
            }
            (_, Some(specs)) => {
                EsopSet::from_specs(raw.family, raw.arity, raw.flags, raw.source_hitting_sets, specs, raw.dropped)
                    .map_err(D::Error::custom)?
            }
            (_, None) => return Err(D::Error::custom("specs missing")),
        };
        if set.len() != raw.spec_count {
            return Err(D::Error::custom(format!("spec_count {} but {} specs", raw.spec_count, set.len())));
        }
        Ok(set)
    }
}

/// `psi_S(A)`.
pub fn esop_signature(s: &EsopSet, a: &MatrixTuple) -> Result<Vec<Rat>> {
    let flat = a.flatten();
    if flat.len() != s.arity {
        return Err(Error::ShapeMismatch(format!("tuple has {} entries, specs take {}", flat.len(), s.arity)));
    }
    match &s.store {
        Store::Listed(v) => v.iter().map(|spec| spec.eval(&flat)).collect(),
        Store::Trace(t) => {
            if a.m() != t.m || a.r() != t.r {
                return Err(Error::ShapeMismatch(format!("tuple is ({}, {}), specs are ({}, {})", a.m(), a.r(), t.m, t.r)));
            }
            let sig = signature(a, Some(t.m * t.m))?;
            let mut out = Vec::with_capacity(s.len());
            for i in 0..s.len() {
                let (p, l) = t.locate(i);
                out.push(t.value(s.sources[0].point(p), l, &sig)?);
            }
            Ok(out)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationFailure {
    pub trial: usize,
    pub a: MatrixTuple,
    pub b: MatrixTuple,
    /// First necklace whose trace differs on the pair.
    pub necklace: Vec<usize>,
    pub signature_a: Signature,
    pub signature_b: Signature,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub trials: usize,
    /// Pairs whose closures are disjoint.
    pub demanded: usize,
    pub passed: bool,
    pub counterexample: Option<SeparationFailure>,
}

/// One random pair; the kind cycles with `trial` so that the sample mixes
/// generic pairs, conjugate pairs, tuples conjugated matrix by matrix,
/// transposed tuples, and triangular tuples sharing a diagonal.
pub fn sample_pair(m: usize, r: usize, trial: usize, rng: &mut SeedRng) -> Result<(MatrixTuple, MatrixTuple)> {
    let a = MatrixTuple::random(m, r, -3, 3, rng);
    let b = match trial % 5 {
        0 => MatrixTuple::random(m, r, -3, 3, rng),
        1 => a.conjugate(&random_invertible(m, 3, rng))?,
        2 => {
            let ms = a
                .matrices()
                .iter()
                .map(|x| {
                    let p = random_invertible(m, 3, rng);
                    MatrixTuple::new(vec![x.clone()])?.conjugate(&p).map(|t| t.get(0).clone())
                })
                .collect::<Result<Vec<_>>>()?;
            MatrixTuple::new(ms)?
        }
        3 => a.map(|x| x.transpose()),
        _ => {
            let upper = |t: &MatrixTuple| t.map(|x| crate::algebra::Mat::from_fn(m, m, |i, j| if i <= j { x.get(i, j).clone() } else { Rat::zero() }));
            let base = upper(&a);
            let noise = MatrixTuple::random(m, r, -3, 3, rng);
            let b = MatrixTuple::new(
                base.matrices()
                    .iter()
                    .zip(noise.matrices())
                    .map(|(x, y)| crate::algebra::Mat::from_fn(m, m, |i, j| if i < j { y.get(i, j).clone() } else { x.get(i, j).clone() }))
                    .collect(),
            )?;
            return Ok((base, b));
        }
    };
    Ok((a, b))
}

/// Over `trials` seeded pairs: whenever the closures are disjoint, some spec
/// must take different values on the pair.
pub fn verify_separating(s: &EsopSet, m: usize, r: usize, trials: usize, seed: u64) -> Result<SeparationReport> {
    if s.arity != r * m * m {
        return Err(Error::ShapeMismatch(format!("specs take {} coordinates, tuples of shape ({m}, {r}) have {}", s.arity, r * m * m)));
    }
    let root = SeedRng::new(seed);
    let mut cache = matrix::FeatureCache::default();
    let mut demanded = 0;
    for trial in 0..trials {
        let mut rng = root.split(trial as u64);
        let (a, b) = sample_pair(m, r, trial, &mut rng)?;
        let decision = intersects_deterministic(&a, &b, None)?;
        if decision.intersect {
            continue;
        }
        demanded += 1;
        let separated = match &s.store {
            Store::Trace(t) => t.first_separating(&s.sources[0], &a, &b, &mut cache)?.is_some(),
            Store::Listed(v) => {
                let (fa, fb) = (a.flatten(), b.flatten());
                let mut found = false;
                for spec in v {
                    if spec.eval(&fa)? != spec.eval(&fb)? {
                        found = true;
                        break;
                    }
                }
                found
            }
        };
        if !separated {
            let signature_a = signature(&a, None)?;
            let signature_b = signature(&b, None)?;
            let necklace = decision.witness.map(|n| n.canonical.letters().to_vec()).unwrap_or_default();
            return Ok(SeparationReport {
                trials,
                demanded,
                passed: false,
                counterexample: Some(SeparationFailure { trial, a, b, necklace, signature_a, signature_b }),
            });
        }
    }
    Ok(SeparationReport { trials, demanded, passed: true, counterexample: None })
}

/// True when the circuit vanished at `probes` random points with coordinates
/// below `1000 (deg + 1)`.
pub(crate) fn probably_zero(c: &Circuit, probes: usize, rng: &mut SeedRng) -> Result<bool> {
    let deg = c.degree_bound().into_iter().max().unwrap_or(0);
    let bound = 1000 * (deg + 1);
    for _ in 0..probes {
        let pt: Vec<Rat> = (0..c.arity()).map(|_| crate::algebra::rat::rat_from_u64(rng.below(bound))).collect();
        if c.eval(&pt)?.iter().any(|v| !v.is_zero()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, Mat};
    use crate::hitting::grid_hitting_set;

    fn diag_tuple(d: &[i64]) -> MatrixTuple {
        MatrixTuple::new(vec![Mat::diag(&d.iter().map(|&x| rat(x)).collect::<Vec<_>>())]).unwrap()
    }

    #[test]
    fn empty_set_fails_on_a_disjoint_pair() {
        let empty = HittingSet::external(16, vec![], "none").unwrap();
        let s = matrix_esop(2, 1, &empty).unwrap();
        assert!(s.is_empty());
        let report = verify_separating(&s, 2, 1, 5, 0).unwrap();
        assert!(!report.passed);
        let w = report.counterexample.unwrap();
        assert!(!intersects_deterministic(&w.a, &w.b, None).unwrap().intersect);
    }

    #[test]
    fn roundtrip_json() {
        let b = grid_hitting_set(16, 2, 20).unwrap();
        let s = matrix_esop(2, 1, &b).unwrap();
        let text = serde_json::to_string(&s).unwrap();
        let back: EsopSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(back.len(), 80);
    }

    #[test]
    fn signature_shape_and_conjugation() {
        let b = grid_hitting_set(16, 3, 200).unwrap();
        let s = matrix_esop(2, 1, &b).unwrap();
        let a = diag_tuple(&[1, 0]);
        let sig = esop_signature(&s, &a).unwrap();
        assert_eq!(sig.len(), s.len());
        let p = Mat::from_i64(&[&[1, 2], &[1, 3]]);
        assert_eq!(esop_signature(&s, &a.conjugate(&p).unwrap()).unwrap(), sig);
        let bad = MatrixTuple::zeros(3, 1);
        assert!(matches!(esop_signature(&s, &bad), Err(Error::ShapeMismatch(_))));
        let nil = MatrixTuple::new(vec![Mat::from_i64(&[&[0, 1], &[0, 0]])]).unwrap();
        assert_eq!(esop_signature(&s, &nil).unwrap(), esop_signature(&s, &MatrixTuple::zeros(2, 1)).unwrap());
    }
}
