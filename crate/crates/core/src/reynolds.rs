//! The Reynolds operator of `SL_m`, computed with Cayley's Omega process,
//! on `K[Z]` and on polynomial representations given by Weyl modules.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::algebra::rat::{pow_rat, rat_from_u64};
use crate::algebra::{inverse, Exponents, MPoly, Mat, Rat};
use crate::circuit::{Builder, Circuit, NodeId};
use crate::error::{Error, Result};
use crate::esop::{EsopFlags, EsopSet, Family, InvariantSpec, SpecProvenance};
use crate::hitting::{HittingSet, DEFAULT_CAP};
use crate::invariants::sign;
use crate::rng::SeedRng;
use crate::smt::{minor, rep_generic_action, u_vars, z_vars, RepSpec};

use itertools::Itertools;

/// Omega applied `times` times, the matrix being the variables at
/// `offset..offset + m^2` (row-major).
fn omega_at(f: &MPoly, offset: usize, m: usize, times: u32) -> MPoly {
    let perms: Vec<(Vec<usize>, bool)> = (0..m).permutations(m).map(|p| {
        let even = sign(&p) > 0;
        (p, even)
    }).collect();
    let mut cur = f.clone();
    for _ in 0..times {
        let mut next = MPoly::zero(cur.vars());
        for (p, even) in &perms {
            let mut g = cur.clone();
            for (i, &j) in p.iter().enumerate() {
                g = g.partial(offset + i * m + j, 1);
                if g.is_zero() {
                    break;
                }
            }
            next = if *even { &next + &g } else { &next - &g };
        }
        cur = next;
    }
    cur
}

fn check_z(f: &MPoly, m: usize) -> Result<()> {
    if f.vars()[..] != z_vars(m)[..] {
        return Err(Error::VariableMismatch(format!("expected the variables {}", z_vars(m).join(", "))));
    }
    Ok(())
}

/// `Omega^times f` for `f` over `z_vars(m)`.
pub fn omega_apply(f: &MPoly, m: usize, times: u32) -> Result<MPoly> {
    check_z(f, m)?;
    Ok(omega_at(f, 0, m, times))
}

fn det_z(m: usize) -> MPoly {
    let all: Vec<usize> = (1..=m).collect();
    minor(&z_vars(m), 0, m, &all, &all)
}

/// `c_{r,m} = Omega^r(det(Z)^r)`.
pub fn cayley_constant(r: u32, m: usize) -> Rat {
    static CACHE: OnceLock<Mutex<HashMap<(u32, usize), Rat>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().expect("cache lock").get(&(r, m)) {
        return c.clone();
    }
    let v = omega_at(&det_z(m).pow(r), 0, m, r).coeff(&vec![0; m * m]);
    cache.lock().expect("cache lock").insert((r, m), v.clone());
    v
}

/// Reynolds operator on `K[Z]` under left multiplication:
/// `det^r Omega^r f / c_{r,m}` when `deg f = m r`, else 0.
pub fn reynolds_kz(f: &MPoly, m: usize) -> Result<MPoly> {
    check_z(f, m)?;
    if f.is_zero() {
        return Ok(f.clone());
    }
    if !f.is_homogeneous() {
        return Err(Error::NotHomogeneous);
    }
    let deg = f.total_degree() as usize;
    if !deg.is_multiple_of(m) {
        return Ok(MPoly::zero(f.vars()));
    }
    let r = (deg / m) as u32;
    let c = cayley_constant(r, m);
    let scalar = omega_at(f, 0, m, r).coeff(&vec![0; m * m]) / c;
    Ok(det_z(m).pow(r).scale(&scalar))
}

fn haar_monomial(e: &Exponents, m: usize) -> Rat {
    type Cache = Mutex<HashMap<(usize, Exponents), Rat>>;
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (m, e.clone());
    if let Some(v) = cache.lock().expect("cache lock").get(&key) {
        return v.clone();
    }
    let deg: u32 = e.iter().sum();
    let v = if !(deg as usize).is_multiple_of(m) {
        Rat::zero()
    } else {
        let r = deg / m as u32;
        let mono = MPoly::monomial(&u_vars(m), e.clone(), Rat::one());
        omega_at(&mono, 0, m, r).coeff(&vec![0; m * m]) / cayley_constant(r, m)
    };
    cache.lock().expect("cache lock").insert(key, v.clone());
    v
}

/// Integral of `h`, a polynomial in `u_vars(m)`, over `SL_m`: the value at
/// `det = 1` of the Reynolds projection of `h`.
pub fn haar(h: &MPoly, m: usize) -> Result<Rat> {
    if h.nvars() != m * m {
        return Err(Error::VariableMismatch(format!("expected {} matrix entries", m * m)));
    }
    Ok(h.terms().map(|(e, c)| c * haar_monomial(e, m)).sum())
}

/// `Adj(u)`, row-major, over `u_vars(m)`.
pub fn adjugate(m: usize) -> Vec<MPoly> {
    let vars = u_vars(m);
    if m == 1 {
        return vec![MPoly::one(&vars)];
    }
    let mut out = Vec::with_capacity(m * m);
    for i in 0..m {
        for j in 0..m {
            // (-1)^{i+j} times the minor without row j and column i.
            let rows: Vec<usize> = (1..=m).filter(|&x| x != j + 1).collect();
            let cols: Vec<usize> = (1..=m).filter(|&x| x != i + 1).collect();
            let mi = minor(&vars, 0, m, &rows, &cols);
            out.push(if (i + j) % 2 == 0 { mi } else { mi.scale(&-Rat::one()) });
        }
    }
    out
}

/// Reynolds operator on `K[V]`: `f(g^{-1} v)` is expanded in the entries of
/// `u` (with `g^{-1} = Adj(u)` on `det u = 1`) and each `u`-coefficient is
/// integrated.
pub fn reynolds_kv(f: &MPoly, spec: &RepSpec) -> Result<MPoly> {
    spec.check()?;
    let n = spec.n;
    if f.nvars() != n {
        return Err(Error::VariableMismatch(format!("polynomial has {} variables, representation has dimension {n}", f.nvars())));
    }
    let m = spec.m;
    let mm = m * m;
    let gen = rep_generic_action(spec)?;
    let adj = adjugate(m);
    let both = crate::algebra::make_vars(f.vars().iter().cloned().chain(u_vars(m).iter().cloned()));
    let u_map: Vec<usize> = (n..n + mm).collect();
    let mut w = Vec::with_capacity(n);
    for row in &gen {
        let mut wi = MPoly::zero(&both);
        for (j, p) in row.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let coef = p.compose(&adj)?.embed(&both, &u_map);
            wi = &wi + &(&coef * &MPoly::var(&both, j));
        }
        w.push(wi);
    }
    let moved = f.compose(&w)?;
    let v_idx: Vec<usize> = (0..n).collect();
    let mut out = MPoly::zero(f.vars());
    for (ve, rest) in moved.split_by(&v_idx) {
        let mut value = Rat::zero();
        for (e, c) in rest.terms() {
            value += c * haar_monomial(&e[n..].to_vec(), m);
        }
        if !value.is_zero() {
            out.add_term(ve, value);
        }
    }
    Ok(out)
}

/// Sums of `c` entries of `sizes`, with repetition.
fn achievable(sizes: &BTreeSet<usize>, c: usize) -> BTreeSet<usize> {
    let mut cur = BTreeSet::from([0]);
    for _ in 0..c {
        cur = cur.iter().flat_map(|a| sizes.iter().map(move |s| a + s)).collect();
    }
    cur
}

pub fn rxc_circuit(spec: &RepSpec, c: usize) -> Result<Circuit> {
    rxc_circuit_capped(spec, c, DEFAULT_CAP)
}

/// `R(X^c)(v, x)` with `X = sum_i x_i v_i`, over inputs `v_1..v_n` then
/// `x_1..x_n`: a weighted sum over the grid `g in {0..dc}^{m^2}` of
/// `(sum_i x_i (g v)_i)^c`, the weights solving the transposed Vandermonde
/// system against the integrals of the monomials in `Adj(u)`.
pub fn rxc_circuit_capped(spec: &RepSpec, c: usize, cap: u64) -> Result<Circuit> {
    spec.check()?;
    if c == 0 {
        return Err(Error::InfeasibleParameters("c must be at least 1".into()));
    }
    let (n, m) = (spec.n, spec.m);
    let mm = m * m;
    let d = spec.degree();
    let side = d * c + 1;
    let size = crate::hitting::checked_pow(side as u64, mm).filter(|&s| s <= cap).ok_or_else(|| Error::ExplosionGuard {
        what: format!("interpolation grid {{0..{}}}^{mm}", side - 1),
        size: BigUint::from(side).pow(mm as u32).to_string(),
        cap,
    })? as usize;
    let sizes: BTreeSet<usize> = spec.summands.iter().map(|(s, _)| s.iter().sum()).collect();
    let degrees = achievable(&sizes, c);
    let adj = adjugate(m);
    let index_to_point = |mut idx: usize| -> Vec<usize> {
        let mut p = vec![0; mm];
        for slot in p.iter_mut().rev() {
            *slot = idx % side;
            idx /= side;
        }
        p
    };
    // w_mu = integral of mu(Adj u).
    let mut w: Vec<Rat> = Vec::with_capacity(size);
    for idx in 0..size {
        let mu = index_to_point(idx);
        let deg: usize = mu.iter().sum();
        if !degrees.contains(&deg) || !((m - 1) * deg).is_multiple_of(m) {
            w.push(Rat::zero());
            continue;
        }
        let mut p = MPoly::one(&u_vars(m));
        for (k, &e) in mu.iter().enumerate() {
            if e > 0 {
                p = &p * &adj[k].pow(e as u32);
            }
        }
        w.push(haar(&p, m)?);
    }
    // Solve B^T W = w, B = V (x) ... (x) V with V[a][e] = a^e.
    let v = Mat::from_fn(side, side, |a, e| pow_rat(&rat_from_u64(a as u64), e as u32));
    let vt_inv = inverse(&v.transpose())?;
    let mut stride = 1;
    for _ in 0..mm {
        let block = stride * side;
        for base in (0..size).step_by(block) {
            for off in 0..stride {
                let fiber: Vec<Rat> = (0..side).map(|t| w[base + off + t * stride].clone()).collect();
                let solved = vt_inv.vec_mul(&fiber);
                for (t, val) in solved.into_iter().enumerate() {
                    w[base + off + t * stride] = val;
                }
            }
        }
        stride = block;
    }
    let gen = rep_generic_action(spec)?;
    let mut b = Builder::new(2 * n);
    let vs: Vec<NodeId> = (0..n).map(|i| b.input(i)).collect();
    let mut terms = Vec::new();
    for (idx, wg) in w.iter().enumerate() {
        if wg.is_zero() {
            continue;
        }
        let g: Vec<Rat> = index_to_point(idx).into_iter().map(|a| rat_from_u64(a as u64)).collect();
        let mut parts = Vec::new();
        for (i, row) in gen.iter().enumerate() {
            let coeffs: Vec<(NodeId, Rat)> =
                row.iter().zip(&vs).map(|(p, &vj)| Ok((vj, p.eval(&g)?))).collect::<Result<_>>()?;
            if coeffs.iter().all(|(_, k)| k.is_zero()) {
                continue;
            }
            let li = b.linear(&coeffs);
            let xi = b.input(n + i);
            parts.push(b.mul(xi, li));
        }
        if parts.is_empty() {
            continue;
        }
        let l = b.sum(&parts);
        let p = b.pow(l, c as u32);
        terms.push((p, wg.clone()));
    }
    let root = b.linear(&terms);
    Ok(b.finish(vec![root]))
}

/// Smallest `c <= limit` for which `R(X^c)` is nonzero at random probes.
pub fn first_invariant_degree(spec: &RepSpec, limit: usize, cap: u64) -> Result<Option<usize>> {
    let mut rng = SeedRng::new(0x4844);
    for c in 1..=limit {
        let circuit = rxc_circuit_capped(spec, c, cap)?;
        if !crate::esop::probably_zero(&circuit, 3, &mut rng)? {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

/// Degree limit of the scan behind the default `c_max`.
pub const C_MAX_SCAN_LIMIT: usize = 8;

/// `{ R(X^c)(v, b) : b in T, 1 <= c <= c_max }`. Without `c_max`, the first
/// degree carrying a nonzero invariant is used.
pub fn hilbert_esop(spec: &RepSpec, t: &HittingSet, c_max: Option<usize>, cap: u64) -> Result<EsopSet> {
    spec.check()?;
    let n = spec.n;
    if t.r() != n {
        return Err(Error::ArityMismatch { expected: n, got: t.r() });
    }
    let c_max = match c_max {
        Some(0) => return Err(Error::InfeasibleParameters("c_max must be at least 1".into())),
        Some(c) => c,
        None => first_invariant_degree(spec, C_MAX_SCAN_LIMIT, cap)?.ok_or_else(|| {
            Error::InfeasibleParameters(format!("no nonzero invariant up to degree {C_MAX_SCAN_LIMIT}"))
        })?,
    };
    let mut rng = SeedRng::new(0x4853);
    let mut specs = Vec::new();
    let mut dropped = Vec::new();
    for c in 1..=c_max {
        let full = rxc_circuit_capped(spec, c, cap)?;
        for b in t.points() {
            let fixed: Vec<(usize, Rat)> = b.iter().enumerate().map(|(i, &x)| (n + i, rat_from_u64(x))).collect();
            let circuit = full.specialize(&fixed)?;
            let provenance = SpecProvenance::Hilbert { point: b.to_vec(), c };
            if circuit.is_syntactically_zero() || crate::esop::probably_zero(&circuit, 3, &mut rng)? {
                dropped.push(provenance);
            } else {
                specs.push(InvariantSpec { circuit, degree: c as u32, provenance });
            }
        }
    }
    let bound = derksen_bound(n as u64, spec.m as u64, spec.degree() as u64);
    EsopSet::from_specs(
        Family::Hilbert { rep: spec.clone(), c_max, derksen_bound: bound.to_string() },
        n,
        EsopFlags { separating_claimed: true, strict: true },
        vec![t.clone()],
        specs,
        dropped,
    )
}

/// `n m^2 d^{2 m^2}`.
pub fn derksen_bound(n: u64, m: u64, d: u64) -> BigUint {
    BigUint::from(n) * BigUint::from(m * m) * BigUint::from(d).pow((2 * m * m) as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, ratio};

    fn z(m: usize, i: usize, j: usize) -> MPoly {
        MPoly::var(&z_vars(m), (i - 1) * m + (j - 1))
    }

    #[test]
    fn omega_examples() {
        let det = &(&z(2, 1, 1) * &z(2, 2, 2)) - &(&z(2, 1, 2) * &z(2, 2, 1));
        assert_eq!(omega_apply(&det, 2, 1).unwrap(), MPoly::constant(&z_vars(2), rat(2)));
        assert!(omega_apply(&z(2, 1, 1).pow(2), 2, 1).unwrap().is_zero());
        assert_eq!(omega_apply(&(&z(2, 1, 1) * &z(2, 2, 2)), 2, 1).unwrap(), MPoly::one(&z_vars(2)));
        let wrong = MPoly::var(&crate::algebra::indexed_vars("x", 4), 0);
        assert!(matches!(omega_apply(&wrong, 2, 1), Err(Error::VariableMismatch(_))));
    }

    #[test]
    fn cayley_constants_match_the_product_formula() {
        // c_{r,m} = prod_{i<m} (r+i)!/i!
        let fact = |k: u64| (1..=k).fold(BigUint::one(), |a, x| a * x);
        for m in 1..=3usize {
            for r in 1..=3u32 {
                let expect = (0..m as u64).fold(BigUint::one(), |a, i| a * fact(r as u64 + i) / fact(i));
                assert_eq!(cayley_constant(r, m), Rat::from_integer(expect.into()), "r={r} m={m}");
            }
        }
    }

    #[test]
    fn kz_examples() {
        let det = &(&z(2, 1, 1) * &z(2, 2, 2)) - &(&z(2, 1, 2) * &z(2, 2, 1));
        assert_eq!(reynolds_kz(&det, 2).unwrap(), det);
        assert_eq!(reynolds_kz(&(&z(2, 1, 1) * &z(2, 2, 2)), 2).unwrap(), det.scale(&ratio(1, 2)));
        assert!(reynolds_kz(&z(2, 1, 1).pow(3), 2).unwrap().is_zero());
        assert_eq!(reynolds_kz(&(&z(2, 1, 1) + &z(2, 1, 1).pow(2)), 2), Err(Error::NotHomogeneous));
        for m in 1..=3 {
            let d = det_z(m);
            for r in 1..=3 {
                if m == 3 && r == 3 {
                    continue;
                }
                assert_eq!(reynolds_kz(&d.pow(r), m).unwrap(), d.pow(r));
            }
        }
    }

    #[test]
    fn binary_quadratic_discriminant() {
        let spec = RepSpec::binary_forms(2);
        let v = crate::algebra::indexed_vars("v", 3);
        let (v1, v2, v3) = (MPoly::var(&v, 0), MPoly::var(&v, 1), MPoly::var(&v, 2));
        let disc = &v2.pow(2) - &(&v1 * &v3).scale(&rat(4));
        assert_eq!(reynolds_kv(&disc, &spec).unwrap(), disc);
        assert!(reynolds_kv(&v1, &spec).unwrap().is_zero());
        let r = reynolds_kv(&v2.pow(2), &spec).unwrap();
        assert_eq!(reynolds_kv(&r, &spec).unwrap(), r);
    }

    #[test]
    fn rxc_binary_quadratics() {
        let spec = RepSpec::binary_forms(2);
        let vars = crate::algebra::make_vars(["v1", "v2", "v3", "x1", "x2", "x3"]);
        let c1 = rxc_circuit(&spec, 1).unwrap();
        assert!(c1.to_mpoly_with(&vars, 1_000_000).unwrap()[0].is_zero());
        let c2 = rxc_circuit(&spec, 2).unwrap();
        let p = c2.to_mpoly_with(&vars, 1_000_000).unwrap().remove(0);
        let (v1, v2, v3) = (MPoly::var(&vars, 0), MPoly::var(&vars, 1), MPoly::var(&vars, 2));
        let disc = &v2.pow(2) - &(&v1 * &v3).scale(&rat(4));
        let q = p.div_exact(&disc).expect("divisible by the discriminant");
        assert!(!q.is_zero() && q.degree_in(&[0, 1, 2]) == 0);
        let at: Vec<(usize, Rat)> = vec![(0, rat(1)), (1, rat(-2)), (2, rat(5))];
        let shape = crate::circuit::recognize_diag3(&c2.specialize(&at).unwrap()).unwrap();
        assert_eq!(shape.max_power, 2);
    }

    #[test]
    fn hilbert_default_degree() {
        let spec = RepSpec::binary_forms(2);
        let t = crate::hitting::grid_hitting_set(3, 2, 100).unwrap();
        let s = hilbert_esop(&spec, &t, None, DEFAULT_CAP).unwrap();
        let Family::Hilbert { c_max, .. } = &s.family else { panic!() };
        assert_eq!(*c_max, 2);
        assert!(s.dropped.len() >= t.len());
        // x^2 - y^2 versus x^2.
        let a = [rat(1), rat(0), rat(-1)];
        let b = [rat(1), rat(0), rat(0)];
        assert!((0..s.len()).any(|i| s.eval_spec(i, &a).unwrap() != s.eval_spec(i, &b).unwrap()));
    }

    #[test]
    fn bounds() {
        assert_eq!(derksen_bound(3, 2, 2), BigUint::from(3072u32));
        assert_eq!(derksen_bound(5, 3, 1), BigUint::from(45u32));
        assert_eq!(derksen_bound(1, 1, 1), BigUint::one());
    }
}
