use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::for_each_subset;
use crate::algebra::modular::{rational_reconstruct, reduce_i128, ColumnBasis, PRIME};
use crate::algebra::{indexed_vars, nullspace, MPoly, Mat, Rat};
use crate::error::{Error, Result};

/// Multilinear monomials in `m` variables as index sets, by degree then
/// lexicographically.
pub fn multilinear_monomials(m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(1 << m);
    for d in 0..=m {
        for_each_subset(m, d, |s| {
            out.push(s.to_vec());
            true
        });
    }
    out
}

const MAX_LIFT_BITS: u64 = 1 << 16;

/// A nonzero multilinear polynomial in `x1..xm` vanishing on every point of
/// `points`: the kernel vector of the evaluation system whose free variable
/// is the first dependent monomial column, with every later free variable
/// set to zero.
pub fn hard_poly_from_hitting_set(points: &[Vec<u64>], m: usize) -> Result<MPoly> {
    if let Some(p) = points.iter().find(|p| p.len() != m) {
        return Err(Error::ArityMismatch { expected: m, got: p.len() });
    }
    if m > 22 {
        return Err(Error::ExplosionGuard { what: "multilinear monomials".into(), size: format!("2^{m}"), cap: 1 << 22 });
    }
    let monos = multilinear_monomials(m);
    let column = |s: &[usize]| -> Option<Vec<u64>> {
        points.iter().map(|t| s.iter().try_fold(1u64, |acc, &k| acc.checked_mul(t[k]))).collect()
    };
    match modular_attempt(points.len(), &monos, column)? {
        Some(coeffs) => Ok(assemble(m, &monos, &coeffs)),
        None => exact_attempt(points, m, &monos),
    }
}

/// `x_{S_f} - sum_j c_j x_{S_j}` where `c` has length `f`.
fn assemble(m: usize, monos: &[Vec<usize>], c: &[Rat]) -> MPoly {
    let vars = indexed_vars("x", m);
    let exps = |s: &[usize]| {
        let mut e = vec![0u32; m];
        for &k in s {
            e[k] = 1;
        }
        e
    };
    let mut p = MPoly::monomial(&vars, exps(&monos[c.len()]), Rat::one());
    for (s, cj) in monos.iter().zip(c) {
        p.add_term(exps(s), -cj.clone());
    }
    p
}

/// `Ok(None)` asks for the exact fallback; `Err(NoSolution)` means the
/// columns are independent (certain, since rank mod p never exceeds the
/// rational rank).
fn modular_attempt(
    rows: usize,
    monos: &[Vec<usize>],
    column: impl Fn(&[usize]) -> Option<Vec<u64>>,
) -> Result<Option<Vec<Rat>>> {
    let mut basis = ColumnBasis::new(rows);
    let mut cols: Vec<Vec<u64>> = Vec::new();
    let mut rhs = None;
    for s in monos {
        let Some(col) = column(s) else { return Ok(None) };
        if basis.push(col.iter().map(|&x| x % PRIME).collect()).is_some() {
            rhs = Some(col);
            break;
        }
        cols.push(col);
    }
    let Some(b) = rhs else { return Err(Error::NoSolution) };
    let f = cols.len();
    if f == 0 {
        return Ok(Some(Vec::new()));
    }
    // p-adic lifting of the consistent overdetermined system A c = b.
    let p = PRIME;
    let mut r: Vec<i128> = b.iter().map(|&x| x as i128).collect();
    let mut acc = vec![BigInt::zero(); f];
    let mut pk = BigInt::one();
    let mut previous: Option<Vec<Rat>> = None;
    for step in 0.. {
        if pk.bits() > MAX_LIFT_BITS {
            return Ok(None);
        }
        let Some(c) = basis.solve(r.iter().map(|&x| reduce_i128(x, p)).collect()) else {
            return Ok(None);
        };
        for (a, &cj) in acc.iter_mut().zip(&c) {
            *a += &pk * cj;
        }
        pk *= p;
        for (i, ri) in r.iter_mut().enumerate() {
            let ac: i128 = cols.iter().zip(&c).map(|(col, &cj)| col[i] as i128 * cj as i128).sum();
            let diff = *ri - ac;
            if diff % p as i128 != 0 {
                return Ok(None);
            }
            *ri = diff / p as i128;
        }
        let exhausted = r.iter().all(|&x| x == 0);
        if !exhausted && step % 2 == 0 {
            continue;
        }
        let Some(cand) = reconstruct_all(&acc, &pk) else {
            continue;
        };
        if exhausted || previous.as_ref() == Some(&cand) {
            if verify(&cols, &b, &cand) {
                return Ok(Some(cand));
            }
            if exhausted {
                return Ok(None);
            }
        }
        previous = Some(cand);
    }
    unreachable!()
}

/// Rational reconstruction of every entry, sharing a running common
/// denominator so that most entries need one multiplication.
fn reconstruct_all(acc: &[BigInt], pk: &BigInt) -> Option<Vec<Rat>> {
    let bound = (pk / 2u32).sqrt();
    let half = pk / 2u32;
    let mut den = BigInt::one();
    let mut nums = Vec::with_capacity(acc.len());
    for a in acc {
        let mut y = (a * &den).mod_floor(pk);
        if y > half {
            y -= pk;
        }
        if y.abs() > bound {
            let q = rational_reconstruct(&y, pk)?;
            if (&den * q.denom()).abs() > bound {
                return None;
            }
            den *= q.denom();
            nums.iter_mut().for_each(|n: &mut BigInt| *n *= q.denom());
            y = q.numer().clone();
        }
        nums.push(y);
    }
    Some(nums.into_iter().map(|n| Rat::new(n, den.clone())).collect())
}

/// Exact check of `sum_j c_j col_j = b`.
fn verify(cols: &[Vec<u64>], b: &[u64], c: &[Rat]) -> bool {
    let den = c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = c.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    (0..b.len()).all(|i| {
        let lhs: BigInt = cols.iter().zip(&ints).map(|(col, a)| a * col[i]).sum();
        lhs == &den * b[i]
    })
}

fn exact_attempt(points: &[Vec<u64>], m: usize, monos: &[Vec<usize>]) -> Result<MPoly> {
    let big = |t: &[u64], s: &[usize]| -> Rat { Rat::from_integer(s.iter().map(|&k| BigInt::from(t[k])).product()) };
    let a = Mat::from_fn(points.len(), monos.len(), |i, j| big(&points[i], &monos[j]));
    let kernel = nullspace(&a);
    let v = kernel.first().ok_or(Error::NoSolution)?;
    // The first basis vector is supported on columns up to its free column,
    // where it is 1.
    let f = v.iter().rposition(|x| !x.is_zero()).ok_or(Error::NoSolution)?;
    let c: Vec<Rat> = v[..f].iter().map(|x| -x).collect();
    Ok(assemble(m, monos, &c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedRng;

    fn vanishes(p: &MPoly, pts: &[Vec<u64>]) -> bool {
        pts.iter().all(|t| {
            let q: Vec<Rat> = t.iter().map(|&x| Rat::from_integer(x.into())).collect();
            p.eval(&q).unwrap().is_zero()
        })
    }

    #[test]
    fn examples() {
        let p = hard_poly_from_hitting_set(&[vec![0, 0]], 2).unwrap();
        assert_eq!(p.to_string(), "x1");
        let p = hard_poly_from_hitting_set(&[], 2).unwrap();
        assert_eq!(p, MPoly::one(&indexed_vars("x", 2)));
        let cube = vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        assert_eq!(hard_poly_from_hitting_set(&cube, 2), Err(Error::NoSolution));
    }

    #[test]
    fn matches_exact_nullspace() {
        let mut rng = SeedRng::new(3);
        for m in 1..=4usize {
            for _ in 0..5 {
                let s = rng.below(1 << m) as usize;
                let pts: Vec<Vec<u64>> = (0..s).map(|_| (0..m).map(|_| rng.below(4)).collect()).collect();
                let fast = hard_poly_from_hitting_set(&pts, m).unwrap();
                let slow = exact_attempt(&pts, m, &multilinear_monomials(m)).unwrap();
                assert_eq!(fast, slow);
                assert!(!fast.is_zero() && vanishes(&fast, &pts));
            }
        }
    }

    #[test]
    fn large_coordinates_use_the_exact_path() {
        let pts = vec![vec![u64::MAX, 3], vec![u64::MAX, 2]];
        let p = hard_poly_from_hitting_set(&pts, 2).unwrap();
        assert!(vanishes(&p, &pts));
    }
}
