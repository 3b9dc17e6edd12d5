//! Arithmetic modulo a word-sized prime, column echelon bases, and rational
//! reconstruction. Callers must check every answer produced here exactly:
//! an unlucky prime gives wrong answers, not errors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rat;

/// Largest prime below `2^26`. Products of two residues stay below `2^52`,
/// so 2048 of them can be summed in a `u64` before reducing.
pub const PRIME: u64 = 67_108_859;

const LAZY_TERMS: usize = 2048;

pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue modulo the prime `p`.
pub fn invmod(a: u64, p: u64) -> u64 {
    powmod(a, p - 2, p)
}

pub fn reduce_i128(x: i128, p: u64) -> u64 {
    x.rem_euclid(p as i128) as u64
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniform odd draws from `[2^60, 2^61)` until one is prime.
pub fn random_prime(rng: &mut crate::rng::SeedRng) -> u64 {
    loop {
        let c = (1u64 << 60) | rng.below(1 << 60) | 1;
        if is_prime_u64(c) {
            return c;
        }
    }
}

/// `x mod p`, or `None` when `p` divides the denominator.
pub fn rat_mod(x: &Rat, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let reduce = |v: &BigInt| -> u64 { u64::try_from(v.mod_floor(&pb)).expect("residue below p") };
    let den = reduce(x.denom());
    if den == 0 {
        return None;
    }
    Some(mulmod(reduce(x.numer()), invmod(den, p), p))
}

/// `a b mod p` for square row-major matrices of side `n`, `p < 2^61`.
pub fn matmul_mod(a: &[u64], b: &[u64], n: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut acc: u128 = 0;
            for t in 0..n {
                acc += a[i * n + t] as u128 * b[t * n + j] as u128;
                // Products are below 2^122; 32 of them fit.
                if t % 32 == 31 {
                    acc %= p as u128;
                }
            }
            out[i * n + j] = (acc % p as u128) as u64;
        }
    }
    out
}

/// Echelon basis of a growing list of columns of length `rows`, mod
/// `PRIME`. Basis column `k` has a 1 in row `pivot_rows[k]` and zeros in the
/// pivot rows of all earlier basis columns; `combos[k]` writes it in terms
/// of the columns pushed so far.
#[derive(Clone, Debug)]
pub struct ColumnBasis {
    rows: usize,
    pivot_rows: Vec<usize>,
    reduced: Vec<Vec<u64>>,
    combos: Vec<Vec<u64>>,
}

impl ColumnBasis {
    pub fn new(rows: usize) -> ColumnBasis {
        ColumnBasis { rows, pivot_rows: Vec::new(), reduced: Vec::new(), combos: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    /// Rows used as pivots, in basis order.
    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivot_rows
    }

    /// Reduces `v` against the basis in place; returns the multiple of each
    /// basis column that was removed.
    fn eliminate(&self, v: &mut [u64]) -> Vec<u64> {
        let p = PRIME;
        let mut xs = Vec::with_capacity(self.rank());
        for (k, &pr) in self.pivot_rows.iter().enumerate() {
            if k % LAZY_TERMS == LAZY_TERMS - 1 {
                v.iter_mut().for_each(|x| *x %= p);
            }
            let x = v[pr] % p;
            xs.push(x);
            if x == 0 {
                continue;
            }
            let neg = p - x;
            for (vi, &ri) in v.iter_mut().zip(&self.reduced[k]) {
                *vi += neg * ri;
            }
        }
        v.iter_mut().for_each(|x| *x %= p);
        xs
    }

    /// `sum_k xs[k] * combos[k]`, padded to the number of basis columns.
    fn combine(&self, xs: &[u64]) -> Vec<u64> {
        let p = PRIME;
        let mut out = vec![0u64; self.rank()];
        for (k, &x) in xs.iter().enumerate() {
            if k % LAZY_TERMS == LAZY_TERMS - 1 {
                out.iter_mut().for_each(|y| *y %= p);
            }
            if x == 0 {
                continue;
            }
            for (o, &c) in out.iter_mut().zip(&self.combos[k]) {
                *o += x * c;
            }
        }
        out.iter_mut().for_each(|y| *y %= p);
        out
    }

    /// Adds a column with entries below `PRIME`. If it is a combination
    /// `sum_j c_j col_j` of the independent columns pushed before, returns
    /// `c` and leaves the basis unchanged.
    pub fn push(&mut self, mut col: Vec<u64>) -> Option<Vec<u64>> {
        assert_eq!(col.len(), self.rows, "column length");
        let p = PRIME;
        let xs = self.eliminate(&mut col);
        match col.iter().position(|&x| x != 0) {
            None => Some(self.combine(&xs)),
            Some(pr) => {
                // residual = col - sum_k xs[k] basis_k, scaled to a unit pivot.
                let inv = invmod(col[pr], p);
                let mut combo: Vec<u64> = self.combine(&xs).into_iter().map(|c| mulmod(p - c, inv, p)).collect();
                combo.push(inv);
                col.iter_mut().for_each(|x| *x = mulmod(*x, inv, p));
                self.pivot_rows.push(pr);
                self.reduced.push(col);
                self.combos.push(combo);
                None
            }
        }
    }

    /// Coefficients over the independent pushed columns of a vector in their
    /// span, or `None` if it is not in the span.
    pub fn solve(&self, mut v: Vec<u64>) -> Option<Vec<u64>> {
        assert_eq!(v.len(), self.rows, "vector length");
        let xs = self.eliminate(&mut v);
        if v.iter().any(|&x| x != 0) {
            return None;
        }
        Some(self.combine(&xs))
    }
}

/// Rational `a/b` with `a = x b (mod modulus)` and `|a|, b <= sqrt(modulus/2)`.
pub fn rational_reconstruct(x: &BigInt, modulus: &BigInt) -> Option<Rat> {
    let bound = (modulus / 2u32).sqrt();
    let (mut r0, mut r1) = (modulus.clone(), x.mod_floor(modulus));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let (q, r2) = r0.div_rem(&r1);
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    Some(Rat::new(r1, t1))
}
