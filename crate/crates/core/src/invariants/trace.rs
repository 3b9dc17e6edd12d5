use itertools::Itertools;
use num_traits::{One, Zero};

use super::tuple::MatrixTuple;
use super::words::Word;
use crate::algebra::{Mat, Rat};
use crate::error::{Error, Result};

/// `trace(A_{i_1} ... A_{i_l})`.
pub fn trace_monomial(w: &Word, a: &MatrixTuple) -> Result<Rat> {
    Ok(a.word_product(w)?.trace())
}

/// Cycles of a permutation of `0..n` given by its images, each cycle
/// starting at its least element, cycles ordered by that element. Entries are
/// 1-based.
pub fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let n = perm.len();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x + 1);
            x = perm[x];
        }
        out.push(cyc);
    }
    out
}

/// `+1` or `-1`.
pub fn sign(perm: &[usize]) -> i32 {
    if (perm.len() - cycles(perm).len()).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Product over the cycles `(a_1 .. a_k)` of `trace(A_{a_1} ... A_{a_k})`.
/// The cycles must partition `{1..r}`.
pub fn trace_cycles(cyc: &[Vec<usize>], a: &MatrixTuple) -> Result<Rat> {
    let mut seen = vec![false; a.r()];
    for c in cyc {
        for &x in c {
            if x == 0 || x > a.r() {
                return Err(Error::LetterOutOfRange { letter: x, alphabet: a.r() });
            }
            if std::mem::replace(&mut seen[x - 1], true) {
                return Err(Error::DimensionMismatch(format!("letter {x} appears in two cycles")));
            }
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::DimensionMismatch("cycles do not cover every matrix".into()));
    }
    let mut t = Rat::one();
    for c in cyc {
        if c.is_empty() {
            continue;
        }
        t *= trace_monomial(&Word::from_letters(c.clone()), a)?;
        if t.is_zero() {
            break;
        }
    }
    Ok(t)
}

/// `T_sigma` for a permutation given by its images on `0..r`.
pub fn trace_permutation(perm: &[usize], a: &MatrixTuple) -> Result<Rat> {
    if perm.len() != a.r() {
        return Err(Error::ArityMismatch { expected: a.r(), got: perm.len() });
    }
    trace_cycles(&cycles(perm), a)
}

/// `sum_{sigma in S_{m+1}} sign(sigma) T_sigma(U_1, ..., U_{m+1})`.
pub fn fundamental_identity_residual(m: usize, us: &[Mat]) -> Result<Rat> {
    if us.len() != m + 1 {
        return Err(Error::DimensionMismatch(format!("{} matrices given, need {}", us.len(), m + 1)));
    }
    let t = MatrixTuple::new(us.to_vec())?;
    if t.m() != m {
        return Err(Error::DimensionMismatch(format!("matrices are {}x{}, expected {m}x{m}", t.m(), t.m())));
    }
    let mut total = Rat::zero();
    for perm in (0..=m).permutations(m + 1) {
        let v = trace_permutation(&perm, &t)?;
        if sign(&perm) > 0 {
            total += v;
        } else {
            total -= v;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn single_trace() {
        let a = MatrixTuple::new(vec![Mat::from_i64(&[&[1, 2], &[3, 4]])]).unwrap();
        assert_eq!(trace_monomial(&Word::from_letters(vec![1]), &a).unwrap(), rat(5));
    }

    #[test]
    fn swap_matrix_trace() {
        let a = MatrixTuple::new(vec![Mat::identity(2), Mat::from_i64(&[&[0, 1], &[1, 0]])]).unwrap();
        assert_eq!(trace_monomial(&Word::from_letters(vec![1, 2]), &a).unwrap(), rat(0));
        assert_eq!(
            trace_monomial(&Word::from_letters(vec![3]), &a),
            Err(Error::LetterOutOfRange { letter: 3, alphabet: 2 })
        );
    }

    #[test]
    fn permutation_form() {
        let a = MatrixTuple::new(vec![Mat::from_i64(&[&[1, 2], &[3, 4]]), Mat::from_i64(&[&[0, 1], &[1, 0]])]).unwrap();
        // identity: tr(A1) tr(A2) = 5 * 0; transposition: tr(A1 A2) = 2 + 3.
        assert_eq!(trace_permutation(&[0, 1], &a).unwrap(), rat(0));
        assert_eq!(trace_permutation(&[1, 0], &a).unwrap(), rat(5));
        assert_eq!(sign(&[1, 0]), -1);
        assert_eq!(sign(&[1, 2, 0]), 1);
        assert!(trace_cycles(&[vec![1]], &a).is_err());
    }

    #[test]
    fn cayley_hamilton_2x2() {
        let us = vec![
            Mat::from_i64(&[&[1, -2], &[5, 3]]),
            Mat::from_i64(&[&[0, 7], &[-1, 2]]),
            Mat::from_i64(&[&[4, 4], &[1, -6]]),
        ];
        assert_eq!(fundamental_identity_residual(2, &us).unwrap(), rat(0));
        assert!(fundamental_identity_residual(2, &us[..2]).is_err());
    }
}
