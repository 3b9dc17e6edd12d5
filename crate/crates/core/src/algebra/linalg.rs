//! Exact linear algebra by fraction-free (Bareiss) elimination.
//!
//! Rational rows are first scaled to integer rows, which changes neither the
//! solution set nor the rank. Pivots are always the first nonzero entry in the
//! leftmost available column, so the pivot pattern is the lexicographically
//! first one and free variables are set to zero; the resulting particular
//! solution is the one read off the reduced row echelon form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::Mat;
use super::rat::Rat;
use crate::error::{Error, Result};

/// Echelon form of an integer matrix, pivoting only in the first `pivot_cols`
/// columns.
struct Echelon {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    negated: bool,
}

fn integer_rows(rows: &[Vec<Rat>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter().map(|x| x.numer() * (&l / x.denom())).collect()
        })
        .collect()
}

fn bareiss(mut rows: Vec<Vec<BigInt>>, pivot_cols: usize) -> Echelon {
    let p = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut negated = false;
    let mut r = 0;
    for col in 0..pivot_cols {
        if r == p {
            break;
        }
        let Some(pr) = (r..p).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        if pr != r {
            rows.swap(pr, r);
            negated = !negated;
        }
        let (top, bottom) = rows.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let piv = pivot_row[col].clone();
        for row in bottom.iter_mut() {
            let factor = row[col].clone();
            if factor.is_zero() {
                for x in row.iter_mut().skip(col + 1) {
                    *x = (&*x * &piv) / &prev;
                }
            } else {
                for j in col + 1..width {
                    row[j] = (&row[j] * &piv - &factor * &pivot_row[j]) / &prev;
                }
            }
            row[col] = BigInt::zero();
        }
        prev = piv;
        pivots.push(col);
        r += 1;
    }
    Echelon { rows, pivots, negated }
}

/// Back substitution for right-hand-side column `rhs` of an echelon form
/// whose first `q` columns are the coefficient matrix.
fn back_substitute(e: &Echelon, q: usize, rhs: usize) -> Result<Vec<Rat>> {
    let rank = e.pivots.len();
    if e.rows[rank..].iter().any(|row| !row[rhs].is_zero()) {
        return Err(Error::NoSolution);
    }
    let mut x = vec![Rat::zero(); q];
    for (i, &pc) in e.pivots.iter().enumerate().rev() {
        let row = &e.rows[i];
        let mut acc = Rat::from_integer(row[rhs].clone());
        for &pj in &e.pivots[i + 1..] {
            if !row[pj].is_zero() {
                acc -= Rat::from_integer(row[pj].clone()) * &x[pj];
            }
        }
        x[pc] = acc / Rat::from_integer(row[pc].clone());
    }
    Ok(x)
}

fn augmented(a: &Mat, extra: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    (0..a.rows())
        .map(|i| {
            let mut row = a.row(i).to_vec();
            for col in extra {
                row.push(col[i].clone());
            }
            row
        })
        .collect()
}

/// Solves `A x = b` exactly.
pub fn linear_solve(a: &Mat, b: &[Rat]) -> Result<Vec<Rat>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!("{} right-hand sides for {} rows", b.len(), a.rows())));
    }
    let e = bareiss(integer_rows(&augmented(a, &[b.to_vec()])), a.cols());
    back_substitute(&e, a.cols(), a.cols())
}

/// Solves `A X = B` column by column with one elimination.
pub fn linear_solve_many(a: &Mat, bs: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    if bs.iter().any(|b| b.len() != a.rows()) {
        return Err(Error::DimensionMismatch("right-hand side length differs from row count".into()));
    }
    let e = bareiss(integer_rows(&augmented(a, bs)), a.cols());
    (0..bs.len()).map(|k| back_substitute(&e, a.cols(), a.cols() + k)).collect()
}

pub fn rank(a: &Mat) -> usize {
    bareiss(integer_rows(&a.to_rows()), a.cols()).pivots.len()
}

/// Basis of the kernel, one vector per free column (in column order) with
/// that free variable 1 and the other free variables 0.
pub fn nullspace(a: &Mat) -> Vec<Vec<Rat>> {
    let q = a.cols();
    let e = bareiss(integer_rows(&a.to_rows()), q);
    let is_pivot: Vec<bool> = (0..q).map(|c| e.pivots.contains(&c)).collect();
    let mut basis = Vec::new();
    for f in (0..q).filter(|&c| !is_pivot[c]) {
        let mut x = vec![Rat::zero(); q];
        x[f] = Rat::one();
        for (i, &pc) in e.pivots.iter().enumerate().rev() {
            let row = &e.rows[i];
            let mut acc = -Rat::from_integer(row[f].clone());
            for &pj in &e.pivots[i + 1..] {
                if !row[pj].is_zero() {
                    acc -= Rat::from_integer(row[pj].clone()) * &x[pj];
                }
            }
            x[pc] = acc / Rat::from_integer(row[pc].clone());
        }
        basis.push(x);
    }
    basis
}

pub fn inverse(a: &Mat) -> Result<Mat> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
    }
    let n = a.rows();
    let id: Vec<Vec<Rat>> = (0..n).map(|j| (0..n).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
    let e = bareiss(integer_rows(&augmented(a, &id)), n);
    if e.pivots.len() < n {
        return Err(Error::NoSolution);
    }
    let cols: Vec<Vec<Rat>> = (0..n).map(|k| back_substitute(&e, n, n + k)).collect::<Result<_>>()?;
    Ok(Mat::from_fn(n, n, |i, j| cols[j][i].clone()))
}

pub fn det(a: &Mat) -> Result<Rat> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(Rat::one());
    }
    let rows = a.to_rows();
    // Undo the per-row integer scaling afterwards.
    let mut scale = Rat::one();
    for row in &rows {
        let l = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        scale *= Rat::from_integer(l);
    }
    let e = bareiss(integer_rows(&rows), n);
    if e.pivots.len() < n {
        return Ok(Rat::zero());
    }
    let mut d = Rat::from_integer(e.rows[n - 1][n - 1].clone()) / scale;
    if e.negated {
        d = -d;
    }
    Ok(d)
}

/// `A x` equals `b` exactly.
pub fn residual_is_zero(a: &Mat, x: &[Rat], b: &[Rat]) -> bool {
    a.vec_mul(x).iter().zip(b).all(|(l, r)| l == r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::{rat, ratio};

    #[test]
    fn identity_system() {
        assert_eq!(linear_solve(&Mat::identity(2), &[rat(3), rat(5)]).unwrap(), vec![rat(3), rat(5)]);
    }

    #[test]
    fn hand_elimination() {
        let a = Mat::from_i64(&[&[1, 1], &[1, -1]]);
        assert_eq!(linear_solve(&a, &[rat(2), rat(0)]).unwrap(), vec![rat(1), rat(1)]);
    }

    #[test]
    fn inconsistent_system() {
        let a = Mat::from_i64(&[&[1, 1], &[2, 2]]);
        assert_eq!(linear_solve(&a, &[rat(1), rat(3)]), Err(Error::NoSolution));
    }

    #[test]
    fn underdetermined_uses_first_pivots() {
        // x + y + z = 3, y + 2z = 1 -> pivots x, y; z = 0.
        let a = Mat::from_i64(&[&[1, 1, 1], &[0, 1, 2]]);
        assert_eq!(linear_solve(&a, &[rat(3), rat(1)]).unwrap(), vec![rat(2), rat(1), rat(0)]);
    }

    #[test]
    fn rational_entries_and_inverse() {
        let a = Mat::from_rows(vec![vec![ratio(1, 2), rat(1)], vec![rat(3), ratio(-1, 3)]]).unwrap();
        let inv = inverse(&a).unwrap();
        assert_eq!(&a * &inv, Mat::identity(2));
        assert_eq!(det(&a).unwrap(), ratio(-1, 6) - rat(3));
    }

    #[test]
    fn det_with_row_swap() {
        let a = Mat::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(det(&a).unwrap(), rat(-1));
        let b = Mat::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(det(&b).unwrap(), rat(-2));
    }

    #[test]
    fn rank_deficient_rank_and_kernel() {
        let a = Mat::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(rank(&a), 2);
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 1);
        assert!(residual_is_zero(&a, &ns[0], &[rat(0), rat(0), rat(0)]));
        assert_eq!(ns[0][2], rat(1));
    }
}
