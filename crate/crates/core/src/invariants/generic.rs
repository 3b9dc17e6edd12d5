//! The generic trace invariant `T_l(X, U) = trace((sum_i X_i (x) U_i)^l)`
//! and the branching-program form `trace(prod_j sum_i y_j^i U_i)`.

use num_traits::Zero;

use super::tuple::MatrixTuple;
use super::words::necklaces;
use super::trace::trace_monomial;
use crate::algebra::{Mat, Rat};
use crate::circuit::{Builder, Circuit, NodeId};
use crate::error::{Error, Result};

/// `trace(M_0 M_1 ... M_{l-1})` for `n x n` matrices whose entries are built
/// on demand. Every entry is requested afresh at each use, so if `entry`
/// returns new nodes each time, every product gate has a private right factor.
fn trace_of_chain(
    b: &mut Builder,
    n: usize,
    l: usize,
    mut entry: impl FnMut(&mut Builder, usize, usize, usize) -> NodeId,
) -> NodeId {
    assert!(l >= 1);
    if l == 1 {
        let diag: Vec<NodeId> = (0..n).map(|p| entry(b, 0, p, p)).collect();
        return b.sum(&diag);
    }
    let mut cur: Vec<Vec<NodeId>> = (0..n).map(|p| (0..n).map(|q| entry(b, 0, p, q)).collect()).collect();
    for step in 1..l - 1 {
        let mut next = vec![vec![0; n]; n];
        for p in 0..n {
            for q in 0..n {
                let terms: Vec<NodeId> = (0..n)
                    .map(|t| {
                        let right = entry(b, step, t, q);
                        b.mul(cur[p][t], right)
                    })
                    .collect();
                next[p][q] = b.sum(&terms);
            }
        }
        cur = next;
    }
    let mut diag = Vec::with_capacity(n * n);
    for p in 0..n {
        for t in 0..n {
            let right = entry(b, l - 1, t, p);
            diag.push(b.mul(cur[p][t], right));
        }
    }
    b.sum(&diag)
}

/// Input layout of [`generic_trace_circuit`]: the `r` matrices `X_i`
/// (`k x k`, row-major) come first, then the `r` matrices `U_i` (`m x m`).
pub fn generic_input_index(m: usize, r: usize, k: usize) -> impl Fn(bool, usize, usize, usize) -> usize {
    move |is_u, i, row, col| {
        if is_u {
            r * k * k + i * m * m + row * m + col
        } else {
            i * k * k + row * k + col
        }
    }
}

/// Weakly-skew circuit for `trace((sum_i X_i (x) U_i)^l)` with `k x k`
/// matrices `X_i` and `m x m` matrices `U_i`.
pub fn generic_trace_circuit(m: usize, r: usize, l: usize, k: usize) -> Result<Circuit> {
    if m == 0 || r == 0 || l == 0 || k == 0 {
        return Err(Error::DimensionMismatch("m, r, l and k must be positive".into()));
    }
    let idx = generic_input_index(m, r, k);
    let mut b = Builder::new(r * (k * k + m * m));
    let n = k * m;
    let out = trace_of_chain(&mut b, n, l, |b, _, p, q| {
        let (ra, rc) = (p / m, p % m);
        let (cb, cd) = (q / m, q % m);
        let terms: Vec<NodeId> = (0..r)
            .map(|i| {
                let x = b.input(idx(false, i, ra, cb));
                let u = b.input(idx(true, i, rc, cd));
                b.mul(x, u)
            })
            .collect();
        b.sum(&terms)
    });
    Ok(b.finish(vec![out]))
}

/// `sum_i X_i (x) U_i`.
pub fn kron_sum(x: &MatrixTuple, u: &MatrixTuple) -> Result<Mat> {
    if x.r() != u.r() {
        return Err(Error::DimensionMismatch(format!("{} X matrices vs {} U matrices", x.r(), u.r())));
    }
    let n = x.m() * u.m();
    let mut acc = Mat::zeros(n, n);
    for i in 0..x.r() {
        acc = &acc + &x.get(i).kron(u.get(i));
    }
    Ok(acc)
}

/// Dense `T_l(X, U)`.
pub fn generic_trace_dense(x: &MatrixTuple, u: &MatrixTuple, l: usize) -> Result<Rat> {
    Ok(kron_sum(x, u)?.pow(l as u32).trace())
}

/// `T_l(X,U) - sum_{[a], |a| = l} |[a]| T_a(X) T_a(U)`.
pub fn expansion_residual(m: usize, r: usize, l: usize, x: &MatrixTuple, u: &MatrixTuple) -> Result<Rat> {
    if u.m() != m || u.r() != r || x.r() != r {
        return Err(Error::DimensionMismatch(format!(
            "expected r={r} matrices, U of size {m}; got X r={}, U r={} size {}",
            x.r(),
            u.r(),
            u.m()
        )));
    }
    if l == 0 {
        return Err(Error::DimensionMismatch("trace length must be positive".into()));
    }
    let mut total = generic_trace_dense(x, u, l)?;
    for nk in necklaces(r, l) {
        let tx = trace_monomial(&nk.canonical, x)?;
        if tx.is_zero() {
            continue;
        }
        let tu = trace_monomial(&nk.canonical, u)?;
        total -= Rat::from_integer(nk.orbit_size.into()) * tx * tu;
    }
    Ok(total)
}

fn roabp_chain(b: &mut Builder, m: usize, r: usize, l: usize, y0: usize, u0: usize) -> NodeId {
    trace_of_chain(b, m, l, |b, j, p, q| {
        let terms: Vec<NodeId> = (0..r)
            .map(|i| {
                let y = b.input(y0 + j);
                let yp = b.pow(y, (i + 1) as u32);
                let u = b.input(u0 + i * m * m + p * m + q);
                b.mul(yp, u)
            })
            .collect();
        b.sum(&terms)
    })
}

/// `trace(prod_{j=1}^l sum_{i=1}^r y_j^i U_i)` over inputs `y_1..y_l`
/// followed by the entries of `U`.
pub fn roabp_trace_circuit(m: usize, r: usize, l: usize) -> Result<Circuit> {
    if m == 0 || r == 0 || l == 0 {
        return Err(Error::DimensionMismatch("m, r and l must be positive".into()));
    }
    let mut b = Builder::new(l + r * m * m);
    let out = roabp_chain(&mut b, m, r, l, 0, l);
    Ok(b.finish(vec![out]))
}

/// Difference of the branching-program traces for `U` and `U'`, inputs
/// `y_1..y_l`, then `U`, then `U'`.
pub fn roabp_difference_circuit(m: usize, r: usize, l: usize) -> Result<Circuit> {
    if m == 0 || r == 0 || l == 0 {
        return Err(Error::DimensionMismatch("m, r and l must be positive".into()));
    }
    let mut b = Builder::new(l + 2 * r * m * m);
    let t1 = roabp_chain(&mut b, m, r, l, 0, l);
    let t2 = roabp_chain(&mut b, m, r, l, 0, l + r * m * m);
    let d = b.sub(t1, t2);
    Ok(b.finish(vec![d]))
}

/// Dense `trace(prod_j sum_i y_j^i U_i)`.
pub fn roabp_trace_dense(y: &[Rat], u: &MatrixTuple) -> Rat {
    let m = u.m();
    let mut acc = Mat::identity(m);
    for yj in y {
        let mut nj = Mat::zeros(m, m);
        let mut power = yj.clone();
        for i in 0..u.r() {
            nj = &nj + &u.get(i).scale(&power);
            power *= yj;
        }
        acc = &acc * &nj;
    }
    acc.trace()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;
    use crate::rng::SeedRng;

    #[test]
    fn scalar_case() {
        let c = generic_trace_circuit(1, 1, 3, 1).unwrap();
        assert_eq!(c.eval1(&[rat(2), rat(3)]).unwrap(), rat(216));
        assert!(c.weakly_skew());
    }

    #[test]
    fn circuit_matches_dense() {
        let mut rng = SeedRng::new(11);
        let c = generic_trace_circuit(2, 2, 2, 4).unwrap();
        assert!(c.weakly_skew());
        for _ in 0..3 {
            let x = MatrixTuple::random(4, 2, -3, 3, &mut rng);
            let u = MatrixTuple::random(2, 2, -3, 3, &mut rng);
            let mut point = x.flatten();
            point.extend(u.flatten());
            assert_eq!(c.eval1(&point).unwrap(), generic_trace_dense(&x, &u, 2).unwrap());
        }
    }

    #[test]
    fn roabp_diag_fixture() {
        let c = roabp_difference_circuit(2, 1, 1).unwrap();
        let mut point = vec![rat(1)];
        point.extend(Mat::diag(&[rat(1), rat(0)]).flat().iter().cloned());
        point.extend(Mat::identity(2).flat().iter().cloned());
        assert_eq!(c.eval1(&point).unwrap(), rat(-1));
        assert!(c.weakly_skew());
    }
}
