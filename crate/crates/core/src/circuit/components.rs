//! Homogeneous components by interpolation.
//!
//! With `f(t) = C(t*v, x) = sum_c t^c C_c(v, x)` sampled at `t = 1..=max_c+1`,
//! each component is a fixed rational combination of the samples, the
//! weights being the rows of the inverse Vandermonde matrix.

use num_traits::Zero;

use super::{Builder, Circuit, NodeId};
use crate::algebra::rat::{pow_rat, rat_from_u64};
use crate::algebra::{linear_solve, Mat, Rat};
use crate::error::{Error, Result};

/// `w[c][t]` with `C_c = sum_t w[c][t] * C(t_t * v, x)`, `t_t = t + 1`.
pub fn vandermonde_weights(max_c: u32) -> Vec<Vec<Rat>> {
    let n = max_c as usize + 1;
    let v = Mat::from_fn(n, n, |t, c| pow_rat(&rat_from_u64(t as u64 + 1), c as u32));
    // Row c of V^{-1} solves V^T w = e_c.
    let vt = v.transpose();
    (0..n)
        .map(|c| {
            let e: Vec<Rat> = (0..n).map(|i| if i == c { Rat::from_integer(1.into()) } else { Rat::zero() }).collect();
            linear_solve(&vt, &e).expect("Vandermonde matrix with distinct nodes is invertible")
        })
        .collect()
}

/// Circuits `C_0..=C_max_c`, where `C_c` computes the part of each output of
/// `circuit` that has degree exactly `c` in the inputs of `group`.
pub fn homogeneous_components(circuit: &Circuit, group: &[usize], max_c: u32) -> Result<Vec<Circuit>> {
    for &g in group {
        if g >= circuit.arity() {
            return Err(Error::IndexOutOfRange(format!("input {g} for arity {}", circuit.arity())));
        }
    }
    let needed = circuit.degree_bound_in(group).into_iter().max().unwrap_or(0);
    if u64::from(max_c) < needed {
        return Err(Error::DegreeCapTooSmall { cap: max_c, needed: u32::try_from(needed).unwrap_or(u32::MAX) });
    }
    let mut in_group = vec![false; circuit.arity()];
    for &g in group {
        in_group[g] = true;
    }
    let weights = vandermonde_weights(max_c);
    let samples = max_c as usize + 1;
    let mut out = Vec::with_capacity(samples);
    for w in &weights {
        let mut b = Builder::new(circuit.arity());
        let mut per_output: Vec<Vec<NodeId>> = vec![Vec::new(); circuit.outputs().len()];
        for (t, wt) in w.iter().enumerate() {
            if wt.is_zero() {
                continue;
            }
            let scale = rat_from_u64(t as u64 + 1);
            let outs = b.embed(circuit, |b, i| {
                let x = b.input(i);
                if in_group[i] {
                    b.scale(&scale, x)
                } else {
                    x
                }
            });
            for (k, o) in outs.into_iter().enumerate() {
                let term = b.scale(wt, o);
                per_output[k].push(term);
            }
        }
        let outputs: Vec<NodeId> = per_output.iter().map(|terms| b.sum(terms)).collect();
        out.push(b.finish(outputs));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    #[test]
    fn v1_plus_v1v2() {
        let mut b = Builder::new(2);
        let (v1, v2) = (b.input(0), b.input(1));
        let p = b.mul(v1, v2);
        let s = b.add(v1, p);
        let c = b.finish(vec![s]);
        let comps = homogeneous_components(&c, &[0, 1], 2).unwrap();
        let pt = [rat(2), rat(3)];
        let vals: Vec<Rat> = comps.iter().map(|cc| cc.eval1(&pt).unwrap()).collect();
        assert_eq!(vals, vec![rat(0), rat(2), rat(6)]);
        assert_eq!(c.eval1(&pt).unwrap(), rat(8));
        assert!(comps.iter().all(Circuit::weakly_skew));
    }

    #[test]
    fn cap_too_small() {
        let mut b = Builder::new(1);
        let x = b.input(0);
        let p = b.pow(x, 3);
        let c = b.finish(vec![p]);
        assert_eq!(
            homogeneous_components(&c, &[0], 2).unwrap_err(),
            Error::DegreeCapTooSmall { cap: 2, needed: 3 }
        );
    }
}
