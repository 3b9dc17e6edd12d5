use super::{Builder, Circuit, Node, NodeId};
use crate::algebra::mpoly::Vars;
use crate::algebra::MPoly;
use crate::error::{Error, Result};

/// Default term limit for [`Circuit::to_mpoly`].
pub const EXPANSION_LIMIT: usize = 100_000;

impl Circuit {
    /// Expands every output into an explicit polynomial over `vars`, failing
    /// once any intermediate polynomial exceeds `limit` terms.
    pub fn to_mpoly_with(&self, vars: &Vars, limit: usize) -> Result<Vec<MPoly>> {
        if vars.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: vars.len() });
        }
        let check = |p: MPoly| {
            if p.num_terms() > limit {
                Err(Error::ExpansionTooLarge { limit })
            } else {
                Ok(p)
            }
        };
        self.fold(|node, vals: &[MPoly]| match node {
            Node::Input(i) => Ok(MPoly::var(vars, *i)),
            Node::Const(c) => Ok(MPoly::constant(vars, c.clone())),
            Node::Add(a, b) => check(&vals[*a] + &vals[*b]),
            Node::Mul(a, b) => check(&vals[*a] * &vals[*b]),
            Node::Pow(a, e) => {
                let mut acc = vals[*a].clone();
                for _ in 1..*e {
                    acc = check(&acc * &vals[*a])?;
                }
                Ok(acc)
            }
        })
    }

    /// Expansion over variables `x1..xn` with the default term limit.
    pub fn to_mpoly(&self) -> Result<Vec<MPoly>> {
        self.to_mpoly_with(&crate::algebra::indexed_vars("x", self.arity), EXPANSION_LIMIT)
    }
}

/// Circuit computing `p`: a sum of monomials, each built from fresh nodes.
pub fn from_mpoly(p: &MPoly) -> Circuit {
    let mut b = Builder::new(p.nvars());
    let mut terms = Vec::with_capacity(p.num_terms());
    for (e, c) in p.sorted_terms() {
        let mut factors: Vec<NodeId> = Vec::new();
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                let x = b.input(i);
                factors.push(b.pow(x, k));
            }
        }
        let mono = b.product(&factors);
        terms.push(if factors.is_empty() { b.constant(c.clone()) } else { b.scale(c, mono) });
    }
    let s = b.sum(&terms);
    b.finish(vec![s])
}

/// Shape of a diagonal depth-3 circuit: a sum of `top_fan_in` powers of
/// affine forms, the largest power being `max_power`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub struct Diag3Shape {
    pub top_fan_in: usize,
    pub max_power: u32,
}

/// Recognizes single-output circuits of the form
/// `sum_s w_s * L_s^{e_s} + const` with affine `L_s`.
pub fn recognize_diag3(c: &Circuit) -> Option<Diag3Shape> {
    if c.outputs().len() != 1 {
        return None;
    }
    let nodes = c.nodes();
    let mut has_input = vec![false; nodes.len()];
    let mut affine = vec![false; nodes.len()];
    // (fan-in, max power) for sums of scaled powers of affine forms.
    let mut top: Vec<Option<(usize, u32)>> = vec![None; nodes.len()];
    for (id, node) in nodes.iter().enumerate() {
        has_input[id] = match *node {
            Node::Input(_) => true,
            Node::Const(_) => false,
            Node::Add(a, b) | Node::Mul(a, b) => has_input[a] || has_input[b],
            Node::Pow(a, _) => has_input[a],
        };
        affine[id] = match *node {
            Node::Input(_) | Node::Const(_) => true,
            Node::Add(a, b) => affine[a] && affine[b],
            Node::Mul(a, b) => (!has_input[a] && affine[b]) || (!has_input[b] && affine[a]),
            Node::Pow(a, _) => !has_input[a],
        };
        top[id] = if !has_input[id] {
            Some((0, 0))
        } else if affine[id] {
            Some((1, 1))
        } else {
            match *node {
                Node::Add(a, b) => match (top[a], top[b]) {
                    (Some((ka, ea)), Some((kb, eb))) => Some((ka + kb, ea.max(eb))),
                    _ => None,
                },
                Node::Mul(a, b) if !has_input[a] => top[b],
                Node::Mul(a, b) if !has_input[b] => top[a],
                Node::Pow(a, e) if affine[a] => Some((1, e)),
                _ => None,
            }
        };
    }
    let (k, e) = top[c.outputs()[0]]?;
    Some(Diag3Shape { top_fan_in: k, max_power: e })
}
