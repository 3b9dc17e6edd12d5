use num_traits::{One, Zero};

use super::{Builder, Circuit, Node, NodeId};
use crate::algebra::rat::pow_rat;
use crate::algebra::Rat;
use crate::error::{Error, Result};

/// Replacement for one input during [`Circuit::substitute`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSub {
    Input(usize),
    Const(Rat),
}

#[derive(Clone)]
enum Val {
    K(Rat),
    N(NodeId),
}

impl Circuit {
    /// Replaces input `i` by `subs[i]` and folds constants. The result has
    /// `new_arity` inputs.
    pub fn substitute(&self, subs: &[InputSub], new_arity: usize) -> Result<Circuit> {
        if subs.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: subs.len() });
        }
        for s in subs {
            if let InputSub::Input(j) = s {
                if *j >= new_arity {
                    return Err(Error::IndexOutOfRange(format!("input {j} for arity {new_arity}")));
                }
            }
        }
        let mut b = Builder::new(new_arity);
        let mut vals: Vec<Val> = Vec::with_capacity(self.nodes.len());
        let node_of = |b: &mut Builder, v: &Val| match v {
            Val::K(c) => b.constant(c.clone()),
            Val::N(n) => *n,
        };
        for node in &self.nodes {
            let v = match node {
                Node::Input(i) => match &subs[*i] {
                    InputSub::Input(j) => Val::N(b.input(*j)),
                    InputSub::Const(c) => Val::K(c.clone()),
                },
                Node::Const(c) => Val::K(c.clone()),
                Node::Add(x, y) => match (&vals[*x], &vals[*y]) {
                    (Val::K(p), Val::K(q)) => Val::K(p + q),
                    (Val::K(p), other) | (other, Val::K(p)) if p.is_zero() => other.clone(),
                    (p, q) => {
                        let (p, q) = (p.clone(), q.clone());
                        let (l, r) = (node_of(&mut b, &p), node_of(&mut b, &q));
                        Val::N(b.add(l, r))
                    }
                },
                Node::Mul(x, y) => match (&vals[*x], &vals[*y]) {
                    (Val::K(p), Val::K(q)) => Val::K(p * q),
                    (Val::K(p), _) | (_, Val::K(p)) if p.is_zero() => Val::K(Rat::zero()),
                    (Val::K(p), other) | (other, Val::K(p)) if p.is_one() => other.clone(),
                    (p, q) => {
                        let (p, q) = (p.clone(), q.clone());
                        let (l, r) = (node_of(&mut b, &p), node_of(&mut b, &q));
                        Val::N(b.mul(l, r))
                    }
                },
                Node::Pow(x, e) => match &vals[*x] {
                    Val::K(p) => Val::K(pow_rat(p, *e)),
                    Val::N(n) => Val::N(b.pow(*n, *e)),
                },
            };
            vals.push(v);
        }
        let outputs: Vec<NodeId> = self
            .outputs
            .iter()
            .map(|&o| {
                let v = vals[o].clone();
                node_of(&mut b, &v)
            })
            .collect();
        Ok(b.finish(outputs))
    }

    /// Fixes the inputs listed in `assignments`; the remaining inputs are
    /// renumbered in their original order.
    pub fn specialize(&self, assignments: &[(usize, Rat)]) -> Result<Circuit> {
        let mut fixed: Vec<Option<Rat>> = vec![None; self.arity];
        for (i, v) in assignments {
            if *i >= self.arity {
                return Err(Error::IndexOutOfRange(format!("input {i} for arity {}", self.arity)));
            }
            fixed[*i] = Some(v.clone());
        }
        let mut next = 0;
        let subs: Vec<InputSub> = fixed
            .into_iter()
            .map(|f| match f {
                Some(v) => InputSub::Const(v),
                None => {
                    next += 1;
                    InputSub::Input(next - 1)
                }
            })
            .collect();
        self.substitute(&subs, next)
    }

    /// Constant folding and dead-node removal.
    pub fn simplify(&self) -> Circuit {
        let subs: Vec<InputSub> = (0..self.arity).map(InputSub::Input).collect();
        self.substitute(&subs, self.arity).expect("identity substitution")
    }

    /// Circuit keeping only the listed outputs.
    pub fn select_outputs(&self, which: &[usize]) -> Result<Circuit> {
        let mut outs = Vec::with_capacity(which.len());
        for &w in which {
            let o = *self
                .outputs
                .get(w)
                .ok_or_else(|| Error::IndexOutOfRange(format!("output {w} of {}", self.outputs.len())))?;
            outs.push(o);
        }
        let (nodes, outputs) = super::builder::prune(self.nodes.clone(), outs);
        Circuit::new(nodes, outputs, self.arity)
    }

    /// True when every output folded to the constant 0.
    pub fn is_syntactically_zero(&self) -> bool {
        self.outputs.iter().all(|&o| matches!(&self.nodes[o], Node::Const(c) if c.is_zero()))
    }
}
