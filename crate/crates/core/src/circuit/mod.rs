//! Straight-line programs over `Rat`.
//!
//! Nodes are stored in topological order: every argument refers to an
//! earlier node. Circuits are immutable once built; [`Builder`] is the only
//! way to assemble one in code, and [`Circuit::from_parts`] checks externally
//! supplied node lists.

mod builder;
mod components;
mod expand;
mod skew;
mod transform;
mod wire;

use num_traits::Zero;

use crate::algebra::rat::pow_rat;
use crate::algebra::Rat;
use crate::error::{Error, Result};

pub use builder::Builder;
pub use components::{homogeneous_components, vandermonde_weights};
pub use expand::{from_mpoly, recognize_diag3, Diag3Shape, EXPANSION_LIMIT};
pub use transform::InputSub;

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Input(usize),
    Const(Rat),
    Add(NodeId, NodeId),
    Mul(NodeId, NodeId),
    Pow(NodeId, u32),
}

impl Node {
    pub fn args(&self) -> impl Iterator<Item = NodeId> {
        let (a, b) = match *self {
            Node::Input(_) | Node::Const(_) => (None, None),
            Node::Add(x, y) | Node::Mul(x, y) => (Some(x), Some(y)),
            Node::Pow(x, _) => (Some(x), None),
        };
        a.into_iter().chain(b)
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Node::Input(_) | Node::Const(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    nodes: Vec<Node>,
    outputs: Vec<NodeId>,
    arity: usize,
    weakly_skew: bool,
}

/// Result of [`Circuit::validate`].
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct ValidationReport {
    pub nodes: usize,
    pub edges: usize,
    pub outputs: usize,
    pub arity: usize,
    pub stored_weakly_skew: bool,
    pub weakly_skew: bool,
}

impl ValidationReport {
    pub fn consistent(&self) -> bool {
        self.stored_weakly_skew == self.weakly_skew
    }
}

impl Circuit {
    /// Checks structure and keeps `stored_flag` as given; use
    /// [`Circuit::validate`] to compare it with the recomputed condition.
    pub fn from_parts(nodes: Vec<Node>, outputs: Vec<NodeId>, arity: usize, stored_flag: bool) -> Result<Circuit> {
        check_structure(&nodes, &outputs, arity)?;
        Ok(Circuit { nodes, outputs, arity, weakly_skew: stored_flag })
    }

    /// Like [`Circuit::from_parts`] but computes the weakly-skew flag.
    pub fn new(nodes: Vec<Node>, outputs: Vec<NodeId>, arity: usize) -> Result<Circuit> {
        check_structure(&nodes, &outputs, arity)?;
        let flag = skew::is_weakly_skew(&nodes, &outputs);
        Ok(Circuit { nodes, outputs, arity, weakly_skew: flag })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn outputs(&self) -> &[NodeId] {
        &self.outputs
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn weakly_skew(&self) -> bool {
        self.weakly_skew
    }

    /// Total number of edges.
    pub fn size(&self) -> usize {
        self.nodes.iter().map(|n| n.args().count()).sum()
    }

    pub fn validate(&self) -> Result<ValidationReport> {
        check_structure(&self.nodes, &self.outputs, self.arity)?;
        Ok(ValidationReport {
            nodes: self.nodes.len(),
            edges: self.size(),
            outputs: self.outputs.len(),
            arity: self.arity,
            stored_weakly_skew: self.weakly_skew,
            weakly_skew: skew::is_weakly_skew(&self.nodes, &self.outputs),
        })
    }

    /// Bottom-up evaluation in an arbitrary value domain.
    pub fn fold<T: Clone>(&self, mut f: impl FnMut(&Node, &[T]) -> Result<T>) -> Result<Vec<T>> {
        let mut values: Vec<T> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let v = f(node, &values)?;
            values.push(v);
        }
        Ok(self.outputs.iter().map(|&o| values[o].clone()).collect())
    }

    pub fn eval(&self, point: &[Rat]) -> Result<Vec<Rat>> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, got: point.len() });
        }
        self.fold(|node, vals: &[Rat]| {
            Ok(match node {
                Node::Input(i) => point[*i].clone(),
                Node::Const(c) => c.clone(),
                Node::Add(a, b) => &vals[*a] + &vals[*b],
                Node::Mul(a, b) => {
                    if vals[*a].is_zero() || vals[*b].is_zero() {
                        Rat::zero()
                    } else {
                        &vals[*a] * &vals[*b]
                    }
                }
                Node::Pow(a, e) => pow_rat(&vals[*a], *e),
            })
        })
    }

    /// Evaluation of the single output of a one-output circuit.
    pub fn eval1(&self, point: &[Rat]) -> Result<Rat> {
        let mut v = self.eval(point)?;
        if v.len() != 1 {
            return Err(Error::ShapeMismatch(format!("expected one output, circuit has {}", v.len())));
        }
        Ok(v.pop().expect("one output"))
    }

    /// Syntactic degree bound per output.
    pub fn degree_bound(&self) -> Vec<u64> {
        self.degree_bound_in(&(0..self.arity).collect::<Vec<_>>())
    }

    /// Syntactic degree bound in the inputs listed in `group`.
    pub fn degree_bound_in(&self, group: &[usize]) -> Vec<u64> {
        let mut in_group = vec![false; self.arity];
        for &g in group {
            if g < self.arity {
                in_group[g] = true;
            }
        }
        let mut deg: Vec<u64> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let d = match node {
                Node::Input(i) => u64::from(in_group[*i]),
                Node::Const(_) => 0,
                Node::Add(a, b) => deg[*a].max(deg[*b]),
                Node::Mul(a, b) => deg[*a].saturating_add(deg[*b]),
                Node::Pow(a, e) => deg[*a].saturating_mul(u64::from(*e)),
            };
            deg.push(d);
        }
        self.outputs.iter().map(|&o| deg[o]).collect()
    }
}

fn check_structure(nodes: &[Node], outputs: &[NodeId], arity: usize) -> Result<()> {
    for (id, node) in nodes.iter().enumerate() {
        match node {
            Node::Input(i) if *i >= arity => {
                return Err(Error::MalformedCircuit { node: id, reason: format!("input {i} but arity is {arity}") });
            }
            Node::Pow(_, 0) => {
                return Err(Error::MalformedCircuit { node: id, reason: "exponent must be at least 1".into() });
            }
            _ => {}
        }
        for a in node.args() {
            if a >= id {
                return Err(Error::MalformedCircuit { node: id, reason: format!("argument {a} is not an earlier node") });
            }
        }
    }
    for &o in outputs {
        if o >= nodes.len() {
            return Err(Error::MalformedCircuit { node: o, reason: "output refers to a missing node".into() });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat;

    fn ints(xs: &[i64]) -> Vec<Rat> {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn x1x2_plus_x3() {
        let mut b = Builder::new(3);
        let (x1, x2, x3) = (b.input(0), b.input(1), b.input(2));
        let p = b.mul(x1, x2);
        let s = b.add(p, x3);
        let c = b.finish(vec![s]);
        assert_eq!(c.eval(&ints(&[2, 3, 4])).unwrap(), ints(&[10]));
        assert_eq!(c.eval(&ints(&[2, 3])), Err(Error::ArityMismatch { expected: 3, got: 2 }));
    }

    #[test]
    fn det2_circuit() {
        let mut b = Builder::new(4);
        let x: Vec<_> = (0..4).map(|i| b.input(i)).collect();
        let ad = b.mul(x[0], x[3]);
        let bc = b.mul(x[1], x[2]);
        let d = b.sub(ad, bc);
        let c = b.finish(vec![d]);
        assert_eq!(c.eval1(&ints(&[1, 2, 3, 4])).unwrap(), rat(-2));
        assert!(c.weakly_skew());
    }

    #[test]
    fn degree_bounds() {
        let mut b = Builder::new(2);
        let (x, y) = (b.input(0), b.input(1));
        let m = b.mul(x, y);
        let p = b.pow(x, 5);
        let k = b.constant(rat(7));
        let c = b.finish(vec![m, p, k]);
        assert_eq!(c.degree_bound(), vec![2, 5, 0]);
        assert_eq!(c.degree_bound_in(&[1]), vec![1, 0, 0]);
    }

    #[test]
    fn forward_reference_rejected() {
        let nodes = vec![Node::Input(0), Node::Add(0, 2), Node::Input(1)];
        let err = Circuit::from_parts(nodes, vec![1], 2, false).unwrap_err();
        assert!(matches!(err, Error::MalformedCircuit { node: 1, .. }));
    }

    #[test]
    fn shared_mul_arguments_are_not_weakly_skew() {
        // s = x + y is used by two products, and both arguments of the last
        // product are shared.
        let nodes = vec![
            Node::Input(0),
            Node::Input(1),
            Node::Add(0, 1),
            Node::Add(1, 0),
            Node::Mul(2, 3),
            Node::Mul(2, 3),
            Node::Mul(4, 5),
        ];
        let c = Circuit::new(nodes.clone(), vec![6, 4], 2).unwrap();
        assert!(!c.weakly_skew());
        let stored = Circuit::from_parts(nodes, vec![6, 4], 2, true).unwrap();
        let report = stored.validate().unwrap();
        assert!(!report.weakly_skew);
        assert!(!report.consistent());
    }

    #[test]
    fn exclusive_argument_is_weakly_skew() {
        // Node 2 is shared by both products; 3 and 5 are private.
        let nodes = vec![
            Node::Input(0),
            Node::Input(1),
            Node::Add(0, 1),
            Node::Add(0, 1),
            Node::Mul(2, 3),
            Node::Add(1, 1),
            Node::Mul(2, 5),
            Node::Add(4, 6),
        ];
        let c = Circuit::new(nodes, vec![7], 2).unwrap();
        assert!(c.weakly_skew());
    }

    #[test]
    fn pow_of_shared_subcircuit_is_not_weakly_skew() {
        let nodes = vec![Node::Input(0), Node::Input(1), Node::Add(0, 1), Node::Pow(2, 2), Node::Add(3, 2)];
        assert!(!Circuit::new(nodes, vec![4], 2).unwrap().weakly_skew());
        let nodes = vec![Node::Input(0), Node::Input(1), Node::Add(0, 1), Node::Pow(2, 3)];
        assert!(Circuit::new(nodes, vec![3], 2).unwrap().weakly_skew());
    }
}
