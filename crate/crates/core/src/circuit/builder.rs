use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{skew, Circuit, Node, NodeId};
use crate::algebra::Rat;

/// Incremental circuit construction. Input and constant leaves are shared;
/// everything else is appended as written.
#[derive(Clone, Debug)]
pub struct Builder {
    nodes: Vec<Node>,
    arity: usize,
    inputs: Vec<Option<NodeId>>,
    consts: HashMap<Rat, NodeId>,
}

impl Builder {
    pub fn new(arity: usize) -> Self {
        Builder { nodes: Vec::new(), arity, inputs: vec![None; arity], consts: HashMap::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, n: Node) -> NodeId {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    pub fn input(&mut self, i: usize) -> NodeId {
        assert!(i < self.arity, "input {i} out of range for arity {}", self.arity);
        if let Some(id) = self.inputs[i] {
            return id;
        }
        let id = self.push(Node::Input(i));
        self.inputs[i] = Some(id);
        id
    }

    pub fn constant(&mut self, c: Rat) -> NodeId {
        if let Some(&id) = self.consts.get(&c) {
            return id;
        }
        let id = self.push(Node::Const(c.clone()));
        self.consts.insert(c, id);
        id
    }

    pub fn zero(&mut self) -> NodeId {
        self.constant(Rat::zero())
    }

    pub fn one(&mut self) -> NodeId {
        self.constant(Rat::one())
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(Node::Add(a, b))
    }

    pub fn mul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(Node::Mul(a, b))
    }

    /// `a^e`; `e = 0` gives the constant 1 and `e = 1` returns `a`.
    pub fn pow(&mut self, a: NodeId, e: u32) -> NodeId {
        match e {
            0 => self.one(),
            1 => a,
            _ => self.push(Node::Pow(a, e)),
        }
    }

    /// `c * a`, skipping the product when `c = 1`.
    pub fn scale(&mut self, c: &Rat, a: NodeId) -> NodeId {
        if c.is_one() {
            return a;
        }
        let k = self.constant(c.clone());
        self.mul(k, a)
    }

    pub fn neg(&mut self, a: NodeId) -> NodeId {
        self.scale(&-Rat::one(), a)
    }

    pub fn sub(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let nb = self.neg(b);
        self.add(a, nb)
    }

    /// Left-to-right sum; the empty sum is the constant 0.
    pub fn sum(&mut self, terms: &[NodeId]) -> NodeId {
        match terms.split_first() {
            None => self.zero(),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &t| self.add(acc, t)),
        }
    }

    /// Left-to-right product; the empty product is the constant 1.
    pub fn product(&mut self, factors: &[NodeId]) -> NodeId {
        match factors.split_first() {
            None => self.one(),
            Some((&first, rest)) => rest.iter().fold(first, |acc, &t| self.mul(acc, t)),
        }
    }

    /// `sum_i c_i * x_i` with zero coefficients skipped.
    pub fn linear(&mut self, terms: &[(NodeId, Rat)]) -> NodeId {
        let parts: Vec<NodeId> = terms
            .iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(x, c)| self.scale(c, *x))
            .collect();
        self.sum(&parts)
    }

    /// A fresh copy of the sub-circuit rooted at `root`. Leaves are shared,
    /// sharing inside the sub-circuit is preserved.
    pub fn copy(&mut self, root: NodeId) -> NodeId {
        if self.nodes[root].is_leaf() {
            return root;
        }
        let mut map: HashMap<NodeId, NodeId> = HashMap::new();
        let mut order = Vec::new();
        let mut stack = vec![(root, false)];
        let mut seen = std::collections::HashSet::new();
        while let Some((x, expanded)) = stack.pop() {
            if expanded {
                order.push(x);
                continue;
            }
            if self.nodes[x].is_leaf() || !seen.insert(x) {
                continue;
            }
            stack.push((x, true));
            for a in self.nodes[x].args() {
                stack.push((a, false));
            }
        }
        for x in order {
            let remap = |a: NodeId, map: &HashMap<NodeId, NodeId>| *map.get(&a).unwrap_or(&a);
            let n = match self.nodes[x] {
                Node::Add(a, b) => Node::Add(remap(a, &map), remap(b, &map)),
                Node::Mul(a, b) => Node::Mul(remap(a, &map), remap(b, &map)),
                Node::Pow(a, e) => Node::Pow(remap(a, &map), e),
                _ => unreachable!("leaves are not copied"),
            };
            let id = self.push(n);
            map.insert(x, id);
        }
        map[&root]
    }

    /// Appends a copy of `other`. Each place where `other` reads input `i`
    /// gets its own node from `input(self, i)`, so callers can substitute
    /// fresh expressions per use site without creating sharing.
    pub fn embed(&mut self, other: &Circuit, mut input: impl FnMut(&mut Builder, usize) -> NodeId) -> Vec<NodeId> {
        let mut map: Vec<NodeId> = Vec::with_capacity(other.nodes.len());
        for node in &other.nodes {
            let mut arg = |this: &mut Builder, a: NodeId| match other.nodes[a] {
                Node::Input(i) => input(this, i),
                _ => map[a],
            };
            let id = match *node {
                // Placeholder; inputs are materialized at each use.
                Node::Input(_) => usize::MAX,
                Node::Const(ref c) => self.constant(c.clone()),
                Node::Add(a, b) => {
                    let (x, y) = (arg(self, a), arg(self, b));
                    self.add(x, y)
                }
                Node::Mul(a, b) => {
                    let (x, y) = (arg(self, a), arg(self, b));
                    self.mul(x, y)
                }
                Node::Pow(a, e) => {
                    let x = arg(self, a);
                    self.pow(x, e)
                }
            };
            map.push(id);
        }
        other
            .outputs
            .iter()
            .map(|&o| match other.nodes[o] {
                Node::Input(i) => input(self, i),
                _ => map[o],
            })
            .collect()
    }

    /// Drops nodes unreachable from `outputs` and computes the weakly-skew
    /// flag.
    pub fn finish(self, outputs: Vec<NodeId>) -> Circuit {
        let (nodes, outputs) = prune(self.nodes, outputs);
        let flag = skew::is_weakly_skew(&nodes, &outputs);
        Circuit { nodes, outputs, arity: self.arity, weakly_skew: flag }
    }
}

pub(super) fn prune(nodes: Vec<Node>, outputs: Vec<NodeId>) -> (Vec<Node>, Vec<NodeId>) {
    let mut live = vec![false; nodes.len()];
    for &o in &outputs {
        live[o] = true;
    }
    for id in (0..nodes.len()).rev() {
        if live[id] {
            for a in nodes[id].args() {
                live[a] = true;
            }
        }
    }
    let mut index = vec![usize::MAX; nodes.len()];
    let mut kept = Vec::new();
    for (id, node) in nodes.into_iter().enumerate() {
        if !live[id] {
            continue;
        }
        index[id] = kept.len();
        kept.push(match node {
            Node::Add(a, b) => Node::Add(index[a], index[b]),
            Node::Mul(a, b) => Node::Mul(index[a], index[b]),
            Node::Pow(a, e) => Node::Pow(index[a], e),
            leaf => leaf,
        });
    }
    let outputs = outputs.into_iter().map(|o| index[o]).collect();
    (kept, outputs)
}
