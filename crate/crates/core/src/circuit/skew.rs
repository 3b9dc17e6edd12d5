//! The weakly-skew structural condition.
//!
//! A product gate is skew-admissible when one of its arguments roots a
//! sub-circuit that is private to it: the argument feeds only that gate, is
//! not an output, and every node below it is used only from inside the
//! sub-circuit. Input and constant leaves count as private (they can be
//! duplicated at no cost). `Pow(a, e)` with `e >= 2` is an `e`-fold product
//! and needs `a` private.

use super::{Node, NodeId};

struct Checker<'a> {
    nodes: &'a [Node],
    uses: Vec<u32>,
    is_output: Vec<bool>,
    stamp: Vec<u32>,
    generation: u32,
    stack: Vec<NodeId>,
    members: Vec<NodeId>,
}

impl<'a> Checker<'a> {
    fn new(nodes: &'a [Node], outputs: &[NodeId]) -> Self {
        let mut uses = vec![0u32; nodes.len()];
        for node in nodes {
            for a in node.args() {
                uses[a] += 1;
            }
        }
        let mut is_output = vec![false; nodes.len()];
        for &o in outputs {
            is_output[o] = true;
        }
        Checker {
            nodes,
            uses,
            is_output,
            stamp: vec![0; nodes.len()],
            generation: 0,
            stack: Vec::new(),
            members: Vec::new(),
        }
    }

    /// `Some(answer)`, or `None` if the sub-circuit exceeds `budget` nodes.
    fn private(&mut self, x: NodeId, budget: usize) -> Option<bool> {
        if self.nodes[x].is_leaf() {
            return Some(true);
        }
        if self.uses[x] != 1 || self.is_output[x] {
            return Some(false);
        }
        self.generation += 1;
        let g = self.generation;
        self.stack.clear();
        self.members.clear();
        self.stack.push(x);
        self.stamp[x] = g;
        let mut internal_edges: u64 = 0;
        while let Some(y) = self.stack.pop() {
            self.members.push(y);
            if self.members.len() > budget {
                return None;
            }
            for a in self.nodes[y].args() {
                if self.nodes[a].is_leaf() {
                    continue;
                }
                internal_edges += 1;
                if self.stamp[a] != g {
                    self.stamp[a] = g;
                    self.stack.push(a);
                }
            }
        }
        let mut inbound: u64 = 0;
        for &y in &self.members {
            if y != x {
                if self.is_output[y] {
                    return Some(false);
                }
                inbound += u64::from(self.uses[y]);
            }
        }
        Some(inbound == internal_edges)
    }

    fn either_private(&mut self, a: NodeId, b: NodeId) -> bool {
        if a == b {
            return self.nodes[a].is_leaf();
        }
        let mut budget = 16usize;
        loop {
            let ra = self.private(a, budget);
            if ra == Some(true) {
                return true;
            }
            let rb = self.private(b, budget);
            if rb == Some(true) {
                return true;
            }
            if ra == Some(false) && rb == Some(false) {
                return false;
            }
            budget = budget.saturating_mul(4);
        }
    }
}

pub(super) fn is_weakly_skew(nodes: &[Node], outputs: &[NodeId]) -> bool {
    let mut ck = Checker::new(nodes, outputs);
    for node in nodes {
        let ok = match *node {
            Node::Mul(a, b) => ck.either_private(a, b),
            Node::Pow(a, e) if e >= 2 => ck.private(a, usize::MAX) == Some(true),
            _ => true,
        };
        if !ok {
            return false;
        }
    }
    true
}
