//! JSON form: `{"arity", "nodes": [{"id", "op", ...}], "outputs", "weakly_skew"}`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Circuit, Node};
use crate::algebra::rat::serde_rat;
use crate::algebra::Rat;

#[derive(Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
enum WireOp {
    Input { index: usize },
    Const { #[serde(with = "serde_rat")] value: Rat },
    Add { args: [usize; 2] },
    Mul { args: [usize; 2] },
    Pow { args: [usize; 1], exp: u32 },
}

#[derive(Serialize, Deserialize)]
struct WireNode {
    id: usize,
    #[serde(flatten)]
    op: WireOp,
}

#[derive(Serialize, Deserialize)]
struct WireCircuit {
    arity: usize,
    nodes: Vec<WireNode>,
    outputs: Vec<usize>,
    weakly_skew: bool,
}

impl Serialize for Circuit {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let nodes = self
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| WireNode {
                id,
                op: match n {
                    Node::Input(i) => WireOp::Input { index: *i },
                    Node::Const(c) => WireOp::Const { value: c.clone() },
                    Node::Add(a, b) => WireOp::Add { args: [*a, *b] },
                    Node::Mul(a, b) => WireOp::Mul { args: [*a, *b] },
                    Node::Pow(a, e) => WireOp::Pow { args: [*a], exp: *e },
                },
            })
            .collect();
        WireCircuit { arity: self.arity, nodes, outputs: self.outputs.clone(), weakly_skew: self.weakly_skew }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Circuit {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = WireCircuit::deserialize(d)?;
        let mut nodes = Vec::with_capacity(w.nodes.len());
        for (pos, n) in w.nodes.into_iter().enumerate() {
            if n.id != pos {
                return Err(serde::de::Error::custom(format!("node at position {pos} has id {}", n.id)));
            }
            nodes.push(match n.op {
                WireOp::Input { index } => Node::Input(index),
                WireOp::Const { value } => Node::Const(value),
                WireOp::Add { args } => Node::Add(args[0], args[1]),
                WireOp::Mul { args } => Node::Mul(args[0], args[1]),
                WireOp::Pow { args, exp } => Node::Pow(args[0], exp),
            });
        }
        Circuit::from_parts(nodes, w.outputs, w.arity, w.weakly_skew).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::ratio;
    use crate::circuit::Builder;

    #[test]
    fn json_round_trip() {
        let mut b = Builder::new(2);
        let (x, y) = (b.input(0), b.input(1));
        let k = b.constant(ratio(-3, 2));
        let m = b.mul(k, y);
        let s = b.add(x, m);
        let p = b.pow(s, 2);
        let c = b.finish(vec![p, s]);
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains(r#"{"id":2,"op":"const","value":"-3/2"}"#));
        let back: Circuit = serde_json::from_str(&text).unwrap();
        assert_eq!(back, c);
        assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }

    #[test]
    fn forward_reference_is_malformed() {
        let text = r#"{"arity":1,"nodes":[{"id":0,"op":"add","args":[0,1]},{"id":1,"op":"input","index":0}],"outputs":[0],"weakly_skew":true}"#;
        let err = serde_json::from_str::<Circuit>(text).unwrap_err().to_string();
        assert!(err.contains("malformed circuit at node 0"), "{err}");
    }
}
