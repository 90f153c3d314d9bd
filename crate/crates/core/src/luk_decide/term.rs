//! Hash-consed Łukasiewicz terms over `~` and `->`.
//!
//! Leaves are opaque: plain atoms, belief atoms and any `!`-prefixed
//! formula each become one variable. Equal subterms share one node, and
//! `~~a` is folded to `a`.

use std::collections::HashMap;

use num_traits::One;

use super::DecideError;
use crate::algebras::luk;
use crate::formulas::UpperExpr;
use crate::rational::Rational;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Leaf(usize),
    Not(NodeId),
    Imp(NodeId, NodeId),
}

#[derive(Clone, Debug, Default)]
pub struct TermDag {
    nodes: Vec<Node>,
    index: HashMap<Node, NodeId>,
    leaves: Vec<UpperExpr>,
    leaf_index: HashMap<UpperExpr, usize>,
}

impl TermDag {
    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaves(&self) -> &[UpperExpr] {
        &self.leaves
    }

    fn push(&mut self, node: Node) -> NodeId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    pub fn leaf(&mut self, expr: &UpperExpr) -> NodeId {
        let i = match self.leaf_index.get(expr) {
            Some(&i) => i,
            None => {
                let i = self.leaves.len();
                self.leaves.push(expr.clone());
                self.leaf_index.insert(expr.clone(), i);
                i
            }
        };
        self.push(Node::Leaf(i))
    }

    pub fn not(&mut self, a: NodeId) -> NodeId {
        match self.nodes[a] {
            Node::Not(inner) => inner,
            _ => self.push(Node::Not(a)),
        }
    }

    pub fn imp(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.push(Node::Imp(a, b))
    }

    pub fn intern(&mut self, expr: &UpperExpr) -> Result<NodeId, DecideError> {
        match expr {
            UpperExpr::Atom(_) | UpperExpr::Modal(_) | UpperExpr::BNeg(_) => Ok(self.leaf(expr)),
            UpperExpr::StrongNeg(a) => {
                let a = self.intern(a)?;
                Ok(self.not(a))
            }
            UpperExpr::Imp(a, b) => {
                let a = self.intern(a)?;
                let b = self.intern(b)?;
                Ok(self.imp(a, b))
            }
            other => Err(DecideError::Unsupported(other.connective_name())),
        }
    }

    /// Łukasiewicz value of `id` with leaf `i` at `point[i]`.
    pub fn eval(&self, id: NodeId, point: &[Rational]) -> Rational {
        let mut memo: Vec<Option<Rational>> = vec![None; self.nodes.len()];
        self.eval_memo(id, point, &mut memo)
    }

    fn eval_memo(&self, id: NodeId, point: &[Rational], memo: &mut Vec<Option<Rational>>) -> Rational {
        if let Some(v) = &memo[id] {
            return v.clone();
        }
        let v = match self.nodes[id] {
            Node::Leaf(i) => point[i].clone(),
            Node::Not(a) => Rational::one() - self.eval_memo(a, point, memo),
            Node::Imp(a, b) => {
                let a = self.eval_memo(a, point, memo);
                let b = self.eval_memo(b, point, memo);
                luk::imp(&a, &b)
            }
        };
        memo[id] = Some(v.clone());
        v
    }
}
