//! Internal hash-consed subformula store. The evaluator keys its memo
//! table on node ids; the tableau represents states as sets of node ids.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::syntax::{Alphabet, Query};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    True,
    False,
    Var,
    Atom(u16),
    Not(u32),
    And(u32, u32),
    Or(u32, u32),
    Next(u32),
    WeakNext(u32),
    Until(u32, u32),
    Release(u32, u32),
}

pub(crate) struct Arena {
    alphabet: Arc<Alphabet>,
    nodes: Vec<Node>,
    index: HashMap<Node, u32>,
}

impl Arena {
    pub fn new(alphabet: Arc<Alphabet>) -> Arena {
        Arena {
            alphabet,
            nodes: Vec::new(),
            index: HashMap::new(),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: u32) -> Node {
        self.nodes[id as usize]
    }

    fn add(&mut self, node: Node) -> u32 {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.index.insert(node, id);
        id
    }

    /// Interns a query bottom-up, deduplicating equal subtrees. Errors on
    /// atoms outside the alphabet.
    pub fn intern(&mut self, q: &Query) -> Result<u32> {
        let node = match q {
            Query::True => Node::True,
            Query::False => Node::False,
            Query::Var => Node::Var,
            Query::Atom(name) => {
                let i = self
                    .alphabet
                    .index_of(name)
                    .ok_or_else(|| Error::UnknownProp(name.to_string()))?;
                Node::Atom(i as u16)
            }
            Query::Not(x) => Node::Not(self.intern(x)?),
            Query::And(l, r) => Node::And(self.intern(l)?, self.intern(r)?),
            Query::Or(l, r) => Node::Or(self.intern(l)?, self.intern(r)?),
            Query::Next(x) => Node::Next(self.intern(x)?),
            Query::WeakNext(x) => Node::WeakNext(self.intern(x)?),
            Query::Until(l, r) => Node::Until(self.intern(l)?, self.intern(r)?),
            Query::Release(l, r) => Node::Release(self.intern(l)?, self.intern(r)?),
        };
        Ok(self.add(node))
    }

    /// Rebuilds the query tree of a node, for state tags and dumps.
    pub fn to_query(&self, id: u32) -> Query {
        match self.node(id) {
            Node::True => Query::True,
            Node::False => Query::False,
            Node::Var => Query::Var,
            Node::Atom(i) => Query::atom(self.alphabet.name(i as usize)),
            Node::Not(x) => Query::not(self.to_query(x)),
            Node::And(l, r) => Query::and(self.to_query(l), self.to_query(r)),
            Node::Or(l, r) => Query::or(self.to_query(l), self.to_query(r)),
            Node::Next(x) => Query::next(self.to_query(x)),
            Node::WeakNext(x) => Query::weak_next(self.to_query(x)),
            Node::Until(l, r) => Query::until(self.to_query(l), self.to_query(r)),
            Node::Release(l, r) => Query::release(self.to_query(l), self.to_query(r)),
        }
    }
}
