use crate::error::Result;
use crate::priority::PrioritySource;

use super::{Node, NodeId, RTrie, NIL};

/// A hand-specified node, used to build trees that bypass the update
/// algorithms. Nothing about a raw tree is validated on construction;
/// run [`RTrie::check_invariants`] to see what it violates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawNode {
    pub byte: u8,
    pub prio: u32,
    pub str_prio: u32,
    pub left: Option<Box<RawNode>>,
    pub mid: Option<Box<RawNode>>,
    pub right: Option<Box<RawNode>>,
}

impl RawNode {
    pub fn new(byte: u8, prio: u32, str_prio: u32) -> Self {
        RawNode {
            byte,
            prio,
            str_prio,
            left: None,
            mid: None,
            right: None,
        }
    }

    pub fn with_left(mut self, child: RawNode) -> Self {
        self.left = Some(Box::new(child));
        self
    }

    pub fn with_mid(mut self, child: RawNode) -> Self {
        self.mid = Some(Box::new(child));
        self
    }

    pub fn with_right(mut self, child: RawNode) -> Self {
        self.right = Some(Box::new(child));
        self
    }
}

impl<P: PrioritySource> RTrie<P> {
    /// Builds a tree with exactly the given nodes. The stored-string count
    /// is the number of nodes with a nonzero string priority.
    pub fn from_raw(ceiling: u32, priorities: P, root: Option<RawNode>) -> Result<Self> {
        let mut trie = Self::with_priorities(ceiling, priorities)?;
        trie.root = match root {
            Some(node) => trie.adopt(&node),
            None => NIL,
        };
        trie.count = trie.nodes.iter().filter(|n| n.str_prio > 0).count();
        Ok(trie)
    }

    fn adopt(&mut self, raw: &RawNode) -> NodeId {
        let id = self.alloc(raw.byte);
        let mut link = |child: &Option<Box<RawNode>>| match child {
            Some(c) => self.adopt(c),
            None => NIL,
        };
        let (left, mid, right) = (link(&raw.left), link(&raw.mid), link(&raw.right));
        self.nodes[id.index()] = Node {
            byte: raw.byte,
            prio: raw.prio,
            str_prio: raw.str_prio,
            left,
            mid,
            right,
        };
        id
    }
}
