//! The randomized ternary search trie.
//!
//! Every stored string carries a priority in `[1, r]`. A node's priority is
//! the highest priority among the strings that start with the node's prefix,
//! and each binary search tree hanging off a mid link is a max-heap on node
//! priorities. With distinct priorities the shape is exactly that of an
//! unbalanced ternary search trie built by inserting the strings in order of
//! decreasing priority, independent of the update history.
//!
//! Nodes live in an arena. Slot 0 is the nil sentinel (priority 0) and is
//! never written. Updates walk down with an explicit path stack and repair
//! priorities on the way back up, so string length is bounded only by
//! memory.

mod invariants;
mod prefix;
mod raw;

#[cfg(test)]
mod tests;

use std::cmp::Ordering;

use crate::error::{nonempty, Error, Result};
use crate::priority::{PrioritySource, SeededPriorities, DEFAULT_CEILING};
use crate::shape::{Link, ShapeDigest, TernaryShape};

pub use invariants::{InvariantReport, Violation, ViolationKind};
pub use prefix::PrefixIter;
pub use raw::RawNode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
/// Opaque handle of a node inside one trie's arena.
pub struct NodeId(u32);

pub(crate) const NIL: NodeId = NodeId(0);

impl NodeId {
    fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Node {
    pub(crate) byte: u8,
    pub(crate) prio: u32,
    pub(crate) str_prio: u32,
    pub(crate) left: NodeId,
    pub(crate) mid: NodeId,
    pub(crate) right: NodeId,
}

impl Node {
    const fn nil() -> Self {
        Node {
            byte: 0,
            prio: 0,
            str_prio: 0,
            left: NIL,
            mid: NIL,
            right: NIL,
        }
    }

    fn child(&self, link: Link) -> NodeId {
        match link {
            Link::Left => self.left,
            Link::Mid => self.mid,
            Link::Right => self.right,
        }
    }

    fn child_mut(&mut self, link: Link) -> &mut NodeId {
        match link {
            Link::Left => &mut self.left,
            Link::Mid => &mut self.mid,
            Link::Right => &mut self.right,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InsertOutcome {
    Inserted,
    AlreadyPresent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeleteOutcome {
    Deleted,
    Absent,
}

/// Accounting for one search from the root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize)]
pub struct PathStats {
    pub found: bool,
    /// Characters matched, i.e. mid steps plus the final match.
    pub chars_consumed: usize,
    /// Steps taken along left or right links.
    pub sidesteps: usize,
    /// Real nodes visited.
    pub depth: usize,
}

/// A set of byte strings stored as a randomized ternary search trie.
#[derive(Debug, Clone)]
pub struct RTrie<P = SeededPriorities> {
    nodes: Vec<Node>,
    free: Vec<NodeId>,
    root: NodeId,
    ceiling: u32,
    priorities: P,
    count: usize,
    rotations: u64,
}

impl RTrie<SeededPriorities> {
    /// An empty trie drawing uniform priorities on `[1, ceiling]` from a
    /// stream seeded with `seed`.
    pub fn new(ceiling: u32, seed: u64) -> Result<Self> {
        Self::with_priorities(ceiling, SeededPriorities::new(seed))
    }

    /// `new` with the default ceiling `2^31 - 1`.
    pub fn seeded(seed: u64) -> Self {
        Self::with_priorities(DEFAULT_CEILING, SeededPriorities::new(seed))
            .expect("default ceiling is positive")
    }
}

impl<P: PrioritySource> RTrie<P> {
    pub fn with_priorities(ceiling: u32, priorities: P) -> Result<Self> {
        if ceiling < 1 {
            return Err(Error::InvalidParameter(
                "priority ceiling r must be at least 1".into(),
            ));
        }
        Ok(RTrie {
            nodes: vec![Node::nil()],
            free: Vec::new(),
            root: NIL,
            ceiling,
            priorities,
            count: 0,
            rotations: 0,
        })
    }

    /// Inserts `s`. An already stored string leaves the tree untouched and
    /// does not consume a priority.
    pub fn insert(&mut self, s: impl AsRef<[u8]>) -> Result<InsertOutcome> {
        let s = nonempty(s.as_ref())?;
        let mut path: Vec<(NodeId, Link)> = Vec::new();
        let mut x = self.root;
        let mut i = 0;
        // Drawn as soon as the string is known to be new and before any
        // node is created, so a failing source leaves the tree intact.
        let mut priority = None;
        loop {
            if x == NIL {
                if priority.is_none() {
                    priority = Some(self.draw(s)?);
                }
                x = self.alloc(s[i]);
                match path.last() {
                    Some(&(parent, link)) => *self.node_mut(parent).child_mut(link) = x,
                    None => self.root = x,
                }
            }
            let node = self.node(x);
            match s[i].cmp(&node.byte) {
                Ordering::Less => {
                    path.push((x, Link::Left));
                    x = node.left;
                }
                Ordering::Greater => {
                    path.push((x, Link::Right));
                    x = node.right;
                }
                Ordering::Equal if i + 1 < s.len() => {
                    path.push((x, Link::Mid));
                    x = node.mid;
                    i += 1;
                }
                Ordering::Equal => {
                    if node.str_prio != 0 {
                        return Ok(InsertOutcome::AlreadyPresent);
                    }
                    if priority.is_none() {
                        priority = Some(self.draw(s)?);
                    }
                    break;
                }
            }
        }

        let terminal = self.node_mut(x);
        terminal.str_prio = priority.expect("drawn above");
        self.refresh(x);

        let mut sub = x;
        while let Some((parent, link)) = path.pop() {
            *self.node_mut(parent).child_mut(link) = sub;
            sub = match link {
                Link::Left if self.prio(sub) > self.prio(parent) => self.rotate_with_left(parent),
                Link::Right if self.prio(sub) > self.prio(parent) => self.rotate_with_right(parent),
                _ => parent,
            };
            self.refresh(sub);
        }
        self.root = sub;
        self.count += 1;
        Ok(InsertOutcome::Inserted)
    }

    /// Removes `s`. Deleting a string that is not stored is a no-op, even
    /// when part of its path exists.
    pub fn delete(&mut self, s: impl AsRef<[u8]>) -> Result<DeleteOutcome> {
        let s = nonempty(s.as_ref())?;
        let mut path: Vec<(NodeId, Link)> = Vec::new();
        let mut x = self.root;
        let mut i = 0;
        loop {
            if x == NIL {
                return Ok(DeleteOutcome::Absent);
            }
            let node = self.node(x);
            match s[i].cmp(&node.byte) {
                Ordering::Less => {
                    path.push((x, Link::Left));
                    x = node.left;
                }
                Ordering::Greater => {
                    path.push((x, Link::Right));
                    x = node.right;
                }
                Ordering::Equal if i + 1 < s.len() => {
                    path.push((x, Link::Mid));
                    x = node.mid;
                    i += 1;
                }
                Ordering::Equal => {
                    if node.str_prio == 0 {
                        return Ok(DeleteOutcome::Absent);
                    }
                    break;
                }
            }
        }

        self.node_mut(x).str_prio = 0;
        self.refresh(x);
        let mut sub = self.heapify_or_delete(x);
        while let Some((parent, link)) = path.pop() {
            *self.node_mut(parent).child_mut(link) = sub;
            sub = match link {
                Link::Mid => {
                    self.refresh(parent);
                    self.heapify_or_delete(parent)
                }
                // Only prefix-path nodes change priority; a parent reached
                // by a sidestep still dominates its (lowered) child.
                Link::Left | Link::Right => {
                    debug_assert!(self.prio(parent) >= self.prio(sub));
                    parent
                }
            };
        }
        self.root = sub;
        self.count -= 1;
        Ok(DeleteOutcome::Deleted)
    }
}

impl<P> RTrie<P> {
    pub fn contains(&self, s: impl AsRef<[u8]>) -> Result<bool> {
        Ok(self.search_path(s)?.found)
    }

    /// Replays the membership search for `s`, counting mid steps and
    /// sidesteps.
    pub fn search_path(&self, s: impl AsRef<[u8]>) -> Result<PathStats> {
        let s = nonempty(s.as_ref())?;
        let mut stats = PathStats::default();
        let mut x = self.root;
        let mut i = 0;
        while x != NIL {
            stats.depth += 1;
            let node = self.node(x);
            match s[i].cmp(&node.byte) {
                Ordering::Less => {
                    stats.sidesteps += 1;
                    x = node.left;
                }
                Ordering::Greater => {
                    stats.sidesteps += 1;
                    x = node.right;
                }
                Ordering::Equal => {
                    stats.chars_consumed += 1;
                    i += 1;
                    if i == s.len() {
                        stats.found = node.str_prio > 0;
                        break;
                    }
                    x = node.mid;
                }
            }
        }
        Ok(stats)
    }

    /// Stored strings starting with `prefix`, in byte-lexicographic order.
    /// The empty prefix enumerates everything.
    pub fn prefix_iter(&self, prefix: impl AsRef<[u8]>) -> PrefixIter<'_, P> {
        PrefixIter::new(self, prefix.as_ref())
    }

    pub fn iter(&self) -> PrefixIter<'_, P> {
        self.prefix_iter([])
    }

    pub fn len(&self) -> usize {
        self.count
    }

    pub fn is_empty(&self) -> bool {
        self.count == 0
    }

    pub fn ceiling(&self) -> u32 {
        self.ceiling
    }

    /// Allocated nodes; after any complete update all of them are reachable.
    pub fn node_count(&self) -> usize {
        self.nodes.len() - 1 - self.free.len()
    }

    /// Total rotations performed over the lifetime of the tree.
    pub fn rotations(&self) -> u64 {
        self.rotations
    }

    pub fn priorities(&self) -> &P {
        &self.priorities
    }

    pub fn root(&self) -> Option<NodeRef<'_, P>> {
        self.node_ref(self.root)
    }

    pub fn shape_digest(&self) -> ShapeDigest {
        ShapeDigest::of(self)
    }

    fn node_ref(&self, id: NodeId) -> Option<NodeRef<'_, P>> {
        (id != NIL).then_some(NodeRef { trie: self, id })
    }

    pub(crate) fn node(&self, id: NodeId) -> &Node {
        &self.nodes[id.index()]
    }

    fn node_mut(&mut self, id: NodeId) -> &mut Node {
        debug_assert!(id != NIL, "the nil sentinel is never written");
        &mut self.nodes[id.index()]
    }

    fn prio(&self, id: NodeId) -> u32 {
        self.nodes[id.index()].prio
    }

    fn draw(&mut self, s: &[u8]) -> Result<u32>
    where
        P: PrioritySource,
    {
        let priority = self.priorities.draw(s, self.ceiling)?;
        if priority < 1 || priority > self.ceiling {
            return Err(Error::PriorityOutOfRange {
                priority,
                ceiling: self.ceiling,
            });
        }
        Ok(priority)
    }

    fn alloc(&mut self, byte: u8) -> NodeId {
        let node = Node {
            byte,
            ..Node::nil()
        };
        match self.free.pop() {
            Some(id) => {
                self.nodes[id.index()] = node;
                id
            }
            None => {
                let id = NodeId(u32::try_from(self.nodes.len()).expect("arena exceeds u32 slots"));
                self.nodes.push(node);
                id
            }
        }
    }

    fn release(&mut self, id: NodeId) {
        debug_assert!(id != NIL);
        self.nodes[id.index()] = Node::nil();
        self.free.push(id);
    }

    /// `prio <- max(str_prio, mid.prio)`
    fn refresh(&mut self, id: NodeId) {
        let node = self.node(id);
        let prio = node.str_prio.max(self.prio(node.mid));
        self.node_mut(id).prio = prio;
    }

    pub(crate) fn rotate_with_left(&mut self, x: NodeId) -> NodeId {
        let y = self.node(x).left;
        assert!(y != NIL, "rotate_with_left on a node without left child");
        self.node_mut(x).left = self.node(y).right;
        self.node_mut(y).right = x;
        self.rotations += 1;
        y
    }

    pub(crate) fn rotate_with_right(&mut self, x: NodeId) -> NodeId {
        let y = self.node(x).right;
        assert!(y != NIL, "rotate_with_right on a node without right child");
        self.node_mut(x).right = self.node(y).left;
        self.node_mut(y).left = x;
        self.rotations += 1;
        y
    }

    /// Sinks `x` below any child of higher priority, then unlinks it if its
    /// priority is 0. Returns the new root of the subtree.
    ///
    /// Recursion depth is bounded by the height of one binary search tree,
    /// which holds at most 256 nodes.
    pub(crate) fn heapify_or_delete(&mut self, x: NodeId) -> NodeId {
        if x == NIL {
            return NIL;
        }
        let node = self.node(x);
        let (p, lp, rp) = (node.prio, self.prio(node.left), self.prio(node.right));
        if p < lp || p < rp {
            if lp > rp {
                let y = self.rotate_with_left(x);
                let sunk = self.heapify_or_delete(x);
                self.node_mut(y).right = sunk;
                y
            } else {
                let y = self.rotate_with_right(x);
                let sunk = self.heapify_or_delete(x);
                self.node_mut(y).left = sunk;
                y
            }
        } else if p == 0 {
            self.release(x);
            NIL
        } else {
            x
        }
    }
}

impl<P: PrioritySource> Extend<Vec<u8>> for RTrie<P> {
    fn extend<I: IntoIterator<Item = Vec<u8>>>(&mut self, iter: I) {
        for s in iter {
            self.insert(s).expect("extend requires nonempty strings");
        }
    }
}

/// Borrowed view of one node.
pub struct NodeRef<'a, P> {
    trie: &'a RTrie<P>,
    id: NodeId,
}

impl<P> Clone for NodeRef<'_, P> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<P> Copy for NodeRef<'_, P> {}

impl<'a, P> NodeRef<'a, P> {
    fn raw(&self) -> &'a Node {
        self.trie.node(self.id)
    }

    pub fn byte(&self) -> u8 {
        self.raw().byte
    }

    pub fn prio(&self) -> u32 {
        self.raw().prio
    }

    pub fn str_prio(&self) -> u32 {
        self.raw().str_prio
    }

    pub fn is_terminal(&self) -> bool {
        self.raw().str_prio > 0
    }

    pub fn child(&self, link: Link) -> Option<NodeRef<'a, P>> {
        self.trie.node_ref(self.raw().child(link))
    }

    pub fn left(&self) -> Option<NodeRef<'a, P>> {
        self.child(Link::Left)
    }

    pub fn mid(&self) -> Option<NodeRef<'a, P>> {
        self.child(Link::Mid)
    }

    pub fn right(&self) -> Option<NodeRef<'a, P>> {
        self.child(Link::Right)
    }
}

impl<P> std::fmt::Debug for NodeRef<'_, P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("NodeRef")
            .field("byte", &(self.byte() as char))
            .field("prio", &self.prio())
            .field("str_prio", &self.str_prio())
            .finish()
    }
}

impl<P> TernaryShape for RTrie<P> {
    type Node = NodeId;

    fn root(&self) -> Option<NodeId> {
        (self.root != NIL).then_some(self.root)
    }

    fn byte(&self, node: NodeId) -> u8 {
        self.node(node).byte
    }

    fn is_terminal(&self, node: NodeId) -> bool {
        self.node(node).str_prio > 0
    }

    fn child(&self, node: NodeId, link: Link) -> Option<NodeId> {
        let c = self.node(node).child(link);
        (c != NIL).then_some(c)
    }
}
