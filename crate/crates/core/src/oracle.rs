//! Unbalanced reference structures for checking the randomized trie.
//!
//! [`NaiveTst`] and [`NaiveBst`] are built purely by insertion order, with
//! no rotations and no priorities. They share the [`ShapeDigest`] grammar
//! with [`RTrie`](crate::RTrie), so shapes can be compared across the two.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};

use crate::error::{lossy, nonempty, Error, Result};
use crate::priority::FixedPriorities;
use crate::shape::{Link, ShapeDigest, TernaryShape};

#[derive(Debug, Clone, PartialEq, Eq)]
struct TstNode {
    byte: u8,
    terminal: bool,
    left: Option<usize>,
    mid: Option<usize>,
    right: Option<usize>,
}

/// Ternary search trie whose shape is a pure function of insertion order.
#[derive(Debug, Clone, Default)]
pub struct NaiveTst {
    nodes: Vec<TstNode>,
    root: Option<usize>,
    len: usize,
}

impl NaiveTst {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds by inserting `strings` in iteration order.
    pub fn from_order<I, S>(strings: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut t = Self::new();
        for s in strings {
            t.insert(s)?;
        }
        Ok(t)
    }

    /// Textbook insertion: search, and add missing nodes where the search
    /// runs off the tree. Returns `false` if `s` was already a member.
    pub fn insert(&mut self, s: impl AsRef<[u8]>) -> Result<bool> {
        let s = nonempty(s.as_ref())?;
        let mut slot: Option<(usize, Link)> = None;
        let mut x = self.root;
        let mut i = 0;
        loop {
            let id = match x {
                Some(id) => id,
                None => {
                    let id = self.nodes.len();
                    self.nodes.push(TstNode {
                        byte: s[i],
                        terminal: false,
                        left: None,
                        mid: None,
                        right: None,
                    });
                    match slot {
                        None => self.root = Some(id),
                        Some((parent, link)) => *self.link_mut(parent, link) = Some(id),
                    }
                    id
                }
            };
            let node = &self.nodes[id];
            let link = match s[i].cmp(&node.byte) {
                Ordering::Less => Link::Left,
                Ordering::Greater => Link::Right,
                Ordering::Equal if i + 1 < s.len() => {
                    i += 1;
                    Link::Mid
                }
                Ordering::Equal => {
                    if node.terminal {
                        return Ok(false);
                    }
                    self.nodes[id].terminal = true;
                    self.len += 1;
                    return Ok(true);
                }
            };
            slot = Some((id, link));
            x = self.link(id, link);
        }
    }

    pub fn contains(&self, s: impl AsRef<[u8]>) -> bool {
        self.locate(s.as_ref()).is_some()
    }

    /// Left/right steps on the search path of member `s`.
    pub fn sidesteps(&self, s: impl AsRef<[u8]>) -> Result<usize> {
        let s = s.as_ref();
        self.locate(s)
            .map(|(sidesteps, _)| sidesteps)
            .ok_or_else(|| Error::NotAMember(lossy(s)))
    }

    /// Nodes visited by a successful search for member `s`.
    pub fn depth(&self, s: impl AsRef<[u8]>) -> Result<usize> {
        let s = s.as_ref();
        self.locate(s)
            .map(|(sidesteps, _)| sidesteps + s.len())
            .ok_or_else(|| Error::NotAMember(lossy(s)))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn shape_digest(&self) -> ShapeDigest {
        ShapeDigest::of(self)
    }

    /// `(sidesteps, terminal node)` of a member.
    fn locate(&self, s: &[u8]) -> Option<(usize, usize)> {
        if s.is_empty() {
            return None;
        }
        let mut sidesteps = 0;
        let mut x = self.root;
        let mut i = 0;
        while let Some(id) = x {
            let node = &self.nodes[id];
            match s[i].cmp(&node.byte) {
                Ordering::Less => {
                    sidesteps += 1;
                    x = node.left;
                }
                Ordering::Greater => {
                    sidesteps += 1;
                    x = node.right;
                }
                Ordering::Equal if i + 1 < s.len() => {
                    i += 1;
                    x = node.mid;
                }
                Ordering::Equal => return node.terminal.then_some((sidesteps, id)),
            }
        }
        None
    }

    fn link(&self, id: usize, link: Link) -> Option<usize> {
        let n = &self.nodes[id];
        match link {
            Link::Left => n.left,
            Link::Mid => n.mid,
            Link::Right => n.right,
        }
    }

    fn link_mut(&mut self, id: usize, link: Link) -> &mut Option<usize> {
        let n = &mut self.nodes[id];
        match link {
            Link::Left => &mut n.left,
            Link::Mid => &mut n.mid,
            Link::Right => &mut n.right,
        }
    }
}

impl TernaryShape for NaiveTst {
    type Node = usize;

    fn root(&self) -> Option<usize> {
        self.root
    }

    fn byte(&self, node: usize) -> u8 {
        self.nodes[node].byte
    }

    fn is_terminal(&self, node: usize) -> bool {
        self.nodes[node].terminal
    }

    fn child(&self, node: usize, link: Link) -> Option<usize> {
        self.link(node, link)
    }
}

#[derive(Debug, Clone)]
struct BstNode {
    key: Vec<u8>,
    left: Option<usize>,
    right: Option<usize>,
}

/// Binary search tree over whole strings, built by insertion order.
#[derive(Debug, Clone, Default)]
pub struct NaiveBst {
    nodes: Vec<BstNode>,
    root: Option<usize>,
}

impl NaiveBst {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_order<I, S>(strings: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        let mut b = Self::new();
        for s in strings {
            b.insert(s)?;
        }
        Ok(b)
    }

    /// Returns `false` if the key was already present.
    pub fn insert(&mut self, s: impl AsRef<[u8]>) -> Result<bool> {
        let s = nonempty(s.as_ref())?;
        let node = BstNode {
            key: s.to_vec(),
            left: None,
            right: None,
        };
        let id = self.nodes.len();
        let Some(mut x) = self.root else {
            self.nodes.push(node);
            self.root = Some(0);
            return Ok(true);
        };
        loop {
            let next = match s.cmp(&self.nodes[x].key) {
                Ordering::Equal => return Ok(false),
                Ordering::Less => &mut self.nodes[x].left,
                Ordering::Greater => &mut self.nodes[x].right,
            };
            match *next {
                Some(c) => x = c,
                None => {
                    *next = Some(id);
                    self.nodes.push(node);
                    return Ok(true);
                }
            }
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of proper ancestors of the node holding `s`.
    pub fn depth(&self, s: impl AsRef<[u8]>) -> Result<usize> {
        let s = s.as_ref();
        self.path_to(s).map(|p| p.len() - 1)
    }

    /// Whether the node holding `x` is a proper ancestor of the node
    /// holding `y`.
    pub fn is_ancestor(&self, x: impl AsRef<[u8]>, y: impl AsRef<[u8]>) -> Result<bool> {
        let (x, y) = (x.as_ref(), y.as_ref());
        self.path_to(x)?;
        let path = self.path_to(y)?;
        Ok(path[..path.len() - 1]
            .iter()
            .any(|&id| self.nodes[id].key == x))
    }

    /// Node ids from the root down to the node holding `s`.
    fn path_to(&self, s: &[u8]) -> Result<Vec<usize>> {
        let mut path = Vec::new();
        let mut x = self.root;
        while let Some(id) = x {
            path.push(id);
            x = match s.cmp(&self.nodes[id].key) {
                Ordering::Equal => return Ok(path),
                Ordering::Less => self.nodes[id].left,
                Ordering::Greater => self.nodes[id].right,
            };
        }
        Err(Error::NotAMember(lossy(s)))
    }
}

/// Distinct strings, each with a priority of at least 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrioritizedSet {
    pairs: Vec<(Vec<u8>, u32)>,
}

impl PrioritizedSet {
    pub fn new<I, S>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<Vec<u8>>,
    {
        let pairs: Vec<(Vec<u8>, u32)> = pairs.into_iter().map(|(s, p)| (s.into(), p)).collect();
        let mut seen = HashSet::new();
        for (s, p) in &pairs {
            if s.is_empty() {
                return Err(Error::EmptyString);
            }
            if *p == 0 {
                return Err(Error::InvalidArgument(format!(
                    "priority of {:?} must be at least 1",
                    lossy(s)
                )));
            }
            if !seen.insert(s.as_slice()) {
                return Err(Error::InvalidArgument(format!(
                    "string {:?} listed twice",
                    lossy(s)
                )));
            }
        }
        Ok(PrioritizedSet { pairs })
    }

    pub fn pairs(&self) -> &[(Vec<u8>, u32)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn has_distinct_priorities(&self) -> bool {
        let mut seen = HashSet::new();
        self.pairs.iter().all(|(_, p)| seen.insert(*p))
    }

    /// The pairs as a priority map for [`RTrie::with_priorities`](crate::RTrie::with_priorities).
    pub fn to_priorities(&self) -> FixedPriorities {
        self.pairs.iter().cloned().collect()
    }
}

/// The unbalanced trie obtained by inserting the strings of `set` in order
/// of decreasing priority.
pub fn build_decreasing_priority(set: &PrioritizedSet) -> Result<NaiveTst> {
    if !set.has_distinct_priorities() {
        return Err(Error::InvalidArgument(
            "decreasing-priority build needs pairwise distinct priorities".into(),
        ));
    }
    let mut order: Vec<&(Vec<u8>, u32)> = set.pairs.iter().collect();
    order.sort_by_key(|p| std::cmp::Reverse(p.1));
    NaiveTst::from_order(order.into_iter().map(|(s, _)| s))
}

/// Whether `x` was inserted before `y` and before every key strictly
/// between them, evaluated directly on the insertion order.
pub fn ancestor_predicate<S: AsRef<[u8]>>(
    order: &[S],
    x: impl AsRef<[u8]>,
    y: impl AsRef<[u8]>,
) -> Result<bool> {
    let (x, y) = (x.as_ref(), y.as_ref());
    let position: HashMap<&[u8], usize> = order
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_ref(), i))
        .collect();
    let px = *position
        .get(x)
        .ok_or_else(|| Error::InvalidArgument(format!("{:?} not in order", lossy(x))))?;
    let py = *position
        .get(y)
        .ok_or_else(|| Error::InvalidArgument(format!("{:?} not in order", lossy(y))))?;
    if x == y {
        return Err(Error::InvalidArgument("x and y must differ".into()));
    }
    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
    Ok(px < py
        && order.iter().all(|k| {
            let k = k.as_ref();
            !(lo < k && k < hi) || px < position[k]
        }))
}
