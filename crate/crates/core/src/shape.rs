//! Canonical shape digests shared by every ternary tree in the crate.
//!
//! The digest is a preorder serialization of `(byte, terminal flag)` plus
//! the left/mid/right structure. Priorities are not part of it, so a
//! randomized trie and an unbalanced reference trie can be compared
//! directly.

use std::fmt;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// The three child links of a ternary search trie node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Link {
    Left,
    Mid,
    Right,
}

impl Link {
    pub fn label(self) -> char {
        match self {
            Link::Left => 'L',
            Link::Mid => 'M',
            Link::Right => 'R',
        }
    }
}

/// Read-only view of a ternary search trie, enough to serialize its shape.
pub trait TernaryShape {
    type Node: Copy;

    fn root(&self) -> Option<Self::Node>;
    fn byte(&self, node: Self::Node) -> u8;
    fn is_terminal(&self, node: Self::Node) -> bool;
    fn child(&self, node: Self::Node, link: Link) -> Option<Self::Node>;
}

const NIL_TAG: u8 = 0x00;
const NODE_TAG: u8 = 0x01;

/// Canonical serialization of a trie shape.
///
/// Grammar: `nil := 0x00`, `node := 0x01 byte flag left mid right`, where
/// `flag` is 1 for terminal nodes and 0 otherwise. The empty tree is the
/// single byte `0x00`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ShapeDigest(Vec<u8>);

impl ShapeDigest {
    /// The digest of the empty tree.
    pub fn empty() -> Self {
        ShapeDigest(vec![NIL_TAG])
    }

    pub fn of<T: TernaryShape + ?Sized>(tree: &T) -> Self {
        let mut out = Vec::new();
        // Explicit stack: tries of long strings are deep along mid links.
        let mut stack = vec![tree.root()];
        while let Some(slot) = stack.pop() {
            match slot {
                None => out.push(NIL_TAG),
                Some(n) => {
                    out.push(NODE_TAG);
                    out.push(tree.byte(n));
                    out.push(tree.is_terminal(n) as u8);
                    stack.push(tree.child(n, Link::Right));
                    stack.push(tree.child(n, Link::Mid));
                    stack.push(tree.child(n, Link::Left));
                }
            }
        }
        ShapeDigest(out)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn is_empty_tree(&self) -> bool {
        self.0 == [NIL_TAG]
    }

    /// Number of nodes encoded in the digest.
    pub fn node_count(&self) -> usize {
        (self.0.len() - 1) / 5
    }

    /// Hex SHA-256 of the serialization, for compact reporting.
    pub fn fingerprint(&self) -> String {
        Sha256::digest(&self.0)
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

impl fmt::Debug for ShapeDigest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ShapeDigest({} nodes, {})",
            self.node_count(),
            &self.fingerprint()[..16]
        )
    }
}

pub fn shapes_equal(a: &ShapeDigest, b: &ShapeDigest) -> bool {
    a == b
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimal boxed ternary tree for exercising the digest in isolation.
    struct Boxed(Option<Box<N>>);
    struct N {
        byte: u8,
        term: bool,
        kids: [Option<Box<N>>; 3],
    }

    impl<'a> TernaryShape for &'a Boxed {
        type Node = &'a N;
        fn root(&self) -> Option<&'a N> {
            self.0.as_deref()
        }
        fn byte(&self, n: &'a N) -> u8 {
            n.byte
        }
        fn is_terminal(&self, n: &'a N) -> bool {
            n.term
        }
        fn child(&self, n: &'a N, link: Link) -> Option<&'a N> {
            n.kids[link as usize].as_deref()
        }
    }

    fn chain(s: &[u8]) -> Boxed {
        let mut cur: Option<Box<N>> = None;
        for (i, &b) in s.iter().enumerate().rev() {
            cur = Some(Box::new(N {
                byte: b,
                term: i + 1 == s.len(),
                kids: [None, cur, None],
            }));
        }
        Boxed(cur)
    }

    #[test]
    fn empty_tree_has_designated_marker() {
        let d = ShapeDigest::of(&&Boxed(None));
        assert_eq!(d, ShapeDigest::empty());
        assert!(d.is_empty_tree());
        assert_eq!(d.node_count(), 0);
    }

    #[test]
    fn chain_layout() {
        let d = ShapeDigest::of(&&chain(b"AB"));
        assert_eq!(d.as_bytes(), &[1, b'A', 0, 0, 1, b'B', 1, 0, 0, 0, 0]);
        assert_eq!(d.node_count(), 2);
    }

    #[test]
    fn differing_char_differs() {
        let ab = ShapeDigest::of(&&chain(b"AB"));
        let ac = ShapeDigest::of(&&chain(b"AC"));
        assert!(!shapes_equal(&ab, &ac));
        assert!(shapes_equal(&ab, &ab.clone()));
        assert!(shapes_equal(&ShapeDigest::empty(), &ShapeDigest::empty()));
    }

    #[test]
    fn terminal_flag_is_part_of_the_shape() {
        let mut t = chain(b"AB");
        t.0.as_mut().unwrap().term = true;
        assert_ne!(ShapeDigest::of(&&t), ShapeDigest::of(&&chain(b"AB")));
    }

    #[test]
    fn fingerprint_is_hex_sha256() {
        let f = ShapeDigest::empty().fingerprint();
        assert_eq!(f.len(), 64);
        assert!(f.chars().all(|c| c.is_ascii_hexdigit()));
    }
}
