use std::cmp::Ordering;

use super::{NodeId, RTrie, NIL};

enum Work {
    Visit(NodeId, usize),
    Emit(NodeId, usize),
}

/// In-order enumeration of the strings below a prefix.
///
/// Uses an explicit work stack; the string under construction is kept in a
/// single buffer that is truncated as the walk backs out of mid links.
pub struct PrefixIter<'a, P> {
    trie: &'a RTrie<P>,
    buf: Vec<u8>,
    stack: Vec<Work>,
    /// The prefix itself is a member and has not been yielded yet.
    pending_self: bool,
}

impl<'a, P> PrefixIter<'a, P> {
    pub(super) fn new(trie: &'a RTrie<P>, prefix: &[u8]) -> Self {
        let mut it = PrefixIter {
            trie,
            buf: prefix.to_vec(),
            stack: Vec::new(),
            pending_self: false,
        };
        if prefix.is_empty() {
            it.stack.push(Work::Visit(trie.root, 0));
            return it;
        }
        let mut x = trie.root;
        let mut i = 0;
        while x != NIL {
            let node = trie.node(x);
            match prefix[i].cmp(&node.byte) {
                Ordering::Less => x = node.left,
                Ordering::Greater => x = node.right,
                Ordering::Equal => {
                    i += 1;
                    if i == prefix.len() {
                        it.pending_self = node.str_prio > 0;
                        it.stack.push(Work::Visit(node.mid, prefix.len()));
                        break;
                    }
                    x = node.mid;
                }
            }
        }
        it
    }
}

impl<P> Iterator for PrefixIter<'_, P> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.pending_self {
            self.pending_self = false;
            return Some(self.buf.clone());
        }
        while let Some(work) = self.stack.pop() {
            match work {
                Work::Visit(x, _) if x == NIL => {}
                Work::Visit(x, at) => {
                    let node = self.trie.node(x);
                    self.stack.push(Work::Visit(node.right, at));
                    self.stack.push(Work::Visit(node.mid, at + 1));
                    self.stack.push(Work::Emit(x, at));
                    self.stack.push(Work::Visit(node.left, at));
                }
                Work::Emit(x, at) => {
                    let node = self.trie.node(x);
                    self.buf.truncate(at);
                    self.buf.push(node.byte);
                    if node.str_prio > 0 {
                        return Some(self.buf.clone());
                    }
                }
            }
        }
        None
    }
}
