use std::fmt;

use serde::Serialize;

use super::{NodeId, RTrie, NIL};
use crate::shape::Link;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    /// A left or right child outranks its parent.
    Heap {
        link: Link,
        parent: u32,
        child: u32,
    },
    /// `prio != max(str_prio, mid.prio)`.
    Priority {
        prio: u32,
        expected: u32,
    },
    /// A reachable node with priority 0.
    Dead,
    StringPriority {
        str_prio: u32,
        ceiling: u32,
    },
    /// Byte out of order within its binary search tree.
    Order {
        byte: u8,
        low: Option<u8>,
        high: Option<u8>,
    },
    Count {
        count: usize,
        terminals: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Links followed from the root, e.g. `"MLR"`; empty for the root.
    pub path: String,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.path.is_empty() {
            "root"
        } else {
            &self.path
        };
        match &self.kind {
            ViolationKind::Heap { link, parent, child } => write!(
                f,
                "heap violation at {at}: {} child priority {child} exceeds parent priority {parent}",
                link.label()
            ),
            ViolationKind::Priority { prio, expected } => write!(
                f,
                "priority inconsistency at {at}: prio {prio}, max(str_prio, mid.prio) = {expected}"
            ),
            ViolationKind::Dead => write!(f, "dead node at {at}: priority 0"),
            ViolationKind::StringPriority { str_prio, ceiling } => write!(
                f,
                "string priority out of range at {at}: {str_prio} not in [1, {ceiling}]"
            ),
            ViolationKind::Order { byte, low, high } => write!(
                f,
                "order violation at {at}: byte {byte:#04x} outside ({}, {})",
                low.map_or("-inf".to_string(), |b| format!("{b:#04x}")),
                high.map_or("+inf".to_string(), |b| format!("{b:#04x}")),
            ),
            ViolationKind::Count { count, terminals } => write!(
                f,
                "count mismatch: tree reports {count} strings, {terminals} terminal nodes reachable"
            ),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub violations: Vec<Violation>,
}

impl InvariantReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return write!(f, "ok");
        }
        for v in &self.violations {
            writeln!(f, "{v}")?;
        }
        Ok(())
    }
}

struct Visit {
    id: NodeId,
    low: Option<u8>,
    high: Option<u8>,
    trail: usize,
}

impl<P> RTrie<P> {
    /// Walks every reachable node and reports each broken invariant.
    pub fn check_invariants(&self) -> InvariantReport {
        let mut violations = Vec::new();
        // (parent trail index, link) per visited node, for path reconstruction.
        let mut trails: Vec<(usize, Link)> = Vec::new();
        let path_of = |trails: &[(usize, Link)], mut at: usize| {
            let mut steps = Vec::new();
            while at != usize::MAX {
                let (parent, link) = trails[at];
                steps.push(link.label());
                at = parent;
            }
            steps.iter().rev().collect::<String>()
        };

        let mut terminals = 0;
        let mut stack = Vec::new();
        if self.root != NIL {
            stack.push(Visit {
                id: self.root,
                low: None,
                high: None,
                trail: usize::MAX,
            });
        }
        while let Some(Visit {
            id,
            low,
            high,
            trail,
        }) = stack.pop()
        {
            let node = self.node(id);
            let mut report = |kind| {
                violations.push(Violation {
                    path: path_of(&trails, trail),
                    kind,
                })
            };

            if node.str_prio > 0 {
                terminals += 1;
                if node.str_prio > self.ceiling {
                    report(ViolationKind::StringPriority {
                        str_prio: node.str_prio,
                        ceiling: self.ceiling,
                    });
                }
            }
            let expected = node.str_prio.max(self.prio(node.mid));
            if node.prio != expected {
                report(ViolationKind::Priority {
                    prio: node.prio,
                    expected,
                });
            }
            if node.prio == 0 {
                report(ViolationKind::Dead);
            }
            for (link, child) in [(Link::Left, node.left), (Link::Right, node.right)] {
                if self.prio(child) > node.prio {
                    report(ViolationKind::Heap {
                        link,
                        parent: node.prio,
                        child: self.prio(child),
                    });
                }
            }
            if low.is_some_and(|l| node.byte <= l) || high.is_some_and(|h| node.byte >= h) {
                report(ViolationKind::Order {
                    byte: node.byte,
                    low,
                    high,
                });
            }

            for (link, child, low, high) in [
                (Link::Right, node.right, Some(node.byte), high),
                (Link::Mid, node.mid, None, None),
                (Link::Left, node.left, low, Some(node.byte)),
            ] {
                if child != NIL {
                    trails.push((trail, link));
                    stack.push(Visit {
                        id: child,
                        low,
                        high,
                        trail: trails.len() - 1,
                    });
                }
            }
        }

        if terminals != self.count {
            violations.push(Violation {
                path: String::new(),
                kind: ViolationKind::Count {
                    count: self.count,
                    terminals,
                },
            });
        }
        InvariantReport { violations }
    }
}
