use super::*;
use crate::oracle::{build_decreasing_priority, PrioritizedSet};
use crate::priority::FixedPriorities;

const NAMES: [&str; 7] = ["AMY", "ANN", "ANNA", "BOB", "KIM", "LIZ", "TOM"];

fn fixed(pairs: &[(&str, u32)]) -> RTrie<FixedPriorities> {
    let src: FixedPriorities = pairs.iter().map(|&(s, p)| (s, p)).collect();
    RTrie::with_priorities(100, src).unwrap()
}

fn raw(root: RawNode) -> RTrie {
    RTrie::from_raw(DEFAULT_CEILING, SeededPriorities::new(0), Some(root)).unwrap()
}

fn names_trie() -> RTrie {
    let mut t = RTrie::seeded(42);
    for s in NAMES {
        assert_eq!(t.insert(s).unwrap(), InsertOutcome::Inserted);
    }
    t
}

#[test]
fn new_validates_ceiling() {
    let t = RTrie::new(DEFAULT_CEILING, 42).unwrap();
    assert!(t.root().is_none());
    assert_eq!(t.len(), 0);
    assert!(t.is_empty());
    assert!(matches!(RTrie::new(0, 0), Err(Error::InvalidParameter(_))));
}

#[test]
fn ceiling_one_gives_every_string_priority_one() {
    let mut t = RTrie::new(1, 0).unwrap();
    for s in NAMES {
        t.insert(s).unwrap();
    }
    let mut stack: Vec<_> = t.root().into_iter().collect();
    while let Some(n) = stack.pop() {
        assert!(n.str_prio() <= 1);
        assert_eq!(n.prio(), 1);
        stack.extend([n.left(), n.mid(), n.right()].into_iter().flatten());
    }
    assert!(t.check_invariants().is_ok());
}

#[test]
fn membership() {
    let empty = RTrie::seeded(1);
    assert!(!empty.contains("A").unwrap());

    let mut t = RTrie::seeded(1);
    t.insert("ANNA").unwrap();
    assert!(!t.contains("ANN").unwrap());
    assert!(t.contains("ANNA").unwrap());

    let t = names_trie();
    for s in NAMES {
        assert!(t.contains(s).unwrap(), "{s}");
    }
    assert!(!t.contains("AN").unwrap());
    assert!(!t.contains("TOMMY").unwrap());
}

#[test]
fn empty_string_is_rejected_everywhere() {
    let mut t = names_trie();
    let before = t.shape_digest();
    assert_eq!(t.contains(""), Err(Error::EmptyString));
    assert_eq!(t.search_path(""), Err(Error::EmptyString));
    assert_eq!(t.insert(""), Err(Error::EmptyString));
    assert_eq!(t.delete(""), Err(Error::EmptyString));
    assert_eq!(t.shape_digest(), before);
}

#[test]
fn search_path_on_single_chain() {
    let mut t = RTrie::seeded(9);
    t.insert("JOE").unwrap();
    let p = t.search_path("JOE").unwrap();
    assert_eq!(
        p,
        PathStats {
            found: true,
            chars_consumed: 3,
            sidesteps: 0,
            depth: 3
        }
    );
}

#[test]
fn search_path_counts_sidestep() {
    let mut t = fixed(&[("B", 2), ("A", 1)]);
    t.insert("B").unwrap();
    t.insert("A").unwrap();
    let p = t.search_path("A").unwrap();
    assert!(p.found);
    assert_eq!((p.sidesteps, p.depth, p.chars_consumed), (1, 2, 1));
    assert_eq!(t.root().unwrap().byte(), b'B');
}

#[test]
fn search_path_miss_accounting() {
    let t = names_trie();
    let p = t.search_path("AN").unwrap();
    assert!(!p.found);
    assert_eq!(p.chars_consumed, 2);
    assert_eq!(p.depth, p.chars_consumed + p.sidesteps);
}

#[test]
fn first_insert_creates_single_node() {
    let mut t = RTrie::new(1000, 5).unwrap();
    assert_eq!(t.insert("A").unwrap(), InsertOutcome::Inserted);
    let n = t.root().unwrap();
    assert_eq!(n.byte(), b'A');
    assert!((1..=1000).contains(&n.str_prio()));
    assert_eq!(n.prio(), n.str_prio());
    assert!(n.left().is_none() && n.mid().is_none() && n.right().is_none());
}

#[test]
fn duplicate_insert_is_a_no_op() {
    let mut a = RTrie::seeded(17);
    let mut b = RTrie::seeded(17);
    a.insert("A").unwrap();
    b.insert("A").unwrap();
    let digest = a.shape_digest();
    let prio = a.root().unwrap().prio();
    let rotations = a.rotations();
    assert_eq!(a.insert("A").unwrap(), InsertOutcome::AlreadyPresent);
    assert_eq!(a.shape_digest(), digest);
    assert_eq!(a.root().unwrap().prio(), prio);
    assert_eq!(a.rotations(), rotations);
    assert_eq!(a.len(), 1);

    // The stream was not advanced: the next new string gets the same
    // priority in both trees.
    a.insert("B").unwrap();
    b.insert("B").unwrap();
    assert_eq!(a.nodes, b.nodes);
}

#[test]
fn weighted_set_matches_decreasing_priority_build() {
    let pairs = [
        ("EVE", 50),
        ("JIM", 90),
        ("JIMI", 20),
        ("JOE", 70),
        ("SUE", 40),
    ];
    let oracle = build_decreasing_priority(&PrioritizedSet::new(pairs).unwrap()).unwrap();
    for order in [[0, 1, 2, 3, 4], [4, 3, 2, 1, 0], [2, 0, 4, 1, 3]] {
        let mut t = fixed(&pairs);
        for i in order {
            t.insert(pairs[i].0).unwrap();
        }
        assert_eq!(t.shape_digest(), oracle.shape_digest());
        assert!(t.check_invariants().is_ok());
    }
    // JIM carries the highest priority, so its J is the root.
    let mut t = fixed(&pairs);
    for (s, _) in pairs {
        t.insert(s).unwrap();
    }
    let root = t.root().unwrap();
    assert_eq!(root.byte(), b'J');
    assert_eq!(root.prio(), 90);
    assert_eq!(root.left().unwrap().byte(), b'E');
    assert_eq!(root.right().unwrap().byte(), b'S');
}

#[test]
fn delete_single_string_empties_tree() {
    let mut t = RTrie::seeded(3);
    t.insert("A").unwrap();
    assert_eq!(t.delete("A").unwrap(), DeleteOutcome::Deleted);
    assert!(t.root().is_none());
    assert_eq!(t.len(), 0);
    assert_eq!(t.node_count(), 0);
    assert_eq!(t.shape_digest(), ShapeDigest::empty());
}

#[test]
fn delete_of_absent_string_is_a_no_op() {
    let mut t = names_trie();
    let before = t.nodes.clone();
    for miss in ["Q", "AN", "ANNAS", "TO", "B"] {
        assert_eq!(t.delete(miss).unwrap(), DeleteOutcome::Absent);
    }
    assert_eq!(t.nodes, before);
    assert_eq!(t.len(), 7);
}

#[test]
fn delete_prefix_keeps_chain_of_longer_string() {
    let mut t = fixed(&[("JIM", 30), ("JIMI", 10)]);
    t.insert("JIM").unwrap();
    t.insert("JIMI").unwrap();
    assert_eq!(t.delete("JIM").unwrap(), DeleteOutcome::Deleted);
    assert!(t.contains("JIMI").unwrap());
    assert!(!t.contains("JIM").unwrap());

    let j = t.root().unwrap();
    let i = j.mid().unwrap();
    let m = i.mid().unwrap();
    assert_eq!((j.byte(), i.byte(), m.byte()), (b'J', b'I', b'M'));
    assert_eq!(m.str_prio(), 0);
    assert_eq!(m.prio(), m.mid().unwrap().prio());
    assert_eq!(m.prio(), 10);
    assert_eq!(j.prio(), 10);
    assert_eq!(t.node_count(), 4);
}

#[test]
fn prefix_enumeration() {
    let t = names_trie();
    let got: Vec<_> = t.prefix_iter("AN").collect();
    assert_eq!(got, vec![b"ANN".to_vec(), b"ANNA".to_vec()]);

    let mut sorted: Vec<Vec<u8>> = NAMES.iter().map(|s| s.as_bytes().to_vec()).collect();
    sorted.sort();
    assert_eq!(t.prefix_iter("").collect::<Vec<_>>(), sorted);
    assert_eq!(t.iter().count(), 7);
    assert_eq!(t.prefix_iter("Z").count(), 0);
    assert_eq!(
        t.prefix_iter("ANNA").collect::<Vec<_>>(),
        vec![b"ANNA".to_vec()]
    );
    assert_eq!(t.prefix_iter("ANNAB").count(), 0);
    assert_eq!(RTrie::seeded(0).iter().count(), 0);
}

#[test]
fn prefix_enumeration_uses_unsigned_byte_order() {
    let mut t = RTrie::seeded(4);
    for s in [&[0xff_u8][..], b"a", &[0x00], &[0x80, 0x01], b"ab"] {
        t.insert(s).unwrap();
    }
    let got: Vec<_> = t.iter().collect();
    assert_eq!(
        got,
        vec![
            vec![0x00],
            b"a".to_vec(),
            b"ab".to_vec(),
            vec![0x80, 0x01],
            vec![0xff]
        ]
    );
}

#[test]
fn rotation_with_left_two_nodes() {
    let mut t = raw(RawNode::new(b'B', 2, 2).with_left(RawNode::new(b'A', 1, 1)));
    let x = t.root;
    let y = t.rotate_with_left(x);
    t.root = y;
    let root = t.root().unwrap();
    assert_eq!(root.byte(), b'A');
    assert!(root.left().is_none());
    assert_eq!(root.right().unwrap().byte(), b'B');
    assert!(root.right().unwrap().left().is_none());
    // Fields other than links are untouched.
    assert_eq!((root.prio(), root.str_prio()), (1, 1));
    assert_eq!(t.rotations(), 1);
}

#[test]
fn rotations_are_mutual_inverses() {
    let tree = RawNode::new(b'M', 9, 0)
        .with_mid(RawNode::new(b'X', 9, 9))
        .with_left(
            RawNode::new(b'D', 7, 7)
                .with_left(RawNode::new(b'B', 3, 3))
                .with_right(RawNode::new(b'F', 2, 2)),
        )
        .with_right(RawNode::new(b'Q', 5, 5));
    let mut t = raw(tree);
    let before = t.nodes.clone();
    let y = t.rotate_with_left(t.root);
    let x = t.rotate_with_right(y);
    t.root = x;
    assert_eq!(t.nodes, before);
}

#[test]
fn rotation_moves_inner_grandchild() {
    let tree = RawNode::new(b'X', 3, 3)
        .with_left(RawNode::new(b'C', 2, 2).with_right(RawNode::new(b'M', 1, 1)));
    let mut t = raw(tree);
    let x = t.root;
    let y = t.rotate_with_left(x);
    t.root = y;
    let y = t.root().unwrap();
    assert_eq!(y.byte(), b'C');
    let x = y.right().unwrap();
    assert_eq!(x.byte(), b'X');
    assert_eq!(x.left().unwrap().byte(), b'M');
}

#[test]
#[should_panic(expected = "without left child")]
fn rotating_with_nil_child_panics() {
    let mut t = raw(RawNode::new(b'A', 1, 1));
    t.rotate_with_left(t.root);
}

#[test]
fn heapify_removes_dead_leaf() {
    let mut t = raw(RawNode::new(b'A', 0, 0));
    let r = t.heapify_or_delete(t.root);
    assert_eq!(r, NIL);
    assert_eq!(t.heapify_or_delete(NIL), NIL);
}

#[test]
fn heapify_sinks_dead_node_below_higher_child() {
    let tree = RawNode::new(b'M', 0, 0)
        .with_left(RawNode::new(b'C', 5, 5))
        .with_right(RawNode::new(b'T', 3, 3));
    let mut t = raw(tree);
    t.root = t.heapify_or_delete(t.root);
    t.count = 2;
    // Left child wins; the dead node then sinks under T and is unlinked.
    let root = t.root().unwrap();
    assert_eq!(root.byte(), b'C');
    let t_node = root.right().unwrap();
    assert_eq!(t_node.byte(), b'T');
    assert!(t_node.left().is_none() && t_node.right().is_none());
    assert_eq!(t.rotations(), 2);
    assert!(t.check_invariants().is_ok());
}

#[test]
fn heapify_tie_rotates_with_right_child() {
    let tree = RawNode::new(b'M', 0, 0)
        .with_left(RawNode::new(b'C', 4, 4))
        .with_right(RawNode::new(b'T', 4, 4));
    let mut t = raw(tree);
    t.root = t.heapify_or_delete(t.root);
    assert_eq!(t.root().unwrap().byte(), b'T');
    assert_eq!(t.root().unwrap().left().unwrap().byte(), b'C');
}

#[test]
fn heapify_leaves_dominating_node_alone() {
    let tree = RawNode::new(b'M', 8, 8)
        .with_left(RawNode::new(b'C', 5, 5))
        .with_right(RawNode::new(b'T', 3, 3));
    let mut t = raw(tree);
    let before = t.nodes.clone();
    let root = t.root;
    assert_eq!(t.heapify_or_delete(root), root);
    assert_eq!(t.nodes, before);
    assert_eq!(t.rotations(), 0);
}

#[test]
fn len_follows_set_semantics() {
    assert_eq!(RTrie::seeded(0).len(), 0);
    assert_eq!(names_trie().len(), 7);
    let mut t = RTrie::seeded(0);
    t.insert("X").unwrap();
    t.insert("X").unwrap();
    assert_eq!(t.len(), 1);
}

#[test]
fn invariants_hold_after_updates() {
    let mut t = names_trie();
    assert!(t.check_invariants().is_ok());
    for s in ["ANN", "BOB", "AMY"] {
        t.delete(s).unwrap();
        assert!(t.check_invariants().is_ok());
    }
}

#[test]
fn planted_heap_violation_is_reported_with_path() {
    let tree = RawNode::new(b'M', 4, 0)
        .with_mid(RawNode::new(b'K', 4, 4).with_right(RawNode::new(b'Z', 9, 9)));
    let t = raw(tree);
    let report = t.check_invariants();
    let heap: Vec<_> = report
        .violations
        .iter()
        .filter(|v| matches!(v.kind, ViolationKind::Heap { .. }))
        .collect();
    assert_eq!(heap.len(), 1);
    assert_eq!(heap[0].path, "M");
    assert_eq!(
        heap[0].kind,
        ViolationKind::Heap {
            link: Link::Right,
            parent: 4,
            child: 9
        }
    );
    assert!(heap[0].to_string().contains("heap violation"));
}

#[test]
fn planted_priority_inconsistency_is_reported() {
    let tree = RawNode::new(b'A', 3, 0).with_mid(RawNode::new(b'B', 5, 5));
    let report = raw(tree).check_invariants();
    assert_eq!(
        report.violations,
        vec![Violation {
            path: String::new(),
            kind: ViolationKind::Priority {
                prio: 3,
                expected: 5
            }
        }]
    );
}

#[test]
fn planted_order_dead_and_range_violations() {
    let tree = RawNode::new(b'M', 9, 9)
        .with_left(RawNode::new(b'C', 5, 5).with_right(RawNode::new(b'P', 4, 4)))
        .with_right(RawNode::new(b'T', 0, 0));
    let t = RTrie::from_raw(8, SeededPriorities::new(0), Some(tree)).unwrap();
    let report = t.check_invariants();
    let kinds: Vec<_> = report
        .violations
        .iter()
        .map(|v| (&v.path[..], &v.kind))
        .collect();
    assert!(kinds.contains(&(
        "",
        &ViolationKind::StringPriority {
            str_prio: 9,
            ceiling: 8
        }
    )));
    assert!(kinds.contains(&("R", &ViolationKind::Dead)));
    assert!(kinds.contains(&(
        "LR",
        &ViolationKind::Order {
            byte: b'P',
            low: Some(b'C'),
            high: Some(b'M')
        }
    )));
}

#[test]
fn count_mismatch_is_reported() {
    let mut t = raw(RawNode::new(b'A', 1, 1));
    t.count = 2;
    let report = t.check_invariants();
    assert_eq!(
        report.violations[0].kind,
        ViolationKind::Count {
            count: 2,
            terminals: 1
        }
    );
}

#[test]
fn failing_priority_source_leaves_tree_untouched() {
    let mut t = fixed(&[("A", 5), ("C", 200)]);
    t.insert("A").unwrap();
    let before = t.nodes.clone();
    assert_eq!(t.insert("B"), Err(Error::MissingPriority("B".into())));
    assert_eq!(
        t.insert("C"),
        Err(Error::PriorityOutOfRange {
            priority: 200,
            ceiling: 100
        })
    );
    assert_eq!(t.nodes, before);
    assert_eq!(t.len(), 1);
}

#[test]
fn very_long_strings_do_not_exhaust_the_stack() {
    let mut t = RTrie::seeded(11);
    let long: Vec<u8> = (0..200_000).map(|i| b'a' + (i % 26) as u8).collect();
    let mut longer = long.clone();
    longer.push(b'z');
    t.insert(&long).unwrap();
    t.insert(&longer).unwrap();
    t.insert(b"b").unwrap();
    assert!(t.contains(&long).unwrap());
    assert_eq!(
        t.search_path(&longer).unwrap().depth,
        200_001 + t.search_path(&longer).unwrap().sidesteps
    );
    assert_eq!(t.prefix_iter(&long[..10]).count(), 2);
    assert!(t.check_invariants().is_ok());
    let _ = t.shape_digest();
    assert_eq!(t.delete(&long).unwrap(), DeleteOutcome::Deleted);
    assert_eq!(t.delete(&longer).unwrap(), DeleteOutcome::Deleted);
    assert_eq!(t.len(), 1);
    assert_eq!(t.node_count(), 1);
}

#[test]
fn freed_slots_are_reused() {
    let mut t = RTrie::seeded(2);
    t.insert("ABCDEF").unwrap();
    t.delete("ABCDEF").unwrap();
    let slots = t.nodes.len();
    t.insert("UVWXYZ").unwrap();
    assert_eq!(t.nodes.len(), slots);
    assert_eq!(t.node_count(), 6);
}
