//! Register stores: the per-thread capture-slot container, in three
//! flavors with different fork/set cost profiles.
//!
//! - copy-array: O(1) set, fork copies every slot;
//! - immutable update list: O(1) set and fork, materialize replays;
//! - immutable balanced tree: O(log n) set, O(1) fork.

use std::rc::Rc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoreKind {
    Array,
    List,
    Tree,
}

#[derive(Debug, Clone)]
pub enum RegStore {
    Array(Vec<Option<usize>>),
    List {
        head: Option<Rc<ListNode>>,
        slots: usize,
    },
    Tree {
        root: Rc<TreeNode>,
        slots: usize,
    },
}

#[derive(Debug)]
pub struct ListNode {
    index: usize,
    value: Option<usize>,
    next: Option<Rc<ListNode>>,
}

#[derive(Debug)]
pub enum TreeNode {
    Leaf(Option<usize>),
    Inner(Rc<TreeNode>, Rc<TreeNode>),
}

fn build_tree(depth: u32) -> Rc<TreeNode> {
    if depth == 0 {
        Rc::new(TreeNode::Leaf(None))
    } else {
        let child = build_tree(depth - 1);
        Rc::new(TreeNode::Inner(child.clone(), child))
    }
}

fn tree_depth(slots: usize) -> u32 {
    let mut d = 0;
    while (1usize << d) < slots.max(1) {
        d += 1;
    }
    d
}

fn tree_set(node: &Rc<TreeNode>, depth: u32, index: usize, value: Option<usize>) -> Rc<TreeNode> {
    match (&**node, depth) {
        (TreeNode::Leaf(_), 0) => Rc::new(TreeNode::Leaf(value)),
        (TreeNode::Inner(l, r), d) => {
            let bit = (index >> (d - 1)) & 1;
            if bit == 0 {
                Rc::new(TreeNode::Inner(tree_set(l, d - 1, index, value), r.clone()))
            } else {
                Rc::new(TreeNode::Inner(l.clone(), tree_set(r, d - 1, index, value)))
            }
        }
        _ => unreachable!("tree shape mismatch"),
    }
}

fn tree_get(node: &TreeNode, depth: u32, index: usize) -> Option<usize> {
    match (node, depth) {
        (TreeNode::Leaf(v), 0) => *v,
        (TreeNode::Inner(l, r), d) => {
            let bit = (index >> (d - 1)) & 1;
            tree_get(if bit == 0 { l } else { r }, d - 1, index)
        }
        _ => unreachable!("tree shape mismatch"),
    }
}

impl RegStore {
    pub fn new(kind: StoreKind, slots: usize) -> Self {
        match kind {
            StoreKind::Array => RegStore::Array(vec![None; slots]),
            StoreKind::List => RegStore::List { head: None, slots },
            StoreKind::Tree => RegStore::Tree {
                root: build_tree(tree_depth(slots)),
                slots,
            },
        }
    }

    pub fn slots(&self) -> usize {
        match self {
            RegStore::Array(v) => v.len(),
            RegStore::List { slots, .. } | RegStore::Tree { slots, .. } => *slots,
        }
    }

    pub fn set(&mut self, index: usize, value: Option<usize>) {
        match self {
            RegStore::Array(v) => v[index] = value,
            RegStore::List { head, .. } => {
                let next = head.take();
                *head = Some(Rc::new(ListNode { index, value, next }));
            }
            RegStore::Tree { root, slots } => {
                *root = tree_set(root, tree_depth(*slots), index, value);
            }
        }
    }

    /// Creates an independent handle for a forked thread and returns the
    /// number of slots physically copied (the §4.6 cost metric).
    pub fn fork(&self) -> (Self, u64) {
        match self {
            RegStore::Array(v) => (RegStore::Array(v.clone()), v.len() as u64),
            other => (other.clone(), 0),
        }
    }

    pub fn materialize(&self) -> Vec<Option<usize>> {
        match self {
            RegStore::Array(v) => v.clone(),
            RegStore::List { head, slots } => {
                let mut out = vec![None; *slots];
                let mut seen = vec![false; *slots];
                let mut cur = head.as_ref();
                while let Some(node) = cur {
                    if !seen[node.index] {
                        seen[node.index] = true;
                        out[node.index] = node.value;
                    }
                    cur = node.next.as_ref();
                }
                out
            }
            RegStore::Tree { root, slots } => {
                let d = tree_depth(*slots);
                (0..*slots).map(|i| tree_get(root, d, i)).collect()
            }
        }
    }
}
