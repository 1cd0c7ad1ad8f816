//! Augmented AVL tree of half-open intervals.
//!
//! Nodes are ordered by `(lower, upper, region id)` and carry the minimum
//! lower bound and maximum upper bound of their subtree, which lets
//! [`IntervalTree::query_overlaps`] skip subtrees that cannot contain an
//! overlapping interval. Queries take `&self`, so a built tree can be shared
//! by any number of reader threads.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::{intersect_1d, Interval};

type Link = Option<Box<Node>>;

#[derive(Clone, Debug)]
struct Node {
    interval: Interval,
    id: u32,
    min_lower: f64,
    max_upper: f64,
    height: u8,
    left: Link,
    right: Link,
}

impl Node {
    fn leaf(interval: Interval, id: u32) -> Box<Self> {
        Box::new(Self {
            interval,
            id,
            min_lower: interval.lower(),
            max_upper: interval.upper(),
            height: 1,
            left: None,
            right: None,
        })
    }

    fn key_cmp(&self, interval: &Interval, id: u32) -> Ordering {
        key_cmp(&self.interval, self.id, interval, id)
    }

    /// Recomputes height and augmentation from the children.
    fn refresh(&mut self) {
        let mut min_lower = self.interval.lower();
        let mut max_upper = self.interval.upper();
        for child in [&self.left, &self.right].into_iter().flatten() {
            min_lower = min_lower.min(child.min_lower);
            max_upper = max_upper.max(child.max_upper);
        }
        self.min_lower = min_lower;
        self.max_upper = max_upper;
        self.height = 1 + height(&self.left).max(height(&self.right));
    }

    fn balance(&self) -> i32 {
        height(&self.left) as i32 - height(&self.right) as i32
    }
}

fn key_cmp(a: &Interval, a_id: u32, b: &Interval, b_id: u32) -> Ordering {
    a.lower()
        .total_cmp(&b.lower())
        .then(a.upper().total_cmp(&b.upper()))
        .then(a_id.cmp(&b_id))
}

#[inline]
fn height(link: &Link) -> u8 {
    link.as_ref().map_or(0, |n| n.height)
}

fn rotate_right(mut node: Box<Node>) -> Box<Node> {
    let mut pivot = node.left.take().expect("rotate_right without left child");
    node.left = pivot.right.take();
    node.refresh();
    pivot.right = Some(node);
    pivot.refresh();
    pivot
}

fn rotate_left(mut node: Box<Node>) -> Box<Node> {
    let mut pivot = node.right.take().expect("rotate_left without right child");
    node.right = pivot.left.take();
    node.refresh();
    pivot.left = Some(node);
    pivot.refresh();
    pivot
}

fn rebalance(mut node: Box<Node>) -> Box<Node> {
    node.refresh();
    let bf = node.balance();
    if bf > 1 {
        if node.left.as_ref().is_some_and(|l| l.balance() < 0) {
            node.left = node.left.take().map(rotate_left);
        }
        rotate_right(node)
    } else if bf < -1 {
        if node.right.as_ref().is_some_and(|r| r.balance() > 0) {
            node.right = node.right.take().map(rotate_right);
        }
        rotate_left(node)
    } else {
        node
    }
}

fn insert_at(link: Link, interval: Interval, id: u32) -> Box<Node> {
    match link {
        None => Node::leaf(interval, id),
        Some(mut node) => {
            // Equal keys go right, giving multiset semantics.
            if node.key_cmp(&interval, id) == Ordering::Greater {
                node.left = Some(insert_at(node.left.take(), interval, id));
            } else {
                node.right = Some(insert_at(node.right.take(), interval, id));
            }
            rebalance(node)
        }
    }
}

/// Detaches the minimum node of a non-empty subtree.
fn take_min(mut node: Box<Node>) -> (Link, Box<Node>) {
    match node.left.take() {
        None => (node.right.take(), node),
        Some(left) => {
            let (rest, min) = take_min(left);
            node.left = rest;
            (Some(rebalance(node)), min)
        }
    }
}

fn remove_at(link: Link, interval: &Interval, id: u32, removed: &mut bool) -> Link {
    let mut node = link?;
    match node.key_cmp(interval, id) {
        Ordering::Greater => node.left = remove_at(node.left.take(), interval, id, removed),
        Ordering::Less => node.right = remove_at(node.right.take(), interval, id, removed),
        Ordering::Equal => {
            *removed = true;
            return match (node.left.take(), node.right.take()) {
                (None, None) => None,
                (Some(child), None) | (None, Some(child)) => Some(child),
                (Some(left), Some(right)) => {
                    let (rest, mut successor) = take_min(right);
                    successor.left = Some(left);
                    successor.right = rest;
                    Some(rebalance(successor))
                }
            };
        }
    }
    Some(rebalance(node))
}

fn build_sorted(items: &[(Interval, u32)]) -> Link {
    if items.is_empty() {
        return None;
    }
    let mid = items.len() / 2;
    let (interval, id) = items[mid];
    let mut node = Node::leaf(interval, id);
    node.left = build_sorted(&items[..mid]);
    node.right = build_sorted(&items[mid + 1..]);
    node.refresh();
    Some(node)
}

fn query_at<F: FnMut(u32)>(link: &Link, q: &Interval, sink: &mut F) {
    let Some(node) = link else { return };
    if node.max_upper <= q.lower() || node.min_lower >= q.upper() {
        return;
    }
    query_at(&node.left, q, sink);
    if intersect_1d(&node.interval, q) {
        sink(node.id);
    }
    // Everything on the right starts at or after this node's lower bound.
    if q.upper() > node.interval.lower() {
        query_at(&node.right, q, sink);
    }
}

/// A failed structural check, naming the offending node.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeViolation {
    pub interval: Interval,
    pub id: u32,
    pub reason: String,
}

impl fmt::Display for TreeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "node {} (region {}): {}", self.interval, self.id, self.reason)
    }
}

impl std::error::Error for TreeViolation {}

#[derive(Clone, Debug, Default)]
pub struct IntervalTree {
    root: Link,
    len: usize,
}

impl IntervalTree {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a balanced tree holding exactly the given `(interval, id)` multiset.
    pub fn build<I>(items: I) -> Self
    where
        I: IntoIterator<Item = (Interval, u32)>,
    {
        let mut items: Vec<_> = items.into_iter().collect();
        items.sort_unstable_by(|a, b| key_cmp(&a.0, a.1, &b.0, b.1));
        Self {
            root: build_sorted(&items),
            len: items.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn height(&self) -> usize {
        height(&self.root) as usize
    }

    /// `(min lower, max upper)` over all stored intervals.
    pub fn bounds(&self) -> Option<(f64, f64)> {
        self.root.as_ref().map(|n| (n.min_lower, n.max_upper))
    }

    pub fn insert(&mut self, interval: Interval, id: u32) {
        self.root = Some(insert_at(self.root.take(), interval, id));
        self.len += 1;
    }

    /// Removes one occurrence of `(interval, id)`.
    pub fn delete(&mut self, interval: &Interval, id: u32) -> Result<()> {
        let mut removed = false;
        self.root = remove_at(self.root.take(), interval, id, &mut removed);
        if removed {
            self.len -= 1;
            Ok(())
        } else {
            Err(Error::NotInTree {
                interval: *interval,
                id,
            })
        }
    }

    pub fn contains(&self, interval: &Interval, id: u32) -> bool {
        let mut cur = &self.root;
        while let Some(node) = cur {
            cur = match node.key_cmp(interval, id) {
                Ordering::Greater => &node.left,
                Ordering::Less => &node.right,
                Ordering::Equal => return true,
            };
        }
        false
    }

    /// Calls `sink` once with the region id of every stored interval that
    /// overlaps `q`.
    pub fn query_overlaps<F: FnMut(u32)>(&self, q: &Interval, mut sink: F) {
        if q.is_empty() {
            return;
        }
        query_at(&self.root, q, &mut sink);
    }

    /// In-order `(interval, id)` entries.
    pub fn entries(&self) -> Vec<(Interval, u32)> {
        fn walk(link: &Link, out: &mut Vec<(Interval, u32)>) {
            if let Some(n) = link {
                walk(&n.left, out);
                out.push((n.interval, n.id));
                walk(&n.right, out);
            }
        }
        let mut out = Vec::with_capacity(self.len);
        walk(&self.root, &mut out);
        out
    }

    /// Verifies ordering, AVL balance, heights, augmentation and size.
    pub fn check_invariants(&self) -> Result<(), TreeViolation> {
        struct Summary {
            height: u8,
            min_lower: f64,
            max_upper: f64,
            count: usize,
        }

        fn violation(n: &Node, reason: String) -> TreeViolation {
            TreeViolation {
                interval: n.interval,
                id: n.id,
                reason,
            }
        }

        fn check(link: &Link, prev: &mut Option<(Interval, u32)>) -> Result<Option<Summary>, TreeViolation> {
            let Some(n) = link else { return Ok(None) };
            let left = check(&n.left, prev)?;
            if let Some((pi, pid)) = prev {
                if key_cmp(pi, *pid, &n.interval, n.id) == Ordering::Greater {
                    return Err(violation(n, format!("out of order after {pi} (region {pid})")));
                }
            }
            *prev = Some((n.interval, n.id));
            let right = check(&n.right, prev)?;

            let hl = left.as_ref().map_or(0, |s| s.height);
            let hr = right.as_ref().map_or(0, |s| s.height);
            if (hl as i32 - hr as i32).abs() > 1 {
                return Err(violation(n, format!("unbalanced: left height {hl}, right height {hr}")));
            }
            let h = 1 + hl.max(hr);
            if n.height != h {
                return Err(violation(n, format!("stored height {} but actual {h}", n.height)));
            }
            let mut min_lower = n.interval.lower();
            let mut max_upper = n.interval.upper();
            let mut count = 1;
            for s in [&left, &right].into_iter().flatten() {
                min_lower = min_lower.min(s.min_lower);
                max_upper = max_upper.max(s.max_upper);
                count += s.count;
            }
            if n.min_lower != min_lower {
                return Err(violation(n, format!("minlower {} but subtree minimum {min_lower}", n.min_lower)));
            }
            if n.max_upper != max_upper {
                return Err(violation(n, format!("maxupper {} but subtree maximum {max_upper}", n.max_upper)));
            }
            Ok(Some(Summary {
                height: h,
                min_lower,
                max_upper,
                count,
            }))
        }

        let summary = check(&self.root, &mut None)?;
        let count = summary.map_or(0, |s| s.count);
        if count != self.len {
            let (interval, id) = self
                .root
                .as_ref()
                .map_or((Interval::raw(0.0, 0.0), 0), |n| (n.interval, n.id));
            return Err(TreeViolation {
                interval,
                id,
                reason: format!("size {} but {count} reachable nodes", self.len),
            });
        }
        Ok(())
    }

    #[cfg(test)]
    fn root_mut(&mut self) -> Option<&mut Node> {
        self.root.as_deref_mut()
    }
}
