use crate::exec::{even_blocks, run_workers};
use crate::geometry::{Interval, MatchReport, Role};
use crate::interval_tree::IntervalTree;
use crate::matchers::{MatcherConfig, TreeSide};
use crate::sink::{with_sink, PairSink};

/// The role whose regions go into the tree for `n` subscriptions and `m`
/// updates.
pub fn resolve_tree_side(n: usize, m: usize, side: TreeSide) -> Role {
    match side {
        TreeSide::Subscriptions => Role::Subscription,
        TreeSide::Updates => Role::Update,
        TreeSide::Auto if m < n => Role::Update,
        TreeSide::Auto => Role::Subscription,
    }
}

/// Interval-tree matching: one side is stored in a tree, the other side is
/// split across workers and each of its regions queries the shared tree.
pub fn match_itm(subs: &[Interval], upds: &[Interval], cfg: &MatcherConfig) -> MatchReport {
    let workers = cfg.workers.max(1);
    let tree_role = resolve_tree_side(subs.len(), upds.len(), cfg.itm_tree_side);
    let (stored, queries) = match tree_role {
        Role::Subscription => (subs, upds),
        Role::Update => (upds, subs),
    };
    if stored.is_empty() || queries.is_empty() {
        return MatchReport::empty(cfg.mode);
    }
    let tree = IntervalTree::build(stored.iter().enumerate().map(|(i, iv)| (*iv, i as u32)));
    let blocks = even_blocks(queries.len(), workers);
    with_sink!(cfg.mode, Sink => run_workers(workers, |w| {
        let mut sink = Sink::default();
        for q in blocks[w].clone() {
            let q32 = q as u32;
            match tree_role {
                Role::Subscription => tree.query_overlaps(&queries[q], |s| sink.report(s, q32)),
                Role::Update => tree.query_overlaps(&queries[q], |u| sink.report(q32, u)),
            }
        }
        sink
    }))
}
