//! Parallel sort-based matching.
//!
//! The sorted endpoint array is cut into `P` contiguous segments. Each worker
//! first summarizes its segment as four delta sets: regions opened but not
//! closed inside the segment, and regions closed but not opened inside it.
//! A serial prefix pass turns the deltas into the active sets the sequential
//! sweep would hold at every segment boundary, and a second parallel pass
//! sweeps each segment from those initial sets, reporting overlaps.
//!
//! Every phase is fork-join over disjoint slices; no locks are taken.

use std::cmp::Ordering;
use std::collections::btree_set;
use std::collections::BTreeSet;

use crate::exec::{even_blocks, run_workers, sort_by};
use crate::geometry::{Interval, MatchReport, Role};
use crate::matchers::MatcherConfig;
use crate::sink::{with_sink, PairSink};

/// Which end of a region an endpoint is.
///
/// The derived order puts `Upper` before `Lower`, so at equal coordinates a
/// region ending at `t` is retired before one starting at `t` is opened and
/// touching half-open intervals never pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Endpoint {
    pub coord: f64,
    pub kind: BoundKind,
    pub role: Role,
    pub id: u32,
}

impl Endpoint {
    /// Total order used by the sweep: coordinate, then kind (upper first),
    /// then role, then id.
    #[inline]
    pub fn sweep_cmp(&self, other: &Self) -> Ordering {
        self.coord
            .total_cmp(&other.coord)
            .then(self.kind.cmp(&other.kind))
            .then(self.role.cmp(&other.role))
            .then(self.id.cmp(&other.id))
    }
}

/// Flat array holding both endpoints of every non-empty input region.
///
/// Empty intervals are left out: they overlap nothing, and their upper
/// bound would sort ahead of their lower bound.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EndpointArray {
    entries: Vec<Endpoint>,
}

impl EndpointArray {
    pub fn from_entries(entries: Vec<Endpoint>) -> Self {
        Self { entries }
    }

    pub fn as_slice(&self) -> &[Endpoint] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_sorted(&self) -> bool {
        self.entries
            .windows(2)
            .all(|w| w[0].sweep_cmp(&w[1]) != Ordering::Greater)
    }

    /// Splits into `parts` contiguous segments whose sizes differ by at most one.
    pub fn segments(&self, parts: usize) -> Vec<&[Endpoint]> {
        even_blocks(self.entries.len(), parts)
            .into_iter()
            .map(|r| &self.entries[r])
            .collect()
    }

    pub fn into_entries(self) -> Vec<Endpoint> {
        self.entries
    }
}

fn push_endpoints(out: &mut Vec<Endpoint>, role: Role, id: u32, iv: &Interval) {
    if iv.is_empty() {
        return;
    }
    out.push(Endpoint {
        coord: iv.lower(),
        kind: BoundKind::Lower,
        role,
        id,
    });
    out.push(Endpoint {
        coord: iv.upper(),
        kind: BoundKind::Upper,
        role,
        id,
    });
}

/// Collects the endpoints of `subs` and `upds` (indexed by id), splitting
/// the regions across `workers`.
pub fn build_endpoints(subs: &[Interval], upds: &[Interval], workers: usize) -> EndpointArray {
    let n = subs.len();
    let total = n + upds.len();
    let parts = run_workers(workers, |w| {
        let block = even_blocks(total, workers).swap_remove(w);
        let mut out = Vec::with_capacity(2 * block.len());
        for k in block {
            if k < n {
                push_endpoints(&mut out, Role::Subscription, k as u32, &subs[k]);
            } else {
                push_endpoints(&mut out, Role::Update, (k - n) as u32, &upds[k - n]);
            }
        }
        out
    });
    EndpointArray {
        entries: parts.concat(),
    }
}

pub fn sort_endpoints(endpoints: &mut EndpointArray, workers: usize) {
    sort_by(&mut endpoints.entries, workers, Endpoint::sweep_cmp);
}

/// Ordered set of region ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActiveSet(BTreeSet<u32>);

impl ActiveSet {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn insert(&mut self, id: u32) -> bool {
        self.0.insert(id)
    }

    #[inline]
    pub fn remove(&mut self, id: u32) -> bool {
        self.0.remove(&id)
    }

    #[inline]
    pub fn contains(&self, id: u32) -> bool {
        self.0.contains(&id)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.is_disjoint(&other.0)
    }

    /// `(self ∪ add) \ del`.
    pub fn advanced(&self, add: &Self, del: &Self) -> Self {
        let mut out = self.0.clone();
        out.extend(add.0.iter().copied());
        for id in &del.0 {
            out.remove(id);
        }
        Self(out)
    }
}

impl FromIterator<u32> for ActiveSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a ActiveSet {
    type Item = &'a u32;
    type IntoIter = btree_set::Iter<'a, u32>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// What one segment opens and closes, as seen by the sequential sweep.
///
/// * `sub_add`/`upd_add`: regions whose lower endpoint is in the segment and
///   whose upper endpoint is not.
/// * `sub_del`/`upd_del`: regions whose upper endpoint is in the segment and
///   whose lower endpoint is not.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SegmentDeltas {
    pub sub_add: ActiveSet,
    pub sub_del: ActiveSet,
    pub upd_add: ActiveSet,
    pub upd_del: ActiveSet,
}

pub fn segment_scan(segment: &[Endpoint]) -> SegmentDeltas {
    let mut sub_add = SweepSet::default();
    let mut upd_add = SweepSet::default();
    // An upper bound whose lower bound is not in this segment can never be
    // followed by that lower bound, so closings only need a list.
    let mut sub_del = Vec::new();
    let mut upd_del = Vec::new();
    for e in segment {
        let (add, del) = match e.role {
            Role::Subscription => (&mut sub_add, &mut sub_del),
            Role::Update => (&mut upd_add, &mut upd_del),
        };
        match e.kind {
            BoundKind::Lower => {
                add.insert(e.id);
            }
            BoundKind::Upper => {
                if !add.remove(e.id) {
                    del.push(e.id);
                }
            }
        }
    }
    SegmentDeltas {
        sub_add: sub_add.to_active_set(),
        sub_del: sub_del.into_iter().collect(),
        upd_add: upd_add.to_active_set(),
        upd_del: upd_del.into_iter().collect(),
    }
}

/// Active sets at the start of every segment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ActiveSets {
    pub subs: Vec<ActiveSet>,
    pub upds: Vec<ActiveSet>,
}

impl ActiveSets {
    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }
}

/// Serial prefix pass: segment 0 starts empty and segment `p` starts from
/// segment `p - 1`'s sets advanced by its deltas.
pub fn prefix_combine(deltas: &[SegmentDeltas]) -> ActiveSets {
    let mut out = ActiveSets::default();
    if deltas.is_empty() {
        return out;
    }
    out.subs.push(ActiveSet::new());
    out.upds.push(ActiveSet::new());
    for (p, prev) in deltas.iter().enumerate().take(deltas.len() - 1) {
        debug_assert!(prev.sub_add.is_disjoint(&prev.sub_del));
        let subs = out.subs[p].advanced(&prev.sub_add, &prev.sub_del);
        let upds = out.upds[p].advanced(&prev.upd_add, &prev.upd_del);
        out.subs.push(subs);
        out.upds.push(upds);
    }
    out
}

const VACANT: u32 = u32::MAX;

/// Unordered id set with constant-time insert, remove and listing, used by
/// the sweep. `slot[id]` is the id's position in `members`, or `VACANT`.
#[derive(Clone, Debug, Default)]
pub struct SweepSet {
    members: Vec<u32>,
    slot: Vec<u32>,
}

impl SweepSet {
    /// An empty set with room for ids below `universe`.
    pub fn with_universe(universe: usize) -> Self {
        Self {
            members: Vec::new(),
            slot: vec![VACANT; universe],
        }
    }

    #[inline]
    pub fn insert(&mut self, id: u32) -> bool {
        let i = id as usize;
        if i >= self.slot.len() {
            self.slot.resize(i + 1, VACANT);
        }
        if self.slot[i] != VACANT {
            return false;
        }
        self.slot[i] = self.members.len() as u32;
        self.members.push(id);
        true
    }

    #[inline]
    pub fn remove(&mut self, id: u32) -> bool {
        let Some(&pos) = self.slot.get(id as usize) else {
            return false;
        };
        if pos == VACANT {
            return false;
        }
        self.members.swap_remove(pos as usize);
        if let Some(&moved) = self.members.get(pos as usize) {
            self.slot[moved as usize] = pos;
        }
        self.slot[id as usize] = VACANT;
        true
    }

    #[inline]
    pub fn contains(&self, id: u32) -> bool {
        self.slot.get(id as usize).is_some_and(|&p| p != VACANT)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in no particular order.
    #[inline]
    pub fn as_slice(&self) -> &[u32] {
        &self.members
    }

    pub fn to_active_set(&self) -> ActiveSet {
        self.members.iter().copied().collect()
    }
}

impl PartialEq for SweepSet {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.members.iter().all(|&id| other.contains(id))
    }
}

impl Eq for SweepSet {}

/// Sweep state: the currently active subscriptions and updates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Sweep {
    pub subs: SweepSet,
    pub upds: SweepSet,
}

impl Sweep {
    pub fn new() -> Self {
        Self::default()
    }

    /// Preallocated for `n` subscriptions and `m` updates.
    pub fn with_universe(n: usize, m: usize) -> Self {
        Self {
            subs: SweepSet::with_universe(n),
            upds: SweepSet::with_universe(m),
        }
    }

    pub fn starting_from(mut self, subs: &ActiveSet, upds: &ActiveSet) -> Self {
        for id in subs {
            self.subs.insert(*id);
        }
        for id in upds {
            self.upds.insert(*id);
        }
        self
    }

    /// Processes one endpoint. Pairs are reported only at upper bounds.
    #[inline]
    pub fn advance<K: PairSink + ?Sized>(&mut self, e: &Endpoint, sink: &mut K) {
        match (e.role, e.kind) {
            (Role::Subscription, BoundKind::Lower) => {
                self.subs.insert(e.id);
            }
            (Role::Subscription, BoundKind::Upper) => {
                self.subs.remove(e.id);
                sink.report_sub_against(e.id, self.upds.as_slice());
            }
            (Role::Update, BoundKind::Lower) => {
                self.upds.insert(e.id);
            }
            (Role::Update, BoundKind::Upper) => {
                self.upds.remove(e.id);
                sink.report_upd_against(self.subs.as_slice(), e.id);
            }
        }
    }

    pub fn run<K: PairSink + ?Sized>(&mut self, endpoints: &[Endpoint], sink: &mut K) {
        for e in endpoints {
            self.advance(e, sink);
        }
    }
}

/// Sweeps one segment from its initial active sets. `universe` holds the
/// subscription and update counts.
pub fn final_scan<K: PairSink + ?Sized>(
    segment: &[Endpoint],
    initial: (&ActiveSet, &ActiveSet),
    universe: (usize, usize),
    sink: &mut K,
) {
    Sweep::with_universe(universe.0, universe.1)
        .starting_from(initial.0, initial.1)
        .run(segment, sink);
}

/// Parallel sort-based matching over 1-D intervals indexed by region id.
/// Produces the same report as sequential SBM for every worker count.
pub fn match_sbm_par(subs: &[Interval], upds: &[Interval], cfg: &MatcherConfig) -> MatchReport {
    let workers = cfg.workers.max(1);
    let mut endpoints = build_endpoints(subs, upds, workers);
    sort_endpoints(&mut endpoints, workers);
    let segments = endpoints.segments(workers);
    // The last segment's deltas would only feed a segment that does not exist.
    let deltas = run_workers(workers, |p| {
        if p + 1 < workers {
            segment_scan(segments[p])
        } else {
            SegmentDeltas::default()
        }
    });
    let active = prefix_combine(&deltas);
    with_sink!(cfg.mode, Sink => run_workers(workers, |p| {
        let mut sink = Sink::default();
        final_scan(
            segments[p],
            (&active.subs[p], &active.upds[p]),
            (subs.len(), upds.len()),
            &mut sink,
        );
        sink
    }))
}
