//! Destinations for reported `(subscription, update)` pairs.

use crate::geometry::{MatchMode, MatchReport, Pair};

/// Receives overlapping pairs as a matcher finds them.
pub trait PairSink {
    fn report(&mut self, sub: u32, upd: u32);

    /// Reports `sub` against every region in `upds`.
    fn report_sub_against(&mut self, sub: u32, upds: &[u32]) {
        for &u in upds {
            self.report(sub, u);
        }
    }

    /// Reports every region in `subs` against `upd`.
    fn report_upd_against(&mut self, subs: &[u32], upd: u32) {
        for &s in subs {
            self.report(s, upd);
        }
    }
}

/// Keeps every reported pair.
#[derive(Debug, Default)]
pub struct PairCollector(pub Vec<Pair>);

impl PairSink for PairCollector {
    #[inline]
    fn report(&mut self, sub: u32, upd: u32) {
        self.0.push((sub, upd));
    }
}

/// Only counts. Whole active sets are added by cardinality.
#[derive(Debug, Default)]
pub struct PairCounter(pub u64);

impl PairSink for PairCounter {
    #[inline]
    fn report(&mut self, _sub: u32, _upd: u32) {
        self.0 += 1;
    }

    fn report_sub_against(&mut self, _sub: u32, upds: &[u32]) {
        self.0 += upds.len() as u64;
    }

    fn report_upd_against(&mut self, subs: &[u32], _upd: u32) {
        self.0 += subs.len() as u64;
    }
}

impl<F: FnMut(u32, u32)> PairSink for F {
    fn report(&mut self, sub: u32, upd: u32) {
        self(sub, upd)
    }
}

/// A per-worker sink that can be merged into a [`MatchReport`].
pub(crate) trait WorkerSink: PairSink + Default + Send {
    fn into_part(self) -> (Vec<Pair>, u64);
}

impl WorkerSink for PairCollector {
    fn into_part(self) -> (Vec<Pair>, u64) {
        let n = self.0.len() as u64;
        (self.0, n)
    }
}

impl WorkerSink for PairCounter {
    fn into_part(self) -> (Vec<Pair>, u64) {
        (Vec::new(), self.0)
    }
}

/// Runs `$body` with `$sink` bound to the worker sink type for `$mode`, and
/// merges the per-worker parts it returns into a report.
macro_rules! with_sink {
    ($mode:expr, $sink:ident => $body:expr) => {{
        let mode: $crate::geometry::MatchMode = $mode;
        match mode {
            $crate::geometry::MatchMode::Enumerate => {
                type $sink = $crate::sink::PairCollector;
                $crate::sink::merge(mode, $body)
            }
            $crate::geometry::MatchMode::CountOnly => {
                type $sink = $crate::sink::PairCounter;
                $crate::sink::merge(mode, $body)
            }
        }
    }};
}
pub(crate) use with_sink;

pub(crate) fn merge<K: WorkerSink>(mode: MatchMode, parts: Vec<K>) -> MatchReport {
    MatchReport::from_parts(mode, parts.into_iter().map(WorkerSink::into_part).collect())
}
