use crate::geometry::{Interval, MatchReport};
use crate::matchers::MatcherConfig;
use crate::parallel_sbm::{build_endpoints, sort_endpoints, Sweep};
use crate::sink::with_sink;

/// Sequential sort-based matching: one sweep over the sorted endpoints,
/// reporting each region against the opposite active set when it closes.
/// The overlap predicate is never evaluated. `cfg.workers` is ignored.
pub fn match_sbm_seq(subs: &[Interval], upds: &[Interval], cfg: &MatcherConfig) -> MatchReport {
    let mut endpoints = build_endpoints(subs, upds, 1);
    sort_endpoints(&mut endpoints, 1);
    with_sink!(cfg.mode, Sink => {
        let mut sink = Sink::default();
        Sweep::with_universe(subs.len(), upds.len()).run(endpoints.as_slice(), &mut sink);
        vec![sink]
    })
}
