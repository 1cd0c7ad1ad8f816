use crate::exec::{even_blocks, run_workers};
use crate::geometry::{intersect_1d, Interval, MatchReport};
use crate::matchers::MatcherConfig;
use crate::sink::{with_sink, PairSink};

/// Brute-force matching: every subscription is tested against every update.
/// Subscriptions are split into one contiguous block per worker.
pub fn match_bfm(subs: &[Interval], upds: &[Interval], cfg: &MatcherConfig) -> MatchReport {
    let workers = cfg.workers.max(1);
    let blocks = even_blocks(subs.len(), workers);
    with_sink!(cfg.mode, Sink => run_workers(workers, |w| {
        let mut sink = Sink::default();
        for s in blocks[w].clone() {
            let si = &subs[s];
            for (u, ui) in upds.iter().enumerate() {
                if intersect_1d(si, ui) {
                    sink.report(s as u32, u as u32);
                }
            }
        }
        sink
    }))
}
