use std::io::Write;

use ddm_core::{match_dd, Algorithm, MatchReport, MatcherConfig, Pair, Region};

use crate::cli::{check_workers, VerifyArgs};
use crate::error::{CliError, CliResult};

type MatchFn = Box<dyn Fn(&[Region], &[Region]) -> ddm_core::Result<MatchReport>>;

/// A matcher under test, compared against brute force.
pub struct Candidate {
    pub name: String,
    pub run: MatchFn,
}

impl Candidate {
    pub fn new(name: impl Into<String>, run: impl Fn(&[Region], &[Region]) -> ddm_core::Result<MatchReport> + 'static) -> Self {
        Self { name: name.into(), run: Box::new(run) }
    }

    fn algorithm(algo: Algorithm, cfg: MatcherConfig) -> Self {
        let name = if algo == Algorithm::SbmPar {
            format!("{algo} P={}", cfg.workers)
        } else {
            algo.name().to_string()
        };
        Self::new(name, move |s, u| match_dd(s, u, algo, &cfg))
    }
}

/// Every library matcher, with sbm-par once per worker count.
pub fn default_candidates(workers: &[usize], ncells: usize) -> Vec<Candidate> {
    let cfg = |workers| MatcherConfig { workers, gbm_ncells: ncells, ..Default::default() };
    let mut out = vec![
        Candidate::algorithm(Algorithm::Bfm, cfg(1)),
        Candidate::algorithm(Algorithm::Gbm, cfg(1)),
        Candidate::algorithm(Algorithm::Itm, cfg(1)),
        Candidate::algorithm(Algorithm::SbmSeq, cfg(1)),
    ];
    out.extend(workers.iter().map(|&p| Candidate::algorithm(Algorithm::SbmPar, cfg(p))));
    out
}

/// Nested-loop reference over every pair of regions.
pub fn reference_pairs(subs: &[Region], upds: &[Region]) -> ddm_core::Result<Vec<Pair>> {
    ddm_core::matchers::check_region_sets(subs, upds)?;
    let mut pairs = Vec::new();
    for s in subs {
        for u in upds {
            if ddm_core::intersect_dd(s, u)? {
                pairs.push((s.id, u.id));
            }
        }
    }
    Ok(pairs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyOutcome {
    pub passed: usize,
    pub failed: usize,
    /// Reference match count.
    pub k: u64,
}

impl VerifyOutcome {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

/// First pair in which two canonical reports differ, and which side has it.
fn first_difference(expected: &[Pair], got: &[Pair]) -> Option<(Pair, bool)> {
    let (mut i, mut j) = (0, 0);
    while i < expected.len() || j < got.len() {
        match (expected.get(i), got.get(j)) {
            (Some(a), Some(b)) if a == b => {
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => return Some((*a, true)),
            (Some(a), None) => return Some((*a, true)),
            (_, Some(b)) => return Some((*b, false)),
            (None, None) => unreachable!(),
        }
    }
    None
}

pub fn verify_with<W: Write>(
    subs: &[Region],
    upds: &[Region],
    candidates: &[Candidate],
    out: &mut W,
) -> CliResult<VerifyOutcome> {
    let expected = MatchReport::from_pairs(reference_pairs(subs, upds)?);
    let mut outcome = VerifyOutcome { passed: 0, failed: 0, k: expected.count };
    let mut lines = Vec::new();
    for c in candidates {
        let got = (c.run)(subs, upds)?;
        let canonical = MatchReport::from_pairs(got.pairs);
        match first_difference(&expected.pairs, &canonical.pairs) {
            None => {
                outcome.passed += 1;
                lines.push(format!("PASS {} K={}", c.name, canonical.count));
            }
            Some(((s, u), missing)) => {
                outcome.failed += 1;
                let what = if missing { "missing" } else { "spurious" };
                lines.push(format!(
                    "FAIL {} K={} expected K={}: {what} pair (S{s}, U{u})",
                    c.name, canonical.count, expected.count
                ));
            }
        }
    }
    for l in lines {
        writeln!(out, "{l}").map_err(CliError::io("verify output"))?;
    }
    Ok(outcome)
}

pub fn cmd_verify<W: Write>(args: &VerifyArgs, out: &mut W) -> CliResult<VerifyOutcome> {
    check_workers(&args.workers)?;
    let w = args.workload.load()?;
    verify_with(&w.subs, &w.upds, &default_candidates(&args.workers, args.ncells), out)
}
