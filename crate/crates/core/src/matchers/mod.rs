//! Region matchers sharing one result contract.
//!
//! The 1-D entry points take interval slices indexed by region id. The
//! d-dimensional wrapper [`match_dd`] validates full region sets, runs a 1-D
//! matcher on every dimension and intersects the per-dimension pair sets.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{project, validate_regions, MatchMode, MatchReport, Pair, Region, Role};

mod bfm;
mod dynamic;
mod gbm;
mod itm;
mod sbm;

pub use bfm::match_bfm;
pub use dynamic::DynSession;
pub use gbm::{match_gbm, Grid};
pub use itm::{match_itm, resolve_tree_side};
pub use sbm::match_sbm_seq;

pub use crate::parallel_sbm::match_sbm_par;

/// Default grid resolution for GBM.
pub const DEFAULT_GBM_CELLS: usize = 3000;

/// Which region set ITM builds its interval tree over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TreeSide {
    /// The strictly smaller set; subscriptions on a tie.
    #[default]
    Auto,
    Subscriptions,
    Updates,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatcherConfig {
    pub workers: usize,
    pub mode: MatchMode,
    pub gbm_ncells: usize,
    pub itm_tree_side: TreeSide,
}

impl Default for MatcherConfig {
    fn default() -> Self {
        Self {
            workers: 1,
            mode: MatchMode::Enumerate,
            gbm_ncells: DEFAULT_GBM_CELLS,
            itm_tree_side: TreeSide::Auto,
        }
    }
}

impl MatcherConfig {
    pub fn with_workers(workers: usize) -> Self {
        Self {
            workers,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.workers == 0 {
            return Err(Error::InvalidConfig("workers must be at least 1".into()));
        }
        if self.gbm_ncells == 0 {
            return Err(Error::InvalidConfig("gbm_ncells must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Bfm,
    Gbm,
    Itm,
    SbmSeq,
    SbmPar,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Bfm,
        Algorithm::Gbm,
        Algorithm::Itm,
        Algorithm::SbmSeq,
        Algorithm::SbmPar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bfm => "bfm",
            Algorithm::Gbm => "gbm",
            Algorithm::Itm => "itm",
            Algorithm::SbmSeq => "sbm-seq",
            Algorithm::SbmPar => "sbm-par",
        }
    }

    /// Runs this algorithm on 1-D intervals indexed by region id.
    pub fn run_1d(
        self,
        subs: &[crate::Interval],
        upds: &[crate::Interval],
        cfg: &MatcherConfig,
    ) -> MatchReport {
        match self {
            Algorithm::Bfm => match_bfm(subs, upds, cfg),
            Algorithm::Gbm => match_gbm(subs, upds, cfg),
            Algorithm::Itm => match_itm(subs, upds, cfg),
            Algorithm::SbmSeq => match_sbm_seq(subs, upds, cfg),
            Algorithm::SbmPar => match_sbm_par(subs, upds, cfg),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown algorithm `{s}`")))
    }
}

/// Checks that `subs` and `upds` are valid region sets of the expected roles
/// and a common dimensionality, which is returned (`None` when both are empty).
pub fn check_region_sets(subs: &[Region], upds: &[Region]) -> Result<Option<usize>> {
    if let Some(r) = subs.iter().find(|r| r.role != Role::Subscription) {
        return Err(Error::InvalidRegions(format!(
            "{} region {} in the subscription set",
            r.role, r.id
        )));
    }
    if let Some(r) = upds.iter().find(|r| r.role != Role::Update) {
        return Err(Error::InvalidRegions(format!(
            "{} region {} in the update set",
            r.role, r.id
        )));
    }
    let all: Vec<Region> = subs.iter().chain(upds).cloned().collect();
    if let Err(problems) = validate_regions(&all) {
        if let Some(p) = problems.iter().find_map(|p| match p.problem {
            crate::geometry::RegionProblem::DimensionMismatch { expected, found } => {
                Some(Error::DimensionMismatch { expected, found })
            }
            _ => None,
        }) {
            return Err(p);
        }
        let msg: Vec<String> = problems.iter().map(ToString::to_string).collect();
        return Err(Error::InvalidRegions(msg.join("; ")));
    }
    Ok(all.first().map(Region::dims))
}

/// Matches d-dimensional regions by running `algo` on every dimension and
/// intersecting the per-dimension pair sets.
pub fn match_dd(
    subs: &[Region],
    upds: &[Region],
    algo: Algorithm,
    cfg: &MatcherConfig,
) -> Result<MatchReport> {
    cfg.validate()?;
    let Some(dims) = check_region_sets(subs, upds)? else {
        return Ok(MatchReport::empty(cfg.mode));
    };
    if dims == 1 {
        return Ok(algo.run_1d(&project(subs, 0), &project(upds, 0), cfg));
    }

    let per_dim = MatcherConfig {
        mode: MatchMode::Enumerate,
        ..cfg.clone()
    };
    let mut survivors: Option<HashSet<Pair>> = None;
    for dim in 0..dims {
        let report = algo.run_1d(&project(subs, dim), &project(upds, dim), &per_dim);
        survivors = Some(match survivors {
            None => report.pairs.into_iter().collect(),
            Some(mut acc) => {
                let here: HashSet<Pair> = report.pairs.into_iter().collect();
                acc.retain(|p| here.contains(p));
                acc
            }
        });
        if survivors.as_ref().is_some_and(HashSet::is_empty) {
            break;
        }
    }
    let pairs: Vec<Pair> = survivors.unwrap_or_default().into_iter().collect();
    Ok(match cfg.mode {
        MatchMode::Enumerate => MatchReport::from_pairs(pairs),
        MatchMode::CountOnly => MatchReport::from_count(pairs.len() as u64),
    })
}
