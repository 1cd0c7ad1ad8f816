//! Region matching for data distribution management.
//!
//! Given subscription and update regions (axis-parallel d-rectangles built
//! from half-open intervals), report every overlapping
//! `(subscription, update)` pair exactly once. Five matchers share one
//! result type:
//!
//! * brute force ([`matchers::match_bfm`]),
//! * grid based ([`matchers::match_gbm`]),
//! * interval tree ([`matchers::match_itm`]),
//! * sequential sort based ([`matchers::match_sbm_seq`]),
//! * parallel sort based ([`parallel_sbm::match_sbm_par`]).
//!
//! [`matchers::match_dd`] extends any of them to d dimensions.
//!
//! Parallel work runs on rayon when the default `parallel` feature is on;
//! otherwise workers run in sequence and produce the same reports.

pub mod error;
pub mod exec;
pub mod geometry;
pub mod interval_tree;
pub mod matchers;
pub mod parallel_sbm;
pub mod sink;
pub mod workload;

pub use error::{Error, Result};
pub use geometry::{
    intersect_1d, intersect_dd, validate_regions, Interval, MatchMode, MatchReport, Pair, Region,
    Role,
};
pub use interval_tree::IntervalTree;
pub use matchers::{match_dd, Algorithm, DynSession, MatcherConfig, TreeSide};
