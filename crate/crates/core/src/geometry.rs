//! Intervals, regions and the overlap predicates shared by every matcher.

use std::fmt;

use crate::error::{Error, Result};

/// Half-open range `[lower, upper)` on one dimension.
///
/// `lower == upper` is a legal, empty interval that overlaps nothing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lower: f64,
    upper: f64,
}

impl Interval {
    /// Builds a validated interval. Both bounds must be finite and
    /// `lower <= upper`.
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        let iv = Self::raw(lower, upper);
        if iv.is_valid() {
            Ok(iv)
        } else {
            Err(Error::InvalidInterval { lower, upper })
        }
    }

    /// Builds an interval without validating it. Loaders use this and then
    /// report every problem at once through [`validate_regions`].
    pub fn raw(lower: f64, upper: f64) -> Self {
        // `+ 0.0` folds -0.0 into 0.0 so the endpoint sort never separates
        // two bounds that compare equal.
        Self {
            lower: lower + 0.0,
            upper: upper + 0.0,
        }
    }

    #[inline]
    pub fn lower(&self) -> f64 {
        self.lower
    }

    #[inline]
    pub fn upper(&self) -> f64 {
        self.upper
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.upper - self.lower
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.lower >= self.upper
    }

    pub fn is_valid(&self) -> bool {
        self.lower.is_finite() && self.upper.is_finite() && self.lower <= self.upper
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {})", self.lower, self.upper)
    }
}

#[cfg(test)]
thread_local! {
    pub(crate) static PREDICATE_CALLS: std::cell::Cell<u64> = const { std::cell::Cell::new(0) };
}

/// True iff the half-open intervals share at least one point.
#[inline]
pub fn intersect_1d(x: &Interval, y: &Interval) -> bool {
    #[cfg(test)]
    PREDICATE_CALLS.with(|c| c.set(c.get() + 1));
    x.lower.max(y.lower) < x.upper.min(y.upper)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Subscription,
    Update,
}

impl Role {
    pub fn opposite(self) -> Self {
        match self {
            Role::Subscription => Role::Update,
            Role::Update => Role::Subscription,
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Subscription => "subscription",
            Role::Update => "update",
        })
    }
}

/// An identified d-rectangle. Ids are dense within a role.
#[derive(Clone, Debug, PartialEq)]
pub struct Region {
    pub id: u32,
    pub role: Role,
    pub extents: Vec<Interval>,
}

impl Region {
    pub fn new(id: u32, role: Role, extents: Vec<Interval>) -> Self {
        Self { id, role, extents }
    }

    pub fn subscription(id: u32, extents: Vec<Interval>) -> Self {
        Self::new(id, Role::Subscription, extents)
    }

    pub fn update(id: u32, extents: Vec<Interval>) -> Self {
        Self::new(id, Role::Update, extents)
    }

    pub fn dims(&self) -> usize {
        self.extents.len()
    }
}

/// True iff the projections of `a` and `b` overlap on every dimension.
pub fn intersect_dd(a: &Region, b: &Region) -> Result<bool> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch {
            expected: a.dims(),
            found: b.dims(),
        });
    }
    Ok(a
        .extents
        .iter()
        .zip(&b.extents)
        .all(|(x, y)| intersect_1d(x, y)))
}

#[derive(Clone, Debug, PartialEq)]
pub enum RegionProblem {
    NoExtents,
    NonFiniteBound { dim: usize },
    InvertedBounds { dim: usize, lower: f64, upper: f64 },
    DimensionMismatch { expected: usize, found: usize },
    DuplicateId,
    IdOutOfRange { count: usize },
}

impl fmt::Display for RegionProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionProblem::NoExtents => write!(f, "region has no extents"),
            RegionProblem::NonFiniteBound { dim } => {
                write!(f, "non-finite bound on dimension {dim}")
            }
            RegionProblem::InvertedBounds { dim, lower, upper } => {
                write!(f, "lower {lower} > upper {upper} on dimension {dim}")
            }
            RegionProblem::DimensionMismatch { expected, found } => {
                write!(f, "{found} dimensions, expected {expected}")
            }
            RegionProblem::DuplicateId => write!(f, "duplicate id within its role"),
            RegionProblem::IdOutOfRange { count } => {
                write!(f, "id is not in 0..{count} (ids must be dense)")
            }
        }
    }
}

/// One invariant violation, located by position in the input sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct RegionViolation {
    pub index: usize,
    pub role: Role,
    pub id: u32,
    pub problem: RegionProblem,
}

impl fmt::Display for RegionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "region #{} ({} {}): {}",
            self.index, self.role, self.id, self.problem
        )
    }
}

/// Reports every violated region invariant. Dimensionality is checked
/// against the first region; ids must form `0..count` within each role.
pub fn validate_regions(regions: &[Region]) -> std::result::Result<(), Vec<RegionViolation>> {
    let mut out = Vec::new();
    let dims = regions.first().map(Region::dims).unwrap_or(0);
    let count_of = |role| regions.iter().filter(|r| r.role == role).count();
    let n_sub = count_of(Role::Subscription);
    let n_upd = count_of(Role::Update);
    let mut seen_sub = vec![false; n_sub];
    let mut seen_upd = vec![false; n_upd];

    for (index, r) in regions.iter().enumerate() {
        let mut push = |problem| {
            out.push(RegionViolation {
                index,
                role: r.role,
                id: r.id,
                problem,
            })
        };
        if r.extents.is_empty() {
            push(RegionProblem::NoExtents);
        } else if r.dims() != dims {
            push(RegionProblem::DimensionMismatch {
                expected: dims,
                found: r.dims(),
            });
        }
        for (dim, iv) in r.extents.iter().enumerate() {
            if !iv.lower.is_finite() || !iv.upper.is_finite() {
                push(RegionProblem::NonFiniteBound { dim });
            } else if iv.lower > iv.upper {
                push(RegionProblem::InvertedBounds {
                    dim,
                    lower: iv.lower,
                    upper: iv.upper,
                });
            }
        }
        let (seen, count) = match r.role {
            Role::Subscription => (&mut seen_sub, n_sub),
            Role::Update => (&mut seen_upd, n_upd),
        };
        match seen.get_mut(r.id as usize) {
            None => push(RegionProblem::IdOutOfRange { count }),
            Some(flag) if *flag => push(RegionProblem::DuplicateId),
            Some(flag) => *flag = true,
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// Whether a matcher lists the overlapping pairs or only counts them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum MatchMode {
    #[default]
    Enumerate,
    CountOnly,
}

/// A `(subscription id, update id)` overlap.
pub type Pair = (u32, u32);

/// Result of one matching run.
///
/// In enumerate mode `pairs` is sorted and duplicate free, and
/// `count == pairs.len()`. In count-only mode `pairs` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchReport {
    pub mode: MatchMode,
    pub pairs: Vec<Pair>,
    pub count: u64,
}

impl MatchReport {
    pub fn empty(mode: MatchMode) -> Self {
        Self {
            mode,
            pairs: Vec::new(),
            count: 0,
        }
    }

    /// Canonicalizes `pairs` (sort + dedup) into an enumerate-mode report.
    pub fn from_pairs(mut pairs: Vec<Pair>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        Self {
            mode: MatchMode::Enumerate,
            count: pairs.len() as u64,
            pairs,
        }
    }

    pub fn from_count(count: u64) -> Self {
        Self {
            mode: MatchMode::CountOnly,
            pairs: Vec::new(),
            count,
        }
    }

    /// Merges per-worker results produced under `mode`.
    pub(crate) fn from_parts(mode: MatchMode, parts: Vec<(Vec<Pair>, u64)>) -> Self {
        match mode {
            MatchMode::Enumerate => {
                Self::from_pairs(parts.into_iter().flat_map(|(p, _)| p).collect())
            }
            MatchMode::CountOnly => Self::from_count(parts.iter().map(|(_, c)| c).sum()),
        }
    }
}

/// Collects the dimension-`dim` projection of `regions`, indexed by id.
///
/// Regions must already be valid (dense ids, at least `dim + 1` extents).
pub fn project(regions: &[Region], dim: usize) -> Vec<Interval> {
    let mut out = vec![Interval::raw(0.0, 0.0); regions.len()];
    for r in regions {
        out[r.id as usize] = r.extents[dim];
    }
    out
}
