//! Synthetic overlap-degree workloads and vehicular trace ingestion.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::PathBuf;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Interval, Region, Role};

/// Default routing-space length.
pub const DEFAULT_SPACE_LENGTH: f64 = 1.0e6;

/// Parameters of a uniform workload: `total / 2` subscriptions and as many
/// updates, all of length `alpha * space_length / total`, placed uniformly.
#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticSpec {
    pub total: usize,
    pub alpha: f64,
    pub space_length: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn new(total: usize, alpha: f64, seed: u64) -> Self {
        Self {
            total,
            alpha,
            space_length: DEFAULT_SPACE_LENGTH,
            seed,
        }
    }

    /// Length shared by every region.
    pub fn region_length(&self) -> f64 {
        self.alpha * self.space_length / self.total as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.total < 2 || !self.total.is_multiple_of(2) {
            return Err(Error::InvalidWorkload(format!(
                "region count must be even and at least 2, got {}",
                self.total
            )));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidWorkload(format!("alpha must be > 0, got {}", self.alpha)));
        }
        if !(self.space_length > 0.0 && self.space_length.is_finite()) {
            return Err(Error::InvalidWorkload(format!(
                "space length must be > 0, got {}",
                self.space_length
            )));
        }
        let l = self.region_length();
        if l > self.space_length {
            return Err(Error::InvalidWorkload(format!(
                "region length {l} exceeds the space length {} (alpha > N)",
                self.space_length
            )));
        }
        Ok(())
    }
}

/// Deterministic placement of equal-length regions.
///
/// The generator is ChaCha8 seeded with `seed`. Each lower bound is
/// `k * step` where `k` is drawn from `0..slots` by multiply-high on a
/// 64-bit output, and `step` is a power of two at least as coarse as the
/// lowest set bit of the region length (when the space allows), so
/// `lower + length` is computed without rounding in the common case.
struct Placer {
    rng: ChaCha8Rng,
    step: f64,
    slots: u64,
}

impl Placer {
    fn new(seed: u64, length: f64, space: f64) -> Self {
        let room = space - length;
        // Finest power-of-two step that still keeps slot indices below 2^53.
        let floor = exp2(ilog2_ceil(space) - 52);
        let step = lowest_bit(length).max(floor);
        let slots = ((room / step).floor() as u64).max(1);
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            step,
            slots,
        }
    }

    fn next_lower(&mut self) -> f64 {
        let k = ((self.rng.next_u64() as u128 * self.slots as u128) >> 64) as u64;
        k as f64 * self.step
    }
}

fn exp2(e: i32) -> f64 {
    2f64.powi(e)
}

fn ilog2_ceil(x: f64) -> i32 {
    x.log2().ceil() as i32
}

/// Value of the least significant set bit in the mantissa of `x` (`x > 0`).
fn lowest_bit(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let mant = bits & ((1u64 << 52) - 1);
    let (mant, exp) = if exp == 0 { (mant, -1074) } else { (mant | (1 << 52), exp - 1075) };
    exp2(exp + mant.trailing_zeros() as i32)
}

/// Uniform 1-D workload.
pub fn gen_uniform(spec: &SyntheticSpec) -> Result<(Vec<Region>, Vec<Region>)> {
    gen_uniform_dd(spec, 1)
}

/// Uniform workload in `dims` dimensions; every dimension follows the 1-D
/// law independently.
pub fn gen_uniform_dd(spec: &SyntheticSpec, dims: usize) -> Result<(Vec<Region>, Vec<Region>)> {
    spec.validate()?;
    if dims == 0 {
        return Err(Error::InvalidWorkload("dimension count must be at least 1".into()));
    }
    let l = spec.region_length();
    let mut placer = Placer::new(spec.seed, l, spec.space_length);
    let half = (spec.total / 2) as u32;
    let mut make = |role, id| {
        let extents = (0..dims)
            .map(|_| {
                let lo = placer.next_lower();
                Interval::raw(lo, lo + l)
            })
            .collect();
        Region::new(id, role, extents)
    };
    let subs = (0..half).map(|i| make(Role::Subscription, i)).collect();
    let upds = (0..half).map(|i| make(Role::Update, i)).collect();
    Ok((subs, upds))
}

/// Sum of 1-D region lengths over the routing-space length.
pub fn measured_alpha(subs: &[Region], upds: &[Region], space_length: f64) -> Result<f64> {
    if space_length.is_nan() || space_length <= 0.0 {
        return Err(Error::InvalidWorkload(format!(
            "space length must be > 0, got {space_length}"
        )));
    }
    let total: f64 = subs
        .iter()
        .chain(upds)
        .map(|r| r.extents[0].length())
        .sum();
    Ok(total / space_length)
}

/// A position trace to turn into regions.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceSpec {
    pub path: PathBuf,
    pub region_width: f64,
    pub max_records: Option<usize>,
    /// Zero-based whitespace field holding the x coordinate.
    pub x_field: usize,
}

impl TraceSpec {
    pub fn new(path: impl Into<PathBuf>) -> Self {
        Self {
            path: path.into(),
            region_width: 100.0,
            max_records: None,
            x_field: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SkippedLine {
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TraceLoad {
    pub subs: Vec<Region>,
    pub upds: Vec<Region>,
    pub skipped: Vec<SkippedLine>,
}

/// Reads a whitespace-separated position trace. Every accepted record
/// becomes one subscription and one update region of width
/// `region_width` centered on its x coordinate. Blank lines and lines
/// starting with `#` are ignored; malformed lines are logged and skipped.
pub fn load_trace(spec: &TraceSpec) -> Result<TraceLoad> {
    if !(spec.region_width > 0.0 && spec.region_width.is_finite()) {
        return Err(Error::InvalidWorkload(format!(
            "region width must be > 0, got {}",
            spec.region_width
        )));
    }
    let io_err = |source| Error::Io {
        path: spec.path.display().to_string(),
        source,
    };
    let reader = BufReader::new(File::open(&spec.path).map_err(io_err)?);
    let half = spec.region_width / 2.0;
    let mut out = TraceLoad::default();
    for (idx, line) in reader.lines().enumerate() {
        if spec.max_records.is_some_and(|cap| out.subs.len() >= cap) {
            break;
        }
        let line = line.map_err(io_err)?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let lineno = idx + 1;
        let x = match trimmed.split_whitespace().nth(spec.x_field) {
            None => Err(format!("missing field {}", spec.x_field)),
            Some(tok) => match tok.parse::<f64>() {
                Ok(x) if x.is_finite() => Ok(x),
                Ok(x) => Err(format!("non-finite x coordinate {x}")),
                Err(e) => Err(format!("bad x coordinate `{tok}`: {e}")),
            },
        };
        match x {
            Ok(x) => {
                let id = out.subs.len() as u32;
                let iv = Interval::raw(x - half, x + half);
                out.subs.push(Region::subscription(id, vec![iv]));
                out.upds.push(Region::update(id, vec![iv]));
            }
            Err(reason) => {
                log::warn!("{}:{lineno}: skipping line: {reason}", spec.path.display());
                out.skipped.push(SkippedLine { line: lineno, reason });
            }
        }
    }
    Ok(out)
}
