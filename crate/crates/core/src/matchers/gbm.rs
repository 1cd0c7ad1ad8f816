use std::ops::RangeInclusive;

use crate::exec::{even_blocks, run_workers};
use crate::geometry::{intersect_1d, Interval, MatchReport};
use crate::matchers::MatcherConfig;
use crate::sink::{with_sink, PairSink};

/// Regular 1-D mesh over the bounding interval of all regions. Cell `k`
/// covers `[start(k), start(k + 1))` and lists the update regions touching it.
#[derive(Clone, Debug)]
pub struct Grid {
    lb: f64,
    ub: f64,
    width: f64,
    cells: Vec<Vec<u32>>,
}

impl Grid {
    /// Lays out `ncells` cells over the union of both region sets and fills
    /// them with `upds`. Each worker owns a contiguous block of cells and
    /// scans every update, so no list is shared between workers.
    pub fn build(subs: &[Interval], upds: &[Interval], ncells: usize, workers: usize) -> Self {
        let mut grid = Self::layout(subs, upds, ncells.max(1));
        let blocks = even_blocks(grid.ncells(), workers.max(1));
        let filled = run_workers(workers.max(1), |w| {
            let own = blocks[w].clone();
            let mut cells = vec![Vec::new(); own.len()];
            if own.is_empty() {
                return cells;
            }
            for (u, iv) in upds.iter().enumerate() {
                let Some(range) = grid.cell_range(iv) else { continue };
                let first = (*range.start()).max(own.start);
                let last = (*range.end()).min(own.end - 1);
                for k in first..=last {
                    cells[k - own.start].push(u as u32);
                }
            }
            cells
        });
        grid.cells = filled.into_iter().flatten().collect();
        grid
    }

    fn layout(subs: &[Interval], upds: &[Interval], ncells: usize) -> Self {
        let (mut lb, mut ub) = (f64::INFINITY, f64::NEG_INFINITY);
        for iv in subs.iter().chain(upds) {
            lb = lb.min(iv.lower());
            ub = ub.max(iv.upper());
        }
        let width = (ub - lb) / ncells as f64;
        if !(width.is_finite() && width > 0.0) {
            // No regions, or every bound equal: one cell holds everything.
            return Self {
                lb: if lb.is_finite() { lb } else { 0.0 },
                ub: if ub.is_finite() { ub } else { 0.0 },
                width: 0.0,
                cells: vec![Vec::new()],
            };
        }
        Self {
            lb,
            ub,
            width,
            cells: vec![Vec::new(); ncells],
        }
    }

    pub fn ncells(&self) -> usize {
        self.cells.len()
    }

    pub fn bounds(&self) -> (f64, f64) {
        (self.lb, self.ub)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn cell(&self, k: usize) -> &[u32] {
        &self.cells[k]
    }

    /// Lower edge of cell `k`.
    #[inline]
    pub fn cell_start(&self, k: usize) -> f64 {
        if k == 0 {
            self.lb
        } else {
            self.lb + k as f64 * self.width
        }
    }

    /// The last cell whose lower edge is `<= x`.
    #[inline]
    pub fn cell_of(&self, x: f64) -> usize {
        let n = self.cells.len();
        if n == 1 {
            return 0;
        }
        let guess = ((x - self.lb) / self.width).floor();
        let mut k = if guess <= 0.0 {
            0
        } else {
            (guess as usize).min(n - 1)
        };
        // Float rounding can put the guess one cell off the edges used by
        // `cell_start`; settle on those edges so both sides agree.
        while k > 0 && x < self.cell_start(k) {
            k -= 1;
        }
        while k + 1 < n && x >= self.cell_start(k + 1) {
            k += 1;
        }
        k
    }

    /// Cells overlapped by `iv`, or `None` for an empty interval.
    pub fn cell_range(&self, iv: &Interval) -> Option<RangeInclusive<usize>> {
        if iv.is_empty() {
            return None;
        }
        let first = self.cell_of(iv.lower());
        let mut last = self.cell_of(iv.upper());
        if last > first && self.cell_start(last) >= iv.upper() {
            last -= 1;
        }
        Some(first..=last)
    }
}

/// Grid-based matching. Candidates sharing a cell are tested with the
/// overlap predicate; a per-worker bit set over update ids, cleared after
/// each subscription, suppresses pairs seen in more than one cell.
pub fn match_gbm(subs: &[Interval], upds: &[Interval], cfg: &MatcherConfig) -> MatchReport {
    let workers = cfg.workers.max(1);
    let grid = Grid::build(subs, upds, cfg.gbm_ncells, workers);
    let blocks = even_blocks(subs.len(), workers);
    with_sink!(cfg.mode, Sink => run_workers(workers, |w| {
        let mut sink = Sink::default();
        let mut seen = vec![0u64; upds.len().div_ceil(64)];
        let mut touched: Vec<u32> = Vec::new();
        for s in blocks[w].clone() {
            let si = &subs[s];
            let Some(range) = grid.cell_range(si) else { continue };
            for k in range {
                for &u in grid.cell(k) {
                    let (word, bit) = (u as usize / 64, 1u64 << (u % 64));
                    if seen[word] & bit != 0 {
                        continue;
                    }
                    seen[word] |= bit;
                    touched.push(u);
                    if intersect_1d(si, &upds[u as usize]) {
                        sink.report(s as u32, u);
                    }
                }
            }
            for u in touched.drain(..) {
                seen[u as usize / 64] = 0;
            }
        }
        sink
    }))
}
