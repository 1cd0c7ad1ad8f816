use std::io::Write;
use std::time::Instant;

use ddm_core::geometry::project;
use ddm_core::{match_dd, Algorithm, Interval, MatchMode, MatcherConfig, Region};
use serde::{Deserialize, Serialize};

use crate::cli::{check_workers, BenchArgs, Workload};
use crate::error::{CliError, CliResult};
use crate::probe::peak_rss_kb;

/// One timed configuration: every repetition's wall-clock time and the
/// match count they all agreed on.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRun {
    pub algo: Algorithm,
    pub workload: String,
    pub total: usize,
    pub dims: usize,
    pub workers: usize,
    pub durations: Vec<f64>,
    pub k: u64,
    pub peak_rss_kb: Option<u64>,
}

impl BenchRun {
    pub fn mean(&self) -> f64 {
        self.durations.iter().sum::<f64>() / self.durations.len() as f64
    }

    /// Sample standard deviation; zero for a single repetition.
    pub fn stddev(&self) -> f64 {
        let n = self.durations.len();
        if n < 2 {
            return 0.0;
        }
        let mean = self.mean();
        let ss: f64 = self.durations.iter().map(|d| (d - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    }

    pub fn row(&self, baseline: Option<f64>) -> BenchRow {
        BenchRow {
            algo: self.algo.name().to_string(),
            n: self.total,
            alpha_or_trace: self.workload.clone(),
            d: self.dims,
            p: self.workers,
            reps: self.durations.len(),
            mean_wct_seconds: self.mean(),
            stddev: self.stddev(),
            k: self.k,
            speedup_vs_p1: baseline.map(|t1| t1 / self.mean()),
            peak_rss_kb: self.peak_rss_kb,
        }
    }
}

/// CSV record written by `bench`. Column names are the header row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub algo: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub alpha_or_trace: String,
    pub d: usize,
    #[serde(rename = "P")]
    pub p: usize,
    pub reps: usize,
    pub mean_wct_seconds: f64,
    pub stddev: f64,
    #[serde(rename = "K")]
    pub k: u64,
    #[serde(rename = "speedup_vs_P1")]
    pub speedup_vs_p1: Option<f64>,
    pub peak_rss_kb: Option<u64>,
}

pub fn parse_rows<R: std::io::Read>(r: R) -> Result<Vec<BenchRow>, csv::Error> {
    csv::Reader::from_reader(r).deserialize().collect()
}

/// What one repetition runs. 1-D inputs are projected once, outside the
/// timed region.
enum Prepared<'a> {
    Flat(Vec<Interval>, Vec<Interval>),
    Regions(&'a [Region], &'a [Region]),
}

impl Prepared<'_> {
    fn run(&self, algo: Algorithm, cfg: &MatcherConfig) -> CliResult<u64> {
        Ok(match self {
            Prepared::Flat(s, u) => algo.run_1d(s, u, cfg).count,
            Prepared::Regions(s, u) => match_dd(s, u, algo, cfg)?.count,
        })
    }
}

pub fn time_run(
    workload: &Workload,
    algo: Algorithm,
    cfg: &MatcherConfig,
    reps: usize,
) -> CliResult<BenchRun> {
    if reps == 0 {
        return Err(CliError::Usage("--reps must be at least 1".into()));
    }
    cfg.validate()?;
    ddm_core::matchers::check_region_sets(&workload.subs, &workload.upds)?;
    let prepared = if workload.dims == 1 {
        Prepared::Flat(project(&workload.subs, 0), project(&workload.upds, 0))
    } else {
        Prepared::Regions(&workload.subs, &workload.upds)
    };
    let k = prepared.run(algo, cfg)?;
    let mut durations = Vec::with_capacity(reps);
    for rep in 0..reps {
        let start = Instant::now();
        let got = prepared.run(algo, cfg)?;
        durations.push(start.elapsed().as_secs_f64());
        if got != k {
            return Err(CliError::Inconsistent(format!(
                "{algo} P={}: repetition {rep} found {got} pairs, warm-up found {k}",
                cfg.workers
            )));
        }
    }
    Ok(BenchRun {
        algo,
        workload: workload.descriptor.clone(),
        total: workload.total(),
        dims: workload.dims,
        workers: cfg.workers,
        durations,
        k,
        peak_rss_kb: peak_rss_kb(),
    })
}

pub fn run_bench(args: &BenchArgs) -> CliResult<Vec<BenchRow>> {
    check_workers(&args.workers)?;
    let workload = args.workload.load()?;
    let mut rows = Vec::new();
    for algo in args.algo.algorithms() {
        let mut runs = Vec::new();
        for &workers in &args.workers {
            let cfg = MatcherConfig {
                workers,
                mode: MatchMode::from(args.mode),
                gbm_ncells: args.ncells,
                ..Default::default()
            };
            log::info!("{algo} P={workers} on {} regions", workload.total());
            runs.push(time_run(&workload, algo, &cfg, args.reps)?);
        }
        let baseline = runs.iter().find(|r| r.workers == 1).map(BenchRun::mean);
        rows.extend(runs.iter().map(|r| r.row(baseline)));
    }
    Ok(rows)
}

pub fn write_rows<W: Write>(w: W, rows: &[BenchRow]) -> CliResult<()> {
    let mut out = csv::Writer::from_writer(w);
    for row in rows {
        out.serialize(row)?;
    }
    out.flush().map_err(CliError::io("csv output"))
}

pub fn cmd_bench(args: &BenchArgs) -> CliResult<()> {
    let rows = run_bench(args)?;
    if args.out == "-" {
        write_rows(std::io::stdout().lock(), &rows)
    } else {
        let f = std::fs::File::create(&args.out).map_err(CliError::io(&args.out))?;
        write_rows(f, &rows)
    }
}
