use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ddm_core::workload::{gen_uniform_dd, load_trace, SyntheticSpec, TraceSpec, DEFAULT_SPACE_LENGTH};
use ddm_core::{Algorithm, MatchMode, Region};

use crate::error::{CliError, CliResult};
use crate::region_file::load_regions;

#[derive(Debug, Parser)]
#[command(name = "ddm-bench", version, about = "Region matching benchmarks and cross-checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Time matchers and print one CSV row per algorithm and worker count.
    Bench(BenchArgs),
    /// Run every matcher and compare the pair sets against brute force.
    Verify(VerifyArgs),
    /// Write a synthetic workload as a region file.
    Gen(GenArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum AlgoChoice {
    Bfm,
    Gbm,
    Itm,
    SbmSeq,
    SbmPar,
    All,
}

impl AlgoChoice {
    pub fn algorithms(self) -> Vec<Algorithm> {
        match self {
            AlgoChoice::Bfm => vec![Algorithm::Bfm],
            AlgoChoice::Gbm => vec![Algorithm::Gbm],
            AlgoChoice::Itm => vec![Algorithm::Itm],
            AlgoChoice::SbmSeq => vec![Algorithm::SbmSeq],
            AlgoChoice::SbmPar => vec![Algorithm::SbmPar],
            AlgoChoice::All => Algorithm::ALL.to_vec(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeChoice {
    Count,
    Enumerate,
}

impl From<ModeChoice> for MatchMode {
    fn from(m: ModeChoice) -> Self {
        match m {
            ModeChoice::Count => MatchMode::CountOnly,
            ModeChoice::Enumerate => MatchMode::Enumerate,
        }
    }
}

/// Where the regions come from: a region file, a position trace, or the
/// uniform generator (the default).
#[derive(Clone, Debug, Args)]
pub struct WorkloadArgs {
    /// Total number of regions, half subscriptions and half updates.
    #[arg(long = "N", default_value_t = 10_000)]
    pub n: usize,
    /// Overlapping degree.
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Routing-space length.
    #[arg(long = "L", default_value_t = DEFAULT_SPACE_LENGTH)]
    pub length: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Dimensions of synthetic regions.
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    /// Position trace; one subscription and one update per record.
    #[arg(long, value_name = "PATH", conflicts_with = "regions")]
    pub trace: Option<PathBuf>,
    /// Region width for trace records.
    #[arg(long, default_value_t = 100.0)]
    pub width: f64,
    /// Stop reading the trace after this many records.
    #[arg(long)]
    pub max_records: Option<usize>,
    /// Zero-based field holding the x coordinate in trace records.
    #[arg(long, default_value_t = 2)]
    pub x_field: usize,
    /// Region file written by `gen`.
    #[arg(long, value_name = "PATH")]
    pub regions: Option<PathBuf>,
}

impl Default for WorkloadArgs {
    fn default() -> Self {
        Self {
            n: 10_000,
            alpha: 1.0,
            length: DEFAULT_SPACE_LENGTH,
            seed: 1,
            d: 1,
            trace: None,
            width: 100.0,
            max_records: None,
            x_field: 2,
            regions: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Workload {
    pub subs: Vec<Region>,
    pub upds: Vec<Region>,
    /// The alpha value, or the source file name.
    pub descriptor: String,
    pub dims: usize,
}

impl Workload {
    pub fn total(&self) -> usize {
        self.subs.len() + self.upds.len()
    }
}

impl WorkloadArgs {
    pub fn synthetic_spec(&self) -> SyntheticSpec {
        SyntheticSpec {
            total: self.n,
            alpha: self.alpha,
            space_length: self.length,
            seed: self.seed,
        }
    }

    pub fn load(&self) -> CliResult<Workload> {
        let file_name = |p: &PathBuf| {
            p.file_name()
                .map_or_else(|| p.display().to_string(), |f| f.to_string_lossy().into_owned())
        };
        if let Some(path) = &self.regions {
            let (subs, upds) = load_regions(path)?;
            let dims = subs.iter().chain(&upds).next().map_or(1, Region::dims);
            return Ok(Workload { subs, upds, descriptor: file_name(path), dims });
        }
        if let Some(path) = &self.trace {
            let spec = TraceSpec {
                path: path.clone(),
                region_width: self.width,
                max_records: self.max_records,
                x_field: self.x_field,
            };
            let load = load_trace(&spec)?;
            if !load.skipped.is_empty() {
                log::warn!("{}: skipped {} malformed line(s)", path.display(), load.skipped.len());
            }
            return Ok(Workload {
                subs: load.subs,
                upds: load.upds,
                descriptor: file_name(path),
                dims: 1,
            });
        }
        let (subs, upds) = gen_uniform_dd(&self.synthetic_spec(), self.d)?;
        Ok(Workload { subs, upds, descriptor: self.alpha.to_string(), dims: self.d })
    }
}

#[derive(Clone, Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = AlgoChoice::All)]
    pub algo: AlgoChoice,
    #[command(flatten)]
    pub workload: WorkloadArgs,
    /// Grid cells for gbm.
    #[arg(long, default_value_t = ddm_core::matchers::DEFAULT_GBM_CELLS)]
    pub ncells: usize,
    /// Worker counts, comma separated.
    #[arg(long = "P", value_delimiter = ',', default_value = "1")]
    pub workers: Vec<usize>,
    /// Timed repetitions per row, after one untimed warm-up.
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(long, value_enum, default_value_t = ModeChoice::Count)]
    pub mode: ModeChoice,
    /// CSV destination, `-` for standard output.
    #[arg(long, default_value = "-")]
    pub out: String,
}

#[derive(Clone, Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub workload: WorkloadArgs,
    #[arg(long, default_value_t = ddm_core::matchers::DEFAULT_GBM_CELLS)]
    pub ncells: usize,
    /// Worker counts to try for sbm-par.
    #[arg(long = "P", value_delimiter = ',', default_value = "1,2,4")]
    pub workers: Vec<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub workload: WorkloadArgs,
    /// Destination file, `-` for standard output.
    #[arg(long, default_value = "-")]
    pub out: String,
}

pub(crate) fn check_workers(workers: &[usize]) -> CliResult<()> {
    if workers.is_empty() || workers.contains(&0) {
        return Err(CliError::Usage("--P needs one or more worker counts >= 1".into()));
    }
    Ok(())
}
