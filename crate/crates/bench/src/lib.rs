//! Command-line harness for the `ddm-core` matchers: timing runs with CSV
//! output, cross-checks against brute force, and workload generation.

pub mod bench;
pub mod cli;
pub mod error;
pub mod probe;
pub mod region_file;
pub mod verify;

pub use cli::{Cli, Command};
pub use error::{CliError, CliResult};

/// Writes the workload described by `args` as a region file.
pub fn cmd_gen(args: &cli::GenArgs) -> CliResult<()> {
    let w = args.workload.load()?;
    if args.out == "-" {
        region_file::write_regions(std::io::stdout().lock(), &w.subs, &w.upds)
            .map_err(CliError::io("standard output"))
    } else {
        region_file::save_regions(std::path::Path::new(&args.out), &w.subs, &w.upds)
    }
}
