use std::process::ExitCode;

use clap::Parser;
use ddm_bench::{bench, cmd_gen, verify, Cli, CliError, Command};

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Bench(args) => bench::cmd_bench(&args).map(|()| true),
        Command::Gen(args) => cmd_gen(&args).map(|()| true),
        Command::Verify(args) => {
            let outcome = verify::cmd_verify(&args, &mut std::io::stdout().lock())?;
            eprintln!(
                "{} passed, {} failed, reference K={}",
                outcome.passed, outcome.failed, outcome.k
            );
            Ok(outcome.all_passed())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
