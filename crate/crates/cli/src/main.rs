use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use poset_rescue_cli::{execute, parse_game_file, render_report, CliError, Command, Flags, Format};

/// Exact solvers for search-and-rescue games on posets.
#[derive(Debug, Parser)]
#[command(name = "poset-rescue", version)]
struct Args {
    command: Command,
    /// Game file (JSON). Optional for `conjecture`.
    file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 100_000)]
    rounds: u64,
    /// Largest instance the exhaustive oracle will take.
    #[arg(long, default_value_t = 10)]
    max_elements: usize,
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 3)]
    min_leaves: usize,
    #[arg(long, default_value_t = 4)]
    max_leaves: usize,
}

fn run(args: &Args) -> Result<String, CliError> {
    let parsed = match &args.file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            })?;
            Some(parse_game_file(&text)?)
        }
        None => None,
    };
    let flags = Flags {
        seed: args.seed,
        rounds: args.rounds,
        max_elements: args.max_elements,
        trials: args.trials,
        min_leaves: args.min_leaves,
        max_leaves: args.max_leaves,
    };
    let report = execute(args.command, parsed.as_ref(), &flags)?;
    Ok(render_report(&report, args.format))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let start = Instant::now();
    let result = run(&args);
    log::info!(
        "{:?} finished in {:.3} ms",
        args.command,
        start.elapsed().as_secs_f64() * 1e3
    );
    match result {
        Ok(text) => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
