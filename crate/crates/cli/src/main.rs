//! `cmab`: batch front-end for the Monge-Ampère ball laboratory. The
//! command to run lives in the config file; the flags only locate the
//! config, redirect output, and override the seed / thread count. Exit
//! codes: 0 PASS, 1 FAIL, 2 INCONCLUSIVE, 3 usage or config error.

// validation guards use `!(x > 0.0)` on purpose so NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod presets;
mod runner;

use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cmab", version, about = "complex Monge-Ampère ball laboratory")]
struct Cli {
    /// Sectioned key = value configuration file (see CONFIG.md).
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSV artifacts (overrides the config).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Master seed (overrides the config).
    #[arg(long)]
    seed: Option<u64>,
    /// Worker thread count; results are invariant to it.
    #[arg(long)]
    threads: Option<usize>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
        {
            eprintln!("cannot configure thread pool: {e}");
            return ExitCode::from(runner::EXIT_USAGE as u8);
        }
    }
    let text = match runner::read_config_text(&cli.config) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", cli.config.display());
            return ExitCode::from(runner::EXIT_USAGE as u8);
        }
    };
    let mut cfg = match config::parse_config(&text) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(runner::EXIT_USAGE as u8);
        }
    };
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = cli.out {
        cfg.out = Some(out.display().to_string());
    }
    ExitCode::from(runner::run(&cfg, &text) as u8)
}
