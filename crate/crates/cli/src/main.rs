use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use k1lab_cli::{info, run, write_report, Manifest, RunOptions};

/// Finite p-groups, truncated group rings and K1 congruence checks.
///
/// Exit status: 0 on success, 1 when a check expected to hold on a θ-tuple
/// failed, 2 on usage or input errors.
#[derive(Parser)]
#[command(name = "k1lab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in groups.
    Catalog {
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        order: Option<usize>,
        /// Print JSON instead of a tab-separated table.
        #[arg(long)]
        json: bool,
    },
    /// Explicit Brauer induction of one irreducible of a catalog group.
    Brauer {
        /// Catalog key, e.g. Heis3 (see `k1lab catalog`).
        #[arg(long)]
        group: String,
        /// Index of the irreducible in character-table order.
        #[arg(long)]
        character: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the checks listed in a manifest and write report.csv and report.json.
    Check {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Require every declared group to be a p-group for this prime.
        #[arg(long)]
        p: Option<u64>,
        /// Precision for tasks that do not set their own.
        #[arg(long)]
        k: Option<u32>,
        /// Overrides the manifest seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(cmd: Command) -> anyhow::Result<ExitCode> {
    match cmd {
        Command::Catalog { p, order, json } => {
            let rows = info::catalog_rows(p, order);
            if json {
                println!("{}", serde_json::to_string_pretty(&rows)?);
            } else {
                print!("{}", info::render_catalog(&rows));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Brauer { group, character, out } => {
            let text = serde_json::to_string_pretty(&info::brauer(&group, character)?)? + "\n";
            match out {
                Some(path) => std::fs::write(path, text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check { manifest, out, p, k, seed, jobs } => {
            let m = Manifest::load(&manifest)?;
            let report = run(&m, RunOptions { p, k, seed, jobs })?;
            write_report(&report, &out)?;
            let bad = report.unexpected();
            eprintln!("{} rows, {} unexpected; reports in {}", report.rows.len(), bad, out.display());
            Ok(if bad == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
