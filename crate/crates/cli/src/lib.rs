//! Library side of the `lolab` binary: argument definitions, dispatch and
//! exit codes.

pub mod commands;
pub mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lolab_core::parallel::with_worker_pool;
use lolab_core::{Caps, Engine};

use commands::{Ctx, Format, Rendered};

pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_CAP: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "lolab", version, about)]
pub struct Cli {
    /// Seed for sampled campaigns and searches.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the main output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest n for full-law enumeration.
    #[arg(long, global = true, default_value_t = 24)]
    pub cap_full: u32,
    /// Largest n for single-atom queries.
    #[arg(long, global = true, default_value_t = 40)]
    pub cap_mitm: u32,
    /// Weight grid denominator for sampled configurations.
    #[arg(long, global = true)]
    pub grid_denominator: Option<u32>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bound on P(S_n = x) for a target or squared norm.
    Bound(commands::BoundArgs),
    /// Full law of the weighted sum.
    Dist(commands::DistArgs),
    /// Probability of a single point.
    Atom(commands::AtomArgs),
    /// Seeded verification campaign; exits 1 on any violation.
    Verify(commands::VerifyArgs),
    /// Annealing search for counterexamples to the conjectured bounds.
    Search(commands::SearchArgs),
    /// Set family of a scalar target with its antichain checks.
    Antichain(commands::AntichainArgs),
    /// Configuration attaining the bound, with an equality check.
    Extremal(commands::ExtremalArgs),
}

pub fn run(cli: &Cli) -> anyhow::Result<Rendered> {
    let ctx = Ctx {
        engine: Engine::new(Caps::new(cli.cap_full, cli.cap_mitm)?),
        seed: cli.seed,
        format: cli.format,
        grid_denominator: cli.grid_denominator,
    };
    match &cli.command {
        Command::Bound(a) => commands::bound(&ctx, a),
        Command::Dist(a) => commands::dist(&ctx, a),
        Command::Atom(a) => commands::atom(&ctx, a),
        Command::Verify(a) => commands::verify(&ctx, a),
        Command::Search(a) => commands::search(&ctx, a),
        Command::Antichain(a) => commands::antichain(&ctx, a),
        Command::Extremal(a) => commands::extremal(&ctx, a),
    }
}

fn emit(cli: &Cli, rendered: &Rendered) -> anyhow::Result<()> {
    let mut stdout = std::io::stdout().lock();
    match &cli.out {
        Some(path) => std::fs::write(path, &rendered.body)?,
        None if rendered.summary.is_none() => stdout.write_all(rendered.body.as_bytes())?,
        None => {}
    }
    if let Some(summary) = &rendered.summary {
        writeln!(stdout, "{summary}")?;
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    let capped = err.chain().any(|e| {
        matches!(
            e.downcast_ref::<lolab_core::Error>(),
            Some(lolab_core::Error::CapExceeded { .. })
        )
    });
    if capped {
        EXIT_CAP
    } else {
        EXIT_USAGE
    }
}

pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    let result = with_worker_pool(|| run(&cli)).and_then(|r| emit(&cli, &r).map(|()| r));
    match result {
        Ok(r) if r.violation => ExitCode::from(EXIT_VIOLATION),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
