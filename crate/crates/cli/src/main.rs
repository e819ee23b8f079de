use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand, ValueEnum};

use advknow_cli::{run, Command, Format, ProblemSource, RunConfig};
use advknow_core::complexity::SearchBudget;
use advknow_core::engine::verify::Fault;
use advknow_core::BitString;

#[derive(Parser, Debug)]
#[command(name = "advknow", version, about = "Oracle algorithms, advanced knowledge and query counts")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Run the family's algorithm and read A.
    Simulate,
    /// Rebuild the labelled states of the two-drawer Grover run.
    Verify,
    /// Enumerate splits and advanced-knowledge instances.
    Advknow,
    /// Predicted query counts against k(n) and the classical baseline.
    Complexity,
    /// Everything, over all built-in problems.
    Report,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FormatArg {
    Text,
    Delim,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FaultArg {
    IdentityDiffusion,
    MissingHadamard,
}

#[derive(Args, Debug)]
struct Common {
    /// grover, dj or simon (with --n), a family:n selector, or a problem file.
    #[arg(long, global = true)]
    problem: Option<String>,
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Bob's setting; every setting when omitted.
    #[arg(long = "bc", global = true)]
    b_c: Option<BitString>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: FormatArg,
    /// Node limit for the decision-tree search.
    #[arg(long, global = true, default_value_t = SearchBudget::default().max_nodes as u64,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget_nodes: u64,
    /// Monte-Carlo trials per setting.
    #[arg(long, global = true, default_value_t = 2000,
          value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Directory for the delimited tables.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Grover iterations for simulate.
    #[arg(long, global = true)]
    iterations: Option<usize>,
    #[arg(long, global = true, default_value_t = 1000)]
    shots: usize,
    /// Print every classical history in simulate.
    #[arg(long, global = true)]
    histories: bool,
    /// Verify with B's right cell at t0 and A's left bit at t2.
    #[arg(long, global = true)]
    mirrored: bool,
    #[arg(long, global = true, hide = true, value_enum)]
    inject_fault: Option<FaultArg>,
}

fn config(cli: Cli) -> Result<RunConfig> {
    let c = cli.common;
    let command = match cli.command {
        Cmd::Simulate => Command::Simulate,
        Cmd::Verify => Command::Verify,
        Cmd::Advknow => Command::Advknow,
        Cmd::Complexity => Command::Complexity,
        Cmd::Report => Command::Report,
    };
    let problem = c.problem.as_deref().map(|p| ProblemSource::parse(p, c.n)).transpose()?;
    Ok(RunConfig {
        problem,
        b_c: c.b_c,
        seed: c.seed,
        format: match c.format {
            FormatArg::Text => Format::Text,
            FormatArg::Delim => Format::Delim,
        },
        budget: SearchBudget {
            max_nodes: c.budget_nodes as usize,
            ..SearchBudget::default()
        },
        trials: c.trials as usize,
        out: c.out,
        iterations: c.iterations,
        shots: c.shots,
        histories: c.histories,
        mirrored: c.mirrored,
        fault: c.inject_fault.map(|f| match f {
            FaultArg::IdentityDiffusion => Fault::IdentityDiffusion,
            FaultArg::MissingHadamard => Fault::MissingHadamard,
        }),
        ..RunConfig::new(command)
    })
}

fn main() -> ExitCode {
    let result = config(Cli::parse()).and_then(|c| Ok((run(&c)?, c.format)));
    match result {
        Ok((outcome, format)) => {
            print!("{}", outcome.render(format));
            for f in &outcome.failures {
                eprintln!("FAIL {f}");
            }
            ExitCode::from(outcome.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
