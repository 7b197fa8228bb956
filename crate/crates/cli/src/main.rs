//! The `pom` command: language analyses, program tools, fooling pairs, the
//! counting bound, and the canned experiment reports.
//!
//! Exit codes: 0 when every checked verdict passes, 1 when a verdict fails
//! or a certificate does not check out, 2 for usage and resource errors.

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use pom::sums::count_bound;
use pom::{Config, Error};

mod analyze;
mod experiments;
mod fooling;
mod program;
mod report;
mod sum;

use report::Report;

#[derive(Parser)]
#[command(name = "pom", version, about = "Workbench for programs over finite monoids")]
struct Cli {
    /// Machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every sampled check.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Cap on exhaustive enumerations.
    #[arg(long, global = true, default_value_t = 2_000_000)]
    enumeration_cap: u64,
    /// Cap on constructed monoid sizes.
    #[arg(long, global = true, default_value_t = 64)]
    monoid_cap: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Syntactic stamp of a regex with stability and tameness verdicts.
    Analyze {
        regex: String,
        /// Varieties to decide, comma separated (default: I,Com,J,DA,A).
        #[arg(long, value_delimiter = ',')]
        variety: Vec<String>,
    },
    /// Evaluate, check, build, and normalize programs.
    Program {
        #[command(subcommand)]
        action: program::ProgramCmd,
    },
    /// Strongly unambiguous sums: membership, Z_k, compression.
    Sum {
        #[command(subcommand)]
        action: sum::SumCmd,
    },
    /// Produce a fooling pair, or audit completion-set safety.
    Fooling(fooling::FoolingArgs),
    /// The bound on languages recognized by short programs.
    Count {
        /// Monoid size.
        #[arg(long)]
        i: usize,
        /// Program range.
        #[arg(long)]
        n: usize,
        /// Program length.
        #[arg(long)]
        l: usize,
    },
    /// Canned experiment reports.
    Report {
        #[command(subcommand)]
        which: ReportCmd,
    },
}

#[derive(Subcommand)]
enum ReportCmd {
    /// J is not tame: swap-trick programs against the quasi-essentially-J
    /// verdict.
    NontamenessJ,
    /// P_k lengths, M_k compression, and fooling pairs over DA.
    Da {
        #[arg(long, default_value_t = 2)]
        k_max: usize,
        /// Range of the fooled programs.
        #[arg(long, default_value_t = 40)]
        n: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            match e {
                Error::Certificate(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> pom::Result<ExitCode> {
    let cfg = Config {
        seed: cli.seed,
        enumeration_cap: cli.enumeration_cap,
        monoid_cap: cli.monoid_cap,
        ..Config::default()
    };
    let report = match cli.command {
        Command::Analyze { regex, variety } => Some(analyze::run(&regex, &variety, &cfg)?),
        Command::Program { action } => program::run(action, &cfg)?,
        Command::Sum { action } => Some(sum::run(action, &cfg)?),
        Command::Fooling(args) => Some(fooling::run(args, &cfg)?),
        Command::Count { i, n, l } => {
            let mut report = Report::new(format!("count bound at i = {i}, n = {n}, l = {l}"));
            report.info(
                "bound",
                json!({ "i": i, "n": n, "l": l, "bound": count_bound(i, n, l).to_string() }),
            );
            Some(report)
        }
        Command::Report { which } => Some(match which {
            ReportCmd::NontamenessJ => experiments::nontameness_j(&cfg)?,
            ReportCmd::Da { k_max, n } => experiments::da_experiments(k_max, n, &cfg)?,
        }),
    };
    let Some(report) = report else {
        return Ok(ExitCode::SUCCESS);
    };
    if cli.json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.render_text());
    }
    Ok(if report.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
