use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use persym_cli::{cmd_census, cmd_derive, cmd_formula, cmd_polycount, cmd_verify, RunReport};

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Parser)]
#[command(
    name = "persym",
    version,
    about = "Exact rank censuses and identity checks for stacked-Hankel matrix families over GF(2)"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exhaustive rank census of the (n, k) family, with identity checks.
    Census {
        /// Number of stacked 2-row blocks.
        #[arg(long)]
        n: u32,
        /// Number of columns.
        #[arg(long)]
        k: u32,
        /// Census worker threads.
        #[arg(long, default_value_t = default_threads())]
        threads: usize,
        /// Run even when the shape exceeds the soft feasibility guard.
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Closed-form count of rank-i members of the (n, k) family.
    Formula {
        #[arg(long)]
        n: u32,
        /// Rank line to evaluate.
        #[arg(long)]
        i: u32,
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Census sweep k = 1..=kmax with the full check matrix.
    Verify {
        #[arg(long)]
        n: u32,
        /// Largest column count to sweep.
        #[arg(long)]
        kmax: u32,
        #[arg(long, default_value_t = default_threads())]
        threads: usize,
        #[arg(long)]
        force: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Solutions of the q-fold bilinear system vs the census prediction.
    Polycount {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        k: u32,
        /// Number of bilinear equations per block.
        #[arg(long)]
        q: u32,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Re-derive the five-block coefficient table with a full audit trail.
    Derive {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

fn print_report(report: &RunReport, format: Format) -> io::Result<()> {
    let rendered = match format {
        Format::Json => {
            let mut text = serde_json::to_string_pretty(report).expect("report serializes");
            text.push('\n');
            text
        }
        Format::Csv => report.render_csv(),
    };
    let mut out = io::stdout().lock();
    out.write_all(rendered.as_bytes())?;
    out.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, format) = match cli.command {
        Cmd::Census { n, k, threads, force, format } => (cmd_census(n, k, threads, force), format),
        Cmd::Formula { n, i, k, format } => (cmd_formula(n, i, k), format),
        Cmd::Verify { n, kmax, threads, force, format } => {
            (cmd_verify(n, kmax, threads, force), format)
        }
        Cmd::Polycount { n, k, q, format } => (cmd_polycount(n, k, q), format),
        Cmd::Derive { format } => (cmd_derive(), format),
    };
    match result {
        Ok(report) => {
            let code = if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                eprintln!("{} check(s) failed", report.checks.iter().filter(|c| !c.pass).count());
                ExitCode::from(1)
            };
            match print_report(&report, format) {
                Ok(()) => code,
                // A consumer like `head` closing the pipe early is a normal
                // way to read part of a report; the checks already ran.
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => code,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
