use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use cyclic_slope::commands::{self, EnumerateMode, Output};
use cyclic_slope::suite::SuiteConfig;
use cyclic_slope::{table, with_thread_pool, CliError};
use cyclic_slope_core::examples::{EnumerationBudget, ProductExampleParams};

#[derive(Parser)]
#[command(name = "cyclic-slope", version, about = "Exact invariants and slope bounds for primitive cyclic covering fibrations")]
struct Cli {
    /// Print human-readable tables instead of JSON.
    #[arg(long, global = true)]
    table: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Valid,
    Resolvable,
    Standard,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file.
    Validate { file: PathBuf },
    /// Relative invariants, Horikawa indices and signatures of a model.
    Invariants { file: PathBuf },
    /// Resolve a single fiber germ.
    Resolve { file: PathBuf },
    /// Lower and upper slope bounds for (g, h, n).
    Bounds {
        #[arg(long)]
        g: i64,
        #[arg(long, default_value_t = 0)]
        h: i64,
        #[arg(long)]
        n: i64,
    },
    /// The product example and its lower-bound certificate.
    SharpExample {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        h: i64,
        #[arg(long = "N")]
        big_n: i64,
        #[arg(long = "M")]
        big_m: i64,
    },
    /// Stream fiber germs as NDJSON.
    Enumerate {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        r: i64,
        #[arg(long, default_value_t = 3)]
        max_nodes: usize,
        #[arg(long)]
        max_mult: Option<i64>,
        #[arg(long, value_enum, default_value_t = Mode::Valid)]
        mode: Mode,
        #[arg(long, default_value_t = 3)]
        max_contact: i64,
    },
    /// Run every invariant suite and print the pass/fail ledger.
    VerifySuite {
        /// Restrict the germ sweep to this order.
        #[arg(long)]
        n: Option<i64>,
        /// Restrict the germ sweep to this branch degree.
        #[arg(long)]
        r: Option<i64>,
        /// Maximum number of cluster nodes per germ.
        #[arg(long, default_value_t = 5)]
        budget: usize,
    },
}

fn emit(out: &Output, as_table: bool) -> std::io::Result<()> {
    let mut stdout = std::io::stdout().lock();
    if as_table {
        write!(stdout, "{}", table::render(&out.report))
    } else {
        let text = serde_json::to_string_pretty(&out.report).map_err(std::io::Error::other)?;
        writeln!(stdout, "{text}")
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let out = match cli.command {
        Command::Validate { file } => commands::validate(&file)?,
        Command::Invariants { file } => commands::invariants(&file)?,
        Command::Resolve { file } => commands::resolve(&file)?,
        Command::Bounds { g, h, n } => commands::bounds(g, h, n)?,
        Command::SharpExample { n, h, big_n, big_m } => {
            commands::sharp_example(ProductExampleParams { n, h, big_n, big_m })?
        }
        Command::Enumerate { n, r, max_nodes, max_mult, mode, max_contact } => {
            let budget = EnumerationBudget::new(max_nodes, max_mult.unwrap_or(r));
            let mode = match mode {
                Mode::Valid => EnumerateMode::Valid,
                Mode::Resolvable => EnumerateMode::Resolvable,
                Mode::Standard => EnumerateMode::Standard,
            };
            let mut stdout = std::io::stdout().lock();
            commands::enumerate(n, r, budget, mode, max_contact, &mut stdout)?;
            return Ok(0);
        }
        Command::VerifySuite { n, r, budget } => {
            let mut config = SuiteConfig { r, max_nodes: budget, ..SuiteConfig::default() };
            if let Some(n) = n {
                config.orders = vec![n];
            }
            with_thread_pool(|| commands::verify_suite(&config))?
        }
    };
    emit(&out, cli.table).map_err(CliError::Write)?;
    Ok(out.exit)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
