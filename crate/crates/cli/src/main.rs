use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use wittlift_cli::{run_suite, show, ConfigError, Grid, ShowArgs, Suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "wittlift", version, about = "Exact checks for Witt-vector cohomology classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suites over a parameter grid.
    Verify {
        /// Primes (comma-separated); overrides the grid.
        #[arg(long, value_delimiter = ',')]
        p: Vec<u64>,
        #[arg(long, value_delimiter = ',')]
        r: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        j: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        m: Vec<u32>,
        /// Comma-separated suites: exactalg, hopf, comodules, witt, universal, pairing, lemma.
        #[arg(long)]
        only: Option<String>,
        /// Grid such as `p=2,3;r=1..2;j=0..1;m=1..2`.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
        /// Samples per randomized check.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Md)]
        format: Format,
    },
    /// Print an object: c, phi, congruence, cup, coaction, K-basis, Y-basis, hnf, universal, projection.
    Show {
        selector: String,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long)]
        r: Option<u32>,
        /// Frobenius twist for `phi`.
        #[arg(long)]
        s: Option<u32>,
        #[arg(long)]
        j: Option<u32>,
        #[arg(long)]
        m: Option<u32>,
        /// Matrix for `hnf`, e.g. `2,4;6,8`.
        #[arg(long)]
        matrix: Option<String>,
    },
}

#[allow(clippy::too_many_arguments)]
fn verify(
    p: Vec<u64>,
    r: Vec<u32>,
    j: Vec<u32>,
    m: Vec<u32>,
    only: Option<String>,
    grid: Option<String>,
    seed: u64,
    samples: usize,
    report: Option<PathBuf>,
    format: Format,
) -> Result<ExitCode, ConfigError> {
    let mut grid: Grid = match grid {
        Some(g) => g.parse()?,
        None => Grid::default(),
    };
    if !p.is_empty() {
        grid.p = p;
    }
    if !r.is_empty() {
        grid.r = r;
    }
    if !j.is_empty() {
        grid.j = j;
    }
    if !m.is_empty() {
        grid.m = m;
    }
    let suites = match only {
        Some(s) => Suite::parse_list(&s)?,
        None => Suite::ALL.to_vec(),
    };
    let config = SuiteConfig {
        grid,
        suites,
        seed,
        samples,
    };
    let result = run_suite(&config)?;
    let text = match format {
        Format::Json => result.to_json(),
        Format::Md => result.to_markdown(),
    };
    match report {
        Some(path) => {
            std::fs::write(&path, text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
            println!(
                "{} passed, {} failed, {} skipped",
                result.count(wittlift_cli::Status::Pass),
                result.count(wittlift_cli::Status::Fail),
                result.count(wittlift_cli::Status::Skipped)
            );
        }
        None => println!("{text}"),
    }
    Ok(ExitCode::from(result.exit_code() as u8))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify {
            p,
            r,
            j,
            m,
            only,
            grid,
            seed,
            samples,
            report,
            format,
        } => verify(p, r, j, m, only, grid, seed, samples, report, format),
        Command::Show {
            selector,
            p,
            r,
            s,
            j,
            m,
            matrix,
        } => {
            let args = ShowArgs { p, r, s, j, m, matrix };
            show(&selector, &args).map(|text| {
                println!("{text}");
                ExitCode::SUCCESS
            })
        }
    };
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::from(2)
    })
}
