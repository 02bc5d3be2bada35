use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use lclab::{run, Command, Overrides, Scenario};

/// Verification experiments for graded local cohomology of invariant rings.
///
/// Exit codes: 0 pass, 1 failing check or theorem-violation alarm,
/// 2 undetermined or out of budget, 3 invalid scenario.
#[derive(Parser)]
#[command(name = "lclab", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Scenario file (TOML).
    scenario: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    t_start: Option<u32>,
    #[arg(long, env = "LCLAB_T_MAX")]
    t_max: Option<u32>,
    /// Number of equal observations needed to confirm a component.
    #[arg(long)]
    window: Option<u32>,
    #[arg(long)]
    stretch: Option<u32>,
    #[arg(long, env = "LCLAB_MONOMIAL_BUDGET")]
    monomial_budget: Option<u128>,
    #[arg(long, env = "LCLAB_GROEBNER_PAIRS")]
    groebner_pairs: Option<usize>,
    /// Degrees scanned beyond the vanishing window on each side.
    #[arg(long)]
    extension: Option<i64>,
    /// Write the JSON report here.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write each report table as CSV into this directory.
    #[arg(long)]
    csv_dir: Option<PathBuf>,
    /// Suppress the summary on stdout.
    #[arg(long, short)]
    quiet: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("lclab: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn execute(cli: &Cli) -> Result<i32, lclab::LabError> {
    let mut scenario = Scenario::load(&cli.scenario)?;
    Overrides {
        seed: cli.seed,
        t_start: cli.t_start,
        t_max: cli.t_max,
        confirmation_window: cli.window,
        stretch: cli.stretch,
        monomial_budget: cli.monomial_budget,
        groebner_pairs: cli.groebner_pairs,
        extension: cli.extension,
    }
    .apply(&mut scenario);
    let report = run(cli.command, &scenario)?;
    let io = |e: std::io::Error| lclab::LabError::Invalid(format!("cannot write output: {e}"));
    if let Some(path) = &cli.json {
        report.write_json(path).map_err(io)?;
    }
    if let Some(dir) = &cli.csv_dir {
        report.write_csv_dir(dir).map_err(io)?;
    }
    if !cli.quiet {
        print!("{}", report.summary());
    }
    Ok(report.exit_code())
}
