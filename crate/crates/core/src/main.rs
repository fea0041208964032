use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};

use symbreak::canonical::{class_key, is_lex_leader_with_limit, CanonAxis, DEFAULT_ROW_LIMIT};
use symbreak::experiment::{rows_to_csv, run_experiment, run_suite, suite_markdown, RunOptions, Verdict, DEFAULT_LIMITS};
use symbreak::problems::ProblemSpec;
use symbreak::search::{Limits, VarOrder};
use symbreak::symbreak::{SbKind, SymBreakConfig, ValueSb};
use symbreak::{Matrix, Result};

#[derive(Parser)]
#[command(name = "symbreak", version, about = "Symmetry breaking experiments on matrix models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axis {
    Rows,
    Cols,
    Auto,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate one instance and print a CSV row.
    Run {
        /// e.g. unconstrained:r=3,c=3,d=2 or efpa:q=3,lam=3,d=2,v=3
        #[arg(long)]
        problem: ProblemSpec,
        #[arg(long, default_value = "nosb")]
        sb: SbKind,
        /// precedence:<order> or puget:<order>
        #[arg(long)]
        value_sb: Option<ValueSb>,
        /// Also count symmetry classes among the solutions.
        #[arg(long)]
        classify: bool,
        /// Branching order (defaults to the one matching --sb).
        #[arg(long)]
        order: Option<VarOrder>,
        #[arg(long)]
        max_solutions: Option<u64>,
        /// Seconds.
        #[arg(long)]
        time_limit: Option<u64>,
    },
    /// Reproduce one results table and report PASS/FAIL per row.
    Suite {
        #[arg(long)]
        table: u8,
        /// 1 runs rows taking seconds, 2 adds minutes, 3 adds long rows.
        #[arg(long, default_value_t = 1)]
        scale: u8,
        /// Write the rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Seconds per row.
        #[arg(long)]
        time_limit: Option<u64>,
    },
    /// Print the canonical form of a matrix file ("-" for stdin).
    Canon {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "rows")]
        axis: Axis,
        #[arg(long, default_value_t = DEFAULT_ROW_LIMIT)]
        row_limit: usize,
    },
    /// Evaluate a symmetry-breaking checker on a matrix file.
    Check {
        #[arg(long)]
        sb: SbKind,
        file: PathBuf,
    },
}

fn read_matrix(path: &PathBuf) -> Result<Matrix> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| symbreak::Error::InvalidArgument(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| symbreak::Error::InvalidArgument(format!("{}: {e}", path.display())))?
    };
    text.parse()
}

fn limits(max_solutions: Option<u64>, time_limit: Option<u64>) -> Limits {
    Limits {
        max_solutions: max_solutions.or(DEFAULT_LIMITS.max_solutions),
        time_budget: time_limit.map(Duration::from_secs).or(DEFAULT_LIMITS.time_budget),
    }
}

fn execute(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run { problem, sb, value_sb, classify, order, max_solutions, time_limit } => {
            let config = SymBreakConfig { kind: sb, value: value_sb };
            let opts = RunOptions { classify, limits: limits(max_solutions, time_limit), var_order: order, ..Default::default() };
            let row = run_experiment(&problem, &config, &opts)?;
            print!("{}", rows_to_csv([&row])?);
            Ok(true)
        }
        Command::Suite { table, scale, csv, time_limit } => {
            let opts = RunOptions { limits: limits(None, time_limit), ..Default::default() };
            let rows = run_suite(table, scale, &opts)?;
            print!("{}", suite_markdown(&rows));
            for r in rows.iter().filter(|r| r.error.is_some()) {
                eprintln!("{} {}: {}", r.expected.problem, r.expected.sb, r.error.as_deref().unwrap_or_default());
            }
            if let Some(path) = csv {
                let text = rows_to_csv(rows.iter().filter_map(|r| r.row.as_ref()))?;
                std::fs::write(&path, text).map_err(|e| symbreak::Error::InvalidArgument(format!("{}: {e}", path.display())))?;
            }
            Ok(rows.iter().all(|r| matches!(r.verdict, Verdict::Pass | Verdict::Incomplete)))
        }
        Command::Canon { file, axis, row_limit } => {
            let m = read_matrix(&file)?;
            let axis = match axis {
                Axis::Rows => CanonAxis::Rows,
                Axis::Cols => CanonAxis::Cols,
                Axis::Auto => CanonAxis::Auto,
            };
            let key = class_key(&m, axis, row_limit)?;
            print!("{key}");
            if axis == CanonAxis::Rows {
                let leader = is_lex_leader_with_limit(&m, row_limit)?;
                println!("leader: {}", if leader { "yes" } else { "no" });
            }
            Ok(true)
        }
        Command::Check { sb, file } => {
            let m = read_matrix(&file)?;
            let ok = sb.check(&m)?;
            println!("{sb}: {}", if ok { "PASS" } else { "FAIL" });
            Ok(ok)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
