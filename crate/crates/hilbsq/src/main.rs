//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on usage or domain errors, 3 when `--verify`
//! finds a mismatch between the fast solvers and the brute-force oracles.
//! Data goes to stdout, diagnostics to stderr.

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use hilbsq::pell::{self, PellSolution};
use hilbsq::report::{scan_reports, Report};
use hilbsq::{oracle, ConeCase};

const EXIT_USAGE: u8 = 2;
const EXIT_VERIFY: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hilbsq",
    version,
    about = "Ample cone, lattice isometries and automorphisms of the Hilbert square of a generic K3 surface of degree 2t"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Full report for one t: cone, isometry group, automorphisms, chi table.
    Classify {
        /// Polarization degree parameter (H^2 = 2t).
        #[arg(long)]
        t: u64,
        /// Cross-check the result against the brute-force oracles.
        #[arg(long)]
        verify: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Extremal rays, trichotomy case and defining inequality of the ample cone.
    Cone {
        #[arg(long)]
        t: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Solutions of the Pell equation x^2 - D y^2 = N.
    Pell {
        /// The non-square coefficient D.
        #[arg(long)]
        d: u64,
        /// Right-hand side N; -1, 1 and 5 run the exact solvers, anything
        /// else needs --brute.
        #[arg(long, allow_negative_numbers = true)]
        n: i64,
        /// List this many solutions in increasing x (default: minimal only).
        #[arg(long = "all-up-to")]
        all_up_to: Option<usize>,
        /// Exhaustive scan instead of the exact solvers; allows arbitrary N.
        #[arg(long)]
        brute: bool,
        /// Scan bound on y for --brute (default 1000000).
        #[arg(long = "y-max")]
        y_max: Option<u64>,
        /// Cross-check the exact solver against the scan.
        #[arg(long)]
        verify: bool,
    },
    /// Classification table over a range of t.
    Scan {
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        /// Keep only rows whose automorphism group is non-trivial.
        #[arg(long)]
        only_nontrivial: bool,
        /// Size of the worker pool (default: one worker per CPU).
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn check_t(t: u64) -> Result<(), String> {
    if t < 1 {
        return Err("t must be at least 1".into());
    }
    if t.checked_mul(4).is_none() {
        return Err(format!("t = {t} is too large: 4t must fit in 64 bits"));
    }
    Ok(())
}

fn cmd_classify(t: u64, verify: bool, format: Format) -> ExitCode {
    if let Err(msg) = check_t(t) {
        return usage_error(&msg);
    }
    let mut report = match Report::build(t) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let mut verify_failed = false;
    if verify {
        if let Err(msg) = report.run_oracle_checks() {
            eprintln!("verification mismatch: {msg}");
            verify_failed = true;
        }
        report.verified = Some(!verify_failed);
    }
    match format {
        Format::Text => print!("{}", report.to_text()),
        Format::Json => println!("{}", report.to_json()),
        Format::Csv => {
            println!("{}", Report::csv_header());
            println!("{}", report.to_csv_row());
        }
    }
    if verify_failed {
        ExitCode::from(EXIT_VERIFY)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_cone(t: u64, format: Format) -> ExitCode {
    if let Err(msg) = check_t(t) {
        return usage_error(&msg);
    }
    let report = match Report::build(t) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match format {
        Format::Text => {
            println!("t = {t}");
            println!("rays: {} and {}", report.cone.ray1, report.cone.ray2);
            println!("case: {}", report.cone_case);
            println!("inequality: {}", report.inequality);
        }
        Format::Json => {
            let v = report.to_json();
            println!(
                "{}",
                serde_json::json!({"t": t.to_string(), "cone": v.pointer("/cone")})
            );
        }
        Format::Csv => {
            println!("t,ray1,ray2,case,inequality");
            let quote = |s: String| format!("\"{s}\"");
            let (kind, _) = match &report.cone_case {
                ConeCase::SquareT { k } => ("square_t", k.to_string()),
                ConeCase::PellFourT5 { solution } => ("pell_4t5", solution.to_string()),
                ConeCase::PellT1 { solution } => ("pell_t1", solution.to_string()),
            };
            println!(
                "{},{},{},{},{}",
                t,
                quote(format!("{},{}", report.cone.ray1.x, report.cone.ray1.y)),
                quote(format!("{},{}", report.cone.ray2.x, report.cone.ray2.y)),
                kind,
                quote(report.inequality.clone()),
            );
        }
    }
    ExitCode::SUCCESS
}

fn print_solutions(d: u64, n: i64, sols: &[PellSolution]) {
    if sols.is_empty() {
        println!("x^2 - {d} y^2 = {n}: no solution");
        return;
    }
    println!("x^2 - {d} y^2 = {n}: minimal solution {}", sols[0]);
    for s in &sols[1..] {
        println!("  next: {s}");
    }
}

fn cmd_pell(
    d: u64,
    n: i64,
    all_up_to: Option<usize>,
    brute: bool,
    y_max: Option<u64>,
    verify: bool,
) -> ExitCode {
    if d < 2 || pell::perfect_square_u64(d).is_some() {
        return usage_error(&format!("D = {d} must be a non-square integer at least 2"));
    }
    if n == 0 {
        return usage_error("N must be non-zero");
    }
    let count = all_up_to.unwrap_or(1).max(1);
    if brute {
        let cap = y_max.unwrap_or(1_000_000);
        let sols = oracle::brute_pell(d, n, cap);
        let positive: Vec<PellSolution> = sols
            .into_iter()
            .filter(|s| s.is_positive())
            .take(count)
            .collect();
        if positive.is_empty() {
            println!("x^2 - {d} y^2 = {n}: no solution with 0 < y <= {cap}");
        } else {
            print_solutions(d, n, &positive);
        }
        return ExitCode::SUCCESS;
    }
    if ![-1, 1, 5].contains(&n) {
        return usage_error("exact mode supports N in {-1, 1, 5}; pass --brute for other N");
    }
    let sols = match pell::enumerate_solutions(d, n, count) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    print_solutions(d, n, &sols);
    if verify {
        let cap = match sols.first() {
            Some(s) => u64::try_from(&s.y).unwrap_or(1_000_000).min(1_000_000),
            None => y_max.unwrap_or(10_000),
        };
        let brute_sols = oracle::brute_pell(d, n, cap);
        let brute_min = brute_sols.iter().find(|s| s.is_positive());
        let agree = match (sols.first(), brute_min) {
            (Some(f), Some(b)) => f.x == b.x && f.y == b.y,
            (Some(f), None) => u64::try_from(&f.y).map_or(true, |y| y > cap),
            (None, Some(_)) => false,
            (None, None) => true,
        };
        if agree {
            eprintln!("oracle verification: agreed (scan up to y = {cap})");
        } else {
            eprintln!("oracle verification: MISMATCH");
            return ExitCode::from(EXIT_VERIFY);
        }
    }
    ExitCode::SUCCESS
}

fn cmd_scan(
    from: u64,
    to: u64,
    only_nontrivial: bool,
    jobs: Option<usize>,
    format: Format,
) -> ExitCode {
    if from < 1 || from > to {
        return usage_error("need 1 <= from <= to");
    }
    if let Err(msg) = check_t(to) {
        return usage_error(&msg);
    }
    if jobs == Some(0) {
        return usage_error("--jobs must be at least 1");
    }
    let run = || scan_reports(from, to);
    let reports = match jobs {
        Some(j) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(j).build() {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(EXIT_USAGE);
                }
            };
            pool.install(run)
        }
        None => run(),
    };
    let reports = match reports {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let rows: Vec<&Report> = reports
        .iter()
        .filter(|r| !only_nontrivial || r.aut.is_nontrivial())
        .collect();
    match format {
        Format::Text => {
            println!("{}", Report::scan_header());
            for r in rows {
                println!("{}", r.scan_row());
            }
        }
        Format::Json => {
            for r in rows {
                println!("{}", r.to_json());
            }
        }
        Format::Csv => {
            println!("{}", Report::csv_header());
            for r in rows {
                println!("{}", r.to_csv_row());
            }
        }
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Classify { t, verify, format } => cmd_classify(t, verify, format),
        Cmd::Cone { t, format } => cmd_cone(t, format),
        Cmd::Pell {
            d,
            n,
            all_up_to,
            brute,
            y_max,
            verify,
        } => cmd_pell(d, n, all_up_to, brute, y_max, verify),
        Cmd::Scan {
            from,
            to,
            only_nontrivial,
            jobs,
            format,
        } => cmd_scan(from, to, only_nontrivial, jobs, format),
    }
}
