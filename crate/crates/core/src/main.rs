use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use curvcheck::catalog::{entry, list_catalog, EntryKind};
use curvcheck::runner::{
    load_scenario, render_report_text, render_suite_text, verify_suite, Format, Overrides, SuiteOptions, GROUPS,
};
use curvcheck::{GeoError, Tolerances};

#[derive(Parser)]
#[command(
    name = "curvcheck",
    version,
    about = "Curvature checks for charts, Kähler metrics and immersions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of a scenario file.
    Check {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        format: Option<FormatArg>,
        /// Worker threads (points are evaluated in parallel).
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Tolerance of jet-exact checks.
        #[arg(long)]
        tol_exact: Option<f64>,
        /// Tolerance of finite-difference checks.
        #[arg(long)]
        tol_fd: Option<f64>,
    },
    /// List catalog entries.
    List,
    /// Describe a catalog entry.
    Show { name: String },
    /// Run every catalog expectation.
    Verify {
        /// Restrict to one group: riemannian, submanifold or kahler.
        #[arg(long)]
        only: Option<String>,
        /// Sets both the exact and the finite-difference tolerance.
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        tol_exact: Option<f64>,
        #[arg(long)]
        tol_fd: Option<f64>,
        #[arg(long, default_value_t = 1)]
        parallel: usize,
        #[arg(long)]
        seed: Option<u64>,
        /// Probe points per fixture.
        #[arg(long, default_value_t = 4)]
        points: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
    },
}

fn use_color() -> bool {
    std::env::var_os("NO_COLOR").is_none_or(|v| v.is_empty()) && std::io::stdout().is_terminal()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, GeoError> {
    match cli.command {
        Command::Check {
            scenario,
            format,
            parallel,
            seed,
            tol_exact,
            tol_fd,
        } => {
            let overrides = Overrides {
                seed,
                tol_exact,
                tol_fd,
            };
            let sc = load_scenario(&scenario, &overrides)?;
            let format = match format {
                Some(FormatArg::Json) => Format::Json,
                Some(FormatArg::Text) => Format::Text,
                None => sc.format.unwrap_or_default(),
            };
            let start = Instant::now();
            let report = sc.run(parallel)?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => {
                    print!("{}", render_report_text(&report, use_color()));
                    println!("wall time {:.2}s", start.elapsed().as_secs_f64());
                }
            }
            Ok(report.exit_code() as u8)
        }
        Command::List => {
            for e in list_catalog() {
                let kind = match e.kind {
                    EntryKind::Ambient => "ambient",
                    EntryKind::KahlerAmbient => "kahler",
                    EntryKind::Immersion => "immersion",
                };
                let params: Vec<String> = e.params.iter().map(|p| format!("{}={}", p.name, p.default)).collect();
                println!("{:<20} {:<10} {}", e.name, kind, params.join(" "));
            }
            Ok(0)
        }
        Command::Show { name } => {
            let e = entry(&name)?;
            println!("{}\n  {}", e.name, e.doc);
            if !e.params.is_empty() {
                println!("parameters:");
                for p in &e.params {
                    println!("  {:<10} default {:<18} {}", p.name, p.default, p.doc);
                }
            }
            if !e.expected.is_empty() {
                println!("expected verdicts:");
                for x in &e.expected {
                    let params = if x.params.is_empty() {
                        String::new()
                    } else {
                        format!(" {}", x.params)
                    };
                    println!(
                        "  {:<20} {:?}{params} ({:?}): {}",
                        x.check, x.expect, x.provenance, x.statement
                    );
                }
            }
            Ok(0)
        }
        Command::Verify {
            only,
            tol,
            tol_exact,
            tol_fd,
            parallel,
            seed,
            points,
            format,
        } => {
            let mut tolerances = Tolerances::default();
            if let Some(t) = tol {
                tolerances = Tolerances { exact: t, fd: t };
            }
            tolerances.exact = tol_exact.unwrap_or(tolerances.exact);
            tolerances.fd = tol_fd.unwrap_or(tolerances.fd);
            if let Some(g) = &only {
                if !GROUPS.contains(&g.as_str()) {
                    return Err(GeoError::UnknownName {
                        kind: "group",
                        name: g.clone(),
                        valid: GROUPS.iter().map(|s| s.to_string()).collect(),
                    });
                }
            }
            let opts = SuiteOptions {
                only,
                tolerances,
                seed: seed.unwrap_or(SuiteOptions::default().seed),
                parallel,
                points_per_fixture: points,
                ..SuiteOptions::default()
            };
            let start = Instant::now();
            let report = verify_suite(&opts)?;
            match format {
                FormatArg::Json => println!("{}", report.to_json()),
                FormatArg::Text => {
                    print!("{}", render_suite_text(&report, use_color()));
                    println!("wall time {:.2}s", start.elapsed().as_secs_f64());
                }
            }
            Ok(report.exit_code() as u8)
        }
    }
}
