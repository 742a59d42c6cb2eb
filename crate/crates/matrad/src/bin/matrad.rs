//! Verification CLI: run the registered check suite, list checks, or probe
//! the sharp-exponent counterexample.

use clap::{Parser, Subcommand};
use matrad::mcquad::Engine;
use matrad::radon::counterexample_b_probe;
use matrad::verify::{emit_report, registry, run_suite, ReportFormat, SuiteConfig, DEFAULT_SEED};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "matrad", version, about = "Radon transforms of matrix argument: verification suite")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run registered checks and report pass/fail per check
    Verify {
        /// comma-separated substrings of check ids (default: all checks)
        #[arg(long)]
        filter: Option<String>,
        /// include checks tagged slow
        #[arg(long)]
        slow: bool,
        /// override the per-check sample budget
        #[arg(long)]
        samples: Option<u64>,
        /// global seed; per-check seeds derive from it by stable hashing
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// report format
        #[arg(long, value_parser = ["json", "csv"], default_value = "json")]
        format: String,
        /// write the report here instead of only printing the summary
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate registered checks with the identity each one verifies
    List,
    /// Growth probe of the sharp-exponent counterexample
    Probe {
        #[command(subcommand)]
        what: ProbeCommand,
    },
}

#[derive(Subcommand)]
enum ProbeCommand {
    /// Partial integrals of the transform and norm shells of the witness
    Counterexample {
        #[arg(long)]
        p: f64,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 200_000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Verify { filter, slow, samples, seed, format, out } => {
            let cfg = SuiteConfig { seed, samples, include_slow: slow, parallel: true };
            let results = match run_suite(filter.as_deref(), &cfg) {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            for r in &results {
                println!(
                    "{:<42} {}  score {:>10.4}  [{} ms]",
                    r.check_id,
                    if r.pass { "PASS" } else { "FAIL" },
                    r.score,
                    r.wall_time_ms
                );
            }
            let n_pass = results.iter().filter(|r| r.pass).count();
            println!("{n_pass}/{} checks passed (seed {seed})", results.len());
            let fmt = if format == "csv" { ReportFormat::Csv } else { ReportFormat::Json };
            let report = emit_report(&results, fmt);
            if let Some(path) = out {
                if let Err(e) =
                    std::fs::File::create(&path).and_then(|mut f| f.write_all(report.as_bytes()))
                {
                    eprintln!("error writing {}: {e}", path.display());
                    return ExitCode::from(2);
                }
                println!("report written to {}", path.display());
            }
            if n_pass == results.len() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Command::List => {
            for c in registry() {
                println!(
                    "{:<42} {:<6} {:<22} {}",
                    c.check_id,
                    if c.slow { "slow" } else { "" },
                    c.params,
                    c.about
                );
            }
            ExitCode::SUCCESS
        }
        Command::Probe { what } => match what {
            ProbeCommand::Counterexample { p, n, m, k, samples, seed } => {
                let engine = Engine::new(samples, seed);
                let radii = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0];
                let shells = [4.0, 8.0, 16.0, 32.0, 64.0, 128.0];
                match counterexample_b_probe(p, n, m, k, &radii, &shells, &engine) {
                    Ok(report) => {
                        println!("counterexample probe at p = {p}, (n,m,k) = ({n},{m},{k})");
                        println!("partial integrals of the transform over balls:");
                        for (r, est) in report.radii.iter().zip(&report.partials) {
                            println!("  R = {r:>6.1}: {:>12.6} +- {:.6}", est.value, est.stderr);
                        }
                        println!("doubling ratios: {:?}", report.doubling_ratios);
                        println!("norm shells of |F|^p:");
                        for (w, est) in shells.windows(2).zip(&report.norm_shells) {
                            println!(
                                "  {:>6.1} -> {:>6.1}: {:>12.6} +- {:.6}",
                                w[0], w[1], est.value, est.stderr
                            );
                        }
                        println!("shell ratios: {:?}", report.shell_ratios);
                        ExitCode::SUCCESS
                    }
                    Err(e) => {
                        eprintln!("error: {e}");
                        ExitCode::from(2)
                    }
                }
            }
        },
    }
}
