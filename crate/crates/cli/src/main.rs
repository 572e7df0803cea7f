use anyhow::Context;
use clap::{Parser, Subcommand};
use collapse_cli::report::{csv, notes, summary};
use collapse_cli::runner::Grid;
use collapse_cli::{bundled, run_scenario, Report, RunError, RunOptions, Scenario};
use collapse_core::surfaces::dump_surface;
use collapse_core::Exec;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "collapse", version, about = "h-profiles and Euler integrals of collapsing CBB(−1) surfaces")]
struct Cli {
    /// Comma-separated primes overriding the scenario's fields.
    #[arg(long, global = true, value_delimiter = ',')]
    fields: Option<Vec<u64>>,
    /// Directory for reports (default: the scenario's out_dir, else stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Evaluate only the relaxed (verified) δ-grid, skipping the paper-safe one.
    #[arg(long, global = true)]
    relaxed_grid: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dump the surface of every schedule entry as JSON.
    Generate { scenario: PathBuf },
    /// Compute the profile grid and write it as CSV.
    Hprofile { scenario: PathBuf },
    /// Run and check expectations: exit 0 on match, 1 on mismatch, 2 on bad input.
    Verify { scenario: PathBuf },
    /// Run the bundled suite and print the χ-identity table.
    VerifyAll,
}

fn exec_for(threads: Option<usize>) -> anyhow::Result<Exec> {
    match threads {
        Some(0) => anyhow::bail!("--threads must be at least 1"),
        Some(1) => Ok(Exec::Sequential),
        Some(n) => {
            #[cfg(feature = "parallel")]
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .context("configuring the thread pool")?;
            #[cfg(not(feature = "parallel"))]
            let _ = n;
            Ok(Exec::Parallel)
        }
        None => Ok(Exec::default()),
    }
}

fn write_out(dir: Option<&Path>, file: &str, text: &str) -> anyhow::Result<()> {
    match dir {
        Some(d) => {
            std::fs::create_dir_all(d).with_context(|| format!("creating {}", d.display()))?;
            let path = d.join(file);
            std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn out_dir(cli_out: &Option<PathBuf>, sc: &Scenario) -> Option<PathBuf> {
    cli_out.clone().or_else(|| sc.out_dir.as_ref().map(PathBuf::from))
}

fn write_reports(dir: Option<&Path>, report: &Report) -> anyhow::Result<()> {
    write_out(dir, &format!("{}.csv", report.scenario), &csv(report, Grid::Verified))?;
    if report.cells.iter().any(|c| c.grid == Grid::PaperSafe) {
        write_out(dir, &format!("{}.paper_safe.csv", report.scenario), &csv(report, Grid::PaperSafe))?;
    }
    if dir.is_some() {
        let json = serde_json::to_string_pretty(&summary(report))?;
        write_out(dir, &format!("{}.summary.json", report.scenario), &format!("{json}\n"))?;
        write_out(dir, &format!("{}.notes.txt", report.scenario), &notes(report))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, (u8, anyhow::Error)> {
    let config = |e: anyhow::Error| (2u8, e);
    let exec = exec_for(cli.threads).map_err(config)?;
    let opts = RunOptions {
        fields: cli.fields.clone(),
        exec,
        relaxed_only: cli.relaxed_grid,
    };
    let classify = |e: RunError| match e {
        RunError::Config(_) => (2u8, anyhow::Error::new(e)),
        RunError::Runtime(_) => (1u8, anyhow::Error::new(e)),
    };
    let io = |e: anyhow::Error| (1u8, e);
    match &cli.command {
        Command::Generate { scenario } => {
            let sc = Scenario::load(scenario).map_err(classify)?;
            let dir = out_dir(&cli.out, &sc);
            for (i, &param) in sc.schedule.iter().enumerate() {
                let s = sc
                    .family_at(param)
                    .generate(exec)
                    .map_err(|e| classify(RunError::Config(e.to_string())))?;
                let json = serde_json::to_string(&dump_surface(&s)).map_err(|e| io(e.into()))?;
                write_out(dir.as_deref(), &format!("{}.surface{i}.json", sc.name), &format!("{json}\n")).map_err(io)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Hprofile { scenario } => {
            let sc = Scenario::load(scenario).map_err(classify)?;
            let report = run_scenario(&sc, &opts).map_err(classify)?;
            write_reports(out_dir(&cli.out, &sc).as_deref(), &report).map_err(io)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { scenario } => {
            let sc = Scenario::load(scenario).map_err(classify)?;
            let report = run_scenario(&sc, &opts).map_err(classify)?;
            if let Some(dir) = out_dir(&cli.out, &sc) {
                write_reports(Some(&dir), &report).map_err(io)?;
            }
            let s = summary(&report);
            println!("{}", serde_json::to_string(&s).map_err(|e| io(e.into()))?);
            if report.passed() {
                Ok(ExitCode::SUCCESS)
            } else {
                for m in &report.mismatches {
                    eprintln!("- {m}");
                }
                Ok(ExitCode::from(1))
            }
        }
        Command::VerifyAll => {
            let mut all = true;
            println!("{:<20} {:>10} {:>4}  {:>6}  result", "scenario", "∫F dχ", "χ", "cells");
            for sc in bundled() {
                let report = run_scenario(&sc, &opts).map_err(classify)?;
                if let Some(dir) = &cli.out {
                    write_reports(Some(dir), &report).map_err(io)?;
                }
                let s = summary(&report);
                let integral = s.chi_integral.map_or("-".to_string(), |v| v.to_string());
                let ok = report.passed();
                all &= ok;
                println!(
                    "{:<20} ∫F dχ = {:>3} {} χ = {:>2}  {:>3}/{:<3} {}",
                    s.scenario,
                    integral,
                    if s.matches { "=" } else { "≠" },
                    s.chi_expected,
                    s.cells_conclusive,
                    s.cells_total,
                    if ok { "ok" } else { "MISMATCH" }
                );
                for m in &report.mismatches {
                    println!("    - {m}");
                }
            }
            Ok(if all { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err((code, e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}
