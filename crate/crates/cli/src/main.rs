use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use dsmap_cli::error::CheckFailure;
use dsmap_cli::{categorize, run_experiment, selftest, ExperimentConfig};
use dsmap_core::forward::csv::write_msr_csv;
use dsmap_core::{parse_fresnel, to_msr, FresnelGeometry, FresnelSchema};

#[derive(Parser)]
#[command(name = "dsmap", version, about = "Direct sampling imaging experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a TOML config.
    Run {
        config: PathBuf,
        /// Override a config key, e.g. `--set noise.seed=7`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Parse a Fresnel measurement file and report what was read.
    ParseFresnel {
        file: PathBuf,
        /// Frequency to keep, in GHz.
        #[arg(long)]
        freq: f64,
        /// 1-based column spec, e.g. `tx=1,rx=2,freq=3,tot_re=4,tot_im=5,inc_re=6,inc_im=7`.
        #[arg(long)]
        schema: Option<String>,
        /// Also write the scattered-field MSR matrix as CSV.
        #[arg(long, value_name = "PATH")]
        msr_out: Option<PathBuf>,
    },
    /// Run the built-in invariant checks.
    Selftest,
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Run { config, overrides } => {
            let config = ExperimentConfig::load(&config, &overrides)?;
            let report = run_experiment(&config)?;
            for m in &report.maps {
                let jaccard = m.best_jaccard.map(|j| format!(" best J {j:.1}")).unwrap_or_default();
                println!(
                    "{:<5} L={:<3} argmax ({:.4}, {:.4}){jaccard}",
                    m.algorithm, m.incidences, m.argmax.x, m.argmax.y
                );
            }
            println!("wrote {} maps to {}", report.maps.len(), config.run.output_dir.display());
        }
        Command::ParseFresnel { file, freq, schema, msr_out } => {
            let schema: FresnelSchema = match schema {
                Some(s) => s.parse().context("--schema")?,
                None => FresnelSchema::default(),
            };
            let text = std::fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let report = parse_fresnel(&text, &schema, freq).with_context(|| format!("parsing {}", file.display()))?;
            let transmitters: BTreeSet<usize> = report.records.iter().map(|r| r.transmitter).collect();
            let receivers: BTreeSet<usize> = report.records.iter().map(|r| r.receiver).collect();
            println!("schema: {schema}");
            println!("records at {freq} GHz: {}", report.records.len());
            println!("records at other frequencies: {}", report.other_frequency);
            println!("skipped lines: {}", report.skipped_lines.len());
            println!("transmitters: {}, receivers: {}", transmitters.len(), receivers.len());
            if let Some(path) = msr_out {
                let msr = to_msr(&report.records, &FresnelGeometry::default())?;
                std::fs::write(&path, write_msr_csv(&msr)).with_context(|| format!("writing {}", path.display()))?;
                println!("measured pairs: {} of {}", msr.unmasked_count(), msr.n_sensors() * msr.n_incidents());
            }
        }
        Command::Selftest => {
            let checks = selftest::run_checks();
            for c in &checks {
                println!("{} {:<18} {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let failed = checks.iter().filter(|c| !c.pass).count();
            if failed > 0 {
                return Err(CheckFailure(failed).into());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let category = categorize(&e);
            eprintln!("dsmap: {} error: {e:#}", category.label());
            ExitCode::from(category.code() as u8)
        }
    }
}
