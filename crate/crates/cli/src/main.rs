use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, ValueEnum};
use kksampling_cli::{exit, output, run, ExperimentConfig};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Synthesize,
    Verify,
    Converge,
    Reproduce,
    Compare,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Synthesize => "synthesize",
            Command::Verify => "verify",
            Command::Converge => "converge",
            Command::Reproduce => "reproduce",
            Command::Compare => "compare",
        }
    }
}

/// Kantorovich-type sampling experiments.
#[derive(Debug, Parser)]
#[command(version, about)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// TOML configuration; defaults apply to every missing key.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Directory for the JSON and CSV outputs.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

fn execute(cli: &Cli) -> anyhow::Result<bool> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let cfg = match &cli.config {
        Some(path) => ExperimentConfig::from_path(path).with_context(|| format!("in {}", path.display()))?,
        None => ExperimentConfig::default(),
    };
    let report = run(cli.command.name(), &cfg)?;
    for line in &report.lines {
        println!("{line}");
    }
    let written = output::write_report(&cli.out, &cfg.output.name, &report)
        .with_context(|| format!("writing to {}", cli.out.display()))?;
    println!("wrote {}", written.json.display());
    if let Some(csv) = &written.csv {
        println!("wrote {}", csv.display());
    }
    println!("{}: {}", report.command, if report.passed { "PASS" } else { "FAIL" });
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(&cli) {
        Ok(true) => exit::PASS,
        Ok(false) => exit::ACCEPTANCE_FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit::ERROR
        }
    };
    ExitCode::from(code as u8)
}
