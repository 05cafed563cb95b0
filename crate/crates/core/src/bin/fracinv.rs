use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fracinv::io::{
    parse_config, run_direct, run_fbm_gen, run_r_omega, run_reconstruct, ExperimentConfig,
};

#[derive(Parser)]
#[command(name = "fracinv", version, about = "Forward simulation and source reconstruction for multi-term time-fractional diffusion-wave equations driven by fractional Brownian motion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the boundary ensemble and write ensemble.csv / ensemble.meta
    Simulate(Common),
    /// Tabulate R(omega) into r_omega.csv
    ROmega(Common),
    /// Run the full reconstruction pipeline
    Reconstruct(Common),
    /// Sample one fBm path into fbm.csv
    FbmGen(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment configuration (key = value lines)
    #[arg(long)]
    config: PathBuf,
    /// Master seed, overriding the file
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, overriding the file
    #[arg(long)]
    output: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> fracinv::Result<ExperimentConfig> {
        let mut config = parse_config(&self.config)?;
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(dir) = &self.output {
            config.output_dir = dir.clone();
        }
        Ok(config)
    }
}

type Failure = Box<(fracinv::Error, Option<ExperimentConfig>)>;

fn run(command: &Command) -> Result<(), Failure> {
    let common = match command {
        Command::Simulate(c) | Command::ROmega(c) | Command::Reconstruct(c) | Command::FbmGen(c) => c,
    };
    let config = common.load().map_err(|e| Box::new((e, None)))?;
    let fail = |e| Box::new((e, Some(config.clone())));
    let dir = config.output_dir.display();
    match command {
        Command::Simulate(_) => {
            let ens = run_direct(&config).map_err(fail)?;
            println!("wrote {} traces to {dir}/ensemble.csv", ens.paths());
        }
        Command::ROmega(_) => {
            let rows = run_r_omega(&config).map_err(fail)?;
            println!("wrote {} rows to {dir}/r_omega.csv", rows.len());
        }
        Command::Reconstruct(_) => {
            let rec = run_reconstruct(&config).map_err(fail)?;
            println!(
                "relative l2 error {:.4e} (solver {} after {} iterations); results in {dir}",
                rec.error(),
                if rec.report.converged { "converged" } else { "stopped" },
                rec.report.iterations
            );
        }
        Command::FbmGen(_) => {
            run_fbm_gen(&config).map_err(fail)?;
            println!("wrote {dir}/fbm.csv");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (e, config) = *failure;
            eprintln!("error: {e}");
            let mut source = std::error::Error::source(&e);
            while let Some(inner) = source {
                eprintln!("  caused by: {inner}");
                source = inner.source();
            }
            if let Some(c) = config {
                eprintln!("configuration:\n{}", c.to_config_string());
            }
            ExitCode::FAILURE
        }
    }
}
