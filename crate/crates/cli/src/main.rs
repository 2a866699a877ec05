use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fdelab::cli::{parse_config, run, Scenario, ScenarioConfig};

/// Retarded two-body simulations, torque diagnostics and delay spectra.
#[derive(Parser, Debug)]
#[command(name = "fdelab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Scenario config file (`key = value` lines, `#` comments).
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// End of the integration window in cfs.
    #[arg(long, global = true)]
    t_end: Option<f64>,

    /// Relative tolerance of the adaptive integrator
    #[arg(long, global = true)]
    rtol: Option<f64>,

    /// Absolute tolerance of the adaptive integrator
    #[arg(long, global = true)]
    atol: Option<f64>,

    /// Output directory for CSV files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Retarded (Liénard–Wiechert) hydrogen run.
    Simulate,
    /// Coulomb-force baseline run.
    Coulomb,
    /// Both runs plus the electron's orbit difference.
    Compare,
    /// Tangential force and torque on the electron.
    Torque,
    /// Torque-balance estimate.
    Balance,
    /// Roots of z² e^z + 1.
    Spectrum {
        /// Number of roots to write.
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Fixed-step error sweep on the retarded harmonic oscillator.
    Convergence,
}

fn configure(cli: &Cli) -> Result<ScenarioConfig, fdelab::cli::ConfigError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let bytes = std::fs::read(path).map_err(|e| fdelab::cli::ConfigError {
                line: None,
                message: format!("cannot read {}: {e}", path.display()),
            })?;
            parse_config(&bytes)?
        }
        None => ScenarioConfig::default(),
    };
    cfg.scenario = match cli.command {
        Command::Simulate => Scenario::HydrogenFde,
        Command::Coulomb => Scenario::HydrogenCoulomb,
        Command::Compare => Scenario::Compare,
        Command::Torque => Scenario::Torque,
        Command::Balance => Scenario::Balance,
        Command::Spectrum { .. } => Scenario::Spectrum,
        Command::Convergence => Scenario::Convergence,
    };
    if let Command::Spectrum { k_max: Some(k) } = cli.command {
        cfg.k_max = k;
    }
    if let Some(v) = cli.t_end {
        cfg.t_end = v;
    }
    if let Some(v) = cli.rtol {
        cfg.rtol = v;
    }
    if let Some(v) = cli.atol {
        cfg.atol = v;
    }
    if let Some(v) = &cli.out {
        cfg.out = v.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match configure(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            return ExitCode::from(2);
        }
    };
    match run(&cfg) {
        Ok(summary) => {
            for note in &summary.notes {
                println!("{note}");
            }
            for file in &summary.files {
                println!("wrote {}", file.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
