//! `quatsamp`: reconstruction experiments for quaternion Fourier sampling.
//!
//! Exit codes: 0 success, 1 configuration or i/o error, 2 failed check.

use quatsamp_cli::{config, gridio, runner, verify};

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quatsamp_core::quadrature::QuadratureRule;
use quatsamp_core::spectra::SpectrumKind;

#[derive(Parser)]
#[command(
    name = "quatsamp",
    version,
    about = "Quaternion Fourier transform sampling experiments"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run a configuration-driven reconstruction experiment.
    Run {
        /// Path to a flat JSON config file.
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the verification suite and print (or write) the JSON report.
    Verify {
        /// Write the report to this path instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Synthesize a seeded test signal onto its Nyquist lattice and write
    /// it as a QG2D binary grid.
    Synth {
        /// Spectrum kind: gauss | poly | random-smooth.
        #[arg(long)]
        kind: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        sigma: f64,
        /// Points per axis.
        #[arg(long)]
        grid: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

/// `QUATSAMP_THREADS` caps the rayon pool; unset or 0 means default.
fn init_threads() {
    if let Ok(v) = std::env::var("QUATSAMP_THREADS") {
        if let Ok(n) = v.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
        }
    }
}

fn main() -> ExitCode {
    init_threads();
    let cli = Cli::parse();
    match cli.cmd {
        Cmd::Run { config } => {
            let text = match fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("cannot read {}: {e}", config.display());
                    return ExitCode::from(1);
                }
            };
            let cfg = match config::parse_config(&text) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(1);
                }
            };
            match runner::run(&cfg) {
                Ok(report) => {
                    println!("{}", report.to_json());
                    if report.ok {
                        ExitCode::SUCCESS
                    } else {
                        ExitCode::from(2)
                    }
                }
                Err(runner::RunError::Io(e)) => {
                    eprintln!("i/o error: {e}");
                    ExitCode::from(1)
                }
                Err(runner::RunError::Inadmissible(msg)) => {
                    eprintln!("check failure: {msg}");
                    ExitCode::from(2)
                }
            }
        }
        Cmd::Verify { json } => {
            let report = verify::verify();
            let text = report.to_json();
            match json {
                Some(path) => {
                    if let Err(e) = fs::write(&path, &text) {
                        eprintln!("cannot write {}: {e}", path.display());
                        return ExitCode::from(1);
                    }
                }
                None => println!("{text}"),
            }
            if report.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Cmd::Synth {
            kind,
            seed,
            sigma,
            grid,
            out,
        } => {
            let kind = match kind.as_str() {
                "gauss" => SpectrumKind::Gauss,
                "poly" => SpectrumKind::Poly,
                "random-smooth" => SpectrumKind::RandomSmooth,
                "zero" => SpectrumKind::Zero,
                other => {
                    eprintln!("config error: unknown spectrum kind `{other}`");
                    return ExitCode::from(1);
                }
            };
            if !sigma.is_finite() || sigma <= 0.0 || grid == 0 {
                eprintln!("config error: sigma must be positive and grid nonzero");
                return ExitCode::from(1);
            }
            let spec = runner::synth_spectrum(kind, seed, sigma);
            let g = gridio::synth_grid(&spec, grid, &QuadratureRule::default());
            let mut file = match fs::File::create(&out) {
                Ok(f) => f,
                Err(e) => {
                    eprintln!("cannot create {}: {e}", out.display());
                    return ExitCode::from(1);
                }
            };
            if let Err(e) = gridio::write_grid(&mut file, &g) {
                eprintln!("cannot write {}: {e}", out.display());
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
    }
}
