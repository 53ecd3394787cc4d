use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use epur_lab::experiments::{self, Neighborhood, Search};
use epur_lab::output::{self, Format};
use epur_lab::state_file::StateFile;
use epur_lab::{Outcome, Settings};
use serde_json::{json, Value};

/// Numerical tests of entropic uncertainty relations.
#[derive(Debug, Parser)]
#[command(name = "epur", version)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Fock truncation for generated squeezed states.
    #[arg(long, global = true, default_value_t = 64)]
    nmax: usize,
    /// Points of the marginal quadrature grids.
    #[arg(long, global = true, default_value_t = 2048)]
    grid_points: usize,
    /// Multiplier on the default grid half-width.
    #[arg(long, global = true, default_value_t = 1.0)]
    grid_extent: f64,
    /// Points per axis of the Wigner grid.
    #[arg(long, global = true, default_value_t = epur_core::relations::DEFAULT_WIGNER_POINTS)]
    wigner_points: usize,
    #[arg(long, global = true, default_value_t = 1.0)]
    hbar: f64,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Output directory; the table goes to stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also write an SVG plot.
    #[arg(long, global = true)]
    plot: bool,
    /// Slack tolerance in nats.
    #[arg(long, global = true, default_value_t = 1e-4)]
    tol: f64,
}

impl Common {
    fn settings(&self) -> Settings {
        Settings {
            nmax: self.nmax,
            hbar: self.hbar,
            seed: self.seed,
            tol: self.tol,
            grid_points: self.grid_points,
            extent_scale: self.grid_extent,
            wigner_points: self.wigner_points,
            ..Settings::default()
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Joint and marginal entropies of extremal passive states.
    PassiveScan {
        #[arg(long, default_value_t = 20)]
        max_photons: usize,
    },
    /// Tight relation on Haar-random pure states.
    RandomScan {
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// Tight relation near a squeezed vacuum.
    Neighborhood {
        /// Squeezing factor e^r.
        #[arg(long, default_value_t = 1.5)]
        s: f64,
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4)]
        theta: f64,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 500)]
        trials: u64,
        /// Dimension of the random perturbation.
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
    /// Concavity of the uncertainty functional along binary mixtures.
    Concavity {
        /// JSON file `[[state, state], ...]`; the built-in pairs otherwise.
        #[arg(long)]
        pairs: Option<PathBuf>,
        #[arg(long, default_value_t = 21)]
        lambdas: usize,
    },
    /// Restarted simplex search for a state violating the tight relation.
    Counterexample {
        #[arg(long, default_value_t = 6)]
        dim: usize,
        #[arg(long, default_value_t = 50)]
        restarts: u64,
        #[arg(long, default_value_t = 3000)]
        max_evals: usize,
    },
    /// Saturation sweep over rotated squeezed vacua.
    GaussianSaturation {
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<f64>>,
        #[arg(long, value_delimiter = ',')]
        theta: Option<Vec<f64>>,
    },
    /// Full relation report for a state file.
    Check { state: PathBuf },
}

fn run(cmd: &Command, s: &Settings) -> Result<(Outcome, Value)> {
    Ok(match cmd {
        Command::PassiveScan { max_photons } => {
            (experiments::passive_scan(*max_photons, s)?, json!({ "max_photons": max_photons }))
        }
        Command::RandomScan { trials, dim } => {
            (experiments::random_scan(*trials, *dim, s)?, json!({ "trials": trials, "dim": dim }))
        }
        Command::Neighborhood { s: sq, theta, eps, trials, dim } => {
            let p = Neighborhood {
                s: *sq,
                theta: *theta,
                eps: *eps,
                trials: *trials,
                dim: *dim,
            };
            (experiments::neighborhood(&p, s)?, serde_json::to_value(p)?)
        }
        Command::Concavity { pairs, lambdas } => {
            let list = match pairs {
                Some(path) => experiments::read_pairs(path)?,
                None => experiments::default_pairs(s.hbar)?,
            };
            (
                experiments::concavity(&list, *lambdas, s)?,
                json!({ "pairs": pairs, "lambdas": lambdas }),
            )
        }
        Command::Counterexample { dim, restarts, max_evals } => {
            let p = Search {
                dim: *dim,
                restarts: *restarts,
                max_evals: *max_evals,
            };
            (experiments::counterexample(&p, s)?, serde_json::to_value(p)?)
        }
        Command::GaussianSaturation { r, theta } => {
            let r = r.clone().unwrap_or_else(experiments::default_r_grid);
            let theta = theta.clone().unwrap_or_else(experiments::default_theta_grid);
            (experiments::gaussian_saturation(&r, &theta, s)?, json!({ "r": r, "theta": theta }))
        }
        Command::Check { state } => {
            let file = StateFile::read(state)?;
            (experiments::check(&file, s)?, json!({ "state": state }))
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let s = cli.common.settings();
    let result = run(&cli.command, &s).and_then(|(outcome, params)| {
        match &cli.common.out {
            Some(dir) => {
                for p in output::write_outcome(&outcome, dir, cli.common.format, cli.common.plot, &params, &s)? {
                    eprintln!("wrote {}", p.display());
                }
            }
            None => {
                output::write_table(&outcome, cli.common.format, std::io::stdout().lock())?;
                if cli.common.plot {
                    if let Some(plot) = &outcome.plot {
                        let path = format!("{}.svg", outcome.name);
                        std::fs::write(&path, plot.render())?;
                        eprintln!("wrote {path}");
                    }
                }
            }
        }
        Ok(outcome)
    });
    match result {
        Ok(outcome) if outcome.passed() => ExitCode::SUCCESS,
        Ok(outcome) => {
            let mut err = std::io::stderr().lock();
            let _ = writeln!(err, "{} violation(s):", outcome.violations.len());
            let _ = serde_json::to_writer_pretty(&mut err, &outcome.violations);
            let _ = writeln!(err);
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
