use std::path::PathBuf;

use clap::{Parser, Subcommand};

use pa_sim::runner::config::{
    parse_block_specs, parse_f64_list, parse_kv, parse_scheme_list, parse_sweep,
    parse_usize_list, BfCdfParams, Experiment, ExperimentConfig, Fig2Params, SpeedTableParams,
    TrainParams,
};
use pa_sim::runner::run_experiment;

/// Link-level Monte Carlo simulator for predictor-antenna moving relays.
#[derive(Parser)]
#[command(name = "pa-sim", version, about)]
struct Cli {
    /// Flat key=value config file; command-line flags override file values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Master seed for all Monte Carlo streams.
    #[arg(long, global = true, value_name = "U64")]
    seed: Option<u64>,

    /// Worker thread count (default: one per core). Output bytes are
    /// identical for every worker count.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,

    /// Write the CSV here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximum supported speed per predictor horizon, carrier and delay.
    SpeedTable {
        /// Carrier frequencies in Hz, comma-separated (e.g. 1e9,2.68e9).
        #[arg(long)]
        freqs: Option<String>,
        /// Processing delays in seconds, comma-separated.
        #[arg(long)]
        delays: Option<String>,
    },
    /// E2E throughput of the urban schemes versus vehicle speed.
    Fig2 {
        /// Speeds in km/h: start:stop:step or a comma list.
        #[arg(long)]
        speeds: Option<String>,
        #[arg(long, value_name = "DB")]
        snr_db: Option<f64>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Received-power CDFs for beamforming under spatial mismatch.
    BfCdf {
        /// Base-station antenna counts, comma-separated.
        #[arg(long)]
        n: Option<String>,
        /// Beamformers: any of mrt,dft,zf,nocsit.
        #[arg(long)]
        schemes: Option<String>,
        /// Spatial mismatches in carrier wavelengths, comma-separated.
        #[arg(long)]
        mismatch_wl: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Last-wagon satellite throughput with best-combination pairing.
    Train {
        /// Receive antennas per wagon, comma-separated.
        #[arg(long)]
        m: Option<String>,
        /// Shadowing presets by name (e.g. average,infrequent-light).
        #[arg(long)]
        shadowing: Option<String>,
        /// Blockage patterns: none, a wagon index, or indices joined by '+'.
        #[arg(long)]
        block: Option<String>,
        /// Speeds in km/h: start:stop:step or a comma list.
        #[arg(long)]
        speeds: Option<String>,
        #[arg(long, value_name = "DB")]
        snr_db: Option<f64>,
        #[arg(long)]
        trials: Option<usize>,
    },
}

fn build_experiment(command: &Command) -> pa_sim::Result<Experiment> {
    Ok(match command {
        Command::SpeedTable { .. } => Experiment::SpeedTable(SpeedTableParams::default()),
        Command::Fig2 { .. } => Experiment::Fig2(Fig2Params::default()),
        Command::BfCdf { .. } => Experiment::BfCdf(BfCdfParams::default()),
        Command::Train { .. } => Experiment::Train(TrainParams::default()),
    })
}

fn apply_cli_flags(experiment: &mut Experiment, command: &Command) -> pa_sim::Result<()> {
    match (experiment, command) {
        (Experiment::SpeedTable(p), Command::SpeedTable { freqs, delays }) => {
            if let Some(v) = freqs {
                p.freqs_hz = parse_f64_list("--freqs", v)?;
            }
            if let Some(v) = delays {
                p.delays_s = parse_f64_list("--delays", v)?;
            }
        }
        (
            Experiment::Fig2(p),
            Command::Fig2 {
                speeds,
                snr_db,
                trials,
            },
        ) => {
            if let Some(v) = speeds {
                p.speeds_kmh = parse_sweep("--speeds", v)?;
            }
            if let Some(v) = snr_db {
                p.snr_db = *v;
            }
            if let Some(v) = trials {
                p.trials = *v;
            }
        }
        (
            Experiment::BfCdf(p),
            Command::BfCdf {
                n,
                schemes,
                mismatch_wl,
                trials,
            },
        ) => {
            if let Some(v) = n {
                p.antennas = parse_usize_list("--n", v)?;
            }
            if let Some(v) = schemes {
                p.schemes = parse_scheme_list("--schemes", v)?;
            }
            if let Some(v) = mismatch_wl {
                p.mismatch_wl = parse_f64_list("--mismatch-wl", v)?;
            }
            if let Some(v) = trials {
                p.trials = *v;
            }
        }
        (
            Experiment::Train(p),
            Command::Train {
                m,
                shadowing,
                block,
                speeds,
                snr_db,
                trials,
            },
        ) => {
            if let Some(v) = m {
                p.ras_per_wagon = parse_usize_list("--m", v)?;
            }
            if let Some(v) = shadowing {
                p.shadowing = v.split(',').map(|s| s.trim().to_string()).collect();
            }
            if let Some(v) = block {
                p.block = parse_block_specs("--block", v)?;
            }
            if let Some(v) = speeds {
                p.speeds_kmh = parse_sweep("--speeds", v)?;
            }
            if let Some(v) = snr_db {
                p.snr_db = *v;
            }
            if let Some(v) = trials {
                p.trials = *v;
            }
        }
        _ => unreachable!("experiment kind always matches the subcommand"),
    }
    Ok(())
}

fn run() -> pa_sim::Result<()> {
    let cli = Cli::parse();

    let file_map = match &cli.config {
        Some(path) => Some(parse_kv(&std::fs::read_to_string(path)?)?),
        None => None,
    };
    let experiment = build_experiment(&cli.command)?;
    let mut cfg = ExperimentConfig::from_sources(experiment, file_map.as_ref())?;
    apply_cli_flags(&mut cfg.experiment, &cli.command)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(workers) = cli.workers {
        cfg.workers = Some(workers);
    }

    let csv = run_experiment(&cfg)?;
    match &cli.out {
        Some(path) => std::fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
