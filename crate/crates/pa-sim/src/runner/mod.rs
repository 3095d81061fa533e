//! Experiment orchestration: config parsing, seeded deterministic parallel
//! Monte Carlo, statistics and CSV emission for every supported experiment.
//!
//! Parallel sections collect per-trial values in trial order and reduce them
//! sequentially, so output bytes do not depend on the worker count.

pub mod config;
pub mod format;
pub mod rng;
pub mod stats;

use crate::beamforming::{power_cdf_experiment, PredictionMode};
use crate::channel::MultipathFieldParams;
use crate::error::{Result, SimError};
use crate::kinematics::{max_supported_speed, CarrierConfig, HorizonConstant};
use crate::link::{simulate_scheme, FramePlan, LinkConfig, SchemeKind};
use crate::train::{
    build_layout, simulate_train, simulate_train_baseline, TrainGeometry, TrainLinkConfig,
};

use config::{
    block_spec_name, BfCdfParams, Experiment, ExperimentConfig, Fig2Params, SpeedTableParams,
    TrainParams,
};
use format::fmt_sig6;
use stats::cdf_quantile_grid;

/// Run the configured experiment and return the complete CSV document.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<String> {
    match cfg.workers {
        None => run_dispatch(cfg),
        Some(n) => {
            if n == 0 {
                return Err(SimError::InvalidConfig("workers must be at least 1".into()));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| SimError::InvalidConfig(format!("worker pool: {e}")))?;
            pool.install(|| run_dispatch(cfg))
        }
    }
}

fn run_dispatch(cfg: &ExperimentConfig) -> Result<String> {
    let (columns, rows, extra_header) = match &cfg.experiment {
        Experiment::SpeedTable(p) => run_speed_table(p)?,
        Experiment::Fig2(p) => run_fig2(p, cfg.seed)?,
        Experiment::BfCdf(p) => run_bf_cdf(p, cfg.seed)?,
        Experiment::Train(p) => run_train(p, cfg.seed)?,
    };
    Ok(csv_document(cfg, columns, &rows, extra_header))
}

fn csv_document(
    cfg: &ExperimentConfig,
    columns: &[&str],
    rows: &[Vec<String>],
    extra_header: Vec<(String, String)>,
) -> String {
    let mut doc = String::new();
    doc.push_str(&format!("# pa-sim {}\n", env!("CARGO_PKG_VERSION")));
    doc.push_str(&format!("# experiment = {}\n", cfg.experiment.name()));
    doc.push_str(&format!("# seed = {}\n", cfg.seed));
    let mut params = cfg.experiment.echo();
    params.extend(extra_header);
    params.sort();
    for (k, v) in params {
        doc.push_str(&format!("# {k} = {v}\n"));
    }
    doc.push_str(&columns.join(","));
    doc.push('\n');
    for row in rows {
        debug_assert_eq!(row.len(), columns.len());
        doc.push_str(&row.join(","));
        doc.push('\n');
    }
    doc
}

type Rows = (&'static [&'static str], Vec<Vec<String>>, Vec<(String, String)>);

fn run_speed_table(p: &SpeedTableParams) -> Result<Rows> {
    let mut rows = Vec::new();
    for &freq in &p.freqs_hz {
        let carrier = CarrierConfig::new(freq)?;
        for &delay in &p.delays_s {
            for (name, horizon) in [("pa", HorizonConstant::PA), ("kalman", HorizonConstant::KALMAN)]
            {
                let v = max_supported_speed(&carrier, delay, horizon)?;
                rows.push(vec![
                    fmt_sig6(freq),
                    fmt_sig6(delay),
                    name.to_string(),
                    fmt_sig6(v),
                ]);
            }
        }
    }
    Ok((&["freq_hz", "delay_s", "predictor", "v_max_kmh"], rows, Vec::new()))
}

fn run_fig2(p: &Fig2Params, seed: u64) -> Result<Rows> {
    let link = LinkConfig {
        carrier: CarrierConfig::new(p.carrier_frequency_hz)?,
        antenna_separation_wl: p.antenna_separation_wl,
        min_processing_delay_s: p.min_processing_delay_s,
        snr_linear: 10f64.powf(p.snr_db / 10.0),
        frame: FramePlan {
            slot_duration_s: p.slot_duration_s,
            symbols_per_slot: p.symbols_per_slot,
            codeword_channel_uses: p.codeword_channel_uses,
        },
        simo_correlated: p.simo_correlated,
        fd_duplicate_power: p.fd_duplicate_power,
    };
    let mut rows = Vec::new();
    for kind in SchemeKind::ALL {
        for &v_kmh in &p.speeds_kmh {
            let est = simulate_scheme(kind, v_kmh / 3.6, &link, p.trials, seed)?;
            rows.push(vec![
                kind.name().to_string(),
                fmt_sig6(v_kmh),
                fmt_sig6(est.throughput_bps),
                fmt_sig6(est.throughput_bps - est.ci95_bps),
                fmt_sig6(est.throughput_bps + est.ci95_bps),
            ]);
        }
    }
    Ok((
        &["scheme", "speed_kmh", "throughput_bps", "ci95_low", "ci95_high"],
        rows,
        Vec::new(),
    ))
}

fn run_bf_cdf(p: &BfCdfParams, seed: u64) -> Result<Rows> {
    let quantiles = cdf_quantile_grid();
    let mut rows = Vec::new();
    for &kind in &p.schemes {
        for &n in &p.antennas {
            let params = MultipathFieldParams {
                num_paths: p.num_paths,
                bs_antennas: n,
                array_spacing_wavelengths: p.array_spacing_wl,
                bs_angular_spread_deg: p.bs_angular_spread_deg,
            };
            for &mismatch in &p.mismatch_wl {
                let cdf = power_cdf_experiment(
                    &params,
                    kind,
                    PredictionMode::Mismatched,
                    mismatch,
                    p.trials,
                    seed,
                )?;
                for &q in &quantiles {
                    let power = cdf.quantile(q).max(1e-300);
                    rows.push(vec![
                        kind.name().to_string(),
                        n.to_string(),
                        fmt_sig6(mismatch),
                        fmt_sig6(q),
                        fmt_sig6(10.0 * power.log10()),
                    ]);
                }
            }
        }
    }
    Ok((
        &["scheme", "n", "mismatch_wl", "quantile", "power_db"],
        rows,
        Vec::new(),
    ))
}

fn run_train(p: &TrainParams, seed: u64) -> Result<Rows> {
    let presets = config::load_presets(p.presets_path.as_deref())?;
    let carrier = CarrierConfig::new(p.carrier_frequency_hz)?;
    let link = TrainLinkConfig {
        snr_linear: 10f64.powf(p.snr_db / 10.0),
        frame: FramePlan {
            slot_duration_s: p.slot_duration_s,
            symbols_per_slot: p.symbols_per_slot,
            codeword_channel_uses: p.codeword_channel_uses,
        },
        min_delay_s: p.min_processing_delay_s,
    };
    let mut rows = Vec::new();
    // Resolved shadowing parameters go into the header so a run is fully
    // reproducible from its output even with preset-file overrides.
    let mut extra_header = Vec::new();
    for name in &p.shadowing {
        if let Some(sr) = presets.get(name) {
            extra_header.push((format!("train.preset.{name}.b0"), fmt_sig6(sr.b0)));
            extra_header.push((format!("train.preset.{name}.m"), fmt_sig6(sr.m)));
            extra_header.push((format!("train.preset.{name}.omega"), fmt_sig6(sr.omega)));
        }
    }
    for &m in &p.ras_per_wagon {
        let geometry = TrainGeometry {
            num_wagons: p.num_wagons,
            ras_per_wagon: m,
            span_wavelengths: p.span_wl,
            inter_wagon_gap_m: p.gap_m,
        };
        for shadowing in &p.shadowing {
            let preset = presets.get(shadowing).ok_or_else(|| {
                SimError::InvalidConfig(format!(
                    "unknown shadowing preset '{shadowing}' (available: {})",
                    presets.keys().cloned().collect::<Vec<_>>().join(", ")
                ))
            })?;
            let baseline = simulate_train_baseline(preset, &link, p.trials, seed)?;
            for block in &p.block {
                let layout = build_layout(&geometry, &carrier, block)?;
                let blocked_name = block_spec_name(block);
                for &v_kmh in &p.speeds_kmh {
                    let point = simulate_train(
                        &layout,
                        p.num_wagons,
                        v_kmh / 3.6,
                        preset,
                        &link,
                        p.trials,
                        seed,
                    )?;
                    rows.push(vec![
                        m.to_string(),
                        shadowing.clone(),
                        blocked_name.clone(),
                        fmt_sig6(v_kmh),
                        "pa-best".to_string(),
                        fmt_sig6(point.estimate.throughput_bps),
                        fmt_sig6(point.estimate.ci95_bps),
                    ]);
                    rows.push(vec![
                        m.to_string(),
                        shadowing.clone(),
                        blocked_name.clone(),
                        fmt_sig6(v_kmh),
                        "simo-mrc".to_string(),
                        fmt_sig6(baseline.throughput_bps),
                        fmt_sig6(baseline.ci95_bps),
                    ]);
                }
            }
        }
    }
    Ok((
        &["m", "shadowing", "blocked", "speed_kmh", "scheme", "throughput_bps", "ci95"],
        rows,
        extra_header,
    ))
}
