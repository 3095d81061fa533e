//! Flat key-value configuration with dotted section names, CLI-overridable,
//! echoed verbatim into every CSV header. Unknown keys are rejected with a
//! diagnostic naming the offending key.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use crate::beamforming::BfKind;
use crate::channel::ShadowedRiceParams;
use crate::error::{Result, SimError};
use crate::runner::format::fmt_sig6;

/// Shadowing presets shipped with the binary; values transcribed from the
/// land-mobile-satellite channel reference.
pub const EMBEDDED_PRESETS: &str = include_str!("../../presets/shadowed_rice.kv");

/// Parse `key = value` lines; '#' starts a comment, blank lines are ignored.
pub fn parse_kv(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            SimError::InvalidConfig(format!("line {}: expected 'key = value'", lineno + 1))
        })?;
        let key = key.trim().to_string();
        if key.is_empty() {
            return Err(SimError::InvalidConfig(format!(
                "line {}: empty key",
                lineno + 1
            )));
        }
        map.insert(key, value.trim().to_string());
    }
    Ok(map)
}

pub fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse()
        .map_err(|_| SimError::InvalidConfig(format!("{key}: '{v}' is not a number")))
}

pub fn parse_usize(key: &str, v: &str) -> Result<usize> {
    v.parse()
        .map_err(|_| SimError::InvalidConfig(format!("{key}: '{v}' is not a nonnegative integer")))
}

pub fn parse_u64(key: &str, v: &str) -> Result<u64> {
    v.parse()
        .map_err(|_| SimError::InvalidConfig(format!("{key}: '{v}' is not a u64")))
}

pub fn parse_u32(key: &str, v: &str) -> Result<u32> {
    v.parse()
        .map_err(|_| SimError::InvalidConfig(format!("{key}: '{v}' is not a u32")))
}

pub fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(SimError::InvalidConfig(format!(
            "{key}: '{v}' is not a boolean"
        ))),
    }
}

pub fn parse_f64_list(key: &str, v: &str) -> Result<Vec<f64>> {
    let items: Result<Vec<f64>> = v.split(',').map(|s| parse_f64(key, s.trim())).collect();
    let items = items?;
    if items.is_empty() {
        return Err(SimError::InvalidConfig(format!("{key}: empty list")));
    }
    Ok(items)
}

pub fn parse_usize_list(key: &str, v: &str) -> Result<Vec<usize>> {
    v.split(',').map(|s| parse_usize(key, s.trim())).collect()
}

/// Either `start:stop:step` (inclusive) or a comma-separated list.
pub fn parse_sweep(key: &str, v: &str) -> Result<Vec<f64>> {
    if !v.contains(':') {
        return parse_f64_list(key, v);
    }
    let parts: Vec<&str> = v.split(':').collect();
    if parts.len() != 3 {
        return Err(SimError::InvalidConfig(format!(
            "{key}: sweep must be start:stop:step, got '{v}'"
        )));
    }
    let start = parse_f64(key, parts[0])?;
    let stop = parse_f64(key, parts[1])?;
    let step = parse_f64(key, parts[2])?;
    if !(step > 0.0) || stop < start {
        return Err(SimError::InvalidConfig(format!(
            "{key}: sweep '{v}' needs stop >= start and step > 0"
        )));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| start + i as f64 * step).collect())
}

/// Blockage patterns: comma-separated items, each `none` or wagon indices
/// joined by '+' (e.g. `none,9,1+9`).
pub fn parse_block_specs(key: &str, v: &str) -> Result<Vec<BTreeSet<usize>>> {
    v.split(',')
        .map(|item| {
            let item = item.trim();
            if item == "none" {
                Ok(BTreeSet::new())
            } else {
                item.split('+').map(|w| parse_usize(key, w.trim())).collect()
            }
        })
        .collect()
}

pub fn block_spec_name(set: &BTreeSet<usize>) -> String {
    if set.is_empty() {
        "none".to_string()
    } else {
        set.iter()
            .map(|w| w.to_string())
            .collect::<Vec<_>>()
            .join("+")
    }
}

pub fn parse_scheme_list(key: &str, v: &str) -> Result<Vec<BfKind>> {
    v.split(',')
        .map(|s| {
            BfKind::parse(s.trim())
                .map_err(|e| SimError::InvalidConfig(format!("{key}: {e}")))
        })
        .collect()
}

fn fmt_f64_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| fmt_sig6(x)).collect::<Vec<_>>().join(",")
}

fn fmt_usize_list(xs: &[usize]) -> String {
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Named shadowing presets, from the embedded table plus an optional
/// user-provided file (user entries override embedded ones).
pub fn load_presets(extra: Option<&Path>) -> Result<BTreeMap<String, ShadowedRiceParams>> {
    let mut raw = parse_kv(EMBEDDED_PRESETS)?;
    if let Some(path) = extra {
        let text = std::fs::read_to_string(path)?;
        raw.extend(parse_kv(&text)?);
    }
    let mut fields: BTreeMap<String, BTreeMap<String, f64>> = BTreeMap::new();
    for (key, value) in &raw {
        let (name, field) = key.rsplit_once('.').ok_or_else(|| {
            SimError::InvalidConfig(format!("preset key '{key}' must be name.field"))
        })?;
        fields
            .entry(name.to_string())
            .or_default()
            .insert(field.to_string(), parse_f64(key, value)?);
    }
    let mut presets = BTreeMap::new();
    for (name, f) in fields {
        if let Some(unknown) = f.keys().find(|k| !["b0", "m", "omega"].contains(&k.as_str())) {
            return Err(SimError::InvalidConfig(format!(
                "preset '{name}': unknown field '{unknown}'"
            )));
        }
        let get = |field: &str| {
            f.get(field).copied().ok_or_else(|| {
                SimError::InvalidConfig(format!("preset '{name}' missing field '{field}'"))
            })
        };
        presets.insert(
            name.clone(),
            ShadowedRiceParams::new(get("b0")?, get("m")?, get("omega")?)?,
        );
    }
    Ok(presets)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpeedTableParams {
    pub freqs_hz: Vec<f64>,
    pub delays_s: Vec<f64>,
}

impl Default for SpeedTableParams {
    fn default() -> Self {
        Self {
            freqs_hz: vec![1e9, 2.68e9, 4e9, 6e9],
            delays_s: vec![1e-3, 3e-3, 5e-3, 8e-3],
        }
    }
}

impl SpeedTableParams {
    pub const SECTION: &'static str = "speed_table";

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let full = |k: &str| format!("{}.{k}", Self::SECTION);
        match key {
            "freqs" => self.freqs_hz = parse_f64_list(&full(key), value)?,
            "delays" => self.delays_s = parse_f64_list(&full(key), value)?,
            _ => return Err(unknown_key(&full(key))),
        }
        Ok(())
    }

    pub fn echo(&self) -> Vec<(String, String)> {
        vec![
            ("speed_table.freqs".into(), fmt_f64_list(&self.freqs_hz)),
            ("speed_table.delays".into(), fmt_f64_list(&self.delays_s)),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Params {
    pub speeds_kmh: Vec<f64>,
    pub snr_db: f64,
    pub trials: usize,
    pub carrier_frequency_hz: f64,
    pub antenna_separation_wl: f64,
    pub min_processing_delay_s: f64,
    pub slot_duration_s: f64,
    pub symbols_per_slot: u32,
    pub codeword_channel_uses: f64,
    pub simo_correlated: bool,
    pub fd_duplicate_power: bool,
}

impl Default for Fig2Params {
    fn default() -> Self {
        Self {
            speeds_kmh: parse_sweep("fig2.speeds", "0:300:5").unwrap(),
            snr_db: 21.0,
            trials: 20_000,
            carrier_frequency_hz: 2.68e9,
            antenna_separation_wl: 1.5,
            min_processing_delay_s: 5e-3,
            slot_duration_s: 1e-3,
            symbols_per_slot: 14,
            codeword_channel_uses: 1e4,
            simo_correlated: false,
            fd_duplicate_power: false,
        }
    }
}

impl Fig2Params {
    pub const SECTION: &'static str = "fig2";

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let full = |k: &str| format!("{}.{k}", Self::SECTION);
        match key {
            "speeds" => self.speeds_kmh = parse_sweep(&full(key), value)?,
            "snr_db" => self.snr_db = parse_f64(&full(key), value)?,
            "trials" => self.trials = parse_usize(&full(key), value)?,
            "carrier_freq_hz" => self.carrier_frequency_hz = parse_f64(&full(key), value)?,
            "antenna_sep_wl" => self.antenna_separation_wl = parse_f64(&full(key), value)?,
            "min_delay_s" => self.min_processing_delay_s = parse_f64(&full(key), value)?,
            "slot_s" => self.slot_duration_s = parse_f64(&full(key), value)?,
            "symbols_per_slot" => self.symbols_per_slot = parse_u32(&full(key), value)?,
            "codeword_uses" => self.codeword_channel_uses = parse_f64(&full(key), value)?,
            "simo_correlated" => self.simo_correlated = parse_bool(&full(key), value)?,
            "fd_duplicate_power" => self.fd_duplicate_power = parse_bool(&full(key), value)?,
            _ => return Err(unknown_key(&full(key))),
        }
        Ok(())
    }

    pub fn echo(&self) -> Vec<(String, String)> {
        vec![
            ("fig2.speeds".into(), fmt_f64_list(&self.speeds_kmh)),
            ("fig2.snr_db".into(), fmt_sig6(self.snr_db)),
            ("fig2.trials".into(), self.trials.to_string()),
            (
                "fig2.carrier_freq_hz".into(),
                fmt_sig6(self.carrier_frequency_hz),
            ),
            (
                "fig2.antenna_sep_wl".into(),
                fmt_sig6(self.antenna_separation_wl),
            ),
            (
                "fig2.min_delay_s".into(),
                fmt_sig6(self.min_processing_delay_s),
            ),
            ("fig2.slot_s".into(), fmt_sig6(self.slot_duration_s)),
            (
                "fig2.symbols_per_slot".into(),
                self.symbols_per_slot.to_string(),
            ),
            (
                "fig2.codeword_uses".into(),
                fmt_sig6(self.codeword_channel_uses),
            ),
            (
                "fig2.simo_correlated".into(),
                self.simo_correlated.to_string(),
            ),
            (
                "fig2.fd_duplicate_power".into(),
                self.fd_duplicate_power.to_string(),
            ),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BfCdfParams {
    pub antennas: Vec<usize>,
    pub schemes: Vec<BfKind>,
    pub mismatch_wl: Vec<f64>,
    pub trials: usize,
    pub num_paths: usize,
    pub array_spacing_wl: f64,
    pub bs_angular_spread_deg: f64,
}

impl Default for BfCdfParams {
    fn default() -> Self {
        Self {
            antennas: vec![32, 128],
            schemes: vec![BfKind::Mrt, BfKind::Dft, BfKind::NoCsit],
            mismatch_wl: vec![0.0, 0.16, 1.62],
            trials: 10_000,
            num_paths: 200,
            array_spacing_wl: 0.5,
            bs_angular_spread_deg: 180.0,
        }
    }
}

impl BfCdfParams {
    pub const SECTION: &'static str = "bf_cdf";

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let full = |k: &str| format!("{}.{k}", Self::SECTION);
        match key {
            "n" => self.antennas = parse_usize_list(&full(key), value)?,
            "schemes" => self.schemes = parse_scheme_list(&full(key), value)?,
            "mismatch_wl" => self.mismatch_wl = parse_f64_list(&full(key), value)?,
            "trials" => self.trials = parse_usize(&full(key), value)?,
            "num_paths" => self.num_paths = parse_usize(&full(key), value)?,
            "array_spacing_wl" => self.array_spacing_wl = parse_f64(&full(key), value)?,
            "bs_angular_spread_deg" => {
                self.bs_angular_spread_deg = parse_f64(&full(key), value)?
            }
            _ => return Err(unknown_key(&full(key))),
        }
        Ok(())
    }

    pub fn echo(&self) -> Vec<(String, String)> {
        vec![
            ("bf_cdf.n".into(), fmt_usize_list(&self.antennas)),
            (
                "bf_cdf.schemes".into(),
                self.schemes
                    .iter()
                    .map(|s| s.name())
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("bf_cdf.mismatch_wl".into(), fmt_f64_list(&self.mismatch_wl)),
            ("bf_cdf.trials".into(), self.trials.to_string()),
            ("bf_cdf.num_paths".into(), self.num_paths.to_string()),
            (
                "bf_cdf.array_spacing_wl".into(),
                fmt_sig6(self.array_spacing_wl),
            ),
            (
                "bf_cdf.bs_angular_spread_deg".into(),
                fmt_sig6(self.bs_angular_spread_deg),
            ),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainParams {
    pub ras_per_wagon: Vec<usize>,
    pub shadowing: Vec<String>,
    pub block: Vec<BTreeSet<usize>>,
    pub speeds_kmh: Vec<f64>,
    pub snr_db: f64,
    pub trials: usize,
    pub num_wagons: usize,
    pub span_wl: f64,
    pub gap_m: f64,
    pub min_processing_delay_s: f64,
    pub carrier_frequency_hz: f64,
    pub slot_duration_s: f64,
    pub symbols_per_slot: u32,
    pub codeword_channel_uses: f64,
    pub presets_path: Option<PathBuf>,
}

impl Default for TrainParams {
    fn default() -> Self {
        Self {
            ras_per_wagon: vec![4, 10],
            shadowing: vec!["average".into(), "infrequent-light".into()],
            block: vec![BTreeSet::new(), [9].into_iter().collect()],
            speeds_kmh: parse_sweep("train.speeds", "0:500:10").unwrap(),
            snr_db: 26.0,
            trials: 20_000,
            num_wagons: 10,
            span_wl: 10.0,
            gap_m: 0.2,
            min_processing_delay_s: 10e-3,
            carrier_frequency_hz: 2.68e9,
            slot_duration_s: 1e-3,
            symbols_per_slot: 14,
            codeword_channel_uses: 1e4,
            presets_path: None,
        }
    }
}

impl TrainParams {
    pub const SECTION: &'static str = "train";

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        let full = |k: &str| format!("{}.{k}", Self::SECTION);
        match key {
            "m" => self.ras_per_wagon = parse_usize_list(&full(key), value)?,
            "shadowing" => {
                self.shadowing = value.split(',').map(|s| s.trim().to_string()).collect()
            }
            "block" => self.block = parse_block_specs(&full(key), value)?,
            "speeds" => self.speeds_kmh = parse_sweep(&full(key), value)?,
            "snr_db" => self.snr_db = parse_f64(&full(key), value)?,
            "trials" => self.trials = parse_usize(&full(key), value)?,
            "wagons" => self.num_wagons = parse_usize(&full(key), value)?,
            "span_wl" => self.span_wl = parse_f64(&full(key), value)?,
            "gap_m" => self.gap_m = parse_f64(&full(key), value)?,
            "min_delay_s" => self.min_processing_delay_s = parse_f64(&full(key), value)?,
            "carrier_freq_hz" => self.carrier_frequency_hz = parse_f64(&full(key), value)?,
            "slot_s" => self.slot_duration_s = parse_f64(&full(key), value)?,
            "symbols_per_slot" => self.symbols_per_slot = parse_u32(&full(key), value)?,
            "codeword_uses" => self.codeword_channel_uses = parse_f64(&full(key), value)?,
            "presets_path" => self.presets_path = Some(PathBuf::from(value)),
            _ => return Err(unknown_key(&full(key))),
        }
        Ok(())
    }

    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("train.m".into(), fmt_usize_list(&self.ras_per_wagon)),
            ("train.shadowing".into(), self.shadowing.join(",")),
            (
                "train.block".into(),
                self.block
                    .iter()
                    .map(block_spec_name)
                    .collect::<Vec<_>>()
                    .join(","),
            ),
            ("train.speeds".into(), fmt_f64_list(&self.speeds_kmh)),
            ("train.snr_db".into(), fmt_sig6(self.snr_db)),
            ("train.trials".into(), self.trials.to_string()),
            ("train.wagons".into(), self.num_wagons.to_string()),
            ("train.span_wl".into(), fmt_sig6(self.span_wl)),
            ("train.gap_m".into(), fmt_sig6(self.gap_m)),
            (
                "train.min_delay_s".into(),
                fmt_sig6(self.min_processing_delay_s),
            ),
            (
                "train.carrier_freq_hz".into(),
                fmt_sig6(self.carrier_frequency_hz),
            ),
            ("train.slot_s".into(), fmt_sig6(self.slot_duration_s)),
            (
                "train.symbols_per_slot".into(),
                self.symbols_per_slot.to_string(),
            ),
            (
                "train.codeword_uses".into(),
                fmt_sig6(self.codeword_channel_uses),
            ),
        ];
        if let Some(p) = &self.presets_path {
            out.push(("train.presets_path".into(), p.display().to_string()));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Experiment {
    SpeedTable(SpeedTableParams),
    Fig2(Fig2Params),
    BfCdf(BfCdfParams),
    Train(TrainParams),
}

impl Experiment {
    pub fn name(&self) -> &'static str {
        match self {
            Experiment::SpeedTable(_) => "speed-table",
            Experiment::Fig2(_) => "fig2",
            Experiment::BfCdf(_) => "bf-cdf",
            Experiment::Train(_) => "train",
        }
    }

    fn section(&self) -> &'static str {
        match self {
            Experiment::SpeedTable(_) => SpeedTableParams::SECTION,
            Experiment::Fig2(_) => Fig2Params::SECTION,
            Experiment::BfCdf(_) => BfCdfParams::SECTION,
            Experiment::Train(_) => TrainParams::SECTION,
        }
    }

    fn apply(&mut self, key: &str, value: &str) -> Result<()> {
        match self {
            Experiment::SpeedTable(p) => p.apply(key, value),
            Experiment::Fig2(p) => p.apply(key, value),
            Experiment::BfCdf(p) => p.apply(key, value),
            Experiment::Train(p) => p.apply(key, value),
        }
    }

    pub fn echo(&self) -> Vec<(String, String)> {
        match self {
            Experiment::SpeedTable(p) => p.echo(),
            Experiment::Fig2(p) => p.echo(),
            Experiment::BfCdf(p) => p.echo(),
            Experiment::Train(p) => p.echo(),
        }
    }
}

/// A fully resolved experiment invocation. The worker count is a scheduling
/// hint only; it is deliberately not echoed into output headers because the
/// emitted CSV is identical for every worker count.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub workers: Option<usize>,
    pub experiment: Experiment,
}

fn unknown_key(key: &str) -> SimError {
    SimError::InvalidConfig(format!("unknown config key '{key}'"))
}

/// Validate a key that belongs to an inactive section by applying it to a
/// default instance; value errors and unknown field names both surface.
fn validate_foreign(section: &str, key: &str, value: &str) -> Result<()> {
    match section {
        SpeedTableParams::SECTION => SpeedTableParams::default().apply(key, value),
        Fig2Params::SECTION => Fig2Params::default().apply(key, value),
        BfCdfParams::SECTION => BfCdfParams::default().apply(key, value),
        TrainParams::SECTION => TrainParams::default().apply(key, value),
        _ => Err(unknown_key(&format!("{section}.{key}"))),
    }
}

impl ExperimentConfig {
    /// Defaults for one experiment, then file overrides. A config file may
    /// carry sections for all experiments; only the active section is
    /// applied, the rest are validated.
    pub fn from_sources(
        mut experiment: Experiment,
        file: Option<&BTreeMap<String, String>>,
    ) -> Result<Self> {
        let mut cfg = ExperimentConfig {
            seed: 0,
            workers: None,
            experiment: Experiment::SpeedTable(SpeedTableParams::default()),
        };
        if let Some(map) = file {
            for (key, value) in map {
                match key.as_str() {
                    "seed" => cfg.seed = parse_u64(key, value)?,
                    "workers" => cfg.workers = Some(parse_usize(key, value)?),
                    _ => {
                        let (section, rest) = key
                            .split_once('.')
                            .ok_or_else(|| unknown_key(key))?;
                        if section == experiment.section() {
                            experiment.apply(rest, value)?;
                        } else {
                            validate_foreign(section, rest, value)?;
                        }
                    }
                }
            }
        }
        cfg.experiment = experiment;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_parsing() {
        let m = parse_kv("a.b = 1\n# comment\n  c = hello # trailing\n\n").unwrap();
        assert_eq!(m["a.b"], "1");
        assert_eq!(m["c"], "hello");
        assert!(parse_kv("novalue\n").is_err());
    }

    #[test]
    fn sweep_parsing() {
        assert_eq!(parse_sweep("k", "0:300:100").unwrap(), vec![0.0, 100.0, 200.0, 300.0]);
        assert_eq!(parse_sweep("k", "30,60").unwrap(), vec![30.0, 60.0]);
        assert_eq!(parse_sweep("k", "0:1:0.25").unwrap().len(), 5);
        assert!(parse_sweep("k", "5:1:1").is_err());
        assert!(parse_sweep("k", "1:5:0").is_err());
    }

    #[test]
    fn block_parsing() {
        let b = parse_block_specs("k", "none,9,1+9").unwrap();
        assert_eq!(b.len(), 3);
        assert!(b[0].is_empty());
        assert!(b[1].contains(&9));
        assert_eq!(b[2].len(), 2);
        assert_eq!(block_spec_name(&b[2]), "1+9");
    }

    #[test]
    fn embedded_presets_load() {
        let p = load_presets(None).unwrap();
        let avg = &p["average"];
        assert_eq!((avg.b0, avg.m, avg.omega), (0.126, 10.1, 0.835));
        let light = &p["infrequent-light"];
        assert_eq!((light.b0, light.m, light.omega), (0.158, 19.4, 1.29));
    }

    #[test]
    fn unknown_keys_rejected_by_name() {
        let map = parse_kv("fig2.snr_db = 21\nfig2.bogus = 1\n").unwrap();
        let err = ExperimentConfig::from_sources(
            Experiment::Fig2(Fig2Params::default()),
            Some(&map),
        )
        .unwrap_err();
        assert!(err.to_string().contains("fig2.bogus"), "{err}");
    }

    #[test]
    fn foreign_sections_validated_not_applied() {
        let map = parse_kv("train.snr_db = 26\nfig2.snr_db = 7\n").unwrap();
        let cfg = ExperimentConfig::from_sources(
            Experiment::Fig2(Fig2Params::default()),
            Some(&map),
        )
        .unwrap();
        match cfg.experiment {
            Experiment::Fig2(p) => assert_eq!(p.snr_db, 7.0),
            _ => unreachable!(),
        }
        let map = parse_kv("train.bogus = 1\n").unwrap();
        assert!(ExperimentConfig::from_sources(
            Experiment::Fig2(Fig2Params::default()),
            Some(&map)
        )
        .is_err());
    }

    #[test]
    fn file_sets_seed_and_workers() {
        let map = parse_kv("seed = 99\nworkers = 3\n").unwrap();
        let cfg = ExperimentConfig::from_sources(
            Experiment::SpeedTable(SpeedTableParams::default()),
            Some(&map),
        )
        .unwrap();
        assert_eq!(cfg.seed, 99);
        assert_eq!(cfg.workers, Some(3));
    }
}
