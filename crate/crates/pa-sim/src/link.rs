//! Rate adaptation and end-to-end throughput for the urban comparison
//! schemes: SISO and SIMO-MRC without CSIT, frequency diversity, and the
//! adaptive-/nonadaptive-delay predictor-antenna setups.

use rand::Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

use crate::channel::{draw_pair_rayleigh, jakes_correlation, JakesParams};
use crate::error::{Result, SimError};
use crate::kinematics::{adaptive_delay, mismatch_distance, CarrierConfig, MobilityConfig};
use crate::math::marcum_q1;
use crate::runner::rng::{derive_stream, derive_substream};
use crate::runner::stats::summarize;

/// Above this the conditional draw is treated as deterministic (perfect CSIT).
const RHO_PERFECT: f64 = 1.0 - 1e-12;

/// Stream tag for auxiliary sampling (empirical tails), disjoint from trials.
const TAG_AUX: u16 = 1;

/// Slot timing and codeword accounting. The end-to-end delay of one codeword
/// is its on-air transmission time plus the access point's processing delay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FramePlan {
    pub slot_duration_s: f64,
    pub symbols_per_slot: u32,
    pub codeword_channel_uses: f64,
}

impl Default for FramePlan {
    fn default() -> Self {
        Self {
            slot_duration_s: 1e-3,
            symbols_per_slot: 14,
            codeword_channel_uses: 1e4,
        }
    }
}

impl FramePlan {
    /// Time to carry one codeword at symbols_per_slot channel uses per slot.
    pub fn transmission_time_s(&self) -> f64 {
        self.codeword_channel_uses * self.slot_duration_s / self.symbols_per_slot as f64
    }

    pub fn e2e_delay_s(&self, processing_delay_s: f64) -> f64 {
        self.transmission_time_s() + processing_delay_s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    SisoNoCsit,
    SimoMrcNoCsit,
    FreqDiversityNoCsit,
    PaAdaptive,
    PaNonadaptive,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 5] = [
        SchemeKind::SisoNoCsit,
        SchemeKind::SimoMrcNoCsit,
        SchemeKind::FreqDiversityNoCsit,
        SchemeKind::PaAdaptive,
        SchemeKind::PaNonadaptive,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            SchemeKind::SisoNoCsit => "siso",
            SchemeKind::SimoMrcNoCsit => "simo-mrc",
            SchemeKind::FreqDiversityNoCsit => "freq-div",
            SchemeKind::PaAdaptive => "pa-adaptive",
            SchemeKind::PaNonadaptive => "pa-nonadaptive",
        }
    }
}

/// Outcome of one Monte Carlo trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeResult {
    pub delivered_bits: f64,
    pub e2e_delay_s: f64,
    pub rate_used: f64,
    pub success: bool,
}

/// Rate-search resolution: a uniform scan followed by golden-section
/// refinement inside the best bracket.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub points: usize,
    pub refine_iters: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            points: 2000,
            refine_iters: 48,
        }
    }
}

/// Channel-gain distribution for statically optimized (no-CSIT) rates.
#[derive(Debug, Clone)]
pub enum GainDist {
    Deterministic(f64),
    Exponential { mean: f64 },
    /// Sum of two i.i.d. exponential branches (maximum-ratio combining).
    Erlang2 { branch_mean: f64 },
    /// Sorted Monte Carlo samples, used when no closed form exists.
    Empirical(Vec<f64>),
}

impl GainDist {
    pub fn empirical(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(SimError::EmptySamples);
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(GainDist::Empirical(samples))
    }

    /// Pr[G >= g].
    pub fn tail(&self, g: f64) -> f64 {
        match self {
            GainDist::Deterministic(v) => {
                if g <= *v {
                    1.0
                } else {
                    0.0
                }
            }
            GainDist::Exponential { mean } => (-g / mean).exp(),
            GainDist::Erlang2 { branch_mean } => {
                let x = g / branch_mean;
                (-x).exp() * (1.0 + x)
            }
            GainDist::Empirical(sorted) => {
                let below = sorted.partition_point(|&v| v < g);
                (sorted.len() - below) as f64 / sorted.len() as f64
            }
        }
    }

    fn upper_bound(&self) -> f64 {
        match self {
            GainDist::Deterministic(v) => *v,
            GainDist::Exponential { mean } => mean * 30.0,
            GainDist::Erlang2 { branch_mean } => branch_mean * 36.0,
            GainDist::Empirical(sorted) => *sorted.last().unwrap(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePoint {
    pub rate: f64,
    pub throughput_per_use: f64,
}

/// log2(1 + snr * gain).
pub fn shannon_rate(snr_linear: f64, gain: f64) -> f64 {
    debug_assert!(snr_linear >= 0.0 && gain >= 0.0);
    (1.0 + snr_linear * gain).log2()
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, iters: usize) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..iters {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Scan [0, r_max] on a uniform grid, then refine around the best point.
fn argmax_rate(f: impl Fn(f64) -> f64, r_max: f64, grid: &GridSpec) -> Result<RatePoint> {
    if grid.points == 0 {
        return Err(SimError::InvalidConfig("rate grid must be nonempty".into()));
    }
    if !(r_max > 0.0) {
        return Ok(RatePoint {
            rate: 0.0,
            throughput_per_use: 0.0,
        });
    }
    let n = grid.points;
    let mut best_i = 0usize;
    let mut best = f64::NEG_INFINITY;
    for i in 0..=n {
        let r = r_max * i as f64 / n as f64;
        let v = f(r);
        if v > best {
            best = v;
            best_i = i;
        }
    }
    let lo = r_max * best_i.saturating_sub(1) as f64 / n as f64;
    let hi = r_max * (best_i + 1).min(n) as f64 / n as f64;
    let (r, v) = golden_max(&f, lo, hi, grid.refine_iters);
    let (rate, value) = if v >= best { (r, v) } else { (r_max * best_i as f64 / n as f64, best) };
    Ok(RatePoint {
        rate,
        throughput_per_use: value,
    })
}

/// Fixed rate maximizing R * Pr[log2(1 + snr*G) >= R] for a statically known
/// gain distribution.
pub fn outage_optimal_fixed_rate(
    dist: &GainDist,
    snr_linear: f64,
    grid: &GridSpec,
) -> Result<RatePoint> {
    let r_max = shannon_rate(snr_linear, dist.upper_bound());
    argmax_rate(
        |r| r * dist.tail((2f64.powf(r) - 1.0) / snr_linear),
        r_max,
        grid,
    )
}

/// Pr[log2(1 + snr*|h_ra|^2) >= rate | |h_pa|^2 = gain_pa] under the
/// conditional draw h_ra = rho*h_pa + sqrt(1-rho^2)*q with unit mean power:
/// |h_ra|^2 is noncentral chi-square, tail given by the Marcum Q-function.
pub fn conditional_success_prob(gain_pa: f64, rho: f64, snr_linear: f64, rate: f64) -> f64 {
    if rate <= 0.0 {
        return 1.0;
    }
    let threshold = (2f64.powf(rate) - 1.0) / snr_linear;
    if rho.abs() >= RHO_PERFECT {
        return if gain_pa >= threshold { 1.0 } else { 0.0 };
    }
    let s2 = 1.0 - rho * rho;
    let a = (2.0 * rho * rho * gain_pa / s2).sqrt();
    let b = (2.0 * threshold / s2).sqrt();
    marcum_q1(a, b)
}

/// Rate maximizing expected delivered bits given the sounded gain and the
/// spatial correlation to the reception point. Degenerates to the perfect-
/// CSIT Shannon rate at |rho| = 1 and to the statically optimal exponential
/// rate at rho = 0.
pub fn conditional_rate(gain_pa: f64, rho: f64, snr_linear: f64, grid: &GridSpec) -> Result<f64> {
    if !(rho.abs() <= 1.0) {
        return Err(SimError::CorrelationOutOfRange(rho));
    }
    if rho.abs() >= RHO_PERFECT {
        return Ok(shannon_rate(snr_linear, gain_pa));
    }
    let s2 = 1.0 - rho * rho;
    let mean = rho * rho * gain_pa + s2;
    let sigma = (s2 * s2 + 2.0 * s2 * rho * rho * gain_pa).sqrt();
    let r_max = shannon_rate(snr_linear, mean + 8.0 * sigma);
    Ok(argmax_rate(
        |r| r * conditional_success_prob(gain_pa, rho, snr_linear, r),
        r_max,
        grid,
    )?
    .rate)
}

/// Precomputed conditional rate over a gain grid; the rate search is a pure
/// function of (gain, rho, snr), so one table per operating point serves all
/// trials. Gains beyond the table are computed exactly (rare).
pub struct ConditionalRatePolicy {
    rho: f64,
    snr_linear: f64,
    grid: GridSpec,
    g_max: f64,
    rates: Vec<f64>,
}

/// Table resolution; the conditional-rate curve is smooth and monotone, so
/// linear interpolation at this density is far below Monte Carlo noise.
const POLICY_POINTS: usize = 1024;
const POLICY_G_MAX: f64 = 24.0;

/// Coarser scan for table construction; the golden refinement restores the
/// full resolution of the default grid.
const POLICY_GRID: GridSpec = GridSpec {
    points: 256,
    refine_iters: 48,
};

impl ConditionalRatePolicy {
    pub fn build(rho: f64, snr_linear: f64) -> Result<Self> {
        if !(rho.abs() <= 1.0) {
            return Err(SimError::CorrelationOutOfRange(rho));
        }
        let rates = (0..=POLICY_POINTS)
            .into_par_iter()
            .map(|i| {
                let g = POLICY_G_MAX * i as f64 / POLICY_POINTS as f64;
                conditional_rate(g, rho, snr_linear, &POLICY_GRID)
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(Self {
            rho,
            snr_linear,
            grid: POLICY_GRID,
            g_max: POLICY_G_MAX,
            rates,
        })
    }

    pub fn rate_for(&self, gain_pa: f64) -> f64 {
        if gain_pa >= self.g_max {
            return conditional_rate(gain_pa, self.rho, self.snr_linear, &self.grid)
                .expect("rho validated at build");
        }
        let pos = gain_pa / self.g_max * POLICY_POINTS as f64;
        let i = pos.floor() as usize;
        let frac = pos - i as f64;
        self.rates[i] * (1.0 - frac) + self.rates[i + 1] * frac
    }
}

/// Operating point shared by all urban schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkConfig {
    pub carrier: CarrierConfig,
    pub antenna_separation_wl: f64,
    pub min_processing_delay_s: f64,
    pub snr_linear: f64,
    pub frame: FramePlan,
    /// Correlate the two vehicle antennas of the SIMO baseline at the
    /// antenna-separation distance instead of drawing them independently.
    pub simo_correlated: bool,
    /// Duplicate full power on both diversity resources instead of splitting.
    pub fd_duplicate_power: bool,
}

impl LinkConfig {
    pub fn new(carrier_frequency_hz: f64, snr_db: f64) -> Result<Self> {
        Ok(Self {
            carrier: CarrierConfig::new(carrier_frequency_hz)?,
            antenna_separation_wl: 1.5,
            min_processing_delay_s: 5e-3,
            snr_linear: 10f64.powf(snr_db / 10.0),
            frame: FramePlan::default(),
            simo_correlated: false,
            fd_duplicate_power: false,
        })
    }

    pub fn antenna_separation_m(&self) -> f64 {
        self.antenna_separation_wl * self.carrier.wavelength_m()
    }
}

/// Aggregated Monte Carlo estimate for one (scheme, speed) point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputEstimate {
    pub throughput_bps: f64,
    pub ci95_bps: f64,
    pub mean_bits: f64,
    pub e2e_delay_s: f64,
    pub success_rate: f64,
    pub trials: usize,
}

fn aggregate(bits: &[f64], successes: usize, e2e_delay_s: f64) -> Result<ThroughputEstimate> {
    let stat = summarize(bits)?;
    Ok(ThroughputEstimate {
        throughput_bps: stat.mean / e2e_delay_s,
        ci95_bps: stat.ci95_half / e2e_delay_s,
        mean_bits: stat.mean,
        e2e_delay_s,
        success_rate: successes as f64 / bits.len() as f64,
        trials: bits.len(),
    })
}

enum TrialRule {
    FixedRateSiso { rate: f64 },
    FixedRateMrc { rate: f64, rho: f64, snr_eff: f64, bits_factor: f64 },
    PerfectCsit,
    Conditional { rho: f64, policy: ConditionalRatePolicy },
}

/// The delivered bits and success flag of a single trial under one rule.
fn run_trial(rule: &TrialRule, cfg: &LinkConfig, rng: &mut impl Rng) -> (f64, bool) {
    let cw = cfg.frame.codeword_channel_uses;
    let snr = cfg.snr_linear;
    match rule {
        TrialRule::FixedRateSiso { rate } => {
            let g: f64 = rng.sample(Exp1);
            let ok = shannon_rate(snr, g) >= *rate;
            (if ok { rate * cw } else { 0.0 }, ok)
        }
        TrialRule::FixedRateMrc {
            rate,
            rho,
            snr_eff,
            bits_factor,
        } => {
            let g = if *rho != 0.0 {
                let d = draw_pair_rayleigh(&JakesParams::default(), *rho, rng)
                    .expect("rho validated");
                d.h_pa.norm_sqr() + d.h_ra.norm_sqr()
            } else {
                let g1: f64 = rng.sample(Exp1);
                let g2: f64 = rng.sample(Exp1);
                g1 + g2
            };
            let ok = shannon_rate(*snr_eff, g) >= *rate;
            (if ok { rate * cw * bits_factor } else { 0.0 }, ok)
        }
        TrialRule::PerfectCsit => {
            let g: f64 = rng.sample(Exp1);
            (shannon_rate(snr, g) * cw, true)
        }
        TrialRule::Conditional { rho, policy } => {
            let d = draw_pair_rayleigh(&JakesParams::default(), *rho, rng)
                .expect("rho validated");
            let rate = policy.rate_for(d.h_pa.norm_sqr());
            let ok = shannon_rate(snr, d.h_ra.norm_sqr()) >= rate;
            (if ok { rate * cw } else { 0.0 }, ok)
        }
    }
}

fn nonadaptive_rule(speed_m_s: f64, cfg: &LinkConfig) -> Result<(TrialRule, f64)> {
    let mob = MobilityConfig::new(
        speed_m_s,
        cfg.antenna_separation_m(),
        cfg.min_processing_delay_s,
        cfg.min_processing_delay_s,
    )?;
    let d_m = mismatch_distance(&mob);
    let rho = jakes_correlation(d_m, cfg.carrier.wavelength_m());
    let rule = if rho.abs() >= RHO_PERFECT {
        TrialRule::PerfectCsit
    } else {
        TrialRule::Conditional {
            rho,
            policy: ConditionalRatePolicy::build(rho, cfg.snr_linear)?,
        }
    };
    Ok((rule, cfg.min_processing_delay_s))
}

/// Monte Carlo E2E throughput of one scheme at one speed: total correctly
/// decoded bits over total end-to-end delay (ratio of means; the delay is
/// deterministic per operating point).
pub fn simulate_scheme(
    kind: SchemeKind,
    speed_m_s: f64,
    cfg: &LinkConfig,
    trials: usize,
    seed: u64,
) -> Result<ThroughputEstimate> {
    if trials == 0 {
        return Err(SimError::EmptySamples);
    }
    let grid = GridSpec::default();
    let (rule, processing_delay) = match kind {
        SchemeKind::SisoNoCsit => {
            let rp = outage_optimal_fixed_rate(&GainDist::Exponential { mean: 1.0 }, cfg.snr_linear, &grid)?;
            (TrialRule::FixedRateSiso { rate: rp.rate }, 0.0)
        }
        SchemeKind::SimoMrcNoCsit => {
            let rho = if cfg.simo_correlated {
                jakes_correlation(cfg.antenna_separation_m(), cfg.carrier.wavelength_m())
            } else {
                0.0
            };
            let dist = if rho != 0.0 {
                let mut rng = derive_substream(seed, TAG_AUX, 0);
                let samples: Vec<f64> = (0..100_000)
                    .map(|_| {
                        let d = draw_pair_rayleigh(&JakesParams::default(), rho, &mut rng)
                            .expect("|J0| <= 1");
                        d.h_pa.norm_sqr() + d.h_ra.norm_sqr()
                    })
                    .collect();
                GainDist::empirical(samples)?
            } else {
                GainDist::Erlang2 { branch_mean: 1.0 }
            };
            let rp = outage_optimal_fixed_rate(&dist, cfg.snr_linear, &grid)?;
            (
                TrialRule::FixedRateMrc {
                    rate: rp.rate,
                    rho,
                    snr_eff: cfg.snr_linear,
                    bits_factor: 1.0,
                },
                0.0,
            )
        }
        SchemeKind::FreqDiversityNoCsit => {
            let snr_eff = if cfg.fd_duplicate_power {
                cfg.snr_linear
            } else {
                cfg.snr_linear / 2.0
            };
            let dist = GainDist::Erlang2 { branch_mean: 1.0 };
            let rp = outage_optimal_fixed_rate(&dist, snr_eff, &grid)?;
            (
                TrialRule::FixedRateMrc {
                    rate: rp.rate,
                    rho: 0.0,
                    snr_eff,
                    bits_factor: 0.5,
                },
                0.0,
            )
        }
        SchemeKind::PaAdaptive => {
            let mob = MobilityConfig::new(
                speed_m_s,
                cfg.antenna_separation_m(),
                cfg.min_processing_delay_s,
                cfg.min_processing_delay_s,
            )?;
            let ad = adaptive_delay(&mob);
            if ad.feasible {
                (TrialRule::PerfectCsit, ad.delay_s)
            } else {
                nonadaptive_rule(speed_m_s, cfg)?
            }
        }
        SchemeKind::PaNonadaptive => nonadaptive_rule(speed_m_s, cfg)?,
    };

    let e2e = cfg.frame.e2e_delay_s(processing_delay);
    let outcomes: Vec<(f64, bool)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = derive_stream(seed, trial as u64);
            run_trial(&rule, cfg, &mut rng)
        })
        .collect();
    let bits: Vec<f64> = outcomes.iter().map(|(b, _)| *b).collect();
    let successes = outcomes.iter().filter(|(_, ok)| *ok).count();
    aggregate(&bits, successes, e2e)
}
