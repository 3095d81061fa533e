//! Multi-wagon train geometry over a satellite link, the best-combination
//! PA-RA pairing rule, blockage handling and the last-wagon throughput.

use rayon::prelude::*;
use std::collections::BTreeSet;

use crate::channel::{draw_pair_shadowed_rice, draw_shadowed_rice, ShadowedRiceParams};
use crate::error::{Result, SimError};
use crate::kinematics::CarrierConfig;
use crate::link::{
    outage_optimal_fixed_rate, shannon_rate, ConditionalRatePolicy, FramePlan, GainDist,
    GridSpec, ThroughputEstimate,
};
use crate::runner::rng::{derive_stream, derive_substream};
use crate::runner::stats::summarize;

const TAG_BASELINE_TAIL: u16 = 2;

/// Wagon counts and per-wagon antenna placement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainGeometry {
    pub num_wagons: usize,
    pub ras_per_wagon: usize,
    /// First-to-last antenna span within a wagon, in carrier wavelengths.
    pub span_wavelengths: f64,
    /// Gap between the last antenna of a wagon and the PA of the next, meters.
    pub inter_wagon_gap_m: f64,
}

impl Default for TrainGeometry {
    fn default() -> Self {
        Self {
            num_wagons: 10,
            ras_per_wagon: 4,
            span_wavelengths: 10.0,
            inter_wagon_gap_m: 0.2,
        }
    }
}

/// Resolved absolute antenna positions along the direction of travel.
/// Positions are measured backwards from the head PA, so the PA of wagon w
/// sounds the channel that wagon-w (or trailing-wagon) RAs will traverse.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainLayout {
    pub num_wagons: usize,
    pub ras_per_wagon: usize,
    pub wagon_span_m: f64,
    pub inter_wagon_gap_m: f64,
    pub wavelength_m: f64,
    pub blocked_wagons: BTreeSet<usize>,
}

impl TrainLayout {
    /// Position of wagon w's PA (wagons are 1-based from the head).
    pub fn pa_position_m(&self, wagon: usize) -> f64 {
        (wagon - 1) as f64 * (self.wagon_span_m + self.inter_wagon_gap_m)
    }

    /// Position of RA `ra_index` (1-based) on wagon w; RA m sits m*span/M
    /// behind the wagon's PA.
    pub fn ra_position_m(&self, wagon: usize, ra_index: usize) -> f64 {
        self.pa_position_m(wagon)
            + ra_index as f64 * self.wagon_span_m / self.ras_per_wagon as f64
    }

    pub fn is_blocked(&self, wagon: usize) -> bool {
        self.blocked_wagons.contains(&wagon)
    }
}

pub fn build_layout(
    geometry: &TrainGeometry,
    carrier: &CarrierConfig,
    blocked: &BTreeSet<usize>,
) -> Result<TrainLayout> {
    if geometry.ras_per_wagon == 0 || geometry.num_wagons == 0 {
        return Err(SimError::InvalidConfig(
            "train needs at least one wagon and one RA per wagon".into(),
        ));
    }
    if !(geometry.span_wavelengths > 0.0) || !(geometry.inter_wagon_gap_m > 0.0) {
        return Err(SimError::InvalidConfig(
            "wagon span and inter-wagon gap must be positive".into(),
        ));
    }
    if let Some(&w) = blocked.iter().find(|&&w| w == 0 || w > geometry.num_wagons) {
        return Err(SimError::InvalidConfig(format!(
            "blocked wagon {w} outside 1..={}",
            geometry.num_wagons
        )));
    }
    let wavelength_m = carrier.wavelength_m();
    Ok(TrainLayout {
        num_wagons: geometry.num_wagons,
        ras_per_wagon: geometry.ras_per_wagon,
        wagon_span_m: geometry.span_wavelengths * wavelength_m,
        inter_wagon_gap_m: geometry.inter_wagon_gap_m,
        wavelength_m,
        blocked_wagons: blocked.clone(),
    })
}

/// Candidate pairing of a (non-blocked) PA ahead of the target wagon with
/// one of the target wagon's RAs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaRaPair {
    pub pa_wagon: usize,
    pub ra_index: usize,
    pub distance_m: f64,
}

/// All candidate pairs serving `target_wagon`, ordered by (pa_wagon, ra_index).
pub fn enumerate_pairs(layout: &TrainLayout, target_wagon: usize) -> Result<Vec<PaRaPair>> {
    if target_wagon == 0 || target_wagon > layout.num_wagons {
        return Err(SimError::InvalidConfig(format!(
            "target wagon {target_wagon} outside 1..={}",
            layout.num_wagons
        )));
    }
    let mut pairs = Vec::new();
    for pa_wagon in 1..=target_wagon {
        if layout.is_blocked(pa_wagon) {
            continue;
        }
        let pa_pos = layout.pa_position_m(pa_wagon);
        for ra_index in 1..=layout.ras_per_wagon {
            let distance = layout.ra_position_m(target_wagon, ra_index) - pa_pos;
            debug_assert!(distance >= 0.0);
            pairs.push(PaRaPair {
                pa_wagon,
                ra_index,
                distance_m: distance,
            });
        }
    }
    Ok(pairs)
}

/// The selected pair and its operating point at one speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingDecision {
    pub pa_wagon: usize,
    pub ra_index: usize,
    pub pair_distance_m: f64,
    pub delay_s: f64,
    pub rho_effective: f64,
}

/// Best-combination pairing: among pairs whose traversal time distance/speed
/// respects the minimum processing delay, take the one with the lowest delay
/// (zero spatial mismatch, rho = 1). If the vehicle is too fast for every
/// pair, fall back to the minimum delay and take the pair with the highest
/// CSIT accuracy |J0| at the residual mismatch. Deterministic tie-break by
/// (pa_wagon, ra_index).
pub fn best_combination(
    layout: &TrainLayout,
    target_wagon: usize,
    speed_m_s: f64,
    min_delay_s: f64,
) -> Result<PairingDecision> {
    if !(speed_m_s >= 0.0) || !(min_delay_s > 0.0) {
        return Err(SimError::InvalidConfig(format!(
            "speed {speed_m_s} and minimum delay {min_delay_s} must be nonnegative/positive"
        )));
    }
    let pairs = enumerate_pairs(layout, target_wagon)?;
    if pairs.is_empty() {
        return Err(SimError::NoPair { target_wagon });
    }

    // Feasible branch: delay = distance/speed >= min_delay. Ordering by delay
    // equals ordering by distance for any positive speed, and covers v = 0
    // (all pairs feasible with unbounded delay).
    let feasible = pairs
        .iter()
        .filter(|p| speed_m_s == 0.0 || p.distance_m / speed_m_s >= min_delay_s)
        .min_by(|a, b| {
            (a.distance_m, a.pa_wagon, a.ra_index)
                .partial_cmp(&(b.distance_m, b.pa_wagon, b.ra_index))
                .unwrap()
        });
    if let Some(p) = feasible {
        let delay = if speed_m_s > 0.0 {
            p.distance_m / speed_m_s
        } else {
            f64::INFINITY
        };
        return Ok(PairingDecision {
            pa_wagon: p.pa_wagon,
            ra_index: p.ra_index,
            pair_distance_m: p.distance_m,
            delay_s: delay,
            rho_effective: 1.0,
        });
    }

    // Fallback: fixed minimum delay; maximize |J0| of the residual mismatch.
    let traveled = speed_m_s * min_delay_s;
    let best = pairs
        .iter()
        .map(|p| {
            let rho = crate::channel::jakes_correlation(
                (p.distance_m - traveled).abs(),
                layout.wavelength_m,
            );
            (p, rho)
        })
        .min_by(|(pa, ra), (pb, rb)| {
            (-ra.abs(), pa.pa_wagon, pa.ra_index)
                .partial_cmp(&(-rb.abs(), pb.pa_wagon, pb.ra_index))
                .unwrap()
        })
        .expect("nonempty candidate set");
    Ok(PairingDecision {
        pa_wagon: best.0.pa_wagon,
        ra_index: best.0.ra_index,
        pair_distance_m: best.0.distance_m,
        delay_s: min_delay_s,
        rho_effective: best.1,
    })
}

/// Satellite-link operating point for the train experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainLinkConfig {
    pub snr_linear: f64,
    pub frame: FramePlan,
    pub min_delay_s: f64,
}

/// Result of one train sweep point: the pairing that was used and the
/// aggregated throughput.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainPoint {
    pub decision: PairingDecision,
    pub estimate: ThroughputEstimate,
}

/// E2E throughput of the target wagon under best-combination pairing: the
/// selected pair fixes the delay and the effective correlation; each trial
/// draws the shadowed-Rice channel pair and applies the perfect-CSIT or
/// conditional rate rule. A blocked target wagon delivers nothing.
pub fn simulate_train(
    layout: &TrainLayout,
    target_wagon: usize,
    speed_m_s: f64,
    preset: &ShadowedRiceParams,
    cfg: &TrainLinkConfig,
    trials: usize,
    seed: u64,
) -> Result<TrainPoint> {
    if trials == 0 {
        return Err(SimError::EmptySamples);
    }
    if layout.is_blocked(target_wagon) {
        let decision = best_combination(layout, target_wagon, speed_m_s, cfg.min_delay_s)?;
        return Ok(TrainPoint {
            decision,
            estimate: ThroughputEstimate {
                throughput_bps: 0.0,
                ci95_bps: 0.0,
                mean_bits: 0.0,
                e2e_delay_s: cfg.frame.e2e_delay_s(decision.delay_s),
                success_rate: 0.0,
                trials,
            },
        });
    }
    let decision = best_combination(layout, target_wagon, speed_m_s, cfg.min_delay_s)?;
    let rho = decision.rho_effective;
    let perfect = rho.abs() >= 1.0 - 1e-12;
    let policy = if perfect {
        None
    } else {
        Some(ConditionalRatePolicy::build(rho, cfg.snr_linear)?)
    };

    let cw = cfg.frame.codeword_channel_uses;
    let outcomes: Vec<(f64, bool)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = derive_stream(seed, trial as u64);
            let draw = draw_pair_shadowed_rice(preset, rho, &mut rng).expect("|rho| <= 1");
            let g_pa = draw.h_pa.norm_sqr();
            let g_ra = draw.h_ra.norm_sqr();
            let rate = match &policy {
                None => shannon_rate(cfg.snr_linear, g_pa),
                Some(p) => p.rate_for(g_pa),
            };
            let ok = shannon_rate(cfg.snr_linear, g_ra) >= rate;
            (if ok { rate * cw } else { 0.0 }, ok)
        })
        .collect();

    let bits: Vec<f64> = outcomes.iter().map(|(b, _)| *b).collect();
    let successes = outcomes.iter().filter(|(_, ok)| *ok).count();
    let stat = summarize(&bits)?;
    let e2e = cfg.frame.e2e_delay_s(decision.delay_s);
    Ok(TrainPoint {
        decision,
        estimate: ThroughputEstimate {
            throughput_bps: stat.mean / e2e,
            ci95_bps: stat.ci95_half / e2e,
            mean_bits: stat.mean,
            e2e_delay_s: e2e,
            success_rate: successes as f64 / trials as f64,
            trials,
        },
    })
}

/// Baseline 1x2 SIMO with maximum-ratio combining of two independent
/// shadowed-Rice branches, no CSIT and zero processing delay. The fixed rate
/// is optimized against an empirical tail of the combined gain.
pub fn simulate_train_baseline(
    preset: &ShadowedRiceParams,
    cfg: &TrainLinkConfig,
    trials: usize,
    seed: u64,
) -> Result<ThroughputEstimate> {
    if trials == 0 {
        return Err(SimError::EmptySamples);
    }
    let mut tail_rng = derive_substream(seed, TAG_BASELINE_TAIL, 0);
    let samples: Vec<f64> = (0..100_000)
        .map(|_| {
            draw_shadowed_rice(preset, &mut tail_rng).norm_sqr()
                + draw_shadowed_rice(preset, &mut tail_rng).norm_sqr()
        })
        .collect();
    let dist = GainDist::empirical(samples)?;
    let rate = outage_optimal_fixed_rate(&dist, cfg.snr_linear, &GridSpec::default())?.rate;

    let cw = cfg.frame.codeword_channel_uses;
    let outcomes: Vec<(f64, bool)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = derive_stream(seed, trial as u64);
            let g = draw_shadowed_rice(preset, &mut rng).norm_sqr()
                + draw_shadowed_rice(preset, &mut rng).norm_sqr();
            let ok = shannon_rate(cfg.snr_linear, g) >= rate;
            (if ok { rate * cw } else { 0.0 }, ok)
        })
        .collect();

    let bits: Vec<f64> = outcomes.iter().map(|(b, _)| *b).collect();
    let successes = outcomes.iter().filter(|(_, ok)| *ok).count();
    let stat = summarize(&bits)?;
    let e2e = cfg.frame.e2e_delay_s(0.0);
    Ok(ThroughputEstimate {
        throughput_bps: stat.mean / e2e,
        ci95_bps: stat.ci95_half / e2e,
        mean_bits: stat.mean,
        e2e_delay_s: e2e,
        success_rate: successes as f64 / trials as f64,
        trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn carrier() -> CarrierConfig {
        CarrierConfig::new(2.68e9).unwrap()
    }

    fn layout(m: usize, blocked: &[usize]) -> TrainLayout {
        let geom = TrainGeometry {
            ras_per_wagon: m,
            ..TrainGeometry::default()
        };
        build_layout(&geom, &carrier(), &blocked.iter().copied().collect()).unwrap()
    }

    fn link_cfg() -> TrainLinkConfig {
        TrainLinkConfig {
            snr_linear: 10f64.powf(2.6),
            frame: FramePlan::default(),
            min_delay_s: 10e-3,
        }
    }

    fn average_preset() -> ShadowedRiceParams {
        ShadowedRiceParams::new(0.126, 10.1, 0.835).unwrap()
    }

    #[test]
    fn layout_positions() {
        let l = layout(4, &[]);
        // span = 10 wavelengths at 2.68 GHz.
        assert!((l.wagon_span_m - 1.1187).abs() < 1e-3);
        let offsets: Vec<f64> = (1..=4)
            .map(|m| l.ra_position_m(1, m) - l.pa_position_m(1))
            .collect();
        for (got, want) in offsets.iter().zip([0.280, 0.560, 0.839, 1.119]) {
            assert!((got - want).abs() < 1e-3, "offset {got} vs {want}");
        }
        // Second wagon's PA sits span + 0.2 m behind the first.
        assert!((l.pa_position_m(2) - l.pa_position_m(1) - 1.319).abs() < 1e-3);
    }

    #[test]
    fn layout_rejects_bad_geometry() {
        let geom = TrainGeometry {
            ras_per_wagon: 0,
            ..TrainGeometry::default()
        };
        assert!(build_layout(&geom, &carrier(), &BTreeSet::new()).is_err());
        let blocked: BTreeSet<usize> = [11].into_iter().collect();
        assert!(build_layout(&TrainGeometry::default(), &carrier(), &blocked).is_err());
    }

    #[test]
    fn pair_counts() {
        assert_eq!(enumerate_pairs(&layout(4, &[]), 10).unwrap().len(), 40);
        assert_eq!(enumerate_pairs(&layout(4, &[9]), 10).unwrap().len(), 36);
        let geom = TrainGeometry {
            num_wagons: 1,
            ras_per_wagon: 4,
            ..TrainGeometry::default()
        };
        let single = build_layout(&geom, &carrier(), &BTreeSet::new()).unwrap();
        assert_eq!(enumerate_pairs(&single, 1).unwrap().len(), 4);
    }

    #[test]
    fn pairs_exclude_blocked_pa() {
        let pairs = enumerate_pairs(&layout(4, &[9]), 10).unwrap();
        assert!(pairs.iter().all(|p| p.pa_wagon != 9));
    }

    #[test]
    fn exact_traversal_pair_wins() {
        let l = layout(4, &[]);
        let d = l.ra_position_m(10, 2) - l.pa_position_m(10);
        let min_delay = 10e-3;
        let speed = d / min_delay;
        let dec = best_combination(&l, 10, speed, min_delay).unwrap();
        assert_eq!((dec.pa_wagon, dec.ra_index), (10, 2));
        assert_eq!(dec.rho_effective, 1.0);
        assert!((dec.delay_s - min_delay).abs() < 1e-12);
    }

    #[test]
    fn slow_speed_picks_smallest_distance() {
        let l = layout(4, &[]);
        let dec = best_combination(&l, 10, 0.5, 10e-3).unwrap();
        assert_eq!((dec.pa_wagon, dec.ra_index), (10, 1));
        assert_eq!(dec.rho_effective, 1.0);
        let dec0 = best_combination(&l, 10, 0.0, 10e-3).unwrap();
        assert_eq!((dec0.pa_wagon, dec0.ra_index), (10, 1));
        assert!(dec0.delay_s.is_infinite());
    }

    #[test]
    fn all_blocked_is_an_error() {
        let l = layout(4, &[1, 2, 3]);
        let geom = TrainGeometry {
            num_wagons: 3,
            ras_per_wagon: 4,
            ..TrainGeometry::default()
        };
        let l3 = build_layout(&geom, &carrier(), &l.blocked_wagons).unwrap();
        assert!(matches!(
            best_combination(&l3, 3, 10.0, 10e-3),
            Err(SimError::NoPair { target_wagon: 3 })
        ));
    }

    /// Brute-force oracle: score every pair under both branches of the rule
    /// and take the lexicographic minimum. Feasible pairs rank by delay
    /// (distance over speed, with a tiny floor so v = 0 keeps the distance
    /// ordering), infeasible ones by falling |J0| accuracy.
    fn oracle_best(l: &TrainLayout, target: usize, v: f64, min_delay: f64) -> (usize, usize) {
        let pairs = enumerate_pairs(l, target).unwrap();
        pairs
            .iter()
            .map(|p| {
                let feasible = v == 0.0 || p.distance_m / v >= min_delay;
                let score = if feasible {
                    (0, p.distance_m / v.max(1e-300))
                } else {
                    let rho = crate::channel::jakes_correlation(
                        (p.distance_m - v * min_delay).abs(),
                        l.wavelength_m,
                    );
                    (1, -rho.abs())
                };
                (score.0, score.1, p.pa_wagon, p.ra_index)
            })
            .min_by(|a, b| a.partial_cmp(b).unwrap())
            .map(|(_, _, pa, ra)| (pa, ra))
            .unwrap()
    }

    #[test]
    fn best_combination_matches_oracle_on_toy_layouts() {
        let mut rng = derive_stream(101, 0);
        for _ in 0..15 {
            let wagons = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=4);
            let geom = TrainGeometry {
                num_wagons: wagons,
                ras_per_wagon: m,
                span_wavelengths: rng.gen_range(2.0..20.0),
                inter_wagon_gap_m: rng.gen_range(0.05..0.5),
            };
            let l = build_layout(&geom, &carrier(), &BTreeSet::new()).unwrap();
            for _ in 0..10 {
                let v: f64 = rng.gen_range(0.0..200.0);
                let got = best_combination(&l, wagons, v, 10e-3).unwrap();
                let want = oracle_best(&l, wagons, v, 10e-3);
                assert_eq!(
                    (got.pa_wagon, got.ra_index),
                    want,
                    "v={v} wagons={wagons} m={m}"
                );
            }
        }
    }

    #[test]
    fn candidate_set_monotonicity() {
        // Doubling the RA grid nests the candidate set; |rho| never drops.
        // Use high speeds so the fallback branch is exercised.
        let l4 = layout(4, &[]);
        let l8 = layout(8, &[]);
        for i in 0..40 {
            let v = 120.0 + i as f64 * 5.0;
            let r4 = best_combination(&l4, 10, v, 10e-3).unwrap().rho_effective;
            let r8 = best_combination(&l8, 10, v, 10e-3).unwrap().rho_effective;
            assert!(
                r8.abs() >= r4.abs() - 1e-12,
                "v={v}: |rho| dropped from {} to {}",
                r4.abs(),
                r8.abs()
            );
        }
        // Unblocking wagons likewise only enlarges the set.
        let blocked = layout(4, &[9]);
        let open = layout(4, &[]);
        for i in 0..40 {
            let v = 100.0 + i as f64 * 10.0;
            let rb = best_combination(&blocked, 10, v, 10e-3).unwrap().rho_effective;
            let ro = best_combination(&open, 10, v, 10e-3).unwrap().rho_effective;
            assert!(ro.abs() >= rb.abs() - 1e-12, "v={v}");
        }
    }

    #[test]
    fn feasible_pairing_has_zero_outage() {
        let l = layout(4, &[]);
        let p = simulate_train(&l, 10, 27.8, &average_preset(), &link_cfg(), 2_000, 7).unwrap();
        assert_eq!(p.estimate.success_rate, 1.0);
        assert_eq!(p.decision.rho_effective, 1.0);
    }

    #[test]
    fn blocked_target_delivers_nothing() {
        let l = layout(4, &[10]);
        let p = simulate_train(&l, 10, 27.8, &average_preset(), &link_cfg(), 100, 7).unwrap();
        assert_eq!(p.estimate.throughput_bps, 0.0);
    }

    #[test]
    fn light_shadowing_dominates_average() {
        let l = layout(4, &[]);
        let light = ShadowedRiceParams::new(0.158, 19.4, 1.29).unwrap();
        for v_kmh in [60.0, 150.0, 240.0] {
            let v = v_kmh / 3.6;
            let a = simulate_train(&l, 10, v, &average_preset(), &link_cfg(), 4_000, 11)
                .unwrap()
                .estimate;
            let b = simulate_train(&l, 10, v, &light, &link_cfg(), 4_000, 11)
                .unwrap()
                .estimate;
            assert!(
                b.throughput_bps + b.ci95_bps + a.ci95_bps >= a.throughput_bps,
                "light {} below average {} at {v_kmh} km/h",
                b.throughput_bps,
                a.throughput_bps
            );
        }
    }

    #[test]
    fn train_below_genie_bound() {
        let l = layout(10, &[]);
        let cfg = link_cfg();
        let preset = average_preset();
        // Genie: perfect CSIT at the minimum delay.
        let trials = 4_000;
        let mut genie_bits = 0.0;
        for i in 0..trials {
            let mut rng = derive_stream(13, i as u64);
            let g = draw_shadowed_rice(&preset, &mut rng).norm_sqr();
            genie_bits += shannon_rate(cfg.snr_linear, g) * cfg.frame.codeword_channel_uses;
        }
        let genie = genie_bits / trials as f64 / cfg.frame.e2e_delay_s(cfg.min_delay_s);
        for v_kmh in [50.0, 150.0, 280.0] {
            let p = simulate_train(&l, 10, v_kmh / 3.6, &preset, &cfg, trials, 13).unwrap();
            assert!(p.estimate.throughput_bps <= genie * 1.02);
        }
    }

    #[test]
    fn baseline_is_speed_free_and_reproducible() {
        let a = simulate_train_baseline(&average_preset(), &link_cfg(), 4_000, 17).unwrap();
        let b = simulate_train_baseline(&average_preset(), &link_cfg(), 4_000, 17).unwrap();
        assert_eq!(a, b);
        assert!(a.throughput_bps > 0.0);
        assert!(a.success_rate > 0.8 && a.success_rate < 1.0);
    }
}
