//! CSIT-based and CSIT-free beamformers at an N-antenna base station,
//! received power under spatial mismatch, and the CDF experiment behind the
//! mispointing comparisons.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use crate::channel::{draw_multipath_pair, MultipathFieldParams};
use crate::error::{Result, SimError};
use crate::runner::rng::derive_stream;
use crate::runner::stats::order_stat_quantile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BfKind {
    Mrt,
    Dft,
    Zf,
    NoCsit,
}

impl BfKind {
    pub fn name(&self) -> &'static str {
        match self {
            BfKind::Mrt => "mrt",
            BfKind::Dft => "dft",
            BfKind::Zf => "zf",
            BfKind::NoCsit => "nocsit",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "mrt" => Ok(BfKind::Mrt),
            "dft" => Ok(BfKind::Dft),
            "zf" => Ok(BfKind::Zf),
            "nocsit" => Ok(BfKind::NoCsit),
            other => Err(SimError::InvalidConfig(format!(
                "unknown beamformer '{other}' (expected mrt|dft|zf|nocsit)"
            ))),
        }
    }
}

/// One weight vector per transmitted stream, each with unit power.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamformer {
    pub kind: BfKind,
    pub streams: Vec<Vec<Complex64>>,
}

impl Beamformer {
    /// Power of the first (desired) stream at a true channel.
    pub fn received_power(&self, h_true: &[Complex64]) -> f64 {
        received_power(&self.streams[0], h_true)
    }

    pub fn stream_power(&self, stream: usize, h_true: &[Complex64]) -> f64 {
        received_power(&self.streams[stream], h_true)
    }
}

/// Power coupled from precoder w into channel h: |sum_k w_k h_k|^2, so that
/// maximum-ratio weights conj(h)/||h|| reach the Cauchy-Schwarz bound ||h||^2.
pub fn received_power(w: &[Complex64], h_true: &[Complex64]) -> f64 {
    debug_assert_eq!(w.len(), h_true.len());
    let inner: Complex64 = w.iter().zip(h_true).map(|(wk, hk)| wk * hk).sum();
    inner.norm_sqr()
}

fn normalize(mut w: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    if norm <= 0.0 || !norm.is_finite() {
        return Err(SimError::DegenerateChannel);
    }
    for x in &mut w {
        *x /= norm;
    }
    Ok(w)
}

/// Maximum-ratio transmission towards an estimated channel: w = conj(h)/||h||.
pub fn mrt_weights(h_hat: &[Complex64]) -> Result<Beamformer> {
    let w = normalize(h_hat.iter().map(|h| h.conj()).collect())?;
    Ok(Beamformer {
        kind: BfKind::Mrt,
        streams: vec![w],
    })
}

/// N orthonormal Fourier beams; column n has elements exp(-j*2*pi*k*n/N)/sqrt(N).
#[derive(Debug, Clone)]
pub struct DftCodebook {
    pub beams: Vec<Vec<Complex64>>,
}

pub fn dft_codebook(n: usize) -> DftCodebook {
    assert!(n >= 1);
    let scale = 1.0 / (n as f64).sqrt();
    let beams = (0..n)
        .map(|col| {
            (0..n)
                .map(|k| {
                    Complex64::from_polar(scale, -2.0 * PI * (k * col) as f64 / n as f64)
                })
                .collect()
        })
        .collect();
    DftCodebook { beams }
}

/// Pick the codebook column maximizing |b^H h|^2; ties go to the lowest index.
pub fn dft_select(h_hat: &[Complex64], codebook: &DftCodebook) -> Beamformer {
    debug_assert_eq!(codebook.beams[0].len(), h_hat.len());
    let mut best = 0;
    let mut best_power = f64::NEG_INFINITY;
    for (i, beam) in codebook.beams.iter().enumerate() {
        let p = received_power(beam, h_hat);
        if p > best_power {
            best_power = p;
            best = i;
        }
    }
    Beamformer {
        kind: BfKind::Dft,
        streams: vec![codebook.beams[best].clone()],
    }
}

/// Zero-forcing for K co-scheduled users: W = H (H^H H)^{-1}, columns
/// renormalized to unit power. With perfect CSIT, stream k puts a null on
/// every other user's channel.
pub fn zf_weights(user_channels: &[Vec<Complex64>]) -> Result<Beamformer> {
    let k = user_channels.len();
    let n = user_channels[0].len();
    if k > n {
        return Err(SimError::SingularChannelMatrix);
    }
    // Gram matrix G = H^H H (K x K, Hermitian).
    let mut gram = vec![Complex64::new(0.0, 0.0); k * k];
    for i in 0..k {
        for j in 0..k {
            gram[i * k + j] = user_channels[i]
                .iter()
                .zip(&user_channels[j])
                .map(|(a, b)| a.conj() * b)
                .sum();
        }
    }
    let inv = invert_complex(&gram, k)?;
    // W = conj(H (H^H H)^{-1}) satisfies sum_k h_{j,k} w_{s,k} = delta_js,
    // i.e. exact nulls under the transmit coupling of `received_power`.
    let mut streams = Vec::with_capacity(k);
    for s in 0..k {
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..k {
            let c = inv[j * k + s];
            for (wi, hj) in w.iter_mut().zip(&user_channels[j]) {
                *wi += hj * c;
            }
        }
        for wi in &mut w {
            *wi = wi.conj();
        }
        streams.push(normalize(w).map_err(|_| SimError::SingularChannelMatrix)?);
    }
    Ok(Beamformer {
        kind: BfKind::Zf,
        streams,
    })
}

/// Gauss-Jordan inverse with partial pivoting for small Hermitian systems.
fn invert_complex(a: &[Complex64], k: usize) -> Result<Vec<Complex64>> {
    let mut m = a.to_vec();
    let mut inv = vec![Complex64::new(0.0, 0.0); k * k];
    for i in 0..k {
        inv[i * k + i] = Complex64::new(1.0, 0.0);
    }
    let scale: f64 = a.iter().map(|x| x.norm()).fold(0.0, f64::max).max(1e-300);
    for col in 0..k {
        let pivot_row = (col..k)
            .max_by(|&r1, &r2| {
                m[r1 * k + col]
                    .norm()
                    .partial_cmp(&m[r2 * k + col].norm())
                    .unwrap()
            })
            .unwrap();
        if m[pivot_row * k + col].norm() < 1e-12 * scale {
            return Err(SimError::SingularChannelMatrix);
        }
        if pivot_row != col {
            for j in 0..k {
                m.swap(col * k + j, pivot_row * k + j);
                inv.swap(col * k + j, pivot_row * k + j);
            }
        }
        let pivot = m[col * k + col];
        for j in 0..k {
            m[col * k + j] /= pivot;
            inv[col * k + j] /= pivot;
        }
        for row in 0..k {
            if row == col {
                continue;
            }
            let factor = m[row * k + col];
            if factor.norm() == 0.0 {
                continue;
            }
            for j in 0..k {
                let mcj = m[col * k + j];
                let icj = inv[col * k + j];
                m[row * k + j] -= factor * mcj;
                inv[row * k + j] -= factor * icj;
            }
        }
    }
    Ok(inv)
}

/// All antennas transmit the same signal: w = all-ones / sqrt(N).
pub fn no_csit_weights(n: usize) -> Beamformer {
    assert!(n >= 1);
    let w = vec![Complex64::new(1.0 / (n as f64).sqrt(), 0.0); n];
    Beamformer {
        kind: BfKind::NoCsit,
        streams: vec![w],
    }
}

/// Received-power samples in ascending order.
#[derive(Debug, Clone)]
pub struct PowerCdf {
    samples: Vec<f64>,
}

impl PowerCdf {
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(SimError::EmptySamples);
        }
        if samples.iter().any(|x| !(*x >= 0.0)) {
            return Err(SimError::InvalidConfig(
                "received powers must be nonnegative".into(),
            ));
        }
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { samples })
    }

    /// q-th quantile as the ceil(q*n)-th order statistic.
    pub fn quantile(&self, q: f64) -> f64 {
        order_stat_quantile(&self.samples, q)
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }
}

/// Which channel estimate feeds the beamformer in the CDF experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PredictionMode {
    /// Beamform on the true reception-position channel.
    Ideal,
    /// Beamform on the sounding-position channel, displaced by the mismatch.
    Mismatched,
}

/// Received-power CDF over Monte Carlo multipath draws. Per trial the
/// beamformer is formed from the sounding-position channel (or the true one
/// under ideal prediction) and evaluated against the reception-position
/// channel. The ZF variant co-schedules a second, independent user and
/// reports the desired user's stream power.
pub fn power_cdf_experiment(
    params: &MultipathFieldParams,
    kind: BfKind,
    mode: PredictionMode,
    mismatch_wavelengths: f64,
    trials: usize,
    seed: u64,
) -> Result<PowerCdf> {
    if trials == 0 {
        return Err(SimError::EmptySamples);
    }
    let codebook = match kind {
        BfKind::Dft => Some(dft_codebook(params.bs_antennas)),
        _ => None,
    };
    let samples: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = derive_stream(seed, trial as u64);
            let draw = draw_multipath_pair(params, mismatch_wavelengths, 1.0, &mut rng);
            let h_hat = match mode {
                PredictionMode::Ideal => &draw.h_ra,
                PredictionMode::Mismatched => &draw.h_pa,
            };
            let bf = match kind {
                BfKind::Mrt => mrt_weights(h_hat).expect("nonzero with prob 1"),
                BfKind::Dft => dft_select(h_hat, codebook.as_ref().unwrap()),
                BfKind::NoCsit => no_csit_weights(params.bs_antennas),
                BfKind::Zf => {
                    let other = draw_multipath_pair(params, mismatch_wavelengths, 1.0, &mut rng);
                    let other_hat = match mode {
                        PredictionMode::Ideal => other.h_ra,
                        PredictionMode::Mismatched => other.h_pa,
                    };
                    zf_weights(&[h_hat.clone(), other_hat]).expect("independent draws")
                }
            };
            bf.received_power(&draw.h_ra)
        })
        .collect();
    PowerCdf::from_samples(samples)
}
