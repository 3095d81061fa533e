//! Random channel generation: Jakes-correlated Rayleigh pairs, shadowed-Rice
//! satellite channels and geometric multipath vector channels with
//! displacement-induced decorrelation.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use std::f64::consts::PI;

use crate::error::{Result, SimError};
use crate::math::bessel_j0;

/// Scalar Rayleigh fading, unit mean power by default.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JakesParams {
    pub mean_power: f64,
}

impl JakesParams {
    pub fn new(mean_power: f64) -> Result<Self> {
        if !(mean_power > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "mean_power must be positive, got {mean_power}"
            )));
        }
        Ok(Self { mean_power })
    }
}

impl Default for JakesParams {
    fn default() -> Self {
        Self { mean_power: 1.0 }
    }
}

/// Land-mobile-satellite shadowed-Rice parameters: half-power of the
/// scattered component b0, Nakagami shadowing severity m, mean LoS power
/// omega. Mean total power is 2*b0 + omega.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowedRiceParams {
    pub b0: f64,
    pub m: f64,
    pub omega: f64,
}

impl ShadowedRiceParams {
    pub fn new(b0: f64, m: f64, omega: f64) -> Result<Self> {
        for (name, v) in [("b0", b0), ("m", m), ("omega", omega)] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(SimError::InvalidConfig(format!(
                    "shadowed-Rice {name} must be positive and finite, got {v}"
                )));
            }
        }
        Ok(Self { b0, m, omega })
    }

    pub fn mean_power(&self) -> f64 {
        2.0 * self.b0 + self.omega
    }
}

/// Geometric multipath field seen from an N-antenna uniform linear array.
///
/// Departure directions are sampled in the direction-cosine domain on a
/// jittered lattice spanning the angular spread around broadside (the
/// classical equal-angle sum-of-sinusoids design). The default 180-degree
/// spread models rich NLoS scattering: every draw covers the whole spatial
/// band, and half-wavelength-spaced elements come out statistically
/// independent. Narrower spreads give spatially clustered departures.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultipathFieldParams {
    pub num_paths: usize,
    pub bs_antennas: usize,
    pub array_spacing_wavelengths: f64,
    /// Width of the departure window, degrees.
    pub bs_angular_spread_deg: f64,
}

impl MultipathFieldParams {
    pub fn new(num_paths: usize, bs_antennas: usize) -> Result<Self> {
        if num_paths == 0 || bs_antennas == 0 {
            return Err(SimError::InvalidConfig(
                "num_paths and bs_antennas must be at least 1".into(),
            ));
        }
        Ok(Self {
            num_paths,
            bs_antennas,
            ..Self::defaults()
        })
    }

    fn defaults() -> Self {
        Self {
            num_paths: 200,
            bs_antennas: 1,
            array_spacing_wavelengths: 0.5,
            bs_angular_spread_deg: 180.0,
        }
    }
}

/// A correlated (sounding position, reception position) scalar channel pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDraw {
    pub h_pa: Complex64,
    pub h_ra: Complex64,
    pub correlation_used: f64,
}

/// Vector counterpart of [`ChannelDraw`] for the multipath field.
#[derive(Debug, Clone, PartialEq)]
pub struct MultipathDraw {
    pub h_pa: Vec<Complex64>,
    pub h_ra: Vec<Complex64>,
    pub correlation_used: f64,
}

/// Spatial correlation of a uniform angular spectrum over a displacement
/// d_m: J0(2*pi*d_m/wavelength). Even in the displacement; clamped so the
/// result is always a valid correlation coefficient.
pub fn jakes_correlation(d_m: f64, wavelength_m: f64) -> f64 {
    debug_assert!(wavelength_m > 0.0);
    bessel_j0(2.0 * PI * d_m.abs() / wavelength_m).clamp(-1.0, 1.0)
}

fn check_rho(rho: f64) -> Result<()> {
    if !(rho.abs() <= 1.0) {
        return Err(SimError::CorrelationOutOfRange(rho));
    }
    Ok(())
}

fn complex_gaussian<R: Rng>(variance: f64, rng: &mut R) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(s * re, s * im)
}

/// Draw a circularly-symmetric Gaussian channel at the sounding position and
/// the conditionally correlated channel at the reception position:
/// h_ra = rho*h_pa + sqrt(1-rho^2)*q. Marginals of the two are identical.
pub fn draw_pair_rayleigh<R: Rng>(
    params: &JakesParams,
    rho: f64,
    rng: &mut R,
) -> Result<ChannelDraw> {
    check_rho(rho)?;
    let h_pa = complex_gaussian(params.mean_power, rng);
    let q = complex_gaussian(params.mean_power, rng);
    let h_ra = rho * h_pa + (1.0 - rho * rho).max(0.0).sqrt() * q;
    Ok(ChannelDraw {
        h_pa,
        h_ra,
        correlation_used: rho,
    })
}

/// One shadowed-Rice sample: Nakagami-m LoS amplitude with uniform phase
/// plus a diffuse Rayleigh component of power 2*b0.
pub fn draw_shadowed_rice<R: Rng>(params: &ShadowedRiceParams, rng: &mut R) -> Complex64 {
    let (los, diffuse) = shadowed_rice_parts(params, rng);
    los + diffuse
}

fn shadowed_rice_parts<R: Rng>(
    params: &ShadowedRiceParams,
    rng: &mut R,
) -> (Complex64, Complex64) {
    // Z^2 ~ Gamma(shape m, scale omega/m) gives Nakagami-m Z with E[Z^2] = omega.
    let gamma = Gamma::new(params.m, params.omega / params.m)
        .expect("params validated at construction");
    let z = gamma.sample(rng).sqrt();
    let theta = rng.gen::<f64>() * 2.0 * PI;
    let los = Complex64::from_polar(z, theta);
    let diffuse = complex_gaussian(2.0 * params.b0, rng);
    (los, diffuse)
}

/// Shadowed-Rice pair across a spatial mismatch: the LoS term is identical at
/// both positions (satellite geometry varies on far larger scales), while the
/// diffuse term evolves with the Jakes correlation rho.
pub fn draw_pair_shadowed_rice<R: Rng>(
    params: &ShadowedRiceParams,
    rho: f64,
    rng: &mut R,
) -> Result<ChannelDraw> {
    check_rho(rho)?;
    let (los, w_pa, w_ra) = shadowed_rice_pair_parts(params, rho, rng);
    Ok(ChannelDraw {
        h_pa: los + w_pa,
        h_ra: los + w_ra,
        correlation_used: rho,
    })
}

fn shadowed_rice_pair_parts<R: Rng>(
    params: &ShadowedRiceParams,
    rho: f64,
    rng: &mut R,
) -> (Complex64, Complex64, Complex64) {
    let (los, w_pa) = shadowed_rice_parts(params, rng);
    let q = complex_gaussian(2.0 * params.b0, rng);
    let w_ra = rho * w_pa + (1.0 - rho * rho).max(0.0).sqrt() * q;
    (los, w_pa, w_ra)
}

/// Sum-of-paths channel pair over an N-element ULA. Path gains are i.i.d.
/// standard complex Gaussian; the reception-position channel applies the
/// per-path phase shift exp(j*2*pi*(d_m/lambda)*cos(phi_p)) with phi_p the
/// vehicle-side arrival angle, uniform on [0, 2*pi). The per-element
/// correlation between the two positions converges to J0(2*pi*d_m/lambda)
/// as the path count grows.
pub fn draw_multipath_pair<R: Rng>(
    params: &MultipathFieldParams,
    d_m: f64,
    wavelength_m: f64,
    rng: &mut R,
) -> MultipathDraw {
    debug_assert!(d_m >= 0.0 && wavelength_m > 0.0);
    let n = params.bs_antennas;
    let p = params.num_paths;
    let mut h_pa = vec![Complex64::new(0.0, 0.0); n];
    let mut h_ra = vec![Complex64::new(0.0, 0.0); n];

    // Equispaced direction-cosine lattice over the departure window with one
    // uniform rotation per draw (equal-angle sum-of-sinusoids). Over the full
    // band at half-wavelength spacing the lattice makes the steering rows
    // exactly orthonormal for N <= P, so the elements are exactly i.i.d.
    // complex Gaussian draw by draw.
    let window_half = (0.5 * params.bs_angular_spread_deg.min(180.0).to_radians()).sin();
    let stride = 2.0 * window_half / p as f64;
    let lattice_shift: f64 = rng.gen();
    let shift_scale = 2.0 * PI * d_m / wavelength_m;

    for path in 0..p {
        let alpha = complex_gaussian(1.0, rng);
        let u = -window_half + (path as f64 + lattice_shift) * stride;
        let phi_vehicle = rng.gen::<f64>() * 2.0 * PI;
        let shift = Complex64::from_polar(1.0, shift_scale * phi_vehicle.cos());
        let alpha_ra = alpha * shift;

        // Incremental steering phasor avoids a sin/cos per element.
        let step =
            Complex64::from_polar(1.0, 2.0 * PI * params.array_spacing_wavelengths * u);
        let mut steer = Complex64::new(1.0, 0.0);
        for k in 0..n {
            h_pa[k] += alpha * steer;
            h_ra[k] += alpha_ra * steer;
            steer *= step;
        }
    }

    let norm = (p as f64).sqrt();
    for k in 0..n {
        h_pa[k] /= norm;
        h_ra[k] /= norm;
    }
    MultipathDraw {
        h_pa,
        h_ra,
        correlation_used: jakes_correlation(d_m, wavelength_m),
    }
}
