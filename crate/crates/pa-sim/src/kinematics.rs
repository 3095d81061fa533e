//! Geometry of the predictor-antenna displacement problem: wavelengths,
//! spatial mismatch, adaptive transmission delays and the maximum supported
//! speed per predictor horizon.

use crate::error::{Result, SimError};

/// Speed of light, pinned so the supported-speed table is bit-reproducible.
pub const SPEED_OF_LIGHT_M_S: f64 = 2.998e8;

/// Carrier settings; only the frequency varies between experiments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierConfig {
    pub carrier_frequency_hz: f64,
}

impl CarrierConfig {
    pub fn new(carrier_frequency_hz: f64) -> Result<Self> {
        if !(carrier_frequency_hz > 0.0) || !carrier_frequency_hz.is_finite() {
            return Err(SimError::InvalidConfig(format!(
                "carrier_frequency_hz must be positive and finite, got {carrier_frequency_hz}"
            )));
        }
        Ok(Self {
            carrier_frequency_hz,
        })
    }

    /// Carrier wavelength in meters, c / f.
    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT_M_S / self.carrier_frequency_hz
    }
}

/// Vehicle speed and antenna placement for one operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MobilityConfig {
    pub speed_m_s: f64,
    pub antenna_separation_m: f64,
    pub processing_delay_s: f64,
    pub min_processing_delay_s: f64,
}

impl MobilityConfig {
    pub fn new(
        speed_m_s: f64,
        antenna_separation_m: f64,
        processing_delay_s: f64,
        min_processing_delay_s: f64,
    ) -> Result<Self> {
        if !(speed_m_s >= 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "speed_m_s must be nonnegative, got {speed_m_s}"
            )));
        }
        if !(antenna_separation_m > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "antenna_separation_m must be positive, got {antenna_separation_m}"
            )));
        }
        if !(min_processing_delay_s > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "min_processing_delay_s must be positive, got {min_processing_delay_s}"
            )));
        }
        if processing_delay_s < min_processing_delay_s {
            return Err(SimError::InvalidConfig(format!(
                "processing_delay_s {processing_delay_s} below minimum {min_processing_delay_s}"
            )));
        }
        Ok(Self {
            speed_m_s,
            antenna_separation_m,
            processing_delay_s,
            min_processing_delay_s,
        })
    }
}

/// Prediction horizon in carrier wavelengths. 1.5 for the predictor-antenna
/// setup, 0.3 for the Kalman-predictor baseline; arbitrary positive values
/// are accepted for sweeps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HorizonConstant(f64);

impl HorizonConstant {
    pub const PA: HorizonConstant = HorizonConstant(1.5);
    pub const KALMAN: HorizonConstant = HorizonConstant(0.3);

    pub fn new(horizon_wavelengths: f64) -> Result<Self> {
        if !(horizon_wavelengths > 0.0) {
            return Err(SimError::InvalidConfig(format!(
                "horizon must be positive, got {horizon_wavelengths}"
            )));
        }
        Ok(Self(horizon_wavelengths))
    }

    pub fn wavelengths(&self) -> f64 {
        self.0
    }
}

/// Maximum vehicle speed, in km/h, at which the predictor still covers the
/// distance traveled during `delay_s`: v_max = horizon * wavelength / delay.
pub fn max_supported_speed(
    cfg: &CarrierConfig,
    delay_s: f64,
    horizon: HorizonConstant,
) -> Result<f64> {
    if !(delay_s > 0.0) {
        return Err(SimError::InvalidConfig(format!(
            "delay_s must be positive, got {delay_s}"
        )));
    }
    Ok(3.6 * horizon.wavelengths() * cfg.wavelength_m() / delay_s)
}

/// Spatial mismatch |d_a - v * L| between the point where the predictor
/// antenna sounded the channel and the point where the receive antenna
/// actually gets the data.
pub fn mismatch_distance(mob: &MobilityConfig) -> f64 {
    (mob.antenna_separation_m - mob.speed_m_s * mob.processing_delay_s).abs()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptiveDelay {
    pub delay_s: f64,
    pub feasible: bool,
}

/// Delay d_a / v that makes the receive antenna arrive exactly where the
/// pilots were sent. Feasible only while that delay stays at or above the
/// access point's minimum processing delay; otherwise the caller falls back
/// to the nonadaptive (fixed minimum delay) behaviour.
pub fn adaptive_delay(mob: &MobilityConfig) -> AdaptiveDelay {
    if mob.speed_m_s > 0.0 {
        let delay = mob.antenna_separation_m / mob.speed_m_s;
        if delay >= mob.min_processing_delay_s {
            return AdaptiveDelay {
                delay_s: delay,
                feasible: true,
            };
        }
    }
    AdaptiveDelay {
        delay_s: mob.min_processing_delay_s,
        feasible: false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn carrier(f: f64) -> CarrierConfig {
        CarrierConfig::new(f).unwrap()
    }

    #[test]
    fn wavelength_examples() {
        assert!((carrier(2.68e9).wavelength_m() - 0.1119).abs() < 1e-4);
        assert!((carrier(SPEED_OF_LIGHT_M_S).wavelength_m() - 1.0).abs() < 1e-12);
        assert!((carrier(1e9).wavelength_m() - 0.2998).abs() < 1e-12);
    }

    #[test]
    fn wavelength_rejects_bad_frequency() {
        assert!(CarrierConfig::new(0.0).is_err());
        assert!(CarrierConfig::new(-1e9).is_err());
        assert!(CarrierConfig::new(f64::NAN).is_err());
    }

    #[test]
    fn supported_speed_examples() {
        let v = |f, d, h| max_supported_speed(&carrier(f), d, h).unwrap().round();
        assert_eq!(v(1e9, 5e-3, HorizonConstant::PA), 324.0);
        assert_eq!(v(2.68e9, 5e-3, HorizonConstant::KALMAN), 24.0);
        assert_eq!(v(2.68e9, 1e-3, HorizonConstant::PA), 604.0);
        assert_eq!(v(6e9, 5e-3, HorizonConstant::PA), 54.0);
    }

    #[test]
    fn supported_speed_rejects_bad_delay() {
        assert!(max_supported_speed(&carrier(1e9), 0.0, HorizonConstant::PA).is_err());
        assert!(max_supported_speed(&carrier(1e9), -1e-3, HorizonConstant::PA).is_err());
    }

    #[test]
    fn supported_speed_linearity() {
        let c = carrier(3.5e9);
        for &d in &[1e-3, 2.5e-3, 7e-3] {
            let v1 = max_supported_speed(&c, d, HorizonConstant::PA).unwrap();
            let v2 = max_supported_speed(&c, 2.0 * d, HorizonConstant::PA).unwrap();
            assert!((v1 - 2.0 * v2).abs() < 1e-9 * v1);
            let vk = max_supported_speed(&c, d, HorizonConstant::KALMAN).unwrap();
            assert!((v1 / vk - 1.5 / 0.3).abs() < 1e-9);
        }
    }

    #[test]
    fn mismatch_examples() {
        let m = MobilityConfig::new(33.58, 0.1679, 5e-3, 5e-3).unwrap();
        assert!(mismatch_distance(&m).abs() < 1e-6);

        let sep = 1.5 * carrier(2.68e9).wavelength_m();
        let m = MobilityConfig::new(0.0, sep, 5e-3, 5e-3).unwrap();
        assert!((mismatch_distance(&m) - 0.1678).abs() < 1e-4);

        // 100 km/h, 5 ms, zero nominal separation is not constructible
        // (separation must be positive); the traveled distance alone:
        let lam35 = carrier(3.5e9).wavelength_m();
        let m = MobilityConfig::new(27.78, 1e-12, 5e-3, 5e-3).unwrap();
        let d = mismatch_distance(&m);
        assert!((d - 0.1389).abs() < 1e-4);
        assert!((d / lam35 - 1.62).abs() < 0.01);
    }

    #[test]
    fn adaptive_delay_examples() {
        let mk = |v| MobilityConfig::new(v, 0.1679, 5e-3, 5e-3).unwrap();

        let a = adaptive_delay(&mk(16.67));
        assert!(a.feasible);
        assert!((a.delay_s - 10.07e-3).abs() < 0.01e-3);

        let a = adaptive_delay(&mk(33.58));
        assert!(a.feasible);
        assert!((a.delay_s - 5.0e-3).abs() < 0.001e-3);

        let a = adaptive_delay(&mk(55.56));
        assert!(!a.feasible);
        assert_eq!(a.delay_s, 5e-3);

        let a = adaptive_delay(&mk(0.0));
        assert!(!a.feasible);
        assert_eq!(a.delay_s, 5e-3);
    }

    #[test]
    fn adaptive_delay_gives_zero_mismatch_when_feasible() {
        for &v in &[1.0, 8.0, 16.67, 30.0, 33.5] {
            let mob = MobilityConfig::new(v, 0.1679, 5e-3, 5e-3).unwrap();
            let a = adaptive_delay(&mob);
            if a.feasible {
                let at_delay =
                    MobilityConfig::new(v, 0.1679, a.delay_s, 5e-3).unwrap();
                assert!(mismatch_distance(&at_delay) < 1e-12);
            }
        }
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn speed_scales_inversely_with_delay(
                f in 1e8f64..1e11,
                d in 1e-4f64..1e-1,
                h in 0.05f64..5.0,
            ) {
                let c = carrier(f);
                let hz = HorizonConstant::new(h).unwrap();
                let v1 = max_supported_speed(&c, d, hz).unwrap();
                let v2 = max_supported_speed(&c, 2.0 * d, hz).unwrap();
                prop_assert!((v1 - 2.0 * v2).abs() <= 1e-12 * v1.abs());
                let v3 = max_supported_speed(&c, d, HorizonConstant::new(2.0 * h).unwrap()).unwrap();
                prop_assert!((v3 - 2.0 * v1).abs() <= 1e-12 * v3.abs());
            }

            #[test]
            fn feasible_adaptive_delay_means_zero_mismatch(
                v in 0.0f64..200.0,
                sep in 1e-3f64..2.0,
                min_delay in 1e-4f64..5e-2,
            ) {
                let mob = MobilityConfig::new(v, sep, min_delay, min_delay).unwrap();
                let a = adaptive_delay(&mob);
                prop_assert!(a.delay_s >= min_delay);
                if a.feasible {
                    let at = MobilityConfig::new(v, sep, a.delay_s, min_delay).unwrap();
                    prop_assert!(mismatch_distance(&at) < 1e-9 * sep);
                }
            }
        }
    }
}
