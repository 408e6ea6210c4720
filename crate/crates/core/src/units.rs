//! Unit conversions between the I/O units (GHz, MHz, µm) and the SI units
//! used internally.

/// Speed of light in vacuum, m/s (exact).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Half-power level, 10·log10(2) dB.
pub const HALF_POWER_DB: f64 = 3.010_299_956_639_812;

/// Physical constants used by the models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Speed of light in vacuum, m/s.
    pub c: f64,
}

impl PhysicalConstants {
    pub const SI: PhysicalConstants = PhysicalConstants { c: SPEED_OF_LIGHT };
}

#[inline]
pub fn um(value: f64) -> f64 {
    value * 1e-6
}

#[inline]
pub fn to_um(meters: f64) -> f64 {
    meters * 1e6
}

/// Rounds to 9 decimals so unit conversions print without float noise
/// (`199.99999999999997` becomes `200`).
pub fn tidy(value: f64) -> f64 {
    let r = (value * 1e9).round() / 1e9;
    if r.is_finite() {
        r
    } else {
        value
    }
}

#[inline]
pub fn ghz(value: f64) -> f64 {
    value * 1e9
}

#[inline]
pub fn to_ghz(hz: f64) -> f64 {
    hz * 1e-9
}

#[inline]
pub fn mhz(value: f64) -> f64 {
    value * 1e6
}

#[inline]
pub fn to_mhz(hz: f64) -> f64 {
    hz * 1e-6
}

/// Free-space wavelength at `freq` Hz.
#[inline]
pub fn free_space_wavelength(freq: f64) -> f64 {
    SPEED_OF_LIGHT / freq
}

/// Converts a linear magnitude to dB (20·log10).
#[inline]
pub fn mag_to_db(mag: f64) -> f64 {
    20.0 * mag.log10()
}

#[inline]
pub fn db_to_mag(db: f64) -> f64 {
    10f64.powf(db / 20.0)
}

/// Evenly spaced grid of `n` points from `start` to `stop`, endpoints exact.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n).map(|i| if i == n - 1 { stop } else { start + step * i as f64 }).collect()
        }
    }
}
