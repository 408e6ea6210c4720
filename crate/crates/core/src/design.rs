//! Closed-form TE101 forward model of the post-wall cavity and its inverse.
//!
//! The via fence is replaced by an equivalent solid-wall cavity of width
//! `w_eff = w − d²/(0.95·p)` (same correction on the length), whose TE101
//! frequency is that of a dielectric-filled rectangular cavity.

use std::f64::consts::PI;
use std::str::FromStr;

use thiserror::Error;

use crate::model::{validate_design, CavityGeometry, ModelError, ResonatorDesign};
use crate::units::{to_ghz, to_um, SPEED_OF_LIGHT};
use crate::Substrate;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DesignError {
    #[error("post-wall correction {correction:.4e} m consumes the cavity (w = {w:.4e} m, l = {l:.4e} m)")]
    DegenerateCavity { correction: f64, w: f64, l: f64 },
    #[error("target frequency must be positive, got {0} Hz")]
    InvalidTarget(f64),
    #[error("aspect ratio must be positive, got {0}")]
    InvalidAspect(f64),
    #[error("unknown sweep parameter `{0}` (expected one of w, l, d, p, eps_r)")]
    UnknownParameter(String),
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Equivalent solid-wall dimensions of the post-wall cavity, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveDims {
    pub w_eff: f64,
    pub l_eff: f64,
}

/// Post-wall correction `d²/(0.95·p)`.
pub fn post_wall_correction(d: f64, p: f64) -> f64 {
    d * d / (0.95 * p)
}

pub fn effective_dimensions(geometry: &CavityGeometry) -> Result<EffectiveDims, DesignError> {
    let correction = post_wall_correction(geometry.d(), geometry.p());
    if correction >= geometry.w() || correction >= geometry.l() {
        return Err(DesignError::DegenerateCavity { correction, w: geometry.w(), l: geometry.l() });
    }
    Ok(EffectiveDims { w_eff: geometry.w() - correction, l_eff: geometry.l() - correction })
}

/// TE101 frequency of a solid-wall rectangular cavity `a × b` filled with
/// `substrate`.
pub fn rectangular_te101(substrate: &Substrate, a: f64, b: f64) -> f64 {
    SPEED_OF_LIGHT / (2.0 * PI * substrate.index()) * ((PI / a).powi(2) + (PI / b).powi(2)).sqrt()
}

/// TE101 resonant frequency of the via-fenced cavity, in Hz.
pub fn resonant_frequency(substrate: &Substrate, geometry: &CavityGeometry) -> Result<f64, DesignError> {
    let eff = effective_dimensions(geometry)?;
    Ok(rectangular_te101(substrate, eff.w_eff, eff.l_eff))
}

/// Inverse design: the cavity whose TE101 frequency is `target_f0`.
///
/// `aspect` is `l_eff / w_eff`, defined on the effective dimensions so the
/// inverse stays closed-form.
pub fn synthesize_cavity(
    target_f0: f64,
    substrate: &Substrate,
    d: f64,
    p: f64,
    aspect: f64,
) -> Result<CavityGeometry, DesignError> {
    if !(target_f0.is_finite() && target_f0 > 0.0) {
        return Err(DesignError::InvalidTarget(target_f0));
    }
    if !(aspect.is_finite() && aspect > 0.0) {
        return Err(DesignError::InvalidAspect(aspect));
    }
    if !(d > 0.0 && d < p) {
        return Err(ModelError::InvalidGeometry(format!(
            "via diameter must satisfy 0 < d < p, got d={d} m, p={p} m"
        ))
        .into());
    }
    let w_eff =
        SPEED_OF_LIGHT * (1.0 + 1.0 / (aspect * aspect)).sqrt() / (2.0 * substrate.index() * target_f0);
    let l_eff = aspect * w_eff;
    let correction = post_wall_correction(d, p);
    Ok(CavityGeometry::new(w_eff + correction, l_eff + correction, d, p)?)
}

/// Geometry or material quantity a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParameter {
    W,
    L,
    D,
    P,
    EpsR,
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            SweepParameter::W => "w",
            SweepParameter::L => "l",
            SweepParameter::D => "d",
            SweepParameter::P => "p",
            SweepParameter::EpsR => "eps_r",
        }
    }

    /// Whether values are lengths (SI meters, µm on I/O) or dimensionless.
    pub fn is_length(&self) -> bool {
        !matches!(self, SweepParameter::EpsR)
    }

    fn apply(&self, design: &ResonatorDesign, value: f64) -> Result<ResonatorDesign, ModelError> {
        let g = &design.geometry;
        let (mut w, mut l, mut d, mut p) = (g.w(), g.l(), g.d(), g.p());
        let mut substrate = design.substrate;
        match self {
            SweepParameter::W => w = value,
            SweepParameter::L => l = value,
            SweepParameter::D => d = value,
            SweepParameter::P => p = value,
            SweepParameter::EpsR => substrate = substrate.with_eps_r(value)?,
        }
        let geometry = CavityGeometry::with_probe(w, l, d, p, g.probe_w(), g.probe_l())?;
        ResonatorDesign::new(substrate, geometry, design.target_f0())
    }
}

impl FromStr for SweepParameter {
    type Err = DesignError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "w" => Ok(SweepParameter::W),
            "l" => Ok(SweepParameter::L),
            "d" => Ok(SweepParameter::D),
            "p" => Ok(SweepParameter::P),
            "eps_r" | "epsr" | "er" => Ok(SweepParameter::EpsR),
            _ => Err(DesignError::UnknownParameter(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    /// Swept value, SI.
    pub value: f64,
    /// `None` when the sampled design is outside the model's domain
    /// (invalid geometry or degenerate cavity).
    pub f101: Option<f64>,
    /// Both printed validity rules hold.
    pub valid: bool,
}

/// Evaluates the forward model at `steps` evenly spaced values of `parameter`.
///
/// Rows outside the model's stated domain are reported, not rejected.
pub fn parameter_sweep(
    design: &ResonatorDesign,
    parameter: SweepParameter,
    start: f64,
    stop: f64,
    steps: usize,
) -> Result<Vec<SweepRow>, DesignError> {
    if steps < 2 {
        return Err(DesignError::InvalidSweep(format!("steps must be >= 2, got {steps}")));
    }
    if !(start.is_finite() && stop.is_finite()) {
        return Err(DesignError::InvalidSweep("range must be finite".into()));
    }
    let rows = crate::units::linspace(start, stop, steps)
        .into_iter()
        .map(|value| {
            let Ok(sample) = parameter.apply(design, value) else {
                return SweepRow { value, f101: None, valid: false };
            };
            let f101 = resonant_frequency(&sample.substrate, &sample.geometry).ok();
            let valid = f101.is_some() && validate_design(&sample).map(|r| r.is_valid()).unwrap_or(false);
            SweepRow { value, f101, valid }
        })
        .collect();
    Ok(rows)
}

/// Writes sweep rows as CSV (`param_value,f101_GHz,valid`); lengths in µm.
pub fn write_sweep_csv<W: std::io::Write>(
    out: W,
    parameter: SweepParameter,
    rows: &[SweepRow],
) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["param_value", "f101_GHz", "valid"])?;
    for row in rows {
        let value = if parameter.is_length() { to_um(row.value) } else { row.value };
        wtr.write_record([
            format!("{}", (value * 1e6).round() / 1e6),
            row.f101.map(|f| format!("{:.9}", to_ghz(f))).unwrap_or_default(),
            row.valid.to_string(),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
