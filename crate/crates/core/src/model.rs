//! Domain types shared by every module: substrate, via-fenced cavity geometry,
//! a resonator design and its validity report.
//!
//! Everything is stored in SI units (m, Hz). Constructors taking `_um` /
//! `_ghz` arguments exist for the I/O surfaces.

use std::fmt;

use thiserror::Error;

use crate::design;
use crate::units::{free_space_wavelength, ghz, to_ghz, to_um, um};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid substrate: {0}")]
    InvalidSubstrate(String),
    #[error("invalid cavity geometry: {0}")]
    InvalidGeometry(String),
    #[error("target frequency must be positive, got {0} Hz")]
    InvalidTarget(f64),
    #[error("no frequency derivable: no target_f0 and the forward model failed")]
    MissingFrequency,
    #[error("unknown substrate preset `{0}` (known: {known})", known = Substrate::PRESETS.join(", "))]
    UnknownPreset(String),
}

/// Dielectric substrate filling the cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Substrate {
    eps_r: f64,
    mu_r: f64,
    tan_delta: f64,
    h: f64,
}

impl Substrate {
    pub const PRESETS: &'static [&'static str] = &["hr-silicon", "air", "rt-duroid-5880"];

    pub fn new(eps_r: f64, mu_r: f64, tan_delta: f64, h: f64) -> Result<Self, ModelError> {
        if !(eps_r.is_finite() && eps_r >= 1.0) {
            return Err(ModelError::InvalidSubstrate(format!("eps_r must be >= 1, got {eps_r}")));
        }
        if !(mu_r.is_finite() && mu_r > 0.0) {
            return Err(ModelError::InvalidSubstrate(format!("mu_r must be > 0, got {mu_r}")));
        }
        if !(tan_delta.is_finite() && tan_delta >= 0.0) {
            return Err(ModelError::InvalidSubstrate(format!("tan_delta must be >= 0, got {tan_delta}")));
        }
        if !(h.is_finite() && h > 0.0) {
            return Err(ModelError::InvalidSubstrate(format!("thickness must be > 0, got {h} m")));
        }
        Ok(Self { eps_r, mu_r, tan_delta, h })
    }

    pub fn from_um(eps_r: f64, mu_r: f64, tan_delta: f64, h_um: f64) -> Result<Self, ModelError> {
        Self::new(eps_r, mu_r, tan_delta, um(h_um))
    }

    /// High-resistivity silicon, 500 µm thick. Loss tangent is not modelled.
    pub fn high_resistivity_silicon() -> Self {
        Self { eps_r: 11.9, mu_r: 1.0, tan_delta: 0.0, h: 500e-6 }
    }

    pub fn air(h: f64) -> Self {
        Self { eps_r: 1.0, mu_r: 1.0, tan_delta: 0.0, h }
    }

    /// Looks up one of [`Substrate::PRESETS`].
    pub fn preset(name: &str) -> Result<Self, ModelError> {
        match name.to_ascii_lowercase().as_str() {
            "hr-silicon" | "silicon" | "high-resistivity-silicon" => Ok(Self::high_resistivity_silicon()),
            "air" => Ok(Self::air(500e-6)),
            "rt-duroid-5880" => Ok(Self { eps_r: 2.2, mu_r: 1.0, tan_delta: 9e-4, h: 508e-6 }),
            _ => Err(ModelError::UnknownPreset(name.to_string())),
        }
    }

    pub fn eps_r(&self) -> f64 {
        self.eps_r
    }
    pub fn mu_r(&self) -> f64 {
        self.mu_r
    }
    pub fn tan_delta(&self) -> f64 {
        self.tan_delta
    }
    /// Thickness in meters.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Refractive index √(µr·εr).
    pub fn index(&self) -> f64 {
        (self.mu_r * self.eps_r).sqrt()
    }

    pub fn with_eps_r(&self, eps_r: f64) -> Result<Self, ModelError> {
        Self::new(eps_r, self.mu_r, self.tan_delta, self.h)
    }
}

impl Default for Substrate {
    fn default() -> Self {
        Self::high_resistivity_silicon()
    }
}

/// Via-fenced rectangular cavity. `w` and `l` are measured via-center to
/// via-center. Probe dimensions are metadata only; 0 means unspecified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    w: f64,
    l: f64,
    d: f64,
    p: f64,
    probe_w: f64,
    probe_l: f64,
}

impl CavityGeometry {
    /// `d = 0` is accepted and means solid walls (no post correction).
    pub fn new(w: f64, l: f64, d: f64, p: f64) -> Result<Self, ModelError> {
        Self::with_probe(w, l, d, p, 0.0, 0.0)
    }

    pub fn with_probe(
        w: f64,
        l: f64,
        d: f64,
        p: f64,
        probe_w: f64,
        probe_l: f64,
    ) -> Result<Self, ModelError> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(w) || !positive(l) {
            return Err(ModelError::InvalidGeometry(format!("w and l must be > 0, got w={w} m, l={l} m")));
        }
        if !positive(p) {
            return Err(ModelError::InvalidGeometry(format!("pitch must be > 0, got {p} m")));
        }
        if !(d.is_finite() && d >= 0.0 && d < p) {
            return Err(ModelError::InvalidGeometry(format!(
                "via diameter must satisfy 0 <= d < p, got d={d} m, p={p} m"
            )));
        }
        if !(probe_w.is_finite() && probe_w >= 0.0 && probe_l.is_finite() && probe_l >= 0.0) {
            return Err(ModelError::InvalidGeometry("probe dimensions must be >= 0".into()));
        }
        Ok(Self { w, l, d, p, probe_w, probe_l })
    }

    pub fn from_um(w: f64, l: f64, d: f64, p: f64) -> Result<Self, ModelError> {
        Self::new(um(w), um(l), um(d), um(p))
    }

    /// The resonator from the reference design: 3150 µm square, 200 µm vias
    /// at 250 µm pitch, probe Wp = 320 µm, Lp = 840 µm.
    pub fn reference_resonator() -> Self {
        Self { w: 3150e-6, l: 3150e-6, d: 200e-6, p: 250e-6, probe_w: 320e-6, probe_l: 840e-6 }
    }

    pub fn w(&self) -> f64 {
        self.w
    }
    pub fn l(&self) -> f64 {
        self.l
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn p(&self) -> f64 {
        self.p
    }
    pub fn probe_w(&self) -> f64 {
        self.probe_w
    }
    pub fn probe_l(&self) -> f64 {
        self.probe_l
    }

    /// (w, l, d, p, probe_w, probe_l) in µm.
    pub fn to_um(&self) -> [f64; 6] {
        [self.w, self.l, self.d, self.p, self.probe_w, self.probe_l].map(to_um)
    }

    /// Same cavity with width and length exchanged.
    pub fn transposed(&self) -> Self {
        Self { w: self.l, l: self.w, ..*self }
    }
}

/// Substrate + geometry, optionally with the frequency it was designed for.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonatorDesign {
    pub substrate: Substrate,
    pub geometry: CavityGeometry,
    target_f0: Option<f64>,
}

impl ResonatorDesign {
    pub fn new(
        substrate: Substrate,
        geometry: CavityGeometry,
        target_f0: Option<f64>,
    ) -> Result<Self, ModelError> {
        if let Some(f) = target_f0 {
            if !(f.is_finite() && f > 0.0) {
                return Err(ModelError::InvalidTarget(f));
            }
        }
        Ok(Self { substrate, geometry, target_f0 })
    }

    pub fn target_f0(&self) -> Option<f64> {
        self.target_f0
    }

    pub fn target_f0_ghz(&self) -> Option<f64> {
        self.target_f0.map(to_ghz)
    }
}

/// Identifier of a geometry rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleId {
    /// p < λ0·√εr / 2, evaluated exactly as the design rule is usually printed.
    PitchVsWavelength,
    /// p < 4d.
    PitchVsDiameter,
    /// p < λ0 / (2·√εr), half the guided wavelength.
    PitchVsGuidedWavelength,
}

impl RuleId {
    pub fn as_str(&self) -> &'static str {
        match self {
            RuleId::PitchVsWavelength => "pitch-lt-lambda0-sqrt-er-over-2",
            RuleId::PitchVsDiameter => "pitch-lt-4d",
            RuleId::PitchVsGuidedWavelength => "conservative:pitch-lt-lambda0-over-2-sqrt-er",
        }
    }

    /// Whether the rule is one of the two printed model-validity rules
    /// (as opposed to the conservative reading).
    pub fn is_printed(&self) -> bool {
        !matches!(self, RuleId::PitchVsGuidedWavelength)
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleCheck {
    pub id: RuleId,
    pub satisfied: bool,
    /// Left-hand side of `lhs < rhs`, SI units.
    pub lhs: f64,
    pub rhs: f64,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport {
    /// Frequency the wavelength rules were evaluated at, Hz.
    pub frequency: f64,
    pub rules: Vec<RuleCheck>,
}

impl ValidityReport {
    pub fn rule(&self, id: RuleId) -> Option<&RuleCheck> {
        self.rules.iter().find(|r| r.id == id)
    }

    /// Both printed rules satisfied.
    pub fn is_valid(&self) -> bool {
        self.rules.iter().filter(|r| r.id.is_printed()).all(|r| r.satisfied)
    }

    /// All rules, including the conservative one, satisfied.
    pub fn is_valid_conservative(&self) -> bool {
        self.rules.iter().all(|r| r.satisfied)
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "[{}] {}: {}", if r.satisfied { "ok" } else { "FAIL" }, r.id, r.message)?;
        }
        Ok(())
    }
}

/// Checks the post-wall model's validity rules for `design`.
///
/// λ0 is taken at the design's target frequency if set, otherwise at the
/// forward-model resonant frequency.
pub fn validate_design(design: &ResonatorDesign) -> Result<ValidityReport, ModelError> {
    let freq = match design.target_f0 {
        Some(f) => f,
        None => design::resonant_frequency(&design.substrate, &design.geometry)
            .map_err(|_| ModelError::MissingFrequency)?,
    };
    let g = &design.geometry;
    let sqrt_er = design.substrate.eps_r().sqrt();
    let lambda0 = free_space_wavelength(freq);
    let p = g.p();

    let check = |id: RuleId, rhs: f64, rhs_label: &str| {
        let satisfied = p < rhs;
        RuleCheck {
            id,
            satisfied,
            lhs: p,
            rhs,
            message: format!(
                "p = {:.3} um {} {} = {:.3} um",
                to_um(p),
                if satisfied { "<" } else { ">=" },
                rhs_label,
                to_um(rhs)
            ),
        }
    };

    let rules = vec![
        check(RuleId::PitchVsWavelength, lambda0 * sqrt_er / 2.0, "lambda0*sqrt(er)/2"),
        check(RuleId::PitchVsDiameter, 4.0 * g.d(), "4d"),
        check(RuleId::PitchVsGuidedWavelength, lambda0 / (2.0 * sqrt_er), "lambda0/(2*sqrt(er))"),
    ];
    Ok(ValidityReport { frequency: freq, rules })
}

/// Helper for callers that hold I/O units.
pub fn design_from_io_units(
    substrate: Substrate,
    w_um: f64,
    l_um: f64,
    d_um: f64,
    p_um: f64,
    target_f0_ghz: Option<f64>,
) -> Result<ResonatorDesign, ModelError> {
    let geometry = CavityGeometry::from_um(w_um, l_um, d_um, p_um)?;
    ResonatorDesign::new(substrate, geometry, target_f0_ghz.map(ghz))
}
