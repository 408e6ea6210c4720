//! Design file: a TOML document in I/O units (µm, GHz).
//!
//! ```toml
//! target_f0_ghz = 20.5          # optional
//!
//! [substrate]
//! preset = "hr-silicon"         # optional; explicit keys below override it
//! eps_r = 11.9
//! mu_r = 1.0
//! tan_delta = 0.0
//! h_um = 500.0
//!
//! [geometry]
//! w_um = 3150.0                 # via-center to via-center
//! l_um = 3150.0
//! d_um = 200.0
//! p_um = 250.0
//! probe_w_um = 320.0            # optional, metadata only
//! probe_l_um = 840.0            # optional, metadata only
//! ```
//!
//! Unknown keys are rejected. When `[substrate]` is omitted the
//! high-resistivity silicon preset is used. Lines starting with `#` are
//! comments; `design` output uses them for the validity report.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{CavityGeometry, ModelError, ResonatorDesign, Substrate};
use crate::units::{ghz, tidy, to_ghz, to_um, um};

#[derive(Debug, Error)]
pub enum DesignFileError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("design file syntax: {0}")]
    Syntax(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubstrateSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu_r: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tan_delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h_um: Option<f64>,
}

impl SubstrateSection {
    pub fn resolve(&self) -> Result<Substrate, ModelError> {
        let base = match &self.preset {
            Some(name) => Substrate::preset(name)?,
            None => Substrate::default(),
        };
        Substrate::new(
            self.eps_r.unwrap_or(base.eps_r()),
            self.mu_r.unwrap_or(base.mu_r()),
            self.tan_delta.unwrap_or(base.tan_delta()),
            self.h_um.map(um).unwrap_or(base.h()),
        )
    }

    pub fn explicit(s: &Substrate) -> Self {
        Self {
            preset: None,
            eps_r: Some(s.eps_r()),
            mu_r: Some(s.mu_r()),
            tan_delta: Some(s.tan_delta()),
            h_um: Some(tidy(to_um(s.h()))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub w_um: f64,
    pub l_um: f64,
    pub d_um: f64,
    pub p_um: f64,
    #[serde(default)]
    pub probe_w_um: f64,
    #[serde(default)]
    pub probe_l_um: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_f0_ghz: Option<f64>,
    #[serde(default)]
    pub substrate: SubstrateSection,
    pub geometry: GeometrySection,
}

impl DesignDocument {
    pub fn from_design(design: &ResonatorDesign) -> Self {
        let [w, l, d, p, pw, pl] = design.geometry.to_um().map(tidy);
        Self {
            target_f0_ghz: design.target_f0().map(|f| tidy(to_ghz(f))),
            substrate: SubstrateSection::explicit(&design.substrate),
            geometry: GeometrySection { w_um: w, l_um: l, d_um: d, p_um: p, probe_w_um: pw, probe_l_um: pl },
        }
    }

    pub fn to_design(&self) -> Result<ResonatorDesign, ModelError> {
        let g = &self.geometry;
        let geometry = CavityGeometry::with_probe(
            um(g.w_um),
            um(g.l_um),
            um(g.d_um),
            um(g.p_um),
            um(g.probe_w_um),
            um(g.probe_l_um),
        )?;
        ResonatorDesign::new(self.substrate.resolve()?, geometry, self.target_f0_ghz.map(ghz))
    }
}

pub fn parse_design(text: &str) -> Result<ResonatorDesign, DesignFileError> {
    let doc: DesignDocument = toml::from_str(text).map_err(|e| DesignFileError::Syntax(e.to_string()))?;
    Ok(doc.to_design()?)
}

pub fn load_design(path: &Path) -> Result<ResonatorDesign, DesignFileError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| DesignFileError::Io { path: path.display().to_string(), source })?;
    parse_design(&text)
}

/// Serializes `design`; `header` lines are emitted first as `#` comments.
pub fn write_design(design: &ResonatorDesign, header: &[String]) -> String {
    let mut out = String::new();
    for line in header {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    if !header.is_empty() {
        out.push('\n');
    }
    out.push_str(&toml::to_string(&DesignDocument::from_design(design)).expect("design serializes"));
    out
}

/// Substrate from a preset name or a TOML file holding a `[substrate]`-style
/// table at top level.
pub fn load_substrate(spec: &str) -> Result<Substrate, DesignFileError> {
    if let Ok(s) = Substrate::preset(spec) {
        return Ok(s);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(ModelError::UnknownPreset(spec.to_string()).into());
    }
    let text = std::fs::read_to_string(path)
        .map_err(|source| DesignFileError::Io { path: spec.to_string(), source })?;
    let section: SubstrateSection =
        toml::from_str(&text).map_err(|e| DesignFileError::Syntax(e.to_string()))?;
    Ok(section.resolve()?)
}
