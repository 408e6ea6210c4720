//! Finite-difference eigenmode check of the TE101 frequency.
//!
//! With the field uniform through the substrate height, the cavity reduces
//! to the 2-D Dirichlet Helmholtz problem `−∇²Ey = k²·Ey` on the via-fenced
//! cross-section; `f = c·k / (2π·√(µr·εr))`. The vias are conductor disks
//! on a uniform grid and the whole fence is enclosed in a conducting box one
//! pitch outside.

mod raster;
mod solver;

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use thiserror::Error;

pub use raster::{
    rasterize, rasterize_with_spacing, via_centers, DiscretizedCavity, Provenance, MIN_NODES,
    MIN_NODES_PER_VIA,
};

use crate::design::{self, rectangular_te101, DesignError};
use crate::model::ResonatorDesign;
use crate::units::{to_ghz, SPEED_OF_LIGHT};
use crate::Substrate;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("grid too coarse: {0}")]
    ResolutionTooCoarse(String),
    #[error("invalid cavity: {0}")]
    InvalidCavity(String),
    #[error("eigen solver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error(transparent)]
    Design(#[from] DesignError),
}

/// Solver limits. `tol` bounds the relative eigen-residual
/// `‖A·v − k²·v‖ / (k²·‖v‖)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: f64,
    pub max_iterations: usize,
    pub max_cg_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iterations: 500, max_cg_iterations: 50_000 }
    }
}

impl SolverOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenResult {
    /// Smallest eigenvalue k², 1/m².
    pub k_squared: f64,
    pub f_oracle: f64,
    /// Ey on the `nx × ny` grid (row-major in y), max |Ey| = 1, conductor nodes 0.
    pub field: Vec<f64>,
    pub nx: usize,
    pub ny: usize,
    pub spacing: f64,
    pub iterations: usize,
    pub cg_iterations: usize,
    pub residual: f64,
}

impl EigenResult {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.field[j * self.nx + i]
    }
}

/// Frequency of a mode with Helmholtz eigenvalue `k_squared` in `substrate`.
pub fn frequency_from_k_squared(k_squared: f64, substrate: &Substrate) -> f64 {
    SPEED_OF_LIGHT * k_squared.sqrt() / (2.0 * PI * substrate.index())
}

/// Dominant (lowest) mode of `cavity`.
pub fn solve_dominant_mode(
    cavity: &DiscretizedCavity,
    substrate: &Substrate,
    options: SolverOptions,
) -> Result<EigenResult, OracleError> {
    if !(options.tol > 0.0) {
        return Err(OracleError::InvalidCavity(format!("tolerance must be > 0, got {}", options.tol)));
    }
    if cavity.unknowns() == 0 {
        return Err(OracleError::InvalidCavity("no interior nodes".into()));
    }
    let op = solver::Stencil::new(cavity);
    let (mut v, out) =
        solver::inverse_iteration(&op, options.tol, options.max_iterations, options.max_cg_iterations);
    if !out.converged {
        return Err(OracleError::NoConvergence { iterations: out.iterations, residual: out.residual });
    }
    let h = cavity.spacing();
    let k_squared = out.mu / (h * h);
    let peak = v.iter().copied().fold(0.0, |m: f64, x| if x.abs() > m.abs() { x } else { m });
    v.iter_mut().for_each(|x| *x /= peak);
    Ok(EigenResult {
        k_squared,
        f_oracle: frequency_from_k_squared(k_squared, substrate),
        field: v,
        nx: cavity.nx(),
        ny: cavity.ny(),
        spacing: h,
        iterations: out.iterations,
        cg_iterations: out.cg_iterations,
        residual: out.residual,
    })
}

/// Writes |Ey| as a plain-text matrix: `ny` lines of `nx` space-separated
/// values, first line at the lowest y.
pub fn export_field<W: Write>(mut out: W, result: &EigenResult) -> std::io::Result<()> {
    for j in 0..result.ny {
        let row = &result.field[j * result.nx..(j + 1) * result.nx];
        let line: Vec<String> = row.iter().map(|v| format!("{:.6e}", v.abs())).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Forward-model and oracle frequencies for one design.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleComparison {
    pub f_model: f64,
    pub eigen: EigenResult,
}

impl OracleComparison {
    /// (f_oracle − f_model)/f_model in percent.
    pub fn gap_percent(&self) -> f64 {
        100.0 * (self.eigen.f_oracle - self.f_model) / self.f_model
    }
}

/// Runs the oracle on `design` at `resolution` grid intervals per via
/// diameter and compares with the closed-form frequency.
pub fn verify_design(
    design: &ResonatorDesign,
    resolution: usize,
    options: SolverOptions,
) -> Result<OracleComparison, OracleError> {
    let f_model = design::resonant_frequency(&design.substrate, &design.geometry)?;
    let cavity = rasterize(&design.geometry, resolution)?;
    let eigen = solve_dominant_mode(&cavity, &design.substrate, options)?;
    Ok(OracleComparison { f_model, eigen })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    /// Grid intervals across the width.
    pub resolution: usize,
    pub spacing: f64,
    pub f_oracle: f64,
    /// |f_oracle − f_analytic| / f_analytic.
    pub error: f64,
}

/// Solves the empty `width × length` rectangle at each resolution (in
/// parallel) and compares against the analytic TE101 frequency.
pub fn convergence_study(
    substrate: &Substrate,
    width: f64,
    length: f64,
    resolutions: &[usize],
    options: SolverOptions,
) -> Result<Vec<ConvergenceRow>, OracleError> {
    resolutions
        .par_iter()
        .map(|&n| {
            let cavity = DiscretizedCavity::rectangle(width, length, n)?;
            let actual_length = (cavity.ny() - 1) as f64 * cavity.spacing();
            let f_analytic = rectangular_te101(substrate, width, actual_length);
            let eig = solve_dominant_mode(&cavity, substrate, options)?;
            Ok(ConvergenceRow {
                resolution: n,
                spacing: cavity.spacing(),
                f_oracle: eig.f_oracle,
                error: (eig.f_oracle - f_analytic).abs() / f_analytic,
            })
        })
        .collect()
}

/// Least-squares slope of log(error) against log(spacing).
pub fn observed_order(rows: &[ConvergenceRow]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.spacing.ln(), r.error.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// Writes `resolution,f_oracle_GHz,error_vs_analytic`.
pub fn write_convergence_csv<W: Write>(out: W, rows: &[ConvergenceRow]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["resolution", "f_oracle_GHz", "error_vs_analytic"])?;
    for r in rows {
        wtr.write_record([
            r.resolution.to_string(),
            format!("{:.9}", to_ghz(r.f_oracle)),
            format!("{:.6e}", r.error),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}
