//! Narrowband coupled-resonator bandpass synthesis (inline, all-pole) and
//! its coupling-matrix frequency response.
//!
//! Synthesis follows the classical prototype scaling:
//! `k(i,i+1) = FBW/√(g_i·g_{i+1})`, `Qe_in = g0·g1/FBW`,
//! `Qe_out = g_n·g_{n+1}/FBW`. The response uses the normalized coupling
//! matrix `M` with `A = λ·I − j·R + M`, `λ = (f/f0 − f0/f)/FBW`.

use std::f64::consts::PI;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::design::{synthesize_cavity, DesignError};
use crate::model::CavityGeometry;
use crate::units::{linspace, mag_to_db, tidy, to_ghz, to_um, HALF_POWER_DB};
use crate::Substrate;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FilterError {
    #[error("unsupported response family `{0}` (expected butterworth or chebyshev)")]
    UnsupportedFamily(String),
    #[error("invalid filter spec: {0}")]
    InvalidSpec(String),
    #[error("coupling matrix is singular at {freq} Hz")]
    SingularMatrix { freq: f64 },
    #[error("frequency grid spans {span:.4e} Hz, need at least {required:.4e} Hz (3 bandwidths)")]
    GridTooNarrow { span: f64, required: f64 },
    #[error("3 dB crossing not found on the frequency grid")]
    BandEdgeClipped,
    #[error(transparent)]
    Design(#[from] DesignError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ResponseFamily {
    Butterworth,
    Chebyshev { ripple_db: f64 },
}

impl ResponseFamily {
    /// `name` is `butterworth` or `chebyshev`; `ripple_db` only matters for
    /// the latter.
    pub fn from_name(name: &str, ripple_db: f64) -> Result<Self, FilterError> {
        match name.to_ascii_lowercase().as_str() {
            "butterworth" | "maximally-flat" => Ok(ResponseFamily::Butterworth),
            "chebyshev" => Ok(ResponseFamily::Chebyshev { ripple_db }),
            other => Err(FilterError::UnsupportedFamily(other.to_string())),
        }
    }
}

impl fmt::Display for ResponseFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResponseFamily::Butterworth => f.write_str("butterworth"),
            ResponseFamily::Chebyshev { ripple_db } => write!(f, "chebyshev({ripple_db} dB)"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    f0: f64,
    fbw: f64,
    order: usize,
    family: ResponseFamily,
    q_unloaded: Option<f64>,
}

impl FilterSpec {
    /// `q_unloaded = None` means lossless resonators.
    pub fn new(
        f0: f64,
        fbw: f64,
        order: usize,
        family: ResponseFamily,
        q_unloaded: Option<f64>,
    ) -> Result<Self, FilterError> {
        if !(f0.is_finite() && f0 > 0.0) {
            return Err(FilterError::InvalidSpec(format!("f0 must be positive, got {f0}")));
        }
        if !(fbw > 0.0 && fbw < 0.5) {
            return Err(FilterError::InvalidSpec(format!(
                "fractional bandwidth must be in (0, 0.5), got {fbw}"
            )));
        }
        if order == 0 {
            return Err(FilterError::InvalidSpec("order must be >= 1".into()));
        }
        if let ResponseFamily::Chebyshev { ripple_db } = family {
            if !(ripple_db.is_finite() && ripple_db > 0.0) {
                return Err(FilterError::InvalidSpec(format!("ripple must be > 0 dB, got {ripple_db}")));
            }
        }
        if let Some(q) = q_unloaded {
            if !(q > 0.0) {
                return Err(FilterError::InvalidSpec(format!("Qu must be positive, got {q}")));
            }
        }
        let q_unloaded = q_unloaded.filter(|q| q.is_finite());
        Ok(Self { f0, fbw, order, family, q_unloaded })
    }

    pub fn f0(&self) -> f64 {
        self.f0
    }
    pub fn fbw(&self) -> f64 {
        self.fbw
    }
    pub fn order(&self) -> usize {
        self.order
    }
    pub fn family(&self) -> ResponseFamily {
        self.family
    }
    pub fn q_unloaded(&self) -> Option<f64> {
        self.q_unloaded
    }

    /// Absolute bandwidth `FBW·f0`, Hz.
    pub fn bandwidth(&self) -> f64 {
        self.fbw * self.f0
    }

    /// `n_points` evenly spaced over three bandwidths around f0.
    pub fn default_grid(&self, n_points: usize) -> Vec<f64> {
        let half = 1.5 * self.bandwidth();
        linspace(self.f0 - half, self.f0 + half, n_points)
    }
}

/// Lowpass prototype element values `g0..=g(n+1)`.
pub fn lowpass_prototype(family: ResponseFamily, n: usize) -> Result<Vec<f64>, FilterError> {
    if n == 0 {
        return Err(FilterError::InvalidSpec("order must be >= 1".into()));
    }
    let nf = n as f64;
    let mut g = Vec::with_capacity(n + 2);
    g.push(1.0);
    match family {
        ResponseFamily::Butterworth => {
            for k in 1..=n {
                g.push(2.0 * ((2 * k - 1) as f64 * PI / (2.0 * nf)).sin());
            }
            g.push(1.0);
        }
        ResponseFamily::Chebyshev { ripple_db } => {
            if !(ripple_db > 0.0) {
                return Err(FilterError::InvalidSpec(format!("ripple must be > 0 dB, got {ripple_db}")));
            }
            // β = ln(coth(L_r / 17.37))
            let beta = (1.0 / (ripple_db / (40.0 / 10f64.ln())).tanh()).ln();
            let gamma = (beta / (2.0 * nf)).sinh();
            let a = |k: usize| ((2 * k - 1) as f64 * PI / (2.0 * nf)).sin();
            let b = |k: usize| gamma * gamma + (k as f64 * PI / nf).sin().powi(2);
            g.push(2.0 * a(1) / gamma);
            for k in 2..=n {
                let prev = g[k - 1];
                g.push(4.0 * a(k - 1) * a(k) / (b(k - 1) * prev));
            }
            g.push(if n % 2 == 1 { 1.0 } else { (1.0 / (beta / 4.0).tanh()).powi(2) });
        }
    }
    Ok(g)
}

/// Inter-resonator couplings, port loading and per-cavity footprint.
#[derive(Debug, Clone, PartialEq)]
pub struct CouplingPlan {
    pub g: Vec<f64>,
    /// `k[i]` couples resonators `i` and `i+1` (0-based).
    pub k: Vec<f64>,
    pub qe_in: f64,
    pub qe_out: f64,
    /// Normalized coupling matrix, symmetric, zero diagonal (synchronous tuning).
    pub m: DMatrix<f64>,
    pub cavity: CavityGeometry,
}

impl CouplingPlan {
    pub fn order(&self) -> usize {
        self.m.nrows()
    }
}

pub fn coupling_plan(
    spec: &FilterSpec,
    substrate: &Substrate,
    d: f64,
    p: f64,
) -> Result<CouplingPlan, FilterError> {
    let n = spec.order;
    let g = lowpass_prototype(spec.family, n)?;
    let mut m = DMatrix::zeros(n, n);
    let mut k = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let mij = 1.0 / (g[i] * g[i + 1]).sqrt();
        m[(i - 1, i)] = mij;
        m[(i, i - 1)] = mij;
        k.push(spec.fbw * mij);
    }
    let qe_in = g[0] * g[1] / spec.fbw;
    let qe_out = g[n] * g[n + 1] / spec.fbw;
    let cavity = synthesize_cavity(spec.f0, substrate, d, p, 1.0)?;
    Ok(CouplingPlan { g, k, qe_in, qe_out, m, cavity })
}

/// Dissipation-limited midband loss `4.343·Σg_i / (FBW·Qu)` dB; 0 for
/// lossless resonators.
pub fn midband_insertion_loss(plan: &CouplingPlan, spec: &FilterSpec) -> f64 {
    match spec.q_unloaded {
        None => 0.0,
        Some(qu) => {
            let n = plan.order();
            let sum: f64 = plan.g[1..=n].iter().sum();
            10.0 / 10f64.ln() * sum / (spec.fbw * qu)
        }
    }
}

/// Complex two-port response at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointResponse {
    pub s11: Complex64,
    pub s21: Complex64,
    pub s12: Complex64,
    pub s22: Complex64,
}

/// Evaluates the coupling-matrix model at `freq`.
pub fn evaluate_point(
    plan: &CouplingPlan,
    spec: &FilterSpec,
    freq: f64,
) -> Result<PointResponse, FilterError> {
    let n = plan.order();
    let j = Complex64::new(0.0, 1.0);
    let lambda = (freq / spec.f0 - spec.f0 / freq) / spec.fbw;
    let loss = spec.q_unloaded.map_or(0.0, |qu| 1.0 / (spec.fbw * qu));
    let r_in = 1.0 / (plan.qe_in * spec.fbw);
    let r_out = 1.0 / (plan.qe_out * spec.fbw);

    let mut a = DMatrix::<Complex64>::zeros(n, n);
    for r in 0..n {
        for c in 0..n {
            a[(r, c)] = Complex64::new(plan.m[(r, c)], 0.0);
        }
        a[(r, r)] += Complex64::new(lambda, -loss);
    }
    a[(0, 0)] -= j * r_in;
    a[(n - 1, n - 1)] -= j * r_out;

    let lu = a.lu();
    let solve = |col: usize| {
        let mut e = DVector::<Complex64>::zeros(n);
        e[col] = Complex64::new(1.0, 0.0);
        lu.solve(&e).filter(|x| x.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
    };
    let first = solve(0).ok_or(FilterError::SingularMatrix { freq })?;
    let last = solve(n - 1).ok_or(FilterError::SingularMatrix { freq })?;
    let through = -2.0 * j * (r_in * r_out).sqrt();
    Ok(PointResponse {
        s11: 1.0 + 2.0 * j * r_in * first[0],
        s21: through * first[n - 1],
        s12: through * last[0],
        s22: 1.0 + 2.0 * j * r_out * last[n - 1],
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseMetrics {
    /// −|S21| in dB at f0 (interpolated on the grid).
    pub midband_il_db: f64,
    /// Width between the crossings 3.0103 dB below the |S21| maximum, Hz.
    pub bandwidth_3db: f64,
    /// Midpoint of those crossings, Hz.
    pub center: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FilterResponse {
    pub freqs: Vec<f64>,
    pub s21_db: Vec<f64>,
    pub s11_db: Vec<f64>,
    pub metrics: ResponseMetrics,
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    match xs.partition_point(|&v| v < x) {
        0 => ys[0],
        i if i >= xs.len() => ys[xs.len() - 1],
        i => ys[i - 1] + (x - xs[i - 1]) * (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]),
    }
}

fn response_metrics(freqs: &[f64], s21_db: &[f64], f0: f64) -> Result<ResponseMetrics, FilterError> {
    let peak = s21_db.iter().enumerate().fold(0, |best, (i, &v)| if v > s21_db[best] { i } else { best });
    let level = s21_db[peak] - HALF_POWER_DB;
    let cross =
        |a: usize, b: usize| freqs[a] + (level - s21_db[a]) * (freqs[b] - freqs[a]) / (s21_db[b] - s21_db[a]);
    let lower = (0..peak)
        .rev()
        .find(|&i| s21_db[i] < level)
        .map(|i| cross(i, i + 1))
        .ok_or(FilterError::BandEdgeClipped)?;
    let upper = (peak + 1..freqs.len())
        .find(|&i| s21_db[i] < level)
        .map(|i| cross(i - 1, i))
        .ok_or(FilterError::BandEdgeClipped)?;
    Ok(ResponseMetrics {
        midband_il_db: -interpolate(freqs, s21_db, f0),
        bandwidth_3db: upper - lower,
        center: 0.5 * (upper + lower),
    })
}

/// Sweeps the coupling-matrix model over `grid`, which must cover at least
/// three bandwidths.
pub fn simulate_response(
    plan: &CouplingPlan,
    spec: &FilterSpec,
    grid: &[f64],
) -> Result<FilterResponse, FilterError> {
    let span = match (grid.first(), grid.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0.0,
    };
    let required = 3.0 * spec.bandwidth();
    if span < required * (1.0 - 1e-9) {
        return Err(FilterError::GridTooNarrow { span, required });
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) || grid[0] <= 0.0 {
        return Err(FilterError::InvalidSpec("grid must be positive and strictly increasing".into()));
    }
    let mut s21_db = Vec::with_capacity(grid.len());
    let mut s11_db = Vec::with_capacity(grid.len());
    for &f in grid {
        let pt = evaluate_point(plan, spec, f)?;
        s21_db.push(mag_to_db(pt.s21.norm()));
        s11_db.push(mag_to_db(pt.s11.norm()));
    }
    let metrics = response_metrics(grid, &s21_db, spec.f0)?;
    Ok(FilterResponse { freqs: grid.to_vec(), s21_db, s11_db, metrics })
}

/// Physical extent of two square cavities sharing one via wall.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayoutSummary {
    pub cavity_w: f64,
    pub cavity_l: f64,
    /// `2w + d` along the coupling axis.
    pub extent_x: f64,
    /// `l + d`.
    pub extent_y: f64,
}

impl LayoutSummary {
    pub fn side_by_side(cavity: &CavityGeometry) -> Self {
        Self {
            cavity_w: cavity.w(),
            cavity_l: cavity.l(),
            extent_x: 2.0 * cavity.w() + cavity.d(),
            extent_y: cavity.l() + cavity.d(),
        }
    }
}

impl fmt::Display for LayoutSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "2 cavities of {:.1} x {:.1} um, footprint {:.3} x {:.3} mm",
            to_um(self.cavity_w),
            to_um(self.cavity_l),
            self.extent_x * 1e3,
            self.extent_y * 1e3
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TwoPoleDesign {
    pub spec: FilterSpec,
    pub plan: CouplingPlan,
    pub response: FilterResponse,
    pub layout: LayoutSummary,
}

/// Points in the default response grid.
pub const DEFAULT_GRID_POINTS: usize = 801;

/// Two-resonator filter at `f0`: plan, simulated response over three
/// bandwidths and the side-by-side footprint.
#[allow(clippy::too_many_arguments)]
pub fn design_two_pole(
    f0: f64,
    fbw: f64,
    family: ResponseFamily,
    q_unloaded: Option<f64>,
    substrate: &Substrate,
    d: f64,
    p: f64,
) -> Result<TwoPoleDesign, FilterError> {
    let spec = FilterSpec::new(f0, fbw, 2, family, q_unloaded)?;
    let plan = coupling_plan(&spec, substrate, d, p)?;
    let response = simulate_response(&plan, &spec, &spec.default_grid(DEFAULT_GRID_POINTS))?;
    let layout = LayoutSummary::side_by_side(&plan.cavity);
    Ok(TwoPoleDesign { spec, plan, response, layout })
}

/// Writes `f_GHz,S21_dB,S11_dB`.
pub fn write_response_csv<W: std::io::Write>(out: W, response: &FilterResponse) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(["f_GHz", "S21_dB", "S11_dB"])?;
    for i in 0..response.freqs.len() {
        wtr.write_record([
            format!("{:.9}", to_ghz(response.freqs[i])),
            format!("{:.6}", response.s21_db[i]),
            format!("{:.6}", response.s11_db[i]),
        ])?;
    }
    wtr.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct PlanDocument {
    f0_ghz: f64,
    fbw: f64,
    order: usize,
    family: String,
    g: Vec<f64>,
    k: Vec<f64>,
    qe_in: f64,
    qe_out: f64,
    m: Vec<Vec<f64>>,
    cavity: CavityDocument,
}

#[derive(Serialize)]
struct CavityDocument {
    w_um: f64,
    l_um: f64,
    d_um: f64,
    p_um: f64,
}

/// Plan as a TOML document (g, k, Qe, m, cavity dimensions in µm).
pub fn plan_to_toml(plan: &CouplingPlan, spec: &FilterSpec) -> String {
    let n = plan.order();
    let doc = PlanDocument {
        f0_ghz: tidy(to_ghz(spec.f0)),
        fbw: spec.fbw,
        order: n,
        family: spec.family.to_string(),
        g: plan.g.clone(),
        k: plan.k.clone(),
        qe_in: plan.qe_in,
        qe_out: plan.qe_out,
        m: (0..n).map(|r| (0..n).map(|c| plan.m[(r, c)]).collect()).collect(),
        cavity: CavityDocument {
            w_um: tidy(to_um(plan.cavity.w())),
            l_um: tidy(to_um(plan.cavity.l())),
            d_um: tidy(to_um(plan.cavity.d())),
            p_um: tidy(to_um(plan.cavity.p())),
        },
    };
    toml::to_string(&doc).expect("plan serializes")
}
