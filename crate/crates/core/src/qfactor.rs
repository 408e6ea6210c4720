//! Resonator Q extraction from a transmission (S21) trace.
//!
//! The extraction works on |S21| only: peak search with a parabolic refine
//! in dB, half-power crossings interpolated linearly in dB, then
//! `QL = f0/Δf`, `Qe = QL/|S21(f0)|` and `1/QL = 1/Qu + 1/Qe`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use thiserror::Error;

use crate::network::{NetworkError, SParameterTrace};
use crate::units::{db_to_mag, mag_to_db, to_ghz, to_mhz, HALF_POWER_DB};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QError {
    #[error("no resonance: |S21| has no interior maximum on the grid")]
    NoResonance,
    #[error("{0} half-power crossing lies outside the frequency grid")]
    BandEdgeClipped(BandEdge),
    #[error("|S21(f0)| = {0:.6} >= 1: unloaded Q is undefined")]
    FullTransmission(f64),
    #[error("invalid Q values: {0}")]
    InvalidQ(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandEdge {
    Lower,
    Upper,
}

impl fmt::Display for BandEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BandEdge::Lower => "lower",
            BandEdge::Upper => "upper",
        })
    }
}

/// How `Qe` and `Qu` are derived from `QL` and the insertion loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QMode {
    /// `Qe = QL/|S21(f0)|`, `1/QL = 1/Qu + 1/Qe`.
    #[default]
    Standard,
    /// `Qe = 10^(−IL_dB/20)` and `1/Qu = 1/QL + 1/Qe`, taken at face value.
    /// Dimensionally inconsistent; kept for comparison only.
    Literal,
}

impl QMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            QMode::Standard => "standard",
            QMode::Literal => "paper-literal",
        }
    }
}

impl fmt::Display for QMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standard" => Ok(QMode::Standard),
            "paper-literal" | "literal" => Ok(QMode::Literal),
            _ => Err(format!("unknown Q mode `{s}` (expected standard or paper-literal)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ExtractOptions {
    pub mode: QMode,
    /// 3-point moving average on |S21| in dB before extraction.
    pub smoothing: bool,
}

impl ExtractOptions {
    pub fn with_mode(mode: QMode) -> Self {
        Self { mode, ..Self::default() }
    }
}

/// Face-value evaluation of `Qe = 10^(−IL_dB/20)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiteralQ {
    pub q_external: f64,
    pub q_unloaded: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QFactors {
    pub q_unloaded: f64,
    pub q_external: f64,
    /// Present in [`QMode::Literal`]; flagged non-physical.
    pub literal: Option<LiteralQ>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QReport {
    pub f0: f64,
    /// |S21(f0)| in dB, <= 0.
    pub il_db: f64,
    pub delta_f: f64,
    pub q_loaded: f64,
    pub q_external: f64,
    pub q_unloaded: f64,
    pub mode: QMode,
}

impl QReport {
    /// Flat `key = value` block in I/O units.
    pub fn to_key_value(&self) -> String {
        format!(
            "f0_GHz = {:.6}\nIL_dB = {:.4}\ndelta_f_MHz = {:.4}\nQL = {:.4}\nQe = {:.4}\nQu = {:.4}\nmode = {}\n",
            to_ghz(self.f0),
            self.il_db,
            to_mhz(self.delta_f),
            self.q_loaded,
            self.q_external,
            self.q_unloaded,
            self.mode
        )
    }

    fn csv_fields(&self, file: &str) -> [String; 8] {
        [
            file.to_string(),
            format!("{:.6}", to_ghz(self.f0)),
            format!("{:.4}", self.il_db),
            format!("{:.4}", to_mhz(self.delta_f)),
            format!("{:.4}", self.q_loaded),
            format!("{:.4}", self.q_external),
            format!("{:.4}", self.q_unloaded),
            self.mode.to_string(),
        ]
    }
}

pub const Q_CSV_HEADER: [&str; 8] = ["file", "f0_GHz", "IL_dB", "delta_f_MHz", "QL", "Qe", "Qu", "mode"];

/// Writes one CSV row per `(file, report)` under [`Q_CSV_HEADER`].
pub fn write_q_csv<W: std::io::Write>(out: W, rows: &[(String, QReport)]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record(Q_CSV_HEADER)?;
    for (file, report) in rows {
        wtr.write_record(report.csv_fields(file))?;
    }
    wtr.flush()?;
    Ok(())
}

fn s21_db(trace: &SParameterTrace, smoothing: bool) -> Vec<f64> {
    let db = trace.s21_db();
    if !smoothing || db.len() < 3 {
        return db;
    }
    let mut out = db.clone();
    for i in 1..db.len() - 1 {
        out[i] = (db[i - 1] + db[i] + db[i + 1]) / 3.0;
    }
    out
}

/// Vertex of the parabola through three points (x, y).
fn parabola_vertex(x: [f64; 3], y: [f64; 3]) -> Option<(f64, f64)> {
    let d1 = (y[1] - y[0]) / (x[1] - x[0]);
    let d2 = (y[2] - y[1]) / (x[2] - x[1]);
    let a = (d2 - d1) / (x[2] - x[0]);
    if !(a < 0.0) {
        return None;
    }
    let b = d1 - a * (x[0] + x[1]);
    let xv = -b / (2.0 * a);
    let yv = y[0] + d1 * (xv - x[0]) + a * (xv - x[0]) * (xv - x[1]);
    Some((xv, yv))
}

fn find_peak(freqs: &[f64], db: &[f64]) -> Result<(f64, f64), QError> {
    if freqs.len() < 3 {
        return Err(QError::NoResonance);
    }
    // first index wins ties
    let mut peak = 0;
    for (i, &v) in db.iter().enumerate() {
        if v > db[peak] {
            peak = i;
        }
    }
    if peak == 0 || peak == db.len() - 1 || !db[peak].is_finite() {
        return Err(QError::NoResonance);
    }
    let x = [freqs[peak - 1], freqs[peak], freqs[peak + 1]];
    let y = [db[peak - 1], db[peak], db[peak + 1]];
    match parabola_vertex(x, y) {
        Some((f, v)) if f >= x[0] && f <= x[2] => Ok((f, v.max(y[1]))),
        _ => Ok((x[1], y[1])),
    }
}

/// Locates the |S21| peak: `(f0 in Hz, peak level in dB)`.
///
/// Ties go to the lowest frequency.
pub fn find_resonance(trace: &SParameterTrace) -> Result<(f64, f64), QError> {
    find_peak(trace.freqs(), &trace.s21_db())
}

fn bandwidth(freqs: &[f64], db: &[f64], f0: f64, il_db: f64) -> Result<f64, QError> {
    if freqs.is_empty() {
        return Err(QError::InvalidInput("empty trace".into()));
    }
    let level = il_db - HALF_POWER_DB;
    let start = match freqs.binary_search_by(|f| f.total_cmp(&f0)) {
        Ok(i) => i,
        Err(0) => 0,
        Err(i) if i >= freqs.len() => freqs.len() - 1,
        Err(i) => {
            if db[i] >= db[i - 1] {
                i
            } else {
                i - 1
            }
        }
    };
    if db[start] < level {
        return Err(QError::InvalidInput(format!(
            "trace at f0 is already below the half-power level ({:.3} dB)",
            level
        )));
    }
    let cross = |j: usize, k: usize| {
        let t = (level - db[j]) / (db[k] - db[j]);
        freqs[j] + t * (freqs[k] - freqs[j])
    };
    let lower = (0..start)
        .rev()
        .find(|&j| db[j] < level)
        .map(|j| cross(j, j + 1))
        .ok_or(QError::BandEdgeClipped(BandEdge::Lower))?;
    let upper = (start + 1..freqs.len())
        .find(|&j| db[j] < level)
        .map(|j| cross(j - 1, j))
        .ok_or(QError::BandEdgeClipped(BandEdge::Upper))?;
    Ok(upper - lower)
}

/// 3 dB bandwidth around `f0`: distance between the two crossings of
/// `il_db − 3.0103 dB`.
pub fn half_power_bandwidth(trace: &SParameterTrace, f0: f64, il_db: f64) -> Result<f64, QError> {
    bandwidth(trace.freqs(), &trace.s21_db(), f0, il_db)
}

pub fn loaded_q(f0: f64, delta_f: f64) -> Result<f64, QError> {
    if !(f0 > 0.0 && delta_f > 0.0) {
        return Err(QError::InvalidInput(format!("f0 and delta_f must be positive, got {f0}, {delta_f}")));
    }
    Ok(f0 / delta_f)
}

/// External and unloaded Q from the loaded Q and the peak insertion loss.
pub fn unloaded_q(q_loaded: f64, il_db: f64, mode: QMode) -> Result<QFactors, QError> {
    if !(q_loaded > 0.0) {
        return Err(QError::InvalidInput(format!("QL must be positive, got {q_loaded}")));
    }
    let s21 = db_to_mag(il_db);
    if s21 >= 1.0 {
        return Err(QError::FullTransmission(s21));
    }
    let q_external = q_loaded / s21;
    let q_unloaded = q_loaded / (1.0 - s21);
    let literal = match mode {
        QMode::Standard => None,
        QMode::Literal => {
            let qe = 10f64.powf(-il_db / 20.0);
            Some(LiteralQ { q_external: qe, q_unloaded: 1.0 / (1.0 / q_loaded + 1.0 / qe) })
        }
    };
    Ok(QFactors { q_unloaded, q_external, literal })
}

/// Full extraction pipeline. In [`QMode::Literal`] the report carries
/// the face-value `Qe`/`Qu`.
pub fn extract_q_report(trace: &SParameterTrace, options: ExtractOptions) -> Result<QReport, QError> {
    let db = s21_db(trace, options.smoothing);
    let (f0, il_db) = find_peak(trace.freqs(), &db)?;
    let delta_f = bandwidth(trace.freqs(), &db, f0, il_db)?;
    let q_loaded = loaded_q(f0, delta_f)?;
    let q = unloaded_q(q_loaded, il_db, options.mode)?;
    let (q_external, q_unloaded) = match q.literal {
        Some(lit) => (lit.q_external, lit.q_unloaded),
        None => (q.q_external, q.q_unloaded),
    };
    Ok(QReport { f0, il_db, delta_f, q_loaded, q_external, q_unloaded, mode: options.mode })
}

/// Single-pole two-port resonator response on `grid`.
///
/// `S21 = A/(1 + 2j·QL·δ)` with `A = 1 − QL/Qu` and `δ = (f − f0)/f0`;
/// `S11 = (QL/Qu + 2j·QL·δ)/(1 + 2j·QL·δ)`. `q_unloaded` may be infinite.
pub fn synthesize_trace(
    f0: f64,
    q_loaded: f64,
    q_unloaded: f64,
    grid: &[f64],
) -> Result<SParameterTrace, QError> {
    if !(f0 > 0.0 && f0.is_finite()) {
        return Err(QError::InvalidInput(format!("f0 must be positive, got {f0}")));
    }
    if !(q_loaded > 0.0 && q_loaded.is_finite()) || !(q_unloaded > q_loaded) {
        return Err(QError::InvalidQ(format!("need Qu > QL > 0, got QL={q_loaded}, Qu={q_unloaded}")));
    }
    let (Some(&lo), Some(&hi)) = (grid.first(), grid.last()) else {
        return Err(QError::InvalidInput("empty grid".into()));
    };
    let bw = f0 / q_loaded;
    if hi - lo < 5.0 * bw {
        return Err(QError::InvalidInput(format!(
            "grid spans {:.4e} Hz, need at least 5 bandwidths ({:.4e} Hz)",
            hi - lo,
            5.0 * bw
        )));
    }
    let ratio = q_loaded / q_unloaded;
    let amp = 1.0 - ratio;
    let (s11, s21): (Vec<_>, Vec<_>) = grid
        .iter()
        .map(|&f| {
            let x = 2.0 * q_loaded * (f - f0) / f0;
            let denom = Complex64::new(1.0, x);
            (Complex64::new(ratio, x) / denom, Complex64::new(amp, 0.0) / denom)
        })
        .unzip();
    Ok(SParameterTrace::symmetric(grid.to_vec(), s11, s21, 50.0)?)
}

/// `QL` for a device with unloaded `qu` and peak insertion loss `il_db`,
/// under the standard relations.
pub fn loaded_q_from_il(q_unloaded: f64, il_db: f64) -> f64 {
    q_unloaded * (1.0 - db_to_mag(il_db))
}

/// Insertion loss of the single-pole model, dB.
pub fn model_il_db(q_loaded: f64, q_unloaded: f64) -> f64 {
    mag_to_db(1.0 - q_loaded / q_unloaded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::{ghz, linspace, mhz};

    /// 401-point grid covering ten bandwidths around `f0`, offset so `f0`
    /// does not sit on a grid node.
    fn grid(f0: f64, ql: f64, points: usize) -> Vec<f64> {
        let bw = f0 / ql;
        let step = 10.0 * bw / (points - 1) as f64;
        linspace(f0 - 5.0 * bw + 0.37 * step, f0 + 5.0 * bw + 0.37 * step, points)
    }

    #[test]
    fn recovers_center_of_lorentzian() {
        let f0 = ghz(21.165);
        let g = linspace(ghz(19.5), ghz(23.0), 351);
        let t = synthesize_trace(f0, 58.6, 184.0, &g).unwrap();
        let (f, _) = find_resonance(&t).unwrap();
        assert!((f - f0).abs() < mhz(1.0), "f0 error {} Hz", f - f0);
    }

    #[test]
    fn monotonic_trace_has_no_resonance() {
        let freqs = linspace(1e9, 2e9, 11);
        let s21: Vec<_> = (0..11).map(|i| Complex64::new(0.1 + 0.05 * i as f64, 0.0)).collect();
        let t = SParameterTrace::symmetric(freqs, s21.clone(), s21, 50.0).unwrap();
        assert_eq!(find_resonance(&t), Err(QError::NoResonance));
    }

    #[test]
    fn flat_trace_has_no_resonance() {
        let freqs = linspace(1e9, 2e9, 11);
        let one = vec![Complex64::new(1.0, 0.0); 11];
        let t = SParameterTrace::symmetric(freqs, one.clone(), one, 50.0).unwrap();
        assert_eq!(extract_q_report(&t, ExtractOptions::default()), Err(QError::NoResonance));
    }

    fn two_peaks(second_gain: f64) -> SParameterTrace {
        let freqs = linspace(ghz(10.0), ghz(12.0), 401);
        let a = synthesize_trace(ghz(10.6), 200.0, f64::INFINITY, &freqs).unwrap();
        let b = synthesize_trace(ghz(11.4), 200.0, f64::INFINITY, &freqs).unwrap();
        let s21: Vec<_> = a
            .s21()
            .iter()
            .zip(b.s21())
            .map(|(x, y)| Complex64::new(x.norm().max(y.norm() * second_gain), 0.0) * 0.5)
            .collect();
        SParameterTrace::symmetric(freqs, s21.clone(), s21, 50.0).unwrap()
    }

    #[test]
    fn higher_peak_wins_and_ties_go_low() {
        let t = two_peaks(db_to_mag(3.0));
        let (f, _) = find_resonance(&t).unwrap();
        assert!((f - ghz(11.4)).abs() < mhz(5.0));

        let levels = [-10.0, -5.0, -1.0, -5.0, -10.0, -5.0, -1.0, -5.0, -10.0];
        let s21: Vec<_> = levels.iter().map(|&db| Complex64::new(db_to_mag(db), 0.0)).collect();
        let freqs = linspace(1e9, 9e9, 9);
        let t = SParameterTrace::symmetric(freqs, s21.clone(), s21, 50.0).unwrap();
        let (f, il) = find_resonance(&t).unwrap();
        assert_eq!(f, 3e9);
        assert!((il + 1.0).abs() < 1e-12);
    }

    #[test]
    fn bandwidth_of_sample_one() {
        // Qu = 184, IL = −3.33 dB → QL = 58.6 → Δf = 21.165 GHz / 58.6
        let ql = loaded_q_from_il(184.0, -3.33);
        assert!((ql - 58.6).abs() < 0.05);
        let f0 = ghz(21.165);
        let t = synthesize_trace(f0, ql, 184.0, &grid(f0, ql, 401)).unwrap();
        let (f, il) = find_resonance(&t).unwrap();
        let df = half_power_bandwidth(&t, f, il).unwrap();
        let expect = f0 / ql;
        assert!((to_mhz(expect) - 361.2).abs() < 0.5);
        assert!((df - expect).abs() / expect < 0.005);
    }

    #[test]
    fn clipped_lower_edge() {
        let f0 = ghz(21.165);
        let t = synthesize_trace(f0, 58.6, 184.0, &grid(f0, 58.6, 401)).unwrap();
        let w = t.window(f0 - mhz(100.0), f0 + ghz(2.0)).unwrap();
        let (f, il) = find_resonance(&w).unwrap();
        assert_eq!(half_power_bandwidth(&w, f, il), Err(QError::BandEdgeClipped(BandEdge::Lower)));
        let w = t.window(f0 - ghz(2.0), f0 + mhz(100.0)).unwrap();
        assert_eq!(
            extract_q_report(&w, ExtractOptions::default()),
            Err(QError::BandEdgeClipped(BandEdge::Upper))
        );
    }

    #[test]
    fn doubling_ql_halves_bandwidth() {
        let f0 = ghz(20.0);
        let g = linspace(ghz(18.0), ghz(22.0), 2001);
        let a = extract_q_report(&synthesize_trace(f0, 50.0, 500.0, &g).unwrap(), ExtractOptions::default())
            .unwrap();
        let b =
            extract_q_report(&synthesize_trace(f0, 100.0, 1000.0, &g).unwrap(), ExtractOptions::default())
                .unwrap();
        assert!((a.delta_f / b.delta_f - 2.0).abs() < 1e-3);
    }

    #[test]
    fn loaded_q_arithmetic() {
        assert!((loaded_q(ghz(21.165), mhz(361.2)).unwrap() - 58.6).abs() < 0.01);
        assert_eq!(loaded_q(5.0, 5.0).unwrap(), 1.0);
        assert!((loaded_q(ghz(20.637), mhz(349.1)).unwrap() - 59.1).abs() < 0.02);
        assert!(loaded_q(0.0, 1.0).is_err());
        assert!(loaded_q(1.0, -1.0).is_err());
    }

    #[test]
    fn unloaded_q_table_rows() {
        let q = unloaded_q(58.6, -3.33, QMode::Standard).unwrap();
        assert!((q.q_unloaded - 184.0).abs() < 0.5, "Qu = {}", q.q_unloaded);
        assert!((q.q_external - 86.0).abs() < 0.1, "Qe = {}", q.q_external);
        assert!(q.literal.is_none());

        let q = unloaded_q(59.1, -2.26, QMode::Standard).unwrap();
        assert!((q.q_unloaded - 258.0).abs() < 0.5, "Qu = {}", q.q_unloaded);
    }

    #[test]
    fn unloaded_q_limits() {
        // |S21| → 0: Qu → QL, Qe → ∞
        let q = unloaded_q(50.0, -200.0, QMode::Standard).unwrap();
        assert!((q.q_unloaded - 50.0).abs() < 1e-6);
        assert!(q.q_external > 1e9);
        assert!(matches!(unloaded_q(50.0, 0.0, QMode::Standard), Err(QError::FullTransmission(_))));
        assert!(matches!(unloaded_q(50.0, 0.1, QMode::Standard), Err(QError::FullTransmission(_))));
    }

    #[test]
    fn literal_mode_reports_printed_relation() {
        let q = unloaded_q(58.6, -3.33, QMode::Literal).unwrap();
        let lit = q.literal.unwrap();
        assert!((lit.q_external - 1.4672).abs() < 1e-3);
        assert!(lit.q_unloaded < 1.5);
        // standard values are still computed
        assert!((q.q_unloaded - 184.0).abs() < 0.5);
    }

    #[test]
    fn synthesize_lossless_limit() {
        let f0 = ghz(20.0);
        let g = vec![ghz(19.0), f0, ghz(21.0)];
        let t = synthesize_trace(f0, 100.0, f64::INFINITY, &g).unwrap();
        assert!((t.s21()[1].norm() - 1.0).abs() < 1e-15);
        assert!(t.s11()[1].norm() < 1e-15);
    }

    #[test]
    fn synthesize_sim_row_level() {
        let f0 = ghz(20.637);
        let g = vec![ghz(19.0), f0, ghz(23.0)];
        let t = synthesize_trace(f0, 59.1, 258.0, &g).unwrap();
        assert!((t.s21()[1].norm() - 0.7709).abs() < 1e-4);
        assert!((mag_to_db(t.s21()[1].norm()) + 2.26).abs() < 0.005);
        let p = t.s21()[1].norm_sqr() + t.s11()[1].norm_sqr();
        assert!(p <= 1.0);
    }

    #[test]
    fn synthesize_exact_half_power_points() {
        let f0 = ghz(20.0);
        let ql = 80.0;
        let g = vec![ghz(19.0), f0 * (1.0 - 0.5 / ql), f0, f0 * (1.0 + 0.5 / ql), ghz(21.0)];
        let t = synthesize_trace(f0, ql, 400.0, &g).unwrap();
        let a = 1.0 - ql / 400.0;
        for i in [1, 3] {
            assert!((t.s21()[i].norm() - a / 2f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn synthesize_rejections() {
        let g = linspace(ghz(19.0), ghz(21.0), 11);
        assert!(matches!(synthesize_trace(ghz(20.0), 60.0, 60.0, &g), Err(QError::InvalidQ(_))));
        assert!(matches!(synthesize_trace(ghz(20.0), 60.0, 50.0, &g), Err(QError::InvalidQ(_))));
        let narrow = linspace(ghz(19.9), ghz(20.1), 11);
        assert!(synthesize_trace(ghz(20.0), 60.0, 200.0, &narrow).is_err());
    }

    #[test]
    fn report_round_trip_qu_200() {
        let f0 = ghz(21.2);
        let t = synthesize_trace(f0, 60.0, 200.0, &grid(f0, 60.0, 401)).unwrap();
        let r = extract_q_report(&t, ExtractOptions::default()).unwrap();
        assert!((r.q_unloaded - 200.0).abs() / 200.0 < 0.005);
        let lhs = 1.0 / r.q_loaded;
        let rhs = 1.0 / r.q_unloaded + 1.0 / r.q_external;
        assert!((lhs - rhs).abs() / lhs < 1e-9);
        assert!((r.q_loaded - r.f0 / r.delta_f).abs() < 1e-9 * r.q_loaded);
    }

    #[test]
    fn report_il_recovered() {
        let f0 = ghz(20.637);
        let t = synthesize_trace(f0, 59.1, 258.0, &grid(f0, 59.1, 401)).unwrap();
        let r = extract_q_report(&t, ExtractOptions::default()).unwrap();
        assert!((r.il_db + 2.26).abs() < 0.02, "IL = {}", r.il_db);
    }

    #[test]
    fn smoothing_biases_little_on_dense_grid() {
        let f0 = ghz(21.2);
        let t = synthesize_trace(f0, 60.0, 200.0, &grid(f0, 60.0, 2001)).unwrap();
        let plain = extract_q_report(&t, ExtractOptions::default()).unwrap();
        let smooth = extract_q_report(&t, ExtractOptions { smoothing: true, ..Default::default() }).unwrap();
        assert!((plain.q_unloaded - smooth.q_unloaded).abs() / plain.q_unloaded < 0.01);
    }

    #[test]
    fn key_value_and_csv() {
        let f0 = ghz(21.2);
        let t = synthesize_trace(f0, 60.0, 200.0, &grid(f0, 60.0, 401)).unwrap();
        let r = extract_q_report(&t, ExtractOptions::default()).unwrap();
        let kv = r.to_key_value();
        assert!(kv.contains("mode = standard"));
        assert_eq!(kv.lines().count(), 7);
        let mut buf = Vec::new();
        write_q_csv(&mut buf, &[("a.s2p".into(), r)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "file,f0_GHz,IL_dB,delta_f_MHz,QL,Qe,Qu,mode");
        let row: Vec<_> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 8);
        assert_eq!(row[0], "a.s2p");
        assert_eq!(row[7], "standard");
    }

    #[test]
    fn mode_parsing() {
        assert_eq!("standard".parse::<QMode>().unwrap(), QMode::Standard);
        assert_eq!("paper-literal".parse::<QMode>().unwrap(), QMode::Literal);
        assert!("fancy".parse::<QMode>().is_err());
    }
}
