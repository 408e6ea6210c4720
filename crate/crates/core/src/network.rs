//! Two-port network data: S-parameter traces and their Z-parameter form.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("invalid trace: {0}")]
    InvalidTrace(String),
    #[error("(I - S) is singular at {freq} Hz; Z parameters undefined")]
    SingularConversion { freq: f64 },
}

/// Two-port S-parameters sampled on a strictly increasing frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SParameterTrace {
    freqs: Vec<f64>,
    s11: Vec<Complex64>,
    s21: Vec<Complex64>,
    s12: Vec<Complex64>,
    s22: Vec<Complex64>,
    z0: f64,
}

impl SParameterTrace {
    pub fn new(
        freqs: Vec<f64>,
        s11: Vec<Complex64>,
        s21: Vec<Complex64>,
        s12: Vec<Complex64>,
        s22: Vec<Complex64>,
        z0: f64,
    ) -> Result<Self, NetworkError> {
        let n = freqs.len();
        if [s11.len(), s21.len(), s12.len(), s22.len()].iter().any(|&m| m != n) {
            return Err(NetworkError::InvalidTrace(format!("parameter arrays must all have {n} points")));
        }
        if !(z0.is_finite() && z0 > 0.0) {
            return Err(NetworkError::InvalidTrace(format!("z0 must be > 0, got {z0}")));
        }
        if freqs.iter().any(|f| !f.is_finite()) {
            return Err(NetworkError::InvalidTrace("non-finite frequency".into()));
        }
        if let Some(i) = freqs.windows(2).position(|w| w[1] <= w[0]) {
            return Err(NetworkError::InvalidTrace(format!(
                "frequencies not strictly increasing at index {}",
                i + 1
            )));
        }
        Ok(Self { freqs, s11, s21, s12, s22, z0 })
    }

    /// Reciprocal, symmetric two-port built from S21 and S11 alone.
    pub fn symmetric(
        freqs: Vec<f64>,
        s11: Vec<Complex64>,
        s21: Vec<Complex64>,
        z0: f64,
    ) -> Result<Self, NetworkError> {
        let s12 = s21.clone();
        let s22 = s11.clone();
        Self::new(freqs, s11, s21, s12, s22, z0)
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }
    pub fn s11(&self) -> &[Complex64] {
        &self.s11
    }
    pub fn s21(&self) -> &[Complex64] {
        &self.s21
    }
    pub fn s12(&self) -> &[Complex64] {
        &self.s12
    }
    pub fn s22(&self) -> &[Complex64] {
        &self.s22
    }
    pub fn z0(&self) -> f64 {
        self.z0
    }

    /// The 2×2 matrix `[[S11, S12], [S21, S22]]` at index `i`.
    pub fn matrix(&self, i: usize) -> [[Complex64; 2]; 2] {
        [[self.s11[i], self.s12[i]], [self.s21[i], self.s22[i]]]
    }

    /// |S21| in dB per point.
    pub fn s21_db(&self) -> Vec<f64> {
        self.s21.iter().map(|s| 20.0 * s.norm().log10()).collect()
    }

    /// Points whose frequency lies in `[lo, hi]`.
    pub fn window(&self, lo: f64, hi: f64) -> Result<Self, NetworkError> {
        let idx: Vec<usize> =
            (0..self.len()).filter(|&i| self.freqs[i] >= lo && self.freqs[i] <= hi).collect();
        let pick = |v: &[Complex64]| idx.iter().map(|&i| v[i]).collect::<Vec<_>>();
        Self::new(
            idx.iter().map(|&i| self.freqs[i]).collect(),
            pick(&self.s11),
            pick(&self.s21),
            pick(&self.s12),
            pick(&self.s22),
            self.z0,
        )
    }
}

/// Two-port Z-parameters in ohms.
#[derive(Debug, Clone, PartialEq)]
pub struct ZParameterTrace {
    pub freqs: Vec<f64>,
    pub z11: Vec<Complex64>,
    pub z12: Vec<Complex64>,
    pub z21: Vec<Complex64>,
    pub z22: Vec<Complex64>,
}

impl ZParameterTrace {
    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }
}

const SINGULAR_DET: f64 = 1e-12;

/// `Z = z0·(I + S)·(I − S)⁻¹` for a single 2×2 point.
pub fn s_to_z_point(s: [[Complex64; 2]; 2], z0: f64) -> Option<[[Complex64; 2]; 2]> {
    let one = Complex64::new(1.0, 0.0);
    let (a, b, c, d) = (one - s[0][0], -s[0][1], -s[1][0], one - s[1][1]);
    let det = a * d - b * c;
    if det.norm() < SINGULAR_DET {
        return None;
    }
    let inv = [[d / det, -b / det], [-c / det, a / det]];
    let p = [[one + s[0][0], s[0][1]], [s[1][0], one + s[1][1]]];
    let mut z = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, row) in z.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (p[i][0] * inv[0][j] + p[i][1] * inv[1][j]) * z0;
        }
    }
    Some(z)
}

/// Converts every point of `trace` to Z-parameters with the trace's z0.
pub fn s_to_z(trace: &SParameterTrace) -> Result<ZParameterTrace, NetworkError> {
    let n = trace.len();
    let mut out = ZParameterTrace {
        freqs: trace.freqs().to_vec(),
        z11: Vec::with_capacity(n),
        z12: Vec::with_capacity(n),
        z21: Vec::with_capacity(n),
        z22: Vec::with_capacity(n),
    };
    for i in 0..n {
        let z = s_to_z_point(trace.matrix(i), trace.z0())
            .ok_or(NetworkError::SingularConversion { freq: trace.freqs()[i] })?;
        out.z11.push(z[0][0]);
        out.z12.push(z[0][1]);
        out.z21.push(z[1][0]);
        out.z22.push(z[1][1]);
    }
    Ok(out)
}

/// Writes Z-parameters as CSV (`f_GHz,Z11_re,Z11_im,...`), ohms.
pub fn write_z_csv<W: std::io::Write>(out: W, z: &ZParameterTrace) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record([
        "f_GHz", "Z11_re", "Z11_im", "Z21_re", "Z21_im", "Z12_re", "Z12_im", "Z22_re", "Z22_im",
    ])?;
    for i in 0..z.len() {
        let mut rec = vec![format!("{:.9}", z.freqs[i] * 1e-9)];
        for v in [z.z11[i], z.z21[i], z.z12[i], z.z22[i]] {
            rec.push(format!("{:.9e}", v.re));
            rec.push(format!("{:.9e}", v.im));
        }
        wtr.write_record(&rec)?;
    }
    wtr.flush()?;
    Ok(())
}
