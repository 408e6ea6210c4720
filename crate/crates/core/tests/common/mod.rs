//! Checks shared by the property suites and the acceptance target. Each
//! returns `Err` with a description on failure.

#![allow(dead_code)]

use num_complex::Complex64;
use siwkit::filter::{coupling_plan, evaluate_point, FilterSpec, ResponseFamily};
use siwkit::model::Substrate;
use siwkit::network::{s_to_z_point, SParameterTrace};
use siwkit::qfactor::{extract_q_report, synthesize_trace, ExtractOptions};
use siwkit::touchstone::{parse_touchstone, write_touchstone, DataFormat};
use siwkit::units::{linspace, um};

pub type Check = Result<(), String>;

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Synthesizes a trace over ten bandwidths, shifted by `offset` grid steps
/// so f0 need not sit on a sample, and re-extracts.
pub fn q_roundtrip(f0: f64, ql: f64, qu: f64, points: usize, offset: f64) -> Check {
    let bw = f0 / ql;
    let step = 10.0 * bw / (points - 1) as f64;
    let lo = f0 - 5.0 * bw + offset * step;
    let grid = linspace(lo, lo + 10.0 * bw, points);
    let trace = synthesize_trace(f0, ql, qu, &grid).map_err(|e| e.to_string())?;
    let r = extract_q_report(&trace, ExtractOptions::default()).map_err(|e| e.to_string())?;
    if (r.f0 - f0).abs() > step {
        return Err(format!("f0 off by {:.3e} Hz (step {step:.3e})", r.f0 - f0));
    }
    if rel(r.q_loaded, ql) > 5e-3 {
        return Err(format!("QL {} vs {ql}", r.q_loaded));
    }
    if rel(r.q_unloaded, qu) > 5e-3 {
        return Err(format!("Qu {} vs {qu}", r.q_unloaded));
    }
    Ok(())
}

pub fn spec(order: usize, family: ResponseFamily, fbw: f64, qu: Option<f64>) -> FilterSpec {
    FilterSpec::new(20.3e9, fbw, order, family, qu).unwrap()
}

pub fn point(spec: &FilterSpec, f: f64) -> siwkit::filter::PointResponse {
    let plan = coupling_plan(spec, &Substrate::default(), um(200.0), um(250.0)).unwrap();
    evaluate_point(&plan, spec, f).unwrap()
}

/// |S21| ≤ 1 and, without loss, |S11|² + |S21|² = 1 on a wide grid.
pub fn passivity(order: usize, family: ResponseFamily, fbw: f64, qu: Option<f64>) -> Check {
    let s = spec(order, family, fbw, qu);
    let plan = coupling_plan(&s, &Substrate::default(), um(200.0), um(250.0)).map_err(|e| e.to_string())?;
    for f in linspace(s.f0() * (1.0 - 4.0 * fbw), s.f0() * (1.0 + 4.0 * fbw), 801) {
        let p = evaluate_point(&plan, &s, f).map_err(|e| e.to_string())?;
        let power = p.s11.norm_sqr() + p.s21.norm_sqr();
        if p.s21.norm() > 1.0 + 1e-12 || power > 1.0 + 1e-12 {
            return Err(format!("|S21| = {}, power {power} at {f}", p.s21.norm()));
        }
        if qu.is_none() && (power - 1.0).abs() > 1e-9 {
            return Err(format!("lossless power balance {power} at {f}"));
        }
        if (p.s21 - p.s12).norm() > 1e-12 {
            return Err(format!("S21 != S12 at {f}"));
        }
    }
    Ok(())
}

/// Largest in-band insertion loss of a lossless Chebyshev filter minus the
/// nominal ripple, dB.
pub fn chebyshev_ripple_error(order: usize, ripple_db: f64) -> f64 {
    let fbw = 0.03;
    let s = spec(order, ResponseFamily::Chebyshev { ripple_db }, fbw, None);
    let plan = coupling_plan(&s, &Substrate::default(), um(200.0), um(250.0)).unwrap();
    let worst = linspace(-1.0, 1.0, 4001)
        .into_iter()
        .map(|lambda| {
            let x = lambda * fbw / 2.0;
            let f = s.f0() * (x + (1.0 + x * x).sqrt());
            -20.0 * evaluate_point(&plan, &s, f).unwrap().s21.norm().log10()
        })
        .fold(f64::MIN, f64::max);
    worst - ripple_db
}

pub fn touchstone_roundtrip(trace: &SParameterTrace, format: DataFormat) -> Check {
    let first = parse_touchstone(&write_touchstone(trace, format, &[])).map_err(|e| e.to_string())?;
    let second = parse_touchstone(&write_touchstone(&first.trace, format, &[])).map_err(|e| e.to_string())?;
    let close = |a: Complex64, b: Complex64| (a - b).norm() <= 1e-9 * a.norm().max(1e-300) + 1e-300;
    for i in 0..trace.len() {
        let (a, b) = (first.trace.matrix(i), second.trace.matrix(i));
        if rel(first.trace.freqs()[i], second.trace.freqs()[i]) > 1e-9 {
            return Err(format!("frequency {i} drifted"));
        }
        for r in 0..2 {
            for c in 0..2 {
                if !close(a[r][c], b[r][c]) {
                    return Err(format!("point {i} S{}{}: {} vs {}", r + 1, c + 1, a[r][c], b[r][c]));
                }
            }
        }
    }
    if first.trace.len() != trace.len() {
        return Err("length changed".into());
    }
    Ok(())
}

/// Z12 = Z21 to 1e-9 relative for a reciprocal S matrix.
pub fn z_reciprocity(s11: Complex64, s21: Complex64, s22: Complex64) -> Check {
    let Some(z) = s_to_z_point([[s11, s21], [s21, s22]], 50.0) else {
        return Ok(());
    };
    let scale = z[0][1].norm().max(z[1][0].norm()).max(1e-12);
    if (z[0][1] - z[1][0]).norm() > 1e-9 * scale {
        return Err(format!("Z12 {} vs Z21 {}", z[0][1], z[1][0]));
    }
    Ok(())
}
