mod common;

use common::{q_roundtrip, rel};
use proptest::prelude::*;
use siwkit::qfactor::{extract_q_report, synthesize_trace, ExtractOptions};
use siwkit::units::linspace;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn recovers_f0_ql_qu(f0_ghz in 5.0f64..40.0, ql in 10.0f64..500.0, ratio in 1.1f64..100.0, offset in -0.5f64..0.5) {
        let r = q_roundtrip(f0_ghz * 1e9, ql, ql * ratio, 401, offset);
        prop_assert!(r.is_ok(), "{:?}", r);
    }

    #[test]
    fn grid_refinement_changes_little(ql in 20.0f64..300.0, ratio in 1.1f64..100.0) {
        let f0 = 21.165e9;
        let bw = f0 / ql;
        let coarse = synthesize_trace(f0, ql, ql * ratio, &linspace(f0 - 5.0 * bw, f0 + 5.0 * bw, 401)).unwrap();
        let fine = synthesize_trace(f0, ql, ql * ratio, &linspace(f0 - 5.0 * bw, f0 + 5.0 * bw, 801)).unwrap();
        let a = extract_q_report(&coarse, ExtractOptions::default()).unwrap();
        let b = extract_q_report(&fine, ExtractOptions::default()).unwrap();
        prop_assert!(rel(a.q_loaded, b.q_loaded) < 2e-3);
        prop_assert!(rel(a.q_unloaded, b.q_unloaded) < 2e-3);
    }
}

#[test]
fn off_grid_resonance() {
    // f0 placed between grid points
    let f0 = 21.165e9;
    let bw = f0 / 58.6;
    let grid: Vec<f64> = linspace(f0 - 5.0 * bw, f0 + 5.0 * bw, 400);
    let trace = synthesize_trace(f0, 58.6, 184.0, &grid).unwrap();
    let r = extract_q_report(&trace, ExtractOptions::default()).unwrap();
    assert!((r.f0 - f0).abs() < 1e6);
    assert!(rel(r.q_unloaded, 184.0) < 1e-3);
}
