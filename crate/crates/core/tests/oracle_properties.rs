use siwkit::model::{CavityGeometry, Substrate};
use siwkit::oracle::{rasterize, solve_dominant_mode, OracleError, SolverOptions};

fn solve(g: &CavityGeometry, res: usize, tol: f64) -> siwkit::oracle::EigenResult {
    let cavity = rasterize(g, res).unwrap();
    solve_dominant_mode(&cavity, &Substrate::default(), SolverOptions::with_tol(tol)).unwrap()
}

#[test]
fn fence_raises_eigenvalue() {
    let cavity = rasterize(&CavityGeometry::reference_resonator(), 6).unwrap();
    let sub = Substrate::default();
    let fenced = solve_dominant_mode(&cavity, &sub, SolverOptions::default()).unwrap();
    let open = solve_dominant_mode(&cavity.without_vias(), &sub, SolverOptions::default()).unwrap();
    assert!(fenced.k_squared >= open.k_squared);
}

#[test]
fn swapping_sides_is_invariant() {
    let g = CavityGeometry::from_um(3150.0, 2400.0, 200.0, 250.0).unwrap();
    let a = solve(&g, 6, 1e-10);
    let b = solve(&g.transposed(), 6, 1e-10);
    assert!((a.f_oracle - b.f_oracle).abs() / a.f_oracle < 1e-8);
}

#[test]
fn field_is_symmetric_and_peaks_at_center() {
    let r = solve(&CavityGeometry::reference_resonator(), 6, 1e-10);
    let (nx, ny) = (r.nx, r.ny);
    let mut worst = 0.0f64;
    for j in 0..ny {
        for i in 0..nx {
            let v = r.at(i, j);
            worst = worst.max((v - r.at(nx - 1 - i, j)).abs());
            worst = worst.max((v - r.at(i, ny - 1 - j)).abs());
            worst = worst.max((v - r.at(j, i)).abs());
        }
    }
    assert!(worst < 1e-6, "asymmetry {worst}");
    let peak = (0..r.field.len()).max_by(|&a, &b| r.field[a].abs().total_cmp(&r.field[b].abs())).unwrap();
    let (pi, pj) = (peak % nx, peak / nx);
    assert!(pi.abs_diff(nx / 2) <= 1 && pj.abs_diff(ny / 2) <= 1);
}

#[test]
fn residual_respects_tolerance() {
    for tol in [1e-6, 1e-8, 1e-10] {
        let r = solve(&CavityGeometry::reference_resonator(), 4, tol);
        assert!(r.residual <= tol, "{} > {tol}", r.residual);
    }
}

#[test]
fn finer_grid_moves_toward_closed_form() {
    let g = CavityGeometry::reference_resonator();
    let coarse = solve(&g, 4, 1e-9).f_oracle;
    let fine = solve(&g, 8, 1e-9).f_oracle;
    let model = siwkit::resonant_frequency(&Substrate::default(), &g).unwrap();
    assert!((fine - model).abs() < (coarse - model).abs());
}

#[test]
fn too_coarse_is_rejected() {
    let err = rasterize(&CavityGeometry::reference_resonator(), 3).unwrap_err();
    assert!(matches!(err, OracleError::ResolutionTooCoarse(_)));
}
