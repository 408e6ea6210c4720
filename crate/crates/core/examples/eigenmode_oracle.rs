//! Eigenmode check of the reference cavity.
//!
//! Solves the 2-D Dirichlet problem on the via-fenced cross-section and
//! compares it with the closed-form TE101 frequency. Also runs the empty
//! rectangle convergence study.
//!
//! ```bash
//! cargo run --release --example eigenmode_oracle -- 24
//! ```

use std::time::Instant;

use siwkit::design::effective_dimensions;
use siwkit::model::{CavityGeometry, ResonatorDesign, Substrate};
use siwkit::oracle::{self, SolverOptions};
use siwkit::units::{to_ghz, to_um};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let resolution: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(16);
    let design = ResonatorDesign::new(Substrate::default(), CavityGeometry::reference_resonator(), None)?;

    let cavity = oracle::rasterize(&design.geometry, resolution)?;
    println!(
        "grid {}x{}, h = {:.2} um, {} vias, {} unknowns",
        cavity.nx(),
        cavity.ny(),
        to_um(cavity.spacing()),
        cavity.via_count(),
        cavity.unknowns()
    );

    let t = Instant::now();
    let cmp = oracle::verify_design(&design, resolution, SolverOptions::default())?;
    println!(
        "f_model  = {:.4} GHz\nf_oracle = {:.4} GHz ({:+.2}%), {} outer / {} CG iterations, residual {:.1e}, {:.1?}",
        to_ghz(cmp.f_model),
        to_ghz(cmp.eigen.f_oracle),
        cmp.gap_percent(),
        cmp.eigen.iterations,
        cmp.eigen.cg_iterations,
        cmp.eigen.residual,
        t.elapsed()
    );

    let eff = effective_dimensions(&design.geometry)?;
    let rows = oracle::convergence_study(
        &design.substrate,
        eff.w_eff,
        eff.l_eff,
        &[25, 50, 100, 200],
        SolverOptions::default(),
    )?;
    oracle::write_convergence_csv(std::io::stdout(), &rows)?;
    if let Some(order) = oracle::observed_order(&rows) {
        println!("observed order {order:.2}");
    }
    Ok(())
}
