//! f101 against via pitch for the reference cavity, as CSV on stdout.

use siwkit::design::{parameter_sweep, write_sweep_csv, SweepParameter};
use siwkit::model::{CavityGeometry, ResonatorDesign, Substrate};
use siwkit::units::{ghz, um};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let design =
        ResonatorDesign::new(Substrate::default(), CavityGeometry::reference_resonator(), Some(ghz(20.5)))?;
    let rows = parameter_sweep(&design, SweepParameter::P, um(210.0), um(900.0), 24)?;
    write_sweep_csv(std::io::stdout(), SweepParameter::P, &rows)?;
    Ok(())
}
