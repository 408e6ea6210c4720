//! Cavity side lengths for a target frequency, then a forward check.

use siwkit::design::{resonant_frequency, synthesize_cavity};
use siwkit::model::Substrate;
use siwkit::units::{ghz, to_ghz, to_um, um};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let substrate = Substrate::default();
    for (f0, aspect) in [(20.5, 1.0), (20.5, 1.5), (24.0, 1.0)] {
        let g = synthesize_cavity(ghz(f0), &substrate, um(200.0), um(250.0), aspect)?;
        let back = resonant_frequency(&substrate, &g)?;
        println!(
            "f0 = {f0:5.2} GHz, aspect {aspect:.1}: w = {:.1} um, l = {:.1} um, forward {:.9} GHz",
            to_um(g.w()),
            to_um(g.l()),
            to_ghz(back)
        );
    }
    Ok(())
}
