//! TE101 frequency of the reference cavity and its validity rules.

use siwkit::design::{effective_dimensions, resonant_frequency};
use siwkit::model::{validate_design, CavityGeometry, ResonatorDesign, Substrate};
use siwkit::units::{ghz, to_ghz, to_um};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let substrate = Substrate::high_resistivity_silicon();
    let geometry = CavityGeometry::reference_resonator();

    let eff = effective_dimensions(&geometry)?;
    let f101 = resonant_frequency(&substrate, &geometry)?;
    println!("w_eff = {:.1} um, l_eff = {:.1} um", to_um(eff.w_eff), to_um(eff.l_eff));
    println!("f101  = {:.4} GHz", to_ghz(f101));

    let design = ResonatorDesign::new(substrate, geometry, Some(ghz(20.5)))?;
    print!("{}", validate_design(&design)?);
    Ok(())
}
