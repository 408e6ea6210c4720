//! Two-pole Butterworth filter at 20.3 GHz with lossy resonators.

use siwkit::filter::{design_two_pole, midband_insertion_loss, plan_to_toml, ResponseFamily};
use siwkit::model::Substrate;
use siwkit::units::{ghz, to_ghz, to_mhz, um};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sub = Substrate::default();
    let d = design_two_pole(
        ghz(20.3),
        0.02,
        ResponseFamily::Butterworth,
        Some(258.0),
        &sub,
        um(200.0),
        um(250.0),
    )?;
    print!("{}", plan_to_toml(&d.plan, &d.spec));
    let m = &d.response.metrics;
    println!();
    println!(
        "midband IL   {:.3} dB (dissipation estimate {:.3} dB)",
        m.midband_il_db,
        midband_insertion_loss(&d.plan, &d.spec)
    );
    println!("3 dB width   {:.1} MHz around {:.4} GHz", to_mhz(m.bandwidth_3db), to_ghz(m.center));
    println!("layout       {}", d.layout);

    for family in [ResponseFamily::Butterworth, ResponseFamily::Chebyshev { ripple_db: 0.1 }] {
        let lossless = design_two_pole(ghz(20.3), 0.02, family, None, &sub, um(200.0), um(250.0))?;
        println!("{family}: lossless 3 dB width {:.1} MHz", to_mhz(lossless.response.metrics.bandwidth_3db));
    }
    Ok(())
}
