//! Load a design file, report on it and write it back out.

use std::path::Path;

use siwkit::design::resonant_frequency;
use siwkit::designfile::{load_design, write_design};
use siwkit::model::validate_design;
use siwkit::units::to_ghz;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/reference.toml").to_string());
    let design = load_design(Path::new(&path))?;
    let f = resonant_frequency(&design.substrate, &design.geometry)?;
    let report = validate_design(&design)?;
    let mut header = vec![format!("f101 = {:.4} GHz", to_ghz(f))];
    header.extend(report.to_string().lines().map(String::from));
    print!("{}", write_design(&design, &header));
    Ok(())
}
