//! Parse a Touchstone file, rewrite it in RI format and convert to Z.

use siwkit::network::{s_to_z, write_z_csv};
use siwkit::touchstone::{parse_touchstone, write_touchstone, DataFormat};

const SAMPLE: &str = "! two points near resonance
# GHz S MA R 50
21.100 0.35 95 0.66 -20 0.66 -20 0.35 95
21.165 0.29 100 0.68 -25 0.68 -25 0.29 100
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let doc = parse_touchstone(SAMPLE)?;
    println!("{} points, comments {:?}", doc.trace.len(), doc.comments);

    let ri = write_touchstone(&doc.trace, DataFormat::RI, &doc.comments);
    print!("{ri}");
    let again = parse_touchstone(&ri)?;
    assert_eq!(again.trace.len(), doc.trace.len());

    let z = s_to_z(&doc.trace)?;
    write_z_csv(std::io::stdout(), &z)?;
    Ok(())
}
