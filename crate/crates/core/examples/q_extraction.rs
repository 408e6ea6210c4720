//! Q extraction from synthetic single-pole traces.
//!
//! Each measured (Qu, IL) pair fixes QL; the trace built from it is run
//! back through the extractor in both modes.

use siwkit::qfactor::{extract_q_report, loaded_q_from_il, synthesize_trace, ExtractOptions, QMode};
use siwkit::units::{ghz, linspace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let rows = [("reference", 20.637, 258.0, -2.26), ("sample 1", 21.165, 184.0, -3.33)];
    for (name, f_ghz, qu, il) in rows {
        let f0 = ghz(f_ghz);
        let ql = loaded_q_from_il(qu, il);
        let bw = f0 / ql;
        let trace = synthesize_trace(f0, ql, qu, &linspace(f0 - 5.0 * bw, f0 + 5.0 * bw, 801))?;
        for mode in [QMode::Standard, QMode::Literal] {
            let r = extract_q_report(&trace, ExtractOptions::with_mode(mode))?;
            println!("{name} [{mode}]");
            println!("{}", r.to_key_value());
        }
    }
    Ok(())
}
