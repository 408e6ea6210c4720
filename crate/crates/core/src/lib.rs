//! # siwkit
//!
//! Design and analysis of substrate-integrated-waveguide (SIW) cavity
//! resonators and two-pole coupled-cavity filters.
//!
//! * [`design`]: closed-form TE101 forward model and inverse design.
//! * [`qfactor`]: f0 / 3 dB bandwidth / QL / Qe / Qu extraction from S21.
//! * [`oracle`]: finite-difference eigenmode solver that checks the
//!   closed-form frequency from first principles.
//! * [`filter`]: prototype synthesis and coupling-matrix response.
//! * [`touchstone`] and [`network`]: `.s2p` I/O and S→Z conversion.
//! * [`cli`]: the `siwkit` command line.
//!
//! Internally every quantity is SI (m, Hz). Files and the CLI use µm, GHz
//! and dB. Runnable walkthroughs live in `examples/`:
//!
//! ```bash
//! cargo run --example forward_design
//! ```

// `!(x > 0.0)` checks are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod design;
pub mod designfile;
pub mod filter;
pub mod model;
pub mod network;
pub mod oracle;
pub mod qfactor;
pub mod touchstone;
pub mod units;

pub use design::{
    effective_dimensions, parameter_sweep, resonant_frequency, synthesize_cavity, EffectiveDims,
};
pub use filter::{coupling_plan, design_two_pole, lowpass_prototype, FilterSpec, ResponseFamily};
pub use model::{validate_design, CavityGeometry, ResonatorDesign, Substrate, ValidityReport};
pub use network::{s_to_z, SParameterTrace, ZParameterTrace};
pub use qfactor::{extract_q_report, synthesize_trace, ExtractOptions, QMode, QReport};
pub use touchstone::{parse_touchstone, write_touchstone, DataFormat, TouchstoneDocument};
pub use units::PhysicalConstants;
