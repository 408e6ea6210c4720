//! `siwkit` command line.
//!
//! Exit codes: 0 success, 1 domain error (bad file, failed extraction, ...),
//! 2 usage error. Numeric output is in GHz / µm / dB; machine-readable
//! output is CSV or the design-file format.

use std::error::Error;
use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, CommandFactory, Parser, Subcommand};
use rayon::prelude::*;

use crate::design::{self, SweepParameter};
use crate::designfile::{self, load_design, load_substrate};
use crate::filter::{self, FilterSpec, ResponseFamily};
use crate::model::{validate_design, ResonatorDesign, Substrate};
use crate::oracle::{self, SolverOptions};
use crate::qfactor::{self, ExtractOptions, QMode, QReport};
use crate::touchstone::parse_touchstone;
use crate::units::{ghz, to_ghz, to_um, um};

type CliResult<T = ()> = Result<T, Box<dyn Error + Send + Sync>>;

#[derive(Debug, Parser)]
#[command(name = "siwkit", version, about = "SIW cavity resonator and filter design toolkit")]
pub struct Cli {
    /// Substrate preset (hr-silicon, air, rt-duroid-5880) or TOML file.
    #[arg(long, global = true, display_order = 100)]
    pub substrate: Option<String>,
    /// Q extraction mode.
    #[arg(long, global = true, display_order = 100, default_value = "standard", value_parser = parse_mode)]
    pub mode: QMode,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true, display_order = 100)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_mode(s: &str) -> Result<QMode, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inverse design from a target frequency; prints a design file.
    Design(DesignArgs),
    /// Extract Q from one or more .s2p files; prints CSV.
    Analyze(AnalyzeArgs),
    /// Compare the eigenmode oracle with the closed-form frequency.
    Verify(VerifyArgs),
    /// Two-pole (or n-pole) filter synthesis; prints the response CSV.
    Filter(FilterArgs),
    /// Sweep one parameter of a design file; prints CSV.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct DesignArgs {
    /// Target resonant frequency, GHz.
    #[arg(long)]
    pub f0: f64,
    /// Via diameter, µm.
    #[arg(long)]
    pub d: f64,
    /// Via pitch, µm.
    #[arg(long)]
    pub p: f64,
    /// l_eff / w_eff.
    #[arg(long, default_value_t = 1.0)]
    pub aspect: f64,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
    /// 3-point moving average on |S21| before extraction.
    #[arg(long)]
    pub smooth: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub design: PathBuf,
    /// Grid intervals per via diameter.
    #[arg(long, default_value_t = 16)]
    pub resolution: usize,
    /// Relative eigen-residual tolerance.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Also write the normalized |Ey| matrix here.
    #[arg(long)]
    pub field: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Center frequency, GHz.
    #[arg(long)]
    pub f0: f64,
    /// Fractional bandwidth.
    #[arg(long)]
    pub fbw: f64,
    #[arg(long, default_value_t = 2)]
    pub order: usize,
    #[arg(long, default_value = "butterworth")]
    pub family: String,
    /// Chebyshev ripple, dB.
    #[arg(long, default_value_t = 0.1)]
    pub ripple: f64,
    /// Resonator unloaded Q; lossless when omitted.
    #[arg(long)]
    pub qu: Option<f64>,
    /// Via diameter, µm.
    #[arg(long, default_value_t = 200.0)]
    pub d: f64,
    /// Via pitch, µm.
    #[arg(long, default_value_t = 250.0)]
    pub p: f64,
    #[arg(long, default_value_t = filter::DEFAULT_GRID_POINTS)]
    pub points: usize,
    /// Write the coupling plan (TOML) here; otherwise it goes to stderr.
    #[arg(long)]
    pub plan: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    pub design: PathBuf,
    /// One of w, l, d, p, eps_r.
    #[arg(long)]
    pub param: String,
    /// Start value (µm for lengths).
    #[arg(long)]
    pub from: f64,
    /// Stop value (µm for lengths).
    #[arg(long)]
    pub to: f64,
    #[arg(long, default_value_t = 21)]
    pub steps: usize,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(stdout, "{}", e.render());
            return 0;
        }
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.render());
            let _ = write!(stderr, "{}", usage_help(&args));
            return 2;
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

/// Help text of the first subcommand named in `args`, or the top-level help.
fn usage_help(args: &[OsString]) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let name = args.iter().skip(1).filter_map(|a| a.to_str()).find(|a| cmd.find_subcommand(a).is_some());
    match name.and_then(|n| cmd.find_subcommand_mut(n)) {
        Some(sub) => sub.render_help().to_string(),
        None => cmd.render_help().to_string(),
    }
}

fn substrate(cli: &Cli) -> CliResult<Substrate> {
    Ok(match &cli.substrate {
        Some(s) => load_substrate(s)?,
        None => Substrate::default(),
    })
}

fn with_output(
    cli: &Cli,
    stdout: &mut dyn Write,
    body: impl FnOnce(&mut dyn Write) -> CliResult,
) -> CliResult {
    match &cli.out {
        Some(path) => {
            let file = File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
            let mut w = BufWriter::new(file);
            body(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => body(stdout),
    }
}

fn load_design_with_override(cli: &Cli, path: &Path) -> CliResult<ResonatorDesign> {
    let mut design = load_design(path)?;
    if cli.substrate.is_some() {
        design = ResonatorDesign::new(substrate(cli)?, design.geometry, design.target_f0())?;
    }
    Ok(design)
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<i32> {
    match &cli.command {
        Command::Design(args) => {
            let sub = substrate(cli)?;
            let geometry =
                design::synthesize_cavity(ghz(args.f0), &sub, um(args.d), um(args.p), args.aspect)?;
            let des = ResonatorDesign::new(sub, geometry, Some(ghz(args.f0)))?;
            let report = validate_design(&des)?;
            let f_model = design::resonant_frequency(&des.substrate, &des.geometry)?;
            let mut header = vec![
                format!("target f0 = {} GHz, forward model f101 = {:.6} GHz", args.f0, to_ghz(f_model)),
                format!("w = {:.3} um, l = {:.3} um", to_um(geometry.w()), to_um(geometry.l())),
            ];
            header.extend(report.to_string().lines().map(str::to_string));
            let text = designfile::write_design(&des, &header);
            with_output(cli, stdout, |w| Ok(w.write_all(text.as_bytes())?))?;
            Ok(0)
        }
        Command::Analyze(args) => {
            let options = ExtractOptions { mode: cli.mode, smoothing: args.smooth };
            let results: Vec<CliResult<QReport>> = args
                .files
                .par_iter()
                .map(|path| {
                    let text =
                        std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                    let doc = parse_touchstone(&text).map_err(|e| format!("{}: {e}", path.display()))?;
                    let report = qfactor::extract_q_report(&doc.trace, options)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    Ok(report)
                })
                .collect();
            let mut rows = Vec::new();
            let mut failed = false;
            for (path, result) in args.files.iter().zip(results) {
                match result {
                    Ok(r) => rows.push((path.display().to_string(), r)),
                    Err(e) => {
                        failed = true;
                        writeln!(stderr, "error: {e}")?;
                    }
                }
            }
            with_output(cli, stdout, |w| Ok(qfactor::write_q_csv(w, &rows)?))?;
            Ok(if failed { 1 } else { 0 })
        }
        Command::Verify(args) => {
            let des = load_design_with_override(cli, &args.design)?;
            let cmp = oracle::verify_design(&des, args.resolution, SolverOptions::with_tol(args.tol))?;
            with_output(cli, stdout, |w| {
                let mut wtr = csv::Writer::from_writer(w);
                wtr.write_record(["f_model_GHz", "f_oracle_GHz", "gap_percent", "iterations", "residual"])?;
                wtr.write_record([
                    format!("{:.6}", to_ghz(cmp.f_model)),
                    format!("{:.6}", to_ghz(cmp.eigen.f_oracle)),
                    format!("{:.4}", cmp.gap_percent()),
                    cmp.eigen.iterations.to_string(),
                    format!("{:.3e}", cmp.eigen.residual),
                ])?;
                wtr.flush()?;
                Ok(())
            })?;
            if let Some(path) = &args.field {
                let file =
                    File::create(path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
                let mut w = BufWriter::new(file);
                oracle::export_field(&mut w, &cmp.eigen)?;
                w.flush()?;
            }
            Ok(0)
        }
        Command::Filter(args) => {
            let sub = substrate(cli)?;
            let family = ResponseFamily::from_name(&args.family, args.ripple)?;
            let spec = FilterSpec::new(ghz(args.f0), args.fbw, args.order, family, args.qu)?;
            let plan = filter::coupling_plan(&spec, &sub, um(args.d), um(args.p))?;
            let response = filter::simulate_response(&plan, &spec, &spec.default_grid(args.points))?;
            let mut plan_text = filter::plan_to_toml(&plan, &spec);
            plan_text.push_str(&format!(
                "\n[metrics]\nmidband_il_db = {:.4}\nbandwidth_3db_mhz = {:.3}\ncenter_ghz = {:.6}\ndissipation_il_db = {:.4}\n",
                response.metrics.midband_il_db,
                response.metrics.bandwidth_3db * 1e-6,
                to_ghz(response.metrics.center),
                filter::midband_insertion_loss(&plan, &spec),
            ));
            match &args.plan {
                Some(path) => std::fs::write(path, &plan_text)
                    .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
                None => stderr.write_all(plan_text.as_bytes())?,
            }
            with_output(cli, stdout, |w| Ok(filter::write_response_csv(w, &response)?))?;
            Ok(0)
        }
        Command::Sweep(args) => {
            let des = load_design_with_override(cli, &args.design)?;
            let param: SweepParameter = args.param.parse()?;
            let (from, to) =
                if param.is_length() { (um(args.from), um(args.to)) } else { (args.from, args.to) };
            let rows = design::parameter_sweep(&des, param, from, to, args.steps)?;
            with_output(cli, stdout, |w| Ok(design::write_sweep_csv(w, param, &rows)?))?;
            Ok(0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("siwkit").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn design_prints_geometry_and_rules() {
        let (code, out, _) = run_capture(&["design", "--f0", "20.5", "--d", "200", "--p", "250"]);
        assert_eq!(code, 0);
        assert!(out.contains("w = 3166."), "{out}");
        assert!(out.contains("pitch-lt-4d"));
        assert!(out.contains("pitch-lt-lambda0-sqrt-er-over-2"));
        let d = designfile::parse_design(&out).unwrap();
        assert!((to_um(d.geometry.w()) - 3166.0).abs() < 1.0);
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, err) = run_capture(&["design", "--f0", "20.5"]);
        assert_eq!(code, 2);
        assert!(err.contains("--d"), "{err}");
        assert!(err.contains("Via pitch"), "{err}");
        let (code, _, _) = run_capture(&["frobnicate"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_capture(&["--mode", "weird", "analyze", "x.s2p"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn missing_file_exit_1() {
        let (code, out, err) = run_capture(&["analyze", "missing.s2p"]);
        assert_eq!(code, 1);
        assert!(err.contains("missing.s2p"));
        assert_eq!(out.lines().count(), 1);
    }

    #[test]
    fn domain_error_exit_1() {
        let (code, _, err) = run_capture(&["filter", "--f0", "20.3", "--fbw", "0.5"]);
        assert_eq!(code, 1);
        assert!(err.contains("fractional bandwidth"));
        let (code, _, _) =
            run_capture(&["--substrate", "kryptonite", "design", "--f0", "1", "--d", "1", "--p", "2"]);
        assert_eq!(code, 1);
    }
}
