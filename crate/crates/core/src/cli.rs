//! Command-line front end. Each subcommand reads a JSON config, evaluates a
//! table or report, and writes it to `--out` or standard output. Summary lines
//! and warnings go to standard error.
//!
//! Exit codes: 0 success, 1 verification failure, 2 config or I/O error,
//! 3 domain error.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::field::PotentialProfile;
use crate::layered::{
    critical_angle, group_delay, stack_scattering, tir_scan, Incidence, LayeredError, MediumStack, Polarization,
};
use crate::scan::Range;
use crate::verify::{self, Fault};
use crate::waveguide::{dispersion_point, ModeSpec};
use crate::wkb::{self, RegionKind, WkbError};

#[derive(Debug, Parser)]
#[command(name = "evanescent", version, about = "Evanescent-wave and complex-phase WKB calculations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Waveguide mode dispersion over a frequency range.
    Dispersion(Common),
    /// Single-interface reflection over an angle range.
    Tir(Common),
    /// Frustrated total internal reflection over a range of gap widths.
    Ftir(Common),
    /// Region classification, actions and imaginary-time lapses of a potential.
    Wkb(Common),
    /// Run the acceptance suite.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Debug, Args)]
pub struct Common {
    /// JSON config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format. Tables default to csv, the wkb report to json.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    BranchCut,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error on {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("verification failed")]
    VerifyFailed,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::VerifyFailed => 1,
            CliError::Config(_) | CliError::Io { .. } => 2,
            CliError::Domain(_) => 3,
        }
    }
}

fn domain<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Domain(e.to_string())
}

/// What a subcommand produced: the payload plus summary lines for stderr.
#[derive(Debug, Default)]
pub struct Report {
    pub body: String,
    pub notes: Vec<String>,
}

/// 17 significant digits.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn load_config<T: for<'de> Deserialize<'de>>(path: Option<&Path>) -> Result<T, CliError> {
    let path = path.ok_or_else(|| CliError::Config("--config is required".into()))?;
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serialises");
    s.push('\n');
    s
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DispersionConfig {
    pub mode: ModeSpec,
    pub omega: Range,
}

pub fn cmd_dispersion(cfg: &DispersionConfig, format: Format) -> Result<Report, CliError> {
    let rows: Vec<_> = cfg
        .omega
        .values()
        .par_iter()
        .map(|&w| dispersion_point(&cfg.mode, w))
        .collect();
    let body = match format {
        Format::Csv => {
            let mut s = String::from("omega,omega_c,k_re,k_im,v_p,v_g\n");
            for p in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{}",
                    num(p.omega),
                    num(p.omega_c),
                    num(p.k.re),
                    num(p.k.im),
                    opt(p.v_p),
                    opt(p.v_g)
                );
            }
            s
        }
        Format::Json => to_json(
            &rows
                .iter()
                .map(|p| {
                    json!({"omega": p.omega, "omega_c": p.omega_c, "k_re": p.k.re, "k_im": p.k.im, "v_p": p.v_p, "v_g": p.v_g})
                })
                .collect::<Vec<_>>(),
        ),
    };
    Ok(Report {
        body,
        notes: vec![format!("omega_c={}", num(rows[0].omega_c))],
    })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TirConfig {
    pub n1: f64,
    pub n2: f64,
    pub omega: f64,
    pub theta: Range,
    #[serde(default)]
    pub polarization: Polarization,
}

pub fn cmd_tir(cfg: &TirConfig, format: Format) -> Result<Report, CliError> {
    let rows = tir_scan(cfg.n1, cfg.n2, &cfg.theta.values(), cfg.omega, cfg.polarization).map_err(domain)?;
    let summary = match critical_angle(cfg.n1, cfg.n2) {
        Some(t) => format!("theta_c={t:.6}"),
        None => "theta_c=none".to_string(),
    };
    let body = match format {
        Format::Csv => {
            let mut s = String::from("theta0,theta2_re,theta2_im,abs_r,depth\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    num(r.theta0),
                    num(r.theta2.re),
                    num(r.theta2.im),
                    num(r.abs_r),
                    opt(r.depth)
                );
            }
            s
        }
        Format::Json => to_json(&json!({
            "theta_c": critical_angle(cfg.n1, cfg.n2),
            "rows": rows.iter().map(|r| json!({
                "theta0": r.theta0, "theta2_re": r.theta2.re, "theta2_im": r.theta2.im,
                "abs_r": r.abs_r, "depth": r.depth,
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Report {
        body,
        notes: vec![summary],
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LengthUnit {
    #[default]
    Length,
    /// Vacuum wavelengths `2 pi / omega`.
    Wavelength,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FtirConfig {
    pub stack: MediumStack,
    /// Index of the layer whose thickness is scanned.
    #[serde(default)]
    pub gap_layer: usize,
    pub d: Range,
    #[serde(default)]
    pub d_unit: LengthUnit,
    /// Incidence angle; exactly one of this and `theta_above_critical`.
    pub theta0: Option<f64>,
    /// Offset above the entry/gap critical angle.
    pub theta_above_critical: Option<f64>,
    pub omega: f64,
    #[serde(default)]
    pub polarization: Polarization,
    pub d_omega: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FtirRow {
    pub d: f64,
    pub abs_t2: f64,
    pub phase_t: f64,
    pub tau_g: f64,
    pub v_eff: f64,
}

fn ftir_point(cfg: &FtirConfig, inc: &Incidence, d: f64) -> Result<(f64, f64, f64, f64), LayeredError> {
    let mut stack = cfg.stack.clone();
    stack.layers[cfg.gap_layer] = stack.layers[cfg.gap_layer].with_thickness(d)?;
    let s = stack_scattering(&stack, inc)?;
    let tau = group_delay(&stack, inc, cfg.d_omega)?;
    Ok((s.t.norm_sqr(), s.phase_t, tau, stack.total_thickness() / tau))
}

pub fn cmd_ftir(cfg: &FtirConfig, format: Format) -> Result<Report, CliError> {
    if cfg.gap_layer >= cfg.stack.layers.len() {
        return Err(CliError::Config(format!(
            "gap_layer {} out of range for {} layers",
            cfg.gap_layer,
            cfg.stack.layers.len()
        )));
    }
    let n_entry = cfg.stack.entry.n();
    let n_gap = cfg.stack.layers[cfg.gap_layer].medium.n();
    let theta_c = critical_angle(n_entry, n_gap);
    let theta0 = match (cfg.theta0, cfg.theta_above_critical) {
        (Some(t), None) => t,
        (None, Some(dt)) => {
            theta_c.ok_or_else(|| domain(format!("no critical angle from n = {n_entry} into n = {n_gap}")))? + dt
        }
        _ => {
            return Err(CliError::Config(
                "give exactly one of theta0 and theta_above_critical".into(),
            ))
        }
    };
    let inc = Incidence::new(cfg.omega, theta0, cfg.polarization).map_err(domain)?;
    let unit = match cfg.d_unit {
        LengthUnit::Length => 1.0,
        LengthUnit::Wavelength => 2.0 * std::f64::consts::PI / cfg.omega,
    };

    let mut notes = Vec::new();
    if theta_c.is_none_or(|tc| theta0 <= tc) {
        notes.push(format!(
            "warning: theta0={theta0:.6} is not above the critical angle of the gap; the gap is propagating"
        ));
    }

    let ds = cfg.d.values();
    let rows: Vec<FtirRow> = ds
        .par_iter()
        .map(|&d| {
            ftir_point(cfg, &inc, d * unit).map(|(abs_t2, phase_t, tau_g, v_eff)| FtirRow {
                d,
                abs_t2,
                phase_t,
                tau_g,
                v_eff,
            })
        })
        .collect::<Result<_, _>>()
        .map_err(domain)?;

    let d_max = cfg.d.stop();
    let tau_max = rows[rows.len() - 1].tau_g;
    let (_, _, tau_decade, _) = ftir_point(cfg, &inc, 0.1 * d_max * unit).map_err(domain)?;
    notes.push(format!(
        "tau_g(d_max)={} rel_change_last_decade={}",
        num(tau_max),
        num((tau_max - tau_decade).abs() / tau_decade.abs())
    ));

    let body = match format {
        Format::Csv => {
            let mut s = String::from("d,abs_t2,phase_t,tau_g,v_eff\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{},{},{},{},{}",
                    num(r.d),
                    num(r.abs_t2),
                    num(r.phase_t),
                    num(r.tau_g),
                    num(r.v_eff)
                );
            }
            s
        }
        Format::Json => to_json(&json!({
            "theta0": theta0,
            "tau_g_at_d_max": tau_max,
            "rel_change_last_decade": (tau_max - tau_decade).abs() / tau_decade.abs(),
            "rows": rows.iter().map(|r| json!({
                "d": r.d, "abs_t2": r.abs_t2, "phase_t": r.phase_t, "tau_g": r.tau_g, "v_eff": r.v_eff,
            })).collect::<Vec<_>>(),
        })),
    };
    Ok(Report { body, notes })
}

/// Potential `U` sampled on a grid, inline or in a separate JSON file.
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum PotentialSource {
    Inline(PotentialProfile),
    File(PathBuf),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WkbConfig {
    pub potential: PotentialSource,
    pub energy: f64,
    #[serde(default = "default_d_energy")]
    pub d_energy: f64,
}

fn default_d_energy() -> f64 {
    1e-4
}

#[derive(Debug, Serialize)]
pub struct RegionReport {
    pub kind: RegionKind,
    pub x_a: f64,
    pub x_b: f64,
    #[serde(rename = "S_r")]
    pub s_r: f64,
    #[serde(rename = "S_i")]
    pub s_i: f64,
    pub tau_im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau_im_note: Option<String>,
    #[serde(rename = "exp_neg_S_r")]
    pub exp_neg_s_r: f64,
}

#[derive(Debug, Serialize)]
pub struct WkbReport {
    pub energy: f64,
    pub regions: Vec<RegionReport>,
    /// One entry per forbidden region, in order; `null` where undefined.
    pub tau_im: Vec<Option<f64>>,
    pub max_residual_real: f64,
    pub max_residual_imag: f64,
}

pub fn wkb_report(u: &PotentialProfile, energy: f64, d_energy: f64) -> Result<WkbReport, WkbError> {
    if !(d_energy > 0.0 && d_energy.is_finite()) {
        return Err(WkbError::InvalidParameter("d_energy must be positive"));
    }
    let v = PotentialProfile::from_potential(u.grid, &u.values, energy)?;
    let classes = wkb::classify_regions(&v, None);
    let mut regions = Vec::with_capacity(classes.regions.len());
    let mut taus = Vec::new();
    for r in &classes.regions {
        let action = wkb::wkb_action(&v, r.span)?;
        let (tau_im, tau_im_note) = if r.kind == RegionKind::Forbidden {
            match wkb::imaginary_time_lapse(&v, r.span, d_energy) {
                Ok(t) => (Some(t), None),
                Err(e @ WkbError::RegionChanged(_)) => (None, Some(e.to_string())),
                Err(e) => return Err(e),
            }
        } else {
            (None, None)
        };
        if r.kind == RegionKind::Forbidden {
            taus.push(tau_im);
        }
        regions.push(RegionReport {
            kind: r.kind,
            x_a: r.x_a,
            x_b: r.x_b,
            s_r: action.euclidean,
            s_i: action.lorentzian,
            tau_im,
            tau_im_note,
            exp_neg_s_r: (-action.euclidean).exp(),
        });
    }
    let (s_r, s_i) = wkb::wkb_phases(&v)?;
    let res = wkb::hj_residual_classical(&s_r, &s_i, &v)?;
    let interior = |x: &[f64]| x[1..x.len() - 1].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    Ok(WkbReport {
        energy,
        regions,
        tau_im: taus,
        max_residual_real: interior(&res.real.values),
        max_residual_imag: interior(&res.imag.values),
    })
}

fn resolve_potential(source: &PotentialSource, config_dir: &Path) -> Result<PotentialProfile, CliError> {
    match source {
        PotentialSource::Inline(p) => Ok(p.clone()),
        PotentialSource::File(rel) => {
            let path = config_dir.join(rel);
            load_config(Some(&path))
        }
    }
}

pub fn cmd_wkb(cfg: &WkbConfig, config_dir: &Path, format: Format) -> Result<Report, CliError> {
    let u = resolve_potential(&cfg.potential, config_dir)?;
    let report = wkb_report(&u, cfg.energy, cfg.d_energy).map_err(domain)?;
    let notes = vec![format!(
        "regions={} forbidden={}",
        report.regions.len(),
        report.tau_im.len()
    )];
    let body = match format {
        Format::Json => to_json(&report),
        Format::Csv => {
            let mut s = String::from("kind,x_a,x_b,S_r,S_i,tau_im,exp_neg_S_r\n");
            for r in &report.regions {
                let kind = serde_json::to_value(r.kind).expect("kind serialises");
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{}",
                    kind.as_str().unwrap_or_default(),
                    num(r.x_a),
                    num(r.x_b),
                    num(r.s_r),
                    num(r.s_i),
                    opt(r.tau_im),
                    num(r.exp_neg_s_r)
                );
            }
            s
        }
    };
    Ok(Report { body, notes })
}

pub fn cmd_verify(fault: Option<Fault>, format: Format) -> Result<(Report, bool), CliError> {
    let outcomes = verify::run_all(&verify::Options { fault });
    let ok = outcomes.iter().all(|o| o.passed);
    let body = match format {
        Format::Csv => outcomes.iter().map(|o| format!("{o}\n")).collect(),
        Format::Json => to_json(&outcomes),
    };
    Ok((Report { body, notes: Vec::new() }, ok))
}

fn emit(report: &Report, out: Option<&Path>) -> Result<(), CliError> {
    for n in &report.notes {
        eprintln!("{n}");
    }
    match out {
        Some(path) => fs::write(path, &report.body).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{}", report.body);
            Ok(())
        }
    }
}

/// Runs a parsed command. Output is written only once the whole result exists.
pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Dispersion(c) => {
            let cfg: DispersionConfig = load_config(c.config.as_deref())?;
            emit(&cmd_dispersion(&cfg, c.format.unwrap_or(Format::Csv))?, c.out.as_deref())
        }
        Command::Tir(c) => {
            let cfg: TirConfig = load_config(c.config.as_deref())?;
            emit(&cmd_tir(&cfg, c.format.unwrap_or(Format::Csv))?, c.out.as_deref())
        }
        Command::Ftir(c) => {
            let cfg: FtirConfig = load_config(c.config.as_deref())?;
            emit(&cmd_ftir(&cfg, c.format.unwrap_or(Format::Csv))?, c.out.as_deref())
        }
        Command::Wkb(c) => {
            let cfg: WkbConfig = load_config(c.config.as_deref())?;
            let dir = c
                .config
                .as_deref()
                .and_then(Path::parent)
                .map(Path::to_path_buf)
                .unwrap_or_default();
            emit(&cmd_wkb(&cfg, &dir, c.format.unwrap_or(Format::Json))?, c.out.as_deref())
        }
        Command::Verify { common, inject_fault } => {
            let fault = inject_fault.map(|FaultArg::BranchCut| Fault::BranchCut);
            let (report, ok) = cmd_verify(fault, common.format.unwrap_or(Format::Csv))?;
            emit(&report, common.out.as_deref())?;
            if ok {
                Ok(())
            } else {
                Err(CliError::VerifyFailed)
            }
        }
    }
}

/// Parses `args`, runs, and maps the result onto the documented exit codes.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Grid1D;

    #[test]
    fn dispersion_rows_below_cutoff_are_empty() {
        let cfg: DispersionConfig = serde_json::from_str(
            r#"{"mode":{"a":3.141592653589793,"b":3.141592653589793,"n1":1,"n2":1},
                "omega":{"start":0.1,"stop":10,"count":100}}"#,
        )
        .unwrap();
        let r = cmd_dispersion(&cfg, Format::Csv).unwrap();
        let lines: Vec<&str> = r.body.lines().collect();
        assert_eq!(lines[0], "omega,omega_c,k_re,k_im,v_p,v_g");
        assert_eq!(lines.len(), 101);
        for line in &lines[1..] {
            let omega: f64 = line.split(',').next().unwrap().parse().unwrap();
            assert_eq!(omega < 2f64.sqrt(), line.ends_with(",,"), "{line}");
        }
    }

    #[test]
    fn tir_summary_lines() {
        let mk = |n1: f64, n2: f64| TirConfig {
            n1,
            n2,
            omega: 1.0,
            theta: Range::linear(0.0, 1.5, 40).unwrap(),
            polarization: Polarization::S,
        };
        assert_eq!(cmd_tir(&mk(1.5, 1.0), Format::Csv).unwrap().notes, vec!["theta_c=0.729728"]);
        let rare = cmd_tir(&mk(1.0, 1.5), Format::Csv).unwrap();
        assert_eq!(rare.notes, vec!["theta_c=none"]);
        assert!(rare.body.lines().skip(1).all(|l| l.ends_with(',')));
    }

    #[test]
    fn wkb_rectangular_barrier_report() {
        let g = Grid1D::new(0.0, 1.0, 101).unwrap();
        let u = PotentialProfile::from_fn(g, |_| 1.0).unwrap();
        let rep = wkb_report(&u, 0.5, 1e-4).unwrap();
        assert_eq!(rep.regions.len(), 1);
        let r = &rep.regions[0];
        assert_eq!(r.kind, RegionKind::Forbidden);
        assert!((r.s_r - 1.0).abs() < 1e-12);
        assert!((r.tau_im.unwrap() - 1.0).abs() < 1e-7);
        assert!((r.exp_neg_s_r - 0.367879).abs() < 1e-6);

        let well = PotentialProfile::from_fn(g, |_| -1.0).unwrap();
        let rep = wkb_report(&well, 0.0, 1e-4).unwrap();
        assert!(rep.tau_im.is_empty());
        assert_eq!(rep.regions[0].kind, RegionKind::Allowed);
    }

    #[test]
    fn ftir_needs_one_angle() {
        let cfg: FtirConfig = serde_json::from_str(
            r#"{"stack":{"entry":{"n":1.5},"layers":[{"n":1.0,"d":1.0}],"exit":{"n":1.5}},
                "d":{"start":0.1,"stop":1,"count":3},"omega":6.283185307179586}"#,
        )
        .unwrap();
        assert_eq!(cmd_ftir(&cfg, Format::Csv).unwrap_err().exit_code(), 2);
    }
}
