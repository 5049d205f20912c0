//! Command-line front end. [`run`] parses arguments, dispatches and returns
//! the process exit code; the binary is a thin wrapper around it.
//!
//! Exit codes: 0 success, 2 invalid input, 3 numerical failure (convergence
//! or a failed identity check), 4 a confirmed conjecture violation.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::bounds::{figure_data, linear_grid, BoundCurve, DEFAULT_K_MAX};
use crate::channels::{apply_classical_noise, apply_thermal_noise, converged_dim, ChannelSpec};
use crate::entropies::{renyi_entropy, renyi_wehrl_estimate, von_neumann, wehrl_estimate, HusimiRule};
use crate::error::{invalid, Error, Result};
use crate::fock::{
    coherent_dim, coherent_state, fock_state, thermal_dim, thermal_state, DensityOperator, PureState, C64,
};
use crate::minimizer::{minimize_gaussian, minimize_output_renyi, minimize_output_wehrl, Objective, SearchConfig};
use crate::quadrature::{QuadratureRule, DEFAULT_ANGULAR_COUNT, DEFAULT_RADIAL_ORDER};
use crate::theta_multimode::{
    build_circulant_system, series_terms, theta_char_closed, theta_char_laguerre, theta_factor, DETERMINANT_TOLERANCE,
    EIGEN_TOLERANCE,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "BOSONIC_MINENT_THREADS";

/// Characteristic-function agreement required by `theta-verify`.
pub const CHARACTERISTIC_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Parser)]
#[command(
    name = "bosonic-minent",
    version,
    about = "Minimum output entropies of bosonic noise channels"
)]
pub struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Suppress stdout; files given with --output are still written.
    #[arg(long, short, global = true)]
    pub quiet: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropies of a channel output for a chosen input state.
    Entropy(EntropyArgs),
    /// Tabulate the upper and lower bounds on the minimum Renyi entropy as CSV.
    Bounds(BoundsArgs),
    /// Check the circulant eigen-data, determinant identity and factor series.
    ThetaVerify(ThetaArgs),
    /// Search for inputs beating the coherent-state output entropy.
    Conjecture(ConjectureArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Classical,
    Thermal,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ChannelArgs {
    #[arg(long, value_enum, default_value = "classical")]
    pub channel: ChannelKind,
    /// Classical noise variance.
    #[arg(long)]
    pub n: Option<f64>,
    /// Thermal channel transmissivity.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Thermal environment mean photon number.
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub n_env: Option<f64>,
}

impl ChannelArgs {
    pub fn spec(&self) -> Result<ChannelSpec> {
        match self.channel {
            ChannelKind::Classical => {
                if self.eta.is_some() || self.n_env.is_some() {
                    return Err(invalid("--eta/--N apply to the thermal channel only"));
                }
                ChannelSpec::classical(self.n.ok_or_else(|| invalid("classical channel needs --n"))?)
            }
            ChannelKind::Thermal => {
                if self.n.is_some() {
                    return Err(invalid("--n applies to the classical channel only"));
                }
                let eta = self.eta.ok_or_else(|| invalid("thermal channel needs --eta"))?;
                let n_env = self.n_env.ok_or_else(|| invalid("thermal channel needs --N"))?;
                ChannelSpec::thermal(eta, n_env)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InputKind {
    Vacuum,
    Coherent,
    Fock,
    Thermal,
    File,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum, default_value = "vacuum")]
    pub input: InputKind,
    /// Coherent amplitude, real part.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_re: f64,
    /// Coherent amplitude, imaginary part.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub alpha_im: f64,
    /// Fock level.
    #[arg(long, default_value_t = 0)]
    pub m: usize,
    /// Thermal input mean photon number.
    #[arg(long, default_value_t = 0.0)]
    pub nbar: f64,
    /// Amplitude file: one `re im` pair per line, `#` starts a comment.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Renyi orders (comma separated, `inf` allowed).
    #[arg(long, value_delimiter = ',', default_value = "2")]
    pub z: Vec<f64>,
    /// Fock cutoff; chosen automatically when absent.
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_RADIAL_ORDER)]
    pub radial_order: usize,
    #[arg(long, default_value_t = DEFAULT_ANGULAR_COUNT)]
    pub angular_count: usize,
    /// Skip the Husimi-grid entropies.
    #[arg(long)]
    pub no_wehrl: bool,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct BoundsArgs {
    #[arg(long, default_value_t = 1.0)]
    pub n: f64,
    #[arg(long, default_value_t = 0.2)]
    pub z_min: f64,
    #[arg(long, default_value_t = 12.0)]
    pub z_max: f64,
    #[arg(long, default_value_t = 200)]
    pub points: usize,
    /// Explicit orders; overrides the linear grid.
    #[arg(long, value_delimiter = ',')]
    pub z: Option<Vec<f64>>,
    /// Lower bound on the minimum von Neumann output entropy.
    #[arg(long)]
    pub vn_bound: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_K_MAX)]
    pub k_max: usize,
    /// Write the CSV (or JSON with --json) here instead of stdout.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ThetaArgs {
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 1.0)]
    pub n: f64,
    /// Points per axis of the `nu` grid.
    #[arg(long, default_value_t = 5)]
    pub grid: usize,
    /// Half-width of the `nu` grid.
    #[arg(long, default_value_t = 1.5)]
    pub extent: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveArg {
    Renyi,
    Wehrl,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ConjectureArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum, default_value = "renyi")]
    pub objective: ObjectiveArg,
    #[arg(long, default_value_t = 2.0)]
    pub z: f64,
    #[arg(long, default_value_t = 4)]
    pub support_dim: usize,
    #[arg(long, default_value_t = 20)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Add the vacuum as an extra start.
    #[arg(long)]
    pub coherent_start: bool,
    #[arg(long, default_value_t = crate::minimizer::DEFAULT_MAX_ITERS)]
    pub max_iters: u64,
    /// Write the JSON report here.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Convergence(_) | Error::IdentityViolation { .. } => EXIT_NUMERICAL,
        _ => EXIT_VALIDATION,
    }
}

/// Builds the global rayon pool from [`THREADS_ENV`] if set.
pub fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|t| *t > 0)
        .ok_or_else(|| invalid(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // A pool that already exists (e.g. in tests) is left alone.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    Ok(())
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Regular output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_VALIDATION
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    if let Err(e) = configure_threads() {
        let _ = writeln!(err, "error: {e}");
        return exit_code(&e);
    }
    let mut sink: Box<dyn Write> = if cli.quiet {
        Box::new(std::io::sink())
    } else {
        Box::new(&mut *out)
    };
    let result = match &cli.command {
        Command::Entropy(a) => cmd_entropy(a, cli.json, &mut sink),
        Command::Bounds(a) => cmd_bounds(a, cli.json, &mut sink),
        Command::ThetaVerify(a) => cmd_theta_verify(a, cli.json, &mut sink),
        Command::Conjecture(a) => cmd_conjecture(a, cli.json, &mut sink),
    };
    drop(sink);
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io_err(e: std::io::Error) -> Error {
    invalid(format!("I/O error: {e}"))
}

fn emit(sink: &mut dyn Write, text: &str) -> Result<()> {
    sink.write_all(text.as_bytes()).map_err(io_err)
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

/// `%.12g`-style formatting: 12 significant digits, `.` decimal point.
pub fn format_sig12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let fixed = format!("{x:.decimals$}");
        trim_zeros(&fixed)
    } else {
        format!(
            "{}e{}{:02}",
            trim_zeros(mantissa),
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// Parses `re im` pairs; blank lines and text after `#` are ignored.
pub fn parse_amplitudes(text: &str) -> Result<Vec<C64>> {
    let mut amps = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let parse = |s: &str| s.parse::<f64>().ok().filter(|v| v.is_finite());
        match fields.as_slice() {
            [re, im] => match (parse(re), parse(im)) {
                (Some(re), Some(im)) => amps.push(C64::new(re, im)),
                _ => return Err(invalid(format!("line {}: cannot parse {line:?}", i + 1))),
            },
            _ => return Err(invalid(format!("line {}: expected `re im`, got {line:?}", i + 1))),
        }
    }
    if amps.is_empty() {
        return Err(invalid("amplitude file holds no amplitudes"));
    }
    Ok(amps)
}

/// Input state on its own support and that support's size.
fn build_input(a: &EntropyArgs) -> Result<(DensityOperator, usize)> {
    match a.input {
        InputKind::Vacuum => Ok((fock_state(0, 1)?.to_density(), 1)),
        InputKind::Coherent => {
            let alpha = C64::new(a.alpha_re, a.alpha_im);
            let d = coherent_dim(alpha);
            Ok((coherent_state(alpha, d)?.to_density(), d))
        }
        InputKind::Fock => Ok((fock_state(a.m, a.m + 1)?.to_density(), a.m + 1)),
        InputKind::Thermal => {
            let d = thermal_dim(a.nbar);
            Ok((thermal_state(a.nbar, d)?, d))
        }
        InputKind::File => {
            let path = a.file.as_ref().ok_or_else(|| invalid("--input file needs --file"))?;
            let text =
                std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
            let amps = parse_amplitudes(&text)?;
            let d = amps.len();
            Ok((
                PureState::normalized(nalgebra::DVector::from_vec(amps))?.to_density(),
                d,
            ))
        }
    }
}

#[derive(Debug, Serialize)]
struct EntropyRow {
    z: f64,
    renyi: f64,
    renyi_wehrl: Option<f64>,
    renyi_wehrl_grid_error: Option<f64>,
}

#[derive(Debug, Serialize)]
struct EntropyReport<'a> {
    config: &'a EntropyArgs,
    channel: ChannelSpec,
    dim: usize,
    tail_mass: f64,
    purity: f64,
    von_neumann: f64,
    wehrl: Option<f64>,
    wehrl_grid_error: Option<f64>,
    orders: Vec<EntropyRow>,
}

pub fn cmd_entropy(a: &EntropyArgs, json: bool, out: &mut dyn Write) -> Result<i32> {
    let channel = a.channel.spec()?;
    if a.z.is_empty() {
        return Err(invalid("at least one order --z is required"));
    }
    if let Some(z) = a.z.iter().find(|z| !(**z > 0.0)) {
        return Err(invalid(format!("orders must be > 0, got {z}")));
    }
    let (input, support) = build_input(a)?;
    let dim = a
        .dim
        .unwrap_or_else(|| converged_dim(support, channel.effective_noise()));
    let input = input.padded(dim.max(input.dim()))?;
    let output = match channel {
        ChannelSpec::Classical(c) => {
            apply_classical_noise(&input, c, &QuadratureRule::new(a.radial_order, a.angular_count)?)?
        }
        ChannelSpec::Thermal(t) => apply_thermal_noise(&input, t, thermal_dim(t.n_env))?,
    };
    let (wehrl, wehrl_err) = if a.no_wehrl {
        (None, None)
    } else {
        let est = wehrl_estimate(&output, HusimiRule::auto(&output))?;
        (Some(est.value), Some(est.grid_error))
    };
    let mut orders = Vec::with_capacity(a.z.len());
    for &z in &a.z {
        let (rw, rw_err) = if a.no_wehrl || z < 1.0 || z.is_infinite() {
            (None, None)
        } else {
            let est = renyi_wehrl_estimate(&output, z, HusimiRule::auto(&output))?;
            (Some(est.value), Some(est.grid_error))
        };
        orders.push(EntropyRow {
            z,
            renyi: renyi_entropy(&output, z)?,
            renyi_wehrl: rw,
            renyi_wehrl_grid_error: rw_err,
        });
    }
    let report = EntropyReport {
        config: a,
        channel,
        dim: output.dim(),
        tail_mass: output.tail_mass(),
        purity: output.purity(),
        von_neumann: von_neumann(&output)?,
        wehrl,
        wehrl_grid_error: wehrl_err,
        orders,
    };
    if json {
        emit(out, &to_json(&report))?;
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "channel      {}", describe_channel(&channel));
        let _ = writeln!(s, "cutoff       {} (tail mass {:.2e})", report.dim, report.tail_mass);
        let _ = writeln!(s, "purity       {:.10}", report.purity);
        let _ = writeln!(s, "von Neumann  {:.10}", report.von_neumann);
        if let Some(w) = report.wehrl {
            let _ = writeln!(s, "Wehrl        {w:.10}");
        }
        let _ = writeln!(s, "{:>10}  {:>14}  {:>14}", "z", "S_z", "Renyi-Wehrl");
        for r in &report.orders {
            let rw = r.renyi_wehrl.map_or_else(|| "-".to_string(), |v| format!("{v:.10}"));
            let _ = writeln!(s, "{:>10}  {:>14.10}  {:>14}", format_sig12(r.z), r.renyi, rw);
        }
        emit(out, &s)?;
    }
    Ok(EXIT_OK)
}

fn describe_channel(c: &ChannelSpec) -> String {
    match c {
        ChannelSpec::Classical(c) => format!("classical noise n = {}", c.n),
        ChannelSpec::Thermal(t) => format!("thermal noise eta = {}, N = {}", t.eta, t.n_env),
    }
}

/// CSV rendering of a bound curve.
pub fn bounds_csv(curve: &BoundCurve) -> String {
    let mut s = String::from("z,upper,lb1,lb2,lb3,lb4,lb_max,s_inf\n");
    for (i, z) in curve.z_grid.iter().enumerate() {
        let row = [
            *z,
            curve.upper[i],
            curve.lb1[i],
            curve.lb2[i],
            curve.lb3[i],
            curve.lb4[i],
            curve.lb_max(i),
            curve.s_inf,
        ];
        let cells: Vec<String> = row.iter().map(|v| format_sig12(*v)).collect();
        s.push_str(&cells.join(","));
        s.push('\n');
    }
    s
}

pub fn cmd_bounds(a: &BoundsArgs, json: bool, out: &mut dyn Write) -> Result<i32> {
    let grid = match &a.z {
        Some(z) => z.clone(),
        None => {
            if a.points == 0 || !(a.z_min > 0.0) || !(a.z_max >= a.z_min) {
                return Err(invalid("need 0 < z-min <= z-max and points >= 1"));
            }
            linear_grid(a.z_min, a.z_max, a.points)
        }
    };
    let curve = figure_data(a.n, &grid, a.vn_bound, a.k_max)?;
    let text = if json {
        to_json(&json!({ "config": a, "curve": curve }))
    } else {
        bounds_csv(&curve)
    };
    match &a.output {
        Some(path) => {
            write_file(path, &text)?;
            emit(out, &format!("wrote {} rows to {}\n", grid.len(), path.display()))?;
        }
        None => emit(out, &text)?,
    }
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct FactorReport {
    j: usize,
    identity: bool,
    prefactor: C64,
    ratio: C64,
    series_terms: Option<usize>,
    max_deviation: Option<f64>,
}

#[derive(Debug, Serialize)]
struct ThetaReport<'a> {
    config: &'a ThetaArgs,
    a_eigs: Vec<C64>,
    g_eigs: Vec<C64>,
    c_eigs: Vec<C64>,
    eigen_residual: f64,
    determinant_target: f64,
    determinant_product: C64,
    determinant_dense: f64,
    determinant_residual: f64,
    factors: Vec<FactorReport>,
    characteristic_max_deviation: f64,
    passed: bool,
}

pub fn cmd_theta_verify(a: &ThetaArgs, json: bool, out: &mut dyn Write) -> Result<i32> {
    if a.grid == 0 || !(a.extent >= 0.0) {
        return Err(invalid("grid must be >= 1 and extent >= 0"));
    }
    let sys = build_circulant_system(a.k, a.n)?;
    let target = (a.n + 1.0).powi(a.k as i32) - a.n.powi(a.k as i32);
    let product = sys.determinant_product();
    let dense = sys.determinant_dense();
    let det_residual = ((product - target).norm() / target).max((dense - target).abs() / target);
    let nus: Vec<C64> = {
        let axis = linear_grid(-a.extent, a.extent, a.grid);
        axis.iter()
            .flat_map(|re| axis.iter().map(move |im| C64::new(*re, *im)))
            .collect()
    };
    let mut factors = Vec::with_capacity(a.k);
    let mut char_dev = 0.0f64;
    for j in 0..a.k {
        let f = theta_factor(&sys, j)?;
        let (terms, dev) = if f.identity {
            (None, None)
        } else {
            let terms = series_terms(&f)?;
            let mut dev = 0.0f64;
            for nu in &nus {
                let closed = theta_char_closed(&sys, j, *nu)?;
                let series = theta_char_laguerre(&f, *nu, terms)?;
                dev = dev.max((closed - series).norm());
            }
            char_dev = char_dev.max(dev);
            (Some(terms), Some(dev))
        };
        factors.push(FactorReport {
            j,
            identity: f.identity,
            prefactor: f.prefactor,
            ratio: f.ratio,
            series_terms: terms,
            max_deviation: dev,
        });
    }
    let passed = sys.eigen_residual <= EIGEN_TOLERANCE
        && det_residual <= DETERMINANT_TOLERANCE
        && char_dev <= CHARACTERISTIC_TOLERANCE;
    let report = ThetaReport {
        config: a,
        a_eigs: sys.a_eigs.clone(),
        g_eigs: sys.g_eigs.clone(),
        c_eigs: sys.c_eigs.clone(),
        eigen_residual: sys.eigen_residual,
        determinant_target: target,
        determinant_product: product,
        determinant_dense: dense,
        determinant_residual: det_residual,
        factors,
        characteristic_max_deviation: char_dev,
        passed,
    };
    if json {
        emit(out, &to_json(&report))?;
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "k = {}, n = {}", a.k, a.n);
        let _ = writeln!(s, "{:>3}  {:>24}  {:>24}  {:>24}", "j", "a_j", "e_j", "d_j");
        for j in 0..a.k {
            let _ = writeln!(
                s,
                "{j:>3}  {:>24}  {:>24}  {:>24}",
                cfmt(sys.a_eigs[j]),
                cfmt(sys.g_eigs[j]),
                cfmt(sys.c_eigs[j])
            );
        }
        let _ = writeln!(s, "eigen residual          {:.3e}", sys.eigen_residual);
        let _ = writeln!(s, "(n+1)^k - n^k           {}", format_sig12(target));
        let _ = writeln!(s, "determinant residual    {det_residual:.3e}");
        for f in &report.factors {
            if f.identity {
                let _ = writeln!(s, "Theta_{}: identity", f.j);
            } else {
                let _ = writeln!(
                    s,
                    "Theta_{}: {} * ({})^(b^dagger b), {} terms, max deviation {:.3e}",
                    f.j,
                    cfmt(f.prefactor),
                    cfmt(f.ratio),
                    f.series_terms.unwrap_or(0),
                    f.max_deviation.unwrap_or(0.0)
                );
            }
        }
        let _ = writeln!(s, "{}", if passed { "PASS" } else { "FAIL" });
        emit(out, &s)?;
    }
    if passed {
        Ok(EXIT_OK)
    } else {
        Err(Error::IdentityViolation {
            what: format!("theta verification (k = {}, n = {})", a.k, a.n),
            residual: sys.eigen_residual.max(det_residual).max(char_dev),
            tolerance: CHARACTERISTIC_TOLERANCE.min(DETERMINANT_TOLERANCE),
        })
    }
}

fn cfmt(c: C64) -> String {
    let im = if c.im.abs() < 1e-15 { 0.0 } else { c.im };
    format!("{:.10}{:+.10}i", c.re, im)
}

pub fn cmd_conjecture(a: &ConjectureArgs, json: bool, out: &mut dyn Write) -> Result<i32> {
    let channel = a.channel.spec()?;
    let mut config = SearchConfig::new(a.support_dim, a.starts, a.seed).with_coherent_start(a.coherent_start);
    config.max_iters = a.max_iters;
    let report = match a.objective {
        ObjectiveArg::Renyi => minimize_output_renyi(channel, a.z, &config)?,
        ObjectiveArg::Wehrl => minimize_output_wehrl(channel, &config)?,
    };
    let gaussian = match report.objective {
        Objective::Renyi => Some(minimize_gaussian(&channel, a.z)?),
        Objective::Wehrl => None,
    };
    let doc = json!({ "report": report, "gaussian": gaussian });
    let text = to_json(&doc);
    if let Some(path) = &a.output {
        write_file(path, &text)?;
    }
    if json {
        emit(out, &text)?;
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "channel         {}", describe_channel(&channel));
        match report.z {
            Some(z) => {
                let _ = writeln!(s, "objective       Renyi entropy, z = {z}");
            }
            None => {
                let _ = writeln!(s, "objective       Wehrl entropy");
            }
        }
        let _ = writeln!(s, "starts          {} (seed {})", report.starts, report.seed);
        let _ = writeln!(s, "best value      {:.10}", report.best_value);
        let _ = writeln!(s, "coherent value  {:.10}", report.coherent_value);
        let _ = writeln!(s, "gap             {:.3e}", report.gap);
        let _ = writeln!(s, "truncation err  {:.3e}", report.truncation_error);
        let _ = writeln!(s, "converged       {}", report.converged);
        if let Some(g) = gaussian {
            let _ = writeln!(s, "gaussian argmin s = {}, value {:.10}", g.s, g.value);
        }
        let _ = writeln!(s, "violation       {}", report.violation);
        emit(out, &s)?;
    }
    Ok(if report.violation { EXIT_VIOLATION } else { EXIT_OK })
}
