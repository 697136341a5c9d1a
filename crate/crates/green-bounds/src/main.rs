//! Command-line front end: assemble bound reports, certify count suprema,
//! chain the density bounds, evaluate the kernel transform, and run the
//! built-in consistency checks.
//!
//! Exit codes: 0 success, 1 selftest failure, 2 usage or domain error,
//! 3 genus zero, 4 count spot-check mismatch.

use clap::{Parser, Subcommand};
use green_bounds::error::Error;
use green_bounds::f_bound::{
    f_cusp_extension_factor, f_sup_bound_interior, f_sup_bound_x, zeta_bound,
};
use green_bounds::green_assembly::{example_pipeline, ConstantsMode, PipelineOptions};
use green_bounds::hyperbolic::UhpPoint;
use green_bounds::modular_group::{Family, GroupSpec};
use green_bounds::point_counting::{
    count_orbit, count_orbit_bruteforce, required_entry_bound, sup_count_y0,
};
use green_bounds::report::{bound_json, bound_text, SCHEMA_VERSION};
use green_bounds::shc_transform::{legendre_p, shc_transform, shc_weight2_indicator, RadialKernel};

use serde_json::json;
use std::collections::HashMap;
use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "green-bounds",
    version,
    about = "Explicit bounds for canonical Green functions of modular curves"
)]
struct Cli {
    /// Configuration file with key=value lines supplying defaults for
    /// omitted flags (keys match the long flag names)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Two-sided bound report for one congruence group
    Bound {
        /// Group family: full, gamma0, gamma1 or principal
        #[arg(long)]
        family: Option<Family>,
        /// Level of the group
        #[arg(long)]
        level: Option<u32>,
        /// Source of the two point counts: paper or computed
        #[arg(long)]
        constants: Option<ConstantsMode>,
        /// Grid step for computed-mode count certificates, in (0, 0.05]
        #[arg(long)]
        grid: Option<f64>,
        /// Merging parameter of the two Green functions, > 1
        #[arg(long)]
        delta: Option<f64>,
        /// Averaging-kernel cutoff; the count threshold is 2a^2 - 1
        #[arg(long)]
        cutoff_a: Option<f64>,
        /// Ambient kernel constant lower bound
        #[arg(long)]
        a_const: Option<f64>,
        /// Ambient kernel constant upper bound
        #[arg(long)]
        b_const: Option<f64>,
        /// Output format: text or json
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Certified supremum of full-group orbit counts over the standard strip
    Count {
        /// Count threshold, > 1
        #[arg(long)]
        b: Option<f64>,
        /// Grid step, in (0, 0.05]
        #[arg(long)]
        grid: Option<f64>,
        /// Output format: text or json
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Density suprema on the strip and the whole curve, and the curvature
    /// constant they bound
    Fsup {
        /// Averaging-kernel cutoff, > 1
        #[arg(long)]
        a: Option<f64>,
        /// Certified orbit-count supremum at threshold 2a^2 - 1
        #[arg(long)]
        count: Option<u64>,
        /// Level (scales the cusp neighbourhoods of the extension step)
        #[arg(long)]
        level: Option<u32>,
        /// Genus of the quotient curve, >= 1
        #[arg(long)]
        genus: Option<u32>,
        /// Merging parameter fixing the neighbourhood sizes, > 1
        #[arg(long)]
        delta: Option<f64>,
        /// Output format: text or json
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Transform of the indicator kernel, or one Legendre function value
    Shc {
        /// Indicator kernel support bound, > 1
        #[arg(long)]
        a: Option<f64>,
        /// Spectral parameter
        #[arg(long)]
        s: Option<f64>,
        /// Weight parameter
        #[arg(long)]
        k: Option<f64>,
        /// Evaluate the Legendre function at this argument instead of
        /// transforming the kernel
        #[arg(long)]
        u: Option<f64>,
        /// Quadrature tolerance for the transform
        #[arg(long)]
        quad_tol: Option<f64>,
        /// Series tolerance for a single Legendre value
        #[arg(long)]
        series_tol: Option<f64>,
        /// Output format: text or json
        #[arg(long)]
        format: Option<OutputFormat>,
    },
    /// Built-in consistency checks against known values
    Selftest,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum OutputFormat {
    Text,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected text or json)")),
        }
    }
}

const EXIT_SELFTEST: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_GENUS_ZERO: u8 = 3;
const EXIT_SPOT_CHECK: u8 = 4;

struct CliError {
    code: u8,
    msg: String,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::GenusZero => EXIT_GENUS_ZERO,
            _ => EXIT_USAGE,
        };
        CliError {
            code,
            msg: e.to_string(),
        }
    }
}

fn load_config(path: &Path) -> Result<HashMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = HashMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(usage(format!(
                "config {} line {}: expected key=value",
                path.display(),
                i + 1
            )));
        };
        map.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(map)
}

/// Merges flag values with config-file defaults: an explicit flag wins, then
/// the config key, then the built-in default.
struct Resolver {
    cfg: HashMap<String, String>,
}

impl Resolver {
    fn value<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        match self.optional(flag, key)? {
            Some(v) => Ok(v),
            None => Ok(default),
        }
    }

    fn optional<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        if let Some(v) = flag {
            return Ok(Some(v));
        }
        match self.cfg.get(key) {
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| usage(format!("config key `{key}`: {e}"))),
            None => Ok(None),
        }
    }

    fn required<T>(&self, flag: Option<T>, key: &str) -> Result<T, CliError>
    where
        T: FromStr,
        T::Err: Display,
    {
        self.optional(flag, key)?
            .ok_or_else(|| usage(format!("missing --{key} (no flag and no config key `{key}`)")))
    }
}

fn check_grid(grid: f64) -> Result<(), CliError> {
    if grid > 0.0 && grid <= 0.05 && grid.is_finite() {
        Ok(())
    } else {
        Err(usage(format!(
            "grid step {grid} out of range: need a value in (0, 0.05]"
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match load_config(path) {
            Ok(map) => map,
            Err(e) => {
                eprintln!("error: {}", e.msg);
                return ExitCode::from(e.code);
            }
        },
        None => HashMap::new(),
    };
    let r = Resolver { cfg };

    let result = match cli.command {
        Command::Bound {
            family,
            level,
            constants,
            grid,
            delta,
            cutoff_a,
            a_const,
            b_const,
            format,
        } => cmd_bound(
            &r, family, level, constants, grid, delta, cutoff_a, a_const, b_const, format,
        ),
        Command::Count { b, grid, format } => cmd_count(&r, b, grid, format),
        Command::Fsup {
            a,
            count,
            level,
            genus,
            delta,
            format,
        } => cmd_fsup(&r, a, count, level, genus, delta, format),
        Command::Shc {
            a,
            s,
            k,
            u,
            quad_tol,
            series_tol,
            format,
        } => cmd_shc(&r, a, s, k, u, quad_tol, series_tol, format),
        Command::Selftest => cmd_selftest(),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bound(
    r: &Resolver,
    family: Option<Family>,
    level: Option<u32>,
    constants: Option<ConstantsMode>,
    grid: Option<f64>,
    delta: Option<f64>,
    cutoff_a: Option<f64>,
    a_const: Option<f64>,
    b_const: Option<f64>,
    format: Option<OutputFormat>,
) -> Result<(), CliError> {
    let family = r.value(family, "family", Family::Gamma0)?;
    let level = r.required(level, "level")?;
    let mode = r.value(constants, "constants", ConstantsMode::Paper)?;
    let grid = r.value(grid, "grid", 0.01)?;
    let delta = r.value(delta, "delta", 2.0)?;
    let cutoff_a = r.value(cutoff_a, "cutoff-a", 1.44)?;
    let a_const = r.value(a_const, "a-const", -3.00e4)?;
    let b_const = r.value(b_const, "b-const", 1.58e4)?;
    let format = r.value(format, "format", OutputFormat::Text)?;
    check_grid(grid)?;

    let options = PipelineOptions {
        mode,
        grid_step: grid,
        delta,
        cutoff_a,
        a_const,
        b_const,
    };
    let out = example_pipeline(family, level, &options)?;
    match format {
        OutputFormat::Text => print!("{}", bound_text(&out)),
        OutputFormat::Json => println!(
            "{}",
            serde_json::to_string_pretty(&bound_json(&out)).expect("serializable report")
        ),
    }
    Ok(())
}

/// Threshold used by the enumeration-vs-scan spot check; kept moderate so
/// the exhaustive scan stays fast for large requested thresholds.
const SPOT_CHECK_CAP: f64 = 20.0;

fn spot_check(b: f64) -> Result<(f64, [(f64, f64); 3]), CliError> {
    let b_check = b.min(SPOT_CHECK_CAP);
    let spec = GroupSpec::new(Family::Full, 1)?;
    let points = [(0.0, 2.0), (0.37, 1.2), (-0.45, 0.91)];
    for (x, y) in points {
        let z = UhpPoint::new(x, y)?;
        let fast = count_orbit(&spec, z, b_check)?;
        let bound = required_entry_bound(z, b_check)?;
        let slow = count_orbit_bruteforce(&spec, z, b_check, bound)?;
        if fast != slow {
            return Err(CliError {
                code: EXIT_SPOT_CHECK,
                msg: format!(
                    "count spot check failed at ({x}, {y}), b = {b_check}: \
                     enumeration {fast} vs exhaustive scan {slow}"
                ),
            });
        }
    }
    Ok((b_check, points))
}

fn cmd_count(
    r: &Resolver,
    b: Option<f64>,
    grid: Option<f64>,
    format: Option<OutputFormat>,
) -> Result<(), CliError> {
    let b = r.value(b, "b", 17.0)?;
    let grid = r.value(grid, "grid", 0.01)?;
    let format = r.value(format, "format", OutputFormat::Text)?;
    check_grid(grid)?;

    let (b_check, points) = spot_check(b)?;
    let cert = sup_count_y0(b, grid)?;

    match format {
        OutputFormat::Text => {
            println!("certified supremum of orbit counts over the strip");
            println!("threshold     b = {}", cert.b);
            println!("grid step       = {} ({} cells)", cert.grid_step, cert.cells);
            println!(
                "certified sup   = {} at cell ({:.4}, {:.4})",
                cert.certified_sup, cert.argmax_x, cert.argmax_y
            );
            println!("max sample      = {}", cert.max_sample);
            println!(
                "spot check      = ok ({} points at threshold {})",
                points.len(),
                b_check
            );
        }
        OutputFormat::Json => {
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "kind": "count-certificate",
                "certificate": serde_json::to_value(&cert).expect("serializable"),
                "spot_check": { "points": points.len(), "threshold": b_check, "status": "ok" },
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
    }
    Ok(())
}

fn cmd_fsup(
    r: &Resolver,
    a: Option<f64>,
    count: Option<u64>,
    level: Option<u32>,
    genus: Option<u32>,
    delta: Option<f64>,
    format: Option<OutputFormat>,
) -> Result<(), CliError> {
    let a = r.value(a, "a", 1.44)?;
    let count = r.value(count, "count", 58)?;
    let level = r.value(level, "level", 1)?;
    let genus = r.value(genus, "genus", 1)?;
    let delta = r.value(delta, "delta", 2.0)?;
    let format = r.value(format, "format", OutputFormat::Text)?;

    if !(delta > 1.0) || !delta.is_finite() {
        return Err(usage(format!("delta {delta} out of range: need delta > 1")));
    }
    let t = delta + (delta * delta - 1.0).sqrt();
    let eps_unit = 1.0 / (t * t.sqrt());

    let sup_y = f_sup_bound_interior(a, count)?;
    let extension = f_cusp_extension_factor(level as f64 * eps_unit)?;
    let sup_x = f_sup_bound_x(sup_y, level, eps_unit)?;
    let zeta = zeta_bound(sup_x, genus)?;

    match format {
        OutputFormat::Text => {
            println!("density suprema from a certified count");
            println!("cutoff a        = {a} (count threshold {})", 2.0 * a * a - 1.0);
            println!("count           = {count}");
            println!("strip sup       = {sup_y:.12}");
            println!("extension       = {extension:.12} (level {level}, eps {eps_unit:.9})");
            println!("whole-curve sup = {sup_x:.12}");
            println!("zeta (genus {genus}) = {zeta:.12}");
        }
        OutputFormat::Json => {
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "kind": "density-suprema",
                "a": a,
                "count": count,
                "level": level,
                "genus": genus,
                "delta": delta,
                "eps_unit": eps_unit,
                "sup_strip": sup_y,
                "extension_factor": extension,
                "sup_curve": sup_x,
                "zeta": zeta,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_shc(
    r: &Resolver,
    a: Option<f64>,
    s: Option<f64>,
    k: Option<f64>,
    u: Option<f64>,
    quad_tol: Option<f64>,
    series_tol: Option<f64>,
    format: Option<OutputFormat>,
) -> Result<(), CliError> {
    let s = r.value(s, "s", 0.0)?;
    let k = r.value(k, "k", 2.0)?;
    let format = r.value(format, "format", OutputFormat::Text)?;
    let u = r.optional(u, "u")?;

    if let Some(u) = u {
        let tol = r.value(series_tol, "series-tol", 1e-14)?;
        let value = legendre_p(s, k, u, tol)?;
        match format {
            OutputFormat::Text => {
                println!("Legendre function value");
                println!("s = {s}  k = {k}  u = {u}  tol = {tol}");
                println!("P = {value:.15}");
            }
            OutputFormat::Json => {
                let doc = json!({
                    "schema": SCHEMA_VERSION,
                    "kind": "legendre-value",
                    "s": s, "k": k, "u": u, "tol": tol,
                    "value": value,
                });
                println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
            }
        }
        return Ok(());
    }

    let a = r.value(a, "a", 1.44)?;
    let quad_tol = r.value(quad_tol, "quad-tol", 1e-10)?;
    let kernel = RadialKernel::indicator(a)?;
    let value = shc_transform(&kernel, s, k, quad_tol)?;
    let closed_form = if s == 0.0 && k == 2.0 {
        Some(shc_weight2_indicator(a)?)
    } else {
        None
    };

    match format {
        OutputFormat::Text => {
            println!("transform of the indicator kernel on [1, {a}]");
            println!("s = {s}  k = {k}  quadrature tol = {quad_tol}");
            println!("value = {value:.15}");
            if let Some(cf) = closed_form {
                println!("closed form (weight 2) = {cf:.15}");
                println!("difference = {:.3e}", (value - cf).abs());
            }
        }
        OutputFormat::Json => {
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "kind": "shc-transform",
                "a": a, "s": s, "k": k, "quad_tol": quad_tol,
                "value": value,
                "closed_form_weight2": closed_form,
            });
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
    }
    Ok(())
}

fn cmd_selftest() -> Result<(), CliError> {
    let checks: Vec<(&str, Box<dyn Fn() -> Result<(), String>>)> = vec![
        (
            "point-pair invariant",
            Box::new(|| {
                let z = UhpPoint::new(0.0, 1.0).map_err(|e| e.to_string())?;
                let w = UhpPoint::new(0.0, 2.0).map_err(|e| e.to_string())?;
                let u = green_bounds::hyperbolic::point_pair_invariant(z, w);
                expect_close(u, 1.25, 1e-15)
            }),
        ),
        (
            "stabilizer counts",
            Box::new(|| {
                let spec = GroupSpec::new(Family::Full, 1).map_err(|e| e.to_string())?;
                let high = UhpPoint::new(0.0, 2.0).map_err(|e| e.to_string())?;
                let corner = UhpPoint::new(0.0, 1.0).map_err(|e| e.to_string())?;
                let n_high = count_orbit(&spec, high, 1.0).map_err(|e| e.to_string())?;
                let n_i = count_orbit(&spec, corner, 1.0).map_err(|e| e.to_string())?;
                if n_high != 2 || n_i != 4 {
                    return Err(format!("expected (2, 4), got ({n_high}, {n_i})"));
                }
                Ok(())
            }),
        ),
        (
            "enumeration vs exhaustive scan",
            Box::new(|| {
                let spec = GroupSpec::new(Family::Full, 1).map_err(|e| e.to_string())?;
                let z = UhpPoint::new(0.3, 1.1).map_err(|e| e.to_string())?;
                let fast = count_orbit(&spec, z, 2.5).map_err(|e| e.to_string())?;
                let m = required_entry_bound(z, 2.5).map_err(|e| e.to_string())?;
                let slow = count_orbit_bruteforce(&spec, z, 2.5, m).map_err(|e| e.to_string())?;
                if fast != slow {
                    return Err(format!("enumeration {fast} vs scan {slow}"));
                }
                Ok(())
            }),
        ),
        (
            "Legendre terminating case",
            Box::new(|| {
                let v = legendre_p(0.0, 2.0, 3.0, 1e-14).map_err(|e| e.to_string())?;
                expect_close(v, 0.5, 1e-13)
            }),
        ),
        (
            "weight-2 transform closed form",
            Box::new(|| {
                let kernel = RadialKernel::indicator(1.44).map_err(|e| e.to_string())?;
                let v = shc_transform(&kernel, 0.0, 2.0, 1e-10).map_err(|e| e.to_string())?;
                let cf = shc_weight2_indicator(1.44).map_err(|e| e.to_string())?;
                expect_close(v, cf, 1e-8)?;
                expect_close(cf, 2.4988335879753306, 1e-10)
            }),
        ),
        (
            "strip density bound",
            Box::new(|| {
                let v = f_sup_bound_interior(1.44, 58).map_err(|e| e.to_string())?;
                expect_close(v, 25.679458920038244, 1e-10)
            }),
        ),
        (
            "group invariants",
            Box::new(|| {
                let spec = GroupSpec::new(Family::Gamma0, 11).map_err(|e| e.to_string())?;
                if spec.genus() != 1 || spec.psl_index() != 12 {
                    return Err(format!(
                        "gamma0(11): genus {} index {}",
                        spec.genus(),
                        spec.psl_index()
                    ));
                }
                let full = GroupSpec::new(Family::Full, 1).map_err(|e| e.to_string())?;
                expect_close(full.volume(), std::f64::consts::PI / 6.0, 1e-15)
            }),
        ),
        (
            "worked example pipeline",
            Box::new(|| {
                let out = example_pipeline(Family::Gamma0, 11, &PipelineOptions::default())
                    .map_err(|e| e.to_string())?;
                expect_close(out.report.s, 172.09983556897007, 1e-6)?;
                expect_close(out.report.regime_a.hi, 16144.19967113794, 1e-4)
            }),
        ),
    ];

    let mut failures = 0;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("selftest {name}: ok"),
            Err(msg) => {
                println!("selftest {name}: FAIL ({msg})");
                failures += 1;
            }
        }
    }
    if failures > 0 {
        Err(CliError {
            code: EXIT_SELFTEST,
            msg: format!("{failures} selftest check(s) failed"),
        })
    } else {
        Ok(())
    }
}

fn expect_close(got: f64, want: f64, tol: f64) -> Result<(), String> {
    if (got - want).abs() <= tol {
        Ok(())
    } else {
        Err(format!("got {got}, want {want} within {tol}"))
    }
}
