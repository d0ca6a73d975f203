//! Command-line front end: parameter search, reference-table reproduction,
//! circuit simulation, phase-space grids, and the self-check suite.
//!
//! Exit codes: 0 success, 1 usage/parse/configuration error, 2 numeric or
//! tolerance failure. All output is deterministic for a fixed configuration;
//! re-running a command produces byte-identical files.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64 as C64;
use serde::Deserialize;

use catgen::circuit::{run_circuit, CircuitSpec};
use catgen::optimizer::{maximize, reproduce_table, OptConfig};
use catgen::verify::run_identity_suite;
use catgen::wigner::{fill_grid, GridWindow, WignerSource, DEFAULT_GRID_POINTS};
use catgen::{Error, Result, StateVector, TargetCat};

// ---------------------------------------------------------------------------
// Run configuration (JSON file, overridden by flags).

/// Settings shared by every subcommand. A JSON file with the same field
/// names can be passed via `--config`; explicit flags win over file values.
#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct RunConfig {
    /// Truncated-basis dimension.
    dim: usize,
    /// Independent optimizer restarts.
    restarts: usize,
    /// Seed ladder; the first entry seeds restart 1 (restart 0 is the
    /// deterministic midpoint start).
    seed_list: Vec<u64>,
    /// Named tolerance overrides (currently: `table_df`).
    tolerances: BTreeMap<String, f64>,
    /// Directory that receives emitted files.
    output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            dim: 100,
            restarts: 16,
            seed_list: vec![7],
            tolerances: BTreeMap::new(),
            output_dir: PathBuf::from("."),
        }
    }
}

impl RunConfig {
    fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    fn validate(&self) -> Result<()> {
        if self.dim < 8 {
            return Err(Error::InvalidDimension {
                dim: self.dim,
                min: 8,
            });
        }
        if self.restarts < 1 {
            return Err(Error::InvalidParameter {
                reason: "restarts must be at least 1".into(),
            });
        }
        if self.seed_list.is_empty() {
            return Err(Error::InvalidParameter {
                reason: "seed_list must not be empty".into(),
            });
        }
        for (name, value) in &self.tolerances {
            if !(value.is_finite() && *value > 0.0) {
                return Err(Error::InvalidParameter {
                    reason: format!("tolerance {name:?} must be finite and positive"),
                });
            }
        }
        Ok(())
    }

    fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    fn seed(&self) -> u64 {
        self.seed_list[0]
    }

    fn opt_config(&self, full_complex: bool) -> OptConfig {
        OptConfig {
            dim: self.dim,
            restarts: self.restarts,
            seed: self.seed(),
            full_complex,
            ..OptConfig::default()
        }
    }
}

// ---------------------------------------------------------------------------
// Flag surface.

#[derive(Parser)]
#[command(
    name = "catgen",
    version,
    about = "Cat-state engineering toolkit: optimization, circuits, phase-space grids"
)]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Overrides {
    /// JSON run configuration; explicit flags override its values.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Truncated-basis dimension (default 100).
    #[arg(long, global = true, value_name = "N")]
    dim: Option<usize>,
    /// Optimizer restarts (default 16).
    #[arg(long, global = true, value_name = "N")]
    restarts: Option<usize>,
    /// Base seed for the optimizer's restart ladder.
    #[arg(long, global = true, value_name = "SEED")]
    seed: Option<u64>,
    /// Directory for emitted files (default ".").
    #[arg(long, global = true, value_name = "DIR")]
    out_dir: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Search circuit parameters maximizing the match with a cat target.
    Optimize(OptimizeArgs),
    /// Reproduce a bundled reference table (1, 2, or 3) as CSV + JSON files.
    Table(TableArgs),
    /// Run a circuit description and print the output amplitudes.
    Simulate(SimulateArgs),
    /// Tabulate a Wigner function on a grid file.
    #[command(subcommand)]
    Wigner(WignerCmd),
    /// Run the identity self-check suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct OptimizeArgs {
    /// Number of photon additions in the circuit family (1 or 2).
    #[arg(long)]
    order: u8,
    /// Superposition angle in radians, or `+`/`-` shorthand for ±π/4.
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    q: f64,
    /// Coherent amplitude of the target superposition.
    #[arg(long = "alpha-scs")]
    alpha_scs: f64,
    /// Search all complex components instead of the symmetry-selected family.
    #[arg(long)]
    full_complex: bool,
}

#[derive(Args)]
struct TableArgs {
    /// Which reference table to reproduce (1, 2, or 3).
    which: u8,
    /// Worst-allowed |dF| before the command exits nonzero (default 2e-3,
    /// overridable as `table_df` in the config file).
    #[arg(long, value_name = "TOL")]
    tolerance: Option<f64>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Circuit description file (JSON).
    spec: PathBuf,
    /// Stop printing once the remaining probability mass is below this.
    #[arg(long, default_value_t = 1e-10, value_name = "MASS")]
    tail_mass: f64,
}

#[derive(Subcommand)]
enum WignerCmd {
    /// Balanced superposition of two opposite coherent states.
    Scs {
        /// Coherent amplitude of the superposition.
        #[arg(long = "alpha-scs")]
        alpha_scs: f64,
        /// Superposition angle: `+`/`-` shorthand or ±π/4 in radians.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        q: f64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Displaced squeezed cat target.
    Dsscs {
        /// Coherent amplitude of the underlying superposition.
        #[arg(long = "alpha-scs")]
        alpha_scs: f64,
        /// Superposition angle: `+`/`-` shorthand or ±π/4 in radians.
        #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
        q: f64,
        /// Displacement as `re,im`.
        #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
        disp: C64,
        /// Squeeze parameter.
        #[arg(long, allow_hyphen_values = true)]
        r: f64,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Output of a circuit description file, evaluated numerically.
    Circuit {
        /// Circuit description file (JSON).
        spec: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Amplitude dump file (as printed by `simulate`), evaluated numerically.
    File {
        /// Amplitude dump: lines of `n re im`, optional trailing `scale` line.
        path: PathBuf,
        #[command(flatten)]
        window: WindowArgs,
    },
}

#[derive(Args)]
struct WindowArgs {
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    x_min: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    x_max: f64,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    p_min: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    p_max: f64,
    /// Grid points along x.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    nx: usize,
    /// Grid points along p.
    #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
    np: usize,
    /// Output file (default `<out-dir>/wigner_<source>.txt`).
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Also write a JSON twin next to the text grid.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Emit the report as JSON instead of one line per check.
    #[arg(long)]
    json: bool,
}

// ---------------------------------------------------------------------------
// Value parsers.

fn parse_angle(s: &str) -> std::result::Result<f64, String> {
    match s {
        "+" => Ok(FRAC_PI_4),
        "-" => Ok(-FRAC_PI_4),
        _ => {
            let v: f64 = s
                .parse()
                .map_err(|_| format!("expected radians or `+`/`-`, got {s:?}"))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err("angle must be finite".into())
            }
        }
    }
}

fn parse_complex(s: &str) -> std::result::Result<C64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `re,im`, got {s:?}"))?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|_| format!("bad real part in {s:?}"))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|_| format!("bad imaginary part in {s:?}"))?;
    if re.is_finite() && im.is_finite() {
        Ok(C64::new(re, im))
    } else {
        Err("components must be finite".into())
    }
}

/// Maps a radian angle to the ±π/4 parity sign the analytic grids cover.
fn q_sign_of(q: f64) -> Result<i8> {
    if (q - FRAC_PI_4).abs() < 1e-12 {
        Ok(1)
    } else if (q + FRAC_PI_4).abs() < 1e-12 {
        Ok(-1)
    } else {
        Err(Error::InvalidParameter {
            reason: format!("grids are tabulated for q = ±π/4; got q = {q}"),
        })
    }
}

// ---------------------------------------------------------------------------
// Entry point and error-to-exit-code mapping.

/// Writes one line to stdout, finishing quietly if the consumer closed the
/// pipe (e.g. `catgen simulate ... | head`).
fn out(line: std::fmt::Arguments) {
    use std::io::Write;
    let mut stdout = std::io::stdout().lock();
    if writeln!(stdout, "{line}").is_err() {
        std::process::exit(0);
    }
}

macro_rules! outln {
    ($($arg:tt)*) => { out(format_args!($($arg)*)) };
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0u8,
                _ => 1u8,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// 1 for parse/configuration problems, 2 when the numerics refuse.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Json(_)
        | Error::Io(_)
        | Error::InvalidParameter { .. }
        | Error::InvalidDimension { .. }
        | Error::DimensionMismatch { .. }
        | Error::BadWeights { .. } => 1,
        Error::ZeroNorm { .. }
        | Error::TruncationUnsafe { .. }
        | Error::SqueezeOutOfRange { .. }
        | Error::TailMass { .. }
        | Error::DegenerateCat { .. }
        | Error::DegenerateCircuit { .. }
        | Error::SeriesNotConverged { .. }
        | Error::BadDensityMatrix { .. }
        | Error::NumericCheck { .. } => 2,
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut cfg = match &cli.overrides.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(dim) = cli.overrides.dim {
        cfg.dim = dim;
    }
    if let Some(restarts) = cli.overrides.restarts {
        cfg.restarts = restarts;
    }
    if let Some(seed) = cli.overrides.seed {
        cfg.seed_list = vec![seed];
    }
    if let Some(dir) = &cli.overrides.out_dir {
        cfg.output_dir = dir.clone();
    }
    cfg.validate()?;

    match cli.cmd {
        Cmd::Optimize(args) => cmd_optimize(&cfg, &args),
        Cmd::Table(args) => cmd_table(&cfg, &args),
        Cmd::Simulate(args) => cmd_simulate(&cli.overrides, &args),
        Cmd::Wigner(args) => cmd_wigner(&cfg, &args),
        Cmd::Verify(args) => cmd_verify(&cfg, &args),
    }
}

// ---------------------------------------------------------------------------
// Subcommands.

fn cmd_optimize(cfg: &RunConfig, args: &OptimizeArgs) -> Result<ExitCode> {
    let result = maximize(
        args.order,
        args.q,
        args.alpha_scs,
        &cfg.opt_config(args.full_complex),
    )?;
    outln!("{}", result.to_json_string());
    Ok(if result.converged {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_table(cfg: &RunConfig, args: &TableArgs) -> Result<ExitCode> {
    let report = reproduce_table(args.which, &cfg.opt_config(false))?;
    fs::create_dir_all(&cfg.output_dir)?;
    let csv_path = cfg.output_dir.join(format!("table{}.csv", args.which));
    let json_path = cfg.output_dir.join(format!("table{}.json", args.which));
    fs::write(&csv_path, report.to_csv())?;
    fs::write(&json_path, report.to_json_string() + "\n")?;

    for note in &report.notes {
        outln!("note: {note}");
    }
    let tol = args
        .tolerance
        .unwrap_or_else(|| cfg.tolerance("table_df", 2e-3));
    outln!("max |dF| = {} (tolerance {})", report.max_abs_df, tol);
    outln!("wrote {}", csv_path.display());
    outln!("wrote {}", json_path.display());
    Ok(if report.max_abs_df <= tol {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

fn cmd_simulate(overrides: &Overrides, args: &SimulateArgs) -> Result<ExitCode> {
    if !(args.tail_mass.is_finite() && (0.0..1.0).contains(&args.tail_mass)) {
        return Err(Error::InvalidParameter {
            reason: "tail mass must lie in [0, 1)".into(),
        });
    }
    let text = fs::read_to_string(&args.spec)?;
    let mut spec = CircuitSpec::from_json(&text)?;
    // The description file fixes its own dimension; an explicit flag wins.
    if let Some(dim) = overrides.dim {
        spec.dim = dim;
    }
    let out = run_circuit(&spec)?;
    let total: f64 = out.amps().iter().map(|a| a.norm_sqr()).sum();
    if total < 1e-300 {
        return Err(Error::ZeroNorm {
            norm: total.sqrt(),
        });
    }
    let denom = total.sqrt();
    let target = 1.0 - args.tail_mass;
    let mut cumulative = 0.0;
    for (n, amp) in out.amps().iter().enumerate() {
        let a = amp / denom;
        outln!("{} {} {}", n, a.re, a.im);
        cumulative += a.norm_sqr();
        if cumulative >= target {
            break;
        }
    }
    outln!("scale {}", out.scale());
    Ok(ExitCode::SUCCESS)
}

fn cmd_wigner(cfg: &RunConfig, args: &WignerCmd) -> Result<ExitCode> {
    let (source, name, window) = match args {
        WignerCmd::Scs {
            alpha_scs,
            q,
            window,
        } => (
            WignerSource::Scs {
                q_sign: q_sign_of(*q)?,
                alpha: C64::new(*alpha_scs, 0.0),
            },
            "scs",
            window,
        ),
        WignerCmd::Dsscs {
            alpha_scs,
            q,
            disp,
            r,
            window,
        } => {
            let q_sign = q_sign_of(*q)?;
            let cat = TargetCat::new(*alpha_scs, *q, *disp, *r)?;
            (WignerSource::Dsscs { q_sign, cat }, "dsscs", window)
        }
        WignerCmd::Circuit { spec, window } => {
            let text = fs::read_to_string(spec)?;
            let spec = CircuitSpec::from_json(&text)?;
            let state = run_circuit(&spec)?;
            (
                WignerSource::NumericPure(pad_state(&state, cfg.dim)),
                "circuit",
                window,
            )
        }
        WignerCmd::File { path, window } => {
            let text = fs::read_to_string(path)?;
            let state = parse_amplitude_dump(&text)?;
            (
                WignerSource::NumericPure(pad_state(&state, cfg.dim)),
                "file",
                window,
            )
        }
    };

    let grid = fill_grid(
        &source,
        GridWindow {
            x_min: window.x_min,
            x_max: window.x_max,
            p_min: window.p_min,
            p_max: window.p_max,
        },
        window.nx,
        window.np,
    )?;

    let out_path = match &window.out {
        Some(path) => path.clone(),
        None => {
            fs::create_dir_all(&cfg.output_dir)?;
            cfg.output_dir.join(format!("wigner_{name}.txt"))
        }
    };
    fs::write(&out_path, grid.to_text())?;
    outln!("wrote {}", out_path.display());
    if window.json {
        let json_path = out_path.with_extension("json");
        fs::write(&json_path, grid.to_json_string() + "\n")?;
        outln!("wrote {}", json_path.display());
    }
    outln!("norm {}", grid.norm());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(cfg: &RunConfig, args: &VerifyArgs) -> Result<ExitCode> {
    let results = run_identity_suite(cfg.dim);
    let failures = results.iter().filter(|r| !r.pass).count();
    if args.json {
        outln!(
            "{}",
            serde_json::to_string_pretty(&results).expect("check results serialize")
        );
    } else {
        for r in &results {
            let status = if r.pass { "PASS" } else { "FAIL" };
            let mut line = format!(
                "{status} {:<42} observed {:.3e}  tolerance {:.0e}",
                r.name, r.observed, r.tolerance
            );
            if let Some(note) = &r.note {
                line.push_str(&format!("  ({note})"));
            }
            outln!("{line}");
        }
        outln!("{} of {} checks passed", results.len() - failures, results.len());
    }
    Ok(if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    })
}

// ---------------------------------------------------------------------------
// Helpers.

/// Copies a state into a basis of at least `dim` entries so numeric grids
/// have displacement headroom beyond the state's own support.
fn pad_state(state: &StateVector, dim: usize) -> StateVector {
    if state.dim() >= dim {
        return state.clone();
    }
    let mut amps = vec![C64::new(0.0, 0.0); dim];
    for (n, amp) in state.amps().iter().enumerate() {
        amps[n] = *amp;
    }
    StateVector::with_scale(amps, state.scale()).expect("padded copy stays well-formed")
}

/// Parses the `simulate` dump format: `n re im` per line, `scale` line
/// ignored.
fn parse_amplitude_dump(text: &str) -> Result<StateVector> {
    let bad = |line: &str| Error::InvalidParameter {
        reason: format!("bad amplitude line {line:?}; expected `n re im`"),
    };
    let mut entries: Vec<(usize, C64)> = Vec::new();
    let mut max_n = 0usize;
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        let first = parts.next().ok_or_else(|| bad(line))?;
        if first == "scale" {
            continue;
        }
        let n: usize = first.parse().map_err(|_| bad(line))?;
        if n > 100_000 {
            return Err(Error::InvalidParameter {
                reason: format!("amplitude index {n} is unreasonably large"),
            });
        }
        let re: f64 = parts
            .next()
            .ok_or_else(|| bad(line))?
            .parse()
            .map_err(|_| bad(line))?;
        let im: f64 = parts
            .next()
            .ok_or_else(|| bad(line))?
            .parse()
            .map_err(|_| bad(line))?;
        if parts.next().is_some() || !(re.is_finite() && im.is_finite()) {
            return Err(bad(line));
        }
        entries.push((n, C64::new(re, im)));
        max_n = max_n.max(n);
    }
    if entries.is_empty() {
        return Err(Error::InvalidParameter {
            reason: "amplitude dump holds no amplitude lines".into(),
        });
    }
    let mut amps = vec![C64::new(0.0, 0.0); (max_n + 1).max(2)];
    for (n, a) in entries {
        amps[n] = a;
    }
    Ok(StateVector::new(amps)?)
}
