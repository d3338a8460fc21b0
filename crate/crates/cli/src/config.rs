//! Resolution of the run configuration: defaults, then config-file values,
//! then explicit flags, in increasing precedence.

use crate::args;
use ptcalogero::quantum::Branch;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Simulate,
    Exact,
    Stability,
    Perturb,
    Spectrum,
    Wedges,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Simulate => "simulate",
            Mode::Exact => "exact",
            Mode::Stability => "stability",
            Mode::Perturb => "perturb",
            Mode::Spectrum => "spectrum",
            Mode::Wedges => "wedges",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl OutputFormat {
    pub fn name(&self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }

    pub fn extension(&self) -> &'static str {
        self.name()
    }
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub omega: f64,
    pub gamma: f64,
    pub g: f64,
    pub epsilon: f64,
    /// Initial relative velocity v2(0).
    pub a: f64,
    /// Initial separation z2(0).
    pub b: f64,
    /// Initial center coordinate z1(0).
    pub z1_0: f64,
    /// Initial center velocity v1(0).
    pub v1_0: f64,
    pub t_max: f64,
    pub samples: usize,
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub levels: usize,
    pub branch: Branch,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

/// A user-facing configuration error (exit code 2).
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

type FileValues = BTreeMap<String, String>;

const KNOWN_KEYS: &[&str] = &[
    "omega", "gamma", "g", "epsilon", "a", "b", "z1_0", "v1_0", "t_max", "samples", "rel_tol",
    "abs_tol", "levels", "branch", "format",
];

/// Parse a flat `key = value` config file (`#` starts a comment).
pub fn parse_config_file(text: &str, path: &str) -> Result<FileValues, UsageError> {
    let mut values = FileValues::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            UsageError(format!(
                "{path}:{}: expected `key = value`, got `{raw}`",
                lineno + 1
            ))
        })?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(UsageError(format!(
                "{path}:{}: unknown config key `{key}`",
                lineno + 1
            )));
        }
        values.insert(key.to_string(), value.trim().to_string());
    }
    Ok(values)
}

struct Resolver {
    file: FileValues,
}

impl Resolver {
    fn f64(&self, key: &str, flag: Option<f64>, default: Option<f64>) -> Result<f64, UsageError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(raw) = self.file.get(key) {
            return raw
                .parse::<f64>()
                .map_err(|_| UsageError(format!("config key `{key}`: invalid number `{raw}`")));
        }
        default.ok_or_else(|| {
            UsageError(format!(
                "missing required parameter `{key}` (pass --{} or set it in --config)",
                key.replace('_', "-")
            ))
        })
    }

    fn usize(&self, key: &str, flag: Option<usize>, default: usize) -> Result<usize, UsageError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        if let Some(raw) = self.file.get(key) {
            return raw
                .parse::<usize>()
                .map_err(|_| UsageError(format!("config key `{key}`: invalid count `{raw}`")));
        }
        Ok(default)
    }

    fn branch(&self, flag: Option<args::BranchArg>) -> Result<Branch, UsageError> {
        if let Some(b) = flag {
            return Ok(match b {
                args::BranchArg::Plus => Branch::Plus,
                args::BranchArg::Minus => Branch::Minus,
            });
        }
        match self.file.get("branch").map(String::as_str) {
            None => Ok(Branch::Minus),
            Some("plus") => Ok(Branch::Plus),
            Some("minus") => Ok(Branch::Minus),
            Some(other) => Err(UsageError(format!(
                "config key `branch`: expected plus|minus, got `{other}`"
            ))),
        }
    }

    fn format(&self, flag: Option<args::FormatArg>) -> Result<OutputFormat, UsageError> {
        if let Some(f) = flag {
            return Ok(match f {
                args::FormatArg::Csv => OutputFormat::Csv,
                args::FormatArg::Json => OutputFormat::Json,
            });
        }
        match self.file.get("format").map(String::as_str) {
            None => Ok(OutputFormat::Csv),
            Some("csv") => Ok(OutputFormat::Csv),
            Some("json") => Ok(OutputFormat::Json),
            Some(other) => Err(UsageError(format!(
                "config key `format`: expected csv|json, got `{other}`"
            ))),
        }
    }
}

fn load(io: &args::IoArgs) -> Result<Resolver, UsageError> {
    let file = match &io.config {
        None => FileValues::new(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                UsageError(format!("cannot read config {}: {e}", path.display()))
            })?;
            parse_config_file(&text, &path.display().to_string())?
        }
    };
    Ok(Resolver { file })
}

/// Resolve the full configuration for one parsed subcommand.
pub fn resolve(command: &args::Command) -> Result<RunConfig, UsageError> {
    use args::Command::*;
    match command {
        Simulate(a) => {
            let r = load(&a.io)?;
            let omega = r.f64("omega", a.physics.omega, None)?;
            let gamma = r.f64("gamma", a.physics.gamma, Some(0.0))?;
            let b = r.f64("b", a.b, Some(1.0))?;
            Ok(RunConfig {
                mode: Mode::Simulate,
                omega,
                gamma,
                g: r.f64("g", a.physics.g, Some(-0.5))?,
                epsilon: r.f64("epsilon", a.epsilon, None)?,
                a: r.f64("a", a.a, Some(0.0))?,
                b,
                z1_0: r.f64("z1_0", a.z1_0, Some(0.0))?,
                v1_0: r.f64("v1_0", a.v1_0, Some(-2.0 * gamma * b))?,
                t_max: r.f64("t_max", a.grid.t_max, Some(50.0))?,
                samples: r.usize("samples", a.grid.samples, 2000)?,
                rel_tol: r.f64("rel_tol", a.grid.rel_tol, Some(1e-10))?,
                abs_tol: r.f64("abs_tol", a.grid.abs_tol, Some(1e-12))?,
                levels: r.usize("levels", None, 5)?,
                branch: r.branch(None)?,
                format: r.format(a.io.format)?,
                output: a.io.output.clone(),
            })
        }
        Exact(a) => {
            let r = load(&a.io)?;
            let omega = r.f64("omega", a.physics.omega, None)?;
            let gamma = r.f64("gamma", a.physics.gamma, Some(0.0))?;
            let b = r.f64("b", a.b, Some(1.0))?;
            Ok(RunConfig {
                mode: Mode::Exact,
                omega,
                gamma,
                g: r.f64("g", a.physics.g, Some(-0.5))?,
                epsilon: -(omega * omega),
                a: r.f64("a", a.a, Some(1.0))?,
                b,
                z1_0: r.f64("z1_0", a.z1_0, Some(0.0))?,
                v1_0: -2.0 * gamma * b,
                t_max: r.f64("t_max", a.grid.t_max, Some(50.0))?,
                samples: r.usize("samples", a.grid.samples, 2000)?,
                rel_tol: r.f64("rel_tol", a.grid.rel_tol, Some(1e-10))?,
                abs_tol: r.f64("abs_tol", a.grid.abs_tol, Some(1e-12))?,
                levels: r.usize("levels", None, 5)?,
                branch: r.branch(None)?,
                format: r.format(a.io.format)?,
                output: a.io.output.clone(),
            })
        }
        Stability(a) => {
            let r = load(&a.io)?;
            let omega = r.f64("omega", a.physics.omega, None)?;
            Ok(RunConfig {
                mode: Mode::Stability,
                omega,
                gamma: r.f64("gamma", a.physics.gamma, Some(0.0))?,
                g: r.f64("g", a.physics.g, Some(-0.5))?,
                epsilon: 0.0,
                a: 0.0,
                b: 1.0,
                z1_0: 0.0,
                v1_0: 0.0,
                t_max: 0.0,
                samples: 0,
                rel_tol: 1e-10,
                abs_tol: 1e-12,
                levels: 0,
                branch: r.branch(None)?,
                format: r.format(a.io.format)?,
                output: a.io.output.clone(),
            })
        }
        Perturb(a) => {
            let r = load(&a.io)?;
            let omega = r.f64("omega", a.physics.omega, None)?;
            Ok(RunConfig {
                mode: Mode::Perturb,
                omega,
                gamma: r.f64("gamma", a.physics.gamma, Some(0.1))?,
                g: r.f64("g", a.physics.g, Some(-0.5))?,
                epsilon: 0.0,
                a: 0.0,
                b: 1.0,
                z1_0: 0.5,
                v1_0: 0.0,
                t_max: r.f64("t_max", a.grid.t_max, Some(5.0))?,
                samples: r.usize("samples", a.grid.samples, 501)?,
                rel_tol: r.f64("rel_tol", a.grid.rel_tol, Some(1e-12))?,
                abs_tol: r.f64("abs_tol", a.grid.abs_tol, Some(1e-14))?,
                levels: 0,
                branch: r.branch(None)?,
                format: r.format(a.io.format)?,
                output: a.io.output.clone(),
            })
        }
        Spectrum(a) => {
            let r = load(&a.io)?;
            let omega = r.f64("omega", a.physics.omega, None)?;
            Ok(RunConfig {
                mode: Mode::Spectrum,
                omega,
                gamma: r.f64("gamma", a.physics.gamma, Some(0.0))?,
                g: r.f64("g", a.physics.g, Some(-0.5))?,
                epsilon: -(omega * omega),
                a: 0.0,
                b: 1.0,
                z1_0: 0.0,
                v1_0: 0.0,
                t_max: 0.0,
                samples: 0,
                rel_tol: 1e-10,
                abs_tol: 1e-12,
                levels: r.usize("levels", a.levels, 5)?,
                branch: r.branch(a.branch)?,
                format: r.format(a.io.format)?,
                output: a.io.output.clone(),
            })
        }
        Wedges(a) => {
            let r = load(&a.io)?;
            if matches!(r.format(a.io.format)?, OutputFormat::Csv) && a.io.format.is_some() {
                return Err(UsageError(
                    "wedges emits JSON only; --format csv is not available here".into(),
                ));
            }
            Ok(RunConfig {
                mode: Mode::Wedges,
                omega: 1.0,
                gamma: r.f64("gamma", a.gamma, Some(0.0))?,
                g: -0.5,
                epsilon: 0.0,
                a: 0.0,
                b: 1.0,
                z1_0: r.f64("z1_0", a.z1_0, Some(0.0))?,
                v1_0: 0.0,
                t_max: 0.0,
                samples: 0,
                rel_tol: 1e-10,
                abs_tol: 1e-12,
                levels: 0,
                branch: r.branch(None)?,
                format: OutputFormat::Json,
                output: a.io.output.clone(),
            })
        }
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Render the resolved configuration in the config-file syntax; feeding the
/// dump back through `--config` reproduces the same configuration.
pub fn dump(config: &RunConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {} configuration", config.mode.name());
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    kv("omega", fmt_f64(config.omega));
    kv("gamma", fmt_f64(config.gamma));
    kv("g", fmt_f64(config.g));
    kv("epsilon", fmt_f64(config.epsilon));
    kv("a", fmt_f64(config.a));
    kv("b", fmt_f64(config.b));
    kv("z1_0", fmt_f64(config.z1_0));
    kv("v1_0", fmt_f64(config.v1_0));
    kv("t_max", fmt_f64(config.t_max));
    kv("samples", config.samples.to_string());
    kv("rel_tol", fmt_f64(config.rel_tol));
    kv("abs_tol", fmt_f64(config.abs_tol));
    kv("levels", config.levels.to_string());
    kv("branch", config.branch.to_string());
    kv("format", config.format.name().to_string());
    out
}
