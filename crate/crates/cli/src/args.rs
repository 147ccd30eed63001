//! Command-line flags, the key=value config file and parameter resolution.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_4;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dimer_fluorescence::{GeometryMode, SystemParams};

use crate::error::{CliError, CliResult};

/// Splitting used when `beta` is given without `big_r` (in units of gamma).
pub const DEFAULT_BIG_R: f64 = 1000.0;
/// Collective decay used unless the distance fixes it or it is given.
pub const DEFAULT_GAMMA12_RATIO: f64 = 0.999;

#[derive(Parser, Debug)]
#[command(
    name = "dimer-fluorescence",
    version,
    about = "Resonance fluorescence of two coupled, coherently driven quantum emitters",
    after_help = "Rates are given in the unit set by --gamma (default 1). Values of --omega, \
                  --delta and --grid accept an `R` suffix, e.g. `0.1R`."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact stationary density matrix.
    Steady {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Intensity, g2(0) and two-photon visibility, optionally swept.
    Observables {
        #[command(flatten)]
        params: ParamArgs,
        /// `name=min:max:n[:log]` with name one of delta, omega, beta, kr12.
        #[arg(long)]
        sweep: Option<String>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Resonance fluorescence spectrum and its emitter-resolved parts.
    Spectrum {
        #[command(flatten)]
        params: ParamArgs,
        /// Frequency grid `min:max:n`, relative to the laser.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// Emit the detected peaks instead of the series.
        #[arg(long)]
        peaks: bool,
        #[arg(long, default_value_t = dimer_fluorescence::spectrum::DEFAULT_PROMINENCE)]
        prominence: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Two-photon dressed ladder at the two-photon resonance.
    Ladder {
        #[command(flatten)]
        params: ParamArgs,
        /// Numerical eigensystem of the driven Hamiltonian instead of the
        /// perturbative transitions.
        #[arg(long)]
        exact: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fisher information about kr12 carried by the spectrum.
    Fisher {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
        /// First map axis, `name=min:max:n[:log]` with name one of delta, omega, kr12.
        #[arg(long)]
        sweep: Option<String>,
        /// Second map axis.
        #[arg(long, requires = "sweep")]
        sweep2: Option<String>,
        #[arg(long, value_enum, default_value_t = Frame::Absolute)]
        frame: Frame,
        /// Detection efficiency.
        #[arg(long, default_value_t = 1.0)]
        eta: f64,
        /// Finite-difference step relative to kr12.
        #[arg(long, default_value_t = 1e-4)]
        step_rel: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Reference figure datasets at fixed parameters.
    Reproduce {
        #[arg(value_enum)]
        figure: Figure,
        /// Panel letter; see the README for the list per figure.
        #[arg(long, default_value = "a")]
        panel: String,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Frame {
    Absolute,
    /// Keep Delta/R fixed while differentiating.
    Splitting,
}

#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Geometry {
    Nearfield,
    Exact,
}

#[derive(Args, Debug, Clone, Default)]
pub struct ParamArgs {
    /// key=value file; flags take precedence over its entries.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Single-emitter decay rate, the unit of every other rate.
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub gamma12: Option<f64>,
    /// Half the bare frequency difference (with --j or --kr12).
    #[arg(long, allow_negative_numbers = true)]
    pub delta_emit: Option<f64>,
    #[arg(long)]
    pub j: Option<f64>,
    #[arg(long)]
    pub kr12: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub big_r: Option<f64>,
    #[arg(long, value_enum)]
    pub geometry_mode: Option<Geometry>,
    #[arg(long)]
    pub omega: Option<String>,
    /// Laser detuning from the mean emitter frequency.
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    #[arg(long)]
    pub det_linewidth: Option<f64>,
}

#[derive(Args, Debug, Clone, Default)]
pub struct OutputArgs {
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Also write an SVG plot next to --out.
    #[arg(long, requires = "out")]
    pub plot: bool,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    pub jobs: Option<usize>,
}

/// A number optionally scaled by the splitting (`0.5R`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub in_r: bool,
}

impl Quantity {
    pub fn parse(s: &str) -> CliResult<Self> {
        let t = s.trim();
        let (num, in_r) = match t.strip_suffix(['R', 'r']) {
            Some("") | Some("+") => ("1", true),
            Some("-") => ("-1", true),
            Some(rest) => (rest, true),
            None => (t, false),
        };
        let value: f64 = num
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("cannot parse `{s}` as a number")))?;
        if !value.is_finite() {
            return Err(CliError::Config(format!("`{s}` is not finite")));
        }
        Ok(Self { value, in_r })
    }

    /// Value in units of gamma.
    pub fn resolve(self, gamma_unit: f64, big_r: f64) -> f64 {
        if self.in_r {
            self.value * big_r
        } else {
            self.value / gamma_unit
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub min: Quantity,
    pub max: Quantity,
    pub n: usize,
}

impl GridSpec {
    pub fn parse(s: &str) -> CliResult<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(CliError::Config(format!("grid `{s}` must be min:max:n")));
        }
        let n: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("grid size `{}` is not an integer", parts[2])))?;
        if n < 2 {
            return Err(CliError::Config("grid needs at least 2 points".into()));
        }
        Ok(Self {
            min: Quantity::parse(parts[0])?,
            max: Quantity::parse(parts[1])?,
            n,
        })
    }

    pub fn resolve(&self, gamma_unit: f64, big_r: f64) -> CliResult<Vec<f64>> {
        let (a, b) = (self.min.resolve(gamma_unit, big_r), self.max.resolve(gamma_unit, big_r));
        if !(a < b) {
            return Err(CliError::Config(format!("empty grid range [{a}, {b}]")));
        }
        Ok(dimer_fluorescence::spectrum::linspace(a, b, self.n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepParam {
    Delta,
    Omega,
    Beta,
    Kr12,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Delta => "delta",
            SweepParam::Omega => "omega",
            SweepParam::Beta => "beta",
            SweepParam::Kr12 => "kr12",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub grid: GridSpec,
    pub log: bool,
}

impl SweepSpec {
    pub fn parse(s: &str) -> CliResult<Self> {
        let (name, range) = s
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("sweep `{s}` must be name=min:max:n[:log]")))?;
        let param = match name.trim() {
            "delta" | "delta_laser" => SweepParam::Delta,
            "omega" => SweepParam::Omega,
            "beta" => SweepParam::Beta,
            "kr12" => SweepParam::Kr12,
            other => return Err(CliError::Config(format!("cannot sweep `{other}`"))),
        };
        let (range, log) = match range.strip_suffix(":log") {
            Some(r) => (r, true),
            None => (range, false),
        };
        let grid = GridSpec::parse(range)?;
        Ok(Self { param, grid, log })
    }

    /// Sweep values in internal units (`beta` in radians, `kr12` as given).
    pub fn values(&self, gamma_unit: f64, big_r: f64) -> CliResult<Vec<f64>> {
        let unitless = matches!(self.param, SweepParam::Beta | SweepParam::Kr12);
        let resolve = |q: Quantity| {
            if unitless && !q.in_r {
                q.value
            } else {
                q.resolve(gamma_unit, big_r)
            }
        };
        let (a, b) = (resolve(self.grid.min), resolve(self.grid.max));
        if !(a < b) {
            return Err(CliError::Config(format!("empty sweep range [{a}, {b}]")));
        }
        if self.log {
            if !(a > 0.0) {
                return Err(CliError::Config("log sweep needs positive bounds".into()));
            }
            Ok(geomspace(a, b, self.grid.n))
        } else {
            Ok(dimer_fluorescence::spectrum::linspace(a, b, self.grid.n))
        }
    }
}

pub fn geomspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    dimer_fluorescence::spectrum::linspace(a.ln(), b.ln(), n)
        .into_iter()
        .map(f64::exp)
        .collect()
}

/// Parameters after merging the config file and the flags.
#[derive(Clone, Debug, Default, PartialEq)]
struct Raw {
    gamma: Option<f64>,
    gamma12: Option<f64>,
    delta_emit: Option<f64>,
    j: Option<f64>,
    kr12: Option<f64>,
    beta: Option<f64>,
    big_r: Option<f64>,
    geometry_mode: Option<GeometryMode>,
    omega: Option<Quantity>,
    delta: Option<Quantity>,
    det_linewidth: Option<f64>,
}

fn number(key: &str, v: &str) -> CliResult<f64> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| CliError::Config(format!("`{key}`: cannot parse `{v}` as a number")))?;
    if !x.is_finite() {
        return Err(CliError::Config(format!("`{key}` = {v} is not finite")));
    }
    Ok(x)
}

fn geometry(v: &str) -> CliResult<GeometryMode> {
    match v.trim().to_ascii_lowercase().replace(['-', '_'], "").as_str() {
        "nearfield" => Ok(GeometryMode::NearField),
        "exact" => Ok(GeometryMode::Exact),
        other => Err(CliError::Config(format!("unknown geometry_mode `{other}`"))),
    }
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> CliResult<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("config line {}: expected key=value", k + 1)))?;
        let key = key.trim().to_ascii_lowercase();
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(CliError::Config(format!("config key `{key}` given twice")));
        }
    }
    Ok(map)
}

impl Raw {
    fn from_config(map: &BTreeMap<String, String>) -> CliResult<Self> {
        let mut raw = Raw::default();
        for (key, v) in map {
            match key.as_str() {
                "gamma" => raw.gamma = Some(number(key, v)?),
                "gamma12" => raw.gamma12 = Some(number(key, v)?),
                "delta_emit" => raw.delta_emit = Some(number(key, v)?),
                "j" | "j_coupling" => raw.j = Some(number(key, v)?),
                "kr12" => raw.kr12 = Some(number(key, v)?),
                "beta" => raw.beta = Some(number(key, v)?),
                "big_r" => raw.big_r = Some(number(key, v)?),
                "geometry_mode" => raw.geometry_mode = Some(geometry(v)?),
                "omega" => raw.omega = Some(Quantity::parse(v)?),
                "delta" | "delta_laser" => raw.delta = Some(Quantity::parse(v)?),
                "det_linewidth" => raw.det_linewidth = Some(number(key, v)?),
                other => return Err(CliError::Config(format!("unknown config key `{other}`"))),
            }
        }
        Ok(raw)
    }

    fn overlay(mut self, a: &ParamArgs) -> CliResult<Self> {
        macro_rules! take {
            ($($f:ident),*) => { $( if a.$f.is_some() { self.$f = a.$f; } )* };
        }
        take!(gamma, gamma12, delta_emit, j, kr12, beta, big_r, det_linewidth);
        if let Some(g) = a.geometry_mode {
            self.geometry_mode = Some(match g {
                Geometry::Nearfield => GeometryMode::NearField,
                Geometry::Exact => GeometryMode::Exact,
            });
        }
        if let Some(s) = &a.omega {
            self.omega = Some(Quantity::parse(s)?);
        }
        if let Some(s) = &a.delta {
            self.delta = Some(Quantity::parse(s)?);
        }
        Ok(self)
    }
}

/// Resolved parameters, every rate in units of gamma.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Resolved {
    pub params: SystemParams,
    /// The user's gamma, kept to report the unit.
    pub gamma_unit: f64,
}

impl ParamArgs {
    pub fn resolve(&self) -> CliResult<Resolved> {
        let file = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    CliError::Config(format!("cannot read config {}: {e}", path.display()))
                })?;
                parse_config(&text)?
            }
            None => BTreeMap::new(),
        };
        resolve_raw(Raw::from_config(&file)?.overlay(self)?)
    }
}

fn resolve_raw(raw: Raw) -> CliResult<Resolved> {
    let unit = raw.gamma.unwrap_or(1.0);
    if !(unit > 0.0) {
        return Err(CliError::Config(format!("gamma = {unit} must be positive")));
    }
    let triples = [
        raw.j.is_some(),
        raw.kr12.is_some(),
        raw.beta.is_some() || raw.big_r.is_some(),
    ];
    if triples.iter().filter(|&&t| t).count() > 1 {
        return Err(CliError::Config(
            "give exactly one of (j, delta_emit), (kr12, delta_emit), (big_r, beta)".into(),
        ));
    }
    if triples[2] && raw.delta_emit.is_some() {
        return Err(CliError::Config("delta_emit conflicts with (big_r, beta)".into()));
    }
    if raw.geometry_mode.is_some() && raw.kr12.is_none() {
        return Err(CliError::Config("geometry_mode only applies with kr12".into()));
    }
    let delta_emit = raw.delta_emit.unwrap_or(0.0) / unit;
    let mut p = if let Some(j) = raw.j {
        SystemParams::from_coupling(j / unit, delta_emit)?
    } else if let Some(kr) = raw.kr12 {
        SystemParams::from_distance(kr, delta_emit, raw.geometry_mode.unwrap_or_default())?
    } else if raw.delta_emit.is_some() {
        return Err(CliError::Config("delta_emit needs j or kr12".into()));
    } else {
        let r = raw.big_r.map_or(DEFAULT_BIG_R, |r| r / unit);
        SystemParams::from_mixing(r, raw.beta.unwrap_or(FRAC_PI_4))?
    };
    if let Some(g12) = raw.gamma12 {
        p = p.with_gamma12(g12 / unit);
    } else if p.geometry.is_none() {
        p = p.with_gamma12(DEFAULT_GAMMA12_RATIO);
    }
    let r = p.big_r;
    if let Some(o) = raw.omega {
        p = p.with_omega(o.resolve(unit, r));
    }
    if let Some(d) = raw.delta {
        p = p.with_delta_laser(d.resolve(unit, r));
    }
    if let Some(g) = raw.det_linewidth {
        p = p.with_det_linewidth(g / unit);
    }
    p.validate()?;
    Ok(Resolved { params: p, gamma_unit: unit })
}
