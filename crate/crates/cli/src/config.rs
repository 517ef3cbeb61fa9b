//! Run configuration: command-line flags layered over an optional
//! `key=value` file layered over defaults.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use emdual::{QuadratureConfig, Trajectory, WdParametrization};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

/// `lo:hi:n`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("expected lo:hi:n, got '{s}'"));
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| format!("bad lower bound in '{s}'"))?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| format!("bad upper bound in '{s}'"))?;
        let n: usize = parts[2].trim().parse().map_err(|_| format!("bad count in '{s}'"))?;
        if !(lo.is_finite() && hi.is_finite()) || !(lo < hi) {
            return Err(format!("range bounds must be finite with lo < hi, got '{s}'"));
        }
        if n < 2 {
            return Err(format!("range count must be at least 2, got '{s}'"));
        }
        Ok(Range { lo, hi, n })
    }
}

impl Range {
    pub fn linear(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (self.n - 1) as f64)
            .collect()
    }

    pub fn geometric(&self) -> Result<Vec<f64>, ConfigError> {
        if !(self.lo > 0.0) {
            return Err(bad(format!(
                "geometric range needs a positive lower bound, got {}",
                self.lo
            )));
        }
        let ratio = self.hi / self.lo;
        Ok((0..self.n)
            .map(|i| self.lo * ratio.powf(i as f64 / (self.n - 1) as f64))
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrajKind {
    Df,
    Wd,
    Uniform,
    Cw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    #[value(name = "recipe")]
    Recipe,
    #[value(name = "closed_form")]
    ClosedForm,
    #[value(name = "fourier_oracle")]
    FourierOracle,
    #[value(name = "both")]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Right,
    Left,
    Double,
}

/// Every setting, from flags or from the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Settings {
    /// Trajectory family
    #[arg(long, global = true, value_enum)]
    pub traj: Option<TrajKind>,
    /// Davies-Fulling final speed
    #[arg(long, global = true)]
    pub s: Option<f64>,
    /// Acceleration scale
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    /// Walker-Davies A
    #[arg(long = "A", global = true)]
    pub a: Option<f64>,
    /// Walker-Davies B
    #[arg(long = "B", global = true)]
    pub b: Option<f64>,
    /// Walker-Davies peak speed (with --kappa instead of --A/--B)
    #[arg(long, global = true)]
    pub vmax: Option<f64>,
    /// Allow the s = 1 Davies-Fulling limit
    #[arg(long, global = true)]
    pub lightspeed: bool,
    /// Photon frequencies, geometric lo:hi:n
    #[arg(long, global = true)]
    pub omega_range: Option<Range>,
    /// Observation angles in radians, linear lo:hi:n
    #[arg(long, global = true)]
    pub theta_range: Option<Range>,
    /// Mirror frequencies, geometric lo:hi:n
    #[arg(long, global = true)]
    pub pq_range: Option<Range>,
    /// Coordinate times (proper times for cw), linear lo:hi:n
    #[arg(long, global = true)]
    pub t_range: Option<Range>,
    /// Single observation angle in radians
    #[arg(long, global = true)]
    pub theta: Option<f64>,
    /// Spectrum evaluation method
    #[arg(long, global = true, value_enum)]
    pub method: Option<Method>,
    /// Which mirror side to report
    #[arg(long, global = true, value_enum)]
    pub side: Option<Side>,
    /// Largest accepted relative disagreement
    #[arg(long, global = true)]
    pub gate: Option<f64>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file (stdout if absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// key=value file; flags override it
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Quadrature relative tolerance
    #[arg(long, global = true)]
    pub rel_tol: Option<f64>,
    /// Multiplier applied to dI/dΩ values
    #[arg(long, global = true)]
    pub e2: Option<f64>,
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, ConfigError>
where
    T::Err: fmt::Display,
{
    value
        .parse()
        .map_err(|e| bad(format!("invalid value '{value}' for '{key}': {e}")))
}

fn parse_enum<T: ValueEnum>(key: &str, value: &str) -> Result<T, ConfigError> {
    T::from_str(value, false).map_err(|e| bad(format!("invalid value '{value}' for '{key}': {e}")))
}

impl Settings {
    fn set(&mut self, key: &str, value: &str) -> Result<(), ConfigError> {
        match key {
            "traj" => self.traj = Some(parse_enum(key, value)?),
            "s" => self.s = Some(parse_value(key, value)?),
            "kappa" => self.kappa = Some(parse_value(key, value)?),
            "A" => self.a = Some(parse_value(key, value)?),
            "B" => self.b = Some(parse_value(key, value)?),
            "vmax" => self.vmax = Some(parse_value(key, value)?),
            "lightspeed" => self.lightspeed = parse_value(key, value)?,
            "omega-range" => self.omega_range = Some(parse_value(key, value)?),
            "theta-range" => self.theta_range = Some(parse_value(key, value)?),
            "pq-range" => self.pq_range = Some(parse_value(key, value)?),
            "t-range" => self.t_range = Some(parse_value(key, value)?),
            "theta" => self.theta = Some(parse_value(key, value)?),
            "method" => self.method = Some(parse_enum(key, value)?),
            "side" => self.side = Some(parse_enum(key, value)?),
            "gate" => self.gate = Some(parse_value(key, value)?),
            "format" => self.format = Some(parse_enum(key, value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "rel-tol" => self.rel_tol = Some(parse_value(key, value)?),
            "e2" => self.e2 = Some(parse_value(key, value)?),
            _ => return Err(bad(format!("unknown config key '{key}'"))),
        }
        Ok(())
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse_file_contents(text: &str) -> Result<Settings, ConfigError> {
        let mut out = Settings::default();
        let mut seen = std::collections::BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad(format!("line {}: expected key=value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(bad(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
            out.set(key, value)
                .map_err(|e| bad(format!("line {}: {}", lineno + 1, e.0)))?;
        }
        Ok(out)
    }

    pub fn load_file(path: &Path) -> Result<Settings, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| bad(format!("cannot read config {}: {e}", path.display())))?;
        Settings::parse_file_contents(&text)
    }

    /// Fields set here win over `base`.
    pub fn over(self, base: Settings) -> Settings {
        Settings {
            traj: self.traj.or(base.traj),
            s: self.s.or(base.s),
            kappa: self.kappa.or(base.kappa),
            a: self.a.or(base.a),
            b: self.b.or(base.b),
            vmax: self.vmax.or(base.vmax),
            lightspeed: self.lightspeed || base.lightspeed,
            omega_range: self.omega_range.or(base.omega_range),
            theta_range: self.theta_range.or(base.theta_range),
            pq_range: self.pq_range.or(base.pq_range),
            t_range: self.t_range.or(base.t_range),
            theta: self.theta.or(base.theta),
            method: self.method.or(base.method),
            side: self.side.or(base.side),
            gate: self.gate.or(base.gate),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            config: self.config,
            rel_tol: self.rel_tol.or(base.rel_tol),
            e2: self.e2.or(base.e2),
        }
    }

    /// Flags over the `--config` file, if any.
    pub fn resolve(self) -> Result<Settings, ConfigError> {
        match self.config.clone() {
            Some(path) => Ok(self.over(Settings::load_file(&path)?)),
            None => Ok(self),
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn e2(&self) -> Result<f64, ConfigError> {
        match self.e2 {
            Some(v) if !(v > 0.0 && v.is_finite()) => Err(bad(format!("e2 must be positive, got {v}"))),
            Some(v) => Ok(v),
            None => Ok(1.0),
        }
    }

    pub fn quadrature(&self) -> Result<QuadratureConfig, ConfigError> {
        let cfg = match self.rel_tol {
            Some(t) => QuadratureConfig::default().with_rel_tol(t),
            None => QuadratureConfig::default(),
        };
        cfg.validate().map_err(|e| bad(e.to_string()))?;
        Ok(cfg)
    }

    pub fn trajectory(&self) -> Result<Trajectory, ConfigError> {
        let kind = self
            .traj
            .ok_or_else(|| bad("no trajectory given; use --traj {df,wd,uniform,cw}"))?;
        let kappa = self.kappa.unwrap_or(1.0);
        let unused = |name: &str, set: bool| -> Result<(), ConfigError> {
            if set {
                Err(bad(format!("'{name}' does not apply to --traj {kind:?}").to_lowercase()))
            } else {
                Ok(())
            }
        };
        let invalid = |e: emdual::Error| bad(e.to_string());
        match kind {
            TrajKind::Df => {
                unused("A", self.a.is_some())?;
                unused("B", self.b.is_some())?;
                unused("vmax", self.vmax.is_some())?;
                let s = self.s.ok_or_else(|| bad("--traj df needs --s"))?;
                if s == 1.0 {
                    if !self.lightspeed {
                        return Err(bad("s = 1 is the light-speed limit; pass --lightspeed to use it"));
                    }
                    Trajectory::davies_fulling_lightspeed(kappa).map_err(invalid)
                } else {
                    Trajectory::davies_fulling(s, kappa).map_err(invalid)
                }
            }
            TrajKind::Wd => {
                unused("s", self.s.is_some())?;
                match (self.a, self.b, self.vmax) {
                    (Some(a), Some(b), None) => {
                        unused("kappa", self.kappa.is_some())?;
                        Trajectory::walker_davies(a, b).map_err(invalid)
                    }
                    (None, None, Some(v)) => WdParametrization::new(kappa, v)
                        .map(|w| w.trajectory())
                        .map_err(invalid),
                    _ => Err(bad("--traj wd needs either --A and --B, or --vmax (with optional --kappa)")),
                }
            }
            TrajKind::Uniform | TrajKind::Cw => {
                unused("s", self.s.is_some())?;
                unused("A", self.a.is_some())?;
                unused("B", self.b.is_some())?;
                unused("vmax", self.vmax.is_some())?;
                if kind == TrajKind::Uniform {
                    Trajectory::uniform_acceleration(kappa).map_err(invalid)
                } else {
                    Trajectory::carlitz_willey(kappa).map_err(invalid)
                }
            }
        }
    }
}
