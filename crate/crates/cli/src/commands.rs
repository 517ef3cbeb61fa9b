//! Subcommand implementations. Each returns the rendered document and
//! whether its numerical gate (if any) held.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use emdual::electron::{
    spectral_distribution_closed, spectral_distribution_recipe, spectral_grid, PhotonMode,
};
use emdual::energy::energy_report;
use emdual::kinematics::{state_at, state_at_proper_time};
use emdual::mirror::{
    beta_sq_df_double, beta_sq_df_right, beta_sq_uniform_right, beta_sq_wd_right,
    particle_count_wd, particle_count_wd_closed, particle_density_wd, particle_density_wd_closed,
    ModePair,
};
use emdual::thermal::{reference_temperature, thermality_verdict, TemperatureKind};
use emdual::{QuadratureConfig, SpectralMethod, Trajectory, WdParametrization};

use crate::config::{ConfigError, Format, Method, Range, Settings, Side};
use crate::output::{envelope, key_value_table, render_json, Cell, Table};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Unsupported(String),
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Unsupported(_) => 4,
            CliError::Runtime(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Unsupported(m) | CliError::Runtime(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.0)
    }
}

impl From<emdual::Error> for CliError {
    fn from(e: emdual::Error) -> Self {
        use emdual::Error as E;
        match e {
            E::Unsupported(_) | E::InfiniteEnergy(_) | E::InfiniteSpectrum(_) => {
                CliError::Unsupported(e.to_string())
            }
            E::InvalidParameter(_) => CliError::Config(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

pub struct Output {
    pub text: String,
    pub gate_passed: bool,
}

pub struct Context {
    pub settings: Settings,
    pub traj: Trajectory,
    pub cfg: QuadratureConfig,
}

impl Context {
    pub fn new(settings: Settings) -> Result<Self, CliError> {
        let traj = settings.trajectory()?;
        let cfg = settings.quadrature()?;
        settings.e2()?;
        if let Some(g) = settings.gate {
            if !(g >= 0.0) {
                return Err(CliError::Config(format!("gate must be non-negative, got {g}")));
            }
        }
        Ok(Context { settings, traj, cfg })
    }

    fn render(&self, command: &str, units: &str, table: &Table, extra: Map<String, Value>) -> String {
        match self.settings.format() {
            Format::Csv => table.to_csv(),
            Format::Json => {
                let mut extra = extra;
                extra.insert("failed_points".into(), json!(table.failed_cells()));
                render_json(&envelope(command, &self.traj, units, &self.cfg, extra, table.to_json()))
            }
        }
    }
}

fn unsupported(what: &str, traj: &Trajectory) -> CliError {
    CliError::Unsupported(format!("{what} is not available for {}", traj.describe()))
}

fn range_or(r: Option<Range>, default: Range) -> Range {
    r.unwrap_or(default)
}

/// Ascending cosθ values for a θ range in `[0, π]`.
fn cos_axis(theta: Range) -> Result<Vec<f64>, CliError> {
    if theta.lo < 0.0 || theta.hi > PI {
        return Err(CliError::Config(format!(
            "theta range must lie within [0, pi], got {}:{}",
            theta.lo, theta.hi
        )));
    }
    let mut c: Vec<f64> = theta.linear().into_iter().map(f64::cos).collect();
    c.reverse();
    Ok(c)
}

pub fn cmd_trajectory(ctx: &Context) -> Result<Output, CliError> {
    let proper = matches!(ctx.traj, Trajectory::CarlitzWilley { .. });
    let default = if proper {
        Range { lo: 0.1, hi: 10.0, n: 100 }
    } else {
        Range { lo: -5.0, hi: 5.0, n: 101 }
    };
    let grid = range_or(ctx.settings.t_range, default).linear();
    if proper && grid[0] <= 0.0 {
        return Err(CliError::Config("cw samples proper time; t-range must be positive".into()));
    }
    let states: Vec<_> = grid
        .par_iter()
        .map(|&x| {
            if proper {
                state_at_proper_time(&ctx.traj, x)
            } else {
                state_at(&ctx.traj, x)
            }
        })
        .collect();
    let mut table = Table::new(&["t", "z", "v", "eta", "gamma", "alpha", "peel", "jerk_sq"]);
    for (x, st) in grid.iter().zip(states) {
        let row = match st {
            Ok(s) => vec![s.t, s.z, s.v, s.eta, s.gamma, s.alpha, s.peel, s.jerk_sq]
                .into_iter()
                .map(Cell::from)
                .collect(),
            Err(_) => {
                let mut r = vec![Cell::Num(if proper { None } else { Some(*x) })];
                r.extend((0..7).map(|_| Cell::Num(None)));
                r
            }
        };
        table.push(row);
    }
    let mut extra = Map::new();
    extra.insert(
        "sampled_variable".into(),
        json!(if proper { "proper_time" } else { "coordinate_time" }),
    );
    Ok(Output {
        text: ctx.render("trajectory", "natural units, c = 1", &table, extra),
        gate_passed: true,
    })
}

fn spectral_method(m: Method) -> Option<SpectralMethod> {
    match m {
        Method::Recipe => Some(SpectralMethod::Recipe),
        Method::ClosedForm => Some(SpectralMethod::ClosedForm),
        Method::FourierOracle => Some(SpectralMethod::FourierOracle),
        Method::Both => None,
    }
}

fn method_name(m: SpectralMethod) -> &'static str {
    match m {
        SpectralMethod::Recipe => "recipe",
        SpectralMethod::ClosedForm => "closed_form",
        SpectralMethod::FourierOracle => "fourier_oracle",
    }
}

pub fn cmd_spectrum(ctx: &Context) -> Result<Output, CliError> {
    if matches!(ctx.traj, Trajectory::CarlitzWilley { .. }) {
        return Err(unsupported("a photon spectrum", &ctx.traj));
    }
    let omega = range_or(ctx.settings.omega_range, Range { lo: 0.1, hi: 10.0, n: 40 }).geometric()?;
    let cos = cos_axis(range_or(ctx.settings.theta_range, Range { lo: 0.05, hi: 3.09, n: 40 }))?;
    let e2 = ctx.settings.e2()?;
    let scale = |v: Option<f64>| v.map(|x| x * e2);
    let method = ctx.settings.method.unwrap_or(Method::ClosedForm);
    let mut extra = Map::new();
    extra.insert("e2".into(), json!(e2));
    let mut gate_passed = true;
    let table = match spectral_method(method) {
        Some(m) => {
            let grid = spectral_grid(&ctx.traj, &omega, &cos, m, &ctx.cfg)?;
            let mut table = Table::new(&["omega", "cos_theta", "value", "method"]);
            for (i, &w) in omega.iter().enumerate() {
                for (j, &c) in cos.iter().enumerate() {
                    table.push(vec![w.into(), c.into(), scale(grid.get(i, j)).into(), method_name(m).into()]);
                }
            }
            table
        }
        None => {
            let recipe = spectral_grid(&ctx.traj, &omega, &cos, SpectralMethod::Recipe, &ctx.cfg)?;
            let closed = spectral_grid(&ctx.traj, &omega, &cos, SpectralMethod::ClosedForm, &ctx.cfg)?;
            let mut table = Table::new(&["omega", "cos_theta", "recipe", "closed_form", "rel_diff"]);
            let mut worst: f64 = 0.0;
            for (i, &w) in omega.iter().enumerate() {
                for (j, &c) in cos.iter().enumerate() {
                    let (r, d) = (recipe.get(i, j), closed.get(i, j));
                    let diff = match (r, d) {
                        (Some(r), Some(d)) if d > 0.0 => Some((r - d).abs() / d),
                        (Some(r), Some(d)) if r == d => Some(0.0),
                        _ => None,
                    };
                    if let Some(x) = diff {
                        worst = worst.max(x);
                    }
                    table.push(vec![w.into(), c.into(), scale(r).into(), scale(d).into(), diff.into()]);
                }
            }
            extra.insert("max_rel_diff".into(), json!(worst));
            if let Some(g) = ctx.settings.gate {
                gate_passed = worst <= g;
                extra.insert("gate".into(), json!(g));
            }
            table
        }
    };
    Ok(Output {
        text: ctx.render("spectrum", "dI/dOmega per unit e^2 times e2", &table, extra),
        gate_passed,
    })
}

pub fn cmd_beta(ctx: &Context) -> Result<Output, CliError> {
    let side = ctx.settings.side.unwrap_or(Side::Right);
    let default_range = match ctx.traj {
        Trajectory::WalkerDavies { a, .. } => Range { lo: 0.01 / a, hi: 10.0 / a, n: 20 },
        _ => Range { lo: 0.1, hi: 10.0, n: 20 },
    };
    let grid = range_or(ctx.settings.pq_range, default_range).geometric()?;
    let traj = ctx.traj;
    let cfg = ctx.cfg;
    let eval: Box<dyn Fn(ModePair) -> emdual::Result<f64> + Sync> = match (traj, side) {
        (Trajectory::DaviesFulling { s, kappa }, Side::Right) => Box::new(move |pq| beta_sq_df_right(s, kappa, pq)),
        (Trajectory::DaviesFulling { s, kappa }, Side::Left) => {
            Box::new(move |pq: ModePair| beta_sq_df_right(s, kappa, pq.swapped()))
        }
        (Trajectory::DaviesFulling { s, kappa }, Side::Double) => Box::new(move |pq| beta_sq_df_double(s, kappa, pq)),
        (Trajectory::WalkerDavies { a, b }, Side::Right) => Box::new(move |pq| beta_sq_wd_right(a, b, pq, &cfg)),
        (Trajectory::UniformAcceleration { kappa }, Side::Right | Side::Left) => {
            Box::new(move |pq| beta_sq_uniform_right(kappa, pq))
        }
        _ => return Err(unsupported(&format!("the {side:?} beta coefficient").to_lowercase(), &traj)),
    };
    let points: Vec<(f64, f64)> = grid
        .iter()
        .flat_map(|&p| grid.iter().map(move |&q| (p, q)))
        .collect();
    let values: Vec<Option<f64>> = points
        .par_iter()
        .map(|&(p, q)| ModePair::new(p, q).and_then(|pq| eval(pq)).ok())
        .collect();
    let mut table = Table::new(&["p", "q", "value"]);
    for (&(p, q), v) in points.iter().zip(values) {
        table.push(vec![p.into(), q.into(), v.into()]);
    }
    let mut extra = Map::new();
    extra.insert("side".into(), json!(format!("{side:?}").to_lowercase()));
    Ok(Output {
        text: ctx.render("beta", "|beta_pq|^2, dimensionless per dp dq", &table, extra),
        gate_passed: true,
    })
}

pub fn cmd_particles(ctx: &Context) -> Result<Output, CliError> {
    let Trajectory::WalkerDavies { a, b } = ctx.traj else {
        return Err(unsupported("a particle count", &ctx.traj));
    };
    let p = range_or(ctx.settings.pq_range, Range { lo: 0.01 / a, hi: 10.0 / a, n: 20 }).geometric()?;
    let cfg = ctx.cfg;
    let n_p: Vec<Option<f64>> = p.par_iter().map(|&x| particle_density_wd(a, b, x, &cfg).ok()).collect();
    let mut table = Table::new(&["p", "n_p", "n_p_closed"]);
    for (&x, n) in p.iter().zip(&n_p) {
        table.push(vec![x.into(), (*n).into(), particle_density_wd_closed(a, b, x).ok().into()]);
    }
    let mut extra = Map::new();
    let vmax = WdParametrization::from_ab(a, b)?.v_max;
    match particle_count_wd(a, b, &cfg) {
        Ok((n, err)) => {
            extra.insert("n_tot".into(), json!(n));
            extra.insert("n_tot_error".into(), json!(err));
        }
        Err(e) => {
            extra.insert("n_tot".into(), Value::Null);
            extra.insert("n_tot_failure".into(), json!(e.to_string()));
        }
    }
    extra.insert("n_tot_closed".into(), json!(particle_count_wd_closed(a, b)?));
    extra.insert("vmax".into(), json!(vmax));
    extra.insert("vmax_sq_over_6".into(), json!(vmax * vmax / 6.0));
    Ok(Output {
        text: ctx.render("particles", "right-side particle density per unit frequency", &table, extra),
        gate_passed: true,
    })
}

pub fn cmd_energy(ctx: &Context) -> Result<Output, CliError> {
    let report = energy_report(&ctx.traj, &ctx.cfg)?;
    let gate = ctx.settings.gate.unwrap_or(1e-3);
    let violations = report.violations(gate);
    let gate_passed = violations.is_empty();
    let text = match ctx.settings.format() {
        Format::Json => {
            let mut extra = Map::new();
            extra.insert("gate".into(), json!(gate));
            extra.insert("gate_passed".into(), json!(gate_passed));
            extra.insert("max_rel_diff".into(), json!(report.max_relative_difference()));
            let data = serde_json::to_value(&report).map_err(|e| CliError::Runtime(e.to_string()))?;
            render_json(&envelope(
                "energy",
                &ctx.traj,
                "electron routes per unit e^2, mirror routes per unit hbar",
                &ctx.cfg,
                extra,
                data,
            ))
        }
        Format::Csv => {
            let mut pairs: Vec<(String, Cell)> = vec![
                ("closed_form".into(), report.closed_form.into()),
                ("power_integral".into(), report.power_integral.into()),
                ("force_integral".into(), report.force_integral.into()),
                ("spectral_integral".into(), report.spectral_integral.into()),
            ];
            for (name, v) in [
                ("mirror_double_integral", report.mirror_double_integral),
                ("mirror_right_side", report.mirror_right_side),
                ("mirror_right_side_closed", report.mirror_right_side_closed),
                ("mirror_left_side_residual", report.mirror_left_side_residual),
            ] {
                if v.is_some() {
                    pairs.push((name.into(), v.into()));
                }
            }
            for d in &report.pairwise_relative_differences {
                pairs.push((format!("rel_diff:{}:{}", d.first, d.second), d.relative.into()));
            }
            key_value_table(&pairs).to_csv()
        }
    };
    Ok(Output { text, gate_passed })
}

fn references(traj: &Trajectory, theta: Option<f64>) -> Vec<emdual::TemperatureReference> {
    let kinds: &[TemperatureKind] = match traj {
        Trajectory::DaviesFulling { .. } => &[TemperatureKind::DfElectron, TemperatureKind::DfMirror],
        Trajectory::WalkerDavies { .. } => &[TemperatureKind::WdWien],
        Trajectory::UniformAcceleration { .. } => &[TemperatureKind::UniformUv],
        Trajectory::CarlitzWilley { .. } => &[TemperatureKind::CwMirror],
    };
    kinds
        .iter()
        .filter_map(|&k| reference_temperature(k, traj, theta).ok())
        .collect()
}

pub fn cmd_thermal(ctx: &Context) -> Result<Output, CliError> {
    if let Some(range) = ctx.settings.theta_range {
        if matches!(ctx.traj, Trajectory::WalkerDavies { .. } | Trajectory::CarlitzWilley { .. }) {
            return Err(unsupported("an angular temperature sweep", &ctx.traj));
        }
        let thetas = range.linear();
        if thetas[0] <= 0.0 || thetas[thetas.len() - 1] >= PI {
            return Err(CliError::Config("theta sweep must lie strictly inside (0, pi)".into()));
        }
        let fits: Vec<_> = thetas
            .iter()
            .map(|&th| thermality_verdict(&ctx.traj, Some(th), &ctx.cfg))
            .collect();
        let mut table = Table::new(&["theta", "t_fit", "t_ir", "t_uv", "t_uv_sin_theta", "verdict"]);
        for (&th, fit) in thetas.iter().zip(fits) {
            match fit {
                Ok(f) => table.push(vec![
                    th.into(),
                    f.t_fit.into(),
                    f.t_ir.into(),
                    f.t_uv.into(),
                    f.t_uv.map(|t| t * th.sin()).into(),
                    f.verdict.as_str().into(),
                ]),
                Err(e) => table.push(vec![
                    th.into(),
                    Cell::Num(None),
                    Cell::Num(None),
                    Cell::Num(None),
                    Cell::Num(None),
                    format!("error: {e}").into(),
                ]),
            }
        }
        return Ok(Output {
            text: ctx.render("thermal", "temperature per unit e^2 (Stoney scale)", &table, Map::new()),
            gate_passed: true,
        });
    }
    let fit = thermality_verdict(&ctx.traj, ctx.settings.theta, &ctx.cfg)?;
    let refs = references(&ctx.traj, fit.theta);
    let text = match ctx.settings.format() {
        Format::Json => {
            let mut extra = Map::new();
            extra.insert("references".into(), serde_json::to_value(&refs).unwrap_or(Value::Null));
            let data = serde_json::to_value(&fit).map_err(|e| CliError::Runtime(e.to_string()))?;
            render_json(&envelope(
                "thermal",
                &ctx.traj,
                "temperature per unit e^2 (stoney) or per unit hbar (kelvin), see scale",
                &ctx.cfg,
                extra,
                data,
            ))
        }
        Format::Csv => {
            let mut pairs: Vec<(String, Cell)> = vec![
                ("verdict".into(), fit.verdict.as_str().into()),
                ("scale".into(), format!("{:?}", fit.scale).to_lowercase().into()),
                ("theta".into(), fit.theta.into()),
                ("omega_min".into(), fit.fit_window.map(|w| w[0]).into()),
                ("omega_max".into(), fit.fit_window.map(|w| w[1]).into()),
                ("omega_ir".into(), fit.omega_ir.into()),
                ("t_fit".into(), fit.t_fit.into()),
                ("c_fit".into(), fit.c_fit.into()),
                ("residual".into(), fit.residual.into()),
                ("t_ir".into(), fit.t_ir.into()),
                ("t_uv".into(), fit.t_uv.into()),
            ];
            for r in &refs {
                let name = serde_json::to_value(r.kind).ok().and_then(|v| v.as_str().map(String::from));
                pairs.push((format!("reference:{}", name.unwrap_or_default()), r.value.into()));
            }
            if let Some(d) = &fit.diagnostic {
                pairs.push(("diagnostic".into(), d.clone().into()));
            }
            key_value_table(&pairs).to_csv()
        }
    };
    Ok(Output { text, gate_passed: true })
}

pub fn cmd_duality_check(ctx: &Context) -> Result<Output, CliError> {
    if matches!(ctx.traj, Trajectory::CarlitzWilley { .. }) {
        return Err(unsupported("a duality check", &ctx.traj));
    }
    let omega = range_or(ctx.settings.omega_range, Range { lo: 0.05, hi: 10.0, n: 30 }).geometric()?;
    let cos = cos_axis(range_or(ctx.settings.theta_range, Range { lo: 0.05, hi: 3.09, n: 30 }))?;
    let gate = ctx.settings.gate.unwrap_or(1e-9);
    let points: Vec<(f64, f64)> = omega
        .iter()
        .flat_map(|&w| cos.iter().map(move |&c| (w, c)))
        .collect();
    let diffs: Vec<Option<f64>> = points
        .par_iter()
        .map(|&(w, c)| {
            let mode = PhotonMode::new(w, c).ok()?;
            let r = spectral_distribution_recipe(&ctx.traj, mode, &ctx.cfg).ok()?;
            let d = spectral_distribution_closed(&ctx.traj, mode, &ctx.cfg).ok()?;
            // both underflowed to zero: nothing to compare
            if d == 0.0 {
                return Some(if r == 0.0 { 0.0 } else { f64::INFINITY });
            }
            Some((r - d).abs() / d)
        })
        .collect();
    let failed = diffs.iter().filter(|d| d.is_none()).count();
    let worst = diffs.iter().flatten().cloned().fold(0.0, f64::max);
    let gate_passed = worst <= gate && failed == 0;
    let pairs: Vec<(String, Cell)> = vec![
        ("points".into(), points.len().to_string().into()),
        ("failed_points".into(), failed.to_string().into()),
        ("max_rel_diff".into(), worst.into()),
        ("gate".into(), gate.into()),
        ("passed".into(), if gate_passed { "true" } else { "false" }.into()),
    ];
    let text = match ctx.settings.format() {
        Format::Csv => key_value_table(&pairs).to_csv(),
        Format::Json => render_json(&envelope(
            "duality-check",
            &ctx.traj,
            "relative difference, dimensionless",
            &ctx.cfg,
            Map::new(),
            json!({
                "points": points.len(),
                "failed_points": failed,
                "max_rel_diff": worst,
                "gate": gate,
                "passed": gate_passed,
            }),
        )),
    };
    Ok(Output { text, gate_passed })
}
