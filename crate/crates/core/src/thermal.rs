//! Temperature extraction: 1+1 Planck fits, Wien-sense UV temperatures, IR/UV
//! consistency verdicts and closed-form reference temperatures.
//!
//! Electron-side temperatures are per unit e² (Stoney scale), mirror-side ones
//! per unit ħ (Kelvin scale). The two are tagged and never converted.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::electron::{frequency_spectrum, spectral_distribution_closed, PhotonMode};
use crate::error::{Error, Result};
use crate::kinematics::Trajectory;
use crate::numerics::special::ln_expm1;
use crate::numerics::QuadratureConfig;

/// Relative IR/UV temperature mismatch below which a spectrum is thermal.
pub const CONSISTENCY_TOL: f64 = 0.10;

/// Samples per fit window.
pub const WINDOW_SAMPLES: usize = 80;

/// How far below its peak (in ln) the spectrum must fall at the top of the window.
const WINDOW_DEPTH: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Thermal,
    WienOnly,
    NotThermal,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Thermal => "thermal",
            Verdict::WienOnly => "wien_only",
            Verdict::NotThermal => "not_thermal",
        }
    }
}

/// Unit convention of a temperature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemperatureScale {
    /// Per unit e², classical electron.
    Stoney,
    /// Per unit ħ, quantum mirror.
    Kelvin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TemperatureKind {
    DfElectron,
    DfMirror,
    WdWien,
    UniformUv,
    CwMirror,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TemperatureReference {
    pub kind: TemperatureKind,
    pub value: f64,
    pub scale: TemperatureScale,
}

/// Result of a Planck fit `f = Cω/(e^{ω/T} - 1)` with IR and UV diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalFit {
    pub trajectory: Option<Trajectory>,
    pub theta: Option<f64>,
    /// `None` when no spectrum was sampled.
    pub fit_window: Option<[f64; 2]>,
    pub t_fit: f64,
    pub c_fit: f64,
    /// rms of `model/data - 1` over the window.
    pub residual: f64,
    /// `-f(0)/(2f'(0))` from the low end; `None` if the spectrum rises there.
    pub t_ir: Option<f64>,
    pub t_uv: Option<f64>,
    pub omega_ir: Option<f64>,
    pub verdict: Verdict,
    pub scale: TemperatureScale,
    pub reference: Option<TemperatureReference>,
    pub diagnostic: Option<String>,
}

/// Exponential tail fit `ln f = ln A + n ln ω - ω/T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WienFit {
    pub temperature: f64,
    pub exponent: f64,
    pub amplitude: f64,
}

fn validate_samples(samples: &[(f64, f64)], min_len: usize) -> Result<()> {
    if samples.len() < min_len {
        return Err(Error::domain(
            "thermal fit",
            format!("need at least {min_len} samples, got {}", samples.len()),
        ));
    }
    for &(w, f) in samples {
        if !(w > 0.0 && w.is_finite()) || !(f > 0.0 && f.is_finite()) {
            return Err(Error::domain(
                "thermal fit",
                format!("samples must be positive and finite, got ({w}, {f})"),
            ));
        }
    }
    if !samples.windows(2).all(|p| p[0].0 < p[1].0) {
        return Err(Error::domain("thermal fit", "frequencies must be strictly increasing"));
    }
    Ok(())
}

/// `x/(1 - e^{-x})`, the derivative of `ln(e^x - 1)` times `x`.
fn x_over_one_minus_exp(x: f64) -> f64 {
    if x < 1e-8 {
        1.0 + 0.5 * x
    } else {
        -x / (-x).exp_m1()
    }
}

struct Projected {
    ln_c: f64,
    sse: f64,
}

/// Best `ln C` and residual sum of squares at fixed `ln T`.
fn project(data: &[(f64, f64)], ln_t: f64) -> Projected {
    let t = ln_t.exp();
    let n = data.len() as f64;
    let base: Vec<f64> = data
        .iter()
        .map(|&(w, lnf)| lnf - w.ln() + ln_expm1(w / t))
        .collect();
    let ln_c = base.iter().sum::<f64>() / n;
    let sse = base.iter().map(|b| (b - ln_c).powi(2)).sum();
    Projected { ln_c, sse }
}

/// Least-squares `ln T` by scan, golden section and Gauss-Newton polish.
fn fit_log_temperature(data: &[(f64, f64)]) -> Result<f64> {
    let lo = data[0].0.ln() - 8.0;
    let hi = data[data.len() - 1].0.ln() + 8.0;
    let n_scan = 400;
    let grid: Vec<f64> = (0..=n_scan)
        .map(|i| lo + (hi - lo) * i as f64 / n_scan as f64)
        .collect();
    let sse: Vec<f64> = grid.iter().map(|&x| project(data, x).sse).collect();
    let best = sse
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap();
    if best == 0 || best == n_scan {
        return Err(Error::Fit(format!(
            "Planck fit has no interior minimum; best ln T on the scan edge at {:.3}",
            grid[best]
        )));
    }
    let (mut a, mut b) = (grid[best - 1], grid[best + 1]);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (project(data, x1).sse, project(data, x2).sse);
    for _ in 0..200 {
        if (b - a).abs() < 1e-10 {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = project(data, x1).sse;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = project(data, x2).sse;
        }
    }
    let mut x = 0.5 * (a + b);
    // Gauss-Newton on the projected residuals
    for _ in 0..50 {
        let t = x.exp();
        let base: Vec<f64> = data
            .iter()
            .map(|&(w, lnf)| lnf - w.ln() + ln_expm1(w / t))
            .collect();
        let jac: Vec<f64> = data
            .iter()
            .map(|&(w, _)| -x_over_one_minus_exp(w / t))
            .collect();
        let n = data.len() as f64;
        let mb = base.iter().sum::<f64>() / n;
        let mj = jac.iter().sum::<f64>() / n;
        let (mut num, mut den) = (0.0, 0.0);
        for (r, j) in base.iter().zip(&jac) {
            num += (j - mj) * (r - mb);
            den += (j - mj) * (j - mj);
        }
        if den == 0.0 {
            break;
        }
        let step = -num / den;
        let before = project(data, x).sse;
        let mut lambda = 1.0;
        while lambda > 1e-6 && project(data, x + lambda * step).sse > before {
            lambda *= 0.5;
        }
        if lambda <= 1e-6 {
            break;
        }
        x += lambda * step;
        if (lambda * step).abs() < 1e-14 {
            break;
        }
    }
    if !x.is_finite() {
        return Err(Error::Fit("Planck fit diverged".into()));
    }
    Ok(x)
}

/// Solves the small dense normal equations `A x = b` by Gaussian elimination
/// with partial pivoting.
fn solve_normal(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..n {
            let m = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= m * a[col][k];
            }
            b[row] -= m * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    Some(x)
}

/// Least squares of `y` against the given basis columns, centred and scaled
/// per column for conditioning.
fn linear_lsq(rows: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let m = rows[0].len();
    let mut ata = vec![vec![0.0; m]; m];
    let mut aty = vec![0.0; m];
    for (r, &yi) in rows.iter().zip(y) {
        for i in 0..m {
            aty[i] += r[i] * yi;
            for j in 0..m {
                ata[i][j] += r[i] * r[j];
            }
        }
    }
    solve_normal(ata, aty)
}

/// Tail fit `ln f = ln A + n ln ω - ω/T` over the top decade of the samples.
pub fn wien_fit(samples: &[(f64, f64)]) -> Result<WienFit> {
    validate_samples(samples, 3)?;
    let w_max = samples[samples.len() - 1].0;
    let tail: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|&(w, _)| w >= 0.1 * w_max)
        .collect();
    if tail.len() < 3 {
        return Err(Error::Fit("fewer than three samples in the top decade".into()));
    }
    // ω scaled by w_max keeps the normal equations well conditioned
    let rows: Vec<Vec<f64>> = tail
        .iter()
        .map(|&(w, _)| vec![1.0, (w / w_max).ln(), -w / w_max])
        .collect();
    let y: Vec<f64> = tail.iter().map(|&(_, f)| f.ln()).collect();
    let x = linear_lsq(&rows, &y).ok_or_else(|| Error::Fit("singular Wien fit".into()))?;
    if !(x[2] > 0.0) {
        return Err(Error::Fit(format!(
            "tail is not exponentially decaying (fitted 1/T = {:e})",
            x[2] / w_max
        )));
    }
    let exponent = x[1];
    Ok(WienFit {
        temperature: w_max / x[2],
        exponent,
        amplitude: (x[0] - exponent * w_max.ln()).exp(),
    })
}

/// Wien-sense temperature from the exponential tail.
pub fn uv_temperature(samples: &[(f64, f64)]) -> Result<f64> {
    wien_fit(samples).map(|w| w.temperature)
}

/// `-f(0)/(2f'(0))` from a straight line through the samples with
/// `ω ≤ 2ω_min`; for `Cω/(e^{ω/T} - 1) ≈ CT - Cω/2` this is `T`.
pub fn ir_temperature(samples: &[(f64, f64)]) -> Result<Option<f64>> {
    validate_samples(samples, 2)?;
    let w_min = samples[0].0;
    let mut head: Vec<(f64, f64)> = samples
        .iter()
        .copied()
        .filter(|&(w, _)| w <= 2.0 * w_min)
        .collect();
    if head.len() < 3 {
        head = samples.iter().copied().take(3).collect();
    }
    let rows: Vec<Vec<f64>> = head.iter().map(|&(w, _)| vec![1.0, w / w_min]).collect();
    let y: Vec<f64> = head.iter().map(|&(_, f)| f).collect();
    let x = linear_lsq(&rows, &y).ok_or_else(|| Error::Fit("singular IR fit".into()))?;
    let slope = x[1] / w_min;
    if !(slope < 0.0) || !(x[0] > 0.0) {
        return Ok(None);
    }
    Ok(Some(-x[0] / (2.0 * slope)))
}

fn consistent(t_ir: Option<f64>, t_uv: Option<f64>) -> bool {
    match (t_ir, t_uv) {
        (Some(ir), Some(uv)) => ((ir - uv) / uv).abs() < CONSISTENCY_TOL,
        _ => false,
    }
}

/// Least-squares fit of `Cω/(e^{ω/T} - 1)` in log space, with IR and UV
/// temperature estimates. The verdict is thermal when those agree within
/// [`CONSISTENCY_TOL`] and not thermal otherwise.
pub fn fit_planck_1p1(samples: &[(f64, f64)]) -> Result<ThermalFit> {
    validate_samples(samples, 8)?;
    let (w_min, w_max) = (samples[0].0, samples[samples.len() - 1].0);
    if w_max < 10.0 * w_min {
        return Err(Error::domain("fit_planck_1p1", "samples must span at least a decade"));
    }
    let data: Vec<(f64, f64)> = samples.iter().map(|&(w, f)| (w, f.ln())).collect();
    let ln_t = fit_log_temperature(&data)?;
    let ln_c = project(&data, ln_t).ln_c;
    let (t, c) = (ln_t.exp(), ln_c.exp());
    let residual = (samples
        .iter()
        .map(|&(w, f)| {
            let model = (ln_c + w.ln() - ln_expm1(w / t)).exp();
            (model / f - 1.0).powi(2)
        })
        .sum::<f64>()
        / samples.len() as f64)
        .sqrt();
    let t_ir = ir_temperature(samples)?;
    let t_uv = uv_temperature(samples).ok();
    let verdict = if consistent(t_ir, t_uv) {
        Verdict::Thermal
    } else {
        Verdict::NotThermal
    };
    Ok(ThermalFit {
        trajectory: None,
        theta: None,
        fit_window: Some([w_min, w_max]),
        t_fit: t,
        c_fit: c,
        residual,
        t_ir,
        t_uv,
        omega_ir: None,
        verdict,
        scale: TemperatureScale::Stoney,
        reference: None,
        diagnostic: None,
    })
}

fn mismatch(kind: TemperatureKind, traj: &Trajectory) -> Error {
    Error::Unsupported(format!("{kind:?} temperature is not defined for {}", traj.describe()))
}

/// Closed-form reference temperature. `theta` is used by the uniform UV kind.
///
/// The uniform UV value is `κ/(2 sinθ)`, the decay rate of
/// `ω²K₁(ω sinθ/κ)² ∝ ω e^{-2ω sinθ/κ}`.
pub fn reference_temperature(
    kind: TemperatureKind,
    traj: &Trajectory,
    theta: Option<f64>,
) -> Result<TemperatureReference> {
    traj.validate()?;
    let (value, scale) = match (kind, *traj) {
        (TemperatureKind::DfElectron, Trajectory::DaviesFulling { s, kappa }) => {
            if s >= 1.0 {
                return Err(Error::Pole {
                    func: "reference_temperature",
                    at: s,
                });
            }
            (kappa / (PI * (1.0 - s)), TemperatureScale::Stoney)
        }
        (TemperatureKind::DfMirror, Trajectory::DaviesFulling { kappa, .. }) => {
            (kappa / (2.0 * PI), TemperatureScale::Kelvin)
        }
        (TemperatureKind::WdWien, Trajectory::WalkerDavies { a, .. }) => {
            (1.0 / (2.0 * a), TemperatureScale::Stoney)
        }
        (TemperatureKind::UniformUv, Trajectory::UniformAcceleration { kappa }) => {
            let theta = theta.ok_or_else(|| {
                Error::InvalidParameter("uniform UV temperature needs an angle".into())
            })?;
            let sin = theta.sin();
            if !(sin > 0.0) {
                return Err(Error::Pole {
                    func: "reference_temperature",
                    at: theta,
                });
            }
            (kappa / (2.0 * sin), TemperatureScale::Stoney)
        }
        (TemperatureKind::CwMirror, Trajectory::CarlitzWilley { kappa }) => {
            (kappa / (2.0 * PI), TemperatureScale::Kelvin)
        }
        _ => return Err(mismatch(kind, traj)),
    };
    Ok(TemperatureReference { kind, value, scale })
}

/// Samples `f` on a geometric window from `lo` upward, doubling the top until
/// `ln f` has fallen [`WINDOW_DEPTH`] below its largest value.
fn sample_window<F>(f: F, lo: f64) -> Result<Vec<(f64, f64)>>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let grid = |hi: f64| -> Vec<f64> {
        (0..WINDOW_SAMPLES)
            .map(|i| lo * (hi / lo).powf(i as f64 / (WINDOW_SAMPLES - 1) as f64))
            .collect()
    };
    let mut hi = 10.0 * lo;
    for _ in 0..60 {
        let omegas = grid(hi);
        let values = omegas.par_iter().map(|&w| f(w)).collect::<Result<Vec<_>>>()?;
        let peak = values.iter().cloned().fold(0.0, f64::max);
        let last = values[values.len() - 1];
        if peak > 0.0 && (last <= 0.0 || last.ln() < peak.ln() - WINDOW_DEPTH) {
            // drop underflowed tail points; they carry no information
            return Ok(omegas
                .into_iter()
                .zip(values)
                .filter(|&(_, v)| v > 1e-300)
                .collect());
        }
        hi *= 2.0;
    }
    Err(Error::Fit("spectrum does not decay within the search range".into()))
}

/// Default observation angle: close to the receding direction, where the
/// redshifted spectrum is most nearly Planckian.
pub fn default_theta(traj: &Trajectory) -> f64 {
    match traj {
        Trajectory::UniformAcceleration { .. } => 0.1,
        _ => 0.01,
    }
}

fn angular_samples(traj: &Trajectory, theta: f64, lo: f64, cfg: &QuadratureConfig) -> Result<Vec<(f64, f64)>> {
    let c = theta.cos();
    let sin_sq = theta.sin().powi(2);
    let divide = matches!(traj, Trajectory::DaviesFulling { .. });
    sample_window(
        |w| {
            let v = spectral_distribution_closed(traj, PhotonMode::new(w, c)?, cfg)?;
            Ok(if divide { v / sin_sq } else { v })
        },
        lo,
    )
}

/// Samples the spectrum of `traj`, fits it and classifies it.
///
/// - Davies-Fulling: `dI/dΩ / sin²θ` at `θ`, from `2ω_IR`, `ω_IR = κ/(1+s)`.
/// - uniform acceleration: `dI/dΩ` at `θ`.
/// - Walker-Davies: the angle-integrated `I(ω)`; `θ` is not used.
/// - Carlitz-Willey: no spectrum is sampled; the proper jerk vanishes and the
///   verdict is thermal at `κ/2π` per ħ.
///
/// A spectrum whose IR and UV temperatures disagree is `wien_only` if its UV
/// temperature stays finite toward the receding direction (`θ → θ/4`
/// changes it by less than a factor 2) and `not_thermal` otherwise. For
/// `wien_only`, `t_fit` and `c_fit` hold the Wien-tail temperature and
/// amplitude.
pub fn thermality_verdict(
    traj: &Trajectory,
    theta: Option<f64>,
    cfg: &QuadratureConfig,
) -> Result<ThermalFit> {
    traj.validate()?;
    if let Trajectory::CarlitzWilley { kappa } = *traj {
        let t = kappa / (2.0 * PI);
        return Ok(ThermalFit {
            trajectory: Some(*traj),
            theta: None,
            fit_window: None,
            t_fit: t,
            c_fit: 0.0,
            residual: 0.0,
            t_ir: Some(t),
            t_uv: Some(t),
            omega_ir: None,
            verdict: Verdict::Thermal,
            scale: TemperatureScale::Kelvin,
            reference: Some(reference_temperature(TemperatureKind::CwMirror, traj, None)?),
            diagnostic: Some("zero proper jerk: alpha = 1/tau, constant peel kappa".into()),
        });
    }
    if traj.is_lightspeed_limit() {
        return Err(Error::Unsupported(
            "thermality of the s = 1 Davies-Fulling spectrum: T diverges; use s < 1".into(),
        ));
    }
    let theta = match traj {
        Trajectory::WalkerDavies { .. } => None,
        _ => Some(theta.unwrap_or_else(|| default_theta(traj))),
    };
    if let Some(th) = theta {
        if !(th > 0.0 && th < PI) {
            return Err(Error::InvalidParameter(format!(
                "observation angle must lie in (0, π), got {th}"
            )));
        }
    }
    let (samples, omega_ir, reference) = match *traj {
        Trajectory::DaviesFulling { s, kappa } => {
            let omega_ir = kappa / (1.0 + s);
            let th = theta.unwrap();
            let samples = angular_samples(traj, th, 2.0 * omega_ir, cfg)?;
            let reference = reference_temperature(TemperatureKind::DfElectron, traj, None)?;
            (samples, Some(omega_ir), reference)
        }
        Trajectory::UniformAcceleration { kappa } => {
            let th = theta.unwrap();
            let samples = angular_samples(traj, th, 1e-3 * kappa / th.sin(), cfg)?;
            let reference = reference_temperature(TemperatureKind::UniformUv, traj, Some(th))?;
            (samples, None, reference)
        }
        Trajectory::WalkerDavies { a, .. } => {
            let samples = sample_window(|w| frequency_spectrum(traj, w, cfg), 1e-2 / a)?;
            let reference = reference_temperature(TemperatureKind::WdWien, traj, None)?;
            (samples, None, reference)
        }
        Trajectory::CarlitzWilley { .. } => unreachable!(),
    };
    let mut fit = fit_planck_1p1(&samples)?;
    fit.trajectory = Some(*traj);
    fit.theta = theta;
    fit.omega_ir = omega_ir;
    fit.reference = Some(reference);
    if fit.verdict == Verdict::Thermal {
        return Ok(fit);
    }
    let wien = wien_fit(&samples)?;
    let diverges = match (*traj, theta) {
        (Trajectory::WalkerDavies { .. }, _) | (_, None) => false,
        (_, Some(th)) => {
            let lo = samples[0].0;
            let narrow = angular_samples(traj, 0.25 * th, lo, cfg)?;
            let t_narrow = uv_temperature(&narrow)?;
            let ratio = t_narrow / wien.temperature;
            fit.diagnostic = Some(format!(
                "T_uv(theta/4)/T_uv(theta) = {ratio:.6}; T_uv*sin(theta) = {:.6}",
                wien.temperature * th.sin()
            ));
            ratio > 2.0
        }
    };
    if diverges {
        fit.verdict = Verdict::NotThermal;
    } else {
        fit.verdict = Verdict::WienOnly;
        fit.t_fit = wien.temperature;
        fit.c_fit = wien.amplitude;
        if fit.diagnostic.is_none() {
            fit.diagnostic = Some(format!("Wien tail exponent n = {:.6}", wien.exponent));
        }
    }
    Ok(fit)
}

/// Late-time `(α² + α̇)/α²`, the normalised distance from zero proper jerk.
pub fn late_time_jerk_ratio(traj: &Trajectory) -> Result<f64> {
    use crate::kinematics::{state_at, state_at_proper_time};
    traj.validate()?;
    let st = match *traj {
        Trajectory::CarlitzWilley { kappa } => state_at_proper_time(traj, 1e3 / kappa)?,
        Trajectory::DaviesFulling { s, kappa } if s >= 1.0 => {
            state_at_proper_time(traj, PI / (2.0 * kappa) * (1.0 - 1e-6))?
        }
        Trajectory::DaviesFulling { kappa, .. } | Trajectory::UniformAcceleration { kappa } => {
            state_at(traj, 20.0 / kappa)?
        }
        Trajectory::WalkerDavies { a, .. } => state_at(traj, 50.0 * a)?,
    };
    Ok((st.alpha * st.alpha + st.alpha_dot) / (st.alpha * st.alpha))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planck(c: f64, t: f64, lo: f64, hi: f64, n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let w = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
                (w, c * w / (w / t).exp_m1())
            })
            .collect()
    }

    #[test]
    fn exact_planck_round_trip() {
        let fit = fit_planck_1p1(&planck(1.0, 2.0, 0.02, 60.0, 60)).unwrap();
        assert!((fit.t_fit / 2.0 - 1.0).abs() < 1e-6, "{}", fit.t_fit);
        assert!((fit.c_fit - 1.0).abs() < 1e-6);
        assert!(fit.residual < 1e-8);
        assert_eq!(fit.verdict, Verdict::Thermal);
    }

    #[test]
    fn rejects_bad_samples() {
        let mut s = planck(1.0, 1.0, 0.1, 10.0, 10);
        s[3].1 = 0.0;
        assert!(matches!(fit_planck_1p1(&s), Err(Error::Domain { .. })));
        let narrow = planck(1.0, 1.0, 1.0, 5.0, 10);
        assert!(fit_planck_1p1(&narrow).is_err());
        assert!(fit_planck_1p1(&planck(1.0, 1.0, 0.1, 10.0, 5)).is_err());
    }

    #[test]
    fn rising_tail_is_a_fit_error() {
        let s: Vec<(f64, f64)> = (1..20).map(|i| (i as f64, (i as f64).powi(2))).collect();
        assert!(matches!(uv_temperature(&s), Err(Error::Fit(_))));
    }

    #[test]
    fn wien_fit_recovers_power_and_rate() {
        let s: Vec<(f64, f64)> = (1..=40)
            .map(|i| {
                let w = 0.5 * i as f64;
                (w, 3.0 * w * w * (-w / 0.7).exp())
            })
            .collect();
        let fit = wien_fit(&s).unwrap();
        assert!((fit.temperature - 0.7).abs() < 1e-10);
        assert!((fit.exponent - 2.0).abs() < 1e-9);
        assert!((fit.amplitude - 3.0).abs() < 1e-8);
    }

    #[test]
    fn reference_values() {
        let df = Trajectory::davies_fulling(0.5, 2.0 * PI).unwrap();
        let m = reference_temperature(TemperatureKind::DfMirror, &df, None).unwrap();
        assert!((m.value - 1.0).abs() < 1e-15);
        assert_eq!(m.scale, TemperatureScale::Kelvin);
        let e = reference_temperature(TemperatureKind::DfElectron, &df, None).unwrap();
        assert!((e.value - 4.0).abs() < 1e-14);
        let small = Trajectory::davies_fulling(1e-9, 1.0).unwrap();
        let e0 = reference_temperature(TemperatureKind::DfElectron, &small, None).unwrap().value;
        let m0 = reference_temperature(TemperatureKind::DfMirror, &small, None).unwrap().value;
        assert!((m0 / e0 - 0.5).abs() < 1e-8);
        let u = Trajectory::uniform_acceleration(1.0).unwrap();
        assert!(reference_temperature(TemperatureKind::UniformUv, &u, Some(0.0)).is_err());
        assert!(reference_temperature(TemperatureKind::WdWien, &u, None).is_err());
    }

    #[test]
    fn carlitz_willey_thermal_without_spectrum() {
        let cfg = QuadratureConfig::default();
        let fit = thermality_verdict(&Trajectory::carlitz_willey(2.0 * PI).unwrap(), None, &cfg).unwrap();
        assert_eq!(fit.verdict, Verdict::Thermal);
        assert_eq!(fit.t_fit, 1.0);
        assert_eq!(fit.scale, TemperatureScale::Kelvin);
    }

    #[test]
    fn normal_equations_solve() {
        let x = solve_normal(vec![vec![2.0, 1.0], vec![1.0, 3.0]], vec![3.0, 5.0]).unwrap();
        assert!((x[0] - 0.8).abs() < 1e-15 && (x[1] - 1.4).abs() < 1e-15);
    }
}
