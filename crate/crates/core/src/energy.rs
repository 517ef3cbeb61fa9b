//! Total radiated energy by every available route, with pairwise agreement.

use serde::{Deserialize, Serialize};

use crate::electron::total_energy_spectral;
use crate::error::{Error, Result};
use crate::kinematics::{energy_routes, total_energy_closed_form, Trajectory};
use crate::mirror::{mirror_total_energy, wd_right_energy_closed};
use crate::numerics::QuadratureConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseDifference {
    pub first: String,
    pub second: String,
    pub relative: f64,
}

/// Energies per unit e² (electron routes) and per unit ħ (mirror routes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub trajectory: Trajectory,
    pub closed_form: f64,
    pub power_integral: f64,
    pub force_integral: f64,
    pub spectral_integral: f64,
    /// Double-sided mirror energy (Davies-Fulling).
    pub mirror_double_integral: Option<f64>,
    /// Right-side mirror energy and its closed form (Walker-Davies).
    pub mirror_right_side: Option<f64>,
    pub mirror_right_side_closed: Option<f64>,
    /// Total minus right side: the left-side share, known only as a residual.
    pub mirror_left_side_residual: Option<f64>,
    pub pairwise_relative_differences: Vec<PairwiseDifference>,
}

impl EnergyReport {
    pub fn max_relative_difference(&self) -> f64 {
        self.pairwise_relative_differences
            .iter()
            .map(|d| d.relative)
            .fold(0.0, f64::max)
    }

    /// Pairs whose relative difference exceeds `gate`.
    pub fn violations(&self, gate: f64) -> Vec<&PairwiseDifference> {
        self.pairwise_relative_differences
            .iter()
            .filter(|d| !(d.relative <= gate))
            .collect()
    }
}

fn relative(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs())
}

fn pairwise(values: &[(&str, f64)]) -> Vec<PairwiseDifference> {
    let mut out = Vec::new();
    for (i, &(na, a)) in values.iter().enumerate() {
        for &(nb, b) in &values[i + 1..] {
            out.push(PairwiseDifference {
                first: na.to_string(),
                second: nb.to_string(),
                relative: relative(a, b),
            });
        }
    }
    out
}

/// Computes the closed form, both time-domain integrals, the spectral double
/// integral and the mirror integral. Spectral and mirror routes run in
/// parallel.
pub fn energy_report(traj: &Trajectory, cfg: &QuadratureConfig) -> Result<EnergyReport> {
    traj.validate()?;
    match traj {
        Trajectory::UniformAcceleration { .. } => {
            return Err(Error::InfiniteEnergy(format!(
                "{}: eternal uniform acceleration radiates without bound",
                traj.describe()
            )))
        }
        Trajectory::CarlitzWilley { .. } => {
            return Err(Error::Unsupported(format!(
                "energy report for {}",
                traj.describe()
            )))
        }
        t if t.is_lightspeed_limit() => return Err(Error::InfiniteEnergy(t.describe())),
        _ => {}
    }
    let closed_form = total_energy_closed_form(traj)?;
    let time = energy_routes(traj, cfg)?;
    let (spectral, mirror) = rayon::join(
        || total_energy_spectral(traj, cfg),
        || mirror_total_energy(traj, cfg),
    );
    let (spectral_integral, mirror) = (spectral?, mirror?);
    let mut values = vec![
        ("closed_form", closed_form),
        ("power_integral", time.power),
        ("force_integral", time.force),
        ("spectral_integral", spectral_integral),
    ];
    let mut report = EnergyReport {
        trajectory: *traj,
        closed_form,
        power_integral: time.power,
        force_integral: time.force,
        spectral_integral,
        mirror_double_integral: None,
        mirror_right_side: None,
        mirror_right_side_closed: None,
        mirror_left_side_residual: None,
        pairwise_relative_differences: Vec::new(),
    };
    match *traj {
        Trajectory::DaviesFulling { .. } => {
            report.mirror_double_integral = Some(mirror);
            values.push(("mirror_double_integral", mirror));
            report.pairwise_relative_differences = pairwise(&values);
        }
        Trajectory::WalkerDavies { a, b } => {
            let right = wd_right_energy_closed(a, b)?;
            report.mirror_right_side = Some(mirror);
            report.mirror_right_side_closed = Some(right);
            report.mirror_left_side_residual = Some(closed_form - mirror);
            let mut diffs = pairwise(&values);
            diffs.extend(pairwise(&[
                ("mirror_right_side", mirror),
                ("mirror_right_side_closed", right),
            ]));
            report.pairwise_relative_differences = diffs;
        }
        _ => unreachable!(),
    }
    Ok(report)
}
