//! Photon spectral distributions `dI/dΩ` of a point charge on the
//! trajectories, per unit e².
//!
//! Each distribution is available through the mirror map
//! `dI/dΩ = ω²/4π |β^R_pq|²`, `p = ω(1+cosθ)/2`, `q = ω(1-cosθ)/2`, through a
//! closed form, and (Davies-Fulling, uniform) through a regulated numerical
//! Fourier transform of the current.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{state_at, Trajectory};
use crate::mirror::{self, ModePair};
use crate::numerics::special::{ln_abs_gamma_imag_sq, ln_sinh, ln_sinhc};
use crate::numerics::{
    bessel_k_complex_order_scaled, bessel_k_real, integrate_1d, integrate_2d_iterated,
    ComplexValue, Domain, QuadratureConfig,
};
use crate::numerics::quadrature::adaptive;

/// Photon frequency and direction relative to the line of motion.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonMode {
    pub omega: f64,
    pub cos_theta: f64,
}

impl PhotonMode {
    pub fn new(omega: f64, cos_theta: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "photon frequency must be positive, got {omega}"
            )));
        }
        if !(cos_theta.abs() <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cos(theta) must lie in [-1, 1], got {cos_theta}"
            )));
        }
        Ok(PhotonMode { omega, cos_theta })
    }

    pub fn from_angle(omega: f64, theta: f64) -> Result<Self> {
        PhotonMode::new(omega, theta.cos())
    }

    /// `k_z = ω cosθ`
    pub fn k_z(&self) -> f64 {
        self.omega * self.cos_theta
    }

    /// `sin²θ = (1 - cosθ)(1 + cosθ)`, accurate near the axis.
    pub fn sin_sq(&self) -> f64 {
        (1.0 - self.cos_theta) * (1.0 + self.cos_theta)
    }
}

/// How a spectral value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectralMethod {
    Recipe,
    ClosedForm,
    FourierOracle,
}

/// `p = ω(1 + cosθ)/2`, `q = ω(1 - cosθ)/2`. At `cosθ = ±1` one frequency is
/// zero and the pair is flagged as a boundary.
pub fn mode_map(mode: PhotonMode) -> ModePair {
    ModePair {
        p: 0.5 * mode.omega * (1.0 + mode.cos_theta),
        q: 0.5 * mode.omega * (1.0 - mode.cos_theta),
    }
}

/// `dI/dΩ` from the right-side mirror betas.
pub fn spectral_distribution_recipe(
    traj: &Trajectory,
    mode: PhotonMode,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    traj.validate()?;
    let pair = mode_map(mode);
    let beta = match *traj {
        Trajectory::DaviesFulling { s, kappa } => mirror::beta_sq_df_right(s, kappa, pair)?,
        Trajectory::WalkerDavies { a, b } => mirror::beta_sq_wd_right(a, b, pair, cfg)?,
        Trajectory::UniformAcceleration { kappa } => mirror::beta_sq_uniform_right(kappa, pair)?,
        Trajectory::CarlitzWilley { .. } => return Err(unsupported_spectrum(traj)),
    };
    Ok(mode.omega * mode.omega / (4.0 * PI) * beta)
}

fn unsupported_spectrum(traj: &Trajectory) -> Error {
    Error::Unsupported(format!("no spectrum is defined for {}", traj.describe()))
}

/// Davies-Fulling closed form
/// `s sin²θ / (8π² cosθ (1 - s²cos²θ)) (ω/κ) [n(1 - s cosθ) - n(1 + s cosθ)]`,
/// `n(x) = 1/(e^{πωx/κ} - 1)`.
///
/// Evaluated as a product of `sinhc` and `sinh` factors, which is regular at
/// `cosθ = 0`. At `s = 1` and `|cosθ| = 1` the distribution has a pole.
pub fn spectral_distribution_df(s: f64, kappa: f64, mode: PhotonMode) -> Result<f64> {
    Trajectory::DaviesFulling { s, kappa }.validate()?;
    let (w, c) = (mode.omega, mode.cos_theta);
    let sin_sq = mode.sin_sq();
    let one_minus = 1.0 - s * c.abs();
    if one_minus <= 0.0 {
        return Err(Error::Pole {
            func: "spectral_distribution_df",
            at: c,
        });
    }
    if sin_sq == 0.0 {
        return Ok(0.0);
    }
    let one_plus = 1.0 + s * c.abs();
    let x = PI * w / kappa;
    let ln = (s * sin_sq / (8.0 * PI * PI * one_minus * one_plus)).ln()
        + (w / kappa).ln()
        + (x * s).ln()
        + ln_sinhc(x * s * c)
        - (2.0f64).ln()
        - ln_sinh(0.5 * x * one_minus)
        - ln_sinh(0.5 * x * one_plus);
    Ok(ln.exp())
}

/// Walker-Davies closed form
/// `ω²AB(1 - cosθ)/4π³ sinh(πω(1+cosθ)B/2) |K_{-1/2 + iω(1+cosθ)B/2}(ωA)|²`.
pub fn spectral_distribution_wd(
    a: f64,
    b: f64,
    mode: PhotonMode,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    Trajectory::WalkerDavies { a, b }.validate()?;
    let (w, c) = (mode.omega, mode.cos_theta);
    if c == 1.0 || c == -1.0 {
        return Ok(0.0);
    }
    let order = 0.5 * w * (1.0 + c) * b;
    let k = bessel_k_complex_order_scaled(-0.5, order, w * a, cfg)?;
    let ln_rest = ln_sinh(PI * order) - 2.0 * w * a;
    Ok(w * w * a * b * (1.0 - c) / (4.0 * PI.powi(3)) * k.norm_sqr() * ln_rest.exp())
}

/// `B ≪ A` form `ωB(1 - cosθ)/8π² sinh(πω(1+cosθ)B/2) e^{-2Aω}`.
pub fn spectral_distribution_wd_small_b(a: f64, b: f64, mode: PhotonMode) -> Result<f64> {
    Trajectory::WalkerDavies { a, b }.validate()?;
    let (w, c) = (mode.omega, mode.cos_theta);
    if c == 1.0 || c == -1.0 {
        return Ok(0.0);
    }
    let ln = ln_sinh(0.5 * PI * w * (1.0 + c) * b) - 2.0 * a * w;
    Ok(w * b * (1.0 - c) / (8.0 * PI * PI) * ln.exp())
}

/// Uniform acceleration, `ω²/(4π³κ²) K₁(ω sinθ/κ)²`. Poles on the axis.
pub fn spectral_distribution_uniform(kappa: f64, mode: PhotonMode) -> Result<f64> {
    Trajectory::UniformAcceleration { kappa }.validate()?;
    let sin_theta = mode.sin_sq().sqrt();
    if sin_theta == 0.0 {
        return Err(Error::Pole {
            func: "spectral_distribution_uniform",
            at: mode.cos_theta,
        });
    }
    let k1 = bessel_k_real(1.0, mode.omega * sin_theta / kappa)?;
    Ok(mode.omega * mode.omega / (4.0 * PI.powi(3) * kappa * kappa) * k1 * k1)
}

/// Closed-form `dI/dΩ` for any trajectory with a spectrum.
pub fn spectral_distribution_closed(
    traj: &Trajectory,
    mode: PhotonMode,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    match *traj {
        Trajectory::DaviesFulling { s, kappa } => spectral_distribution_df(s, kappa, mode),
        Trajectory::WalkerDavies { a, b } => spectral_distribution_wd(a, b, mode, cfg),
        Trajectory::UniformAcceleration { kappa } => spectral_distribution_uniform(kappa, mode),
        Trajectory::CarlitzWilley { .. } => Err(unsupported_spectrum(traj)),
    }
}

/// `dI/dΩ` by the requested method.
pub fn spectral_distribution(
    traj: &Trajectory,
    mode: PhotonMode,
    method: SpectralMethod,
    cfg: &QuadratureConfig,
) -> Result<f64> {
    match method {
        SpectralMethod::Recipe => spectral_distribution_recipe(traj, mode, cfg),
        SpectralMethod::ClosedForm => spectral_distribution_closed(traj, mode, cfg),
        SpectralMethod::FourierOracle => {
            let j = fourier_current(traj, mode, cfg)?;
            Ok(spectral_from_current(mode, j.norm_sqr()))
        }
    }
}

/// `dI/dΩ = ω²/(16π³) sin²θ |j_z|²`.
pub fn spectral_from_current(mode: PhotonMode, j_sq: f64) -> f64 {
    mode.omega * mode.omega / (16.0 * PI.powi(3)) * mode.sin_sq() * j_sq
}

/// Closed-form `|j_z|²` per unit charge.
///
/// Davies-Fulling: `(ω/2κk_z)² |B(-i(ω - s k_z)/2κ, i(ω + s k_z)/2κ)|²`;
/// uniform: `4 K₁(ω sinθ/κ)² / (κ² sin²θ)`.
pub fn fourier_current_sq_closed(traj: &Trajectory, mode: PhotonMode) -> Result<f64> {
    traj.validate()?;
    let (w, k) = (mode.omega, mode.k_z());
    match *traj {
        Trajectory::DaviesFulling { s, kappa } => {
            let ia = -(w - s * k) / (2.0 * kappa);
            let ib = (w + s * k) / (2.0 * kappa);
            // 1/|Γ(i s k/κ)|² = (s k/κ)² sinhc(π s k/κ) absorbs the 1/k²
            let ln = 2.0 * (w * s / (2.0 * kappa * kappa)).ln()
                + ln_sinhc(PI * s * k / kappa)
                + ln_abs_gamma_imag_sq(ia)?
                + ln_abs_gamma_imag_sq(ib)?;
            Ok(ln.exp())
        }
        Trajectory::UniformAcceleration { kappa } => {
            let sin_sq = mode.sin_sq();
            if sin_sq == 0.0 {
                return Err(Error::Pole {
                    func: "fourier_current_sq_closed",
                    at: mode.cos_theta,
                });
            }
            let k1 = bessel_k_real(1.0, w * sin_sq.sqrt() / kappa)?;
            Ok(4.0 * k1 * k1 / (kappa * kappa * sin_sq))
        }
        _ => Err(Error::Unsupported(format!(
            "no closed-form current for {}",
            traj.describe()
        ))),
    }
}

/// Regulator values for the Fourier-current oracle; the limit `ε → 0` is
/// taken by polynomial extrapolation through all of them.
pub const REGULATORS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Where the regulated integrand is below `e^{-39}` of its peak.
const REGULATOR_CUTOFF: f64 = 39.0;

/// Position and velocity at coordinate time `t`, in closed form.
fn worldline(traj: &Trajectory, t: f64) -> Result<(f64, f64)> {
    match *traj {
        Trajectory::DaviesFulling { s, kappa } => {
            let x = kappa * t.abs();
            let ln_cosh = x + (-2.0 * x).exp().ln_1p() - std::f64::consts::LN_2;
            Ok((-s / kappa * ln_cosh, -s * (kappa * t).tanh()))
        }
        Trajectory::UniformAcceleration { kappa } => {
            let kt = kappa * t;
            let root = kt.hypot(1.0);
            Ok((-kt * kt / (1.0 + root) / kappa, -kt / root))
        }
        _ => state_at(traj, t).map(|s| (s.z, s.v)),
    }
}

/// `∫ v e^{-i(ωt - k_z z)} e^{-ε|t|} dt` over the whole line.
pub fn regulated_current(
    traj: &Trajectory,
    mode: PhotonMode,
    eps: f64,
    cfg: &QuadratureConfig,
) -> Result<ComplexValue> {
    if !(eps > 0.0) {
        return Err(Error::domain("regulated_current", "regulator must be positive"));
    }
    let (w, k) = (mode.omega, mode.k_z());
    let t_max = REGULATOR_CUTOFF / eps;
    // chunks of a few periods of the slowest asymptotic phase
    let speed = match *traj {
        Trajectory::DaviesFulling { s, .. } => s,
        _ => 1.0,
    };
    let slow = (w * (1.0 - speed * mode.cos_theta.abs())).max(1e-3 * w);
    let chunk = (8.0 * PI / slow).min(t_max);
    let failure = std::cell::RefCell::new(None);
    let integrand = |t: f64| -> Complex64 {
        match worldline(traj, t) {
            Ok((z, v)) => {
                let phase = -(w * t - k * z);
                Complex64::from_polar(v * (-eps * t.abs()).exp(), phase)
            }
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        }
    };
    let mut total = Complex64::new(0.0, 0.0);
    let n = (t_max / chunk).ceil() as usize;
    // |v| ≤ 1, so the chunk length bounds each chunk's magnitude
    let chunk_cfg = cfg.with_abs_tol(cfg.abs_tol.max(0.1 * cfg.rel_tol * chunk));
    for i in 0..n {
        let lo = i as f64 * chunk;
        let hi = ((i + 1) as f64 * chunk).min(t_max);
        total += adaptive(&integrand, lo, hi, &chunk_cfg)?.value;
        total += adaptive(&integrand, -hi, -lo, &chunk_cfg)?.value;
    }
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(total)
}

/// Neville extrapolation of samples `(x_i, y_i)` to `x = 0`.
pub fn extrapolate_to_zero(xs: &[f64], ys: &[ComplexValue]) -> ComplexValue {
    let mut p: Vec<ComplexValue> = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i] * xs[i + m] - p[i + 1] * xs[i]) / (xs[i + m] - xs[i]);
        }
    }
    p[0]
}

/// Fourier transform of the current per unit charge, by regulated
/// quadrature extrapolated to zero regulator.
pub fn fourier_current(
    traj: &Trajectory,
    mode: PhotonMode,
    cfg: &QuadratureConfig,
) -> Result<ComplexValue> {
    traj.validate()?;
    match traj {
        Trajectory::DaviesFulling { .. } | Trajectory::UniformAcceleration { .. } => {}
        _ => {
            return Err(Error::Unsupported(format!(
                "Fourier-current oracle is implemented for Davies-Fulling and uniform acceleration, not {}",
                traj.describe()
            )))
        }
    }
    let values = REGULATORS
        .par_iter()
        .map(|&eps| regulated_current(traj, mode, eps, cfg))
        .collect::<Result<Vec<_>>>()?;
    let j = extrapolate_to_zero(&REGULATORS, &values);
    if !(j.re.is_finite() && j.im.is_finite()) {
        return Err(Error::Numerical {
            func: "fourier_current",
            detail: "regulator extrapolation produced a non-finite value".into(),
        });
    }
    Ok(j)
}

/// Natural frequency scale of the spectrum at a given direction, used to
/// scale the frequency integrals.
fn omega_scale(traj: &Trajectory, cos_theta: f64) -> f64 {
    match *traj {
        Trajectory::DaviesFulling { s, kappa } => kappa / (1.0 - s * cos_theta.abs()).max(1e-300),
        Trajectory::WalkerDavies { a, .. } => 1.0 / a,
        Trajectory::UniformAcceleration { kappa } => {
            let sin = ((1.0 - cos_theta) * (1.0 + cos_theta)).sqrt();
            kappa / sin.max(1e-300)
        }
        Trajectory::CarlitzWilley { kappa } => kappa,
    }
}

/// Angular energy distribution `dE/dΩ = ∫_0^∞ dω dI/dΩ`.
pub fn angular_energy(traj: &Trajectory, theta: f64, cfg: &QuadratureConfig) -> Result<f64> {
    traj.validate()?;
    if matches!(traj, Trajectory::CarlitzWilley { .. }) {
        return Err(unsupported_spectrum(traj));
    }
    let c = theta.cos();
    if traj.is_lightspeed_limit() && c.abs() == 1.0 {
        return Err(Error::Pole {
            func: "angular_energy",
            at: c,
        });
    }
    let scale = omega_scale(traj, c);
    let kcfg = cfg.inner();
    let failure = std::cell::RefCell::new(None);
    let est = integrate_1d(
        |x| {
            let mode = PhotonMode {
                omega: scale * x,
                cos_theta: c,
            };
            if x == 0.0 {
                return 0.0;
            }
            match spectral_distribution_closed(traj, mode, &kcfg) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        },
        Domain::zero_to_infinity(),
        cfg,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(est.value * scale)
}

/// Angle-integrated spectrum `I(ω) = 2π ∫_{-1}^{1} d(cosθ) dI/dΩ`.
pub fn frequency_spectrum(traj: &Trajectory, omega: f64, cfg: &QuadratureConfig) -> Result<f64> {
    traj.validate()?;
    match traj {
        Trajectory::UniformAcceleration { .. } => {
            return Err(Error::InfiniteSpectrum(traj.describe()))
        }
        Trajectory::CarlitzWilley { .. } => return Err(unsupported_spectrum(traj)),
        t if t.is_lightspeed_limit() => return Err(Error::InfiniteSpectrum(t.describe())),
        _ => {}
    }
    PhotonMode::new(omega, 0.0)?;
    let kcfg = cfg.inner();
    let failure = std::cell::RefCell::new(None);
    let est = integrate_1d(
        |c| match spectral_distribution_closed(traj, PhotonMode { omega, cos_theta: c }, &kcfg) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        Domain::Finite(-1.0, 1.0),
        cfg,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(2.0 * PI * est.value)
}

/// `I(ω) ≈ B²ω² e^{-2Aω}/6`, the small-`B/A` Walker-Davies spectrum.
pub fn frequency_spectrum_wd_small_b(a: f64, b: f64, omega: f64) -> Result<f64> {
    Trajectory::WalkerDavies { a, b }.validate()?;
    Ok(b * b * omega * omega * (-2.0 * a * omega).exp() / 6.0)
}

/// Tightest relative tolerance used by [`total_energy_spectral`].
pub const SPECTRAL_ENERGY_REL_TOL_FLOOR: f64 = 1e-8;

/// Total radiated energy `∫dΩ ∫dω dI/dΩ` from the closed-form spectrum.
///
/// The requested relative tolerance is clamped to at least
/// [`SPECTRAL_ENERGY_REL_TOL_FLOOR`].
pub fn total_energy_spectral(traj: &Trajectory, cfg: &QuadratureConfig) -> Result<f64> {
    traj.validate()?;
    match traj {
        Trajectory::UniformAcceleration { .. } => {
            return Err(Error::InfiniteEnergy(traj.describe()))
        }
        Trajectory::CarlitzWilley { .. } => return Err(unsupported_spectrum(traj)),
        t if t.is_lightspeed_limit() => return Err(Error::InfiniteEnergy(t.describe())),
        _ => {}
    }
    // two nested levels over a special-function kernel cannot reach round-off
    let cfg = &cfg.with_rel_tol(cfg.rel_tol.max(SPECTRAL_ENERGY_REL_TOL_FLOOR));
    let kcfg = cfg.inner().inner();
    let failure = std::cell::RefCell::new(None);
    // outer cosθ, inner x = ω / scale(cosθ)
    let est = integrate_2d_iterated(
        |c, x| {
            if x == 0.0 {
                return 0.0;
            }
            let scale = omega_scale(traj, c);
            let mode = PhotonMode {
                omega: scale * x,
                cos_theta: c,
            };
            match spectral_distribution_closed(traj, mode, &kcfg) {
                Ok(v) => v * scale,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    0.0
                }
            }
        },
        Domain::Finite(-1.0, 1.0),
        Domain::zero_to_infinity(),
        cfg,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(2.0 * PI * est.value)
}

/// Sampled `dI/dΩ` on a rectangular `(ω, cosθ)` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub trajectory: Trajectory,
    pub method: SpectralMethod,
    pub omega: Vec<f64>,
    pub cos_theta: Vec<f64>,
    /// Row-major in `omega`; `None` where evaluation failed.
    pub values: Vec<Option<f64>>,
    pub failures: usize,
}

impl SpectralGrid {
    pub fn get(&self, i_omega: usize, i_cos: usize) -> Option<f64> {
        self.values[i_omega * self.cos_theta.len() + i_cos]
    }
}

fn strictly_increasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[0] < w[1])
}

/// Evaluate a spectral grid in parallel; output order is independent of the
/// worker count.
pub fn spectral_grid(
    traj: &Trajectory,
    omega: &[f64],
    cos_theta: &[f64],
    method: SpectralMethod,
    cfg: &QuadratureConfig,
) -> Result<SpectralGrid> {
    traj.validate()?;
    if !strictly_increasing(omega) || !strictly_increasing(cos_theta) {
        return Err(Error::InvalidParameter("grid axes must be strictly increasing".into()));
    }
    let nc = cos_theta.len();
    let values: Vec<Option<f64>> = (0..omega.len() * nc)
        .into_par_iter()
        .map(|idx| {
            let mode = PhotonMode::new(omega[idx / nc], cos_theta[idx % nc]).ok()?;
            spectral_distribution(traj, mode, method, cfg).ok()
        })
        .collect();
    let failures = values.iter().filter(|v| v.is_none()).count();
    Ok(SpectralGrid {
        trajectory: *traj,
        method,
        omega: omega.to_vec(),
        cos_theta: cos_theta.to_vec(),
        values,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn mode_map_examples() {
        let pair = mode_map(PhotonMode::new(2.0, 0.0).unwrap());
        assert_eq!((pair.p, pair.q), (1.0, 1.0));
        let pair = mode_map(PhotonMode::new(1.0, 1.0).unwrap());
        assert_eq!((pair.p, pair.q), (1.0, 0.0));
        assert!(pair.is_boundary());
        let pair = mode_map(PhotonMode::new(1.0, -1.0).unwrap());
        assert_eq!((pair.p, pair.q), (0.0, 1.0));
        assert!(PhotonMode::new(0.0, 0.5).is_err());
        assert!(PhotonMode::new(1.0, 1.5).is_err());
    }

    #[test]
    fn df_closed_form_matches_literal() {
        let (s, kappa, w, c): (f64, f64, f64, f64) = (0.7, 1.3, 2.1, 0.4);
        let planck = |x: f64| 1.0 / (PI * w * x / kappa).exp_m1();
        let literal = s * (1.0 - c * c) / (8.0 * PI * PI * c * (1.0 - s * s * c * c)) * (w / kappa)
            * (planck(1.0 - s * c) - planck(1.0 + s * c));
        let got = spectral_distribution_df(s, kappa, PhotonMode::new(w, c).unwrap()).unwrap();
        assert!(rel(got, literal) < 1e-12);
    }

    #[test]
    fn df_regular_through_perpendicular_direction() {
        let (s, kappa, w) = (0.5, 1.0, 1.5);
        let at = spectral_distribution_df(s, kappa, PhotonMode::new(w, 0.0).unwrap()).unwrap();
        for c in [1e-6, -1e-6] {
            let v = spectral_distribution_df(s, kappa, PhotonMode::new(w, c).unwrap()).unwrap();
            assert!(rel(v, at) < 1e-6);
        }
        let a = spectral_distribution_df(s, kappa, PhotonMode::new(w, 0.3).unwrap()).unwrap();
        let b = spectral_distribution_df(s, kappa, PhotonMode::new(w, -0.3).unwrap()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn df_small_angle_planck_form() {
        let (s, kappa, w, theta): (f64, f64, f64, f64) = (0.999, 1.0, 0.8, 1e-3);
        let mode = PhotonMode::from_angle(w, theta).unwrap();
        let v = spectral_distribution_df(s, kappa, mode).unwrap();
        let approx = s / (8.0 * PI * PI * (1.0 - s * s)) * (w / kappa)
            / (PI * w * (1.0 - s) / kappa).exp_m1()
            * theta.sin().powi(2);
        assert!(rel(v, approx) < 1e-2, "{v} vs {approx}");
    }

    #[test]
    fn df_lightspeed_axis_pole() {
        let mode = PhotonMode::new(1.0, 1.0).unwrap();
        assert!(matches!(spectral_distribution_df(1.0, 1.0, mode), Err(Error::Pole { .. })));
        assert_eq!(spectral_distribution_df(0.5, 1.0, mode).unwrap(), 0.0);
    }

    #[test]
    fn wd_recipe_and_closed_form_agree() {
        let cfg = QuadratureConfig::default();
        let traj = Trajectory::walker_davies(2.0, 1.0).unwrap();
        for (w, c) in [(0.3, 0.2), (1.0, -0.7), (2.5, 0.9)] {
            let mode = PhotonMode::new(w, c).unwrap();
            let r = spectral_distribution_recipe(&traj, mode, &cfg).unwrap();
            let d = spectral_distribution_wd(2.0, 1.0, mode, &cfg).unwrap();
            assert!(rel(r, d) < 1e-14);
        }
        let axis = PhotonMode::new(1.0, 1.0).unwrap();
        assert_eq!(spectral_distribution_wd(2.0, 1.0, axis, &cfg).unwrap(), 0.0);
    }

    #[test]
    fn uniform_poles_and_scale_covariance() {
        assert!(spectral_distribution_uniform(1.0, PhotonMode::new(1.0, 1.0).unwrap()).is_err());
        let (w, c, kappa) = (1.7, 0.3, 2.5);
        let a = spectral_distribution_uniform(kappa, PhotonMode::new(w, c).unwrap()).unwrap();
        let b = spectral_distribution_uniform(1.0, PhotonMode::new(w / kappa, c).unwrap()).unwrap();
        assert!(rel(a, b) < 1e-14);
    }

    #[test]
    fn uniform_low_frequency_limit() {
        let v = spectral_distribution_uniform(1.0, PhotonMode::new(1e-5, 0.0).unwrap()).unwrap();
        assert!(rel(v, 1.0 / (4.0 * PI.powi(3))) < 1e-6);
    }

    #[test]
    fn current_phase_drops_out() {
        let traj = Trajectory::uniform_acceleration(1.0).unwrap();
        let mode = PhotonMode::new(1.2, 0.4).unwrap();
        let j = fourier_current_sq_closed(&traj, mode).unwrap();
        let phased = (Complex64::from_polar(j.sqrt(), 0.0) * Complex64::from_polar(1.0, -1.2 * 0.4)).norm_sqr();
        assert!(rel(phased, j) < 1e-15);
    }

    #[test]
    fn df_current_regular_at_zero_k() {
        let traj = Trajectory::davies_fulling(0.6, 1.0).unwrap();
        let at = fourier_current_sq_closed(&traj, PhotonMode::new(2.0, 0.0).unwrap()).unwrap();
        let near = fourier_current_sq_closed(&traj, PhotonMode::new(2.0, 1e-7).unwrap()).unwrap();
        assert!(rel(near, at) < 1e-6);
    }

    #[test]
    fn neville_recovers_polynomials() {
        let xs = [1.0, 0.5, 0.25];
        let ys: Vec<Complex64> = xs
            .iter()
            .map(|&x| Complex64::new(3.0 - 2.0 * x + 0.5 * x * x, x))
            .collect();
        let y0 = extrapolate_to_zero(&xs, &ys);
        assert!((y0 - Complex64::new(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn uniform_frequency_spectrum_diverges() {
        let cfg = QuadratureConfig::default();
        let traj = Trajectory::uniform_acceleration(1.0).unwrap();
        assert!(matches!(
            frequency_spectrum(&traj, 1.0, &cfg),
            Err(Error::InfiniteSpectrum(_))
        ));
    }

    #[test]
    fn grid_rejects_unsorted_axes() {
        let cfg = QuadratureConfig::default();
        let traj = Trajectory::davies_fulling(0.5, 1.0).unwrap();
        assert!(spectral_grid(&traj, &[2.0, 1.0], &[0.0], SpectralMethod::Recipe, &cfg).is_err());
        let g = spectral_grid(&traj, &[1.0, 2.0], &[-0.5, 0.5], SpectralMethod::Recipe, &cfg).unwrap();
        assert_eq!(g.values.len(), 4);
        assert_eq!(g.failures, 0);
    }
}
