//! Rectilinear worldlines and everything derived from them.
//!
//! All trajectories move along `z`. Davies-Fulling, Walker-Davies and uniform
//! acceleration recede toward negative `z`, so their proper acceleration and
//! peel are negative; Carlitz-Willey is written with positive `α = 1/τ`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{integrate_1d, Domain, QuadratureConfig, SemiInfiniteMap};

/// One of the four supported worldlines.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Trajectory {
    /// `z(t) = -(s/κ) ln cosh κt`. `s = 1` is the light-speed limit and is
    /// only accepted through [`Trajectory::davies_fulling_lightspeed`].
    DaviesFulling { s: f64, kappa: f64 },
    /// `t(z) = -z ± A sqrt(e^{-2z/B} - 1)` with `A > B > 0`.
    WalkerDavies { a: f64, b: f64 },
    UniformAcceleration { kappa: f64 },
    /// Defined through proper time: `α = 1/τ`, `η = ln(κτ/2)`, `τ > 0`.
    CarlitzWilley { kappa: f64 },
}

fn positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{name} must be positive and finite, got {x}"
        )))
    }
}

impl Trajectory {
    pub fn davies_fulling(s: f64, kappa: f64) -> Result<Self> {
        let t = Trajectory::DaviesFulling { s, kappa };
        t.validate()?;
        if s >= 1.0 {
            return Err(Error::InvalidParameter(
                "final speed must satisfy 0 < s < 1; use davies_fulling_lightspeed for s = 1"
                    .into(),
            ));
        }
        Ok(t)
    }

    /// The `s → 1` limit. Only limit-form spectra and kinematics are defined.
    pub fn davies_fulling_lightspeed(kappa: f64) -> Result<Self> {
        let t = Trajectory::DaviesFulling { s: 1.0, kappa };
        t.validate()?;
        Ok(t)
    }

    pub fn walker_davies(a: f64, b: f64) -> Result<Self> {
        let t = Trajectory::WalkerDavies { a, b };
        t.validate()?;
        Ok(t)
    }

    pub fn uniform_acceleration(kappa: f64) -> Result<Self> {
        let t = Trajectory::UniformAcceleration { kappa };
        t.validate()?;
        Ok(t)
    }

    pub fn carlitz_willey(kappa: f64) -> Result<Self> {
        let t = Trajectory::CarlitzWilley { kappa };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Trajectory::DaviesFulling { s, kappa } => {
                positive("kappa", kappa)?;
                if !(s > 0.0 && s <= 1.0) {
                    return Err(Error::InvalidParameter(format!(
                        "final speed must satisfy 0 < s <= 1, got {s}"
                    )));
                }
                Ok(())
            }
            Trajectory::WalkerDavies { a, b } => {
                positive("B", b)?;
                positive("A", a)?;
                if a <= b {
                    return Err(Error::InvalidParameter(format!(
                        "Walker-Davies requires A > B > 0, got A = {a}, B = {b}"
                    )));
                }
                Ok(())
            }
            Trajectory::UniformAcceleration { kappa } | Trajectory::CarlitzWilley { kappa } => {
                positive("kappa", kappa)
            }
        }
    }

    /// True for the flagged `s = 1` Davies-Fulling limit.
    pub fn is_lightspeed_limit(&self) -> bool {
        matches!(*self, Trajectory::DaviesFulling { s, .. } if s >= 1.0)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Trajectory::DaviesFulling { .. } => "davies_fulling",
            Trajectory::WalkerDavies { .. } => "walker_davies",
            Trajectory::UniformAcceleration { .. } => "uniform_acceleration",
            Trajectory::CarlitzWilley { .. } => "carlitz_willey",
        }
    }

    /// Short human-readable description with parameters.
    pub fn describe(&self) -> String {
        match *self {
            Trajectory::DaviesFulling { s, kappa } => {
                format!("davies_fulling(s={s}, kappa={kappa})")
            }
            Trajectory::WalkerDavies { a, b } => format!("walker_davies(A={a}, B={b})"),
            Trajectory::UniformAcceleration { kappa } => {
                format!("uniform_acceleration(kappa={kappa})")
            }
            Trajectory::CarlitzWilley { kappa } => format!("carlitz_willey(kappa={kappa})"),
        }
    }
}

/// Walker-Davies parameters expressed through the peel scale and top speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WdParametrization {
    pub kappa: f64,
    pub v_max: f64,
}

impl WdParametrization {
    pub fn new(kappa: f64, v_max: f64) -> Result<Self> {
        positive("kappa", kappa)?;
        if !(v_max > 0.0 && v_max < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "v_max must lie in (0, 1), got {v_max}"
            )));
        }
        Ok(WdParametrization { kappa, v_max })
    }

    /// `A = π/κ`, `B = 2π v_max / (κ (1 + v_max))`.
    pub fn to_ab(&self) -> (f64, f64) {
        let a = PI / self.kappa;
        let b = 2.0 * PI * self.v_max / (self.kappa * (1.0 + self.v_max));
        (a, b)
    }

    pub fn from_ab(a: f64, b: f64) -> Result<Self> {
        Trajectory::walker_davies(a, b)?;
        Ok(WdParametrization {
            kappa: PI / a,
            v_max: b / (2.0 * a - b),
        })
    }

    pub fn trajectory(&self) -> Trajectory {
        let (a, b) = self.to_ab();
        Trajectory::WalkerDavies { a, b }
    }
}

/// Retarded and advanced time of a point on the worldline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LightconePoint {
    /// `U = t - z`
    pub u: f64,
    /// `V = t + z`
    pub v: f64,
}

/// Motion-derived scalars at one instant.
///
/// Dots are proper-time derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinematicState {
    pub t: f64,
    pub tau: f64,
    pub z: f64,
    pub v: f64,
    pub eta: f64,
    pub gamma: f64,
    /// celerity `γ v`
    pub w: f64,
    pub alpha: f64,
    pub alpha_dot: f64,
    /// `2 α e^η`
    pub peel: f64,
    pub peel_dot: f64,
    /// `α⁴ - α̇²`
    pub jerk_sq: f64,
}

impl KinematicState {
    fn assemble(t: f64, tau: f64, z: f64, eta: f64, alpha: f64, alpha_dot: f64, peel: f64, peel_dot: f64) -> Self {
        let v = eta.tanh();
        assert!(v.abs() <= 1.0, "speed reached light speed: v = {v}");
        KinematicState {
            t,
            tau,
            z,
            v,
            eta,
            gamma: eta.cosh(),
            w: eta.sinh(),
            alpha,
            alpha_dot,
            peel,
            peel_dot,
            jerk_sq: jerk_modulus_sq(alpha, alpha_dot),
        }
    }
}

/// `J² = α⁴ - α̇²`.
pub fn jerk_modulus_sq(alpha: f64, alpha_dot: f64) -> f64 {
    alpha.powi(4) - alpha_dot * alpha_dot
}

/// Solve `f(x) = target` for increasing `f` with derivative `df`, starting
/// from a bracket that is widened geometrically until it contains the root.
fn invert_increasing<F, D>(f: F, df: D, target: f64, guess: f64, scale: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    let mut step = scale.max(1e-300);
    let (mut lo, mut hi) = (guess - step, guess + step);
    let mut widen = 0;
    while f(lo) > target {
        step *= 2.0;
        lo = guess - step;
        widen += 1;
        if widen > 2000 {
            return Err(Error::Numerical {
                func: "invert_increasing",
                detail: format!("no lower bracket for target {target}"),
            });
        }
    }
    step = scale.max(1e-300);
    while f(hi) < target {
        step *= 2.0;
        hi = guess + step;
        widen += 1;
        if widen > 2000 {
            return Err(Error::Numerical {
                func: "invert_increasing",
                detail: format!("no upper bracket for target {target}"),
            });
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = f(x) - target;
        if fx == 0.0 {
            return Ok(x);
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let d = df(x);
        let newton = x - fx / d;
        x = if d > 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo).abs() <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE)
            || (fx / d).abs() <= 2.0 * f64::EPSILON * x.abs()
        {
            return Ok(x);
        }
    }
    Err(Error::Numerical {
        func: "invert_increasing",
        detail: format!("no convergence for target {target}"),
    })
}

/// Five-point central difference with step `h`.
pub fn central_difference<F: Fn(f64) -> f64>(f: F, x: f64, h: f64) -> f64 {
    (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
}

/// Default finite-difference step, `1e-5 max(1, |x|)`.
pub fn fd_step(x: f64) -> f64 {
    1e-5 * x.abs().max(1.0)
}

// ---- Davies-Fulling ------------------------------------------------------

/// tanh, sech² and 1 - tanh for `x ≥ 0`, accurate in the tails.
fn tanh_parts(x: f64) -> (f64, f64, f64) {
    let e = (-2.0 * x).exp();
    let u = (1.0 - e) / (1.0 + e);
    let sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    let one_minus_u = 2.0 * e / (1.0 + e);
    (u, sech2, one_minus_u)
}

fn df_proper_time_abs(s: f64, kappa: f64, x: f64) -> f64 {
    // x = κ|t| ≥ 0
    let (u, sech2, _) = tanh_parts(x);
    let c = 1.0 - s * s;
    let d2 = c + s * s * sech2; // 1 - s²u²
    let mut tau = s * (s * u).asin();
    if c > 0.0 {
        let rc = c.sqrt();
        let rd = d2.sqrt();
        let y = rc * u / rd;
        // 1 - y = (1 - u²) / (rd (rd + rc u))
        let one_minus_y = sech2 / (rd * (rd + rc * u));
        tau += rc * 0.5 * ((1.0 + y) / one_minus_y).ln();
    }
    tau / kappa
}

fn df_state(s: f64, kappa: f64, t: f64) -> KinematicState {
    let sign = if t < 0.0 { -1.0 } else { 1.0 };
    let x = kappa * t.abs();
    let (ua, sech2, one_minus_ua) = tanh_parts(x);
    let u = sign * ua;
    let d2 = (1.0 - s * s) + s * s * sech2; // 1 - s²u²
    let gamma_inv = d2.sqrt();

    // z = -(s/κ) ln cosh x
    let ln_cosh = x + (-(2.0 * x)).exp().ln_1p() - std::f64::consts::LN_2;
    let z = -s / kappa * ln_cosh;

    // η = -atanh(s u), with 1 - s|u| = (1 - s) + s (1 - |u|)
    let low = (1.0 - s) + s * one_minus_ua;
    let eta = -sign * 0.5 * ((1.0 + s * ua) / low).ln();

    let alpha = -s * kappa * sech2 / (d2 * gamma_inv);
    // dα/du and dα/dτ = γ κ (1 - u²) dα/du
    // 3s² - 2 - s²u² = s² sech² - 2(1 - s²)
    let cubic = s * s * sech2 - 2.0 * (1.0 - s * s);
    let dalpha_du = -s * kappa * u * cubic / (d2 * d2 * gamma_inv);
    let alpha_dot = kappa * sech2 * dalpha_du / gamma_inv;

    // 𝒫 = -2κs(1 - u²)/D, D = (1 + su)²(1 - su)
    let (one_plus, one_minus) = if sign > 0.0 {
        (1.0 + s * ua, low)
    } else {
        (low, 1.0 + s * ua)
    };
    let dd = one_plus * one_plus * one_minus;
    let ddp = s * one_plus * (1.0 - 3.0 * s * u);
    let peel = -2.0 * kappa * s * sech2 / dd;
    let dpeel_du = -2.0 * kappa * s * (-2.0 * u * dd - sech2 * ddp) / (dd * dd);
    let peel_dot = kappa * sech2 * dpeel_du / gamma_inv;

    let tau = sign * df_proper_time_abs(s, kappa, x);
    KinematicState::assemble(t, tau, z, eta, alpha, alpha_dot, peel, peel_dot)
}

// ---- Walker-Davies -------------------------------------------------------

/// Derivatives of `U(V) = V + B ln(V²/A² + 1)`.
fn wd_u_derivatives(a: f64, b: f64, v: f64) -> (f64, f64, f64) {
    let r = v * v + a * a;
    let u1 = 1.0 + 2.0 * b * v / r;
    let u2 = 2.0 * b * (a * a - v * v) / (r * r);
    let u3 = -4.0 * b * v * (3.0 * a * a - v * v) / (r * r * r);
    (u1, u2, u3)
}

fn wd_t_of_v(a: f64, b: f64, v: f64) -> f64 {
    v + 0.5 * b * (v * v / (a * a)).ln_1p()
}

fn wd_v_of_t(a: f64, b: f64, t: f64) -> Result<f64> {
    if t == 0.0 {
        return Ok(0.0);
    }
    invert_increasing(
        |v| wd_t_of_v(a, b, v),
        |v| 1.0 + b * v / (v * v + a * a),
        t,
        t,
        a.max(1e-3 * t.abs()),
    )
}

/// Proper time from the turning point, `τ(V) = ∫_0^V sqrt(U'(V')) dV'`.
fn wd_proper_time(a: f64, b: f64, v: f64) -> Result<f64> {
    if v == 0.0 {
        return Ok(0.0);
    }
    let cfg = QuadratureConfig::default().with_rel_tol(1e-13).with_abs_tol(1e-300);
    let est = integrate_1d(
        |x| wd_u_derivatives(a, b, x).0.sqrt(),
        Domain::Finite(0.0_f64.min(v), 0.0_f64.max(v)),
        &cfg,
    )?;
    Ok(v.signum() * est.value)
}

fn wd_state_from_v(a: f64, b: f64, v: f64) -> Result<KinematicState> {
    let (u1, u2, u3) = wd_u_derivatives(a, b, v);
    let t = wd_t_of_v(a, b, v);
    let z = -0.5 * b * (v * v / (a * a)).ln_1p();
    let eta = -0.5 * u1.ln();
    let sq = u1.sqrt();
    let alpha = -0.5 * u2 / (u1 * sq);
    let dalpha_dv = -0.5 * (u3 / (u1 * sq) - 1.5 * u2 * u2 / (u1 * u1 * sq));
    let alpha_dot = dalpha_dv / sq;
    let peel = -u2 / (u1 * u1);
    let peel_dot = (-u3 / (u1 * u1) + 2.0 * u2 * u2 / (u1 * u1 * u1)) / sq;
    let tau = wd_proper_time(a, b, v)?;
    Ok(KinematicState::assemble(t, tau, z, eta, alpha, alpha_dot, peel, peel_dot))
}

// ---- uniform acceleration and Carlitz-Willey ----------------------------

fn uniform_state(kappa: f64, t: f64) -> KinematicState {
    let kt = kappa * t;
    let root = kt.hypot(1.0);
    // 1 - sqrt(1 + k²t²) = -k²t² / (1 + sqrt(1 + k²t²))
    let z = -kt * kt / (1.0 + root) / kappa;
    let eta = -kt.asinh();
    let peel = -2.0 * kappa * eta.exp();
    let peel_dot = 2.0 * kappa * kappa * eta.exp();
    let tau = kt.asinh() / kappa;
    KinematicState::assemble(t, tau, z, eta, -kappa, 0.0, peel, peel_dot)
}

fn cw_t_of_tau(kappa: f64, tau: f64) -> f64 {
    kappa * tau * tau / 8.0 + (0.5 * kappa * tau).ln() / kappa
}

fn cw_state_from_tau(kappa: f64, tau: f64) -> KinematicState {
    let eta = (0.5 * kappa * tau).ln();
    let alpha = 1.0 / tau;
    let alpha_dot = -1.0 / (tau * tau);
    let t = cw_t_of_tau(kappa, tau);
    let z = kappa * tau * tau / 8.0 - (0.5 * kappa * tau).ln() / kappa;
    // 𝒫 = 2αe^η = κ exactly
    KinematicState::assemble(t, tau, z, eta, alpha, alpha_dot, kappa, 0.0)
}

/// Kinematic state at coordinate time `t`.
pub fn state_at(traj: &Trajectory, t: f64) -> Result<KinematicState> {
    traj.validate()?;
    if !t.is_finite() {
        return Err(Error::domain("state_at", format!("time must be finite, got {t}")));
    }
    match *traj {
        Trajectory::DaviesFulling { s, kappa } => Ok(df_state(s, kappa, t)),
        Trajectory::WalkerDavies { a, b } => wd_state_from_v(a, b, wd_v_of_t(a, b, t)?),
        Trajectory::UniformAcceleration { kappa } => Ok(uniform_state(kappa, t)),
        Trajectory::CarlitzWilley { kappa } => {
            // dt/dτ = γ > 0; solve in ln τ, where t(τ) is smooth everywhere
            let ln_tau = invert_increasing(
                |l| cw_t_of_tau(kappa, l.exp()),
                |l| {
                    let tau = l.exp();
                    kappa * tau * tau / 4.0 + 1.0 / kappa
                },
                t,
                (2.0 / kappa).ln(),
                1.0,
            )?;
            Ok(cw_state_from_tau(kappa, ln_tau.exp()))
        }
    }
}

/// Kinematic state at proper time `tau`, measured from `t = 0` for the
/// symmetric trajectories and from the `α = 1/τ` origin for Carlitz-Willey.
pub fn state_at_proper_time(traj: &Trajectory, tau: f64) -> Result<KinematicState> {
    traj.validate()?;
    if !tau.is_finite() {
        return Err(Error::domain("state_at_proper_time", "proper time must be finite"));
    }
    match *traj {
        Trajectory::DaviesFulling { s, kappa } => {
            if s >= 1.0 && tau.abs() >= PI / (2.0 * kappa) {
                return Err(Error::domain(
                    "state_at_proper_time",
                    format!("light-speed limit has |tau| < pi/(2 kappa), got {tau}"),
                ));
            }
            let t = invert_increasing(
                |t| tau_of_t_df(s, kappa, t),
                |t| 1.0 / df_state(s, kappa, t).gamma,
                tau,
                tau,
                1.0 / kappa,
            )?;
            Ok(df_state(s, kappa, t))
        }
        Trajectory::WalkerDavies { a, b } => {
            let v = invert_increasing(
                |v| wd_proper_time(a, b, v).unwrap_or(f64::NAN),
                |v| wd_u_derivatives(a, b, v).0.sqrt(),
                tau,
                tau,
                a,
            )?;
            wd_state_from_v(a, b, v)
        }
        Trajectory::UniformAcceleration { kappa } => {
            Ok(uniform_state(kappa, (kappa * tau).sinh() / kappa))
        }
        Trajectory::CarlitzWilley { kappa } => {
            if tau <= 0.0 {
                return Err(Error::domain(
                    "state_at_proper_time",
                    format!("Carlitz-Willey requires tau > 0, got {tau}"),
                ));
            }
            Ok(cw_state_from_tau(kappa, tau))
        }
    }
}

fn tau_of_t_df(s: f64, kappa: f64, t: f64) -> f64 {
    t.signum() * df_proper_time_abs(s, kappa, kappa * t.abs())
}

/// Lightcone coordinates of the worldline at coordinate time `t`.
pub fn lightcone_point(traj: &Trajectory, t: f64) -> Result<LightconePoint> {
    let st = state_at(traj, t)?;
    Ok(LightconePoint {
        u: st.t - st.z,
        v: st.t + st.z,
    })
}

/// `d𝒫/dτ` at proper time `tau`.
pub fn peel_derivative(traj: &Trajectory, tau: f64) -> Result<f64> {
    state_at_proper_time(traj, tau).map(|s| s.peel_dot)
}

/// `(α² + α̇)/α²`: zero exactly when the proper jerk vanishes with `α = 1/τ`.
pub fn zero_jerk_drift(state: &KinematicState) -> f64 {
    (state.alpha * state.alpha + state.alpha_dot) / (state.alpha * state.alpha)
}

/// Larmor power `α²/6π` per unit e².
pub fn larmor_power(traj: &Trajectory, t: f64) -> Result<f64> {
    state_at(traj, t).map(|s| s.alpha * s.alpha / (6.0 * PI))
}

/// Radiation-reaction force `α̇/6π` per unit e², at proper time `tau`.
pub fn self_force(traj: &Trajectory, tau: f64) -> Result<f64> {
    state_at_proper_time(traj, tau).map(|s| s.alpha_dot / (6.0 * PI))
}

/// Total radiated energy computed in the time domain by two routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeDomainEnergy {
    /// `∫ P dt`
    pub power: f64,
    /// `-∫ F v dt`
    pub force: f64,
    pub power_error: f64,
    pub force_error: f64,
}

fn check_finite_energy(traj: &Trajectory) -> Result<()> {
    match traj {
        Trajectory::UniformAcceleration { .. } => Err(Error::InfiniteEnergy(traj.describe())),
        Trajectory::CarlitzWilley { .. } => Err(Error::InfiniteEnergy(traj.describe())),
        t if t.is_lightspeed_limit() => Err(Error::InfiniteEnergy(t.describe())),
        _ => Ok(()),
    }
}

/// Power and force routes to the total energy, per unit e².
pub fn energy_routes(traj: &Trajectory, cfg: &QuadratureConfig) -> Result<TimeDomainEnergy> {
    traj.validate()?;
    check_finite_energy(traj)?;
    let six_pi = 6.0 * PI;
    match *traj {
        Trajectory::DaviesFulling { s, kappa } => {
            // both integrands are even in t
            let cfg = cfg.with_map(SemiInfiniteMap::Exp);
            let p = integrate_1d(
                |t| {
                    let st = df_state(s, kappa, t / kappa);
                    st.alpha * st.alpha
                },
                Domain::zero_to_infinity(),
                &cfg,
            )?;
            let f = integrate_1d(
                |t| {
                    let st = df_state(s, kappa, t / kappa);
                    -st.alpha_dot * st.v
                },
                Domain::zero_to_infinity(),
                &cfg,
            )?;
            let scale = 2.0 / (kappa * six_pi);
            Ok(TimeDomainEnergy {
                power: p.value * scale,
                force: f.value * scale,
                power_error: p.error * scale,
                force_error: f.error * scale,
            })
        }
        Trajectory::WalkerDavies { a, b } => {
            // integrate in V with dt = (1 + U')/2 dV; tails decay like V^-6
            let cfg = cfg.with_map(SemiInfiniteMap::Rational);
            let kin = |v: f64| {
                let (u1, u2, u3) = wd_u_derivatives(a, b, v);
                let sq = u1.sqrt();
                let alpha = -0.5 * u2 / (u1 * sq);
                let alpha_dot = -0.5 * (u3 / (u1 * sq) - 1.5 * u2 * u2 / (u1 * u1 * sq)) / sq;
                let vel = (1.0 - u1) / (1.0 + u1);
                (alpha, alpha_dot, vel, 0.5 * (1.0 + u1))
            };
            let p = integrate_1d(
                |x| {
                    let (al, _, _, dt) = kin(a * x);
                    al * al * dt
                },
                Domain::Whole,
                &cfg,
            )?;
            let f = integrate_1d(
                |x| {
                    let (_, ad, vel, dt) = kin(a * x);
                    -ad * vel * dt
                },
                Domain::Whole,
                &cfg,
            )?;
            let scale = a / six_pi;
            Ok(TimeDomainEnergy {
                power: p.value * scale,
                force: f.value * scale,
                power_error: p.error * scale,
                force_error: f.error * scale,
            })
        }
        _ => unreachable!("rejected above"),
    }
}

/// Total radiated energy by time-domain quadrature (power route), after
/// checking that the force route agrees within the quadrature tolerance.
pub fn total_energy_time_domain(traj: &Trajectory, cfg: &QuadratureConfig) -> Result<f64> {
    let r = energy_routes(traj, cfg)?;
    let tol = (10.0 * cfg.rel_tol * r.power.abs()).max(r.power_error + r.force_error);
    if (r.power - r.force).abs() > tol {
        return Err(Error::Numerical {
            func: "total_energy_time_domain",
            detail: format!(
                "power route {:e} and force route {:e} disagree",
                r.power, r.force
            ),
        });
    }
    Ok(r.power)
}

/// Closed-form total energy per unit e² (Davies-Fulling and Walker-Davies).
pub fn total_energy_closed_form(traj: &Trajectory) -> Result<f64> {
    traj.validate()?;
    match *traj {
        Trajectory::DaviesFulling { s, kappa } => {
            if s >= 1.0 {
                return Err(Error::InfiniteEnergy(traj.describe()));
            }
            let bracket = if s < 0.05 {
                // 2γ² - 3 + (4 - 3/γ²) η_s/s = Σ_{n≥1} [2 + 1/(2n+1) + 3/(2n-1)] s^{2n}
                let s2 = s * s;
                let mut sum = 0.0;
                let mut p = s2;
                for n in 1..40 {
                    let nf = n as f64;
                    sum += (2.0 + 1.0 / (2.0 * nf + 1.0) + 3.0 / (2.0 * nf - 1.0)) * p;
                    p *= s2;
                }
                sum
            } else {
                let g2 = 1.0 / (1.0 - s * s);
                2.0 * g2 - 3.0 + (4.0 - 3.0 / g2) * s.atanh() / s
            };
            Ok(kappa * bracket / (24.0 * PI))
        }
        Trajectory::WalkerDavies { a, b } => {
            let r = (a * a - b * b).sqrt();
            Ok(b * b / (48.0 * r * r * r) + 1.0 / (24.0 * r) - 1.0 / (24.0 * a))
        }
        Trajectory::UniformAcceleration { .. } | Trajectory::CarlitzWilley { .. } => Err(
            Error::Unsupported(format!("no closed-form energy for {}", traj.describe())),
        ),
    }
}
