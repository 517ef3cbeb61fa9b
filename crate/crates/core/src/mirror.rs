//! Bogolubov spectra `|β_pq|²` of 1+1D moving mirrors, particle counts and
//! the mirror-side radiated energy. Values are per unit ħ.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::Trajectory;
use crate::numerics::special::{ln_abs_gamma_imag_sq, ln_sinh, ln_sinhc};
use crate::numerics::{
    bessel_k_complex_order_scaled, bessel_k_real, incomplete_gamma_zero, integrate_1d,
    integrate_2d_iterated, Domain, QuadratureConfig,
};

/// Out-mode frequency `p` and in-mode frequency `q`.
///
/// Either frequency may be zero (the `cosθ = ±1` edge of the photon map);
/// [`ModePair::is_boundary`] flags that case.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModePair {
    pub p: f64,
    pub q: f64,
}

impl ModePair {
    pub fn new(p: f64, q: f64) -> Result<Self> {
        if !(p >= 0.0 && q >= 0.0 && p.is_finite() && q.is_finite() && p + q > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mode frequencies must be non-negative, finite and not both zero, got p = {p}, q = {q}"
            )));
        }
        Ok(ModePair { p, q })
    }

    pub fn swapped(&self) -> Self {
        ModePair { p: self.q, q: self.p }
    }

    pub fn is_boundary(&self) -> bool {
        self.p == 0.0 || self.q == 0.0
    }
}

/// Frequency combinations entering the Davies-Fulling betas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DfBetaTerms {
    /// `s(p - q) + (p + q)`
    pub g_plus: f64,
    /// `s(p - q) - (p + q)`
    pub g_minus: f64,
    /// `p(1 + s) + q(1 - s)`
    pub a: f64,
    /// `p(1 - s) + q(1 + s)`
    pub b: f64,
}

impl DfBetaTerms {
    pub fn new(s: f64, pair: ModePair) -> Self {
        let (p, q) = (pair.p, pair.q);
        DfBetaTerms {
            g_plus: s * (p - q) + (p + q),
            g_minus: s * (p - q) - (p + q),
            a: p * (1.0 + s) + q * (1.0 - s),
            b: p * (1.0 - s) + q * (1.0 + s),
        }
    }
}

fn check_df(s: f64, kappa: f64) -> Result<()> {
    Trajectory::DaviesFulling { s, kappa }.validate()
}

/// Right-side Davies-Fulling beta,
/// `pq / (4π²κ²(p-q)²) · |B(i g₋/2κ, i g₊/2κ)|²`.
///
/// Since `g₋ + g₊ = 2s(p - q)`, the `(p - q)²` pole cancels against
/// `|Γ(is(p-q)/κ)|²` and the value is assembled without any branch at `p = q`.
pub fn beta_sq_df_right(s: f64, kappa: f64, pair: ModePair) -> Result<f64> {
    check_df(s, kappa)?;
    let (p, q) = (pair.p, pair.q);
    if p == 0.0 {
        return Ok(0.0);
    }
    let terms = DfBetaTerms::new(s, pair);
    let am = terms.g_minus / (2.0 * kappa);
    let bp = terms.g_plus / (2.0 * kappa);
    if am == 0.0 {
        return Err(Error::Pole {
            func: "beta_sq_df_right",
            at: q,
        });
    }
    if q == 0.0 {
        return Ok(0.0);
    }
    let c = s * (p - q) / kappa;
    // pq s²/(4π²κ⁴) |Γ(ia')|²|Γ(ib')|² sinh(πc)/(πc)
    let ln = (p * q * s * s / (4.0 * PI * PI * kappa.powi(4))).ln()
        + ln_abs_gamma_imag_sq(am)?
        + ln_abs_gamma_imag_sq(bp)?
        + ln_sinhc(PI * c);
    Ok(ln.exp())
}

/// Double-sided Davies-Fulling beta, the sum of both sides of the mirror.
///
/// Written as `2s²pq sinhc(πs(p-q)/κ) / (κ² a b sinh(πa/2κ) sinh(πb/2κ))`,
/// which is free of the `p = q` cancellation. `s = 1` dispatches to
/// [`beta_sq_df_lightspeed`].
pub fn beta_sq_df_double(s: f64, kappa: f64, pair: ModePair) -> Result<f64> {
    check_df(s, kappa)?;
    if s >= 1.0 {
        return beta_sq_df_lightspeed(kappa, pair);
    }
    let (p, q) = (pair.p, pair.q);
    if p == 0.0 || q == 0.0 {
        return Ok(0.0);
    }
    let t = DfBetaTerms::new(s, pair);
    let ln = (2.0 * s * s * p * q / (kappa * kappa * t.a * t.b)).ln()
        + ln_sinhc(PI * s * (p - q) / kappa)
        - ln_sinh(PI * t.a / (2.0 * kappa))
        - ln_sinh(PI * t.b / (2.0 * kappa));
    Ok(ln.exp())
}

/// Light-speed limit,
/// `(1/πκ(p-q)) [1/(e^{2πq/κ} - 1) - 1/(e^{2πp/κ} - 1)]`,
/// evaluated as `sinhc(π(p-q)/κ) / (2κ² sinh(πp/κ) sinh(πq/κ))`.
pub fn beta_sq_df_lightspeed(kappa: f64, pair: ModePair) -> Result<f64> {
    check_df(1.0, kappa)?;
    let (p, q) = (pair.p, pair.q);
    if p == 0.0 || q == 0.0 {
        return Err(Error::Pole {
            func: "beta_sq_df_lightspeed",
            at: 0.0,
        });
    }
    let ln = ln_sinhc(PI * (p - q) / kappa)
        - (2.0 * kappa * kappa).ln()
        - ln_sinh(PI * p / kappa)
        - ln_sinh(PI * q / kappa);
    Ok(ln.exp())
}

fn check_wd(a: f64, b: f64) -> Result<()> {
    Trajectory::WalkerDavies { a, b }.validate()
}

/// Right-side Walker-Davies beta,
/// `(2AB/π²) (q/(p+q)) sinh(πpB) |K_{-1/2 + ipB}(A(p+q))|²`.
pub fn beta_sq_wd_right(a: f64, b: f64, pair: ModePair, cfg: &QuadratureConfig) -> Result<f64> {
    check_wd(a, b)?;
    let (p, q) = (pair.p, pair.q);
    if p == 0.0 || q == 0.0 {
        return Ok(0.0);
    }
    let x = a * (p + q);
    let k = bessel_k_complex_order_scaled(-0.5, p * b, x, cfg)?;
    // growth of sinh(πpB) is paired with the e^{-2x} of |K|² before exponentiating
    let ln_rest = ln_sinh(PI * p * b) - 2.0 * x;
    Ok(2.0 * a * b / (PI * PI) * q / (p + q) * k.norm_sqr() * ln_rest.exp())
}

/// `B ≪ A` form, `(B/π) q/(p+q)² sinh(πpB) e^{-2A(p+q)}`.
pub fn beta_sq_wd_right_small_b(a: f64, b: f64, pair: ModePair) -> Result<f64> {
    check_wd(a, b)?;
    let (p, q) = (pair.p, pair.q);
    if p == 0.0 || q == 0.0 {
        return Ok(0.0);
    }
    let ln = ln_sinh(PI * p * b) - 2.0 * a * (p + q);
    Ok(b / PI * q / ((p + q) * (p + q)) * ln.exp())
}

/// Uniformly accelerated mirror, `K₁(2 sqrt(pq)/κ)² / (π²κ²)`.
pub fn beta_sq_uniform_right(kappa: f64, pair: ModePair) -> Result<f64> {
    Trajectory::UniformAcceleration { kappa }.validate()?;
    let pq = pair.p * pair.q;
    if pq == 0.0 {
        return Err(Error::Pole {
            func: "beta_sq_uniform_right",
            at: 0.0,
        });
    }
    let k1 = bessel_k_real(1.0, 2.0 * pq.sqrt() / kappa)?;
    Ok(k1 * k1 / (PI * PI * kappa * kappa))
}

/// Right-side particle density `N_p = ∫ dq |β^R_pq|²` for Walker-Davies.
pub fn particle_density_wd(a: f64, b: f64, p: f64, cfg: &QuadratureConfig) -> Result<f64> {
    check_wd(a, b)?;
    if !(p >= 0.0) {
        return Err(Error::domain("particle_density_wd", format!("p must be >= 0, got {p}")));
    }
    if p == 0.0 {
        return Ok(0.0);
    }
    let kcfg = cfg.inner();
    let failure = std::cell::RefCell::new(None);
    // q = x/A
    let est = integrate_1d(
        |x| match beta_sq_wd_right(a, b, ModePair { p, q: x / a }, &kcfg) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        Domain::zero_to_infinity(),
        cfg,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(est.value / a)
}

/// Small-`B/A` closed form `B² p [(1 + 2Ap) Γ(0, 2Ap) - e^{-2Ap}]`.
pub fn particle_density_wd_closed(a: f64, b: f64, p: f64) -> Result<f64> {
    check_wd(a, b)?;
    if p == 0.0 {
        return Ok(0.0);
    }
    let x = 2.0 * a * p;
    Ok(b * b * p * ((1.0 + x) * incomplete_gamma_zero(x)? - (-x).exp()))
}

/// Small-`B/A` closed form of the total count, `B²/(24A²)`.
pub fn particle_count_wd_closed(a: f64, b: f64) -> Result<f64> {
    check_wd(a, b)?;
    Ok(b * b / (24.0 * a * a))
}

/// Right-side particle spectrum on a frequency grid plus the total count.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleSpectrum {
    pub a: f64,
    pub b: f64,
    pub p_grid: Vec<f64>,
    /// numerically integrated `N_p`
    pub n_p: Vec<f64>,
    /// small-`B/A` closed form at the same frequencies
    pub n_p_closed: Vec<f64>,
    /// `∫ N_p dp` by adaptive quadrature over `[0, ∞)`
    pub n_tot: f64,
    pub n_tot_error: f64,
    /// `B²/(24A²)`
    pub n_tot_closed: f64,
}

/// Total right-side particle count `∫∫ |β^R_pq|² dp dq`.
pub fn particle_count_wd(a: f64, b: f64, cfg: &QuadratureConfig) -> Result<(f64, f64)> {
    check_wd(a, b)?;
    let kcfg = cfg.inner().inner();
    let failure = std::cell::RefCell::new(None);
    // p = x/A, q = y/A
    let est = integrate_2d_iterated(
        |x, y| match beta_sq_wd_right(a, b, ModePair { p: x / a, q: y / a }, &kcfg) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        Domain::zero_to_infinity(),
        Domain::zero_to_infinity(),
        cfg,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let jac = 1.0 / (a * a);
    Ok((est.value * jac, est.error * jac))
}

pub fn particle_spectrum_wd(
    a: f64,
    b: f64,
    p_grid: &[f64],
    cfg: &QuadratureConfig,
) -> Result<ParticleSpectrum> {
    check_wd(a, b)?;
    let n_p = p_grid
        .par_iter()
        .map(|&p| particle_density_wd(a, b, p, cfg))
        .collect::<Result<Vec<_>>>()?;
    let n_p_closed = p_grid
        .iter()
        .map(|&p| particle_density_wd_closed(a, b, p))
        .collect::<Result<Vec<_>>>()?;
    let (n_tot, n_tot_error) = particle_count_wd(a, b, cfg)?;
    Ok(ParticleSpectrum {
        a,
        b,
        p_grid: p_grid.to_vec(),
        n_p,
        n_p_closed,
        n_tot,
        n_tot_error,
        n_tot_closed: particle_count_wd_closed(a, b)?,
    })
}

/// Right-side Walker-Davies energy, `B²/(48(A²-B²)^{3/2})`.
pub fn wd_right_energy_closed(a: f64, b: f64) -> Result<f64> {
    check_wd(a, b)?;
    let r2 = a * a - b * b;
    Ok(b * b / (48.0 * r2 * r2.sqrt()))
}

/// Mirror-side radiated energy `∫∫ p |β_pq|² dp dq` per unit ħ.
///
/// Davies-Fulling uses the double-sided betas; Walker-Davies the right side
/// only.
pub fn mirror_total_energy(traj: &Trajectory, cfg: &QuadratureConfig) -> Result<f64> {
    traj.validate()?;
    match *traj {
        Trajectory::DaviesFulling { s, kappa } => {
            if s >= 1.0 {
                return Err(Error::InfiniteEnergy(traj.describe()));
            }
            // the slowest decay, along q = 0, has scale κ/(π(1-s))
            let l = kappa / (1.0 - s);
            let est = integrate_2d_iterated(
                |x, y| {
                    let pair = ModePair { p: l * x, q: l * y };
                    pair.p * beta_sq_df_double(s, kappa, pair).unwrap_or(f64::NAN)
                },
                Domain::zero_to_infinity(),
                Domain::zero_to_infinity(),
                cfg,
            )?;
            finite(est.value * l * l, "mirror_total_energy")
        }
        Trajectory::WalkerDavies { a, b } => {
            let kcfg = cfg.inner().inner();
            let failure = std::cell::RefCell::new(None);
            let est = integrate_2d_iterated(
                |x, y| {
                    let pair = ModePair { p: x / a, q: y / a };
                    match beta_sq_wd_right(a, b, pair, &kcfg) {
                        Ok(v) => pair.p * v,
                        Err(e) => {
                            failure.borrow_mut().get_or_insert(e);
                            0.0
                        }
                    }
                },
                Domain::zero_to_infinity(),
                Domain::zero_to_infinity(),
                cfg,
            )?;
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            Ok(est.value / (a * a))
        }
        Trajectory::UniformAcceleration { .. } => Err(Error::InfiniteEnergy(traj.describe())),
        Trajectory::CarlitzWilley { .. } => Err(Error::Unsupported(format!(
            "no mirror spectrum for {}",
            traj.describe()
        ))),
    }
}

fn finite(x: f64, func: &'static str) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::Numerical {
            func,
            detail: "non-finite integrand".into(),
        })
    }
}
