//! Adaptive Gauss-Kronrod quadrature on finite, semi-infinite and doubly
//! infinite domains, plus an iterated two-dimensional driver.
//!
//! The one-dimensional kernel is a globally adaptive 10/21-point
//! Gauss-Kronrod scheme: the interval with the largest error estimate is
//! bisected until the summed error satisfies
//! `error <= max(abs_tol, rel_tol * |value|)`. Infinite ranges are mapped
//! onto `(0, 1)` before integration.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Abscissae of the 21-point Kronrod rule on `[-1, 1]` (non-negative half).
/// Odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_132_644_710,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Weights of the embedded 10-point Gauss rule (paired with `XGK[1]`, `XGK[3]`, ...).
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// How `[a, ∞)` is mapped onto `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SemiInfiniteMap {
    /// `x = a - ln(1 - u)`; suited to exponentially decaying tails.
    Exp,
    /// `x = a + u / (1 - u)`; suited to algebraic tails.
    Rational,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    pub semi_infinite_map: SemiInfiniteMap,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 2000,
            semi_infinite_map: SemiInfiniteMap::Exp,
        }
    }
}

impl QuadratureConfig {
    pub fn new(rel_tol: f64, abs_tol: f64, max_subdivisions: usize) -> Result<Self> {
        let cfg = Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
            ..Self::default()
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be at least 1".into(),
            ));
        }
        Ok(())
    }

    pub fn with_map(mut self, map: SemiInfiniteMap) -> Self {
        self.semi_infinite_map = map;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    /// Tolerances for the inner integral of an iterated 2D integral:
    /// ten times tighter than the outer ones.
    pub fn inner(&self) -> Self {
        Self {
            rel_tol: self.rel_tol / 10.0,
            abs_tol: self.abs_tol / 10.0,
            ..*self
        }
    }
}

/// Integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    Finite(f64, f64),
    /// `[a, ∞)`
    UpperInfinite(f64),
    /// `(-∞, b]`
    LowerInfinite(f64),
    /// `(-∞, ∞)`
    Whole,
}

impl Domain {
    pub fn zero_to_infinity() -> Self {
        Domain::UpperInfinite(0.0)
    }
}

/// Result of a converged quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub error: f64,
    pub evaluations: usize,
}

/// Values the adaptive kernel can accumulate.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 21-point Kronrod evaluation with QUADPACK-style error scaling.
fn gk21<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[10];
    let mut res_g = T::zero();
    let mut res_abs = fc.magnitude() * WGK[10];
    let mut fv1 = [T::zero(); 10];
    let mut fv2 = [T::zero(); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k = res_k + (f1 + f2) * WGK[j];
        res_abs += WGK[j] * (f1.magnitude() + f2.magnitude());
        if j % 2 == 1 {
            res_g = res_g + (f1 + f2) * WG[j / 2];
        }
    }
    let mean = res_k * 0.5;
    let mut res_asc = WGK[10] * (fc - mean).magnitude();
    for j in 0..10 {
        res_asc += WGK[j] * ((fv1[j] - mean).magnitude() + (fv2[j] - mean).magnitude());
    }
    let scale = half.abs();
    let result = res_k * half;
    res_abs *= scale;
    res_asc *= scale;
    let mut err = ((res_k - res_g) * half).magnitude();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

/// Globally adaptive Gauss-Kronrod integration over a finite interval.
pub fn adaptive<T: QuadValue, F: Fn(f64) -> T>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Estimate<T>> {
    cfg.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::domain("adaptive", "finite interval required"));
    }
    if a == b {
        return Ok(Estimate {
            value: T::zero(),
            error: 0.0,
            evaluations: 0,
        });
    }
    let (value, error) = gk21(&f, a, b);
    let mut evaluations = 21;
    let mut total = value;
    let mut total_err = error;
    let mut heap = BinaryHeap::new();
    let mut frozen_err = 0.0;
    let mut frozen = T::zero();
    heap.push(Segment { a, b, value, error });

    let target = |v: &T| cfg.abs_tol.max(cfg.rel_tol * v.magnitude());
    let mut subdivisions = 1;
    while total_err > target(&total) {
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        // interval exhausted at machine resolution
        if !(mid > worst.a.min(worst.b) && mid < worst.a.max(worst.b))
            || (worst.b - worst.a).abs() < 8.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE)
        {
            frozen = frozen + worst.value;
            frozen_err += worst.error;
            continue;
        }
        if subdivisions >= cfg.max_subdivisions {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk21(&f, worst.a, mid);
        let (v2, e2) = gk21(&f, mid, worst.b);
        evaluations += 42;
        subdivisions += 1;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
        // recompute sums from scratch to avoid drift
        total = frozen;
        total_err = frozen_err;
        for s in heap.iter() {
            total = total + s.value;
            total_err += s.error;
        }
    }
    if !total.magnitude().is_finite() || !total_err.is_finite() {
        return Err(Error::Numerical {
            func: "adaptive",
            detail: "non-finite integrand value".into(),
        });
    }
    if total_err > target(&total) {
        return Err(Error::Convergence {
            estimate: total.magnitude(),
            error: total_err,
            requested: target(&total),
        });
    }
    Ok(Estimate {
        value: total,
        error: total_err,
        evaluations,
    })
}

fn map_upper<T: QuadValue>(
    f: impl Fn(f64) -> T,
    a: f64,
    map: SemiInfiniteMap,
) -> impl Fn(f64) -> T {
    move |u: f64| {
        let one_minus = 1.0 - u;
        if one_minus <= 0.0 {
            return T::zero();
        }
        let (x, jac) = match map {
            SemiInfiniteMap::Exp => (a - one_minus.ln(), 1.0 / one_minus),
            SemiInfiniteMap::Rational => (a + u / one_minus, 1.0 / (one_minus * one_minus)),
        };
        if !x.is_finite() || !jac.is_finite() {
            return T::zero();
        }
        let fx = f(x);
        if fx.magnitude() == 0.0 {
            T::zero()
        } else {
            fx * jac
        }
    }
}

/// Integrate a real- or complex-valued function over any [`Domain`].
pub fn integrate<T: QuadValue, F: Fn(f64) -> T>(
    f: F,
    domain: Domain,
    cfg: &QuadratureConfig,
) -> Result<Estimate<T>> {
    let map = cfg.semi_infinite_map;
    match domain {
        Domain::Finite(a, b) => adaptive(f, a, b, cfg),
        Domain::UpperInfinite(a) => adaptive(map_upper(f, a, map), 0.0, 1.0, cfg),
        Domain::LowerInfinite(b) => adaptive(map_upper(|x| f(-x), -b, map), 0.0, 1.0, cfg),
        Domain::Whole => adaptive(map_upper(|x| f(x) + f(-x), 0.0, map), 0.0, 1.0, cfg),
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_1d<F: Fn(f64) -> f64>(
    f: F,
    domain: Domain,
    cfg: &QuadratureConfig,
) -> Result<Estimate<f64>> {
    integrate(f, domain, cfg)
}

/// Iterated integral `∫_outer dx ∫_inner dy f(x, y)`.
///
/// The inner integral runs at ten times tighter tolerance than the outer one;
/// the reported error is the outer error plus the largest inner error scaled
/// by the outer domain measure seen by the quadrature.
pub fn integrate_2d_iterated<F: Fn(f64, f64) -> f64>(
    f: F,
    outer: Domain,
    inner: Domain,
    cfg: &QuadratureConfig,
) -> Result<Estimate<f64>> {
    let inner_cfg = cfg.inner();
    let failure = std::cell::RefCell::new(None::<Error>);
    let max_inner_rel = std::cell::Cell::new(0.0f64);
    let evaluations = std::cell::Cell::new(0usize);
    let outer_fn = |x: f64| -> f64 {
        if failure.borrow().is_some() {
            return 0.0;
        }
        match integrate_1d(|y| f(x, y), inner, &inner_cfg) {
            Ok(est) => {
                evaluations.set(evaluations.get() + est.evaluations);
                if est.value != 0.0 {
                    max_inner_rel.set(max_inner_rel.get().max(est.error / est.value.abs()));
                }
                est.value
            }
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                0.0
            }
        }
    };
    let outer_est = integrate_1d(outer_fn, outer, cfg);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    let est = outer_est?;
    Ok(Estimate {
        value: est.value,
        error: est.error + max_inner_rel.get() * est.value.abs(),
        evaluations: evaluations.get() + est.evaluations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn kronrod_rule_is_exact_for_degree_31_monomials() {
        for n in [0usize, 1, 7, 19, 30, 31] {
            let (v, _) = gk21(&|x: f64| x.powi(n as i32), -1.0, 1.0);
            let exact = if n % 2 == 1 { 0.0 } else { 2.0 / (n as f64 + 1.0) };
            assert!((v - exact).abs() < 1e-14, "degree {n}: {v} vs {exact}");
        }
        let wsum: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        assert!((wsum - 2.0).abs() < 1e-15);
        let gsum: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((gsum - 2.0).abs() < 1e-15);
    }

    #[test]
    fn exponential_tail() {
        let est = integrate_1d(|t| (-t).exp(), Domain::zero_to_infinity(), &cfg()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn linear_times_exponential() {
        let a = 1.0;
        let est = integrate_1d(
            |t| t * (-2.0 * a * t).exp(),
            Domain::zero_to_infinity(),
            &cfg(),
        )
        .unwrap();
        assert!((est.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn sech_fourth_over_the_line() {
        // antiderivative tanh - tanh^3/3 gives 2 * (1 - 1/3)
        let est = integrate_1d(
            |t| {
                let c = t.cosh();
                1.0 / (c * c * c * c)
            },
            Domain::Whole,
            &cfg(),
        )
        .unwrap();
        assert!((est.value - 4.0 / 3.0).abs() < 1e-12, "{}", est.value);
    }

    #[test]
    fn algebraic_tail_needs_rational_map() {
        let c = cfg().with_map(SemiInfiniteMap::Rational);
        let est = integrate_1d(|x| 1.0 / (1.0 + x * x), Domain::Whole, &c).unwrap();
        assert!((est.value - std::f64::consts::PI).abs() < 1e-11);
    }

    #[test]
    fn lower_infinite_domain() {
        let est = integrate_1d(|x| x.exp(), Domain::LowerInfinite(0.0), &cfg()).unwrap();
        assert!((est.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        let est = integrate_1d(|x| 1.0 / x.sqrt(), Domain::Finite(0.0, 1.0), &cfg()).unwrap();
        assert!((est.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn non_convergence_reports_best_estimate() {
        let c = QuadratureConfig::new(1e-14, 1e-300, 3).unwrap();
        let err = integrate_1d(|x| (50.0 * x).sin().abs(), Domain::Finite(0.0, 10.0), &c)
            .unwrap_err();
        match err {
            Error::Convergence { estimate, .. } => assert!(estimate > 0.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_config_rejected() {
        assert!(QuadratureConfig::new(0.0, 1e-14, 10).is_err());
        assert!(QuadratureConfig::new(1e-10, -1.0, 10).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-14, 0).is_err());
    }

    #[test]
    fn complex_integrand() {
        // ∫_0^∞ e^{-(1+i)t} dt = 1/(1+i)
        let est = integrate(
            |t: f64| Complex64::new(-t, -t).exp(),
            Domain::zero_to_infinity(),
            &cfg(),
        )
        .unwrap();
        let exact = Complex64::new(1.0, 0.0) / Complex64::new(1.0, 1.0);
        assert!((est.value - exact).norm() < 1e-12);
    }

    #[test]
    fn iterated_exponential() {
        let est = integrate_2d_iterated(
            |p, q| (-p - q).exp(),
            Domain::zero_to_infinity(),
            Domain::zero_to_infinity(),
            &cfg(),
        )
        .unwrap();
        assert!((est.value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn iterated_gaussian_wedge() {
        // u = p + q: ∫_0^∞ (u^2 / 2) e^{-u^2} du = sqrt(pi)/8
        let est = integrate_2d_iterated(
            |p, q| p * (-(p + q) * (p + q)).exp(),
            Domain::zero_to_infinity(),
            Domain::zero_to_infinity(),
            &cfg(),
        )
        .unwrap();
        let exact = std::f64::consts::PI.sqrt() / 8.0;
        assert!((est.value - exact).abs() < 1e-10 * exact, "{}", est.value);
    }

    #[test]
    fn iterated_constant_on_unit_square() {
        let est = integrate_2d_iterated(
            |_, _| 3.5,
            Domain::Finite(0.0, 1.0),
            Domain::Finite(0.0, 1.0),
            &cfg(),
        )
        .unwrap();
        assert!((est.value - 3.5).abs() < 1e-13);
    }
}
