use std::f64::consts::PI;

use emdual::kinematics::{
    energy_routes, peel_derivative, state_at, state_at_proper_time, total_energy_closed_form,
    total_energy_time_domain, zero_jerk_drift, Trajectory, WdParametrization,
};
use emdual::QuadratureConfig;
use proptest::prelude::*;

fn trajectories() -> impl Strategy<Value = Trajectory> {
    prop_oneof![
        (0.01f64..0.999, 0.1f64..5.0).prop_map(|(s, k)| Trajectory::davies_fulling(s, k).unwrap()),
        (0.1f64..5.0).prop_map(|k| Trajectory::davies_fulling_lightspeed(k).unwrap()),
        (0.5f64..5.0, 0.01f64..0.98)
            .prop_map(|(a, r)| Trajectory::walker_davies(a, r * a).unwrap()),
        (0.1f64..5.0).prop_map(|k| Trajectory::uniform_acceleration(k).unwrap()),
        (0.1f64..5.0).prop_map(|k| Trajectory::carlitz_willey(k).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn state_invariants(traj in trajectories(), t in -8.0f64..8.0) {
        let st = state_at(&traj, t).unwrap();
        // tanh rounds to 1 once |η| exceeds ~19
        prop_assert!(st.v.abs() < 1.0 || st.eta.abs() > 18.0);
        // γ² - w² = (γ - w)(γ + w) = e^{-η} e^{η}
        let unit = (st.gamma - st.w) * (st.gamma + st.w);
        prop_assert!((unit - 1.0).abs() < 1e-12 * st.gamma.powi(2).max(1.0));
        prop_assert!((st.gamma - st.eta.cosh()).abs() <= 1e-15 * st.gamma);
        let peel = 2.0 * st.alpha * st.eta.exp();
        prop_assert!((st.peel - peel).abs() <= 1e-12 * peel.abs().max(1e-300), "{} vs {}", st.peel, peel);
        prop_assert!((st.jerk_sq - (st.alpha.powi(4) - st.alpha_dot.powi(2))).abs() == 0.0);
    }

    #[test]
    fn peel_derivative_identity(traj in trajectories(), t in -6.0f64..6.0) {
        let st = state_at(&traj, t).unwrap();
        let identity = 2.0 * st.eta.exp() * (st.alpha * st.alpha + st.alpha_dot);
        let scale = 2.0 * st.eta.exp() * (st.alpha * st.alpha).max(st.alpha_dot.abs());
        prop_assert!(
            (st.peel_dot - identity).abs() <= 1e-10 * scale.max(identity.abs()),
            "{}: {} vs {}", traj.describe(), st.peel_dot, identity
        );
    }

    #[test]
    fn df_time_reversal(s in 0.01f64..0.999, k in 0.1f64..5.0, t in 0.0f64..20.0) {
        let traj = Trajectory::davies_fulling(s, k).unwrap();
        let a = state_at(&traj, t).unwrap();
        let b = state_at(&traj, -t).unwrap();
        prop_assert_eq!(a.alpha, b.alpha);
        prop_assert_eq!(a.v, -b.v);
    }
}

#[test]
fn carlitz_willey_zero_jerk_over_wide_range() {
    let traj = Trajectory::carlitz_willey(1.0).unwrap();
    for i in 0..100 {
        let tau = 0.1 * 1000f64.powf(i as f64 / 99.0);
        let st = state_at_proper_time(&traj, tau).unwrap();
        assert!((st.alpha * st.alpha + st.alpha_dot).abs() < 1e-12, "tau = {tau}");
        assert_eq!(st.peel, 1.0);
        assert_eq!(peel_derivative(&traj, tau).unwrap(), 0.0);
    }
}

#[test]
fn uniform_peel_derivative_never_vanishes() {
    let traj = Trajectory::uniform_acceleration(1.3).unwrap();
    for tau in [-5.0, -1.0, 0.0, 2.0, 9.0] {
        let d = peel_derivative(&traj, tau).unwrap();
        let st = state_at_proper_time(&traj, tau).unwrap();
        assert!(d > 0.0);
        assert!((d - 2.0 * st.eta.exp() * st.alpha * st.alpha).abs() < 1e-13 * d);
    }
}

#[test]
fn df_lightspeed_late_time_peel_derivative_vanishes() {
    let kappa = 1.0;
    let traj = Trajectory::davies_fulling_lightspeed(kappa).unwrap();
    let tau0 = PI / (2.0 * kappa);
    let mut last = f64::INFINITY;
    for gap in [1e-1, 1e-2, 1e-3, 1e-4] {
        // 𝒫̇ ≈ κ³ (τ₀ - τ) / 2 near the horizon
        let d = peel_derivative(&traj, tau0 - gap).unwrap().abs();
        assert!(d < last && d < kappa.powi(3) * gap);
        last = d;
        // α ≈ -1/(τ₀ - τ) as τ → τ₀
        let st = state_at_proper_time(&traj, tau0 - gap).unwrap();
        assert!(zero_jerk_drift(&st).abs() < 2.0 * gap);
    }
}

#[test]
fn df_time_domain_energy_matches_closed_form() {
    let cfg = QuadratureConfig::default();
    for s in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9] {
        let traj = Trajectory::davies_fulling(s, 1.0).unwrap();
        let closed = total_energy_closed_form(&traj).unwrap();
        let routes = energy_routes(&traj, &cfg).unwrap();
        assert!(((routes.power - closed) / closed).abs() < 1e-8, "s = {s}");
        assert!(((routes.force - closed) / closed).abs() < 1e-8, "s = {s}");
        let e = total_energy_time_domain(&traj, &cfg).unwrap();
        assert_eq!(e, routes.power);
    }
}

#[test]
fn df_energy_scales_linearly_with_kappa() {
    let cfg = QuadratureConfig::default();
    let e1 = total_energy_time_domain(&Trajectory::davies_fulling(0.4, 1.0).unwrap(), &cfg).unwrap();
    let e3 = total_energy_time_domain(&Trajectory::davies_fulling(0.4, 3.0).unwrap(), &cfg).unwrap();
    assert!((e3 / e1 - 3.0).abs() < 1e-9);
}

#[test]
fn df_non_relativistic_energy() {
    let s = 0.02;
    let traj = Trajectory::davies_fulling(s, 1.0).unwrap();
    let e = total_energy_closed_form(&traj).unwrap();
    let nr = 2.0 * s * s / (9.0 * PI);
    assert!((e / nr - 1.0).abs() < 1e-3);
}

#[test]
fn wd_time_domain_energy_matches_closed_form() {
    let cfg = QuadratureConfig::default();
    for (a, b) in [(2.0, 1.0), (3.0, 1.0), (5.0, 4.0), (PI, 0.3)] {
        let traj = Trajectory::walker_davies(a, b).unwrap();
        let closed = total_energy_closed_form(&traj).unwrap();
        let routes = energy_routes(&traj, &cfg).unwrap();
        assert!(((routes.power - closed) / closed).abs() < 1e-8, "({a},{b})");
        assert!(((routes.force - closed) / closed).abs() < 1e-8, "({a},{b})");
    }
}

#[test]
fn wd_energy_limits() {
    let kappa = 1.0;
    // relativistic: E → γ³ κ / (12 √2 π)
    let v = 0.999;
    let e = total_energy_closed_form(&WdParametrization::new(kappa, v).unwrap().trajectory()).unwrap();
    let gamma = 1.0 / (1.0 - v * v).sqrt();
    let ratio = e / (gamma.powi(3) * kappa / (12.0 * 2f64.sqrt() * PI));
    assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
    // non-relativistic: E → κ v² / 6π
    let v = 1e-3;
    let e = total_energy_closed_form(&WdParametrization::new(kappa, v).unwrap().trajectory()).unwrap();
    assert!((e / (kappa * v * v / (6.0 * PI)) - 1.0).abs() < 1e-2);
}
