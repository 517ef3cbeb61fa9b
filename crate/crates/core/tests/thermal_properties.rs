use std::f64::consts::PI;

use emdual::kinematics::{Trajectory, WdParametrization};
use emdual::thermal::{
    fit_planck_1p1, late_time_jerk_ratio, reference_temperature, thermality_verdict,
    TemperatureKind, Verdict,
};
use emdual::QuadratureConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn planck_round_trip_random_parameters() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let c: f64 = 10f64.powf(rng.gen_range(-3.0..3.0));
        let t: f64 = 10f64.powf(rng.gen_range(-2.0..2.0));
        let samples: Vec<(f64, f64)> = (0..60)
            .map(|i| {
                let w = 0.01 * t * 4000f64.powf(i as f64 / 59.0);
                (w, c * w / (w / t).exp_m1())
            })
            .collect();
        let fit = fit_planck_1p1(&samples).unwrap();
        assert!((fit.t_fit / t - 1.0).abs() < 1e-6, "T {t}: {}", fit.t_fit);
        assert!((fit.c_fit / c - 1.0).abs() < 1e-6, "C {c}: {}", fit.c_fit);
        assert_eq!(fit.verdict, Verdict::Thermal);
    }
}

#[test]
fn davies_fulling_receding_spectrum_is_thermal() {
    let cfg = QuadratureConfig::default();
    let traj = Trajectory::davies_fulling(0.99, 1.0).unwrap();
    let fit = thermality_verdict(&traj, Some(0.01), &cfg).unwrap();
    let reference = fit.reference.unwrap().value;
    assert!((reference - 1.0 / (PI * 0.01)).abs() < 1e-9);
    assert!((fit.t_fit / reference - 1.0).abs() < 0.02, "{} vs {reference}", fit.t_fit);
    assert_eq!(fit.verdict, Verdict::Thermal);
    let window = fit.fit_window.unwrap();
    assert!(window[0] >= fit.omega_ir.unwrap());
}

#[test]
fn davies_fulling_temperature_linear_in_kappa() {
    let cfg = QuadratureConfig::default();
    let t1 = thermality_verdict(&Trajectory::davies_fulling(0.99, 1.0).unwrap(), Some(0.01), &cfg)
        .unwrap()
        .t_fit;
    let t2 = thermality_verdict(&Trajectory::davies_fulling(0.99, 2.0).unwrap(), Some(0.01), &cfg)
        .unwrap()
        .t_fit;
    assert!((t1 / t2 - 0.5).abs() < 1e-6);
}

#[test]
fn uniform_uv_temperature_follows_inverse_sine() {
    let cfg = QuadratureConfig::default();
    let traj = Trajectory::uniform_acceleration(1.0).unwrap();
    let thetas = [0.1, 0.5, 1.0, PI / 2.0];
    let products: Vec<f64> = thetas
        .iter()
        .map(|&th| {
            let fit = thermality_verdict(&traj, Some(th), &cfg).unwrap();
            assert_eq!(fit.verdict, Verdict::NotThermal, "theta {th}");
            fit.t_uv.unwrap() * th.sin()
        })
        .collect();
    let mean = products.iter().sum::<f64>() / products.len() as f64;
    for p in &products {
        assert!((p / mean - 1.0).abs() < 0.05, "{products:?}");
    }
    let reference = reference_temperature(TemperatureKind::UniformUv, &traj, Some(PI / 2.0)).unwrap();
    assert!((mean / reference.value - 1.0).abs() < 0.05);
}

#[test]
fn walker_davies_is_wien_only_at_kappa_over_two_pi() {
    let cfg = QuadratureConfig::default().with_rel_tol(1e-8);
    let kappa = 1.0;
    let (a, b) = (PI / kappa, 0.01 * PI / kappa);
    let traj = Trajectory::walker_davies(a, b).unwrap();
    let fit = thermality_verdict(&traj, None, &cfg).unwrap();
    assert_eq!(fit.verdict, Verdict::WienOnly);
    let target = kappa / (2.0 * PI);
    assert!((fit.t_uv.unwrap() / target - 1.0).abs() < 0.05, "{:?}", fit.t_uv);
    assert!((fit.t_fit / target - 1.0).abs() < 0.05);
}

#[test]
fn zero_jerk_trajectories_are_the_thermal_ones() {
    let cfg = QuadratureConfig::default().with_rel_tol(1e-8);
    let wd = WdParametrization::new(1.0, 0.03).unwrap().trajectory();
    // (jerk probe, spectrum probe)
    let table = [
        (Trajectory::carlitz_willey(1.0).unwrap(), Trajectory::carlitz_willey(1.0).unwrap()),
        (
            Trajectory::davies_fulling_lightspeed(1.0).unwrap(),
            Trajectory::davies_fulling(0.99, 1.0).unwrap(),
        ),
        (Trajectory::uniform_acceleration(1.0).unwrap(), Trajectory::uniform_acceleration(1.0).unwrap()),
        (wd, wd),
    ];
    for (jerk_probe, spectrum_probe) in table {
        let ratio = late_time_jerk_ratio(&jerk_probe).unwrap();
        let zero_jerk = ratio.abs() < 1e-3;
        let verdict = thermality_verdict(&spectrum_probe, None, &cfg).unwrap().verdict;
        assert_eq!(
            zero_jerk,
            verdict == Verdict::Thermal,
            "{}: ratio {ratio}, verdict {verdict:?}",
            jerk_probe.describe()
        );
    }
}
