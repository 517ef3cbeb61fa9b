//! Shared inputs for the `kernels` benchmarks.

use emdual::{ModePair, PhotonMode};

/// Exact `Cω/(e^{ω/T} - 1)` samples with `C = 2` on a geometric grid spanning two decades.
pub fn planck_samples(temperature: f64, n: usize) -> Vec<(f64, f64)> {
    let (lo, hi) = (0.05 * temperature, 5.0 * temperature);
    (0..n)
        .map(|i| {
            let w = lo * (hi / lo).powf(i as f64 / (n - 1) as f64);
            (w, 2.0 * w / (w / temperature).exp_m1())
        })
        .collect()
}

/// `n` photon modes with `ω ∈ [0.1, 10]` and `cosθ ∈ [-0.9, 0.9]`.
pub fn photon_modes(n: usize) -> Vec<PhotonMode> {
    (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1).max(1) as f64;
            PhotonMode::new(0.1 * 100f64.powf(f), -0.9 + 1.8 * f).unwrap()
        })
        .collect()
}

/// Mode pairs along the anti-diagonal of `[0.1, 10]²`.
pub fn mode_pairs(n: usize) -> Vec<ModePair> {
    (0..n)
        .map(|i| {
            let f = i as f64 / (n - 1).max(1) as f64;
            ModePair::new(0.1 * 100f64.powf(f), 10.0 * 0.01f64.powf(f)).unwrap()
        })
        .collect()
}
