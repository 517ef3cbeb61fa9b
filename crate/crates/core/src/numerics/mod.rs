//! Quadrature and special-function kernels. No physics lives here.

pub mod quadrature;
pub mod special;

pub use quadrature::{
    integrate, integrate_1d, integrate_2d_iterated, Domain, Estimate, QuadratureConfig,
    SemiInfiniteMap,
};
pub use special::{
    abs_beta_imag_sq, abs_gamma_imag_sq, bessel_k_complex_order, bessel_k_complex_order_scaled,
    bessel_k_real, incomplete_gamma_zero, ln_abs_beta_imag_sq, ln_abs_gamma_imag_sq, ComplexValue,
};
