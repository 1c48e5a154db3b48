//! Arbitrary-precision complex arithmetic and the special functions built on it.

pub mod bessel;
pub mod branch;
pub mod complex;
pub mod gamma;
pub mod gauss;
pub mod incgamma;
pub mod quad;

pub use bessel::bessel_k0;
pub use branch::{log_tracked, pow_principal, pow_principal_real};
pub use complex::Complex;
pub use gamma::{beta, beta_real, gamma, gamma_real};
pub use gauss::gauss_legendre;
pub use incgamma::upper_incomplete_gamma;
pub use quad::{integrate_interval, tanh_sinh, tanh_sinh_quadrature, Abscissa, Accumulate, QuadOptions};
