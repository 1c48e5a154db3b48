//! Dirichlet coefficients from Euler products and derivatives of L at s = 0.

pub mod arith;
pub mod euler;
pub mod lambda;
pub mod spec;

pub use euler::CoeffSource;
pub use lambda::{auto_n_max, leibniz_product_derivative, FeCheck, LDerivative, LFunction, LOptions};
pub use spec::{dirichlet_from_euler, parse_coefficient_file, LSpec, NMax, Sign};
