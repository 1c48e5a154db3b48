//! Regulator integrals r_D(ξ)(γ) on superelliptic curves Y^N = f(X).

pub mod direct;
pub mod expr;
pub mod matrix;
mod series;

pub use direct::{
    integrate_pairs, reg_direct, reg_direct_many, sigma, Automorphism, BaseCycle, CycleSpec, CycleTerm, DirectOptions,
    DirectResult, SymbolSpec, SymbolTerm,
};
pub use expr::{eta, Dual, Expr};
pub use matrix::{determinant, reg_matrix, EntryCheck, MatrixCase, RegMatrix};
pub use series::{
    beta_from_series, beta_k_certificate, reg_series, reg_series_detailed, reg_term_integral, series_tol, sin_pi_ratio,
    BetaCertificate, SeriesResult,
};
