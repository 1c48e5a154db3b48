use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("gamma pole at {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("branch continuation step too large (|value/exp(prev) - 1| = {0})")]
    StepTooLarge(f64),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("slow convergence: {0}")]
    SlowConvergence(String),
    #[error("repeated root: discriminant of f/T vanishes")]
    RepeatedRoot,
    #[error("expected exactly one root in (0,1), found {0}")]
    NoRealRootInUnitInterval(usize),
    #[error("no root-of-unity order <= {0} found")]
    OrderBoundExceeded(u32),
    #[error("root {0} is not on the unit circle")]
    NotOnUnitCircle(String),
    #[error("genus formula gives a non-integer for (N, n) = ({0}, {1})")]
    Parity(u64, u64),
    #[error("invalid parameter: {0}")]
    Param(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("singularity on path: {0}")]
    SingularityOnPath(String),
    #[error("beta ordering violated: {0}")]
    OrderingViolation(String),
    #[error("bad prime {0} without a supplied local factor")]
    BadPrime(u64),
    #[error("coefficient tail too large: {0}")]
    TailTooLarge(String),
    #[error("root number unresolved")]
    SignUnknown,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;
