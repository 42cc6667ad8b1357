//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot normalize a zero vector")]
    DegenerateVector,

    #[error("parameter {value} outside domain [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },

    #[error("profile not unit speed at u = {u}: |f'| = {slope} > 1")]
    NotUnitSpeed { u: f64, slope: f64 },

    #[error("meridian curvature undefined at u = {u}: g' = 0 with f'' != 0")]
    SingularProfile { u: f64 },

    #[error("branch mismatch: {0}")]
    BranchMismatch(String),

    #[error(
        "classification grid too small: need at least {min}x{min} interior points, got {nu}x{nv}"
    )]
    GridTooSmall { min: usize, nu: usize, nv: usize },

    #[error("lambda vanishes at (u, v) = ({u}, {v})")]
    LambdaVanishes { u: f64, v: f64 },

    #[error("invalid initial state: {0}")]
    InvalidInitialState(String),

    #[error("singular denominator in second-kind profile equation at u = {u}")]
    SingularDenominator { u: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
