use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("radius {r} m is outside the wing span [{root}, {tip}] m")]
    OutOfSpan { r: f64, root: f64, tip: f64 },

    #[error(
        "station solve at r = {r} m did not converge after {iterations} iterations \
         (thrust residual {thrust_residual:e}, torque residual {torque_residual:e})"
    )]
    StationNotConverged {
        r: f64,
        iterations: usize,
        thrust_residual: f64,
        torque_residual: f64,
    },

    #[error("no motor speed balances the propeller torque at U = {voltage} V, inflow {inflow} m/s")]
    NoOperatingPoint { voltage: f64, inflow: f64 },

    #[error("cannot spin up at U = {voltage} V: {reason}")]
    CannotSpinUp { voltage: f64, reason: String },

    #[error("ill-posed fit: {0}")]
    IllPosedFit(String),

    #[error("infeasible design: {0}")]
    Infeasible(String),

    #[error("config {}:{line}: {message}", path.display())]
    Config {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("measurements: {0}")]
    Measurement(String),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad user input rather than a model or solver failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::OutOfSpan { .. }
                | Error::Config { .. }
                | Error::Measurement(_)
                | Error::IllPosedFit(_)
                | Error::Csv(_)
                | Error::Io(_)
        )
    }
}
