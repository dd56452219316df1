use alloc::string::String;
use alloc::vec::Vec;

use crate::field::EvalError;

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("gauge singularity: |Ω| = {omega:e} at {coords:?}")]
    GaugeSingularity { omega: f64, coords: Vec<f64> },
    #[error("chart singularity ({reason}) at {coords:?}")]
    ChartSingularity { reason: &'static str, coords: Vec<f64> },
    #[error("outside model domain ({reason}) at {coords:?}")]
    Domain { reason: &'static str, coords: Vec<f64> },
    #[error("singular metric at {coords:?}")]
    SingularMetric { coords: Vec<f64> },
    #[error("relations are not mutually inverse: residual {residual:e}")]
    NotInverse { residual: f64 },
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, got })
    }
}
