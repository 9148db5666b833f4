use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("theta = {theta} is outside [-pi/4, 3pi/4]")]
    ThetaOutOfRange { theta: f64 },

    #[error("{0}")]
    Domain(&'static str),

    #[error("pole of h at z = {re} + {im}i")]
    PoleOfH { re: f64, im: f64 },

    #[error("quadrature did not reach tolerance {tol:e} after {doublings} panel doublings (last change {last_change:e})")]
    Convergence {
        tol: f64,
        doublings: u32,
        last_change: f64,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("degenerate sample set: {0}")]
    Degenerate(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
