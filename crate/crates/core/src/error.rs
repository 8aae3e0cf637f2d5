use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |A_ij - conj(A_ji)| = {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max |U†U - I| = {deviation:.3e})")]
    NotUnitary { deviation: f64 },

    #[error("density matrix has trace {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("density matrix has negative eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state has norm {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{name} = {value} is outside {domain}")]
    Domain { name: &'static str, value: f64, domain: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
