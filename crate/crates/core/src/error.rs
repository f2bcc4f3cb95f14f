use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in `{field}`: expected {expected}, got {got}")]
    DimensionMismatch {
        field: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("point outside the domain R^n x R^m_{{>=0}}: {0}")]
    Domain(String),

    #[error("invalid problem: {what} (eigenvalue {eigenvalue:e})")]
    Validation { what: String, eigenvalue: f64 },

    #[error("invalid problem: {0}")]
    Malformed(String),

    #[error("problem file parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("non-finite field value at t = {time}, state {state}")]
    NonFinite { time: f64, state: String },

    #[error("state norm {norm:e} exceeded divergence guard at t = {time}; state {state}")]
    Divergence { time: f64, norm: f64, state: String },

    #[error("trajectory too short: {0}")]
    TooShort(String),

    #[error("counterexample search failed: {0}")]
    WitnessNotFound(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Checks a slice length, naming the field on mismatch.
pub(crate) fn check_len(field: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            field,
            expected,
            got,
        })
    }
}
