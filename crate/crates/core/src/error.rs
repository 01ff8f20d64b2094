use thiserror::Error;

/// Errors raised by the core library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid sparse entry ({row}, {col}) for a {rows}x{cols} matrix: {reason}")]
    InvalidEntry {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
        reason: &'static str,
    },

    #[error("MPS parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("infeasible bounds on variable {name}: lower {lower} > upper {upper}")]
    InfeasibleBounds { name: String, lower: f64, upper: f64 },

    #[error("numerical breakdown: {0}")]
    Breakdown(String),

    #[error("iterates diverged at iteration {iteration}")]
    Diverged {
        iteration: usize,
        last_finite: Option<Box<crate::restart::TraceRecord>>,
    },

    #[error("radius equation has no bracket: {0}")]
    NoBracket(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(context: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            context,
            expected,
            found,
        })
    }
}
