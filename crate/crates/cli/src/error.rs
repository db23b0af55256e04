use thiserror::Error;

/// Exit status for malformed input, bad parameters and I/O failures.
pub const EXIT_INPUT: i32 = 1;
/// Exit status for numerical failures and failed verification checks.
pub const EXIT_NUMERIC: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("{source_name}:{line}: {msg}")]
    Parse {
        source_name: String,
        line: usize,
        msg: String,
    },

    /// Indices are one-based, as in the file.
    #[error("{source_name}: matrix is not symmetric: entries ({row}, {col}) and ({col}, {row}) differ by {deviation:e}")]
    Asymmetric {
        source_name: String,
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] sddapprox::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use sddapprox::Error as E;
        match self {
            CliError::Io { .. }
            | CliError::Parse { .. }
            | CliError::Asymmetric { .. }
            | CliError::Usage(_) => EXIT_INPUT,
            CliError::Core(e) => match e {
                E::EmptyMatrix
                | E::TooLarge(_)
                | E::NotSquare { .. }
                | E::NonFinite { .. }
                | E::Asymmetric { .. }
                | E::DimensionMismatch { .. }
                | E::IndexOutOfRange { .. }
                | E::NegativeWeight { .. }
                | E::DegenerateTriangle { .. }
                | E::ParamOutOfRange(_) => EXIT_INPUT,
                _ => EXIT_NUMERIC,
            },
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
