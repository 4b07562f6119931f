use thiserror::Error;

/// Front-end failures, each mapped to a process exit code: 1 for usage
/// problems, 2 for unreadable or malformed data, 3 for a degenerate cone,
/// 4 for an unsupported cone shape.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("input file contains no data points")]
    EmptyFile,
    #[error("{0}")]
    Core(#[from] conequant::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) | CliError::Parse { .. } | CliError::EmptyFile => 2,
            CliError::Core(e) => match e {
                conequant::Error::DegenerateCone => 3,
                conequant::Error::UnsupportedCone => 4,
                conequant::Error::OutOfRange { .. } => 1,
                // Empty data and internal sweep failures are data problems.
                conequant::Error::EmptyInput => 2,
                conequant::Error::InvalidState(_) => 2,
            },
        }
    }
}
