use thiserror::Error;

/// Failure of a command, grouped by the exit code it maps to.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(pseudoatom::Error),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    pub const EXIT_CONFIG: i32 = 2;
    pub const EXIT_SOLVER: i32 = 3;
    pub const EXIT_IO: i32 = 4;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => Self::EXIT_CONFIG,
            CliError::Solver(_) => Self::EXIT_SOLVER,
            CliError::Io(_) => Self::EXIT_IO,
        }
    }

    /// Same classification, with a location prefix for file-backed errors.
    pub fn from_core_at(e: pseudoatom::Error, path: &std::path::Path) -> Self {
        match CliError::from(e) {
            CliError::Io(msg) => CliError::Io(format!("{}: {msg}", path.display())),
            other => other,
        }
    }
}

impl From<pseudoatom::Error> for CliError {
    fn from(e: pseudoatom::Error) -> Self {
        use pseudoatom::Error as E;
        match e {
            E::InvalidSize { .. }
            | E::InvalidParameter { .. }
            | E::NonPhysical { .. }
            | E::UnknownElement(_)
            | E::NonPositiveRadius(_) => CliError::Config(e.to_string()),
            E::Io(_) | E::Csv(_) | E::Json(_) | E::Parse { .. } | E::DuplicateLabel { .. } => {
                CliError::Io(e.to_string())
            }
            other => CliError::Solver(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
