use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: cryowire_core::Error,
    },
    #[error("io: {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    /// Machine-readable category for the stderr JSON.
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Core { source, .. } => source.category(),
            CliError::Io { .. } => "io",
            CliError::Csv(_) => "io",
        }
    }

    /// Process exit code: 2 for bad input, 1 for failures inside a computation.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Core { source, .. } => match source.category() {
                "parse" | "input" | "range" | "invalid_material" | "invalid_geometry" | "io" => 2,
                _ => 1,
            },
            CliError::Io { .. } | CliError::Csv(_) => 2,
        }
    }
}

/// Attaches pipeline context to core errors.
pub trait Context<T> {
    fn context(self, what: impl Into<String>) -> Result<T, CliError>;
}

impl<T> Context<T> for Result<T, cryowire_core::Error> {
    fn context(self, what: impl Into<String>) -> Result<T, CliError> {
        self.map_err(|source| CliError::Core {
            context: what.into(),
            source,
        })
    }
}
