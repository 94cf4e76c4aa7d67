use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("frequency {f_hz:.6e} Hz outside material table range [{min_hz:.6e}, {max_hz:.6e}] Hz")]
    Range { f_hz: f64, min_hz: f64, max_hz: f64 },

    #[error("invalid material `{name}`: {reason}")]
    InvalidMaterial { name: String, reason: String },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("mode {mode} is below cutoff at {f_hz:.6e} Hz (f_c = {f_c_hz:.6e} Hz)")]
    BelowCutoff { mode: String, f_hz: f64, f_c_hz: f64 },

    #[error("root bracketing failed for n = {n} in k_c bracket [{lo:.9e}, {hi:.9e}] 1/m: {reason}")]
    RootBracketing { n: u32, lo: f64, hi: f64, reason: String },

    #[error("integration failed: {0}")]
    Integration(String),

    #[error("degenerate reflection at {f_hz:.6e} Hz: |S11| = {s11_abs:.3e}")]
    DegenerateReflection { f_hz: f64, s11_abs: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("branch ambiguity unresolved: {0}")]
    Ambiguity(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Input(String),

    #[error("singular configuration: {0}")]
    Singularity(String),

    #[error("search range error: {0}")]
    SearchRange(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable, machine-readable category name.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Range { .. } => "range",
            Error::InvalidMaterial { .. } => "invalid_material",
            Error::InvalidGeometry(_) => "invalid_geometry",
            Error::BelowCutoff { .. } => "below_cutoff",
            Error::RootBracketing { .. } => "root_bracketing",
            Error::Integration(_) => "integration",
            Error::DegenerateReflection { .. } => "degenerate_reflection",
            Error::Domain(_) => "domain",
            Error::Ambiguity(_) => "ambiguity",
            Error::Parse { .. } => "parse",
            Error::Input(_) => "input",
            Error::Singularity(_) => "singularity",
            Error::SearchRange(_) => "search_range",
            Error::Io(_) => "io",
        }
    }
}
