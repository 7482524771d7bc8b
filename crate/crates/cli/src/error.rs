use std::path::Path;

/// Process exit codes.
pub mod exit {
    pub const OK: u8 = 0;
    /// I/O failure or an internal computation error.
    pub const FAILURE: u8 = 1;
    /// Malformed CSV or report input, or invalid options.
    pub const INPUT: u8 = 2;
    /// A median hit its iteration cap. Output was still written.
    pub const NONCONVERGENCE: u8 = 3;
    /// More simulation replicates failed than the exclusion budget allows.
    pub const FAILURE_BUDGET: u8 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Compute(#[from] elastic_boxplot::Error),
}

impl CliError {
    pub fn input(msg: impl Into<String>) -> Self {
        Self::Input(msg.into())
    }

    pub fn input_from(e: elastic_boxplot::Error) -> Self {
        Self::Input(e.to_string())
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Self::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Input(_) => exit::INPUT,
            Self::Compute(
                elastic_boxplot::Error::TooFewSamples { .. } | elastic_boxplot::Error::InvalidConfig(_),
            ) => exit::INPUT,
            Self::Io { .. } | Self::Compute(_) => exit::FAILURE,
        }
    }
}
