use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed input: {0}")]
    Input(String),
    #[error(transparent)]
    Lib(#[from] k3lat::Error),
}

pub type Result<T> = std::result::Result<T, CliError>;

impl CliError {
    /// 1 for "not found within bounds", 3 for exhausted resource caps, 2
    /// for everything else (usage, malformed input, violated preconditions).
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(k3lat::Error::NotFoundWithinBounds) => 1,
            CliError::Lib(k3lat::Error::ResourceCap { .. } | k3lat::Error::TooLarge { .. }) => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Input(_) => "malformed-input",
            CliError::Lib(k3lat::Error::NotFoundWithinBounds) => "not-found",
            CliError::Lib(k3lat::Error::ResourceCap { .. } | k3lat::Error::TooLarge { .. }) => "resource-cap",
            CliError::Lib(k3lat::Error::Precondition(_)) => "precondition",
            CliError::Lib(_) => "invalid-input",
        }
    }
}

pub fn input(msg: impl Into<String>) -> CliError {
    CliError::Input(msg.into())
}
