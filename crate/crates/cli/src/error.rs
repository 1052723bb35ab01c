use serde_json::json;

/// A failed run, carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or parameters: exit 1.
    Config(String),
    /// Divergent or unresolved numerics: exit 2.
    Numerical(String),
    /// A check the program itself should guarantee failed: exit 3.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
            CliError::Internal(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Numerical(_) => "divergence",
            CliError::Internal(_) => "internal",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) | CliError::Internal(m) => m,
        }
    }

    pub fn to_json(&self) -> String {
        json!({
            "error": {
                "kind": self.kind(),
                "exit_code": self.exit_code(),
                "message": self.message(),
            }
        })
        .to_string()
    }
}

impl From<bgls::Error> for CliError {
    fn from(e: bgls::Error) -> Self {
        use bgls::Error as E;
        match e {
            E::InvalidParameter(_) | E::NoRoot(_) => CliError::Config(e.to_string()),
            E::Divergent(_) | E::NotConverged(_) | E::Pole(_) | E::NonFinite(_) | E::ZeroDenominator(_) => {
                CliError::Numerical(e.to_string())
            }
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("cannot write output: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Internal(format!("csv: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
