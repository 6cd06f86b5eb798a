use std::process::ExitCode;

use serde_json::json;

/// Failure classes with their exit codes.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or ansatz names (2).
    Usage(String),
    /// Unreadable or invalid input (3).
    Input(String),
    /// The optimizer did not produce a usable result (4).
    Optimizer { msg: String, params: Vec<f64> },
}

impl CliError {
    pub fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Input(_) => 3,
            CliError::Optimizer { .. } => 4,
        }
    }

    pub fn report(self) -> ExitCode {
        let code = self.code();
        match self {
            CliError::Usage(m) | CliError::Input(m) => eprintln!("error: {m}"),
            CliError::Optimizer { msg, params } => {
                let diag = json!({ "error": "optimizer", "message": msg, "params": params });
                println!("{}", serde_json::to_string_pretty(&diag).unwrap_or_default());
                eprintln!("error: {msg}");
            }
        }
        ExitCode::from(code)
    }
}

impl From<pairvqe::Error> for CliError {
    fn from(e: pairvqe::Error) -> Self {
        use pairvqe::Error as E;
        match e {
            E::InvalidAnsatz(_) | E::Compile(_) | E::NonSeparable(_) | E::UnknownParameter(_) => {
                CliError::Usage(e.to_string())
            }
            E::Optimizer { msg, params } => CliError::Optimizer { msg, params },
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
