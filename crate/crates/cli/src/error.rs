//! Command failures and their exit codes.

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Malformed arguments or parameter file.
    Parse(String),
    /// A core routine rejected its input or hit a pole.
    Core(ellip_core::Error),
}

impl CliError {
    /// 2 for input errors, 3 for poles and evaluations that stay out of
    /// range after resampling.
    pub fn exit_code(&self) -> i32 {
        use ellip_core::Error as E;
        match self {
            CliError::Parse(_) => 2,
            CliError::Core(E::Pole { .. } | E::PoleGuard { .. } | E::Evaluation { .. }) => 3,
            CliError::Core(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<ellip_core::Error> for CliError {
    fn from(e: ellip_core::Error) -> Self {
        CliError::Core(e)
    }
}
