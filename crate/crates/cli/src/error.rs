use nambu_core::brieskorn::BrieskornError;
use nambu_core::classify::ClassifyError;
use nambu_core::local::LocalError;
use nambu_core::periods::PeriodError;
use nambu_core::poly::ParseError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed arguments, expressions or files: exit code 1.
    #[error("{0}")]
    Input(String),
    /// The mathematics declined the request: exit code 2.
    #[error("{0}")]
    Refusal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Refusal(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Refusal(_) => "refusal",
        }
    }
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(e.to_string())
    }
}

macro_rules! refusal {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Refusal(e.to_string())
            }
        }
    )*};
}

refusal!(LocalError, BrieskornError, ClassifyError);

impl From<PeriodError> for CliError {
    fn from(e: PeriodError) -> Self {
        match e {
            PeriodError::BadSamples(_) => CliError::Input(e.to_string()),
            other => CliError::Refusal(other.to_string()),
        }
    }
}
