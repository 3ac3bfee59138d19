//! Terminal-facing errors, split by exit code: usage problems exit with 2,
//! refused oversized work with 3.

use cubic_orbits::cubic::CubicError;
use cubic_orbits::families::FamiliesError;
use cubic_orbits::gfq::GfError;
use cubic_orbits::orbits::OrbitsError;
use cubic_orbits::pg3::Pg3Error;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments or an impossible request.
    #[error("{0}")]
    Usage(String),
    /// The request is valid but exceeds the configured size guardrail.
    #[error("{0}")]
    Guardrail(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Guardrail(_) => 3,
        }
    }
}

impl From<GfError> for CliError {
    fn from(e: GfError) -> CliError {
        match e {
            // the field-order cap is a size bound, not a malformed request
            GfError::TooLarge(..) => CliError::Guardrail(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<Pg3Error> for CliError {
    fn from(e: Pg3Error) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<CubicError> for CliError {
    fn from(e: CubicError) -> CliError {
        CliError::Usage(e.to_string())
    }
}

impl From<OrbitsError> for CliError {
    fn from(e: OrbitsError) -> CliError {
        CliError::Guardrail(e.to_string())
    }
}

impl From<FamiliesError> for CliError {
    fn from(e: FamiliesError) -> CliError {
        match e {
            FamiliesError::Orbits(inner) => inner.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}
