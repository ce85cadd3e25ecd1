use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, grids, config files or parameter values.
    #[error("{0}")]
    Input(String),
    /// The numbers came out unphysical or internally inconsistent.
    #[error("numerical validity failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

impl From<gaussq::Error> for CliError {
    fn from(e: gaussq::Error) -> Self {
        use gaussq::Error as E;
        match e {
            E::Unphysical { .. } | E::InconsistentVerdict { .. } | E::NegativeDiscriminant(_) | E::NotSymplectic { .. } => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Input(e.to_string()),
        }
    }
}
