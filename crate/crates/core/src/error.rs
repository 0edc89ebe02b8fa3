use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes shared by every engine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole: {0}")]
    Pole(String),
    #[error("argument outside domain: {0}")]
    Domain(String),
    #[error("unsupported parameter region: {0}")]
    UnsupportedRegion(String),
    #[error("divergent series: {0}")]
    DivergentSeries(String),
    #[error("series did not reach tolerance {tol:e} within {terms} terms (last error {err:e})")]
    SlowConvergence { terms: usize, tol: f64, err: f64 },
    #[error("integral does not converge: {0}")]
    NotConvergent(String),
    #[error("quadrature did not converge: estimate {value} with error {err:e} after {n_evals} evaluations")]
    NoConvergence { value: f64, err: f64, n_evals: usize },
    #[error("non-finite value: {0}")]
    NonFinite(String),
}

impl Error {
    /// Stable identifier used in verification reports.
    pub fn name(&self) -> &'static str {
        match self {
            Error::Pole(_) => "PoleError",
            Error::Domain(_) => "DomainError",
            Error::UnsupportedRegion(_) => "UnsupportedRegion",
            Error::DivergentSeries(_) => "DivergentSeries",
            Error::SlowConvergence { .. } => "SlowConvergence",
            Error::NotConvergent(_) => "NotConvergent",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NonFinite(_) => "NonFinite",
        }
    }
}
