use thiserror::Error;

/// Errors raised by the numerical kernels, the oracle and the CLI layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("2F1 diverges at z = 1: c - a - b = {0} is not positive")]
    Divergent(f64),

    #[error("series did not converge within {0} terms")]
    SeriesCap(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "convergence hypothesis 2nu > lambda + mu + 4 violated \
         (lambda = {lambda}, mu = {mu}, nu = {nu}); pass --force to evaluate anyway"
    )]
    Hypothesis { lambda: f64, mu: f64, nu: f64 },

    #[error("tail bound cannot reach tolerance {tol:e} with orders up to {max_order}")]
    UnboundedOrder { tol: f64, max_order: usize },

    #[error("tridiagonal eigenvalue iteration failed for order {0}")]
    EigenConvergence(usize),

    #[error("quadrature did not converge after {levels} levels (last difference {last_diff:e})")]
    NonConvergence { levels: usize, last_diff: f64 },

    #[error("integrand is not integrable: {0}")]
    Integrability(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
