use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument sits on a pole of the function (e.g. Γ at a non-positive integer).
    #[error("{function}: pole at {at}")]
    Pole { function: &'static str, at: f64 },

    /// Argument outside the admissible domain.
    #[error("{function}: {reason}")]
    Domain {
        function: &'static str,
        reason: String,
    },

    /// A parameter set violates its construction invariants.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A series hit `max_terms` before meeting its tolerance.
    #[error("{function}: series did not converge within {terms} terms (last term {last_term:e})")]
    NonConvergence {
        function: &'static str,
        terms: usize,
        last_term: f64,
    },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} after {subdivisions} subdivisions")]
    Quadrature {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    /// Inverse-Laplace contour diagnostics failed.
    #[error("inverse Laplace failed at t = {t}: {reason}")]
    Contour { t: f64, reason: String },

    /// |q| = 1 where neither series for the step response converges.
    #[error("branch degeneracy: |q| = 1 (q = {q})")]
    BranchDegeneracy { q: f64 },

    /// The transform-domain symbol is numerically singular.
    #[error("singular symbol: |shift + LT| = {magnitude:e}")]
    SingularSymbol { magnitude: f64 },

    /// The kernel has no resolvent in the tabulated family (α = β = 1).
    #[error("no resolvent: the Debye kernel (alpha = beta = 1) has no tabulated creep resolvent")]
    NoResolvent,

    /// The operation degenerates for the requested parameters (e.g. α = 1 spectra).
    #[error("degenerate: {0}")]
    Degenerate(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, reason: impl Into<String>) -> Error {
    Error::Domain {
        function,
        reason: reason.into(),
    }
}
