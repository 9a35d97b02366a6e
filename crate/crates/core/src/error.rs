use thiserror::Error;

use crate::qpoly::QPolynomial;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Arguments outside the operation's domain (k > n, overlapping index sets, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// `exact_div` found a nonzero remainder.
    #[error("division is not exact, remainder {remainder}")]
    NotDivisible { remainder: QPolynomial },

    /// Fixed loci stop being isolated points from degree 4 on.
    #[error("degree {0} is unsupported: only 1 <= d <= 3 has isolated torus-fixed points")]
    UnsupportedDegree(usize),

    /// A closed-form generating function failed to reduce to a polynomial.
    #[error("closed form for d={d} at (k={k}, n={n}) leaves remainder {remainder}")]
    TheoremViolation {
        k: usize,
        n: usize,
        d: usize,
        remainder: QPolynomial,
    },

    /// Negative multiplicity or a surviving zero weight after assembly.
    #[error("weight calculus inconsistency: {0}")]
    Consistency(String),

    #[error("unknown stratum family `{0}`")]
    UnknownFamily(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
