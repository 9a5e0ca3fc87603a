use std::fmt;

/// Errors surfaced by the numerical routines.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    Domain {
        param: &'static str,
        value: f64,
        constraint: &'static str,
    },
    /// The unscaled result exceeds the representable range.
    Overflow { what: String },
    /// An iterative scheme did not reach the requested tolerance.
    Convergence {
        what: String,
        achieved: f64,
        requested: f64,
    },
    /// A root-finding bracket does not straddle a sign change.
    BracketFailure {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
    /// A sampling grid is too coarse to resolve the structure it scans.
    GridTooCoarse { detail: String },
    /// A grid argument is malformed (empty, unsorted, or out of range).
    InvalidGrid { detail: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Domain {
                param,
                value,
                constraint,
            } => write!(f, "domain error: {param} = {value} violates {constraint}"),
            Self::Overflow { what } => write!(f, "overflow: {what}"),
            Self::Convergence {
                what,
                achieved,
                requested,
            } => write!(
                f,
                "convergence failure in {what}: achieved {achieved:.3e}, requested {requested:.3e}"
            ),
            Self::BracketFailure { lo, hi, f_lo, f_hi } => write!(
                f,
                "bracket failure: f({lo}) = {f_lo:.6e} and f({hi}) = {f_hi:.6e} do not straddle zero"
            ),
            Self::GridTooCoarse { detail } => write!(f, "grid too coarse: {detail}"),
            Self::InvalidGrid { detail } => write!(f, "invalid grid: {detail}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;

/// Rejects non-finite or constraint-violating scalar arguments.
pub(crate) fn check_domain(param: &'static str, value: f64, ok: bool, constraint: &'static str) -> Result<()> {
    if !value.is_finite() || !ok {
        return Err(Error::Domain {
            param,
            value,
            constraint,
        });
    }
    Ok(())
}
