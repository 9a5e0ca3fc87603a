use std::fmt;

/// How a numerical value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Series,
    ContinuedFraction,
    Quadrature,
    ClosedForm,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Self::Series => "series",
            Self::ContinuedFraction => "continued_fraction",
            Self::Quadrature => "quadrature",
            Self::ClosedForm => "closed_form",
        };
        f.write_str(s)
    }
}

/// A numerical result together with an estimated absolute error bound
/// and the method that produced it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub abs_err: f64,
    pub method: Method,
}

impl EvalResult {
    pub fn new(value: f64, abs_err: f64, method: Method) -> Self {
        debug_assert!(abs_err >= 0.0);
        Self {
            value,
            abs_err,
            method,
        }
    }
}
