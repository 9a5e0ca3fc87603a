//! Numerical toolkit for the generalized Marcum Q function
//! Q_ν(a, b) = ∫_b^∞ t^ν/a^{ν-1} e^{-(t²+a²)/2} I_{ν-1}(at) dt
//! and the log-concavity structure of the noncentral chi family.
//!
//! The crate provides:
//!
//! - [`bessel`]: I_ν, the ratio I_ν/I_{ν-1}, its derivative, and an
//!   independent integral-representation evaluator for the ratio;
//! - [`marcum`]: Q_ν(a, b) by two independent methods (adaptive quadrature
//!   and the Poisson mixture of incomplete gamma tails), closed forms for
//!   a = 0, the Rice survival function, and the density itself;
//! - [`concavity`]: the curvature kernel and slope statistic of the
//!   density, shape classification, and sign scans;
//! - [`critical`]: the critical order splitting the regime where the
//!   density is log-concave for every noncentrality;
//! - [`verify`]: grid verification of the log-concavity properties with
//!   asserted / expected-violation / exploratory cell classification and
//!   CSV reporting;
//! - [`cli`]: the `marcumq` binary (eval, diag, nu0, scan, suite).
//!
//! Everything is a pure function of its arguments; concurrent use needs no
//! synchronization. See the `examples/` directory for one runnable program
//! per capability.

#![allow(clippy::excessive_precision)]

pub mod bessel;
pub mod cli;
pub mod concavity;
pub mod critical;
pub mod error;
pub mod eval;
pub mod gamma;
pub mod marcum;
pub mod quad;
pub mod verify;

pub use error::{Error, Result};
pub use eval::{EvalResult, Method};
pub use marcum::{marcum_q, marcum_q_complement, rice_survival, MarcumPoint, MethodChoice};
