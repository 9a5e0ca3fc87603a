//! The critical order: the unique ν in (1/2, 3/2) at which
//! r_ν(√(5-2ν)) = (3-2ν)/√(5-2ν).
//!
//! Below this order the density's curvature kernel turns positive
//! somewhere (so the density fails log-concavity for large noncentrality);
//! at and above it the kernel stays nonpositive. The objective is strictly
//! increasing on [1/2, 3/2], so a bracketed bisection refined by secant
//! steps converges unconditionally.

use crate::bessel::ratio;
use crate::error::{check_domain, Error, Result};

/// Result of the bracketed root solve.
#[derive(Clone, Copy, Debug)]
pub struct RootResult {
    pub root: f64,
    /// |objective(root)|
    pub residual: f64,
    /// objective evaluations spent after bracket validation
    pub iterations: usize,
    /// final open bracket with lo < root < hi
    pub bracket: (f64, f64),
}

/// G(ν) = r_ν(√(5-2ν)) - (3-2ν)/√(5-2ν), defined on [1/2, 3/2].
pub fn objective(nu: f64) -> Result<f64> {
    check_domain("nu", nu, (0.5..=1.5).contains(&nu), "1/2 <= nu <= 3/2")?;
    let s = (5.0 - 2.0 * nu).sqrt();
    Ok(ratio(nu, s)?.value - (3.0 - 2.0 * nu) / s)
}

/// Solves for the critical order on the full bracket [1/2, 3/2].
pub fn solve(tol: f64, max_iter: usize) -> Result<RootResult> {
    solve_in(0.5, 1.5, tol, max_iter)
}

/// Solves objective(ν) = 0 on a caller-supplied bracket. Bisection narrows
/// the bracket to 1e-3, then secant steps take over (falling back to the
/// midpoint whenever a step leaves the bracket). Stops at |G| <= tol.
pub fn solve_in(lo: f64, hi: f64, tol: f64, max_iter: usize) -> Result<RootResult> {
    check_domain("tol", tol, tol >= 1e-13, "tol >= 1e-13")?;
    check_domain("lo", lo, lo < hi, "lo < hi")?;
    let g_lo = objective(lo)?;
    let g_hi = objective(hi)?;
    if !(g_lo < 0.0 && g_hi > 0.0) {
        return Err(Error::BracketFailure {
            lo,
            hi,
            f_lo: g_lo,
            f_hi: g_hi,
        });
    }

    let mut lo = lo;
    let mut hi = hi;
    let mut g_lo = g_lo;
    let mut iterations = 0usize;

    // last two evaluations drive the secant step once the bracket is narrow
    let mut older = (lo, g_lo);
    let mut newer = (hi, g_hi);

    while iterations < max_iter {
        let x = if hi - lo > 1e-3 {
            0.5 * (lo + hi)
        } else {
            let (x0, g0) = older;
            let (x1, g1) = newer;
            let secant = if g1 != g0 { x1 - g1 * (x1 - x0) / (g1 - g0) } else { f64::NAN };
            if secant.is_finite() && secant > lo && secant < hi {
                secant
            } else {
                0.5 * (lo + hi)
            }
        };
        let g = objective(x)?;
        iterations += 1;
        if g.abs() <= tol {
            return Ok(RootResult {
                root: x,
                residual: g.abs(),
                iterations,
                bracket: (lo, hi),
            });
        }
        if g < 0.0 {
            lo = x;
            g_lo = g;
        } else {
            hi = x;
        }
        older = newer;
        newer = (x, g);
    }
    Err(Error::Convergence {
        what: "critical order solve".into(),
        achieved: g_lo.abs(),
        requested: tol,
    })
}
