//! Modified Bessel function of the first kind I_ν, the ratio
//! I_ν(t) / I_{ν-1}(t), its derivative, and an independent
//! integral-representation evaluator for the ratio.
//!
//! I_ν comes from the ascending series (A&S 9.6.10) up to t = 600 and the
//! large-argument asymptotic expansion (A&S 9.7.1) beyond; both paths can
//! return e^{-t} I_ν(t) to avoid overflow. The ratio uses the quotient of
//! series sums for t <= 30 and the Gautschi continued fraction
//! I_ν/I_{ν-1} = 1/(2ν/t + 1/(2(ν+1)/t + ...)) for larger t, evaluated by
//! the modified Lentz scheme.

use crate::error::{check_domain, Error, Result};
use crate::eval::{EvalResult, Method};
use crate::gamma::ln_gamma;
use crate::quad;

/// Largest argument handled by the ascending series before switching to
/// the asymptotic expansion. The series stays cancellation-free (all terms
/// positive) and needs < 500 terms up to here.
const SERIES_MAX_T: f64 = 600.0;

/// Series termination: next term below this fraction of the partial sum.
const SERIES_EPS: f64 = 1e-17;
const SERIES_MAX_TERMS: usize = 500;

/// Threshold below which the ratio and its derivative use their
/// leading-order limits t/(2ν) and 1/(2ν); avoids 0/0 at tiny t.
const RATIO_SMALL_T: f64 = 1e-8;

/// Ratio method switch: series quotient below, continued fraction above.
const RATIO_SERIES_MAX_T: f64 = 30.0;

/// Above this the continued fraction (O(t) iterations) gives way to the
/// large-argument expansion of the ratio itself.
const RATIO_ASYMPTOTIC_MIN_T: f64 = 1e7;

const LN_F64_MAX: f64 = 709.782712893384;

/// Sum of the ascending series I_ν(t) = Σ_k (t/2)^{2k+ν} / (k! Γ(ν+k+1)),
/// factored as lead * Σ c_k with c_0 = 1. Valid for ν > -1, 0 < t <= 600.
/// Returns (ln_lead, reduced sum, relative error estimate).
fn series_parts(nu: f64, t: f64) -> (f64, f64, f64) {
    debug_assert!(nu > -1.0 && t > 0.0 && t <= SERIES_MAX_T);
    let ln_lead = nu * (t / 2.0).ln() - ln_gamma(nu + 1.0);
    let q = t * t / 4.0;
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut k = 0usize;
    while k < SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (nu + kf + 1.0));
        sum += term;
        k += 1;
        if term < SERIES_EPS * sum {
            break;
        }
    }
    let rel_err = term / sum + (k as f64) * 0.5 * f64::EPSILON;
    (ln_lead, sum, rel_err)
}

/// e^{-t} I_ν(t) by the asymptotic expansion, truncated at the smallest
/// term. Valid for large t (t > 600 here keeps the smallest term far below
/// 1e-13 for any order this crate meets). Returns (value, relative error).
fn asymptotic_scaled(nu: f64, t: f64) -> (f64, f64) {
    debug_assert!(t > 0.0);
    let mu = 4.0 * nu * nu;
    let prefactor = 1.0 / (2.0 * std::f64::consts::PI * t).sqrt();
    let mut term = 1.0f64;
    let mut sum = 1.0f64;
    let mut min_term = 1.0f64;
    for k in 0..50 {
        let kf = k as f64;
        let next = -term * (mu - (2.0 * kf + 1.0) * (2.0 * kf + 1.0)) / (8.0 * t * (kf + 1.0));
        if next.abs() >= term.abs() && k > 2 {
            break; // divergent tail reached
        }
        term = next;
        sum += term;
        min_term = min_term.min(term.abs());
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
    }
    let rel_err = min_term / sum.abs() + 1e-15;
    (prefactor * sum, rel_err)
}

/// ln(e^{-t} I_ν(t)) for ν > -1, t > 0; used by the log-domain integrand.
pub(crate) fn ln_scaled(nu: f64, t: f64) -> f64 {
    if t <= SERIES_MAX_T {
        let (ln_lead, sum, _) = series_parts(nu, t);
        ln_lead - t + sum.ln()
    } else {
        let (v, _) = asymptotic_scaled(nu, t);
        v.ln()
    }
}

/// Modified Bessel function of the first kind I_ν(t), or e^{-t} I_ν(t)
/// when `scaled` is set. Requires t >= 0 and ν >= -1/2.
pub fn bessel_i(nu: f64, t: f64, scaled: bool) -> Result<EvalResult> {
    check_domain("t", t, t >= 0.0, "t >= 0")?;
    check_domain("nu", nu, nu >= -0.5, "nu >= -1/2")?;
    if t == 0.0 {
        if nu == 0.0 {
            return Ok(EvalResult::new(1.0, 0.0, Method::ClosedForm));
        }
        if nu > 0.0 {
            return Ok(EvalResult::new(0.0, 0.0, Method::ClosedForm));
        }
        return Err(Error::Overflow {
            what: format!("I_nu(0) diverges for nu = {nu} < 0"),
        });
    }
    if t <= SERIES_MAX_T {
        let (ln_lead, sum, rel) = series_parts(nu, t);
        let ln_value = ln_lead + sum.ln() - if scaled { t } else { 0.0 };
        if ln_value > LN_F64_MAX {
            return Err(Error::Overflow {
                what: format!("I_{nu}({t}) exceeds f64 range; use the scaled form"),
            });
        }
        let value = if scaled {
            (ln_lead - t).exp() * sum
        } else {
            ln_lead.exp() * sum
        };
        Ok(EvalResult::new(value, value.abs() * rel, Method::Series))
    } else {
        let (scaled_val, rel) = asymptotic_scaled(nu, t);
        if scaled {
            return Ok(EvalResult::new(scaled_val, scaled_val.abs() * rel, Method::Series));
        }
        let ln_value = t + scaled_val.ln();
        if ln_value > LN_F64_MAX {
            return Err(Error::Overflow {
                what: format!("I_{nu}({t}) exceeds f64 range; use the scaled form"),
            });
        }
        let value = ln_value.exp();
        Ok(EvalResult::new(value, value * (rel + 1e-14), Method::Series))
    }
}

/// Ratio by the quotient of reduced series sums. The leading factors
/// collapse to t/(2ν) exactly since Γ(ν+1) = ν Γ(ν).
fn ratio_by_series(nu: f64, t: f64) -> (f64, f64) {
    let (_, sum_hi, rel_hi) = series_parts(nu, t);
    let (_, sum_lo, rel_lo) = series_parts(nu - 1.0, t);
    let value = t / (2.0 * nu) * sum_hi / sum_lo;
    (value, value * (rel_hi + rel_lo + 2.0 * f64::EPSILON))
}

/// Ratio by the Gautschi continued fraction with the modified Lentz scheme.
fn ratio_by_continued_fraction(nu: f64, t: f64) -> Result<(f64, f64)> {
    const FPMIN: f64 = f64::MIN_POSITIVE / f64::EPSILON;
    let max_iter = (2.0 * t) as usize + 5000;
    let mut f = FPMIN;
    let mut c = f;
    let mut d = 0.0f64;
    for j in 1..=max_iter {
        let b = 2.0 * (nu + j as f64 - 1.0) / t;
        d += b;
        if d == 0.0 {
            d = FPMIN;
        }
        c = b + 1.0 / c;
        if c == 0.0 {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() <= f64::EPSILON {
            return Ok((f, f * (j as f64).sqrt() * f64::EPSILON));
        }
    }
    Err(Error::Convergence {
        what: format!("ratio continued fraction (nu = {nu}, t = {t})"),
        achieved: f64::NAN,
        requested: f64::EPSILON,
    })
}

/// Ratio for any positive order; shared by the public `ratio` (ν >= 1/2)
/// and the diagnostics that extend to 0 < ν < 1/2.
pub(crate) fn ratio_positive_order(nu: f64, t: f64) -> Result<EvalResult> {
    check_domain("nu", nu, nu > 0.0, "nu > 0")?;
    check_domain("t", t, t > 0.0, "t > 0")?;
    if t < RATIO_SMALL_T {
        // r_ν(t) = t/(2ν) + O(t³)
        let value = t / (2.0 * nu);
        return Ok(EvalResult::new(value, t * t * t, Method::ClosedForm));
    }
    // for ν >= 1/2 the true ratio is strictly below 1; saturate one ulp
    // under it where rounding would otherwise land exactly on 1 (e.g.
    // tanh(t) for t > 19). Below ν = 1/2 the ratio legitimately exceeds 1
    // (r ~ 1 + (1-2ν)/(2t) at large t) and must not be clamped.
    const ONE_MINUS: f64 = 1.0 - f64::EPSILON / 2.0;
    let cap = if nu >= 0.5 { ONE_MINUS } else { f64::INFINITY };
    if t <= RATIO_SERIES_MAX_T {
        let (value, abs_err) = ratio_by_series(nu, t);
        Ok(EvalResult::new(value.min(cap), abs_err, Method::Series))
    } else if t < RATIO_ASYMPTOTIC_MIN_T {
        let (value, abs_err) = ratio_by_continued_fraction(nu, t)?;
        Ok(EvalResult::new(value.min(cap), abs_err, Method::ContinuedFraction))
    } else {
        // r = 1 - (2ν-1)/(2t) + (2ν-1)(2ν-3)/(8t²) + O(t⁻³); residual
        // below 2e-18 relative for ν <= 100 from this threshold on
        let c = 2.0 * nu - 1.0;
        let value = 1.0 - c / (2.0 * t) + c * (2.0 * nu - 3.0) / (8.0 * t * t);
        let abs_err = (nu * nu * nu * nu).max(1.0) / (t * t * t) + f64::EPSILON;
        Ok(EvalResult::new(value.min(cap), abs_err, Method::Series))
    }
}

/// The ratio r_ν(t) = I_ν(t) / I_{ν-1}(t) for ν >= 1/2, t > 0.
/// Strictly increasing in t with range (0, 1).
pub fn ratio(nu: f64, t: f64) -> Result<EvalResult> {
    check_domain("nu", nu, nu >= 0.5, "nu >= 1/2")?;
    ratio_positive_order(nu, t)
}

/// Derivative of the ratio via the closed identity
/// r'_ν(t) = 1 - (2ν-1)/t · r_ν(t) - r_ν(t)²  (from the three-term
/// recurrences A&S 9.6.26). Lies in (0, 1] for ν >= 1/2.
pub fn ratio_derivative(nu: f64, t: f64) -> Result<EvalResult> {
    check_domain("nu", nu, nu >= 0.5, "nu >= 1/2")?;
    ratio_derivative_positive_order(nu, t)
}

pub(crate) fn ratio_derivative_positive_order(nu: f64, t: f64) -> Result<EvalResult> {
    check_domain("nu", nu, nu > 0.0, "nu > 0")?;
    check_domain("t", t, t > 0.0, "t > 0")?;
    if t < RATIO_SMALL_T {
        let value = 1.0 / (2.0 * nu);
        return Ok(EvalResult::new(value, t * t, Method::ClosedForm));
    }
    let r = ratio_positive_order(nu, t)?;
    let value = 1.0 - (2.0 * nu - 1.0) / t * r.value - r.value * r.value;
    let sensitivity = ((2.0 * nu - 1.0) / t).abs() + 2.0 * r.value;
    Ok(EvalResult::new(
        value,
        sensitivity * r.abs_err + 4.0 * f64::EPSILON * (1.0 + ((2.0 * nu - 1.0) / t * r.value).abs()),
        r.method,
    ))
}

/// e^{-t} cosh(ts) without overflow for large t.
fn cosh_scaled(t: f64, s: f64) -> f64 {
    0.5 * ((t * (s - 1.0)).exp() + (-t * (s + 1.0)).exp())
}

/// r_ν(t) / t evaluated from the integral representation behind A&S 9.6.18:
/// the quotient ∫₀¹ (1-s²) g ds / ((2ν-1) ∫₀¹ g ds) with
/// g(s,t) = (1-s²)^{ν-3/2} cosh(ts). Requires ν > 1/2 (integrability of g).
///
/// Independent of the series/continued-fraction path; used as a test oracle.
pub fn ratio_over_t_quadrature(nu: f64, t: f64) -> Result<EvalResult> {
    check_domain("nu", nu, nu > 0.5, "nu > 1/2")?;
    check_domain("t", t, t > 0.0, "t > 0")?;

    let max_panels = 8192;
    // numerator: ∫₀¹ (1-s²)^{ν-1/2} e^{-t} cosh(ts) ds
    let numerator = if nu < 1.5 {
        // s = 1 - u² smooths the fractional power at s = 1
        let f = |u: f64| 2.0 * u.powf(2.0 * nu) * (2.0 - u * u).powf(nu - 0.5) * cosh_scaled(t, 1.0 - u * u);
        quad::integrate(f, 0.0, 1.0, 0.0, max_panels)?
    } else {
        let f = |s: f64| (1.0 - s * s).powf(nu - 0.5) * cosh_scaled(t, s);
        quad::integrate(f, 0.0, 1.0, 0.0, max_panels)?
    };
    // denominator: ∫₀¹ (1-s²)^{ν-3/2} e^{-t} cosh(ts) ds; singular at s = 1
    // for ν < 3/2, handled by s = 1 - u²; a further u = w^{1/(2ν-1)} removes
    // the residual u^{2ν-2} power when ν < 1.
    let denominator = if nu < 1.0 {
        let p = 1.0 / (2.0 * nu - 1.0);
        let f = |w: f64| {
            let u = w.powf(p);
            2.0 * p * (2.0 - u * u).powf(nu - 1.5) * cosh_scaled(t, 1.0 - u * u)
        };
        quad::integrate(f, 0.0, 1.0, 0.0, max_panels)?
    } else if nu < 1.5 {
        let f = |u: f64| 2.0 * u.powf(2.0 * nu - 2.0) * (2.0 - u * u).powf(nu - 1.5) * cosh_scaled(t, 1.0 - u * u);
        quad::integrate(f, 0.0, 1.0, 0.0, max_panels)?
    } else {
        let f = |s: f64| (1.0 - s * s).powf(nu - 1.5) * cosh_scaled(t, s);
        quad::integrate(f, 0.0, 1.0, 0.0, max_panels)?
    };

    let value = numerator.value / ((2.0 * nu - 1.0) * denominator.value);
    let rel = numerator.abs_err / numerator.value.abs() + denominator.abs_err / denominator.value.abs();
    Ok(EvalResult::new(value, value.abs() * rel, Method::Quadrature))
}
