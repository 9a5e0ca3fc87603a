//! Log-concavity diagnostics for the noncentral chi density.
//!
//! The density f(t) with order ν and noncentrality amplitude a satisfies
//!
//!   d²/dt² log f(t) = a² k_ν(a t) - 1,
//!
//! where k_ν is the scale-invariant curvature kernel computed here. The
//! density is log-concave for every a >= 0 exactly when the kernel stays
//! nonpositive. `slope_statistic` is the closed form of f'(t)/(t f(t)),
//! whose single sign change locates the mode; `classify_shape` combines it
//! with second differences of log f to report the rise/decline structure.

use crate::bessel::{ratio_derivative_positive_order, ratio_positive_order};
use crate::error::{check_domain, Error, Result};
use crate::marcum::{ln_integrand, MarcumPoint};

/// Curvature kernel k_ν(t) = 1 - (2ν-1)/t² - (2ν-1) r_ν(t)/t - r_ν(t)².
/// Equivalently r'_ν(t) - (2ν-1)/t². Defined for ν > 0 (the Bessel ratio
/// extends below ν = 1/2 through the series quotient).
pub fn curvature_kernel(nu: f64, t: f64) -> Result<f64> {
    check_domain("nu", nu, nu > 0.0, "nu > 0")?;
    check_domain("t", t, t > 0.0, "t > 0")?;
    let r = ratio_positive_order(nu, t)?.value;
    let c = 2.0 * nu - 1.0;
    Ok(1.0 - c / (t * t) - c / t * r - r * r)
}

/// Gap between the Bessel ratio and (3-2ν)/t. For 1/2 < ν < 3/2 it is
/// strictly increasing with a unique zero; the kernel can only turn
/// positive where the gap has crossed zero.
pub fn ratio_gap(nu: f64, t: f64) -> Result<f64> {
    check_domain("nu", nu, nu > 0.0, "nu > 0")?;
    check_domain("t", t, t > 0.0, "t > 0")?;
    let r = ratio_positive_order(nu, t)?.value;
    Ok(r - (3.0 - 2.0 * nu) / t)
}

/// d²/dt² log f(t) = -(2ν-1)/t² - 1 + a² r'_ν(a t), by the closed ratio
/// derivative identity (never by numerical differentiation).
pub fn log_density_curvature(nu: f64, a: f64, t: f64) -> Result<f64> {
    check_domain("nu", nu, nu > 0.0, "nu > 0")?;
    check_domain("a", a, a > 0.0, "a > 0")?;
    check_domain("t", t, t > 0.0, "t > 0")?;
    let rd = ratio_derivative_positive_order(nu, a * t)?.value;
    Ok(-(2.0 * nu - 1.0) / (t * t) - 1.0 + a * a * rd)
}

/// f'(t)/(t f(t)) = (2ν-1)/t² - 1 + a r_ν(a t)/t in closed form. Strictly
/// decreasing in t for ν >= 1/2; positive in the rising phase of f and
/// negative in the declining phase.
pub fn slope_statistic(nu: f64, a: f64, t: f64) -> Result<f64> {
    check_domain("nu", nu, nu > 0.0, "nu > 0")?;
    check_domain("a", a, a >= 0.0, "a >= 0")?;
    check_domain("t", t, t > 0.0, "t > 0")?;
    let base = (2.0 * nu - 1.0) / (t * t) - 1.0;
    if a == 0.0 {
        Ok(base)
    } else {
        let r = ratio_positive_order(nu, a * t)?.value;
        Ok(base + a * r / t)
    }
}

/// Location of the density mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ModeLocation {
    /// f declines on the whole half-line; the rising phase is empty.
    Boundary,
    Interior(f64),
}

/// Log-concavity of one monotone phase of the density.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhaseConcavity {
    Yes,
    No,
    EmptyPhase,
}

/// Shape classification of the density over a grid.
#[derive(Clone, Copy, Debug)]
pub struct ShapeReport {
    pub mode: ModeLocation,
    pub rising_logconcave: PhaseConcavity,
    pub declining_logconcave: PhaseConcavity,
    /// Most positive second difference of log f found, with its t.
    pub worst_second_difference: Option<(f64, f64)>,
}

/// Tolerance on second differences of log f before a phase is declared
/// non-log-concave; absorbs the ~1e-5 cancellation noise of the stencil.
const PHASE_SLACK: f64 = 1e-5;

/// Classifies the rise/decline structure of the density on `t_grid` and
/// tests each phase for log-concavity via second differences of log f.
///
/// The grid must be strictly increasing, have at least 64 points, start at
/// or below 0.01 and extend to at least a + 20. A grid on which the slope
/// statistic changes sign more than once is reported as too coarse (the
/// statistic is strictly decreasing for ν >= 1/2).
pub fn classify_shape(nu: f64, a: f64, t_grid: &[f64]) -> Result<ShapeReport> {
    check_domain("nu", nu, nu > 0.0, "nu > 0")?;
    check_domain("a", a, a >= 0.0, "a >= 0")?;
    if t_grid.len() < 64 {
        return Err(Error::InvalidGrid {
            detail: format!("need at least 64 grid points, got {}", t_grid.len()),
        });
    }
    if t_grid[0] <= 0.0 || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid {
            detail: "grid must be positive and strictly increasing".into(),
        });
    }
    if t_grid[0] > 0.01 || *t_grid.last().unwrap() < a + 20.0 {
        return Err(Error::InvalidGrid {
            detail: format!("grid must span [0.01, {}]", a + 20.0),
        });
    }

    let psi: Vec<f64> = t_grid
        .iter()
        .map(|&t| slope_statistic(nu, a, t))
        .collect::<Result<_>>()?;

    let mut changes = Vec::new();
    for i in 0..psi.len() - 1 {
        if psi[i] * psi[i + 1] < 0.0 {
            changes.push(i);
        }
    }
    if changes.len() > 1 {
        return Err(Error::GridTooCoarse {
            detail: format!(
                "slope statistic changes sign {} times (nu = {nu}, a = {a})",
                changes.len()
            ),
        });
    }

    let mode = if changes.is_empty() {
        if psi.iter().all(|&v| v <= 0.0) {
            ModeLocation::Boundary
        } else {
            return Err(Error::InvalidGrid {
                detail: "no mode inside the grid; extend the upper range".into(),
            });
        }
    } else {
        let i = changes[0];
        if psi[i] < 0.0 {
            return Err(Error::GridTooCoarse {
                detail: format!("slope statistic rises through zero (nu = {nu}, a = {a})"),
            });
        }
        // bisect ψ on the bracket
        let (mut lo, mut hi) = (t_grid[i], t_grid[i + 1]);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if hi - lo < 1e-12 {
                break;
            }
            if slope_statistic(nu, a, mid)? > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        ModeLocation::Interior(0.5 * (lo + hi))
    };

    let point = MarcumPoint::new(nu, a, 0.0)?;
    let mut worst: Option<(f64, f64)> = None;
    let mut rising = PhaseConcavity::EmptyPhase;
    let mut declining = PhaseConcavity::EmptyPhase;
    let mut rising_ok = true;
    let mut declining_ok = true;
    let mut rising_seen = false;
    let mut declining_seen = false;

    for &t in t_grid {
        let h = 1e-4f64.max(1e-4 * t);
        if t <= 2.0 * h {
            continue;
        }
        let in_rising = match mode {
            ModeLocation::Boundary => false,
            ModeLocation::Interior(t0) => t + h < t0,
        };
        let in_declining = match mode {
            ModeLocation::Boundary => true,
            ModeLocation::Interior(t0) => t - h > t0,
        };
        if !in_rising && !in_declining {
            continue; // window straddles the mode
        }
        let d2 = (ln_integrand(point, t - h)? - 2.0 * ln_integrand(point, t)? + ln_integrand(point, t + h)?) / (h * h);
        if worst.is_none_or(|(w, _)| d2 > w) {
            worst = Some((d2, t));
        }
        if in_rising {
            rising_seen = true;
            if d2 > PHASE_SLACK {
                rising_ok = false;
            }
        } else {
            declining_seen = true;
            if d2 > PHASE_SLACK {
                declining_ok = false;
            }
        }
    }
    if rising_seen {
        rising = if rising_ok { PhaseConcavity::Yes } else { PhaseConcavity::No };
    }
    if declining_seen {
        declining = if declining_ok { PhaseConcavity::Yes } else { PhaseConcavity::No };
    }

    Ok(ShapeReport {
        mode,
        rising_logconcave: rising,
        declining_logconcave: declining,
        worst_second_difference: worst,
    })
}

/// Which diagnostic `scan_sign` samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanTarget {
    CurvatureKernel,
    RatioGap,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    NegToPos,
    PosToNeg,
}

/// Sign-change census of a diagnostic over a log-spaced grid.
#[derive(Clone, Debug)]
pub struct CrossingReport {
    /// Bracketed zeros refined to 1e-12 in t, in increasing t order.
    pub crossings: Vec<(f64, Direction)>,
    pub positive_found: bool,
    /// Sample with the largest value: (t, value).
    pub witness: (f64, f64),
}

/// Samples the chosen diagnostic on `n` log-spaced points of [t_lo, t_hi],
/// bisects every bracketed sign change to 1e-12 in t, and reports whether
/// any positive sample exists.
pub fn scan_sign(target: ScanTarget, nu: f64, t_lo: f64, t_hi: f64, n: usize) -> Result<CrossingReport> {
    check_domain("nu", nu, nu > 0.0, "nu > 0")?;
    check_domain("t_lo", t_lo, t_lo > 0.0 && t_lo < t_hi, "0 < t_lo < t_hi")?;
    if n < 100 {
        return Err(Error::InvalidGrid {
            detail: format!("scan needs n >= 100 points, got {n}"),
        });
    }
    let eval = |t: f64| -> Result<f64> {
        match target {
            ScanTarget::CurvatureKernel => curvature_kernel(nu, t),
            ScanTarget::RatioGap => ratio_gap(nu, t),
        }
    };

    let log_lo = t_lo.ln();
    let step = (t_hi / t_lo).ln() / (n - 1) as f64;
    let mut witness = (f64::NAN, f64::NEG_INFINITY);
    let mut positive_found = false;
    let mut crossings = Vec::new();
    let mut prev: Option<(f64, f64)> = None;

    for i in 0..n {
        let t = (log_lo + step * i as f64).exp();
        let v = eval(t)?;
        if v > witness.1 {
            witness = (t, v);
        }
        if v > 0.0 {
            positive_found = true;
        }
        if let Some((tp, vp)) = prev {
            if vp * v < 0.0 {
                let (mut lo, mut hi) = (tp, t);
                let (mut v_lo, _) = (vp, v);
                while hi - lo > 1e-12 {
                    let mid = 0.5 * (lo + hi);
                    let vm = eval(mid)?;
                    if (vm > 0.0) == (v_lo > 0.0) {
                        lo = mid;
                        v_lo = vm;
                    } else {
                        hi = mid;
                    }
                }
                let dir = if vp < 0.0 { Direction::NegToPos } else { Direction::PosToNeg };
                crossings.push((0.5 * (lo + hi), dir));
            }
        }
        prev = Some((t, v));
    }

    Ok(CrossingReport {
        crossings,
        positive_found,
        witness,
    })
}

/// Log-spaced grid used by the CLI diagnostics and the default scans:
/// 512 points over [1e-3, max(50, 3a + 30)].
pub fn default_shape_grid(a: f64) -> Vec<f64> {
    log_spaced(1e-3, 50f64.max(3.0 * a + 30.0), 512)
}

pub fn log_spaced(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let step = (hi / lo).ln() / (n - 1) as f64;
    (0..n).map(|i| (lo.ln() + step * i as f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_reduces_to_sech_squared_at_half_order() {
        // at ν = 1/2 the 1/t² terms vanish and k = 1 - tanh² = sech²
        let k = curvature_kernel(0.5, 1.0).unwrap();
        assert!((k - 0.41997434161402606939).abs() < 1e-12);
        assert!(k > 0.0);
    }

    #[test]
    fn kernel_reference_and_signs() {
        // mpmath reference at ν = 3/2, t = 2
        let k = curvature_kernel(1.5, 2.0).unwrap();
        assert!((k + 0.32602182983807109925).abs() < 1e-12);
        // ν > ν₀: nonpositive everywhere (spot grid)
        for &t in &[0.3, 1.0, 1.852, 5.0, 20.0] {
            assert!(curvature_kernel(1.5, t).unwrap() <= 0.0, "t = {t}");
        }
        // diverges to -∞ as t -> 0 for ν = 1
        assert!(curvature_kernel(1.0, 1e-3).unwrap() < -1e5);
        // positive bump below ν₀ (mpmath: k_{0.6}(2.05) = 0.0480656945...)
        let k = curvature_kernel(0.6, 2.05).unwrap();
        assert!((k - 0.048065694543736288992).abs() < 1e-11);
        // deep sub-half order, where the ratio runs above 1 (mpmath)
        let k = curvature_kernel(0.1, 5.0).unwrap();
        assert!((k - 0.00923071302354931094).abs() < 1e-12, "k = {k}");
    }

    #[test]
    fn kernel_two_forms_agree() {
        // k = r' - (2ν-1)/t² must match the expanded form
        for &nu in &[0.3, 0.5, 0.78449776, 1.0, 1.5, 3.0] {
            let mut t = 0.05;
            while t <= 50.0 {
                let direct = curvature_kernel(nu, t).unwrap();
                let via_derivative =
                    ratio_derivative_positive_order(nu, t).unwrap().value - (2.0 * nu - 1.0) / (t * t);
                assert!((direct - via_derivative).abs() < 1e-10, "nu = {nu}, t = {t}");
                t *= 1.3;
            }
        }
    }

    #[test]
    fn ratio_gap_values() {
        // l at ν = 1/2: tanh(t) - 2/t
        let g = ratio_gap(0.5, 1.0).unwrap();
        assert!((g - (1f64.tanh() - 2.0)).abs() < 1e-12);
        // ν = 3/2: reduces to the (positive) ratio itself
        let g = ratio_gap(1.5, 2.0).unwrap();
        assert!(g > 0.0);
        // strictly increasing for 1/2 < ν < 3/2
        for &nu in &[0.6, 1.0, 1.4] {
            let mut prev = f64::NEG_INFINITY;
            let mut t = 0.05;
            while t <= 60.0 {
                let g = ratio_gap(nu, t).unwrap();
                assert!(g > prev, "nu = {nu}, t = {t}");
                prev = g;
                t *= 1.2;
            }
        }
    }

    #[test]
    fn curvature_identity_with_kernel() {
        for &a in &[0.5, 1.0, 2.0, 5.0] {
            for &nu in &[0.5, 1.0, 2.5] {
                let mut t = 0.05;
                while t <= 20.0 {
                    let c = log_density_curvature(nu, a, t).unwrap();
                    let k = curvature_kernel(nu, a * t).unwrap();
                    assert!((c - (a * a * k - 1.0)).abs() < 1e-10, "nu={nu} a={a} t={t}");
                    t *= 1.4;
                }
            }
        }
    }

    #[test]
    fn curvature_limit_at_origin() {
        // ν = 1/2: d²/dt² log f -> a² - 1 as t -> 0
        for &a in &[0.5, 1.0, 1.5, 3.0] {
            let c = log_density_curvature(0.5, a, 1e-7).unwrap();
            assert!((c - (a * a - 1.0)).abs() < 1e-6, "a = {a}");
        }
        // a <= 1 with ν >= 1/2 keeps the curvature nonpositive
        for &(nu, a) in &[(0.5, 1.0), (1.0, 0.7), (2.0, 1.0)] {
            let mut t = 1e-3;
            while t <= 40.0 {
                assert!(log_density_curvature(nu, a, t).unwrap() <= 1e-10, "nu={nu} a={a} t={t}");
                t *= 1.35;
            }
        }
    }

    #[test]
    fn curvature_matches_second_difference_of_log_density() {
        let point = MarcumPoint::new(2.0, 3.0, 0.0).unwrap();
        let (t, h) = (2.0, 1e-4);
        let d2 = (ln_integrand(point, t - h).unwrap() - 2.0 * ln_integrand(point, t).unwrap()
            + ln_integrand(point, t + h).unwrap())
            / (h * h);
        let c = log_density_curvature(2.0, 3.0, t).unwrap();
        assert!((c - d2).abs() < 1e-5, "{c} vs {d2}");
    }

    #[test]
    fn slope_statistic_closed_forms() {
        // a = 0: (2ν-1)/t² - 1
        let psi = slope_statistic(2.0, 0.0, 2.0).unwrap();
        assert!((psi - (3.0 / 4.0 - 1.0)).abs() < 1e-14);
        // ν = 1/2, a = 1: tanh(t)/t - 1
        let psi = slope_statistic(0.5, 1.0, 1.3).unwrap();
        assert!((psi - (1.3f64.tanh() / 1.3 - 1.0)).abs() < 1e-13);
        assert!(slope_statistic(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn slope_statistic_is_decreasing() {
        for &nu in &[0.5, 1.0, 2.0, 7.0] {
            for &a in &[0.0, 0.5, 1.0, 2.0, 5.0] {
                let mut prev = f64::INFINITY;
                let mut t = 1e-3;
                while t <= 60.0 {
                    let psi = slope_statistic(nu, a, t).unwrap();
                    assert!(psi < prev + 1e-12, "nu={nu} a={a} t={t}");
                    prev = psi;
                    t *= 1.25;
                }
            }
        }
    }

    #[test]
    fn classify_rayleigh() {
        // ν = 1, a = 0: mode at exactly t = 1; both phases log-concave
        let grid = default_shape_grid(0.0);
        let report = classify_shape(1.0, 0.0, &grid).unwrap();
        match report.mode {
            ModeLocation::Interior(t0) => assert!((t0 - 1.0).abs() < 1e-9),
            ModeLocation::Boundary => panic!("Rayleigh has an interior mode"),
        }
        assert_eq!(report.rising_logconcave, PhaseConcavity::Yes);
        assert_eq!(report.declining_logconcave, PhaseConcavity::Yes);
        let (worst, _) = report.worst_second_difference.unwrap();
        assert!(worst < 0.0);
    }

    #[test]
    fn classify_rising_phase_violation() {
        // ν = 1/2, a = 2: curvature near 0+ tends to a² - 1 = 3 > 0
        let grid = default_shape_grid(2.0);
        let report = classify_shape(0.5, 2.0, &grid).unwrap();
        assert_eq!(report.rising_logconcave, PhaseConcavity::No);
        assert_eq!(report.declining_logconcave, PhaseConcavity::Yes);
        let (worst, at) = report.worst_second_difference.unwrap();
        assert!(worst > 1.0 && at < 0.5, "worst = {worst} at {at}");
    }

    #[test]
    fn classify_boundary_mode() {
        // ν = 1/2, a = 0: f = c e^{-t²/2} declines from t = 0
        let grid = default_shape_grid(0.0);
        let report = classify_shape(0.5, 0.0, &grid).unwrap();
        assert_eq!(report.mode, ModeLocation::Boundary);
        assert_eq!(report.rising_logconcave, PhaseConcavity::EmptyPhase);
        assert_eq!(report.declining_logconcave, PhaseConcavity::Yes);
    }

    #[test]
    fn classify_grid_validation() {
        assert!(classify_shape(1.0, 0.0, &log_spaced(1e-3, 50.0, 32)).is_err());
        assert!(classify_shape(1.0, 0.0, &log_spaced(0.5, 50.0, 128)).is_err());
        assert!(classify_shape(1.0, 10.0, &log_spaced(1e-3, 20.0, 128)).is_err());
        let mut unsorted = log_spaced(1e-3, 50.0, 128);
        unsorted.swap(10, 11);
        assert!(classify_shape(1.0, 0.0, &unsorted).is_err());
    }

    #[test]
    fn scan_sign_flips_around_critical_order() {
        // below the critical order the kernel turns positive somewhere
        let r = scan_sign(ScanTarget::CurvatureKernel, 0.6, 0.05, 30.0, 2048).unwrap();
        assert!(r.positive_found);
        assert_eq!(r.crossings.len(), 2);
        assert_eq!(r.crossings[0].1, Direction::NegToPos);
        assert_eq!(r.crossings[1].1, Direction::PosToNeg);
        // above it the kernel stays nonpositive
        let r = scan_sign(ScanTarget::CurvatureKernel, 0.9, 0.05, 30.0, 2048).unwrap();
        assert!(!r.positive_found);
        assert!(r.crossings.is_empty());
    }

    #[test]
    fn scan_sign_ratio_gap_has_single_crossing() {
        let r = scan_sign(ScanTarget::RatioGap, 1.0, 0.05, 60.0, 1024).unwrap();
        assert_eq!(r.crossings.len(), 1);
        assert_eq!(r.crossings[0].1, Direction::NegToPos);
        // l_1(t) = r_1(t) - 1/t; check the refined zero satisfies it
        let (t1, _) = r.crossings[0];
        let residual = ratio_gap(1.0, t1).unwrap();
        assert!(residual.abs() < 1e-10, "residual = {residual}");
    }

    #[test]
    fn kernel_at_ratio_gap_zero() {
        // where the gap vanishes, the kernel collapses to 1 - (5-2ν)/t₁²
        for &nu in &[0.6, 0.9, 1.2, 1.4] {
            let scan = scan_sign(ScanTarget::RatioGap, nu, 0.05, 60.0, 1024).unwrap();
            assert_eq!(scan.crossings.len(), 1, "nu = {nu}");
            let (t1, _) = scan.crossings[0];
            let k = curvature_kernel(nu, t1).unwrap();
            let reduced = 1.0 - (5.0 - 2.0 * nu) / (t1 * t1);
            assert!((k - reduced).abs() < 1e-8, "nu = {nu}: {k} vs {reduced}");
        }
    }

    #[test]
    fn classify_rejects_non_unimodal_slope_structure() {
        // below order 1/2 with noncentrality the density declines, rises,
        // and declines again; the classifier must refuse rather than guess
        let grid = default_shape_grid(3.0);
        assert!(matches!(
            classify_shape(0.3, 3.0, &grid),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn scan_sign_validates_inputs() {
        assert!(scan_sign(ScanTarget::CurvatureKernel, 1.0, 0.1, 10.0, 50).is_err());
        assert!(scan_sign(ScanTarget::CurvatureKernel, 1.0, 5.0, 1.0, 200).is_err());
        assert!(scan_sign(ScanTarget::CurvatureKernel, 0.0, 0.1, 10.0, 200).is_err());
    }
}
