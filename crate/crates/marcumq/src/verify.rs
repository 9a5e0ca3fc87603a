//! Grid verification of the log-concavity properties of Q_ν(a, b), its
//! complement, the noncentral chi-square CDF/SF in the squared
//! parameterization, the integrand curvature, the curvature kernel sign,
//! the slope-statistic monotonicity, the TP₂ kernel fact, and the small-b
//! tail asymptotic.
//!
//! Each scan walks a grid of cells. Log-concavity along an axis is tested
//! by discrete second differences of the log values: a window fails when
//! D² > slack, with slack = base + 4·tol / min(value over the window) so
//! that evaluation error can never masquerade as a violation; a window
//! that still fails is re-evaluated at 10× tighter tolerance before it is
//! reported. Cells fall into three classes: asserted (a theorem covers
//! them; any violation is a failure), expected-violation (the theorem's
//! converse predicts a violation; *not* finding one is the failure), and
//! exploratory (open territory; observed, never asserted).
//!
//! All loops run in a fixed order and reports are byte-stable across runs.

use crate::concavity::{curvature_kernel, log_density_curvature, log_spaced, slope_statistic};
use crate::error::{Error, Result};
use crate::gamma::ln_gamma;
use crate::marcum::{marcum_q, marcum_q_complement, MarcumPoint, MethodChoice};

/// The critical order at the printed precision used for grid defaults and
/// cell classification (cells within 1e-3 of it are classified
/// exploratory, so the truncation is immaterial).
pub const CRITICAL_ORDER: f64 = 0.78449776;

/// Margin of safety around domain boundaries when classifying cells.
const BOUNDARY_PAD: f64 = 1e-3;

/// Values below this are treated as underflowed and their windows skipped.
const SKIP_FLOOR: f64 = 1e-300;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    /// log Q_ν(a, b) concave in b (asserted for ν >= 1/2; expected
    /// violation near b = 0 for ν < 1/2, a = 0).
    LogConcaveQInB,
    /// log(1 - Q_ν(a, b)) concave in b (asserted for ν >= 1/2 with a <= 1
    /// and for ν >= the critical order; exploratory elsewhere).
    LogConcaveComplementInB,
    /// Noncentral chi-square CDF 1 - Q_ν(√a, √b): log-concave in b.
    ChiSqCdfInB,
    /// ... in ν.
    ChiSqCdfInNu,
    /// ... in a.
    ChiSqCdfInA,
    /// Noncentral chi-square SF Q_ν(√a, √b): log-concave in b for ν >= 1.
    ChiSqSfInB,
    /// ... in ν >= 1/2 (below 1/2 is an open question: exploratory).
    ChiSqSfInNu,
    /// ... in a.
    ChiSqSfInA,
    /// cosh(t₂s)/cosh(t₁s) nondecreasing in s for t₁ < t₂.
    Tp2Kernel,
    /// -log Q_ν(0, b) ~ b^{2ν} 2^{-ν}/Γ(ν+1) as b -> 0.
    SmallBAsymptotic,
    /// d²/dt² log f <= 0 for ν >= 1/2, a <= 1 (expected violation at
    /// ν = 1/2, a > 1); also asserted above the critical order for all a.
    IntegrandCurvature,
    /// Sign of the curvature kernel flips across the critical order.
    KernelSign,
    /// Slope statistic strictly decreasing for ν >= 1/2.
    SlopeMonotone,
}

impl Property {
    pub fn id(self) -> &'static str {
        match self {
            Self::LogConcaveQInB => "logconcave-q-b",
            Self::LogConcaveComplementInB => "logconcave-1mq-b",
            Self::ChiSqCdfInB => "chisq-cdf-b",
            Self::ChiSqCdfInNu => "chisq-cdf-nu",
            Self::ChiSqCdfInA => "chisq-cdf-a",
            Self::ChiSqSfInB => "chisq-sf-b",
            Self::ChiSqSfInNu => "chisq-sf-nu",
            Self::ChiSqSfInA => "chisq-sf-a",
            Self::Tp2Kernel => "tp2",
            Self::SmallBAsymptotic => "small-b-asymptotic",
            Self::IntegrandCurvature => "integrand-curvature",
            Self::KernelSign => "kernel-sign",
            Self::SlopeMonotone => "slope-monotone",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let canonical = match s {
            "tp2-kernel" => "tp2",
            other => other,
        };
        Self::all().into_iter().find(|p| p.id() == canonical)
    }

    pub fn all() -> Vec<Self> {
        vec![
            Self::LogConcaveQInB,
            Self::LogConcaveComplementInB,
            Self::ChiSqCdfInB,
            Self::ChiSqCdfInNu,
            Self::ChiSqCdfInA,
            Self::ChiSqSfInB,
            Self::ChiSqSfInNu,
            Self::ChiSqSfInA,
            Self::Tp2Kernel,
            Self::SmallBAsymptotic,
            Self::IntegrandCurvature,
            Self::KernelSign,
            Self::SlopeMonotone,
        ]
    }
}

/// Grids and thresholds of one scan. The grid named by the property's
/// axis suffix is the scanned axis (uniform for second-difference scans);
/// the other grids enumerate cells. For the t-axis diagnostics
/// (integrand-curvature, kernel-sign, slope-monotone) the `b_grid` holds
/// the t samples.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub property: Property,
    pub nu_grid: Vec<f64>,
    pub a_grid: Vec<f64>,
    pub b_grid: Vec<f64>,
    /// Spacing of the scanned axis (second-difference step).
    pub step: f64,
    /// Base additive slack of the violation threshold.
    pub slack: f64,
    /// Q evaluation tolerance.
    pub tol: f64,
}

/// Fixed coordinates of one cell; NaN marks the scanned coordinate.
/// For tp2 rows the two kernel arguments t₁, t₂ are carried in the
/// `nu` and `a` fields.
#[derive(Clone, Copy, Debug)]
pub struct CellKey {
    pub nu: f64,
    pub a: f64,
    pub axis_lo: f64,
    pub axis_hi: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellVerdict {
    Pass,
    Fail,
    Exploratory,
    /// The theorem predicts a violation here and the scan found one.
    ExpectedViolation,
}

impl CellVerdict {
    fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Exploratory => "exploratory",
            Self::ExpectedViolation => "expected_violation",
        }
    }
}

/// Outcome of one cell. `worst_margin > 0` means the cell failed its
/// expectation (for exploratory cells the margin is observational only).
#[derive(Clone, Copy, Debug)]
pub struct CellOutcome {
    pub key: CellKey,
    pub worst_margin: f64,
    pub worst_at: f64,
    pub verdict: CellVerdict,
    pub windows: usize,
    pub skipped: usize,
}

#[derive(Clone, Copy, Debug)]
pub struct Violation {
    pub key: CellKey,
    pub at: f64,
    pub margin: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Exploratory,
}

impl Verdict {
    fn as_str(self) -> &'static str {
        match self {
            Self::Pass => "pass",
            Self::Fail => "fail",
            Self::Exploratory => "exploratory",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub property: Property,
    pub cells_checked: usize,
    /// Failed asserted or expected-violation cells.
    pub violations: Vec<Violation>,
    /// Most positive margin over non-exploratory cells
    /// (-inf when the scan has none).
    pub worst_margin: f64,
    pub verdict: Verdict,
    pub cells: Vec<CellOutcome>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Expectation {
    AllHold,
    ViolationExists,
    Observe,
}

fn assemble_report(property: Property, raw: Vec<(CellKey, Expectation, CellScan)>) -> ScanReport {
    let mut cells = Vec::with_capacity(raw.len());
    let mut violations = Vec::new();
    let mut worst_margin = f64::NEG_INFINITY;
    let mut any_asserted = false;

    for (key, expectation, scan) in raw {
        let (margin, at, verdict) = match expectation {
            Expectation::AllHold => {
                let (m, at) = scan.worst_asserted.unwrap_or((f64::NEG_INFINITY, f64::NAN));
                let v = if m > 0.0 { CellVerdict::Fail } else { CellVerdict::Pass };
                (m, at, v)
            }
            Expectation::ViolationExists => {
                let (m, at) = scan.worst_any.unwrap_or((f64::NEG_INFINITY, f64::NAN));
                // margin flips: not finding the predicted violation is the failure
                let v = if m > 0.0 { CellVerdict::ExpectedViolation } else { CellVerdict::Fail };
                (-m, at, v)
            }
            Expectation::Observe => {
                let (m, at) = scan.worst_any.unwrap_or((f64::NEG_INFINITY, f64::NAN));
                (m, at, CellVerdict::Exploratory)
            }
        };
        if expectation != Expectation::Observe {
            any_asserted = true;
            if margin > worst_margin {
                worst_margin = margin;
            }
            if verdict == CellVerdict::Fail {
                violations.push(Violation { key, at, margin });
            }
        }
        cells.push(CellOutcome {
            key,
            worst_margin: margin,
            worst_at: at,
            verdict,
            windows: scan.windows,
            skipped: scan.skipped,
        });
    }

    let verdict = if !violations.is_empty() {
        Verdict::Fail
    } else if any_asserted {
        Verdict::Pass
    } else {
        Verdict::Exploratory
    };
    ScanReport {
        property,
        cells_checked: cells.len(),
        violations,
        worst_margin,
        verdict,
        cells,
    }
}

/// Raw scan of one cell before the expectation is applied.
struct CellScan {
    /// most positive margin among asserted windows: (margin, location)
    worst_asserted: Option<(f64, f64)>,
    /// most positive margin among all windows
    worst_any: Option<(f64, f64)>,
    windows: usize,
    skipped: usize,
}

fn max_track(slot: &mut Option<(f64, f64)>, margin: f64, at: f64) {
    if slot.is_none_or(|(m, _)| margin > m) {
        *slot = Some((margin, at));
    }
}

/// Second-difference log-concavity scan of `eval` along a uniform axis.
/// `window_asserted` classifies each window center (used where a theorem's
/// hypothesis cuts through the scanned axis).
fn second_difference_scan(
    axis: &[f64],
    tol: f64,
    base_slack: f64,
    eval: &dyn Fn(f64, f64) -> Result<f64>,
    window_asserted: &dyn Fn(f64, f64) -> bool,
) -> Result<CellScan> {
    let mut values = Vec::with_capacity(axis.len());
    for &x in axis {
        values.push(eval(x, tol)?);
    }
    let mut scan = CellScan {
        worst_asserted: None,
        worst_any: None,
        windows: 0,
        skipped: 0,
    };
    let step = axis[1] - axis[0];
    for i in 1..axis.len() - 1 {
        let trio = [values[i - 1], values[i], values[i + 1]];
        if trio.iter().any(|&v| v < SKIP_FLOOR) {
            scan.skipped += 1;
            continue;
        }
        scan.windows += 1;
        let min_v = trio[0].min(trio[1]).min(trio[2]);
        let d2 = trio[0].ln() - 2.0 * trio[1].ln() + trio[2].ln();
        let mut margin = d2 - (base_slack + 4.0 * tol / min_v);
        if margin > 0.0 {
            // re-evaluate at 10x tighter tolerance before reporting
            let tight = (tol / 10.0).max(1e-14);
            let trio = [
                eval(axis[i - 1], tight)?,
                eval(axis[i], tight)?,
                eval(axis[i + 1], tight)?,
            ];
            if trio.iter().any(|&v| v < SKIP_FLOOR) {
                scan.skipped += 1;
                scan.windows -= 1;
                continue;
            }
            let min_v = trio[0].min(trio[1]).min(trio[2]);
            let d2 = trio[0].ln() - 2.0 * trio[1].ln() + trio[2].ln();
            margin = d2 - (base_slack + 4.0 * tight / min_v);
        }
        let asserted = window_asserted(axis[i], step);
        if asserted {
            max_track(&mut scan.worst_asserted, margin, axis[i]);
        }
        max_track(&mut scan.worst_any, margin, axis[i]);
    }
    Ok(scan)
}

fn require(cond: bool, detail: String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidGrid { detail })
    }
}

fn validate_grid(name: &str, grid: &[f64], min_allowed: f64) -> Result<()> {
    require(!grid.is_empty(), format!("{name} grid is empty"))?;
    require(
        grid.iter().all(|v| v.is_finite() && *v >= min_allowed),
        format!("{name} grid leaves the domain (min {min_allowed})"),
    )?;
    require(
        grid.windows(2).all(|w| w[1] > w[0]),
        format!("{name} grid must be strictly increasing"),
    )
}

fn validate_axis(name: &str, grid: &[f64], step: f64) -> Result<()> {
    require(grid.len() >= 3, format!("{name} axis needs at least 3 points"))?;
    require(
        grid.windows(2).all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * step),
        format!("{name} axis must be uniform with the configured step"),
    )
}

fn cell_context(e: Error, property: Property, nu: f64, a: f64) -> Error {
    let ctx = format!(" [{} cell nu = {nu}, a = {a}]", property.id());
    match e {
        Error::Convergence {
            what,
            achieved,
            requested,
        } => Error::Convergence {
            what: what + &ctx,
            achieved,
            requested,
        },
        Error::Overflow { what } => Error::Overflow { what: what + &ctx },
        other => other,
    }
}

/// Runs one grid-family scan. `Tp2Kernel` and `SmallBAsymptotic` have
/// dedicated entry points with their own signatures.
pub fn run_scan(config: &ScanConfig) -> Result<ScanReport> {
    match config.property {
        Property::LogConcaveQInB | Property::LogConcaveComplementInB => logconcave_in_b(config),
        Property::ChiSqCdfInB | Property::ChiSqSfInB => chisq_in_b(config),
        Property::ChiSqCdfInNu | Property::ChiSqSfInNu => chisq_in_nu(config),
        Property::ChiSqCdfInA | Property::ChiSqSfInA => chisq_in_a(config),
        Property::IntegrandCurvature => integrand_curvature(config),
        Property::KernelSign => kernel_sign(config),
        Property::SlopeMonotone => slope_monotone(config),
        Property::Tp2Kernel => Err(Error::InvalidGrid {
            detail: "tp2 runs through check_tp2_kernel (t1, t2, s_grid)".into(),
        }),
        Property::SmallBAsymptotic => Err(Error::InvalidGrid {
            detail: "small-b-asymptotic runs through check_small_b_asymptotic".into(),
        }),
    }
}

/// Survival-side scan: log Q_ν(a, b) (or its complement) concave in b.
fn logconcave_in_b(config: &ScanConfig) -> Result<ScanReport> {
    let complement = config.property == Property::LogConcaveComplementInB;
    validate_grid("nu", &config.nu_grid, f64::MIN_POSITIVE)?;
    validate_grid("a", &config.a_grid, 0.0)?;
    validate_grid("b", &config.b_grid, 0.0)?;
    validate_axis("b", &config.b_grid, config.step)?;

    let mut raw = Vec::new();
    for &nu in &config.nu_grid {
        for &a in &config.a_grid {
            let expectation = if complement {
                if (nu >= 0.5 && a <= 1.0) || nu >= CRITICAL_ORDER + BOUNDARY_PAD {
                    Expectation::AllHold
                } else {
                    Expectation::Observe
                }
            } else if nu >= 0.5 {
                Expectation::AllHold
            } else if a == 0.0 {
                Expectation::ViolationExists
            } else {
                Expectation::Observe
            };
            let eval = |b: f64, tol: f64| -> Result<f64> {
                let p = MarcumPoint::new(nu, a, b)?;
                let r = if complement {
                    marcum_q_complement(p, MethodChoice::Auto, tol)?
                } else {
                    marcum_q(p, MethodChoice::Auto, tol)?
                };
                Ok(r.value)
            };
            let scan = second_difference_scan(&config.b_grid, config.tol, config.slack, &eval, &|_, _| true)
                .map_err(|e| cell_context(e, config.property, nu, a))?;
            let key = CellKey {
                nu,
                a,
                axis_lo: config.b_grid[0],
                axis_hi: *config.b_grid.last().unwrap(),
            };
            raw.push((key, expectation, scan));
        }
    }
    Ok(assemble_report(config.property, raw))
}

/// Squared parameterization: F(ν, α, β) = Q_ν(√α, √β); the CDF scans test
/// 1 - F, the SF scans test F, along the named axis.
fn chisq_eval(property: Property, nu: f64, alpha: f64, beta: f64, tol: f64) -> Result<f64> {
    let p = MarcumPoint::new(nu, alpha.sqrt(), beta.sqrt())?;
    let sf = matches!(
        property,
        Property::ChiSqSfInB | Property::ChiSqSfInNu | Property::ChiSqSfInA
    );
    let r = if sf {
        marcum_q(p, MethodChoice::Auto, tol)?
    } else {
        marcum_q_complement(p, MethodChoice::Auto, tol)?
    };
    Ok(r.value)
}

fn chisq_in_b(config: &ScanConfig) -> Result<ScanReport> {
    let sf = config.property == Property::ChiSqSfInB;
    validate_grid("nu", &config.nu_grid, f64::MIN_POSITIVE)?;
    validate_grid("a", &config.a_grid, 0.0)?;
    validate_grid("b", &config.b_grid, 0.0)?;
    validate_axis("b", &config.b_grid, config.step)?;

    let mut raw = Vec::new();
    for &nu in &config.nu_grid {
        for &a in &config.a_grid {
            let expectation = if sf && nu < 1.0 {
                Expectation::Observe
            } else {
                Expectation::AllHold
            };
            let eval = |b: f64, tol: f64| chisq_eval(config.property, nu, a, b, tol);
            let scan = second_difference_scan(&config.b_grid, config.tol, config.slack, &eval, &|_, _| true)
                .map_err(|e| cell_context(e, config.property, nu, a))?;
            let key = CellKey {
                nu,
                a,
                axis_lo: config.b_grid[0],
                axis_hi: *config.b_grid.last().unwrap(),
            };
            raw.push((key, expectation, scan));
        }
    }
    Ok(assemble_report(config.property, raw))
}

fn chisq_in_nu(config: &ScanConfig) -> Result<ScanReport> {
    let sf = config.property == Property::ChiSqSfInNu;
    validate_grid("nu", &config.nu_grid, f64::MIN_POSITIVE)?;
    validate_grid("a", &config.a_grid, 0.0)?;
    validate_grid("b", &config.b_grid, 0.0)?;
    validate_axis("nu", &config.nu_grid, config.step)?;

    let mut raw = Vec::new();
    for &a in &config.a_grid {
        for &b in &config.b_grid {
            let eval = |nu: f64, tol: f64| chisq_eval(config.property, nu, a, b, tol);
            // SF in ν is a theorem on [1/2, ∞); below is an open question
            let window_asserted = |center: f64, step: f64| !sf || center - step >= 0.5 - 1e-12;
            let scan = second_difference_scan(&config.nu_grid, config.tol, config.slack, &eval, &window_asserted)
                .map_err(|e| cell_context(e, config.property, f64::NAN, a))?;
            let expectation = if scan.worst_asserted.is_some() {
                Expectation::AllHold
            } else {
                Expectation::Observe
            };
            let key = CellKey {
                nu: f64::NAN,
                a,
                axis_lo: b,
                axis_hi: b,
            };
            raw.push((key, expectation, scan));
        }
    }
    Ok(assemble_report(config.property, raw))
}

fn chisq_in_a(config: &ScanConfig) -> Result<ScanReport> {
    validate_grid("nu", &config.nu_grid, f64::MIN_POSITIVE)?;
    validate_grid("a", &config.a_grid, 0.0)?;
    validate_grid("b", &config.b_grid, 0.0)?;
    validate_axis("a", &config.a_grid, config.step)?;

    let mut raw = Vec::new();
    for &nu in &config.nu_grid {
        for &b in &config.b_grid {
            let eval = |a: f64, tol: f64| chisq_eval(config.property, nu, a, b, tol);
            let scan = second_difference_scan(&config.a_grid, config.tol, config.slack, &eval, &|_, _| true)
                .map_err(|e| cell_context(e, config.property, nu, f64::NAN))?;
            let key = CellKey {
                nu,
                a: f64::NAN,
                axis_lo: b,
                axis_hi: b,
            };
            raw.push((key, Expectation::AllHold, scan));
        }
    }
    Ok(assemble_report(config.property, raw))
}

/// Curvature scan: closed-form d²/dt² log f over a t grid.
fn integrand_curvature(config: &ScanConfig) -> Result<ScanReport> {
    validate_grid("nu", &config.nu_grid, f64::MIN_POSITIVE)?;
    validate_grid("a", &config.a_grid, f64::MIN_POSITIVE)?;
    validate_grid("t", &config.b_grid, f64::MIN_POSITIVE)?;

    let mut raw = Vec::new();
    for &nu in &config.nu_grid {
        for &a in &config.a_grid {
            let expectation = if (nu >= 0.5 && a <= 1.0) || nu >= CRITICAL_ORDER + BOUNDARY_PAD {
                Expectation::AllHold
            } else if (nu - 0.5).abs() <= 1e-12 && a > 1.0 {
                Expectation::ViolationExists
            } else {
                Expectation::Observe
            };
            let mut scan = CellScan {
                worst_asserted: None,
                worst_any: None,
                windows: 0,
                skipped: 0,
            };
            for &t in &config.b_grid {
                let c = log_density_curvature(nu, a, t).map_err(|e| cell_context(e, config.property, nu, a))?;
                scan.windows += 1;
                let margin = c - config.slack;
                max_track(&mut scan.worst_asserted, margin, t);
                max_track(&mut scan.worst_any, margin, t);
            }
            let key = CellKey {
                nu,
                a,
                axis_lo: config.b_grid[0],
                axis_hi: *config.b_grid.last().unwrap(),
            };
            raw.push((key, expectation, scan));
        }
    }
    Ok(assemble_report(config.property, raw))
}

/// Kernel-sign scan: the curvature kernel stays nonpositive at and above the
/// critical order and turns positive somewhere below it.
fn kernel_sign(config: &ScanConfig) -> Result<ScanReport> {
    validate_grid("nu", &config.nu_grid, f64::MIN_POSITIVE)?;
    validate_grid("t", &config.b_grid, f64::MIN_POSITIVE)?;

    let mut raw = Vec::new();
    for &nu in &config.nu_grid {
        // at and below 1/2 the kernel is positive near the origin; between
        // 1/2 and the critical order it turns positive in a midrange bump
        let expectation = if nu <= CRITICAL_ORDER - BOUNDARY_PAD {
            Expectation::ViolationExists
        } else if nu < CRITICAL_ORDER + BOUNDARY_PAD {
            Expectation::Observe
        } else {
            Expectation::AllHold
        };
        let mut scan = CellScan {
            worst_asserted: None,
            worst_any: None,
            windows: 0,
            skipped: 0,
        };
        for &t in &config.b_grid {
            let k = curvature_kernel(nu, t).map_err(|e| cell_context(e, config.property, nu, f64::NAN))?;
            scan.windows += 1;
            let margin = k - config.slack;
            max_track(&mut scan.worst_asserted, margin, t);
            max_track(&mut scan.worst_any, margin, t);
        }
        let key = CellKey {
            nu,
            a: f64::NAN,
            axis_lo: config.b_grid[0],
            axis_hi: *config.b_grid.last().unwrap(),
        };
        raw.push((key, expectation, scan));
    }
    Ok(assemble_report(config.property, raw))
}

/// Monotonicity scan: the slope statistic decreases strictly in t.
fn slope_monotone(config: &ScanConfig) -> Result<ScanReport> {
    validate_grid("nu", &config.nu_grid, 0.5)?;
    validate_grid("a", &config.a_grid, 0.0)?;
    validate_grid("t", &config.b_grid, f64::MIN_POSITIVE)?;

    let mut raw = Vec::new();
    for &nu in &config.nu_grid {
        for &a in &config.a_grid {
            let mut scan = CellScan {
                worst_asserted: None,
                worst_any: None,
                windows: 0,
                skipped: 0,
            };
            let mut prev: Option<(f64, f64)> = None;
            for &t in &config.b_grid {
                let psi = slope_statistic(nu, a, t).map_err(|e| cell_context(e, config.property, nu, a))?;
                if let Some((tp, psi_prev)) = prev {
                    scan.windows += 1;
                    let margin = (psi - psi_prev) - config.slack;
                    max_track(&mut scan.worst_asserted, margin, tp);
                    max_track(&mut scan.worst_any, margin, tp);
                }
                prev = Some((t, psi));
            }
            let key = CellKey {
                nu,
                a,
                axis_lo: config.b_grid[0],
                axis_hi: *config.b_grid.last().unwrap(),
            };
            raw.push((key, Expectation::AllHold, scan));
        }
    }
    Ok(assemble_report(config.property, raw))
}

/// The six noncentral chi-square log-concavity statements (CDF and SF
/// along the b, ν, and a axes of the squared parameterization) with
/// default grids. One report per axis scan.
pub fn check_chisq_logconcavity() -> Vec<Result<ScanReport>> {
    [
        Property::ChiSqCdfInB,
        Property::ChiSqCdfInNu,
        Property::ChiSqCdfInA,
        Property::ChiSqSfInB,
        Property::ChiSqSfInNu,
        Property::ChiSqSfInA,
    ]
    .into_iter()
    .map(|p| run_scan(&default_config(p)))
    .collect()
}

/// TP₂ kernel fact: g(s, t₂)/g(s, t₁) = cosh(t₂s)/cosh(t₁s) must be
/// nondecreasing in s on (0, 1) for t₁ <= t₂ (the (1-s²) factor cancels).
/// Evaluated in log form, overflow-free for large t.
pub fn check_tp2_kernel(t1: f64, t2: f64, s_grid: &[f64]) -> Result<ScanReport> {
    require(
        t1 > 0.0 && t2 >= t1,
        format!("tp2 needs 0 < t1 <= t2, got ({t1}, {t2})"),
    )?;
    validate_grid("s", s_grid, f64::MIN_POSITIVE)?;
    require(
        *s_grid.last().unwrap() < 1.0,
        "s grid must stay inside (0, 1)".into(),
    )?;

    let ln_ratio = |s: f64| (t2 - t1) * s + (-2.0 * t2 * s).exp().ln_1p() - (-2.0 * t1 * s).exp().ln_1p();
    let mut scan = CellScan {
        worst_asserted: None,
        worst_any: None,
        windows: 0,
        skipped: 0,
    };
    let slack = 1e-12;
    let mut prev: Option<(f64, f64)> = None;
    for &s in s_grid {
        let v = ln_ratio(s);
        if let Some((sp, vp)) = prev {
            scan.windows += 1;
            let margin = (vp - v) - slack; // a decrease is the violation
            max_track(&mut scan.worst_asserted, margin, sp);
            max_track(&mut scan.worst_any, margin, sp);
        }
        prev = Some((s, v));
    }
    let key = CellKey {
        nu: t1,
        a: t2,
        axis_lo: s_grid[0],
        axis_hi: *s_grid.last().unwrap(),
    };
    Ok(assemble_report(Property::Tp2Kernel, vec![(key, Expectation::AllHold, scan)]))
}

/// Small-b tail: -log Q_ν(0, b) / (C b^{2ν}) -> 1 with C = 2^{-ν}/Γ(ν+1).
/// The deviation at the smallest b must be within 2% and must shrink
/// monotonically over the last four grid points.
pub fn check_small_b_asymptotic(nu: f64, b_grid: &[f64], tol: f64) -> Result<ScanReport> {
    let raw = small_b_cell(nu, b_grid, tol)?;
    Ok(assemble_report(Property::SmallBAsymptotic, vec![raw]))
}

/// Suite form: one cell per order.
pub fn check_small_b_many(nu_grid: &[f64], b_grid: &[f64], tol: f64) -> Result<ScanReport> {
    let mut raw = Vec::new();
    for &nu in nu_grid {
        raw.push(small_b_cell(nu, b_grid, tol)?);
    }
    Ok(assemble_report(Property::SmallBAsymptotic, raw))
}

fn small_b_cell(nu: f64, b_grid: &[f64], tol: f64) -> Result<(CellKey, Expectation, CellScan)> {
    require(nu > 0.0, format!("small-b needs nu > 0, got {nu}"))?;
    require(!b_grid.is_empty(), "small-b grid is empty".into())?;
    require(
        b_grid.iter().all(|&b| b > 0.0 && b <= 0.2),
        "small-b grid must lie in (0, 0.2]".into(),
    )?;
    require(
        b_grid.windows(2).all(|w| w[1] < w[0]),
        "small-b grid must decrease toward 0".into(),
    )?;

    let ln_c = -nu * std::f64::consts::LN_2 - ln_gamma(nu + 1.0);
    let mut scan = CellScan {
        worst_asserted: None,
        worst_any: None,
        windows: 0,
        skipped: 0,
    };
    let mut devs: Vec<(f64, f64)> = Vec::new();
    for &b in b_grid {
        let p = marcum_q_complement(MarcumPoint::new(nu, 0.0, b)?, MethodChoice::Auto, tol)?;
        if p.value < SKIP_FLOOR {
            scan.skipped += 1;
            continue;
        }
        let neg_log_q = -(-p.value).ln_1p();
        let ratio = neg_log_q / (ln_c + 2.0 * nu * b.ln()).exp();
        devs.push((b, (ratio - 1.0).abs()));
    }
    require(!devs.is_empty(), format!("small-b: all points underflowed (nu = {nu})"))?;

    // deviation at the smallest b within 2%
    let (b_last, dev_last) = *devs.last().unwrap();
    scan.windows += 1;
    let margin = dev_last - 0.02;
    max_track(&mut scan.worst_asserted, margin, b_last);
    max_track(&mut scan.worst_any, margin, b_last);

    // deviation shrinks monotonically along the tail (last four points)
    let tail_start = devs.len().saturating_sub(4);
    for w in devs[tail_start..].windows(2) {
        let (b_prev, dev_prev) = w[0];
        let (_, dev_next) = w[1];
        scan.windows += 1;
        let margin = dev_next - dev_prev - (1e-12 + 1e-6 * dev_prev);
        max_track(&mut scan.worst_asserted, margin, b_prev);
        max_track(&mut scan.worst_any, margin, b_prev);
    }

    let key = CellKey {
        nu,
        a: 0.0,
        axis_lo: *b_grid.last().unwrap(),
        axis_hi: b_grid[0],
    };
    Ok((key, Expectation::AllHold, scan))
}

/// One entry of a verification suite.
#[derive(Clone, Debug)]
pub enum SuiteEntry {
    Grid(ScanConfig),
    Tp2 { pairs: Vec<(f64, f64)>, points: usize },
    SmallB { nu_grid: Vec<f64>, b_grid: Vec<f64>, tol: f64 },
}

impl SuiteEntry {
    pub fn label(&self) -> String {
        match self {
            Self::Grid(c) => c.property.id().to_string(),
            Self::Tp2 { .. } => Property::Tp2Kernel.id().to_string(),
            Self::SmallB { .. } => Property::SmallBAsymptotic.id().to_string(),
        }
    }
}

#[derive(Debug)]
pub struct SuiteReport {
    pub outcomes: Vec<(String, Result<ScanReport>)>,
}

/// Executes every entry, isolating per-scan failures; output order follows
/// the entry order regardless of runtime behavior.
pub fn run_suite(entries: &[SuiteEntry]) -> SuiteReport {
    let outcomes = entries
        .iter()
        .map(|entry| {
            let report = match entry {
                SuiteEntry::Grid(config) => run_scan(config),
                SuiteEntry::Tp2 { pairs, points } => run_tp2_pairs(pairs, *points),
                SuiteEntry::SmallB { nu_grid, b_grid, tol } => check_small_b_many(nu_grid, b_grid, *tol),
            };
            (entry.label(), report)
        })
        .collect();
    SuiteReport { outcomes }
}

fn run_tp2_pairs(pairs: &[(f64, f64)], points: usize) -> Result<ScanReport> {
    require(!pairs.is_empty(), "tp2 needs at least one (t1, t2) pair".into())?;
    let s_grid: Vec<f64> = (1..=points).map(|i| i as f64 / (points + 1) as f64).collect();
    let mut raw = Vec::new();
    for &(t1, t2) in pairs {
        let report = check_tp2_kernel(t1, t2, &s_grid)?;
        let cell = report.cells[0];
        raw.push((
            cell.key,
            Expectation::AllHold,
            CellScan {
                worst_asserted: Some((cell.worst_margin, cell.worst_at)),
                worst_any: Some((cell.worst_margin, cell.worst_at)),
                windows: cell.windows,
                skipped: cell.skipped,
            },
        ));
    }
    Ok(assemble_report(Property::Tp2Kernel, raw))
}

impl SuiteReport {
    pub fn any_error(&self) -> bool {
        self.outcomes.iter().any(|(_, r)| r.is_err())
    }

    pub fn any_asserted_failure(&self) -> bool {
        self.outcomes
            .iter()
            .any(|(_, r)| matches!(r, Ok(rep) if rep.verdict == Verdict::Fail))
    }

    /// One CSV row per cell: property_id,nu,a,b_lo,b_hi,worst_margin,verdict.
    pub fn csv(&self) -> String {
        let mut out = String::from("property_id,nu,a,b_lo,b_hi,worst_margin,verdict\n");
        for (_, outcome) in &self.outcomes {
            if let Ok(report) = outcome {
                for cell in &report.cells {
                    out.push_str(&format!(
                        "{},{},{},{},{},{},{}\n",
                        report.property.id(),
                        fmt_csv(cell.key.nu),
                        fmt_csv(cell.key.a),
                        fmt_csv(cell.key.axis_lo),
                        fmt_csv(cell.key.axis_hi),
                        fmt_csv(cell.worst_margin),
                        cell.verdict.as_str(),
                    ));
                }
            }
        }
        out
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        let mut failures = 0usize;
        let mut errors = 0usize;
        for (label, outcome) in &self.outcomes {
            match outcome {
                Ok(report) => {
                    if report.verdict == Verdict::Fail {
                        failures += 1;
                    }
                    let exploratory = report
                        .cells
                        .iter()
                        .filter(|c| c.verdict == CellVerdict::Exploratory)
                        .count();
                    let expected = report
                        .cells
                        .iter()
                        .filter(|c| c.verdict == CellVerdict::ExpectedViolation)
                        .count();
                    out.push_str(&format!(
                        "{label}: {} cells={} violations={} exploratory={} expected_violation={} worst_margin={:.3e}\n",
                        report.verdict.as_str(),
                        report.cells_checked,
                        report.violations.len(),
                        exploratory,
                        expected,
                        report.worst_margin,
                    ));
                }
                Err(e) => {
                    errors += 1;
                    out.push_str(&format!("{label}: error {e}\n"));
                }
            }
        }
        let overall = if errors > 0 {
            "error"
        } else if failures > 0 {
            "fail"
        } else {
            "pass"
        };
        out.push_str(&format!(
            "suite: {overall} (scans={}, failures={failures}, errors={errors})\n",
            self.outcomes.len()
        ));
        out
    }
}

fn fmt_csv(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_string()
    } else {
        format!("{x:.16e}")
    }
}

/// Default ν grid bracketing every regime boundary (1/2, the critical
/// order, 3/2) plus small and large orders.
fn default_nu_grid() -> Vec<f64> {
    vec![0.3, 0.5, 0.6, CRITICAL_ORDER, 0.9, 1.0, 1.5, 2.0, 3.0, 7.0]
}

fn default_a_grid() -> Vec<f64> {
    vec![0.0, 0.5, 1.0, 2.0, 5.0, 10.0]
}

fn uniform(lo: f64, hi: f64, points: usize) -> (Vec<f64>, f64) {
    let step = (hi - lo) / (points - 1) as f64;
    ((0..points).map(|i| lo + step * i as f64).collect(), step)
}

/// Default configuration of a grid-family property.
pub fn default_config(property: Property) -> ScanConfig {
    let tol = 1e-10;
    match property {
        Property::LogConcaveQInB | Property::LogConcaveComplementInB => {
            let (b_grid, step) = uniform(0.0, 16.0, 400);
            ScanConfig {
                property,
                nu_grid: default_nu_grid(),
                a_grid: default_a_grid(),
                b_grid,
                step,
                slack: 1e-9,
                tol,
            }
        }
        Property::ChiSqCdfInB => {
            let (b_grid, step) = uniform(0.0, 40.0, 400);
            ScanConfig {
                property,
                nu_grid: vec![0.3, 0.7, 1.0, 2.0, 5.0],
                a_grid: vec![0.0, 1.0, 4.0, 10.0],
                b_grid,
                step,
                slack: 1e-9,
                tol,
            }
        }
        Property::ChiSqSfInB => {
            let (b_grid, step) = uniform(0.0, 40.0, 400);
            ScanConfig {
                property,
                nu_grid: vec![0.7, 1.0, 1.5, 2.0, 5.0],
                a_grid: vec![0.0, 1.0, 4.0, 10.0],
                b_grid,
                step,
                slack: 1e-9,
                tol,
            }
        }
        Property::ChiSqCdfInNu | Property::ChiSqSfInNu => {
            let (nu_grid, step) = uniform(0.2, 5.0, 193);
            ScanConfig {
                property,
                nu_grid,
                a_grid: vec![0.0, 2.0, 8.0],
                b_grid: vec![0.5, 2.0, 8.0],
                step,
                slack: 1e-9,
                tol,
            }
        }
        Property::ChiSqCdfInA | Property::ChiSqSfInA => {
            let (a_grid, step) = uniform(0.0, 30.0, 301);
            ScanConfig {
                property,
                nu_grid: vec![0.3, 1.0, 2.5],
                a_grid,
                b_grid: vec![0.5, 3.0, 10.0],
                step,
                slack: 1e-9,
                tol,
            }
        }
        Property::IntegrandCurvature => ScanConfig {
            property,
            nu_grid: vec![0.5, 0.6, CRITICAL_ORDER, 0.9, 1.0, 1.5, 3.0, 7.0],
            a_grid: vec![0.25, 0.5, 1.0, 1.5, 2.0, 5.0],
            b_grid: log_spaced(1e-3, 60.0, 256),
            step: 0.0,
            slack: 1e-10,
            tol,
        },
        Property::KernelSign => ScanConfig {
            property,
            nu_grid: vec![0.3, 0.5, 0.55, 0.6, 0.7, CRITICAL_ORDER, 0.9, 1.0, 1.2, 1.5, 3.0, 7.0],
            a_grid: Vec::new(),
            b_grid: log_spaced(0.05, 30.0, 2048),
            step: 0.0,
            slack: 1e-12,
            tol,
        },
        Property::SlopeMonotone => ScanConfig {
            property,
            nu_grid: vec![0.5, CRITICAL_ORDER, 1.0, 1.5, 3.0, 7.0],
            a_grid: vec![0.0, 0.5, 1.0, 2.0, 5.0],
            b_grid: log_spaced(1e-3, 60.0, 512),
            step: 0.0,
            slack: 1e-12,
            tol,
        },
        Property::Tp2Kernel | Property::SmallBAsymptotic => ScanConfig {
            property,
            nu_grid: Vec::new(),
            a_grid: Vec::new(),
            b_grid: Vec::new(),
            step: 0.0,
            slack: 0.0,
            tol,
        },
    }
}

pub fn default_tp2_pairs() -> Vec<(f64, f64)> {
    vec![(1.0, 2.0), (0.1, 10.0), (1.5, 1.5), (0.5, 25.0)]
}

pub fn default_small_b_grid() -> Vec<f64> {
    vec![0.2, 0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001]
}

/// The full default verification suite.
pub fn default_suite() -> Vec<SuiteEntry> {
    let mut entries = Vec::new();
    for property in Property::all() {
        match property {
            Property::Tp2Kernel => entries.push(SuiteEntry::Tp2 {
                pairs: default_tp2_pairs(),
                points: 200,
            }),
            Property::SmallBAsymptotic => entries.push(SuiteEntry::SmallB {
                nu_grid: vec![0.3, 0.5, 1.0, 2.0],
                b_grid: default_small_b_grid(),
                tol: 1e-12,
            }),
            p => entries.push(SuiteEntry::Grid(default_config(p))),
        }
    }
    entries
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_q_config() -> ScanConfig {
        let (b_grid, step) = uniform(0.0, 4.0, 101);
        ScanConfig {
            property: Property::LogConcaveQInB,
            nu_grid: vec![1.0],
            a_grid: vec![0.0],
            b_grid,
            step,
            slack: 1e-9,
            tol: 1e-10,
        }
    }

    #[test]
    fn rayleigh_log_q_is_exactly_quadratic() {
        // log Q_1(0, b) = -b²/2: second difference identically -Δ²
        let report = run_scan(&small_q_config()).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert_eq!(report.cells_checked, 1);
        // D² = -Δ² everywhere; the margin adds only the slack term
        let expected = -(0.04f64 * 0.04);
        assert!(
            (report.worst_margin - expected).abs() < 1e-8,
            "worst_margin = {}",
            report.worst_margin
        );
        assert!(report.worst_margin < expected, "slack must push the margin below -Δ²");
    }

    #[test]
    fn sub_half_order_violation_is_found_near_zero() {
        let (b_grid, step) = uniform(0.0, 2.0, 201);
        let config = ScanConfig {
            property: Property::LogConcaveQInB,
            nu_grid: vec![0.3],
            a_grid: vec![0.0],
            b_grid,
            step,
            slack: 1e-9,
            tol: 1e-10,
        };
        let report = run_scan(&config).unwrap();
        assert_eq!(report.verdict, Verdict::Pass, "expected violation is not a failure");
        assert_eq!(report.cells[0].verdict, CellVerdict::ExpectedViolation);
        assert!(report.cells[0].worst_margin < 0.0);
        assert!(report.cells[0].worst_at < 0.5, "violation should sit near b = 0");
    }

    #[test]
    fn exploratory_cells_never_assert() {
        let (b_grid, step) = uniform(0.0, 6.0, 151);
        let config = ScanConfig {
            property: Property::LogConcaveComplementInB,
            nu_grid: vec![0.6],
            a_grid: vec![3.0],
            b_grid,
            step,
            slack: 1e-9,
            tol: 1e-10,
        };
        let report = run_scan(&config).unwrap();
        assert_eq!(report.verdict, Verdict::Exploratory);
        assert!(report.violations.is_empty());
        assert_eq!(report.cells[0].verdict, CellVerdict::Exploratory);
    }

    #[test]
    fn complement_concavity_holds_on_both_sufficient_regions() {
        // case (i): nu >= 1/2 with a <= 1; case (ii): nu above the
        // critical order with large a
        let (b_grid, step) = uniform(0.0, 20.0, 201);
        let config = ScanConfig {
            property: Property::LogConcaveComplementInB,
            nu_grid: vec![0.9, 1.0],
            a_grid: vec![0.5, 7.0],
            b_grid,
            step,
            slack: 1e-9,
            tol: 1e-10,
        };
        let report = run_scan(&config).unwrap();
        assert_eq!(report.verdict, Verdict::Pass);
        assert!(report.cells.iter().all(|c| c.verdict == CellVerdict::Pass));
    }

    #[test]
    fn tp2_kernel_checks() {
        let s: Vec<f64> = (1..200).map(|i| i as f64 / 200.0).collect();
        let r = check_tp2_kernel(1.0, 2.0, &s).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        // equal arguments: constant ratio, trivially nondecreasing
        let r = check_tp2_kernel(1.5, 1.5, &s).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        // wide pair stays monotone with strictly positive increments
        let r = check_tp2_kernel(0.1, 10.0, &s).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.worst_margin < -1e-4);
        assert!(check_tp2_kernel(2.0, 1.0, &s).is_err());
    }

    #[test]
    fn small_b_asymptotic_checks() {
        let r = check_small_b_asymptotic(1.0, &default_small_b_grid(), 1e-12).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        let r = check_small_b_many(&[0.3, 0.5, 1.0, 2.0], &default_small_b_grid(), 1e-12).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);
        assert_eq!(r.cells_checked, 4);
        // increasing grid rejected
        assert!(check_small_b_asymptotic(1.0, &[0.01, 0.02], 1e-12).is_err());
    }

    #[test]
    fn empty_grid_scan_errors_but_suite_continues() {
        let mut bad = small_q_config();
        bad.nu_grid.clear();
        let entries = vec![
            SuiteEntry::Grid(bad),
            SuiteEntry::Tp2 {
                pairs: vec![(1.0, 2.0)],
                points: 50,
            },
        ];
        let suite = run_suite(&entries);
        assert!(suite.any_error());
        assert!(suite.outcomes[0].1.is_err());
        assert!(suite.outcomes[1].1.is_ok());
        assert!(!suite.any_asserted_failure());
    }

    #[test]
    fn suite_output_is_deterministic() {
        let entries = vec![
            SuiteEntry::Grid(small_q_config()),
            SuiteEntry::Tp2 {
                pairs: vec![(1.0, 2.0)],
                points: 100,
            },
        ];
        let first = run_suite(&entries);
        let second = run_suite(&entries);
        assert_eq!(first.csv(), second.csv());
        assert_eq!(first.summary(), second.summary());
        assert!(first.csv().starts_with("property_id,nu,a,b_lo,b_hi,worst_margin,verdict\n"));
    }

    #[test]
    fn property_ids_round_trip() {
        for p in Property::all() {
            assert_eq!(Property::parse(p.id()), Some(p));
        }
        assert_eq!(Property::parse("tp2-kernel"), Some(Property::Tp2Kernel));
        assert_eq!(Property::parse("nonsense"), None);
    }
}
