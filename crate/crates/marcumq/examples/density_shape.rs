//! Shape classification of the noncentral chi density: mode location and
//! per-phase log-concavity from second differences of log f.
//!
//! Run with: cargo run --example density_shape

use marcumq::concavity::{classify_shape, default_shape_grid, ModeLocation, PhaseConcavity};

fn phase(p: PhaseConcavity) -> &'static str {
    match p {
        PhaseConcavity::Yes => "log-concave",
        PhaseConcavity::No => "NOT log-concave",
        PhaseConcavity::EmptyPhase => "empty",
    }
}

fn main() -> marcumq::Result<()> {
    for &(nu, a) in &[
        (1.0, 0.0),  // Rayleigh: interior mode at exactly t = 1
        (0.5, 0.0),  // half-normal-like: declines from the boundary
        (0.5, 2.0),  // rising phase loses log-concavity (a > 1 at nu = 1/2)
        (1.0, 3.0),  // Rice with strong noncentrality
        (3.0, 1.0),
    ] {
        let grid = default_shape_grid(a);
        let report = classify_shape(nu, a, &grid)?;
        let mode = match report.mode {
            ModeLocation::Boundary => "at the boundary (pure decline)".to_string(),
            ModeLocation::Interior(t0) => format!("interior, t0 = {t0:.6}"),
        };
        println!("nu = {nu}, a = {a}:");
        println!("  mode: {mode}");
        println!("  rising phase:    {}", phase(report.rising_logconcave));
        println!("  declining phase: {}", phase(report.declining_logconcave));
        if let Some((d2, at)) = report.worst_second_difference {
            println!("  most positive second difference of log f: {d2:.3e} at t = {at:.4}");
        }
        println!();
    }
    Ok(())
}
