//! The critical order: the threshold in ν at which the noncentral chi
//! density becomes log-concave for every noncentrality. Solves the
//! defining equation and shows the curvature-kernel sign flip across it.
//!
//! Run with: cargo run --example critical_order

use marcumq::concavity::{scan_sign, ScanTarget};
use marcumq::critical;

fn main() -> marcumq::Result<()> {
    let solved = critical::solve(1e-12, 200)?;
    println!("critical order  = {:.12}", solved.root);
    println!("residual        = {:.2e}", solved.residual);
    println!("iterations      = {}", solved.iterations);
    println!("final bracket   = [{:.12}, {:.12}]", solved.bracket.0, solved.bracket.1);

    println!("\nobjective G(nu) = r_nu(sqrt(5-2nu)) - (3-2nu)/sqrt(5-2nu):");
    for &nu in &[0.5, 0.7, solved.root, 0.9, 1.1, 1.5] {
        println!("  G({nu:.8}) = {:+.6e}", critical::objective(nu)?);
    }

    println!("\ncurvature kernel sign on either side of the root:");
    for &offset in &[-0.02, -0.005, 0.005, 0.02] {
        let nu = solved.root + offset;
        let scan = scan_sign(ScanTarget::CurvatureKernel, nu, 0.05, 30.0, 4096)?;
        let (t_w, v_w) = scan.witness;
        println!(
            "  nu = {nu:.6}: positive kernel found = {:<5} (max {v_w:+.3e} at t = {t_w:.3}, {} crossings)",
            scan.positive_found,
            scan.crossings.len()
        );
    }
    Ok(())
}
