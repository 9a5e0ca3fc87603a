//! The modified Bessel ratio I_ν/I_{ν-1}: values, closed forms at
//! half-integer order, the derivative identity, and the independent
//! integral-representation evaluator.
//!
//! Run with: cargo run --example bessel_ratio

use marcumq::bessel::{bessel_i, ratio, ratio_derivative, ratio_over_t_quadrature};

fn main() -> marcumq::Result<()> {
    let i = bessel_i(0.0, 1.0, false)?;
    println!("I_0(1)  = {:.15}  ({} method, est err {:.1e})", i.value, i.method, i.abs_err);
    let i = bessel_i(2.0, 700.0, true)?;
    println!("e^-700 I_2(700) = {:.15}  ({} path)", i.value, i.method);

    println!("\nratio r_nu(t) against tanh at nu = 1/2:");
    for &t in &[0.5, 1.0, 5.0, 40.0] {
        let r = ratio(0.5, t)?;
        println!("  r_0.5({t:>4}) = {:.15}   tanh = {:.15}", r.value, t.tanh());
    }

    println!("\nratio rises from 0 to 1 (nu = 1.5):");
    for &t in &[0.1, 1.0, 3.0, 10.0, 50.0, 500.0] {
        let r = ratio(1.5, t)?;
        println!("  r_1.5({t:>5}) = {:.12}  [{}]", r.value, r.method);
    }

    println!("\nderivative identity vs central finite difference (nu = 1, t = 2):");
    let rd = ratio_derivative(1.0, 2.0)?;
    let h = 1e-5;
    let fd = (ratio(1.0, 2.0 + h)?.value - ratio(1.0, 2.0 - h)?.value) / (2.0 * h);
    println!("  identity = {:.12}   finite difference = {:.12}", rd.value, fd);

    println!("\nintegral-representation evaluator for r_nu(t)/t:");
    for &(nu, t) in &[(0.75, 2.0), (1.5, 1.0), (5.0, 10.0)] {
        let oracle = ratio_over_t_quadrature(nu, t)?;
        let direct = ratio(nu, t)?.value / t;
        println!(
            "  nu = {nu:<4} t = {t:<4}: quadrature = {:.12}  direct = {:.12}  diff = {:.1e}",
            oracle.value,
            direct,
            (oracle.value - direct).abs()
        );
    }
    Ok(())
}
