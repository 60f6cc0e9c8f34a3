//! Tour of the special-function layer: complete/incomplete elliptic
//! integrals, Jacobi elliptic functions and the Heuman Lambda function.
//!
//! ```bash
//! cargo run --example elliptic_functions
//! ```

use std::f64::consts::FRAC_PI_2;
use wavespec::{complete_e, complete_k, heuman_lambda, incomplete_e, incomplete_f, jacobi};

fn main() -> wavespec::Result<()> {
    println!("complete integrals (AGM):");
    for k in [0.1, 0.5, 0.9, 0.9999] {
        println!(
            "  K({k:<6}) = {:<18.15} E({k:<6}) = {:.15}",
            complete_k(k)?,
            complete_e(k)?
        );
    }

    println!("\nLegendre relation E K' + E' K - K K' - pi/2 on a few moduli:");
    for k in [0.2_f64, 0.6, 0.95] {
        let kp = (1.0 - k * k).sqrt();
        let res = complete_e(k)? * complete_k(kp)? + complete_e(kp)? * complete_k(k)?
            - complete_k(k)? * complete_k(kp)?
            - FRAC_PI_2;
        println!("  k = {k}: residual {res:+.2e}");
    }

    println!("\nincomplete integrals (Carlson forms):");
    println!("  F(0.6, 0.8) = {:.15}", incomplete_f(0.6, 0.8)?);
    println!("  E(0.6, 0.8) = {:.15}", incomplete_e(0.6, 0.8)?);
    println!("  F(pi/2, k) equals K(k): {:+.2e}",
        incomplete_f(FRAC_PI_2, 0.7)? - complete_k(0.7)?);

    println!("\nJacobi functions at u = 0.7, k = 0.6:");
    let t = jacobi(0.7, 0.6)?;
    println!("  sn = {:.15}\n  cn = {:.15}\n  dn = {:.15}", t.sn, t.cn, t.dn);
    println!("  sn² + cn² - 1       = {:+.2e}", t.sn * t.sn + t.cn * t.cn - 1.0);
    println!("  dn² + k²sn² - 1     = {:+.2e}", t.dn * t.dn + 0.36 * t.sn * t.sn - 1.0);

    println!("\nquarter-period values at k = 0.5 (K = {:.12}):", complete_k(0.5)?);
    let q = jacobi(complete_k(0.5)?, 0.5)?;
    println!("  sn(K) = {:.12}, cn(K) = {:+.2e}, dn(K) = {:.12} (= k')", q.sn, q.cn, q.dn);

    println!("\nHeuman Lambda:");
    println!("  Lambda0(0.3, 0.6)  = {:.15}", heuman_lambda(0.3, 0.6)?);
    println!("  Lambda0(pi/2, 0.6) = {:.15} (identically 1)", heuman_lambda(FRAC_PI_2, 0.6)?);
    Ok(())
}
