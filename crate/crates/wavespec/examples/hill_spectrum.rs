//! Diagonalize the Fourier truncation of the linearized operator
//! L = -d²/dx² + omega - g'(phi) and report the inertial index per family.
//!
//! The negative-eigenvalue count n(L) feeds the Krein index; theta's sign
//! must agree with the location of the zero eigenvalue (lambda_1 for theta<0,
//! lambda_2 for theta>0).
//!
//! ```bash
//! cargo run --release --example hill_spectrum
//! ```

use wavespec::{assemble, compute_ybar, eigen_symmetric, make_profile, verify_inertial, WaveFamily};

fn main() -> wavespec::Result<()> {
    for (family, l) in [
        (WaveFamily::CkdvDnoidal, std::f64::consts::TAU),
        (WaveFamily::CkdvCnoidal, std::f64::consts::TAU),
        (WaveFamily::GardnerCnoidal, 20.0),
    ] {
        let k = 0.5;
        let p = make_profile(family, l, k)?;
        let (_, theta) = compute_ybar(&p, 2048)?;
        let summary = verify_inertial(&p, theta, 64)?;
        let m = assemble(&p, 64)?;
        let evals = eigen_symmetric(&m)?;

        println!("{} (L = {l:.4}, k = {k}):", family.name());
        println!("  theta        = {theta:+.6e}");
        println!(
            "  inertial idx = ({}, {})  [n_neg, n_zero]",
            summary.index.n_neg, summary.index.n_zero
        );
        println!("  kernel eigenvector matches phi' with correlation {:.8}",
            summary.kernel_correlation);
        print!("  lowest eigenvalues:");
        for e in &evals[..6] {
            print!(" {e:+.6}");
        }
        println!("\n");
    }
    Ok(())
}
