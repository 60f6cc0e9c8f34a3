//! Full stability analysis of a single periodic wave.
//!
//! Builds the Gardner cnoidal wave at (L, k) = (20, 0.5), runs the Hill IVP
//! pipeline, cross-validates the inertial count spectrally, and prints the
//! Hamiltonian-Krein verdict with its ingredients.
//!
//! ```bash
//! cargo run --example analyze_wave
//! ```

use wavespec::{analyze, AnalyzeOptions, WaveFamily};

fn main() -> wavespec::Result<()> {
    let family = WaveFamily::GardnerCnoidal;
    let (l, k) = (20.0, 0.5);
    let report = analyze(family, l, k, &AnalyzeOptions::default())?;

    println!("wave      : {} at L = {l}, k = {k}", family.name());
    println!("speed     : omega = {:.9}, A = {:.9}", report.omega, report.a_const);
    println!("theta     : {:.6e}  (kernel simple, zero eigenvalue at lambda_{})",
        report.theta, if report.theta < 0.0 { 1 } else { 2 });
    println!("I         : <L^-1 1,1>     = {:.9}", report.i_value);
    println!("a         : <L^-1 phi,phi> = {:.9}", report.inner.lphi_phi);
    println!("c         : <L^-1 phi,1>   = {:.9}", report.inner.lphi_one);
    if let Some(d) = &report.d {
        println!("det(D)    : {:.9}  (raw {:.6}, prefactored {:.6})",
            d.schur, d.det_raw, d.det_prefactored);
    }
    println!(
        "counts    : n(L) = {}, n(I) = {}, n(D) = {}  =>  K_Ham = {:?}",
        report.n_l, report.n_i, report.n_d, report.k_ham
    );
    println!("spectral  : n_neg = {}, n_zero = {}, kernel correlation {:.6}",
        report.spectral.index.n_neg,
        report.spectral.index.n_zero,
        report.spectral.kernel_correlation);
    println!("verdict   : {}", report.verdict.as_str());

    println!("\ncross-checks:");
    for (name, value) in &report.crosschecks {
        println!("  {name:<32} {value:.3e}");
    }
    Ok(())
}
