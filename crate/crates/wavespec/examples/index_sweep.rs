//! Sweep I(k) = <L^-1 1,1> across the modulus range for the Gardner family
//! and print plot-ready CSV plus a rough text plot. The sign change near
//! k ~ 0.909 is the stability threshold.
//!
//! ```bash
//! cargo run --release --example index_sweep > sweep.csv
//! ```

use rayon::prelude::*;
use wavespec::{index_scalar, omega_of_k, WaveFamily};

fn main() -> wavespec::Result<()> {
    let l = 20.0;
    let ks: Vec<f64> = (1..40).map(|i| 0.5 + 0.012 * i as f64).collect();
    let rows: Vec<(f64, f64, f64)> = ks
        .par_iter()
        .map(|&k| -> wavespec::Result<(f64, f64, f64)> {
            Ok((
                k,
                omega_of_k(WaveFamily::GardnerCnoidal, l, k)?,
                index_scalar(WaveFamily::GardnerCnoidal, l, k, 1024)?,
            ))
        })
        .collect::<wavespec::Result<Vec<_>>>()?;

    println!("k,omega,I");
    for (k, w, i) in &rows {
        println!("{k:.4},{w:.10},{i:.10}");
    }

    eprintln!("\nI(k) for the gardner family at L = {l} ('#' left of zero, '+' right):");
    let max_abs = rows.iter().fold(0.0_f64, |m, r| m.max(r.2.abs()));
    for (k, _, i) in &rows {
        let width = (40.0 * i.abs() / max_abs).round() as usize;
        let bar: String = std::iter::repeat_n(if *i < 0.0 { '#' } else { '+' }, width.max(1))
            .collect();
        eprintln!("  k={k:.3} {i:+10.4} {bar}");
    }
    let crossing = rows.windows(2).find(|w| w[0].2 * w[1].2 < 0.0);
    if let Some(w) = crossing {
        eprintln!("\nsign change between k = {:.4} and k = {:.4}", w[0].0, w[1].0);
    }
    Ok(())
}
