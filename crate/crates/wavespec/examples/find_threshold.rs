//! Locate the stability threshold modulus k0 where I(k) changes sign.
//!
//! The Gardner family flips from stable to unstable at k0 ~ 0.909
//! (independent of L); the dnoidal family has no threshold at all, and the
//! search reports that instead of inventing one.
//!
//! ```bash
//! cargo run --release --example find_threshold
//! ```

use wavespec::{find_k0, Error, ThresholdOptions, WaveFamily};

fn main() {
    let opts = ThresholdOptions {
        k_lo: 0.85,
        k_hi: 0.95,
        grid_n: 2048,
        scan_points: 40,
    };
    for l in [std::f64::consts::TAU, 20.0, 50.0] {
        match find_k0(WaveFamily::GardnerCnoidal, l, &opts) {
            Ok(r) => println!(
                "gardner L = {l:8.4}: k0 = {:.7} (omega = {:+.7}), bracket [{:.7}, {:.7}], \
                 {} bisections, {} sign change(s)",
                r.k0, r.omega_at_k0, r.bracket.0, r.bracket.1, r.iterations, r.sign_changes
            ),
            Err(e) => println!("gardner L = {l:8.4}: {e}"),
        }
    }

    println!();
    let wide = ThresholdOptions {
        k_lo: 0.3,
        k_hi: 0.99,
        grid_n: 1024,
        scan_points: 40,
    };
    match find_k0(WaveFamily::CkdvDnoidal, 20.0, &wide) {
        Err(Error::NoThreshold(msg)) => {
            println!("dnoidal L = 20: correctly reports no threshold:\n  {msg}")
        }
        other => println!("dnoidal L = 20: unexpected outcome {other:?}"),
    }
}
