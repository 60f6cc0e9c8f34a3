//! Locate the modulus k0 where I(k) = <L⁻¹1,1> changes sign, and map it to
//! the critical wave speed. Each I evaluation runs the ybar/eta pipeline;
//! bisection needs no derivative and stays robust near k -> 1 where K(k)
//! grows.

use crate::error::{Error, Result};
use crate::hill::{compute_eta, compute_ybar, periodic_quadrature};
use crate::profiles::{make_profile, omega_of_k, WaveFamily, K_CLAMP_HI, K_CLAMP_LO};

/// Search controls; the defaults mirror the published bracket.
#[derive(Debug, Clone, Copy)]
pub struct ThresholdOptions {
    pub k_lo: f64,
    pub k_hi: f64,
    pub grid_n: usize,
    /// Number of scan points used to verify a single sign change.
    pub scan_points: usize,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        ThresholdOptions {
            k_lo: 0.3,
            k_hi: 0.99,
            grid_n: 2048,
            scan_points: 100,
        }
    }
}

/// Converged threshold location.
#[derive(Debug, Clone)]
pub struct ThresholdResult {
    pub family: WaveFamily,
    pub l: f64,
    pub k0: f64,
    pub omega_at_k0: f64,
    /// Final bisection bracket oriented as (I < 0 side, I > 0 side).
    pub bracket: (f64, f64),
    pub iterations: u32,
    /// Sign changes observed on the verification scan (1 expected).
    pub sign_changes: usize,
}

/// Certifiability clamps for the search itself: outside this window the wave
/// is either numerically degenerate (dnoidal k -> 0 tends to the constant
/// state) or too stiff to integrate with certified Wronskian drift (k -> 1).
const SEARCH_LO: f64 = 1e-4;
const SEARCH_HI: f64 = 0.9999;

/// I(k) through the ybar/eta route only (psi is not needed for I).
pub fn index_scalar(family: WaveFamily, l: f64, k: f64, grid_n: usize) -> Result<f64> {
    let p = make_profile(family, l, k)?;
    let (ybar, _) = compute_ybar(&p, grid_n)?;
    let eta = compute_eta(&p, &ybar)?;
    periodic_quadrature(&eta.xs, &eta.y)
}

/// Evaluate I(k), treating boundary degeneracies (constant-state limit,
/// unresolvable theta) as "no sign information at this point".
fn try_index(family: WaveFamily, l: f64, k: f64, grid_n: usize) -> Result<Option<f64>> {
    match index_scalar(family, l, k, grid_n) {
        Ok(v) => Ok(Some(v)),
        Err(Error::KernelNotSimple { .. }) | Err(Error::DegenerateProfile(_)) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Find k0 with I(k0) = 0 by a sign-change scan (with 0.05-step bracket
/// expansion toward the clamps) followed by bisection to |dk| < 1e-6.
pub fn find_k0(family: WaveFamily, l: f64, opts: &ThresholdOptions) -> Result<ThresholdResult> {
    let lo = opts.k_lo.clamp(SEARCH_LO.max(K_CLAMP_LO), SEARCH_HI.min(K_CLAMP_HI));
    let hi = opts.k_hi.clamp(SEARCH_LO.max(K_CLAMP_LO), SEARCH_HI.min(K_CLAMP_HI));
    if !(lo < hi) {
        return Err(Error::Usage(format!("bad bracket [{lo}, {hi}]")));
    }
    let eval = |k: f64| try_index(family, l, k, opts.grid_n);

    // sample the requested bracket, then extend outward in 0.05 steps;
    // degenerate points carry no sign information and are skipped
    let n_scan = opts.scan_points.max(2);
    let mut samples: Vec<(f64, f64)> = Vec::new();
    for i in 0..=n_scan {
        let k = lo + (hi - lo) * i as f64 / n_scan as f64;
        if let Some(f) = eval(k)? {
            samples.push((k, f));
        }
    }
    let count_changes = |samples: &[(f64, f64)]| -> usize {
        samples
            .windows(2)
            .filter(|w| w[0].1 * w[1].1 < 0.0)
            .count()
    };
    let mut scanned = n_scan + 1;
    if count_changes(&samples) == 0 {
        let mut below = lo;
        let mut above = hi;
        while below > SEARCH_LO || above < SEARCH_HI {
            if below > SEARCH_LO {
                below = (below - 0.05).max(SEARCH_LO);
                if let Some(f) = eval(below)? {
                    samples.insert(0, (below, f));
                }
                scanned += 1;
            }
            if above < SEARCH_HI {
                above = (above + 0.05).min(SEARCH_HI);
                if let Some(f) = eval(above)? {
                    samples.push((above, f));
                }
                scanned += 1;
            }
            if count_changes(&samples) > 0 {
                break;
            }
        }
    }
    let sign_changes = count_changes(&samples);
    let first = samples
        .windows(2)
        .find(|w| w[0].1 * w[1].1 < 0.0)
        .map(|w| (w[0].0, w[1].0, w[0].1, w[1].1));
    let (mut a, mut b, mut fa, _fb) = first.ok_or_else(|| {
        Error::NoThreshold(format!(
            "I(k) has no sign change on the searchable range for {} at L = {l} \
             (scanned {scanned} points); no threshold speed exists",
            family.name()
        ))
    })?;

    let mut iterations = 0u32;
    while b - a > 1e-6 {
        let mid = 0.5 * (a + b);
        let fm = eval(mid)?.ok_or_else(|| {
            Error::Numeric(format!("I({mid}) became unresolvable inside the bracket"))
        })?;
        if fa * fm <= 0.0 {
            b = mid;
        } else {
            a = mid;
            fa = fm;
        }
        iterations += 1;
        if iterations > 80 {
            return Err(Error::Numeric("bisection failed to converge".into()));
        }
    }
    let k0 = 0.5 * (a + b);
    let bracket = if fa < 0.0 { (a, b) } else { (b, a) };
    Ok(ThresholdResult {
        family,
        l,
        k0,
        omega_at_k0: omega_of_k(family, l, k0)?,
        bracket,
        iterations,
        sign_changes,
    })
}
