//! Hamiltonian-Krein index assembly and the stability verdict.
//!
//! From the Hill trajectories we form the inner products
//! a = <L⁻¹phi, phi> = -∫ psi phi,  c = <L⁻¹phi, 1> = -∫ psi,
//! I = <L⁻¹1, 1> = ∫ eta, the 2x2 matrix D of the index theorem, and the
//! counts  K_Ham = n(L) - n(I) - n(D).
//!
//! The count n(D) uses the Schur complement  D_s = a - c²/I : the generalized
//! kernel of ∂ₓL over the mean-zero space is the single chain over phi', and
//! the matrix the theorem feeds on reduces to that scalar (it is also the
//! quantity the published det(D) tables print, and is invariant under the
//! Galilean shift that links the Gardner and mKdV presentations). The raw and
//! prefactored 2x2 determinants are reported alongside for reference.

use crate::elliptic::{complete_e, complete_k, heuman_lambda};
use crate::error::{Error, Result};
use crate::hill::{periodic_quadrature, solve_hill, HillData};
use crate::profiles::{domega_dk, make_profile, WaveFamily, WaveProfile};
use crate::spectral::{verify_inertial, SpectralSummary};
use std::collections::BTreeMap;

/// |I| below this (scaled by L) cannot support the index hypotheses.
pub fn i_min(l: f64) -> f64 {
    1e-10 * l
}

/// |D_s| below this is treated as a singular D.
pub const DET_MIN: f64 = 1e-12;

/// The three L⁻¹ inner products of the index theorem.
#[derive(Debug, Clone, Copy)]
pub struct InnerProducts {
    /// <L⁻¹ phi, phi> = -∫ psi phi
    pub lphi_phi: f64,
    /// <L⁻¹ phi, 1> = -∫ psi
    pub lphi_one: f64,
    /// <L⁻¹ 1, 1> = ∫ eta = I
    pub lone_one: f64,
}

/// The 2x2 matrix of the index theorem in all printed conventions.
#[derive(Debug, Clone, Copy)]
pub struct DMatrix {
    /// Prefactored matrix (1/I)·[[a, c], [c, I]] (row-major entries).
    pub entries: [[f64; 2]; 2],
    /// det of the bracketed matrix: a·I - c².
    pub det_raw: f64,
    /// det of the prefactored matrix: det_raw / I².
    pub det_prefactored: f64,
    /// Schur complement a - c²/I; decides n(D) and matches the printed tables.
    pub schur: f64,
    /// Eigenvalues of the prefactored matrix, ascending.
    pub eigenvalues: [f64; 2],
}

/// Stability classification outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    SpectrallyStable,
    SpectrallyUnstable,
    Indeterminate,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::SpectrallyStable => "SPECTRALLY_STABLE",
            Verdict::SpectrallyUnstable => "SPECTRALLY_UNSTABLE",
            Verdict::Indeterminate => "INDETERMINATE",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::SpectrallyStable => 0,
            Verdict::SpectrallyUnstable => 10,
            Verdict::Indeterminate => 20,
        }
    }
}

/// Full report for one (family, L, k) analysis.
#[derive(Debug, Clone)]
pub struct StabilityReport {
    pub family: WaveFamily,
    pub l: f64,
    pub k: f64,
    pub omega: f64,
    pub a_const: f64,
    pub theta: f64,
    pub i_value: f64,
    pub inner: InnerProducts,
    pub d: Option<DMatrix>,
    pub n_l: usize,
    pub n_i: usize,
    pub n_d: usize,
    pub k_ham: Option<i64>,
    pub verdict: Verdict,
    pub reason: Option<String>,
    pub crosschecks: BTreeMap<String, f64>,
    pub spectral: SpectralSummary,
    pub grid_n: usize,
}

/// Quadratures of the Hill trajectories into the three inner products.
pub fn inner_products(hd: &HillData, profile: &WaveProfile) -> Result<InnerProducts> {
    let xs = &hd.psi.xs;
    let phi: Vec<f64> = xs.iter().map(|&x| profile.eval(x).0).collect();
    let psi_phi: Vec<f64> = hd.psi.y.iter().zip(&phi).map(|(p, f)| p * f).collect();
    Ok(InnerProducts {
        lphi_phi: -periodic_quadrature(xs, &psi_phi)?,
        lphi_one: -periodic_quadrature(xs, &hd.psi.y)?,
        lone_one: periodic_quadrature(xs, &hd.eta.y)?,
    })
}

/// Symmetry route to <L⁻¹phi,1> via ∫ eta phi; the difference from -∫ psi is a
/// self-adjointness diagnostic.
pub fn lphi_one_symmetric(hd: &HillData, profile: &WaveProfile) -> Result<f64> {
    let xs = &hd.eta.xs;
    let eta_phi: Vec<f64> = hd
        .eta
        .y
        .iter()
        .zip(xs.iter())
        .map(|(e, &x)| e * profile.eval(x).0)
        .collect();
    periodic_quadrature(xs, &eta_phi)
}

/// Assemble the D matrix; errors with AtThreshold when |I| is too small for
/// the theorem hypothesis.
pub fn build_d(ip: &InnerProducts, l: f64) -> Result<DMatrix> {
    let i = ip.lone_one;
    if i.abs() <= i_min(l) {
        return Err(Error::AtThreshold(format!(
            "|I| = {:.3e} at or below tolerance {:.3e}; the index theorem requires I != 0",
            i.abs(),
            i_min(l)
        )));
    }
    let a = ip.lphi_phi;
    let c = ip.lphi_one;
    let det_raw = a * i - c * c;
    let det_prefactored = det_raw / (i * i);
    let schur = a - c * c / i;
    let entries = [[a / i, c / i], [c / i, 1.0]];
    // closed-form 2x2 eigenvalues of the prefactored matrix
    let tr = entries[0][0] + entries[1][1];
    let disc = (0.25 * tr * tr - det_prefactored).max(0.0).sqrt();
    let eigenvalues = [0.5 * tr - disc, 0.5 * tr + disc];
    Ok(DMatrix {
        entries,
        det_raw,
        det_prefactored,
        schur,
        eigenvalues,
    })
}

/// Apply the index count: n(I) = [I < 0], n(D) = [D_s < 0],
/// K_Ham = n(L) - n(I) - n(D); verdict per the instability corollary.
pub fn krein_classify(
    ip: &InnerProducts,
    d: &DMatrix,
    n_l: usize,
    theta: f64,
) -> (usize, usize, Option<i64>, Verdict, Option<String>) {
    let _ = theta; // sign already validated upstream against the spectral count
    let n_i = usize::from(ip.lone_one < 0.0);
    if d.schur.abs() <= DET_MIN {
        return (
            n_i,
            0,
            None,
            Verdict::Indeterminate,
            Some(format!(
                "|det(D)| = {:.3e} at tolerance; D is numerically singular",
                d.schur.abs()
            )),
        );
    }
    let n_d = usize::from(d.schur < 0.0);
    let k_ham = n_l as i64 - n_i as i64 - n_d as i64;
    let (verdict, reason) = match k_ham {
        0 => (Verdict::SpectrallyStable, None),
        1 => (Verdict::SpectrallyUnstable, None),
        neg if neg < 0 => (
            Verdict::Indeterminate,
            Some(format!(
                "K_Ham = {neg} < 0: counts inconsistent with the index theorem"
            )),
        ),
        big => (
            Verdict::Indeterminate,
            Some(format!(
                "K_Ham = {big} >= 2: k_c and k_i⁻ are even, the split is undecidable here"
            )),
        ),
    };
    (n_i, n_d, Some(k_ham), verdict, reason)
}

/// Closed form for ∫ phi² of the cnoidal family (Byrd-Friedman 411.03 route):
/// tau(k) = 2π sqrt((k²-2b)(1-b)) [1 - Λ₀(β,k)] / sqrt(b(b-k²)),
/// β = arcsin(1/sqrt(1-b)). Independent of the quadrature path.
pub fn closed_form_norm_cnoidal(_l: f64, k: f64) -> Result<f64> {
    let sq = (k * k * k * k - k * k + 1.0).sqrt();
    let b = -1.0 + k * k - sq;
    // with b < 0 both radicands are positive; anything else is a domain break
    let r1 = (k * k - 2.0 * b) * (1.0 - b);
    let r2 = b * (b - k * k);
    if r1 <= 0.0 || r2 <= 0.0 {
        return Err(Error::Domain(format!(
            "norm formula radicand not positive at k={k}: {r1}, {r2}"
        )));
    }
    let beta = (1.0 / (1.0 - b).sqrt()).asin();
    let lam = heuman_lambda(beta, k)?;
    Ok(2.0 * std::f64::consts::PI * r1.sqrt() * (1.0 - lam) / r2.sqrt())
}

/// Closed form for ∫ phi² of the Gardner family:
/// L/9 + 32 K(k) [E(k) - (1-k²)K(k)] / L.
pub fn closed_form_norm_gardner(l: f64, k: f64) -> Result<f64> {
    let big_k = complete_k(k)?;
    let big_e = complete_e(k)?;
    Ok(l / 9.0 + 32.0 * big_k * (big_e - (1.0 - k * k) * big_k) / l)
}

/// d/dk ∫ phi² for the Gardner family (positive on (0,1)):
/// -32 [(1-k²)K(2E-K) - E²] / (k(1-k²)L).
pub fn gardner_norm_dk(l: f64, k: f64) -> Result<f64> {
    let big_k = complete_k(k)?;
    let big_e = complete_e(k)?;
    Ok(-32.0 * ((1.0 - k * k) * big_k * (2.0 * big_e - big_k) - big_e * big_e)
        / (k * (1.0 - k * k) * l))
}

/// det(D) from the closed forms: -1/2 · (d/dk ∫ phi²) / (domega/dk).
/// Only the zero-off-diagonal families have a printed norm formula.
pub fn det_d_closed_form(family: WaveFamily, l: f64, k: f64) -> Result<f64> {
    let dnorm_dk = match family {
        WaveFamily::CkdvCnoidal => {
            let h = 1e-6_f64.min(0.5 * k).min(0.5 * (1.0 - k));
            (closed_form_norm_cnoidal(l, k + h)? - closed_form_norm_cnoidal(l, k - h)?)
                / (2.0 * h)
        }
        WaveFamily::GardnerCnoidal => gardner_norm_dk(l, k)?,
        WaveFamily::CkdvDnoidal => {
            return Err(Error::Domain(
                "no closed-form norm is available for the dnoidal family".into(),
            ))
        }
    };
    Ok(-0.5 * dnorm_dk / domega_dk(family, l, k)?)
}

/// Grid/mode options for a full analysis.
#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    pub grid_n: usize,
    pub modes: usize,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            grid_n: 2048,
            modes: 64,
        }
    }
}

/// Run the full pipeline for one wave: profile, Hill IVPs, spectral
/// cross-validation of n(L), inner products, D, verdict, and the named
/// cross-check residuals.
pub fn analyze(
    family: WaveFamily,
    l: f64,
    k: f64,
    opts: &AnalyzeOptions,
) -> Result<StabilityReport> {
    let profile = make_profile(family, l, k)?;
    let hd = solve_hill(&profile, opts.grid_n)?;

    // n(L) gate: the expected inertial count must be confirmed independently
    // before any verdict is emitted.
    let spectral = verify_inertial(&profile, hd.theta, opts.modes)?;

    let ip = inner_products(&hd, &profile)?;
    let mut checks = BTreeMap::new();
    checks.insert("wronskian_drift".into(), hd.wronskian_drift);
    checks.insert("psi_periodicity_rel".into(), hd.psi_periodicity);
    checks.insert("psi_deriv_periodicity_rel".into(), hd.psi_deriv_periodicity);
    checks.insert("eta_periodicity_rel".into(), hd.eta_periodicity);
    checks.insert("eta_deriv_periodicity_rel".into(), hd.eta_deriv_periodicity);
    checks.insert("kernel_correlation".into(), spectral.kernel_correlation);

    // self-adjointness route for the off-diagonal entry
    let sym = lphi_one_symmetric(&hd, &profile)?;
    checks.insert(
        "lphi_one_symmetry_abs".into(),
        (ip.lphi_one - sym).abs(),
    );

    // ODE residual of the profile (phi'' against a derivative of phi')
    let mut ode_res = 0.0_f64;
    let fd_h = 1e-6;
    for j in 0..200 {
        let x = l * j as f64 / 200.0;
        let fd = (profile.eval(x + fd_h).1 - profile.eval(x - fd_h).1) / (2.0 * fd_h);
        ode_res = ode_res.max((fd - profile.eval(x).2).abs());
    }
    checks.insert("ode_residual_max".into(), ode_res);

    // zero-mean residual (shifted for Gardner)
    let shift = if family == WaveFamily::GardnerCnoidal {
        1.0 / 3.0
    } else {
        0.0
    };
    if family != WaveFamily::CkdvDnoidal {
        let vals: Vec<f64> = hd
            .eta
            .xs
            .iter()
            .map(|&x| profile.eval(x).0 + shift)
            .collect();
        let mean = periodic_quadrature(&hd.eta.xs, &vals)?;
        checks.insert("zero_mean_residual".into(), mean.abs());
    }

    // closed-form norm and det(D) against the IVP route where available
    if family != WaveFamily::CkdvDnoidal {
        let phi2: Vec<f64> = hd
            .eta
            .xs
            .iter()
            .map(|&x| profile.eval(x).0.powi(2))
            .collect();
        let quad = periodic_quadrature(&hd.eta.xs, &phi2)?;
        let closed = match family {
            WaveFamily::CkdvCnoidal => closed_form_norm_cnoidal(l, k)?,
            WaveFamily::GardnerCnoidal => closed_form_norm_gardner(l, k)?,
            WaveFamily::CkdvDnoidal => unreachable!(),
        };
        checks.insert(
            "norm_closed_vs_quadrature_rel".into(),
            ((closed - quad) / quad).abs(),
        );
        let det_closed = det_d_closed_form(family, l, k)?;
        let schur_ivp = ip.lphi_phi - ip.lphi_one * ip.lphi_one / ip.lone_one;
        checks.insert(
            "detD_ivp_vs_closed_rel".into(),
            ((det_closed - schur_ivp) / det_closed).abs(),
        );
    }

    // Gardner/mKdV operator identity: both potential presentations agree
    if family == WaveFamily::GardnerCnoidal {
        let mut worst = 0.0_f64;
        for j in 0..200 {
            let x = l * j as f64 / 200.0;
            let (phi, _, _) = profile.eval(x);
            let direct = profile.omega - (2.0 * phi + 3.0 * phi * phi);
            let shifted = (profile.omega + 1.0 / 3.0) - 3.0 * (phi + 1.0 / 3.0).powi(2);
            worst = worst.max((direct - shifted).abs());
        }
        checks.insert("gardner_potential_identity_max".into(), worst);
    }

    let n_l = family.n_expected();
    match build_d(&ip, l) {
        Ok(d) => {
            let (n_i, n_d, k_ham, verdict, reason) = krein_classify(&ip, &d, n_l, hd.theta);
            Ok(StabilityReport {
                family,
                l,
                k,
                omega: profile.omega,
                a_const: profile.a_const,
                theta: hd.theta,
                i_value: ip.lone_one,
                inner: ip,
                d: Some(d),
                n_l,
                n_i,
                n_d,
                k_ham,
                verdict,
                reason,
                crosschecks: checks,
                spectral,
                grid_n: hd.n_effective,
            })
        }
        Err(Error::AtThreshold(msg)) => Ok(StabilityReport {
            family,
            l,
            k,
            omega: profile.omega,
            a_const: profile.a_const,
            theta: hd.theta,
            i_value: ip.lone_one,
            inner: ip,
            d: None,
            n_l,
            n_i: 0,
            n_d: 0,
            k_ham: None,
            verdict: Verdict::Indeterminate,
            reason: Some(msg),
            crosschecks: checks,
            spectral,
            grid_n: hd.n_effective,
        }),
        Err(e) => Err(e),
    }
}
