//! Spectral stability of explicit periodic traveling waves of the critical
//! Korteweg-de Vries equation (quintic nonlinearity) and the Gardner equation,
//! decided through the Hamiltonian-Krein index.
//!
//! The pipeline, for a wave phi picked by (family, period L, modulus k):
//!
//! 1. [`profiles`] builds the closed-form wave (dnoidal or cnoidal Jacobi
//!    elliptic shape) and its speed/constant maps;
//! 2. [`hill`] integrates three auxiliary IVPs for the linearized operator
//!    L = -d²/dx² + omega - g'(phi): the non-periodic homogeneous solution
//!    ybar (giving theta, which certifies a simple kernel), and the periodic
//!    solutions psi, eta of  L psi = -phi,  L eta = 1;
//! 3. [`stability`] assembles I = <L⁻¹1,1>, the 2x2 matrix D and the count
//!    K_Ham = n(L) - n(I) - n(D): zero means spectrally stable, one means
//!    unstable;
//! 4. [`spectral`] independently diagonalizes a Fourier truncation of L to
//!    confirm n(L) and the theta-sign correspondence before any verdict;
//! 5. [`threshold`] brackets and bisects the modulus k0 where I changes sign.
//!
//! The `wavespec` binary exposes the pipeline as
//! `analyze | table | threshold | profile | spectrum`; the crate's `examples/`
//! directory demonstrates each capability as a library call.

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod hill;
pub mod profiles;
pub mod render;
pub mod spectral;
pub mod stability;
pub mod threshold;

pub use elliptic::{
    complete_e, complete_k, heuman_lambda, incomplete_e, incomplete_f, jacobi, EllipticTriple,
    Modulus,
};
pub use error::{Error, Result};
pub use hill::{
    compute_eta, compute_psi, compute_ybar, integrate_second_order, periodic_quadrature,
    solve_hill, solve_hill_with_potential, HillData, Trajectory,
};
pub use profiles::{domega_dk, make_profile, omega_of_k, omega_to_k, WaveFamily, WaveProfile};
pub use spectral::{
    assemble, eigen_symmetric, inertial_index, verify_inertial, FourierHillMatrix, InertialIndex,
    SpectralSummary,
};
pub use stability::{
    analyze, build_d, det_d_closed_form, closed_form_norm_cnoidal, closed_form_norm_gardner,
    inner_products, krein_classify, AnalyzeOptions, DMatrix, InnerProducts, StabilityReport,
    Verdict,
};
pub use threshold::{find_k0, index_scalar, ThresholdOptions, ThresholdResult};

/// Test-only helpers shared by the module test suites.
#[cfg(test)]
pub(crate) mod testutil {
    /// Adaptive Simpson quadrature; the independent oracle for integral
    /// expected values.
    pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
        fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
            let m = 0.5 * (a + b);
            (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
        }
        fn recurse<F: Fn(f64) -> f64>(
            f: &F,
            a: f64,
            b: f64,
            whole: f64,
            tol: f64,
            depth: usize,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let left = simpson(f, a, m);
            let right = simpson(f, m, b);
            let delta = left + right - whole;
            if depth == 0 || delta.abs() < 15.0 * tol {
                left + right + delta / 15.0
            } else {
                recurse(f, a, m, left, 0.5 * tol, depth - 1)
                    + recurse(f, m, b, right, 0.5 * tol, depth - 1)
            }
        }
        let whole = simpson(&f, a, b);
        recurse(&f, a, b, whole, tol, 48)
    }

    pub fn assert_rel(got: f64, want: f64, tol: f64, what: &str) {
        let denom = want.abs().max(1e-300);
        let rel = (got - want).abs() / denom;
        assert!(
            rel < tol,
            "{what}: got {got}, want {want} (rel err {rel:.3e} > {tol:.1e})"
        );
    }
}
