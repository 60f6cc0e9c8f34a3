//! Independent verification of the inertial index: the Hill operator
//! L = -d²/dx² + omega - g'(phi) is discretized in a real Fourier basis
//! { 1/√L, √(2/L) cos(2πmx/L), √(2/L) sin(2πmx/L) } and diagonalized with
//! cyclic Jacobi rotations. The potential is even, so the matrix is real
//! symmetric and block-splits over cosine/sine; we keep one combined matrix.
//!
//! This is the defense against running the index count with a wrong n(L):
//! the counted negative eigenvalues must match both the family expectation
//! and the sign of theta (theta < 0 puts the kernel at lambda_1, theta > 0
//! at lambda_2).

use crate::error::{Error, Result};
use crate::profiles::WaveProfile;
use std::f64::consts::PI;

/// Truncated Hill operator in the combined cos/sin basis.
#[derive(Debug, Clone)]
pub struct FourierHillMatrix {
    /// Row-major (2N+1) x (2N+1) symmetric matrix.
    pub data: Vec<f64>,
    pub size: usize,
    pub n_modes: usize,
    pub l: f64,
    pub omega: f64,
    /// Max row-sum norm, used to scale the zero-eigenvalue tolerance.
    pub scale: f64,
}

/// Counts of negative and (numerically) zero eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct InertialIndex {
    pub n_neg: usize,
    pub n_zero: usize,
    /// The five smallest eigenvalues, ascending.
    pub eigensample: Vec<f64>,
}

/// Outcome of the full spectral cross-check for one profile.
#[derive(Debug, Clone)]
pub struct SpectralSummary {
    pub index: InertialIndex,
    /// |<u, phi'>| / (||u|| ||phi'||) for the kernel eigenvector u.
    pub kernel_correlation: f64,
    pub n_modes: usize,
}

/// Cosine Fourier coefficients c_j of an even periodic sample set:
/// c(x) = c_0 + 2 Σ_{j>=1} c_j cos(2πjx/L).
fn cosine_coefficients(samples: &[f64], j_max: usize) -> Vec<f64> {
    let m = samples.len();
    let mut out = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let mut s = 0.0;
        for (p, &v) in samples.iter().enumerate() {
            s += v * (2.0 * PI * (j * p) as f64 / m as f64).cos();
        }
        out.push(s / m as f64);
    }
    out
}

/// Assemble the truncated operator from samples of the multiplication
/// coefficient c(x) = g'(phi(x)) on a uniform grid (endpoint excluded).
pub fn assemble_from_samples(
    c_samples: &[f64],
    l: f64,
    omega: f64,
    n_modes: usize,
) -> Result<FourierHillMatrix> {
    if n_modes < 32 {
        return Err(Error::Contract(format!(
            "mode cutoff N = {n_modes} below minimum 32"
        )));
    }
    if c_samples.len() < 4 * n_modes {
        return Err(Error::Contract(format!(
            "need at least {} samples for N = {n_modes}, got {}",
            4 * n_modes,
            c_samples.len()
        )));
    }
    let ch = cosine_coefficients(c_samples, 2 * n_modes);
    // Smoothness gate: the tail must have decayed before the cutoff.
    let cmax = ch.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    let tail = ch[2 * n_modes - 3..].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if tail > 1e-12 * cmax {
        return Err(Error::Numeric(format!(
            "Fourier coefficients of the potential have not decayed at index {} \
             (tail {:.3e}); increase the mode cutoff to at least {}",
            2 * n_modes,
            tail,
            2 * n_modes
        )));
    }

    let n = n_modes;
    let size = 2 * n + 1;
    let mut a = vec![0.0_f64; size * size];
    let mu = |m: usize| 2.0 * PI * m as f64 / l;
    let idx = |i: usize, j: usize| i * size + j;

    // constant row/column
    a[idx(0, 0)] = omega - ch[0];
    for m in 1..=n {
        let v = -(2.0_f64).sqrt() * ch[m];
        a[idx(0, m)] = v;
        a[idx(m, 0)] = v;
    }
    // cos block: rows/cols 1..=n; sin block: n+1..=2n
    for mi in 1..=n {
        for ni in 1..=n {
            let diff = ch[mi.abs_diff(ni)];
            let sum = ch[mi + ni];
            let mut cc = -(diff + sum);
            let mut ss = -(diff - sum);
            if mi == ni {
                let kin = mu(mi) * mu(mi) + omega;
                cc += kin;
                ss += kin;
            }
            a[idx(mi, ni)] = cc;
            a[idx(n + mi, n + ni)] = ss;
        }
    }
    let mut scale = 0.0_f64;
    for i in 0..size {
        let row: f64 = (0..size).map(|j| a[idx(i, j)].abs()).sum();
        scale = scale.max(row);
    }
    Ok(FourierHillMatrix {
        data: a,
        size,
        n_modes,
        l,
        omega,
        scale,
    })
}

/// Assemble the truncated linearized operator around a wave profile.
pub fn assemble(profile: &WaveProfile, n_modes: usize) -> Result<FourierHillMatrix> {
    let m = (8 * n_modes).max(4096);
    let mut samples = Vec::with_capacity(m);
    for p in 0..m {
        let x = profile.l * p as f64 / m as f64;
        let (phi, _, _) = profile.eval(x);
        samples.push(profile.family.g_prime(phi));
    }
    assemble_from_samples(&samples, profile.l, profile.omega, n_modes)
}

/// All eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// ascending.
pub fn eigen_symmetric(m: &FourierHillMatrix) -> Result<Vec<f64>> {
    let (evals, _) = jacobi_eigensystem(&m.data, m.size)?;
    Ok(evals)
}

/// Jacobi rotation eigensolver with accumulated eigenvectors.
/// Returns (eigenvalues ascending, eigenvectors column-major matching them).
pub fn jacobi_eigensystem(data: &[f64], n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if data.len() != n * n {
        return Err(Error::Contract(format!(
            "matrix data length {} does not match size {n}",
            data.len()
        )));
    }
    let mut norm = 0.0_f64;
    for i in 0..n {
        for j in 0..n {
            let asym = (data[i * n + j] - data[j * n + i]).abs();
            norm = norm.max(data[i * n + j].abs());
            if asym > 1e-12 * data[i * n + j].abs().max(1.0) {
                return Err(Error::Contract(format!(
                    "matrix not symmetric at ({i},{j}): asymmetry {asym:.3e}"
                )));
            }
        }
    }
    let mut a = data.to_vec();
    let mut v = vec![0.0_f64; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let off = |a: &[f64]| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += a[i * n + j] * a[i * n + j];
            }
        }
        s.sqrt()
    };
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
    for sweep in 0..60 {
        let o = off(&a);
        if o < 1e-12 * frob {
            break;
        }
        // threshold strategy from the classical algorithm
        let thresh = if sweep < 3 {
            0.2 * o * o / (n * n) as f64
        } else {
            0.0
        };
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 || apq.abs() < thresh {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = c * apj - s * aqj;
                    a[q * n + j] = s * apj + c * aqj;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    if off(&a) >= 1e-10 * frob {
        return Err(Error::Numeric(
            "Jacobi rotations failed to converge".into(),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].partial_cmp(&a[j * n + j]).unwrap());
    let evals: Vec<f64> = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vecs = vec![0.0_f64; n * n];
    for (col, &src) in order.iter().enumerate() {
        for i in 0..n {
            vecs[i * n + col] = v[i * n + src];
        }
    }
    Ok((evals, vecs))
}

/// Count negative / zero eigenvalues with the scale-aware zero tolerance.
pub fn inertial_index(eigs: &[f64], scale: f64) -> InertialIndex {
    let z_tol = 1e-6 * scale;
    let n_neg = eigs.iter().filter(|&&e| e < -z_tol).count();
    let n_zero = eigs.iter().filter(|&&e| e.abs() <= z_tol).count();
    InertialIndex {
        n_neg,
        n_zero,
        eigensample: eigs.iter().take(5).copied().collect(),
    }
}

/// Run the full cross-check for a profile: assemble, diagonalize, count, and
/// confirm (a) the family's expected n(L), (b) the theta-sign prediction
/// (theta < 0 -> index (1,1); theta > 0 -> (2,1)), (c) that the kernel
/// eigenvector is phi' (correlation > 0.999).
pub fn verify_inertial(
    profile: &WaveProfile,
    theta: f64,
    n_modes: usize,
) -> Result<SpectralSummary> {
    // sharper potentials near k -> 1 need a wider band
    let n_modes = if profile.k() > 0.99 {
        n_modes.max(128)
    } else {
        n_modes
    };
    let m = assemble(profile, n_modes)?;
    let (evals, vecs) = jacobi_eigensystem(&m.data, m.size)?;
    // The zero tolerance scales with the magnitude of the spectral features
    // being classified (the ground-state depth), not with the truncation
    // bound mu_max^2: near k -> 0 the dnoidal family has a genuine O(k^4)
    // eigenvalue right above the kernel that a coarser tolerance would
    // swallow into n_zero. The row-norm term keeps it above the eigensolver
    // noise floor.
    let scale = evals[0].abs().max(1e-4 * m.scale);
    let index = inertial_index(&evals, scale);

    if index.n_zero < 1 {
        return Err(Error::Consistency(format!(
            "no eigenvalue within the zero tolerance; smallest: {:?}",
            index.eigensample
        )));
    }
    let expected = profile.family.n_expected();
    if index.n_neg != expected {
        return Err(Error::Consistency(format!(
            "counted n(L) = {} but the {} family requires {}",
            index.n_neg,
            profile.family.name(),
            expected
        )));
    }
    let theta_pred = if theta < 0.0 { 1 } else { 2 };
    if index.n_neg != theta_pred {
        return Err(Error::Consistency(format!(
            "theta = {theta:.3e} predicts n(L) = {theta_pred}, counted {}",
            index.n_neg
        )));
    }

    // kernel eigenvector vs phi'
    let zi = (0..evals.len())
        .min_by(|&i, &j| evals[i].abs().partial_cmp(&evals[j].abs()).unwrap())
        .unwrap();
    let n = m.size;
    let nm = m.n_modes;
    let grid = 2048;
    let mut dot = 0.0;
    let mut nu = 0.0;
    let mut np = 0.0;
    for p in 0..grid {
        let x = profile.l * p as f64 / grid as f64;
        let mut u = vecs[zi] / profile.l.sqrt();
        for mm in 1..=nm {
            let ang = 2.0 * PI * mm as f64 * x / profile.l;
            let amp = (2.0 / profile.l).sqrt();
            u += vecs[mm * n + zi] * amp * ang.cos();
            u += vecs[(nm + mm) * n + zi] * amp * ang.sin();
        }
        let dphi = profile.eval(x).1;
        dot += u * dphi;
        nu += u * u;
        np += dphi * dphi;
    }
    let kernel_correlation = dot.abs() / (nu.sqrt() * np.sqrt()).max(1e-300);

    Ok(SpectralSummary {
        index,
        kernel_correlation,
        n_modes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hill::compute_ybar;
    use crate::profiles::{make_profile, WaveFamily};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    const TWO_PI: f64 = 2.0 * PI;

    #[test]
    fn jacobi_two_by_two() {
        let (e, _) = jacobi_eigensystem(&[2.0, 1.0, 1.0, 2.0], 2).unwrap();
        assert!((e[0] - 1.0).abs() < 1e-14 && (e[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_diagonal_matrix() {
        let d = [3.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0, 0.0, 2.0];
        let (e, _) = jacobi_eigensystem(&d, 3).unwrap();
        assert_eq!(e.iter().map(|x| x.round() as i64).collect::<Vec<_>>(), vec![-1, 2, 3]);
    }

    #[test]
    fn jacobi_rejects_asymmetric() {
        let bad = [1.0, 2.0, 0.0, 1.0];
        assert!(matches!(
            jacobi_eigensystem(&bad, 2),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn jacobi_reconstruction_random_50x50() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(42);
        let n = 50;
        let mut a = vec![0.0_f64; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = rng.gen_range(-1.0..1.0);
                a[i * n + j] = v;
                a[j * n + i] = v;
            }
        }
        let (e, v) = jacobi_eigensystem(&a, n).unwrap();
        // || A - V diag(e) V^T ||_max
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let mut s = 0.0;
                for t in 0..n {
                    s += v[i * n + t] * e[t] * v[j * n + t];
                }
                worst = worst.max((a[i * n + j] - s).abs());
            }
        }
        assert!(worst < 1e-10, "reconstruction error {worst:.3e}");
    }

    #[test]
    fn constant_potential_exact_eigenvalues() {
        // c = 0, omega = 1: eigenvalues are exactly 1 + (2πm/L)², doubled for m >= 1
        let l = TWO_PI;
        let samples = vec![0.0; 4096];
        let m = assemble_from_samples(&samples, l, 1.0, 32).unwrap();
        let e = eigen_symmetric(&m).unwrap();
        let mut expected: Vec<f64> = vec![1.0];
        for mm in 1..=32 {
            let val = 1.0 + (2.0 * PI * mm as f64 / l).powi(2);
            expected.push(val);
            expected.push(val);
        }
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in e.iter().zip(expected.iter()) {
            assert!(
                (got - want).abs() < 1e-10 * want.max(1.0),
                "eigenvalue {got} vs {want}"
            );
        }
    }

    #[test]
    fn mathieu_type_check_against_independent_assembly() {
        // c(x) = 2 cos(2πx/L): hand-build the matrix from the analytic
        // coefficients (c_1 = 1, all others 0) and compare.
        let l = 5.0;
        let n_modes = 32;
        let grid = 4096;
        let samples: Vec<f64> = (0..grid)
            .map(|p| 2.0 * (2.0 * PI * p as f64 / grid as f64).cos())
            .collect();
        let m = assemble_from_samples(&samples, l, 0.7, n_modes).unwrap();

        let size = 2 * n_modes + 1;
        let mut direct = vec![0.0_f64; size * size];
        let mu = |mm: usize| 2.0 * PI * mm as f64 / l;
        let ch = |j: usize| if j == 1 { 1.0 } else { 0.0 };
        direct[0] = 0.7;
        for mm in 1..=n_modes {
            let v = -(2.0_f64).sqrt() * ch(mm);
            direct[mm] = v;
            direct[mm * size] = v;
        }
        for mi in 1..=n_modes {
            for ni in 1..=n_modes {
                let mut cc = -(ch(mi.abs_diff(ni)) + ch(mi + ni));
                let mut ss = -(ch(mi.abs_diff(ni)) - ch(mi + ni));
                if mi == ni {
                    cc += mu(mi).powi(2) + 0.7;
                    ss += mu(mi).powi(2) + 0.7;
                }
                direct[mi * size + ni] = cc;
                direct[(n_modes + mi) * size + (n_modes + ni)] = ss;
            }
        }
        for (a, b) in m.data.iter().zip(direct.iter()) {
            assert!((a - b).abs() < 1e-10, "assembly mismatch {a} vs {b}");
        }
        let e1 = eigen_symmetric(&m).unwrap();
        let (e2, _) = jacobi_eigensystem(&direct, size).unwrap();
        for (a, b) in e1.iter().zip(e2.iter()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn inertial_indices_by_family() {
        for &(fam, l, expect) in &[
            (WaveFamily::CkdvDnoidal, TWO_PI, (1usize, 1usize)),
            (WaveFamily::CkdvCnoidal, TWO_PI, (2, 1)),
            (WaveFamily::GardnerCnoidal, 20.0, (2, 1)),
        ] {
            for &k in &[0.2, 0.5, 0.8] {
                let p = make_profile(fam, l, k).unwrap();
                let (_, theta) = compute_ybar(&p, 1024).unwrap();
                let s = verify_inertial(&p, theta, 64).unwrap();
                assert_eq!(
                    (s.index.n_neg, s.index.n_zero),
                    expect,
                    "{fam:?} k={k}: got {:?}",
                    s.index
                );
                assert!(
                    s.kernel_correlation > 0.999,
                    "{fam:?} k={k}: kernel correlation {}",
                    s.kernel_correlation
                );
            }
        }
    }

    #[test]
    fn dnoidal_lowest_eigenvalues() {
        let p = make_profile(WaveFamily::CkdvDnoidal, TWO_PI, 0.5).unwrap();
        let m = assemble(&p, 64).unwrap();
        let e = eigen_symmetric(&m).unwrap();
        assert!(e[0] < 0.0, "lambda_0 = {}", e[0]);
        assert!(e[1].abs() < 1e-6 * m.scale, "lambda_1 = {}", e[1]);
        assert!(e[2] > 0.0, "lambda_2 = {}", e[2]);
    }

    #[test]
    fn eigenvalue_stability_under_mode_doubling() {
        let p = make_profile(WaveFamily::CkdvCnoidal, TWO_PI, 0.8).unwrap();
        let m1 = assemble(&p, 48).unwrap();
        let m2 = assemble(&p, 96).unwrap();
        let e1 = eigen_symmetric(&m1).unwrap();
        let e2 = eigen_symmetric(&m2).unwrap();
        for i in 0..5 {
            let denom = e2[i].abs().max(1.0);
            assert!(
                (e1[i] - e2[i]).abs() / denom < 1e-8,
                "eigenvalue {i} moved {:.3e}",
                (e1[i] - e2[i]).abs() / denom
            );
        }
    }

    #[test]
    fn tail_gate_requests_more_modes() {
        // a potential with a kink has 1/j^2 coefficients, far from decayed at
        // any reasonable cutoff; the smoothness gate must fire.
        let grid = 4096;
        let samples: Vec<f64> = (0..grid)
            .map(|p| {
                let t = p as f64 / grid as f64;
                (t - 0.5).abs()
            })
            .collect();
        match assemble_from_samples(&samples, TWO_PI, 1.0, 32) {
            Err(Error::Numeric(msg)) => assert!(msg.contains("increase")),
            other => panic!("expected tail error, got {other:?}"),
        }
    }
}
