//! Auxiliary initial value problems for the Hill operator
//! L = -d²/dx² + omega - g'(phi)  over one period [0, L]:
//!
//! * `ybar`: homogeneous solution with ybar(0) = -1/phi''(0), ybar'(0) = 0;
//!   theta = ybar'(L)/phi''(0) decides simplicity of the kernel and the
//!   location of the zero eigenvalue;
//! * `psi`:  -psi'' + q psi = -phi with psi(0) = -(1/ybar'(L)) ∫ phi ybar,
//!   the even periodic solution, equal to d phi/d omega on the solution surface;
//! * `eta`:  -eta'' + q eta = 1 with eta(0) = (1/ybar'(L)) ∫ ybar,
//!   equal to d phi/d A; I = ∫ eta is the scalar the verdict hinges on.
//!
//! Integration is fixed-step classical RK4 on a uniform grid, run at h and h/2
//! with one Richardson halving: the halved pair supplies both an error
//! estimate and an extrapolated trajectory. The uniform grid makes trapezoid
//! quadrature spectrally accurate for the periodic integrands; the two
//! non-periodic integrals (∫ ybar, ∫ phi ybar) get Euler-Maclaurin endpoint
//! corrections with analytically known boundary derivatives.

use crate::error::{Error, Result};
use crate::profiles::WaveProfile;

/// Refuse to classify when |theta| falls below this: Theorem-level boundary
/// where the kernel stops being certifiably simple.
pub const THETA_MIN: f64 = 1e-8;

/// Wronskian drift the ybar integration must achieve (the stated invariant is
/// 1e-8; we target half an order lower and adapt the grid until reached).
const DRIFT_TARGET: f64 = 5e-9;

/// Solution of a second-order IVP sampled on N+1 equispaced nodes.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub xs: Vec<f64>,
    pub y: Vec<f64>,
    pub yp: Vec<f64>,
    /// Richardson error estimate: max node discrepancy of the (h, h/2) pair / 15.
    pub err_estimate: f64,
}

impl Trajectory {
    pub fn n(&self) -> usize {
        self.xs.len() - 1
    }

    pub fn h(&self) -> f64 {
        self.xs[1] - self.xs[0]
    }

    pub fn y_end(&self) -> f64 {
        *self.y.last().unwrap()
    }

    pub fn yp_end(&self) -> f64 {
        *self.yp.last().unwrap()
    }

    fn max_abs_y(&self) -> f64 {
        self.y.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    fn max_abs_yp(&self) -> f64 {
        self.yp.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// All trajectories and diagnostics of one Hill analysis.
#[derive(Debug, Clone)]
pub struct HillData {
    pub ybar: Trajectory,
    pub theta: f64,
    pub psi: Trajectory,
    pub eta: Trajectory,
    /// max |W(phi', ybar) - 1| over the grid.
    pub wronskian_drift: f64,
    pub psi_periodicity: f64,
    pub psi_deriv_periodicity: f64,
    pub eta_periodicity: f64,
    pub eta_deriv_periodicity: f64,
    /// Grid size actually used (after K-scaling and drift adaptation).
    pub n_effective: usize,
}

/// One classical RK4 pass for y'' = q(x) y - r(x) with q, r pre-sampled at the
/// nodes (qn, n+1 values) and midpoints (qh, n values).
fn rk4_pass(
    qn: &[f64],
    qh: &[f64],
    rn: &[f64],
    rh: &[f64],
    y0: f64,
    yp0: f64,
    h: f64,
    l: f64,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = qh.len();
    let mut y = Vec::with_capacity(n + 1);
    let mut yp = Vec::with_capacity(n + 1);
    y.push(y0);
    yp.push(yp0);
    let (mut cy, mut cp) = (y0, yp0);
    for i in 0..n {
        let (q0, qm, q1) = (qn[i], qh[i], qn[i + 1]);
        let (r0, rm, r1) = (rn[i], rh[i], rn[i + 1]);
        let k1y = cp;
        let k1p = q0 * cy - r0;
        let y2 = cy + 0.5 * h * k1y;
        let p2 = cp + 0.5 * h * k1p;
        let k2y = p2;
        let k2p = qm * y2 - rm;
        let y3 = cy + 0.5 * h * k2y;
        let p3 = cp + 0.5 * h * k2p;
        let k3y = p3;
        let k3p = qm * y3 - rm;
        let y4 = cy + h * k3y;
        let p4 = cp + h * k3p;
        let k4y = p4;
        let k4p = q1 * y4 - r1;
        cy += h / 6.0 * (k1y + 2.0 * (k2y + k3y) + k4y);
        cp += h / 6.0 * (k1p + 2.0 * (k2p + k3p) + k4p);
        if !(cy.is_finite() && cp.is_finite()) {
            return Err(Error::Numeric(format!(
                "integration blew up near x = {:.6}",
                ((i + 1) as f64 * h).min(l)
            )));
        }
        y.push(cy);
        yp.push(cp);
    }
    Ok((y, yp))
}

/// Solve -y'' + q(x) y = r(x) (i.e. y'' = q y - r) on [0, L] with a fixed-step
/// RK4 pair at steps h = L/N and h/2; the halved run is Richardson-combined
/// with the full run and returned on the N+1 node grid.
pub fn integrate_second_order<Q, R>(
    q: Q,
    r: R,
    y0: f64,
    yp0: f64,
    l: f64,
    n: usize,
) -> Result<Trajectory>
where
    Q: Fn(f64) -> f64,
    R: Fn(f64) -> f64,
{
    if n < 64 {
        return Err(Error::Contract(format!("grid size N = {n} below minimum 64")));
    }
    if !(l > 0.0) {
        return Err(Error::Domain(format!("interval length must be positive, got {l}")));
    }
    // Sample coefficients once on the quarter grid; both passes stride it.
    let nq = 4 * n;
    let mut qs = Vec::with_capacity(nq + 1);
    let mut rs = Vec::with_capacity(nq + 1);
    for i in 0..=nq {
        let x = l * i as f64 / nq as f64;
        let (qi, ri) = (q(x), r(x));
        if !(qi.is_finite() && ri.is_finite()) {
            return Err(Error::Numeric(format!(
                "coefficient not finite at x = {x:.6}"
            )));
        }
        qs.push(qi);
        rs.push(ri);
    }
    let h = l / n as f64;
    let stride = |v: &[f64], step: usize, off: usize| -> Vec<f64> {
        v.iter().skip(off).step_by(step).copied().collect()
    };
    let (qn_c, qh_c) = (stride(&qs, 4, 0), stride(&qs, 4, 2));
    let (rn_c, rh_c) = (stride(&rs, 4, 0), stride(&rs, 4, 2));
    let (qn_f, qh_f) = (stride(&qs, 2, 0), stride(&qs, 2, 1));
    let (rn_f, rh_f) = (stride(&rs, 2, 0), stride(&rs, 2, 1));

    let (yc, ypc) = rk4_pass(&qn_c, &qh_c, &rn_c, &rh_c, y0, yp0, h, l)?;
    let (yf, ypf) = rk4_pass(&qn_f, &qh_f, &rn_f, &rh_f, y0, yp0, 0.5 * h, l)?;

    let mut y = Vec::with_capacity(n + 1);
    let mut yp = Vec::with_capacity(n + 1);
    let mut err = 0.0_f64;
    for i in 0..=n {
        let dy = yf[2 * i] - yc[i];
        let dp = ypf[2 * i] - ypc[i];
        err = err.max(dy.abs().max(dp.abs()) / 15.0);
        y.push(yf[2 * i] + dy / 15.0);
        yp.push(ypf[2 * i] + dp / 15.0);
    }
    let xs = (0..=n).map(|i| l * i as f64 / n as f64).collect();
    Ok(Trajectory {
        xs,
        y,
        yp,
        err_estimate: err,
    })
}

/// Trapezoid rule on a uniform grid over one period; spectrally accurate for
/// smooth periodic integrands.
pub fn periodic_quadrature(xs: &[f64], values: &[f64]) -> Result<f64> {
    if xs.len() != values.len() {
        return Err(Error::Contract(format!(
            "grid/value length mismatch: {} vs {}",
            xs.len(),
            values.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::Contract("need at least 2 nodes".into()));
    }
    let h = xs[1] - xs[0];
    if !(h > 0.0) {
        return Err(Error::Contract("grid must be strictly increasing".into()));
    }
    let span = xs[xs.len() - 1] - xs[0];
    for i in 1..xs.len() {
        if ((xs[i] - xs[i - 1]) - h).abs() > 1e-9 * span.max(1.0) {
            return Err(Error::Contract(format!(
                "non-uniform grid at index {i}: spacing {} vs {h}",
                xs[i] - xs[i - 1]
            )));
        }
    }
    Ok(h * (0.5 * values[0]
        + values[1..values.len() - 1].iter().sum::<f64>()
        + 0.5 * values[values.len() - 1]))
}

fn trapezoid(values: &[f64], h: f64) -> f64 {
    h * (0.5 * values[0]
        + values[1..values.len() - 1].iter().sum::<f64>()
        + 0.5 * values[values.len() - 1])
}

/// Grid policy: keep steps-per-oscillation roughly constant as K(k) grows.
pub fn effective_grid(profile: &WaveProfile, n_requested: usize) -> usize {
    let k_term = 64 * (4.0 * profile.big_k()).ceil() as usize;
    n_requested.max(k_term).max(64)
}

fn phi_pp0(profile: &WaveProfile) -> Result<f64> {
    let (_, _, pp0) = profile.eval(0.0);
    if pp0.abs() < 1e-12 {
        return Err(Error::DegenerateProfile(format!(
            "|phi''(0)| = {:.3e} below 1e-12 for {} (degenerate crest)",
            pp0.abs(),
            profile.family.name()
        )));
    }
    Ok(pp0)
}

fn wronskian_drift(profile: &WaveProfile, traj: &Trajectory) -> f64 {
    wronskian_diagnostics(profile, traj).0
}

/// Max |W - 1| plus the rounding-noise scale of the W terms. Near degenerate
/// limits (dnoidal k -> 0) phi''(0) is a catastrophic cancellation of order
/// 1e-9 while ybar ~ 1/phi''(0); W then carries an irreducible noise floor of
/// eps * |omega phi| * |ybar| that no grid refinement removes.
fn wronskian_diagnostics(profile: &WaveProfile, traj: &Trajectory) -> (f64, f64) {
    let mut drift = 0.0_f64;
    let mut noise = 0.0_f64;
    for (i, &x) in traj.xs.iter().enumerate() {
        let (phi, dphi, ddphi) = profile.eval(x);
        let w = dphi * traj.yp[i] - ddphi * traj.y[i];
        drift = drift.max((w - 1.0).abs());
        let gmag = profile.omega.abs() * phi.abs()
            + profile.family.g(phi).abs()
            + profile.a_const.abs();
        noise = noise.max(gmag * traj.y[i].abs() + (dphi * traj.yp[i]).abs());
    }
    (drift, 16.0 * f64::EPSILON * noise)
}

/// Solve the homogeneous problem for ybar and return (trajectory, theta).
/// The grid doubles (up to 4 times) until the Wronskian identity
/// W(phi', ybar) = 1 holds to the drift target.
pub fn compute_ybar(profile: &WaveProfile, n_requested: usize) -> Result<(Trajectory, f64)> {
    compute_ybar_with_potential(profile, &|x| profile.hill_potential(x), n_requested)
}

/// Same as [`compute_ybar`] with an explicit potential expression; the
/// expression must evaluate the same operator coefficient (e.g. the shifted
/// mKdV presentation of the Gardner potential).
pub fn compute_ybar_with_potential<Q: Fn(f64) -> f64>(
    profile: &WaveProfile,
    q: &Q,
    n_requested: usize,
) -> Result<(Trajectory, f64)> {
    let pp0 = phi_pp0(profile)?;
    let mut n = effective_grid(profile, n_requested);
    let mut last: Option<(Trajectory, f64, f64)> = None;
    for _ in 0..5 {
        let traj = integrate_second_order(q, |_| 0.0, -1.0 / pp0, 0.0, profile.l, n)?;
        let (drift, floor) = wronskian_diagnostics(profile, &traj);
        last = Some((traj, drift, floor));
        if drift <= DRIFT_TARGET.max(floor) {
            break;
        }
        n *= 2;
    }
    let (traj, drift, floor) = last.unwrap();
    if drift > 2.0 * DRIFT_TARGET.max(floor) {
        return Err(Error::Numeric(format!(
            "Wronskian drift {drift:.3e} above target after grid adaptation (n = {n})"
        )));
    }
    let theta = traj.yp_end() / pp0;
    if !theta.is_finite() {
        return Err(Error::Numeric("theta not finite".into()));
    }
    if theta.abs() < THETA_MIN {
        return Err(Error::KernelNotSimple { theta });
    }
    // Resolvability guard: near degenerate limits (dnoidal k -> 0) the
    // monodromy defect ybar'(L) sinks below the integration noise floor of
    // the large-amplitude trajectory; theta would be numerically meaningless
    // even when formally above THETA_MIN.
    if traj.yp_end().abs() < 1e-9 * traj.max_abs_yp() {
        return Err(Error::KernelNotSimple { theta });
    }
    Ok((traj, theta))
}

/// ∫ ybar and ∫ phi*ybar over [0, L] from the stored trajectory. ybar is not
/// periodic, so plain trapezoid is only O(h²); the Euler-Maclaurin boundary
/// terms are known analytically (phi'(0) = phi'(L) = 0, ybar'(0) = 0) and
/// restore O(h^6).
fn ybar_integrals(profile: &WaveProfile, ybar: &Trajectory, q0: f64) -> (f64, f64) {
    let h = ybar.h();
    let n = ybar.n();
    let ypl = ybar.yp_end();
    let (phi0, _, pp0) = profile.eval(0.0);

    let int_y = trapezoid(&ybar.y, h) - h * h / 12.0 * ypl + h.powi(4) / 720.0 * q0 * ypl;

    let mut phiy = Vec::with_capacity(n + 1);
    for (i, &x) in ybar.xs.iter().enumerate() {
        phiy.push(profile.eval(x).0 * ybar.y[i]);
    }
    let int_phiy = trapezoid(&phiy, h) - h * h / 12.0 * phi0 * ypl
        + h.powi(4) / 720.0 * ypl * (3.0 * pp0 + phi0 * q0);
    (int_y, int_phiy)
}

fn check_theta(profile: &WaveProfile, ybar: &Trajectory) -> Result<f64> {
    let pp0 = phi_pp0(profile)?;
    let theta = ybar.yp_end() / pp0;
    if theta.abs() < THETA_MIN {
        return Err(Error::KernelNotSimple { theta });
    }
    Ok(ybar.yp_end())
}

/// psi: -psi'' + q psi = -phi with the periodicity-enforcing initial value.
pub fn compute_psi(profile: &WaveProfile, ybar: &Trajectory) -> Result<Trajectory> {
    compute_psi_with_potential(profile, &|x| profile.hill_potential(x), ybar)
}

/// [`compute_psi`] with an explicit potential expression.
pub fn compute_psi_with_potential<Q: Fn(f64) -> f64>(
    profile: &WaveProfile,
    q: &Q,
    ybar: &Trajectory,
) -> Result<Trajectory> {
    let ypl = check_theta(profile, ybar)?;
    let (_, int_phiy) = ybar_integrals(profile, ybar, q(0.0));
    let psi0 = -int_phiy / ypl;
    let traj = integrate_second_order(
        q,
        |x| -profile.eval(x).0,
        psi0,
        0.0,
        profile.l,
        ybar.n(),
    )?;
    check_periodicity(&traj, "psi")?;
    Ok(traj)
}

/// eta: -eta'' + q eta = 1 with the periodicity-enforcing initial value.
pub fn compute_eta(profile: &WaveProfile, ybar: &Trajectory) -> Result<Trajectory> {
    compute_eta_with_potential(profile, &|x| profile.hill_potential(x), ybar)
}

/// [`compute_eta`] with an explicit potential expression.
pub fn compute_eta_with_potential<Q: Fn(f64) -> f64>(
    profile: &WaveProfile,
    q: &Q,
    ybar: &Trajectory,
) -> Result<Trajectory> {
    let ypl = check_theta(profile, ybar)?;
    let (int_y, _) = ybar_integrals(profile, ybar, q(0.0));
    let eta0 = int_y / ypl;
    let traj = integrate_second_order(q, |_| 1.0, eta0, 0.0, profile.l, ybar.n())?;
    check_periodicity(&traj, "eta")?;
    Ok(traj)
}

fn periodicity_residuals(traj: &Trajectory) -> (f64, f64) {
    let ry = (traj.y_end() - traj.y[0]).abs() / traj.max_abs_y().max(1e-300);
    let rp = traj.yp_end().abs() / traj.max_abs_yp().max(1e-300);
    (ry, rp)
}

fn check_periodicity(traj: &Trajectory, what: &str) -> Result<()> {
    let (ry, rp) = periodicity_residuals(traj);
    if ry > 1e-6 || rp > 1e-6 {
        return Err(Error::Numeric(format!(
            "{what} failed periodicity: |{what}(L)-{what}(0)| rel {ry:.3e}, |{what}'(L)| rel {rp:.3e}"
        )));
    }
    Ok(())
}

/// Full Hill analysis: ybar (+theta), psi, eta and diagnostics.
pub fn solve_hill(profile: &WaveProfile, n_requested: usize) -> Result<HillData> {
    solve_hill_with_potential(profile, &|x| profile.hill_potential(x), n_requested)
}

/// [`solve_hill`] with an explicit potential expression; useful to run the
/// pipeline on an algebraically equivalent presentation of the same operator
/// (the Gardner potential omega - 2 phi - 3 phi² equals the shifted mKdV form
/// (omega + 1/3) - 3 (phi + 1/3)² pointwise).
pub fn solve_hill_with_potential<Q: Fn(f64) -> f64>(
    profile: &WaveProfile,
    q: &Q,
    n_requested: usize,
) -> Result<HillData> {
    let (ybar, theta) = compute_ybar_with_potential(profile, q, n_requested)?;
    let drift = wronskian_drift(profile, &ybar);
    let psi = compute_psi_with_potential(profile, q, &ybar)?;
    let eta = compute_eta_with_potential(profile, q, &ybar)?;
    let (psi_p, psi_dp) = periodicity_residuals(&psi);
    let (eta_p, eta_dp) = periodicity_residuals(&eta);
    let n_effective = ybar.n();
    Ok(HillData {
        ybar,
        theta,
        psi,
        eta,
        wronskian_drift: drift,
        psi_periodicity: psi_p,
        psi_deriv_periodicity: psi_dp,
        eta_periodicity: eta_p,
        eta_deriv_periodicity: eta_dp,
        n_effective,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::{make_profile, omega_of_k, WaveFamily};
    use crate::testutil::assert_rel;
    use std::f64::consts::PI;

    const TWO_PI: f64 = 2.0 * PI;

    #[test]
    fn constant_coefficient_cosh() {
        // y'' = y, y(0)=1, y'(0)=0 -> y = cosh
        let t = integrate_second_order(|_| 1.0, |_| 0.0, 1.0, 0.0, 1.0, 128).unwrap();
        assert_rel(t.y_end(), 1.0_f64.cosh(), 1e-12, "cosh(1)");
        assert_rel(t.yp_end(), 1.0_f64.sinh(), 1e-12, "sinh(1)");
    }

    #[test]
    fn pure_forcing_parabola() {
        // y'' = -1, y(0)=y'(0)=0 -> y = -x^2/2
        let t = integrate_second_order(|_| 0.0, |_| 1.0, 0.0, 0.0, 1.0, 64).unwrap();
        assert_rel(t.y_end(), -0.5, 1e-13, "-x^2/2 at 1");
        for (i, &x) in t.xs.iter().enumerate() {
            assert!((t.y[i] + 0.5 * x * x).abs() < 1e-13);
        }
    }

    #[test]
    fn rejects_tiny_grid_and_bad_interval() {
        assert!(integrate_second_order(|_| 0.0, |_| 0.0, 0.0, 0.0, 1.0, 8).is_err());
        assert!(integrate_second_order(|_| 0.0, |_| 0.0, 0.0, 0.0, -1.0, 128).is_err());
    }

    #[test]
    fn wronskian_conservation_dnoidal() {
        let p = make_profile(WaveFamily::CkdvDnoidal, TWO_PI, 0.5).unwrap();
        let (ybar, _) = compute_ybar(&p, 2048).unwrap();
        let drift = wronskian_drift(&p, &ybar);
        assert!(drift < 1e-9, "drift = {drift:.3e}");
    }

    #[test]
    fn phi_prime_solves_homogeneous_equation() {
        for &fam in &[WaveFamily::CkdvCnoidal, WaveFamily::GardnerCnoidal] {
            let l = if fam == WaveFamily::GardnerCnoidal { 20.0 } else { TWO_PI };
            let p = make_profile(fam, l, 0.5).unwrap();
            let pp0 = p.eval(0.0).2;
            let t = integrate_second_order(
                |x| p.hill_potential(x),
                |_| 0.0,
                0.0,
                pp0,
                p.l,
                2048,
            )
            .unwrap();
            let scale = t.max_abs_y();
            for (i, &x) in t.xs.iter().enumerate() {
                let (_, dphi, _) = p.eval(x);
                assert!(
                    (t.y[i] - dphi).abs() < 1e-8 * scale,
                    "{fam:?}: phi' reproduction off by {:.3e} at x={x}",
                    (t.y[i] - dphi).abs()
                );
            }
        }
    }

    #[test]
    fn theta_signs_by_family() {
        let p = make_profile(WaveFamily::CkdvDnoidal, TWO_PI, 0.5).unwrap();
        let (_, theta) = compute_ybar(&p, 1024).unwrap();
        assert!(theta < 0.0, "dnoidal theta = {theta}");

        let p = make_profile(WaveFamily::CkdvCnoidal, TWO_PI, 0.5).unwrap();
        let (_, theta) = compute_ybar(&p, 1024).unwrap();
        assert!(theta > 0.0, "cnoidal theta = {theta}");

        let p = make_profile(WaveFamily::GardnerCnoidal, 20.0, 0.5).unwrap();
        let (_, theta) = compute_ybar(&p, 1024).unwrap();
        assert!(theta > 0.0, "gardner theta = {theta}");
    }

    #[test]
    fn frozen_theta_values() {
        // cross-validated at bring-up against an independent Fourier route
        let p = make_profile(WaveFamily::CkdvDnoidal, TWO_PI, 0.5).unwrap();
        let (_, theta) = compute_ybar(&p, 2048).unwrap();
        assert_rel(theta, -41.9722048004, 1e-8, "theta dn(2pi,0.5)");

        let p = make_profile(WaveFamily::GardnerCnoidal, 20.0, 0.5).unwrap();
        let (_, theta) = compute_ybar(&p, 2048).unwrap();
        assert_rel(theta, 1299.16610631, 1e-8, "theta gardner(20,0.5)");
    }

    #[test]
    fn psi_periodicity_and_parity_orthogonality() {
        let p = make_profile(WaveFamily::CkdvDnoidal, TWO_PI, 0.5).unwrap();
        let hd = solve_hill(&p, 2048).unwrap();
        assert!(hd.psi_periodicity < 1e-6);
        assert!(hd.psi_deriv_periodicity < 1e-6);
        // <psi, phi'> = 0: even against odd
        let prod: Vec<f64> = hd
            .psi
            .xs
            .iter()
            .enumerate()
            .map(|(i, &x)| hd.psi.y[i] * p.eval(x).1)
            .collect();
        let ip = periodic_quadrature(&hd.psi.xs, &prod).unwrap();
        let scale = hd.psi.max_abs_y() * p.l;
        assert!(ip.abs() < 1e-9 * scale, "<psi,phi'> = {ip:.3e}");
    }

    #[test]
    fn psi_matches_domega_derivative() {
        // psi = d phi/d omega along the A=0 curve (finite differences in k
        // mapped through omega(k)).
        let p = make_profile(WaveFamily::CkdvCnoidal, TWO_PI, 0.5).unwrap();
        let hd = solve_hill(&p, 2048).unwrap();
        let dk = 1e-5;
        let pp = make_profile(WaveFamily::CkdvCnoidal, TWO_PI, 0.5 + dk).unwrap();
        let pm = make_profile(WaveFamily::CkdvCnoidal, TWO_PI, 0.5 - dk).unwrap();
        let dw = pp.omega - pm.omega;
        let scale = hd.psi.max_abs_y();
        for (i, &x) in hd.psi.xs.iter().enumerate() {
            let fd = (pp.eval(x).0 - pm.eval(x).0) / dw;
            assert!(
                (fd - hd.psi.y[i]).abs() < 1e-4 * scale,
                "psi vs d phi/d omega at x={x}: {:.3e}",
                (fd - hd.psi.y[i]).abs()
            );
        }
    }

    #[test]
    fn eta_periodicity_across_families_and_k() {
        for &(fam, l) in &[
            (WaveFamily::CkdvDnoidal, TWO_PI),
            (WaveFamily::CkdvCnoidal, TWO_PI),
            (WaveFamily::GardnerCnoidal, 20.0),
        ] {
            for i in 0..10 {
                let k = 0.05 + 0.9 * i as f64 / 9.0;
                let p = make_profile(fam, l, k).unwrap();
                let hd = solve_hill(&p, 1024).unwrap();
                assert!(
                    hd.eta_periodicity < 1e-6 && hd.eta_deriv_periodicity < 1e-6,
                    "{fam:?} k={k}: eta residuals {:.2e}/{:.2e}",
                    hd.eta_periodicity,
                    hd.eta_deriv_periodicity
                );
            }
        }
    }

    #[test]
    fn eta_integral_reproduces_dnoidal_table_entry() {
        // dnoidal L=2pi, k=0.5: I = 5.4568 (4-decimal table entry)
        let p = make_profile(WaveFamily::CkdvDnoidal, TWO_PI, 0.5).unwrap();
        let hd = solve_hill(&p, 2048).unwrap();
        let i_val = periodic_quadrature(&hd.eta.xs, &hd.eta.y).unwrap();
        assert!(
            (i_val - 5.4568).abs() < 2e-4,
            "I = {i_val}, table says 5.4568"
        );
        // 12-digit frozen value (bring-up, two independent routes)
        assert_rel(i_val, 5.45688796961, 1e-8, "I dn(2pi,0.5)");
    }

    #[test]
    fn gardner_chain_rule() {
        // d phi/dk = psi * domega/dk + eta * dA/dk on the explicit curve
        let p = make_profile(WaveFamily::GardnerCnoidal, 20.0, 0.5).unwrap();
        let hd = solve_hill(&p, 2048).unwrap();
        let dk = 1e-5;
        let pp = make_profile(WaveFamily::GardnerCnoidal, 20.0, 0.5 + dk).unwrap();
        let pm = make_profile(WaveFamily::GardnerCnoidal, 20.0, 0.5 - dk).unwrap();
        let dwdk = (pp.omega - pm.omega) / (2.0 * dk);
        let dadk = (pp.a_const - pm.a_const) / (2.0 * dk);
        let mut max_scale = 0.0_f64;
        for (i, &x) in hd.psi.xs.iter().enumerate() {
            let model = hd.psi.y[i] * dwdk + hd.eta.y[i] * dadk;
            max_scale = max_scale.max(model.abs());
            let fd = (pp.eval(x).0 - pm.eval(x).0) / (2.0 * dk);
            assert!(
                (fd - model).abs() < 1e-3 * max_scale.max(1e-3),
                "chain rule off by {:.3e} at x={x}",
                (fd - model).abs()
            );
        }
    }

    #[test]
    fn ybar_monodromy_relation() {
        // ybar(L-x) = ybar(x) - theta*phi'(x): parity about 0 combined with
        // the unipotent monodromy; also an independent route to theta.
        // (ybar itself is NOT periodic, so plain evenness about L/2 fails.)
        for &(fam, l) in &[
            (WaveFamily::CkdvDnoidal, TWO_PI),
            (WaveFamily::CkdvCnoidal, TWO_PI),
            (WaveFamily::GardnerCnoidal, 20.0),
        ] {
            let p = make_profile(fam, l, 0.5).unwrap();
            let hd = solve_hill(&p, 2048).unwrap();
            let n = hd.ybar.n();
            let scale = hd.ybar.max_abs_y();
            for (i, &x) in hd.ybar.xs.iter().enumerate() {
                let lhs = hd.ybar.y[n - i];
                let rhs = hd.ybar.y[i] - hd.theta * p.eval(x).1;
                assert!(
                    (lhs - rhs).abs() < 1e-7 * scale,
                    "{fam:?}: monodromy relation off {:.3e} at x={x}",
                    (lhs - rhs).abs()
                );
            }
            // endpoint value returns to the initial one
            assert!((hd.ybar.y_end() - hd.ybar.y[0]).abs() < 1e-7 * scale);
        }
    }

    #[test]
    fn psi_eta_even_about_origin() {
        let p = make_profile(WaveFamily::CkdvCnoidal, TWO_PI, 0.5).unwrap();
        let hd = solve_hill(&p, 2048).unwrap();
        for traj in [&hd.psi, &hd.eta] {
            let n = traj.n();
            let scale = traj.max_abs_y();
            for i in 0..=n {
                assert!(
                    (traj.y[n - i] - traj.y[i]).abs() < 1e-8 * scale,
                    "parity off at node {i}"
                );
            }
        }
    }

    #[test]
    fn grid_refinement_convergence() {
        for &(fam, l) in &[
            (WaveFamily::CkdvDnoidal, TWO_PI),
            (WaveFamily::CkdvCnoidal, TWO_PI),
        ] {
            let p = make_profile(fam, l, 0.5).unwrap();
            let hd1 = solve_hill(&p, 2048).unwrap();
            let hd2 = solve_hill(&p, 4096).unwrap();
            let i1 = periodic_quadrature(&hd1.eta.xs, &hd1.eta.y).unwrap();
            let i2 = periodic_quadrature(&hd2.eta.xs, &hd2.eta.y).unwrap();
            assert!(
                ((hd1.theta - hd2.theta) / hd2.theta).abs() < 1e-9,
                "{fam:?} theta drift {:.2e}",
                ((hd1.theta - hd2.theta) / hd2.theta).abs()
            );
            assert!(
                ((i1 - i2) / i2).abs() < 1e-9,
                "{fam:?} I drift {:.2e}",
                ((i1 - i2) / i2).abs()
            );
        }
    }

    #[test]
    fn quadrature_contract() {
        let n = 256;
        let l = 5.0;
        let xs: Vec<f64> = (0..=n).map(|i| l * i as f64 / n as f64).collect();
        let vals: Vec<f64> = xs.iter().map(|x| (2.0 * PI * x / l).sin()).collect();
        let s = periodic_quadrature(&xs, &vals).unwrap();
        assert!(s.abs() < 1e-14, "∫ sin over period = {s:.3e}");

        let mut bad = xs.clone();
        bad[3] += 0.01;
        assert!(matches!(
            periodic_quadrature(&bad, &vals),
            Err(Error::Contract(_))
        ));
        assert!(periodic_quadrature(&xs[..1], &vals[..1]).is_err());
    }

    #[test]
    fn stiff_modulus_keeps_wronskian_tight() {
        // k = 0.9999 forces the adaptive doubling path
        let p = make_profile(WaveFamily::CkdvCnoidal, TWO_PI, 0.9999).unwrap();
        let hd = solve_hill(&p, 2048).unwrap();
        assert!(
            hd.wronskian_drift < 1e-8,
            "drift {:.3e} with n = {}",
            hd.wronskian_drift,
            hd.n_effective
        );
        assert!(hd.n_effective > 2048, "adaptation did not trigger");
    }

    #[test]
    fn degenerate_profile_rejected() {
        // at k -> 0 the dnoidal wave tends to the constant state phi''(0) -> 0;
        // far before that theta passes below tolerance or phi''(0) underflows.
        let p = make_profile(WaveFamily::CkdvDnoidal, TWO_PI, 1.5e-6).unwrap();
        match compute_ybar(&p, 256) {
            Err(Error::DegenerateProfile(_)) | Err(Error::KernelNotSimple { .. }) => {}
            other => panic!("expected degeneracy error, got {other:?}"),
        }
    }

    #[test]
    fn omega_of_k_consistency_with_solver_grids() {
        // effective_grid honors the K-scaling rule
        let p = make_profile(WaveFamily::CkdvCnoidal, TWO_PI, 0.9999).unwrap();
        assert!(effective_grid(&p, 2048) >= 64 * (4.0 * p.big_k()).ceil() as usize);
        let w = omega_of_k(WaveFamily::CkdvCnoidal, TWO_PI, 0.9999).unwrap();
        assert!(w.is_finite());
    }
}
