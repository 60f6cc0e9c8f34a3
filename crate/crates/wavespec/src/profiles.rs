//! The three explicit periodic traveling-wave families and their parameter
//! maps (L, k) -> (a, b, omega, A).
//!
//! All waves solve the profile ODE  -phi'' + omega*phi - g(phi) - A = 0  with
//! L-periodic boundary conditions:
//!
//! * `CkdvDnoidal`  — positive dnoidal wave of the critical KdV (g = s^5, A = 0),
//!   phi = a dn(2Kx/L) / sqrt(1 - b sn^2(2Kx/L));
//! * `CkdvCnoidal`  — zero-mean cnoidal wave of the critical KdV (g = s^5, A = 0),
//!   phi = a cn(4Kx/L) / sqrt(1 - b sn^2(4Kx/L));
//! * `GardnerCnoidal` — Gardner wave (g = s^2 + s^3, A = A(k)),
//!   phi = -1/3 + b cn(4Kx/L), Galilean shift of an mKdV cnoidal wave.

use crate::elliptic::{complete_k, jacobi, Modulus};
use crate::error::{Error, Result};

/// Admissible modulus clamp used by table generation and omega inversion.
pub const K_CLAMP_LO: f64 = 1e-6;
pub const K_CLAMP_HI: f64 = 1.0 - 1e-6;

/// One of the three supported wave families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WaveFamily {
    CkdvDnoidal,
    CkdvCnoidal,
    GardnerCnoidal,
}

impl WaveFamily {
    /// Nonlinearity g(s).
    pub fn g(&self, s: f64) -> f64 {
        match self {
            WaveFamily::CkdvDnoidal | WaveFamily::CkdvCnoidal => s * s * s * s * s,
            WaveFamily::GardnerCnoidal => s * s + s * s * s,
        }
    }

    /// g'(s).
    pub fn g_prime(&self, s: f64) -> f64 {
        match self {
            WaveFamily::CkdvDnoidal | WaveFamily::CkdvCnoidal => 5.0 * s * s * s * s,
            WaveFamily::GardnerCnoidal => 2.0 * s + 3.0 * s * s,
        }
    }

    /// Expected inertial count n(L) for the linearized operator, always
    /// cross-validated by the spectral check before a verdict is emitted.
    pub fn n_expected(&self) -> usize {
        match self {
            WaveFamily::CkdvDnoidal => 1,
            WaveFamily::CkdvCnoidal | WaveFamily::GardnerCnoidal => 2,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            WaveFamily::CkdvDnoidal => "ckdv-dnoidal",
            WaveFamily::CkdvCnoidal => "ckdv-cnoidal",
            WaveFamily::GardnerCnoidal => "gardner",
        }
    }
}

/// A periodic traveling wave on [0, L]: family tag, modulus and the closed-form
/// parameters, plus cached quantities for evaluation.
#[derive(Debug, Clone, Copy)]
pub struct WaveProfile {
    pub family: WaveFamily,
    pub l: f64,
    pub modulus: Modulus,
    /// Amplitude parameter; for Gardner this is the cn coefficient (= b).
    pub a: f64,
    /// Shape parameter of the sn^2 denominator (CKDV) or cn coefficient (Gardner).
    pub b: f64,
    /// Wave speed.
    pub omega: f64,
    /// Integration constant A of the profile ODE.
    pub a_const: f64,
    big_k: f64,
    freq: f64,
}

fn sqrt_r(k: f64) -> f64 {
    (k * k * k * k - k * k + 1.0).sqrt()
}

/// Construct a wave from its family, period and modulus using the closed-form
/// parameter maps.
pub fn make_profile(family: WaveFamily, l: f64, k: f64) -> Result<WaveProfile> {
    if !(l > 0.0) {
        return Err(Error::Domain(format!("period L must be positive, got {l}")));
    }
    let modulus = Modulus::new(k)?;
    let big_k = complete_k(k)?;
    let sq = sqrt_r(k);
    let (a, b, omega, a_const, freq) = match family {
        WaveFamily::CkdvDnoidal => {
            let b = 1.0 - k * k - sq;
            let a = (4.0 * (2.0 * k * k - 1.0 + 2.0 * sq) * big_k * big_k * l * l).powf(0.25) / l;
            let omega = 4.0 * big_k * big_k * sq / (l * l);
            (a, b, omega, 0.0, 2.0 * big_k / l)
        }
        WaveFamily::CkdvCnoidal => {
            let b = -1.0 + k * k - sq;
            let a = 2.0 * ((2.0 - k * k + 2.0 * sq) * big_k * big_k * l * l).powf(0.25) / l;
            let omega = 16.0 * big_k * big_k * sq / (l * l);
            (a, b, omega, 0.0, 4.0 * big_k / l)
        }
        WaveFamily::GardnerCnoidal => {
            let b = 4.0 * 2.0_f64.sqrt() * k * big_k / l;
            let omega = -1.0 / 3.0 - 16.0 * big_k * big_k * (1.0 - 2.0 * k * k) / (l * l);
            let a_const = 1.0 / 27.0 + 144.0 * big_k * big_k * (1.0 - 2.0 * k * k) / (27.0 * l * l);
            (b, b, omega, a_const, 4.0 * big_k / l)
        }
    };
    if !(a.is_finite() && b.is_finite() && omega.is_finite() && a_const.is_finite()) {
        return Err(Error::Numeric(format!(
            "non-finite profile parameters for {family:?} L={l} k={k}"
        )));
    }
    Ok(WaveProfile {
        family,
        l,
        modulus,
        a,
        b,
        omega,
        a_const,
        big_k,
        freq,
    })
}

impl WaveProfile {
    pub fn k(&self) -> f64 {
        self.modulus.k()
    }

    /// Complete elliptic integral K(k) of this wave's modulus.
    pub fn big_k(&self) -> f64 {
        self.big_k
    }

    /// Evaluate (phi, phi', phi'') at x. phi' comes from analytic
    /// differentiation of the elliptic closed form; phi'' is recovered from the
    /// profile ODE, which keeps the triple self-consistent.
    pub fn eval(&self, x: f64) -> (f64, f64, f64) {
        let k = self.modulus.k();
        let t = jacobi(self.freq * x, k).expect("jacobi on a valid profile");
        let (phi, dphi) = match self.family {
            WaveFamily::CkdvDnoidal => {
                let q = 1.0 - self.b * t.sn * t.sn;
                let phi = self.a * t.dn / q.sqrt();
                // d/dz [dn/sqrt(1-b sn^2)] = (b - k^2) sn cn / (1-b sn^2)^{3/2}
                let dphi =
                    self.freq * self.a * (self.b - k * k) * t.sn * t.cn / (q * q.sqrt());
                (phi, dphi)
            }
            WaveFamily::CkdvCnoidal => {
                let q = 1.0 - self.b * t.sn * t.sn;
                let phi = self.a * t.cn / q.sqrt();
                // d/dz [cn/sqrt(1-b sn^2)] = (b - 1) sn dn / (1-b sn^2)^{3/2}
                let dphi =
                    self.freq * self.a * (self.b - 1.0) * t.sn * t.dn / (q * q.sqrt());
                (phi, dphi)
            }
            WaveFamily::GardnerCnoidal => {
                let phi = -1.0 / 3.0 + self.b * t.cn;
                let dphi = -self.b * self.freq * t.sn * t.dn;
                (phi, dphi)
            }
        };
        let ddphi = self.omega * phi - self.family.g(phi) - self.a_const;
        (phi, dphi, ddphi)
    }

    /// Hill potential q(x) = omega - g'(phi(x)) of the linearized operator.
    pub fn hill_potential(&self, x: f64) -> f64 {
        let (phi, _, _) = self.eval(x);
        self.omega - self.family.g_prime(phi)
    }
}

/// Wave speed omega(k) at fixed L (same map as `make_profile`).
pub fn omega_of_k(family: WaveFamily, l: f64, k: f64) -> Result<f64> {
    Ok(make_profile(family, l, k)?.omega)
}

/// Invert omega -> k by bisection on the clamped admissible interval.
/// Justified by domega/dk > 0 for all three families.
pub fn omega_to_k(family: WaveFamily, l: f64, omega: f64) -> Result<Modulus> {
    let mut lo = K_CLAMP_LO;
    let mut hi = K_CLAMP_HI;
    let w_lo = omega_of_k(family, l, lo)?;
    let w_hi = omega_of_k(family, l, hi)?;
    if !(omega > w_lo && omega < w_hi) {
        return Err(Error::Range(format!(
            "omega = {omega} outside the admissible interval ({w_lo:.6e}, {w_hi:.6e}) \
             for {} at L = {l}",
            family.name()
        )));
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if omega_of_k(family, l, mid)? < omega {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Modulus::new(0.5 * (lo + hi))
}

/// domega/dk at fixed L. Closed forms for the cnoidal and Gardner families;
/// centered differences for the dnoidal one (no closed form is printed for it,
/// though omega_dn = omega_cn / 4 ties it to the cnoidal expression).
pub fn domega_dk(family: WaveFamily, l: f64, k: f64) -> Result<f64> {
    Modulus::new(k)?;
    match family {
        WaveFamily::CkdvCnoidal => {
            let big_k = complete_k(k)?;
            let big_e = crate::elliptic::complete_e(k)?;
            let r = k * k * k * k - k * k + 1.0;
            Ok(-16.0 * big_k
                * (big_k * (k * k * k * k - 3.0 * k * k + 2.0) - 2.0 * big_e * r)
                / (l * l * k * (1.0 - k * k) * r.sqrt()))
        }
        WaveFamily::GardnerCnoidal => {
            let big_k = complete_k(k)?;
            let big_e = crate::elliptic::complete_e(k)?;
            Ok(-32.0 * big_k * ((1.0 - 2.0 * k * k) * big_e - (1.0 - k * k) * big_k)
                / (k * (1.0 - k * k) * l * l))
        }
        WaveFamily::CkdvDnoidal => {
            let h = 1e-6_f64.min(0.5 * k).min(0.5 * (1.0 - k));
            let wp = omega_of_k(family, l, k + h)?;
            let wm = omega_of_k(family, l, k - h)?;
            Ok((wp - wm) / (2.0 * h))
        }
    }
}
