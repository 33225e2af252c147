//! Pointwise evaluation in `z`: the rank generating function `R(z;τ)`, its
//! three-term decomposition, and the `g_m` kernel with its main term.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::AsymError;
use crate::specfun::{
    appell_a1, dedekind_eta, jacobi_theta, lattice_distance, qpochhammer, scaled_residual, EllipticArg, SpecError,
    TauPoint, SERIES_TOL, SINGULAR_MARGIN,
};

const I: Complex64 = Complex64::new(0.0, 1.0);
const MAX_TERMS: i64 = 200_000;

/// One side (`k ≥ 1` or `k ≤ -1`) of
/// `Σ_k (-1)^k q^{k(3k+1)/2} / (1 - ζq^k)`.
fn kernel_side(z: f64, tau: Complex64, step: i64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut peak = 0.0f64;
    let mut prev = f64::INFINITY;
    let mut k = step;
    loop {
        let kf = k as f64;
        let log_num = PI * I * tau * kf * (3.0 * kf + 1.0);
        let w = 2.0 * PI * I * (z + tau * kf);
        let t = if w.re <= 0.0 {
            log_num.exp() / (1.0 - w.exp())
        } else {
            -(log_num - w).exp() / (1.0 - (-w).exp())
        };
        let t = if k % 2 == 0 { t } else { -t };
        acc += t;
        let mag = t.norm();
        peak = peak.max(mag);
        if mag < prev && k.abs() >= 2 {
            let r = mag / prev;
            if r < 0.5 && (mag * r / (1.0 - r) <= SERIES_TOL * peak.max(1.0) || mag == 0.0) {
                return acc;
            }
        }
        prev = mag;
        k += step;
        if k.abs() > MAX_TERMS {
            return acc;
        }
    }
}

/// `(q)_∞ R(z;τ) = (1-ζ) Σ_k (-1)^k q^{k(3k+1)/2}/(1-ζq^k)`, with the `k = 0`
/// term combined with the prefactor into the constant `1`. For real `z` the
/// denominators never vanish since `|q^k| ≠ 1` when `k ≠ 0`.
pub fn rank_kernel_reduced(z: f64, tau: TauPoint) -> Complex64 {
    let t = tau.tau();
    let zeta = EllipticArg::real(z).zeta();
    let sides = kernel_side(z, t, 1) + kernel_side(z, t, -1);
    1.0 + (1.0 - zeta) * sides
}

/// `R(z;τ) = Σ N(m,n) ζ^m q^n`, summed from its bilateral series.
pub fn rank_kernel(z: f64, tau: TauPoint) -> Complex64 {
    rank_kernel_reduced(z, tau) / qpochhammer(tau.q(), SERIES_TOL)
}

/// Quantities at fixed `τ` shared by every `z`-evaluation.
#[derive(Debug, Clone, Copy)]
pub struct KernelCtx {
    pub tau: TauPoint,
    pub tau3: TauPoint,
    eta3_3tau: Complex64,
    /// Half-width of the window around `z = 0` where `g_m` is interpolated.
    z0: f64,
}

impl KernelCtx {
    pub fn new(tau: TauPoint) -> Self {
        let tau3 = tau.scaled(3.0);
        let eta = dedekind_eta(tau3, SERIES_TOL);
        let s_abs = 2.0 * PI * tau.tau().norm();
        Self { tau, tau3, eta3_3tau: eta * eta * eta, z0: 1e-3 * s_abs / (2.0 * PI * PI) }
    }

    /// `η³(3τ)/θ(3z;3τ)`.
    pub fn theta_quotient(&self, z: f64) -> Result<Complex64, SpecError> {
        let w = EllipticArg::real(3.0 * z);
        let d = lattice_distance(w.0, self.tau3);
        if d < SINGULAR_MARGIN {
            return Err(SpecError::Singular { what: "theta zero", n: 0, distance: d });
        }
        Ok(self.eta3_3tau / jacobi_theta(w, self.tau3, SERIES_TOL))
    }

    /// `A₁(3z, ±τ; 3τ)`.
    pub fn a1(&self, z: f64, sign: f64) -> Result<Complex64, SpecError> {
        Ok(appell_a1(Complex64::new(3.0 * z, 0.0), self.tau.tau() * sign, self.tau3, SERIES_TOL)?.value)
    }

    /// The three summands of the decomposition, without the `1/(q)_∞` factor:
    /// `[iDη³(3τ)/θ(3z;3τ), -ζ^{-1}D A₁(3z,-τ;3τ), -ζD A₁(3z,τ;3τ)]`,
    /// `D = ζ^{1/2} - ζ^{-1/2}`.
    pub fn decomposition_terms(&self, z: f64) -> Result<[Complex64; 3], SpecError> {
        let arg = EllipticArg::real(z);
        let zeta = arg.zeta();
        let d = arg.zeta_pow(0.5) - arg.zeta_pow(-0.5);
        Ok([
            I * d * self.theta_quotient(z)?,
            -d * self.a1(z, -1.0)? / zeta,
            -d * zeta * self.a1(z, 1.0)?,
        ])
    }

    /// `g_m(z)` from the branch selected by `m mod 3`, evaluated as written.
    /// Each branch has a removable singularity at `z = 0`.
    pub fn g_raw(&self, z: f64, m: i64) -> Result<Complex64, SpecError> {
        let e = (PI * I * z).exp();
        Ok(match m.rem_euclid(3) {
            0 => -self.a1(z, 1.0)? * e * e * e + self.a1(z, -1.0)? / (e * e * e),
            1 => -(self.a1(z, -1.0)? + I * self.theta_quotient(z)?) / e,
            _ => (self.a1(z, 1.0)? + I * self.theta_quotient(z)?) * e,
        })
    }

    /// `g_m(z)`, bridging `|z| < z0` linearly so the cancelling poles of the
    /// individual pieces are never evaluated at close range.
    pub fn g(&self, z: f64, m: i64) -> Result<Complex64, SpecError> {
        if z.abs() >= self.z0 {
            return self.g_raw(z, m);
        }
        let lo = self.g_raw(-self.z0, m)?;
        let hi = self.g_raw(self.z0, m)?;
        Ok(lo + (hi - lo) * ((z + self.z0) / (2.0 * self.z0)))
    }
}

/// `2π sin(πz) e^{6π²z²/s} / (3s sinh(2π²z/s))`, the main term of `g_m`.
/// Its value at `z = 0` is `1/3`; near zero a Taylor expansion is used.
pub fn main_term_g(z: f64, s: Complex64) -> Complex64 {
    let a = 2.0 * PI * PI / s;
    if z.abs() < 1e-4 * s.norm() {
        let z2 = z * z;
        let c2 = 3.0 * a - (PI * PI + a * a) / 6.0;
        let p2 = PI * PI;
        let c4 = p2 * p2 / 120.0 + 7.0 * a * a * a * a / 360.0 + 4.5 * a * a + p2 * a * a / 36.0
            - p2 * a / 2.0
            - a * a * a / 2.0;
        return (1.0 + c2 * z2 + c4 * z2 * z2) / 3.0;
    }
    let w = a * z;
    let ratio = if w.re.abs() < 20.0 {
        (3.0 * a * z * z).exp() / w.sinh()
    } else {
        // 1/sinh(w) = 2e^{-w}/(1 - e^{-2w}) for Re w > 0 (mirror for Re w < 0).
        let sgn = w.re.signum();
        let ws = w * sgn;
        2.0 * sgn * (3.0 * a * z * z - ws).exp() / (1.0 - (-2.0 * ws).exp())
    };
    2.0 * PI * (PI * z).sin() * ratio / (3.0 * s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

/// Compares `R(z;τ)` from its defining series with
/// `(1/(q)_∞)·[iDη³(3τ)/θ(3z;3τ) - ζ^{-1}D A₁(3z,-τ;3τ) - ζD A₁(3z,τ;3τ)]`.
/// `flip_first` negates the theta-quotient summand (a control experiment).
pub fn rank_decomposition_check(z: f64, tau: TauPoint, flip_first: bool) -> Result<DecompositionCheck, AsymError> {
    if !z.is_finite() {
        return Err(AsymError::InvalidParam("z must be finite".into()));
    }
    let ctx = KernelCtx::new(tau);
    let [a, b, c] = ctx.decomposition_terms(z)?;
    let a = if flip_first { -a } else { a };
    let poch = qpochhammer(tau.q(), SERIES_TOL);
    let rhs = (a + b + c) / poch;
    let lhs = rank_kernel(z, tau);
    Ok(DecompositionCheck { lhs, rhs, residual: scaled_residual(lhs, rhs) })
}
