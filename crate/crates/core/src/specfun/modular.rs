//! Dedekind eta, the Jacobi theta function and the Euler product `(q)_∞`.
//!
//! Fractional powers of `q` and `ζ` are always taken as `exp(2πiτ·a)` and
//! `exp(2πiz·a)`, never as roots of `q` or `ζ`, so there is no branch choice
//! to make.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::SpecError;

pub(crate) const I: Complex64 = Complex64::new(0.0, 1.0);

/// Rejection margin for arguments that sit on the lattice `ℤ ⊕ ℤτ`.
pub const SINGULAR_MARGIN: f64 = 1e-6;

const MAX_PRODUCT_TERMS: usize = 1_000_000;

/// A point `τ` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TauPoint(Complex64);

impl TauPoint {
    pub fn new(tau: Complex64) -> Result<Self, SpecError> {
        if !(tau.im > 0.0) || !tau.re.is_finite() || !tau.im.is_finite() {
            return Err(SpecError::Domain(format!("Im(tau) must be > 0, got tau = {tau}")));
        }
        Ok(Self(tau))
    }

    pub fn from_parts(re: f64, im: f64) -> Result<Self, SpecError> {
        Self::new(Complex64::new(re, im))
    }

    pub fn tau(&self) -> Complex64 {
        self.0
    }

    /// `q = e^{2πiτ}`.
    pub fn q(&self) -> Complex64 {
        (2.0 * PI * I * self.0).exp()
    }

    /// `q^a := e^{2πiτa}`.
    pub fn q_pow(&self, a: f64) -> Complex64 {
        (2.0 * PI * I * self.0 * a).exp()
    }

    /// `-1/τ`.
    pub fn inverted(&self) -> Self {
        Self(-1.0 / self.0)
    }

    /// `kτ` for a positive integer `k`.
    pub fn scaled(&self, k: f64) -> Self {
        assert!(k > 0.0);
        Self(self.0 * k)
    }
}

/// An elliptic variable `z` with `ζ = e^{2πiz}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticArg(pub Complex64);

impl EllipticArg {
    pub fn real(x: f64) -> Self {
        Self(Complex64::new(x, 0.0))
    }

    pub fn zeta(&self) -> Complex64 {
        (2.0 * PI * I * self.0).exp()
    }

    pub fn zeta_pow(&self, a: f64) -> Complex64 {
        (2.0 * PI * I * self.0 * a).exp()
    }
}

/// Approximate distance from `w` to the lattice `ℤ ⊕ ℤτ`.
pub fn lattice_distance(w: Complex64, tau: TauPoint) -> f64 {
    let t = tau.tau();
    let k = (w.im / t.im).round();
    let mut best = f64::INFINITY;
    for dk in [-1.0, 0.0, 1.0] {
        let shifted = w - t * (k + dk);
        let d = (shifted - shifted.re.round()).norm();
        best = best.min(d);
    }
    best
}

fn product_terms(abs_q: f64, tol: f64) -> usize {
    let target = tol * (1.0 - abs_q);
    if target <= 0.0 {
        return MAX_PRODUCT_TERMS;
    }
    ((target.ln() / abs_q.ln()).ceil().max(1.0) as usize + 1).min(MAX_PRODUCT_TERMS)
}

/// `(q)_∞ = Π_{n≥1} (1 - q^n)`, stopping once `|q^n| < tol·(1 - |q|)`.
pub fn qpochhammer(q: Complex64, tol: f64) -> Complex64 {
    let n_terms = product_terms(q.norm(), tol);
    let mut acc = Complex64::new(1.0, 0.0);
    let mut qn = q;
    for _ in 0..n_terms {
        acc *= 1.0 - qn;
        qn *= q;
    }
    acc
}

fn ln_one_minus(x: Complex64) -> Complex64 {
    if x.norm() < 1e-3 {
        // -x - x²/2 - x³/3 - x⁴/4 - x⁵/5
        let x2 = x * x;
        -(x + x2 * 0.5 + x2 * x / 3.0 + x2 * x2 * 0.25 + x2 * x2 * x * 0.2)
    } else {
        (1.0 - x).ln()
    }
}

/// A logarithm of `(q)_∞` (summed principal logs; defined modulo `2πi`).
pub fn ln_qpochhammer(q: Complex64, tol: f64) -> Complex64 {
    let n_terms = product_terms(q.norm(), tol);
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qn = q;
    for _ in 0..n_terms {
        acc += ln_one_minus(qn);
        qn *= q;
    }
    acc
}

/// `η(τ) = q^{1/24} (q)_∞`.
pub fn dedekind_eta(tau: TauPoint, tol: f64) -> Complex64 {
    tau.q_pow(1.0 / 24.0) * qpochhammer(tau.q(), tol)
}

/// `θ(z; τ) = i q^{1/8} ζ^{1/2} Π_{n≥1} (1-q^n)(1-ζq^n)(1-ζ^{-1}q^{n-1})`.
pub fn jacobi_theta(z: EllipticArg, tau: TauPoint, tol: f64) -> Complex64 {
    let q = tau.q();
    let zeta = z.zeta();
    let zeta_inv = 1.0 / zeta;
    let aq = q.norm();
    let target = tol * (1.0 - aq);
    let mut acc = I * tau.q_pow(0.125) * z.zeta_pow(0.5);
    let mut qn = q;
    let mut qn1 = Complex64::new(1.0, 0.0);
    for _ in 0..MAX_PRODUCT_TERMS {
        acc *= (1.0 - qn) * (1.0 - zeta * qn) * (1.0 - zeta_inv * qn1);
        let next = qn.norm();
        if next < target && (zeta * qn).norm() < target && (zeta_inv * qn).norm() < target {
            break;
        }
        qn1 = qn;
        qn *= q;
    }
    acc
}

/// `η³(τ)/θ(z; τ)`, rejecting `z` within [`SINGULAR_MARGIN`] of the lattice.
pub fn eta_cubed_over_theta(z: EllipticArg, tau: TauPoint, tol: f64) -> Result<Complex64, SpecError> {
    let d = lattice_distance(z.0, tau);
    if d < SINGULAR_MARGIN {
        return Err(SpecError::Singular { what: "theta zero", n: 0, distance: d });
    }
    let eta = dedekind_eta(tau, tol);
    Ok(eta * eta * eta / jacobi_theta(z, tau, tol))
}

/// `√z` on the principal branch (cut along the negative real axis).
pub fn principal_sqrt(z: Complex64) -> Complex64 {
    z.sqrt()
}
