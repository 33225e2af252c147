//! Transformation laws as residuals, evaluated on seeded random grids.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::appell::{appell_a1, mu};
use super::euler::{euler_integral, sech_expansion_check};
use super::modular::{dedekind_eta, jacobi_theta, lattice_distance, EllipticArg, TauPoint, I};
use super::mordell::mordell_h;
use super::quad::QuadratureConfig;
use super::{SpecError, SERIES_TOL};

/// One evaluated identity at one sample point.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityCheck {
    pub identity_name: &'static str,
    pub sample_point: Vec<(&'static str, f64)>,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityCheck {
    pub fn new(identity_name: &'static str, sample_point: Vec<(&'static str, f64)>, residual: f64, tolerance: f64) -> Self {
        Self { identity_name, sample_point, residual, tolerance, pass: residual < tolerance }
    }
}

/// `|lhs - rhs| / max(1, |lhs|, |rhs|)`: absolute for moderate values,
/// relative once either side is large.
pub fn scaled_residual(lhs: Complex64, rhs: Complex64) -> f64 {
    (lhs - rhs).norm() / 1f64.max(lhs.norm()).max(rhs.norm())
}

pub const GRID_POINTS: usize = 20;

fn rng_for(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt)
}

fn tau_sample(rng: &mut ChaCha8Rng, im: (f64, f64)) -> TauPoint {
    TauPoint::from_parts(rng.random_range(-0.5..0.5), rng.random_range(im.0..im.1)).expect("Im > 0")
}

fn z_sample(rng: &mut ChaCha8Rng, im: f64) -> Complex64 {
    Complex64::new(rng.random_range(-0.5..0.5), rng.random_range(-im..im))
}

/// Draw `z` with `|Im z| ≤ im` at least `margin` away from the lattice.
fn z_off_lattice(rng: &mut ChaCha8Rng, im: f64, tau: TauPoint, margin: f64) -> Complex64 {
    loop {
        let z = z_sample(rng, im);
        if lattice_distance(z, tau) >= margin {
            return z;
        }
    }
}

fn pt(tau: TauPoint) -> Vec<(&'static str, f64)> {
    vec![("tau_re", tau.tau().re), ("tau_im", tau.tau().im)]
}

fn pt_z(tau: TauPoint, name: &'static str, z: Complex64) -> Vec<(&'static str, f64)> {
    let mut p = pt(tau);
    let (re, im) = match name {
        "u" => ("u_re", "u_im"),
        "v" => ("v_re", "v_im"),
        _ => ("z_re", "z_im"),
    };
    p.push((re, z.re));
    p.push((im, z.im));
    p
}

/// `η(-1/τ) = √(-iτ) η(τ)`.
pub fn eta_inversion_residual(tau: TauPoint) -> f64 {
    let lhs = dedekind_eta(tau.inverted(), SERIES_TOL);
    let rhs = (-I * tau.tau()).sqrt() * dedekind_eta(tau, SERIES_TOL);
    scaled_residual(lhs, rhs)
}

/// `θ(z/τ; -1/τ) = -i √(-iτ) e^{πiz²/τ} θ(z;τ)`.
pub fn theta_inversion_residual(z: Complex64, tau: TauPoint) -> f64 {
    let t = tau.tau();
    let lhs = jacobi_theta(EllipticArg(z / t), tau.inverted(), SERIES_TOL);
    let rhs = -I * (-I * t).sqrt() * (PI * I * z * z / t).exp() * jacobi_theta(EllipticArg(z), tau, SERIES_TOL);
    scaled_residual(lhs, rhs)
}

/// `θ(3z+1; 3τ) = -θ(3z; 3τ)`.
pub fn theta_quasi_period_residual(z: Complex64, tau: TauPoint) -> f64 {
    let t3 = tau.scaled(3.0);
    let a = jacobi_theta(EllipticArg(3.0 * z + 1.0), t3, SERIES_TOL);
    let b = jacobi_theta(EllipticArg(3.0 * z), t3, SERIES_TOL);
    scaled_residual(a, -b)
}

/// `θ(∓τ; 3τ) = ±i q^{-1/6} η(τ)`, both signs combined (max residual).
pub fn theta_special_value_residual(tau: TauPoint) -> f64 {
    let t3 = tau.scaled(3.0);
    let rhs = I * tau.q_pow(-1.0 / 6.0) * dedekind_eta(tau, SERIES_TOL);
    let minus = jacobi_theta(EllipticArg(-tau.tau()), t3, SERIES_TOL);
    let plus = jacobi_theta(EllipticArg(tau.tau()), t3, SERIES_TOL);
    scaled_residual(minus, rhs).max(scaled_residual(plus, -rhs))
}

/// `A₁(3z+1, ±τ; 3τ) = -A₁(3z, ±τ; 3τ)`, both signs combined.
pub fn a1_quasi_period_residual(z: f64, tau: TauPoint) -> Result<f64, SpecError> {
    let t3 = tau.scaled(3.0);
    let mut worst = 0.0f64;
    for sign in [1.0, -1.0] {
        let v = tau.tau() * sign;
        let a = appell_a1(Complex64::new(3.0 * z + 1.0, 0.0), v, t3, SERIES_TOL)?.value;
        let b = appell_a1(Complex64::new(3.0 * z, 0.0), v, t3, SERIES_TOL)?.value;
        worst = worst.max(scaled_residual(a, -b));
    }
    Ok(worst)
}

/// `μ(-u,-v) = μ(u,v)`.
pub fn mu_symmetry_residual(u: Complex64, v: Complex64, tau: TauPoint) -> Result<f64, SpecError> {
    Ok(scaled_residual(mu(-u, -v, tau, SERIES_TOL)?, mu(u, v, tau, SERIES_TOL)?))
}

/// `-(1/τ) e^{πi(u²-2uv)/τ} A₁(u/τ, v/τ; -1/τ) + A₁(u,v;τ) = (1/2i) h(u-v;τ) θ(v;τ)`.
pub fn a1_inversion_residual(u: Complex64, v: Complex64, tau: TauPoint, cfg: &QuadratureConfig) -> Result<f64, SpecError> {
    let t = tau.tau();
    let inv = appell_a1(u / t, v / t, tau.inverted(), SERIES_TOL)?.value;
    let direct = appell_a1(u, v, tau, SERIES_TOL)?.value;
    let lhs = -(1.0 / t) * (PI * I * (u * u - 2.0 * u * v) / t).exp() * inv + direct;
    let h = mordell_h(EllipticArg(u - v), tau, cfg)?.value;
    let rhs = h * jacobi_theta(EllipticArg(v), tau, SERIES_TOL) / (2.0 * I);
    Ok(scaled_residual(lhs, rhs))
}

/// `h(-z) = h(z)`.
pub fn mordell_even_residual(z: Complex64, tau: TauPoint, cfg: &QuadratureConfig) -> Result<f64, SpecError> {
    let a = mordell_h(EllipticArg(z), tau, cfg)?.value;
    let b = mordell_h(EllipticArg(-z), tau, cfg)?.value;
    Ok(scaled_residual(a, b))
}

/// `h(z) + e^{-2πiz-πiτ} h(z+τ) = 2 ζ^{-1/2} q^{-1/8}`.
pub fn mordell_shift_residual(z: Complex64, tau: TauPoint, cfg: &QuadratureConfig) -> Result<f64, SpecError> {
    let t = tau.tau();
    let h0 = mordell_h(EllipticArg(z), tau, cfg)?.value;
    let h1 = mordell_h(EllipticArg(z + t), tau, cfg)?.value;
    let lhs = h0 + (-2.0 * PI * I * z - PI * I * t).exp() * h1;
    let rhs = 2.0 * EllipticArg(z).zeta_pow(-0.5) * tau.q_pow(-0.125);
    Ok(scaled_residual(lhs, rhs))
}

/// `h(z/τ; -1/τ) = √(-iτ) e^{-πiz²/τ} h(z;τ)`.
pub fn mordell_inversion_residual(z: Complex64, tau: TauPoint, cfg: &QuadratureConfig) -> Result<f64, SpecError> {
    let t = tau.tau();
    let lhs = mordell_h(EllipticArg(z / t), tau.inverted(), cfg)?.value;
    let rhs = (-I * t).sqrt() * (-PI * I * z * z / t).exp() * mordell_h(EllipticArg(z), tau, cfg)?.value;
    Ok(scaled_residual(lhs, rhs))
}

/// All modular transformation laws, `GRID_POINTS` seeded samples each.
pub fn transforms_suite(seed: u64, tol: f64, cfg: &QuadratureConfig) -> Result<Vec<IdentityCheck>, SpecError> {
    let mut out = Vec::new();

    let mut rng = rng_for(seed, 1);
    for _ in 0..GRID_POINTS {
        let tau = tau_sample(&mut rng, (0.05, 2.0));
        out.push(IdentityCheck::new("eta_inversion", pt(tau), eta_inversion_residual(tau), tol));
    }

    let mut rng = rng_for(seed, 2);
    for _ in 0..GRID_POINTS {
        let tau = tau_sample(&mut rng, (0.5, 1.5));
        let z = z_sample(&mut rng, 0.1);
        out.push(IdentityCheck::new("theta_inversion", pt_z(tau, "z", z), theta_inversion_residual(z, tau), tol));
    }

    let mut rng = rng_for(seed, 3);
    for _ in 0..GRID_POINTS {
        let tau = tau_sample(&mut rng, (0.5, 1.5));
        let z = z_sample(&mut rng, 0.1);
        out.push(IdentityCheck::new("theta_quasi_period", pt_z(tau, "z", z), theta_quasi_period_residual(z, tau), tol));
    }

    let mut rng = rng_for(seed, 4);
    for _ in 0..GRID_POINTS {
        let tau = tau_sample(&mut rng, (0.5, 1.5));
        out.push(IdentityCheck::new("theta_special_value", pt(tau), theta_special_value_residual(tau), tol));
    }

    let mut rng = rng_for(seed, 5);
    for _ in 0..GRID_POINTS {
        let tau = tau_sample(&mut rng, (0.5, 1.5));
        let z = loop {
            let z: f64 = rng.random_range(-0.5..0.5);
            if (3.0 * z - (3.0 * z).round()).abs() > 0.03 {
                break z;
            }
        };
        let r = a1_quasi_period_residual(z, tau)?;
        out.push(IdentityCheck::new("a1_quasi_period", pt_z(tau, "z", Complex64::new(z, 0.0)), r, tol));
    }

    let mut rng = rng_for(seed, 6);
    for _ in 0..GRID_POINTS {
        let tau = tau_sample(&mut rng, (0.5, 1.5));
        let u = z_off_lattice(&mut rng, 0.1, tau, 0.05);
        let v = z_off_lattice(&mut rng, 0.1, tau, 0.05);
        let mut p = pt_z(tau, "u", u);
        p.extend(pt_z(tau, "v", v).into_iter().skip(2));
        out.push(IdentityCheck::new("mu_symmetry", p, mu_symmetry_residual(u, v, tau)?, tol));
    }

    let mut rng = rng_for(seed, 7);
    for _ in 0..GRID_POINTS {
        let tau = tau_sample(&mut rng, (0.5, 1.5));
        let u = z_off_lattice(&mut rng, 0.1, tau, 0.05);
        let v = z_off_lattice(&mut rng, 0.1, tau, 0.05);
        let mut p = pt_z(tau, "u", u);
        p.extend(pt_z(tau, "v", v).into_iter().skip(2));
        out.push(IdentityCheck::new("a1_inversion", p, a1_inversion_residual(u, v, tau, cfg)?, tol));
    }

    let mut rng = rng_for(seed, 8);
    for _ in 0..GRID_POINTS {
        let tau = tau_sample(&mut rng, (0.5, 1.5));
        let z = z_sample(&mut rng, 0.2);
        out.push(IdentityCheck::new("mordell_even", pt_z(tau, "z", z), mordell_even_residual(z, tau, cfg)?, tol));
    }

    let mut rng = rng_for(seed, 9);
    for _ in 0..GRID_POINTS {
        let tau = tau_sample(&mut rng, (0.5, 1.5));
        let z = z_sample(&mut rng, 0.2);
        out.push(IdentityCheck::new("mordell_shift", pt_z(tau, "z", z), mordell_shift_residual(z, tau, cfg)?, tol));
    }

    let mut rng = rng_for(seed, 10);
    for _ in 0..GRID_POINTS {
        let tau = tau_sample(&mut rng, (0.5, 1.5));
        let z = z_sample(&mut rng, 0.2);
        let r = mordell_inversion_residual(z, tau, cfg)?;
        out.push(IdentityCheck::new("mordell_inversion", pt_z(tau, "z", z), r, tol));
    }

    Ok(out)
}

/// Moment integrals for `j ≤ 10` (relative gap) and the `sech²` expansion at `t = 1`.
pub fn euler_suite(tol: f64, cfg: &QuadratureConfig) -> Result<Vec<IdentityCheck>, SpecError> {
    let mut out = Vec::new();
    for j in 0..=10 {
        let e = euler_integral(j, cfg)?;
        out.push(IdentityCheck::new("euler_integral", vec![("j", j as f64)], e.relative_gap(), tol));
    }
    out.push(IdentityCheck::new(
        "sech_expansion",
        vec![("t", 1.0), ("terms", 20.0)],
        sech_expansion_check(1.0, 20),
        tol.min(1e-12),
    ));
    Ok(out)
}
