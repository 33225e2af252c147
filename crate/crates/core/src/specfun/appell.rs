//! The level-one Appell–Lerch sum
//! `A₁(u,v;τ) = e^{πiu} Σ_n (-1)^n q^{(n²+n)/2} e^{2πinv} / (1 - e^{2πiu} q^n)`
//! and its completion partner `μ = A₁/θ(v)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::modular::{jacobi_theta, lattice_distance, EllipticArg, TauPoint, I, SINGULAR_MARGIN};
use super::SpecError;

const MAX_TERMS: i64 = 200_000;

/// Value of the bilateral sum with separate bounds on the two discarded tails.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A1Eval {
    pub value: Complex64,
    pub tail_pos: f64,
    pub tail_neg: f64,
    /// Largest index summed on each side.
    pub k_pos: i64,
    pub k_neg: i64,
}

impl A1Eval {
    pub fn error_bound(&self) -> f64 {
        self.tail_pos + self.tail_neg
    }
}

fn term(n: i64, u: Complex64, v: Complex64, tau: Complex64) -> Result<Complex64, SpecError> {
    let w = u + tau * n as f64;
    let d = (w - w.re.round()).norm();
    if d < SINGULAR_MARGIN {
        return Err(SpecError::Singular { what: "Appell-Lerch denominator", n, distance: d });
    }
    let nf = n as f64;
    let log_num = PI * I * tau * (nf * nf + nf) + 2.0 * PI * I * v * nf;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let two_pi_i_w = 2.0 * PI * I * w;
    // Keep |e^{2πiw}| ≤ 1 in the denominator so neither side overflows.
    let t = if w.im >= 0.0 {
        log_num.exp() / (1.0 - two_pi_i_w.exp())
    } else {
        -(log_num - two_pi_i_w).exp() / (1.0 - (-two_pi_i_w).exp())
    };
    Ok(t * sign)
}

fn sum_side(
    step: i64,
    u: Complex64,
    v: Complex64,
    tau: Complex64,
    tol: f64,
) -> Result<(Complex64, f64, f64, i64), SpecError> {
    let start = if step > 0 { 0 } else { -1 };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut peak = 0.0f64;
    let mut prev = f64::INFINITY;
    let mut n = start;
    loop {
        let t = term(n, u, v, tau)?;
        acc += t;
        let mag = t.norm();
        peak = peak.max(mag);
        if mag < prev && (n - start).abs() >= 2 {
            let r = mag / prev;
            if r < 0.5 {
                let tail = mag * r / (1.0 - r);
                if tail <= tol * peak || mag == 0.0 {
                    return Ok((acc, tail, peak, n));
                }
            }
        }
        prev = mag;
        n += step;
        if (n - start).abs() > MAX_TERMS {
            return Err(SpecError::NoConvergence { achieved: mag, requested: tol * peak });
        }
    }
}

/// Evaluate `A₁(u,v;τ)`, summing each side until the geometric tail bound is
/// below `tol` times the largest term seen on that side.
pub fn appell_a1(u: Complex64, v: Complex64, tau: TauPoint, tol: f64) -> Result<A1Eval, SpecError> {
    let t = tau.tau();
    let (pos, tail_pos, _, k_pos) = sum_side(1, u, v, t, tol)?;
    let (neg, tail_neg, _, k_neg) = sum_side(-1, u, v, t, tol)?;
    let pre = (PI * I * u).exp();
    let scale = pre.norm();
    Ok(A1Eval { value: pre * (pos + neg), tail_pos: tail_pos * scale, tail_neg: tail_neg * scale, k_pos, k_neg })
}

/// `μ(u,v;τ) = A₁(u,v;τ)/θ(v;τ)`.
pub fn mu(u: Complex64, v: Complex64, tau: TauPoint, tol: f64) -> Result<Complex64, SpecError> {
    let d = lattice_distance(v, tau);
    if d < SINGULAR_MARGIN {
        return Err(SpecError::Singular { what: "theta zero", n: 0, distance: d });
    }
    Ok(appell_a1(u, v, tau, tol)?.value / jacobi_theta(EllipticArg(v), tau, tol))
}
