//! The rank generating function near `q = 1`: its three-term decomposition,
//! the Fourier coefficients `R_m(τ)` in the variable `z`, the `g_m` kernel and
//! its main term, and numerical checks of the near- and far-pole estimates.
//!
//! Points on the circle-method contour are parametrised by
//! `s = β(1 + i x m̂^{-1/3})`, `β = π/√(6n)`, `τ = is/(2π)`, `q = e^{-s}`, where
//! `m̂ = max(|m|, 1)` keeps the scaling finite at `m = 0`.

use std::f64::consts::PI;

use num_complex::Complex64;
use thiserror::Error;

use crate::specfun::{SpecError, TauPoint};

pub mod bounds;
pub mod kernel;
pub mod rm;

pub use bounds::{
    far_field_bound_check, g2_constant, gm_main_term_constant, partition_gf_bound_check, write_bound_csv, BoundRow,
    FarFieldParams,
};
pub use kernel::{main_term_g, rank_decomposition_check, rank_kernel, rank_kernel_reduced, DecompositionCheck, KernelCtx};
pub use rm::{g1_euler_series, g_split, i_split_check, ln_partition_gf, rm_eval, GSplit, ISplit, RmEstimate, RmMethod};

/// Largest exponent that still exponentiates to a finite binary64 value,
/// with some headroom for the prefactors multiplied in afterwards.
pub const PRECISION_BUDGET: f64 = 700.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("precision budget exceeded: exponent {exponent:.3} exceeds the binary64 budget {budget}")]
    Precision { exponent: f64, budget: f64 },
}

/// A point `s` on the contour for the pair `(m, n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SParam {
    pub n: u64,
    pub m: i64,
    pub x: f64,
    pub beta: f64,
    pub m_hat: f64,
    pub s: Complex64,
}

impl SParam {
    pub fn new(n: u64, m: i64, x: f64) -> Result<Self, AsymError> {
        if n == 0 {
            return Err(AsymError::InvalidParam("n must be at least 1".into()));
        }
        if !x.is_finite() {
            return Err(AsymError::InvalidParam(format!("x must be finite, got {x}")));
        }
        let beta = PI / (6.0 * n as f64).sqrt();
        let m_hat = (m.unsigned_abs() as f64).max(1.0);
        let x_max = PI * m_hat.cbrt() / beta;
        if x.abs() > x_max * (1.0 + 1e-12) {
            return Err(AsymError::InvalidParam(format!("|x| = {} exceeds pi*m^(1/3)/beta = {x_max}", x.abs())));
        }
        let s = Complex64::new(beta, beta * x / m_hat.cbrt());
        Ok(Self { n, m, x, beta, m_hat, s })
    }

    /// End of the contour, `π m̂^{1/3}/β`.
    pub fn x_max(n: u64, m: i64) -> f64 {
        let beta = PI / (6.0 * n as f64).sqrt();
        PI * (m.unsigned_abs() as f64).max(1.0).cbrt() / beta
    }

    pub fn tau(&self) -> TauPoint {
        TauPoint::new(Complex64::new(0.0, 1.0) * self.s / (2.0 * PI)).expect("Re s > 0")
    }

    pub fn q(&self) -> Complex64 {
        (-self.s).exp()
    }

    pub fn abs_m(&self) -> i64 {
        self.m.abs()
    }

    /// `π²/(6β) = π√(n/6)`, the growth exponent at the dominant pole.
    pub fn pole_exponent(&self) -> f64 {
        PI * PI / (6.0 * self.beta)
    }
}

/// `sech²(t)`, without overflow for large `|t|`.
pub fn sech2(t: f64) -> f64 {
    let e = (-2.0 * t.abs()).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}
