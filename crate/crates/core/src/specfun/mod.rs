//! Complex special functions: eta, theta, the Appell–Lerch sum `A₁`, the
//! Mordell integral, Euler numbers, and the quadrature engine they share.
//!
//! Every transformation law is exposed as a residual in [`identities`], so the
//! implementations can be checked against each other rather than against
//! tabulated values.

use thiserror::Error;

pub mod appell;
pub mod euler;
pub mod identities;
pub mod modular;
pub mod mordell;
pub mod quad;

pub use appell::{appell_a1, mu, A1Eval};
pub use euler::{euler_integral, euler_odd_at_zero, sech_expansion_check, EulerIntegral, EulerTable};
pub use identities::{scaled_residual, IdentityCheck};
pub use modular::{
    dedekind_eta, eta_cubed_over_theta, jacobi_theta, lattice_distance, ln_qpochhammer, qpochhammer, EllipticArg,
    TauPoint, SINGULAR_MARGIN,
};
pub use mordell::mordell_h;
pub use quad::{QuadResult, QuadratureConfig};

/// Default truncation tolerance for products and bilateral sums.
pub const SERIES_TOL: f64 = 1e-17;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("singular argument ({what}) at n = {n}: lattice distance {distance:e}")]
    Singular { what: &'static str, n: i64, distance: f64 },
    #[error("quadrature did not converge: achieved error {achieved:e}, requested {requested:e}")]
    NoConvergence { achieved: f64, requested: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
