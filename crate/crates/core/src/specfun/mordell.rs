//! The Mordell integral `h(z;τ) = ∫_ℝ e^{πiτw² - 2πzw} / cosh(πw) dw`.

use std::f64::consts::PI;

use super::modular::{EllipticArg, TauPoint, I};
use super::quad::{integrate_with_breaks, QuadResult, QuadratureConfig};
use super::SpecError;

/// Quadrature of `h(z;τ)` on `[-W, W]`.
///
/// The integrand is dominated by `2e^{-a w² + b|w|}` with `a = π·Im τ` and
/// `b = 2π|Re z| - π`; `W` is where that envelope, relative to its peak,
/// falls below `tail_cutoff`. The poles of `1/cosh` sit at `w ∈ i(ℤ+½)`,
/// off the contour, so the integrand is smooth.
pub fn mordell_h(z: EllipticArg, tau: TauPoint, cfg: &QuadratureConfig) -> Result<QuadResult, SpecError> {
    cfg.validate()?;
    let t = tau.tau();
    let z = z.0;
    let a = PI * t.im;
    let b = 2.0 * PI * z.re.abs() - PI;
    let log_peak = if b > 0.0 { b * b / (4.0 * a) } else { 0.0 };
    let l = (2.0 / cfg.tail_cutoff).ln() + log_peak;
    let w_max = (b + (b * b + 4.0 * a * l).sqrt()) / (2.0 * a);

    let breaks: Vec<f64> = {
        let k = w_max.floor() as i64;
        (-k..=k).map(|j| j as f64).collect()
    };
    integrate_with_breaks(
        |w| {
            let aw = w.abs();
            let expo = PI * I * t * w * w - 2.0 * PI * z * w - PI * aw;
            Ok(2.0 * expo.exp() / (1.0 + (-2.0 * PI * aw).exp()))
        },
        -w_max,
        w_max,
        &breaks,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn h_at_origin_on_imaginary_axis() {
        // h(0; i) = ∫ e^{-πw²}/cosh(πw) dw; oracle: plain trapezoid on a fine
        // grid, which is spectrally accurate for this analytic, fast-decaying integrand.
        let tau = TauPoint::from_parts(0.0, 1.0).unwrap();
        let cfg = QuadratureConfig::default();
        let h = mordell_h(EllipticArg::real(0.0), tau, &cfg).unwrap();
        let step = 0.01;
        let trap: f64 = (-1000..=1000)
            .map(|k| {
                let w = k as f64 * step;
                (-PI * w * w).exp() / (PI * w).cosh()
            })
            .sum::<f64>()
            * step;
        assert!((h.value.re - trap).abs() < 1e-12, "{} vs {trap}", h.value.re);
        assert!(h.value.im.abs() < 1e-14);
    }

    #[test]
    fn h_is_even_in_z() {
        let tau = TauPoint::from_parts(0.3, 0.7).unwrap();
        let cfg = QuadratureConfig::default();
        let z = Complex64::new(0.21, -0.08);
        let a = mordell_h(EllipticArg(z), tau, &cfg).unwrap().value;
        let b = mordell_h(EllipticArg(-z), tau, &cfg).unwrap().value;
        assert!((a - b).norm() < 1e-10);
    }

    #[test]
    fn shift_identity() {
        let tau = TauPoint::from_parts(-0.15, 0.9).unwrap();
        let cfg = QuadratureConfig::default();
        let z = Complex64::new(0.12, 0.05);
        let h0 = mordell_h(EllipticArg(z), tau, &cfg).unwrap().value;
        let h1 = mordell_h(EllipticArg(z + tau.tau()), tau, &cfg).unwrap().value;
        let lhs = h0 + (-2.0 * PI * I * z - PI * I * tau.tau()).exp() * h1;
        let rhs = 2.0 * EllipticArg(z).zeta_pow(-0.5) * tau.q_pow(-0.125);
        assert!((lhs - rhs).norm() < 1e-9);
    }
}
