//! Euler numbers `E_k(0)` from the generating function `2e^{xz}/(e^z+1)`, the
//! integrals `∫_0^∞ z^{2j+1}/sinh(πz) dz` and the `sech²` expansion built
//! from them.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::quad::{integrate_with_breaks, QuadratureConfig};
use super::SpecError;

/// `E_k(0)` for `k ≤ k_max`.
///
/// Setting `x = 0` in `Σ E_k(0) z^k/k! · (e^z + 1) = 2` gives `E_0 = 1` and
/// `2E_k = -Σ_{i<k} C(k,i) E_i` for `k ≥ 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerTable {
    values: Vec<BigRational>,
}

impl EulerTable {
    pub fn new(k_max: usize) -> Self {
        let mut values: Vec<BigRational> = Vec::with_capacity(k_max + 1);
        values.push(BigRational::one());
        for k in 1..=k_max {
            let mut binom = BigInt::one();
            let mut acc = BigRational::zero();
            for (i, e) in values.iter().enumerate() {
                acc += e * BigRational::from_integer(binom.clone());
                binom = binom * BigInt::from(k - i) / BigInt::from(i + 1);
            }
            values.push(-acc / BigRational::from_integer(BigInt::from(2)));
        }
        Self { values }
    }

    /// Table holding `E_{2j+1}(0)` for all `j ≤ j_max`.
    pub fn odd_up_to(j_max: usize) -> Self {
        Self::new(2 * j_max + 1)
    }

    pub fn get(&self, k: usize) -> Option<&BigRational> {
        self.values.get(k)
    }

    pub fn odd(&self, j: usize) -> Option<&BigRational> {
        self.values.get(2 * j + 1)
    }

    /// `(-1)^{j+1} E_{2j+1}(0) / 2`, the closed form of the `1/sinh` moment.
    pub fn moment(&self, j: usize) -> Option<BigRational> {
        let e = self.odd(j)?;
        let half = e / BigRational::from_integer(BigInt::from(2));
        Some(if j.is_multiple_of(2) { -half } else { half })
    }
}

pub fn euler_odd_at_zero(j: usize) -> BigRational {
    EulerTable::odd_up_to(j).odd(j).cloned().expect("table covers j")
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerIntegral {
    pub value: f64,
    pub error: f64,
    pub closed_form: f64,
}

impl EulerIntegral {
    pub fn relative_gap(&self) -> f64 {
        (self.value - self.closed_form).abs() / self.closed_form.abs()
    }
}

/// `z^{2j+1}/sinh(πz)`, with the `z → 0` limit and no overflow for large `z`.
pub fn sinh_moment_integrand(j: usize, z: f64) -> f64 {
    let p = 2 * j + 1;
    if z == 0.0 {
        return if j == 0 { 1.0 / PI } else { 0.0 };
    }
    if z < 1.0 {
        z.powi(p as i32) / (PI * z).sinh()
    } else {
        2.0 * (p as f64 * z.ln() - PI * z).exp() / (1.0 - (-2.0 * PI * z).exp())
    }
}

/// Quadrature of `𝓔_j = ∫_0^∞ z^{2j+1}/sinh(πz) dz` next to its closed form.
pub fn euler_integral(j: usize, cfg: &QuadratureConfig) -> Result<EulerIntegral, SpecError> {
    cfg.validate()?;
    let p = (2 * j + 1) as f64;
    let peak_at = (p / PI).max(1.0);
    let peak = sinh_moment_integrand(j, peak_at);
    // Beyond z > p/π the tail obeys ∫_Z^∞ z^p e^{-πz} ≤ Z^p e^{-πZ}/(π - p/Z).
    let mut cut = peak_at + 1.0;
    loop {
        let tail = 2.0 * (p * cut.ln() - PI * cut).exp() / (PI - p / cut);
        if tail < 1e-3 * cfg.rel_tol * peak || cut > 1e4 {
            break;
        }
        cut += 1.0;
    }
    let breaks: Vec<f64> = (1..cut as usize).map(|k| k as f64).collect();
    let res = integrate_with_breaks(|z| Ok(Complex64::new(sinh_moment_integrand(j, z), 0.0)), 0.0, cut, &breaks, cfg)?;
    let table = EulerTable::odd_up_to(j);
    let closed_form = rational_to_f64(&table.moment(j).expect("table covers j"));
    Ok(EulerIntegral { value: res.value.re, error: res.error, closed_form })
}

/// `|-½ sech²(t/2) - Σ_{r<R} E_{2r+1}(0) t^{2r}/(2r)!|`.
pub fn sech_expansion_check(t: f64, terms: usize) -> f64 {
    let table = EulerTable::odd_up_to(terms.saturating_sub(1));
    let mut fact = BigRational::one();
    let mut sum = 0.0;
    for r in 0..terms {
        if r > 0 {
            let a = BigInt::from(2 * r - 1);
            let b = BigInt::from(2 * r);
            fact *= BigRational::from_integer(a * b);
        }
        let c = rational_to_f64(&(table.odd(r).expect("covered") / &fact));
        sum += c * t.powi(2 * r as i32);
    }
    let sech = 1.0 / (t / 2.0).cosh();
    (-0.5 * sech * sech - sum).abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn first_odd_values() {
        assert_eq!(euler_odd_at_zero(0), q(-1, 2));
        assert_eq!(euler_odd_at_zero(1), q(1, 4));
        assert_eq!(euler_odd_at_zero(2), q(-1, 2));
        assert_eq!(euler_odd_at_zero(3), q(17, 8));
    }

    #[test]
    fn even_values_vanish_past_zero() {
        let t = EulerTable::new(20);
        assert_eq!(t.get(0), Some(&q(1, 1)));
        for k in (2..=20).step_by(2) {
            assert!(t.get(k).unwrap().is_zero(), "E_{k}(0)");
        }
    }

    #[test]
    fn moments_closed_form() {
        let t = EulerTable::odd_up_to(1);
        assert_eq!(t.moment(0), Some(q(1, 4)));
        assert_eq!(t.moment(1), Some(q(1, 8)));
    }

    #[test]
    fn integrand_limits() {
        assert_eq!(sinh_moment_integrand(0, 0.0), 1.0 / PI);
        assert_eq!(sinh_moment_integrand(3, 0.0), 0.0);
        assert!((sinh_moment_integrand(0, 1e-9) - 1.0 / PI).abs() < 1e-15);
        assert!(sinh_moment_integrand(10, 400.0).is_finite());
    }

    #[test]
    fn quadrature_reproduces_closed_form() {
        let cfg = QuadratureConfig::default();
        let e0 = euler_integral(0, &cfg).unwrap();
        assert!((e0.value - 0.25).abs() < 1e-12);
        let e1 = euler_integral(1, &cfg).unwrap();
        assert!((e1.value - 0.125).abs() < 1e-10);
        for j in 0..=10 {
            let e = euler_integral(j, &cfg).unwrap();
            assert!(e.relative_gap() < 1e-10, "j={j}: {e:?}");
        }
    }

    #[test]
    fn sech_expansion() {
        assert_eq!(sech_expansion_check(0.0, 1), 0.0);
        assert_eq!(sech_expansion_check(0.0, 7), 0.0);
        assert!(sech_expansion_check(1.0, 20) < 1e-12);
        assert!(sech_expansion_check(2.0, 20) < sech_expansion_check(2.0, 10));
    }
}
