//! Fourier coefficients `R_m(τ) = ∫_{-1/2}^{1/2} R(z;τ) e^{-2πimz} dz` and the
//! pieces they split into.
//!
//! Everything carries the factor `P(q) = 1/(q)_∞`, which grows like
//! `e^{π²/(6β)}`. Estimates keep that factor as a logarithm and integrate only
//! the moderate remainder.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use super::kernel::{main_term_g, rank_kernel_reduced, KernelCtx};
use super::{sech2, AsymError, SParam, PRECISION_BUDGET};
use crate::exact::ln_biguint;
use crate::specfun::quad::{integrate_with_breaks, principal_value};
use crate::specfun::{ln_qpochhammer, scaled_residual, EulerTable, QuadratureConfig, SpecError, SERIES_TOL};

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RmMethod {
    Direct,
    Lemma41,
    NearPoleFormula,
}

impl RmMethod {
    pub const ALL: [RmMethod; 3] = [RmMethod::Direct, RmMethod::Lemma41, RmMethod::NearPoleFormula];

    pub fn name(self) -> &'static str {
        match self {
            RmMethod::Direct => "direct",
            RmMethod::Lemma41 => "lemma41",
            RmMethod::NearPoleFormula => "near_pole_formula",
        }
    }
}

impl fmt::Display for RmMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RmMethod {
    type Err = AsymError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RmMethod::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| AsymError::InvalidParam(format!("unknown method '{s}'")))
    }
}

/// `R_m ≈ exp(log_prefactor) · reduced`, with `reduced_error` in the same
/// units as `reduced`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmEstimate {
    pub method: RmMethod,
    pub log_prefactor: Complex64,
    pub reduced: Complex64,
    pub reduced_error: f64,
}

impl RmEstimate {
    pub fn ln_value(&self) -> Complex64 {
        self.log_prefactor + self.reduced.ln()
    }

    pub fn ln_abs(&self) -> f64 {
        self.log_prefactor.re + self.reduced.norm().ln()
    }

    /// The value itself, if it fits in binary64.
    pub fn value(&self) -> Result<Complex64, AsymError> {
        if self.log_prefactor.re > PRECISION_BUDGET {
            return Err(AsymError::Precision { exponent: self.log_prefactor.re, budget: PRECISION_BUDGET });
        }
        Ok(self.log_prefactor.exp() * self.reduced)
    }

    pub fn error_estimate(&self) -> f64 {
        self.reduced_error * self.log_prefactor.re.exp()
    }

    pub fn relative_error(&self) -> f64 {
        self.reduced_error / self.reduced.norm()
    }

    /// `|self/other - 1|`, computed from logarithms so it never overflows.
    pub fn relative_difference(&self, other: &RmEstimate) -> f64 {
        let d = self.log_prefactor - other.log_prefactor;
        (self.reduced * d.exp() / other.reduced - 1.0).norm()
    }
}

/// `ln P(q)` for `q = e^{-s}`, `P = 1/(q)_∞`.
///
/// Uses `P = e^{-s/24} √(s/2π) e^{π²/(6s)} / (q̃)_∞` with `q̃ = e^{-4π²/s}`
/// whenever `|q̃| < |q|`, i.e. near the dominant pole, and the product
/// itself elsewhere.
pub fn ln_partition_gf(s: Complex64) -> Complex64 {
    let s_dual = 4.0 * PI * PI / s;
    if s_dual.re > s.re {
        -s / 24.0 + 0.5 * (s / (2.0 * PI)).ln() + PI * PI / (6.0 * s) - ln_qpochhammer((-s_dual).exp(), SERIES_TOL)
    } else {
        -ln_qpochhammer((-s).exp(), SERIES_TOL)
    }
}

fn breakpoints(half_width: f64, s: Complex64, m_hat: f64) -> Vec<f64> {
    let mut b = vec![0.0];
    let w = s.norm() / (2.0 * PI);
    for c in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
        if c * w < half_width {
            b.push(c * w);
            b.push(-c * w);
        }
    }
    let step = 1.0 / (8.0 * m_hat);
    let mut k = 1;
    while (k as f64) * step < half_width {
        b.push(k as f64 * step);
        b.push(-(k as f64) * step);
        k += 1;
    }
    b
}

fn fourier(m: i64, z: f64) -> Complex64 {
    (-2.0 * PI * I * m as f64 * z).exp()
}

/// `R_m` by quadrature of the defining integral over `[-1/2, 1/2]`.
pub fn rm_direct(sp: &SParam, cfg: &QuadratureConfig) -> Result<RmEstimate, AsymError> {
    let tau = sp.tau();
    let m = sp.m;
    let res = integrate_with_breaks(
        |z| Ok(rank_kernel_reduced(z, tau) * fourier(m, z)),
        -0.5,
        0.5,
        &breakpoints(0.5, sp.s, sp.m_hat),
        cfg,
    )?;
    Ok(RmEstimate {
        method: RmMethod::Direct,
        log_prefactor: ln_partition_gf(sp.s),
        reduced: res.value,
        reduced_error: res.error,
    })
}

/// `R_m = 3 P(q) ∫_{-1/6}^{1/6} g_m(z) e^{-2πimz} dz`.
pub fn rm_lemma41(sp: &SParam, cfg: &QuadratureConfig) -> Result<RmEstimate, AsymError> {
    let ctx = KernelCtx::new(sp.tau());
    let m = sp.abs_m();
    let res = integrate_with_breaks(
        |z| Ok(ctx.g(z, m)? * fourier(m, z)),
        -1.0 / 6.0,
        1.0 / 6.0,
        &breakpoints(1.0 / 6.0, sp.s, sp.m_hat),
        cfg,
    )?;
    Ok(RmEstimate {
        method: RmMethod::Lemma41,
        log_prefactor: ln_partition_gf(sp.s),
        reduced: 3.0 * res.value,
        reduced_error: 3.0 * res.error,
    })
}

/// `s^{3/2}/(4√(2π)) · sech²(βm/2) · e^{π²/(6s)}`, valid for `|x| ≤ 1`.
/// The reported error is the size of the next-order term,
/// `β^{5/2} m̂^{2/3} sech²(βm/2) e^{π²/(6β)}`, with unit constant.
pub fn rm_near_pole(sp: &SParam) -> Result<RmEstimate, AsymError> {
    if sp.x.abs() > 1.0 {
        return Err(AsymError::InvalidParam(format!("near-pole formula needs |x| <= 1, got {}", sp.x)));
    }
    let sech = sech2(sp.beta * sp.m as f64 / 2.0);
    let log_prefactor = PI * PI / (6.0 * sp.s);
    let reduced = sp.s.powf(1.5) / (4.0 * (2.0 * PI).sqrt()) * sech;
    let err = sp.beta.powf(2.5) * sp.m_hat.powf(2.0 / 3.0) * sech * (sp.pole_exponent() - log_prefactor.re).exp();
    Ok(RmEstimate { method: RmMethod::NearPoleFormula, log_prefactor, reduced, reduced_error: err })
}

pub fn rm_eval(sp: &SParam, method: RmMethod, cfg: &QuadratureConfig) -> Result<RmEstimate, AsymError> {
    match method {
        RmMethod::Direct => rm_direct(sp, cfg),
        RmMethod::Lemma41 => rm_lemma41(sp, cfg),
        RmMethod::NearPoleFormula => rm_near_pole(sp),
    }
}

/// `R_m = P(q)(G₁ + G₂)`: `G₁` integrates the main term of `g_m`, `G₂` the rest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GSplit {
    pub g1: Complex64,
    pub g1_error: f64,
    pub g2: Complex64,
    pub g2_error: f64,
}

pub fn g_split(sp: &SParam, cfg: &QuadratureConfig) -> Result<GSplit, AsymError> {
    if sp.x.abs() > 1.0 {
        return Err(AsymError::InvalidParam(format!("G split needs |x| <= 1, got {}", sp.x)));
    }
    let s = sp.s;
    let m = sp.abs_m();
    let g1 = integrate_with_breaks(
        |z| Ok(main_term_g(z, s) * (2.0 * PI * m as f64 * z).cos()),
        0.0,
        1.0 / 6.0,
        &breakpoints(1.0 / 6.0, s, sp.m_hat),
        cfg,
    )?;
    let ctx = KernelCtx::new(sp.tau());
    let g2 = integrate_with_breaks(
        |z| Ok((ctx.g(z, m)? - main_term_g(z, s)) * fourier(m, z)),
        -1.0 / 6.0,
        1.0 / 6.0,
        &breakpoints(1.0 / 6.0, s, sp.m_hat),
        cfg,
    )?;
    Ok(GSplit { g1: 6.0 * g1.value, g1_error: 6.0 * g1.error, g2: 3.0 * g2.value, g2_error: 3.0 * g2.error })
}

/// Outcome of the Euler-number route to `G₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct G1Series {
    pub value: Complex64,
    /// Magnitude of the last term kept.
    pub error: f64,
    pub terms: usize,
}

const MAX_EULER_TERMS: usize = 100;

/// `G₁ = (4π/s) Σ_L C_L 𝓘_L` from the Taylor coefficients `C_L` of
/// `sin(πz)cos(2πmz)e^{6π²z²/s} = Σ C_L z^{2L+1}` and
/// `𝓘_L = ∫_0^{1/6} z^{2L+1}/sinh(2π²z/s) dz = (s/2π)^{2L+2} 𝓔_L - 𝓘'_L`,
/// where `𝓘'_L` is the same integral over `[1/6, ∞)`.
///
/// The closed-form part grows factorially in `L`, so the sum is cut where
/// its terms stop decreasing.
pub fn g1_euler_series(sp: &SParam, cfg: &QuadratureConfig) -> Result<G1Series, AsymError> {
    let s = sp.s;
    let m = sp.abs_m() as f64;
    let b = (s / (2.0 * PI)).powi(2);
    let a = 2.0 * PI * PI / s;
    let n_terms = MAX_EULER_TERMS;

    // Coefficients pre-multiplied by b^{index}, all of modest size.
    let mut alpha = Vec::with_capacity(n_terms);
    let mut beta = Vec::with_capacity(n_terms);
    let mut gamma = Vec::with_capacity(n_terms);
    let (mut al, mut be, mut ga) = (Complex64::new(PI, 0.0), Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    let pb = PI * PI * b;
    let mb = (2.0 * PI * m).powi(2) * b;
    let eb = 6.0 * PI * PI * b / s;
    for k in 0..n_terms {
        alpha.push(al);
        beta.push(be);
        gamma.push(ga);
        let kf = k as f64;
        al *= -pb / ((2.0 * kf + 2.0) * (2.0 * kf + 3.0));
        be *= -mb / ((2.0 * kf + 1.0) * (2.0 * kf + 2.0));
        ga *= eb / (kf + 1.0);
    }
    let mut ab = vec![Complex64::new(0.0, 0.0); n_terms];
    for (j, x) in alpha.iter().enumerate() {
        for (nu, y) in beta.iter().enumerate().take(n_terms - j) {
            ab[j + nu] += x * y;
        }
    }

    let table = EulerTable::odd_up_to(n_terms);
    let ln_b = b.ln();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut prev = f64::INFINITY;
    let mut last = 0.0;
    let mut used = 0;
    for l in 0..n_terms {
        let mut c = Complex64::new(0.0, 0.0);
        for (k, x) in ab.iter().enumerate().take(l + 1) {
            c += x * gamma[l - k];
        }
        let c_tilde = c * b;

        let moment = table.moment(l).expect("table covers l");
        let ln_moment = ln_biguint(moment.numer().magnitude()) - ln_biguint(moment.denom().magnitude());
        // 𝓔_L - 𝓘'_L/b^{L+1} = 𝓔_L (1 - 𝓘'_L/(b^{L+1}𝓔_L)); 𝓔_L > 0.
        let keep = match ln_tail_integral(l, a, ln_b, cfg)? {
            Some(t) => 1.0 - (t - ln_moment).exp(),
            None => Complex64::new(1.0, 0.0),
        };
        let term = c_tilde * ln_moment.exp() * keep;
        let mag = term.norm();
        if l >= 2 && mag > prev {
            break;
        }
        sum += term;
        used = l + 1;
        last = mag;
        prev = mag;
        if mag <= 1e-17 * sum.norm() {
            break;
        }
    }
    let pre = 4.0 * PI / s;
    Ok(G1Series { value: pre * sum, error: pre.norm() * last, terms: used })
}

/// `ln(𝓘'_L / b^{L+1})`, or `None` when the integral underflows.
fn ln_tail_integral(l: usize, a: Complex64, ln_b: Complex64, cfg: &QuadratureConfig) -> Result<Option<Complex64>, SpecError> {
    let p = (2 * l + 1) as f64;
    let lb = (l + 1) as f64 * ln_b;
    let log_integrand = |z: f64| p * z.ln() - lb - a * z;
    let start = 1.0 / 6.0;
    let ln_peak = log_integrand(start).re;
    if ln_peak < -700.0 {
        return Ok(None);
    }
    // The envelope z^p e^{-Re(a) z} decreases beyond p/Re(a); walk out until it
    // has fallen by e^{-45} from its value on the interval.
    let ar = a.re;
    let mut top = start.max(p / ar);
    let ln_max = log_integrand(top).re.max(ln_peak);
    let step = 5.0 / ar;
    while log_integrand(top).re > ln_max - 45.0 {
        top += step;
    }
    let breaks: Vec<f64> = (1..((top - start) / step) as usize).map(|k| start + k as f64 * step).collect();
    let scale = ln_max;
    let res = integrate_with_breaks(
        |z| {
            let az = a * z;
            Ok(2.0 * (log_integrand(z) - scale).exp() / (1.0 - (-2.0 * az).exp()))
        },
        start,
        top,
        &breaks,
        cfg,
    )?;
    if res.value.norm() == 0.0 {
        return Ok(None);
    }
    Ok(Some(res.value.ln() + scale))
}

/// The three principal-value integrals `I₁, I₂, I₃` of the decomposition
/// summands over `[-1/2, 1/2]`, and the one that vanishes for the given `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ISplit {
    pub i: [Complex64; 3],
    pub errors: [f64; 3],
    /// `3∫_{-1/6}^{1/6} g_m e^{-2πimz} dz`.
    pub folded: Complex64,
    /// 0-based index of the integral that vanishes for `m mod 3`.
    pub vanishing: usize,
    pub vanishing_residual: f64,
    /// `|I₁+I₂+I₃ - folded|`, scaled.
    pub sum_residual: f64,
}

/// Floor for the principal-value fold; stays clear of the singular margin of
/// `θ(3z;3τ)` and of the `A₁` denominators, which are checked in `3z`.
const PV_FLOOR: f64 = 1e-6;

pub fn i_split_check(sp: &SParam, cfg: &QuadratureConfig) -> Result<ISplit, AsymError> {
    let ctx = KernelCtx::new(sp.tau());
    let m = sp.abs_m();
    let mut i = [Complex64::new(0.0, 0.0); 3];
    let mut errors = [0.0; 3];
    for (k, (slot, err)) in i.iter_mut().zip(errors.iter_mut()).enumerate() {
        for c in [-1.0 / 3.0, 0.0, 1.0 / 3.0] {
            let r = principal_value(
                |z| Ok(ctx.decomposition_terms(z)?[k] * fourier(m, z)),
                c,
                1.0 / 6.0,
                PV_FLOOR,
                cfg,
            )?;
            *slot += r.value;
            *err += r.error;
        }
    }
    let folded = rm_lemma41(sp, cfg)?.reduced;
    let vanishing = match m.rem_euclid(3) {
        0 => 0,
        1 => 2,
        _ => 1,
    };
    Ok(ISplit {
        i,
        errors,
        folded,
        vanishing,
        vanishing_residual: i[vanishing].norm(),
        sum_residual: scaled_residual(i[0] + i[1] + i[2], folded),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rank_numerator;
    use crate::specfun::qpochhammer;

    /// Exact oracle: `R_m(q)/P(q)` is the sparse series `Σ c_k q^k` whose
    /// coefficients come from the combinatorial rank numerator.
    fn reduced_oracle(sp: &SParam) -> Complex64 {
        let n_max = (45.0 / sp.beta) as usize + 10;
        rank_numerator(sp.m, n_max).iter().map(|&(e, c)| c as f64 * (-sp.s * e as f64).exp()).sum()
    }

    fn cfg() -> QuadratureConfig {
        QuadratureConfig::default()
    }

    #[test]
    fn ln_partition_gf_routes_agree() {
        for s in [Complex64::new(0.3, 0.2), Complex64::new(0.8, -1.0), Complex64::new(1.5, 0.5)] {
            let direct = (-ln_qpochhammer((-s).exp(), 1e-17)).exp();
            let chosen = ln_partition_gf(s).exp();
            assert!((direct - chosen).norm() < 1e-11 * direct.norm(), "s={s}");
        }
        let s = Complex64::new(0.05, 0.01);
        let p = 1.0 / qpochhammer((-s).exp(), 1e-17);
        assert!((ln_partition_gf(s).exp() - p).norm() < 1e-10 * p.norm());
    }

    #[test]
    fn direct_matches_exact_series() {
        for (m, n, x) in [(0, 100, 0.0), (1, 80, 0.4), (4, 60, -0.8), (2, 50, 3.0)] {
            let sp = SParam::new(n, m, x).unwrap();
            let est = rm_direct(&sp, &cfg()).unwrap();
            let oracle = reduced_oracle(&sp);
            assert!((est.reduced - oracle).norm() < 1e-9 * oracle.norm(), "{m},{n},{x}: {} vs {oracle}", est.reduced);
        }
    }

    #[test]
    fn lemma41_matches_exact_series() {
        for (m, n, x) in [(0, 100, 0.0), (1, 100, 0.5), (2, 100, 0.5), (5, 200, -0.3)] {
            let sp = SParam::new(n, m, x).unwrap();
            let est = rm_lemma41(&sp, &cfg()).unwrap();
            let oracle = reduced_oracle(&sp);
            assert!((est.reduced - oracle).norm() < 1e-8 * oracle.norm(), "{m},{n},{x}: {} vs {oracle}", est.reduced);
        }
    }

    #[test]
    fn direct_is_even_in_m() {
        let a = rm_direct(&SParam::new(90, 3, 0.6).unwrap(), &cfg()).unwrap();
        let b = rm_direct(&SParam::new(90, -3, 0.6).unwrap(), &cfg()).unwrap();
        assert!(a.relative_difference(&b) < 1e-10);
    }

    #[test]
    fn near_pole_error_shrinks() {
        let mut last = f64::INFINITY;
        for n in [100, 200, 400] {
            let sp = SParam::new(n, 2, 0.3).unwrap();
            let d = rm_direct(&sp, &cfg()).unwrap();
            let f = rm_near_pole(&sp).unwrap();
            let rel = f.relative_difference(&d);
            assert!(rel < last, "n={n}: {rel} !< {last}");
            last = rel;
        }
        assert!(rm_near_pole(&SParam::new(100, 2, 1.5).unwrap()).is_err());
    }

    #[test]
    fn g_split_reassembles() {
        let sp = SParam::new(80, 1, 0.0).unwrap();
        let g = g_split(&sp, &cfg()).unwrap();
        let d = rm_direct(&sp, &cfg()).unwrap();
        assert!(((g.g1 + g.g2) / d.reduced - 1.0).norm() < 1e-6);
        // G₁ ≈ (s/4) sech²(βm/2).
        let approx = sp.s / 4.0 * sech2(sp.beta / 2.0);
        assert!((g.g1 - approx).norm() < 0.2 * approx.norm());
    }

    #[test]
    fn euler_route_matches_quadrature() {
        for (m, n, x) in [(1, 400, 0.0), (0, 900, 0.5), (5, 900, -0.5)] {
            let sp = SParam::new(n, m, x).unwrap();
            let q = g_split(&sp, &cfg()).unwrap().g1;
            let e = g1_euler_series(&sp, &cfg()).unwrap();
            assert!((e.value - q).norm() < 1e-6 * q.norm(), "{m},{n},{x}: {e:?} vs {q}");
        }
    }

    #[test]
    fn i_split_vanishing_cases() {
        for m in [1, 2, 3] {
            let sp = SParam::new(60, m, 0.2).unwrap();
            let r = i_split_check(&sp, &cfg()).unwrap();
            assert!(r.vanishing_residual < 1e-8, "m={m}: {r:?}");
            assert!(r.sum_residual < 1e-8, "m={m}: {r:?}");
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in RmMethod::ALL {
            assert_eq!(m.name().parse::<RmMethod>().unwrap(), m);
        }
        assert!("nope".parse::<RmMethod>().is_err());
    }
}
