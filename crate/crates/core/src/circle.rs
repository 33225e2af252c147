//! Wright's circle method for `N(m,n)`:
//!
//! `N(m,n) = β/(2π m̂^{1/3}) ∫_{|x| ≤ π m̂^{1/3}/β} R_m(is/2π) e^{ns} dx`,
//!
//! split into the major arc `|x| ≤ 1` and the minor arc beyond it. The
//! integrand is `exp(ln P(q) + ns)` times a moderate factor; both arcs are
//! integrated after dividing out `e^{A}`, `A = nβ + π²/(6β) = π²/(3β)`.

use std::f64::consts::PI;
use std::io::{self, Write};

use log::warn;
use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_traits::FromPrimitive;
use rayon::prelude::*;
use thiserror::Error;

use crate::asym::{rm_eval, sech2, AsymError, RmMethod, SParam, PRECISION_BUDGET};
use crate::exact::{ln_biguint, partition_count, rank_count, ExactError, DEFAULT_SERIES_CAP};
use crate::report::fmt_sig;
use crate::specfun::quad::integrate_with_breaks;
use crate::specfun::{QuadratureConfig, SpecError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircleError {
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error(
        "precision budget exceeded for n = {n}: the contour integrand reaches e^{exponent:.1}, beyond the binary64 budget e^{budget}"
    )]
    Precision { n: u64, exponent: f64, budget: f64 },
    #[error("quadrature failed on the {arc} arc: {source}")]
    Quadrature { arc: &'static str, source: AsymError },
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// Largest `|m|` covered by the asymptotic theorem, `√n·log n/(π√6)`.
pub fn theorem_m_range(n: u64) -> f64 {
    let nf = n as f64;
    nf.sqrt() * nf.ln() / (PI * 6f64.sqrt())
}

fn beta_of(n: u64) -> f64 {
    PI / (6.0 * n as f64).sqrt()
}

/// `ln((β/4) sech²(βm/2) p(n))`.
pub fn ln_main_term(m: i64, n: u64) -> f64 {
    let beta = beta_of(n);
    (beta / 4.0).ln() + sech2(beta * m as f64 / 2.0).ln() + ln_biguint(&partition_count(n as usize))
}

/// `(β/4) sech²(βm/2) p(n)`; warns (but still answers) outside the theorem's range.
pub fn main_term(m: i64, n: u64) -> Result<f64, CircleError> {
    if n == 0 {
        return Err(CircleError::InvalidParam("n must be at least 1".into()));
    }
    if (m.unsigned_abs() as f64) > theorem_m_range(n) {
        warn!("|m| = {} lies outside the asymptotic range |m| <= {:.3} for n = {n}", m.abs(), theorem_m_range(n));
    }
    Ok(ln_main_term(m, n).exp())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourConfig {
    /// Relative accuracy of the outer `x` integrals.
    pub rel_tol: f64,
    pub max_refinements: usize,
    /// Base configuration for the inner `z` integrals; its absolute tolerance
    /// is rescaled pointwise so that it matches the outer target.
    pub inner: QuadratureConfig,
    pub arc_boundary: f64,
    pub use_symmetry: bool,
    pub major_method: RmMethod,
    pub minor_method: RmMethod,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            max_refinements: 2000,
            inner: QuadratureConfig::default(),
            arc_boundary: 1.0,
            use_symmetry: true,
            major_method: RmMethod::Lemma41,
            minor_method: RmMethod::Direct,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourResult {
    pub m: i64,
    pub n: u64,
    pub major: Complex64,
    pub minor: Complex64,
    pub major_error: f64,
    pub minor_error: f64,
    pub total: f64,
    pub rounded: BigInt,
    pub exact: Option<BigUint>,
    pub rel_err: Option<f64>,
    pub flags: Vec<String>,
}

impl ContourResult {
    pub fn minor_to_major(&self) -> f64 {
        self.minor.norm() / self.major.norm()
    }

    pub fn imaginary_ratio(&self) -> f64 {
        let t = self.major + self.minor;
        t.im.abs() / t.re.abs()
    }

    /// Distance of `total` from the nearest half-integer.
    pub fn rounding_margin(&self) -> f64 {
        let f = self.total - self.total.floor();
        (f - 0.5).abs()
    }
}

/// Divides out `e^{A}` and evaluates one contour point.
struct Integrand<'a> {
    n: u64,
    m: i64,
    a_norm: f64,
    abs_density: f64,
    cfg: &'a ContourConfig,
}

impl Integrand<'_> {
    fn eval(&self, x: f64, method: RmMethod) -> Result<Complex64, AsymError> {
        let sp = SParam::new(self.n, self.m, x)?;
        let ln_p = crate::asym::ln_partition_gf(sp.s);
        let ln_pre = ln_p + sp.s * self.n as f64 - self.a_norm;
        let scale = ln_pre.re.exp();
        let inner_abs = (self.abs_density / scale).clamp(1e-300, 1e-2);
        let inner = QuadratureConfig {
            abs_tol: inner_abs,
            tail_cutoff: self.cfg.inner.tail_cutoff.min(inner_abs),
            ..self.cfg.inner
        };
        let est = rm_eval(&sp, method, &inner)?;
        // log_prefactor of the quadrature methods is ln P itself.
        Ok((est.log_prefactor - ln_p + ln_pre).exp() * est.reduced)
    }
}

fn arc_integral<F>(f: F, a: f64, b: f64, step: f64, abs_tol: f64, cfg: &ContourConfig) -> Result<(Complex64, f64), AsymError>
where
    F: Fn(f64) -> Result<Complex64, AsymError>,
{
    if b <= a {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let breaks: Vec<f64> = (1..((b - a) / step).ceil() as usize).map(|k| a + k as f64 * step).collect();
    let outer = QuadratureConfig { abs_tol, rel_tol: cfg.rel_tol, max_refinements: cfg.max_refinements, tail_cutoff: abs_tol };
    // The quadrature engine works with SpecError; tunnel the richer error through.
    let mut failure: Option<AsymError> = None;
    let res = integrate_with_breaks(
        |x| match f(x) {
            Ok(v) => Ok(v),
            Err(AsymError::Spec(e)) => Err(e),
            Err(e) => {
                failure = Some(e.clone());
                Err(SpecError::Domain(e.to_string()))
            }
        },
        a,
        b,
        &breaks,
        &outer,
    );
    match (res, failure) {
        (Ok(r), _) => Ok((r.value, r.error)),
        (Err(_), Some(e)) => Err(e),
        (Err(e), None) => Err(e.into()),
    }
}

/// Reconstruct `N(m,n)` from the contour integral.
pub fn contour_rank_count(m: i64, n: u64, cfg: &ContourConfig) -> Result<ContourResult, CircleError> {
    if n == 0 {
        return Err(CircleError::InvalidParam("n must be at least 1".into()));
    }
    let m_abs = m.abs();
    let beta = beta_of(n);
    let a_norm = PI * PI / (3.0 * beta);
    if a_norm > PRECISION_BUDGET {
        return Err(CircleError::Precision { n, exponent: a_norm, budget: PRECISION_BUDGET });
    }
    if !(cfg.arc_boundary > 0.0) {
        return Err(CircleError::InvalidParam("arc boundary must be positive".into()));
    }
    let m_hat = (m_abs as f64).max(1.0);
    let x_max = SParam::x_max(n, m_abs);
    let boundary = cfg.arc_boundary.min(x_max);
    let scale_ln = a_norm + (beta / (2.0 * PI * m_hat.cbrt())).ln();

    // Expected size of the normalised integral, from the main term.
    let expected = (ln_main_term(m_abs, n) - scale_ln).exp();
    let abs_tol = 1e-3 * cfg.rel_tol * expected;
    let integrand = Integrand { n, m: m_abs, a_norm, abs_density: abs_tol / (2.0 * x_max), cfg };

    let quad_err = |arc: &'static str| move |source: AsymError| CircleError::Quadrature { arc, source };
    let (major, major_err, minor, minor_err) = if cfg.use_symmetry {
        // R_m at the conjugate point is the conjugate, so ∫_{-b}^{b} = 2 Re ∫_0^b.
        let (maj, e1) = arc_integral(|x| integrand.eval(x, cfg.major_method), 0.0, boundary, 0.25, abs_tol, cfg)
            .map_err(quad_err("major"))?;
        let (min, e2) = arc_integral(|x| integrand.eval(x, cfg.minor_method), boundary, x_max, 0.5, abs_tol, cfg)
            .map_err(quad_err("minor"))?;
        (Complex64::new(2.0 * maj.re, 0.0), 2.0 * e1, Complex64::new(2.0 * min.re, 0.0), 2.0 * e2)
    } else {
        let (maj, e1) = arc_integral(|x| integrand.eval(x, cfg.major_method), -boundary, boundary, 0.25, abs_tol, cfg)
            .map_err(quad_err("major"))?;
        let (lo, e2) = arc_integral(|x| integrand.eval(x, cfg.minor_method), -x_max, -boundary, 0.5, abs_tol, cfg)
            .map_err(quad_err("minor"))?;
        let (hi, e3) = arc_integral(|x| integrand.eval(x, cfg.minor_method), boundary, x_max, 0.5, abs_tol, cfg)
            .map_err(quad_err("minor"))?;
        (maj, e1, lo + hi, e2 + e3)
    };

    let scale = scale_ln.exp();
    let major = major * scale;
    let minor = minor * scale;
    let total = (major + minor).re;
    let rounded = BigInt::from_f64(total.round()).unwrap_or_default();
    let exact = if (n as usize) <= DEFAULT_SERIES_CAP { Some(rank_count(m_abs, n as usize)?) } else { None };
    let rel_err = exact.as_ref().map(|e| {
        let ef = ln_biguint(e).exp();
        (total - ef).abs() / ef
    });
    let mut result = ContourResult {
        m,
        n,
        major,
        minor,
        major_error: major_err * scale,
        minor_error: minor_err * scale,
        total,
        rounded,
        exact,
        rel_err,
        flags: Vec::new(),
    };
    if result.rounding_margin() < 0.05 {
        result.flags.push("low_confidence_rounding".into());
    }
    if (m_abs as f64) > theorem_m_range(n) {
        result.flags.push("outside_theorem_range".into());
    }
    if result.imaginary_ratio() > 1e-6 {
        result.flags.push("imaginary_part_not_suppressed".into());
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub m: i64,
    pub n: u64,
    pub main_term: f64,
    pub exact: BigUint,
    pub ratio: f64,
    pub error_scale: f64,
}

impl ConvergenceRow {
    pub fn deviation(&self) -> f64 {
        (self.ratio - 1.0).abs()
    }

    /// `|ratio - 1| / (β^{1/2} m̂^{1/3})`.
    pub fn normalized_deviation(&self) -> f64 {
        self.deviation() / self.error_scale
    }
}

/// `exact/main_term` for every pair, sorted by `(m, n)`.
pub fn convergence_study(ms: &[i64], ns: &[u64]) -> Result<Vec<ConvergenceRow>, CircleError> {
    let mut pairs: Vec<(i64, u64)> = ms.iter().flat_map(|&m| ns.iter().map(move |&n| (m, n))).collect();
    pairs.sort_unstable();
    pairs.dedup();
    for &(_, n) in &pairs {
        if n == 0 {
            return Err(CircleError::InvalidParam("n must be at least 1".into()));
        }
        if n as usize > DEFAULT_SERIES_CAP {
            return Err(ExactError::SeriesTooLarge { n: n as usize, cap: DEFAULT_SERIES_CAP }.into());
        }
    }
    pairs
        .par_iter()
        .map(|&(m, n)| {
            let exact = rank_count(m, n as usize)?;
            let ln_main = ln_main_term(m, n);
            if (m.unsigned_abs() as f64) > theorem_m_range(n) {
                warn!("|m| = {} lies outside the asymptotic range for n = {n}", m.abs());
            }
            let beta = beta_of(n);
            let ratio = if exact.bits() == 0 { 0.0 } else { (ln_biguint(&exact) - ln_main).exp() };
            Ok(ConvergenceRow {
                m,
                n,
                main_term: ln_main.exp(),
                exact,
                ratio,
                error_scale: beta.sqrt() * (m.unsigned_abs() as f64).max(1.0).cbrt(),
            })
        })
        .collect()
}

pub fn write_converge_csv<W: Write>(rows: &[ConvergenceRow], mut w: W) -> io::Result<()> {
    writeln!(w, "m,n,exact,main_term,ratio,error_scale")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.m,
            r.n,
            r.exact,
            fmt_sig(r.main_term, 12),
            fmt_sig(r.ratio, 12),
            fmt_sig(r.error_scale, 12)
        )?;
    }
    Ok(())
}
