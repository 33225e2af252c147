//! Globally adaptive 21-point Gauss–Kronrod quadrature for complex integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use super::SpecError;

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_22,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_725,
    0.054_755_896_574_351_995,
    0.075_039_674_810_919_96,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_84,
    0.134_709_217_311_473_34,
    0.142_775_938_577_060_09,
    0.147_739_104_901_338_49,
    0.149_445_554_002_916_9,
];

const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

/// Tolerances and budget shared by every numerical integral in the crate.
///
/// `tail_cutoff` bounds the integrand mass discarded when an infinite range
/// is truncated; it must not exceed `abs_tol`, so truncation never dominates
/// the quadrature error. For a Gaussian-type integrand `e^{-a w² + b|w|}` the
/// cut point is the positive root of `a W² - b W = ln(1/tail_cutoff)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_refinements: usize,
    pub tail_cutoff: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-11, max_refinements: 4000, tail_cutoff: 1e-15 }
    }
}

impl QuadratureConfig {
    pub fn new(abs_tol: f64, rel_tol: f64, max_refinements: usize, tail_cutoff: f64) -> Result<Self, SpecError> {
        let cfg = Self { abs_tol, rel_tol, max_refinements, tail_cutoff };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), SpecError> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0 && self.tail_cutoff > 0.0) {
            return Err(SpecError::InvalidConfig("tolerances must be positive".into()));
        }
        if self.tail_cutoff > self.abs_tol {
            return Err(SpecError::InvalidConfig("tail_cutoff must not exceed abs_tol".into()));
        }
        if self.max_refinements == 0 {
            return Err(SpecError::InvalidConfig("max_refinements must be positive".into()));
        }
        Ok(())
    }

    /// Same budget with both tolerances halved.
    pub fn halved(&self) -> Self {
        Self {
            abs_tol: self.abs_tol / 2.0,
            rel_tol: self.rel_tol / 2.0,
            tail_cutoff: self.tail_cutoff / 2.0,
            ..*self
        }
    }

    /// Half-width `W` beyond which `e^{-a w² + b|w|}` stays below `tail_cutoff`.
    pub fn gaussian_cutoff(&self, a: f64, b: f64) -> f64 {
        let l = (1.0 / self.tail_cutoff).ln();
        (b + (b * b + 4.0 * a * l).sqrt()) / (2.0 * a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    pub error: f64,
    pub evaluations: usize,
}

struct Panel {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut e = err;
    if resasc != 0.0 && e != 0.0 {
        let scale = (200.0 * e / resasc).powf(1.5);
        e = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * resabs;
        if floor > e {
            e = floor;
        }
    }
    e
}

/// Single 21-point Kronrod panel; the error is the rescaled Kronrod–Gauss gap.
pub fn gk21<F>(f: &mut F, a: f64, b: f64) -> Result<(Complex64, f64), SpecError>
where
    F: FnMut(f64) -> Result<Complex64, SpecError>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center)?;
    let mut kron = fc * WGK[10];
    let mut gauss = Complex64::new(0.0, 0.0);
    let mut resabs = fc.norm() * WGK[10];
    let mut fv = [(Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)); 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv[j] = (f1, f2);
        kron += (f1 + f2) * WGK[j];
        resabs += (f1.norm() + f2.norm()) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut resasc = WGK[10] * (fc - mean).norm();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[j].0 - mean).norm() + (fv[j].1 - mean).norm());
    }
    let h = half.abs();
    let value = kron * half;
    let err = rescale_error(((kron - gauss) * half).norm(), resabs * h, resasc * h);
    Ok((value, err))
}

/// Adaptive integration over `[a, b]` with optional interior breakpoints.
///
/// Panels are bisected worst-first until the total error estimate drops
/// below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate_with_breaks<F>(
    mut f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    cfg: &QuadratureConfig,
) -> Result<QuadResult, SpecError>
where
    F: FnMut(f64) -> Result<Complex64, SpecError>,
{
    let mut points = vec![a];
    points.extend(breaks.iter().copied().filter(|&x| x > a.min(b) && x < a.max(b)));
    points.push(b);
    let last = points.len() - 1;
    if b < a {
        points[1..last].sort_by(|x, y| y.total_cmp(x));
    } else {
        points[1..last].sort_by(|x, y| x.total_cmp(y));
    }
    points.dedup();

    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    let mut evaluations = 0usize;
    for w in points.windows(2) {
        let (v, e) = gk21(&mut f, w[0], w[1])?;
        evaluations += 21;
        total += v;
        total_err += e;
        heap.push(Panel { a: w[0], b: w[1], value: v, error: e });
    }

    let mut refinements = 0usize;
    loop {
        let target = cfg.abs_tol.max(cfg.rel_tol * total.norm());
        if total_err <= target {
            break;
        }
        if refinements >= cfg.max_refinements {
            return Err(SpecError::NoConvergence { achieved: total_err, requested: target });
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a).abs() < 1e3 * f64::EPSILON * mid.abs().max(1e-300) {
            // Panel can no longer be split meaningfully; accept what we have.
            heap.push(worst);
            if total_err <= 10.0 * target {
                break;
            }
            return Err(SpecError::NoConvergence { achieved: total_err, requested: target });
        }
        let (v1, e1) = gk21(&mut f, worst.a, mid)?;
        let (v2, e2) = gk21(&mut f, mid, worst.b)?;
        evaluations += 42;
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        refinements += 1;
    }
    // Re-sum to shed accumulated cancellation from the running updates.
    let (value, error) = heap
        .iter()
        .fold((Complex64::new(0.0, 0.0), 0.0), |(v, e), p| (v + p.value, e + p.error));
    Ok(QuadResult { value, error, evaluations })
}

pub fn integrate<F>(f: F, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<QuadResult, SpecError>
where
    F: FnMut(f64) -> Result<Complex64, SpecError>,
{
    integrate_with_breaks(f, a, b, &[], cfg)
}

/// Principal value of `∫_{c-d}^{c+d} f` around a simple pole at `c`, folded as
/// `∫_0^d [f(c+t) + f(c-t)] dt`. Below `t_floor` the (even, smooth) pair sum is
/// frozen at its `t_floor` value so the cancelling pole parts never meet.
pub fn principal_value<F>(mut f: F, c: f64, d: f64, t_floor: f64, cfg: &QuadratureConfig) -> Result<QuadResult, SpecError>
where
    F: FnMut(f64) -> Result<Complex64, SpecError>,
{
    integrate(
        |t| {
            let t = t.max(t_floor);
            Ok(f(c + t)? + f(c - t)?)
        },
        0.0,
        d,
        cfg,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn real(f: impl Fn(f64) -> f64) -> impl FnMut(f64) -> Result<Complex64, SpecError> {
        move |x| Ok(Complex64::new(f(x), 0.0))
    }

    #[test]
    fn weights_are_consistent() {
        let kron: f64 = 2.0 * WGK[..10].iter().sum::<f64>() + WGK[10];
        let gauss: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((kron - 2.0).abs() < 1e-14);
        assert!((gauss - 2.0).abs() < 1e-14);
    }

    #[test]
    fn single_panel_is_exact_on_polynomials() {
        for k in 0..=30u32 {
            let (v, _) = gk21(&mut real(|x| x.powi(k as i32)), -1.0, 1.0).unwrap();
            let exact = if k % 2 == 1 { 0.0 } else { 2.0 / f64::from(k + 1) };
            assert!((v.re - exact).abs() < 1e-14, "x^{k}");
        }
    }

    #[test]
    fn oscillatory_integrand() {
        let cfg = QuadratureConfig::default();
        let r = integrate(real(|x| (50.0 * x).cos()), 0.0, PI, &cfg).unwrap();
        assert!((r.value.re - (50.0 * PI).sin() / 50.0).abs() < 1e-12);
        let r = integrate(|x| Ok(Complex64::new(0.0, 30.0 * x).exp()), 0.0, 1.0, &cfg).unwrap();
        let exact = (Complex64::new(0.0, 30.0).exp() - 1.0) / Complex64::new(0.0, 30.0);
        assert!((r.value - exact).norm() < 1e-12);
    }

    #[test]
    fn peaked_integrand_with_breakpoint() {
        let cfg = QuadratureConfig::default();
        let eps = 1e-3;
        let r = integrate_with_breaks(real(|x| eps / (x * x + eps * eps)), -1.0, 1.0, &[0.0], &cfg).unwrap();
        assert!((r.value.re - 2.0 * (1.0 / eps).atan()).abs() < 1e-10);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let cfg = QuadratureConfig::default();
        let r = integrate(real(|x| x.exp()), 1.0, 0.0, &cfg).unwrap();
        assert!((r.value.re + (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        let cfg = QuadratureConfig { max_refinements: 2, ..QuadratureConfig::default() };
        let err = integrate(real(|x| (1.0 / (x + 1e-6)).sin()), 0.0, 1.0, &cfg).unwrap_err();
        assert!(matches!(err, SpecError::NoConvergence { .. }));
    }

    #[test]
    fn principal_value_of_one_over_x() {
        let cfg = QuadratureConfig::default();
        // PV ∫_{-1}^{1} e^x / x dx = 2 Shi(1)
        let r = principal_value(real(|x| x.exp() / x), 0.0, 1.0, 1e-9, &cfg).unwrap();
        assert!((r.value.re - 2.114_501_750_751_457_6).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(QuadratureConfig::new(1e-10, 1e-10, 100, 1e-12).is_ok());
        assert!(QuadratureConfig::new(0.0, 1e-10, 100, 1e-12).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-10, 100, 1e-9).is_err());
        assert!(QuadratureConfig::new(1e-10, 1e-10, 0, 1e-12).is_err());
    }

    #[test]
    fn gaussian_cutoff_bounds_the_tail() {
        let cfg = QuadratureConfig::default();
        let (a, b) = (0.7, 2.0);
        let w = cfg.gaussian_cutoff(a, b);
        assert!((-a * w * w + b * w).exp() <= cfg.tail_cutoff * (1.0 + 1e-9));
    }
}
