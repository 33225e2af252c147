//! Numerical checks of the growth bounds away from and near the pole.
//!
//! The bounds carry no explicit constants, so each check reports the ratio of
//! the computed quantity to the bound's shape; callers judge stability of that
//! ratio across a grid.

use std::f64::consts::PI;
use std::io::{self, Write};

use num_complex::Complex64;

use super::kernel::{main_term_g, KernelCtx};
use super::rm::{g_split, ln_partition_gf, rm_direct, RmEstimate};
use super::{AsymError, SParam};
use crate::report::fmt_sig;
use crate::specfun::QuadratureConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundRow {
    pub name: &'static str,
    pub m: i64,
    pub n: u64,
    pub x: f64,
    pub ln_value: f64,
    pub ln_bound: f64,
}

impl BoundRow {
    pub fn value(&self) -> f64 {
        self.ln_value.exp()
    }

    pub fn bound(&self) -> f64 {
        self.ln_bound.exp()
    }

    pub fn ratio(&self) -> f64 {
        (self.ln_value - self.ln_bound).exp()
    }
}

/// `|R_m|` on the minor arc against `√n · exp(π√(n/6) - (√(6n)/(8π)) m̂^{-2/3})`.
pub fn far_field_bound_check(sp: &SParam, cfg: &QuadratureConfig) -> Result<(RmEstimate, BoundRow), AsymError> {
    let x_max = SParam::x_max(sp.n, sp.m);
    if sp.x.abs() < 1.0 || sp.x.abs() > x_max {
        return Err(AsymError::InvalidParam(format!("far-field check needs 1 <= |x| <= {x_max}, got {}", sp.x)));
    }
    let est = rm_direct(sp, cfg)?;
    let n = sp.n as f64;
    let ln_bound = 0.5 * n.ln() + PI * (n / 6.0).sqrt() - (6.0 * n).sqrt() / (8.0 * PI) * sp.m_hat.powf(-2.0 / 3.0);
    let row = BoundRow { name: "far_field", m: sp.m, n: sp.n, x: sp.x, ln_value: est.ln_abs(), ln_bound };
    Ok((est, row))
}

/// `τ = u + iv` together with the slope `M` of the region `M v ≤ |u| ≤ 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FarFieldParams {
    pub big_m: f64,
    pub u: f64,
    pub v: f64,
}

impl FarFieldParams {
    pub fn new(big_m: f64, u: f64, v: f64) -> Result<Self, AsymError> {
        if !(big_m > 0.0 && v > 0.0) {
            return Err(AsymError::InvalidParam("M and v must be positive".into()));
        }
        if big_m * v > u.abs() * (1.0 + 1e-12) || u.abs() > 0.5 {
            return Err(AsymError::InvalidParam(format!("need M*v <= |u| <= 1/2, got M={big_m}, u={u}, v={v}")));
        }
        Ok(Self { big_m, u, v })
    }

    /// The contour point `sp` (with `|x| ≥ 1`) and `M = m̂^{-1/3}`.
    pub fn from_sparam(sp: &SParam) -> Result<Self, AsymError> {
        let tau = sp.tau().tau();
        Self::new(sp.m_hat.powf(-1.0 / 3.0), tau.re, tau.im)
    }
}

/// `|P(q)|`, `q = e^{2πi(u+iv)}`, against
/// `√v · exp((1/v)(π/12 - (1/2π)(1 - 1/√(1+M²))))`.
pub fn partition_gf_bound_check(p: &FarFieldParams, m: i64, n: u64, x: f64) -> BoundRow {
    let s = Complex64::new(2.0 * PI * p.v, -2.0 * PI * p.u);
    let ln_value = ln_partition_gf(s).re;
    let ln_bound =
        0.5 * p.v.ln() + (PI / 12.0 - (1.0 - 1.0 / (1.0 + p.big_m * p.big_m).sqrt()) / (2.0 * PI)) / p.v;
    BoundRow { name: "partition_gf", m, n, x, ln_value, ln_bound }
}

/// `sup_z |g_m(z) - main term| / (|s|^{-1/2} e^{-(π²/6) Re(1/s)})` over `z_grid`.
pub fn gm_main_term_constant(sp: &SParam, z_grid: &[f64]) -> Result<f64, AsymError> {
    let ctx = KernelCtx::new(sp.tau());
    let shape = sp.s.norm().powf(-0.5) * (-(PI * PI / 6.0) * (1.0 / sp.s).re).exp();
    let mut worst = 0.0f64;
    for &z in z_grid {
        let d = (ctx.g(z, sp.abs_m())? - main_term_g(z, sp.s)).norm();
        worst = worst.max(d / shape);
    }
    Ok(worst)
}

/// `|G₂| β^{1/2} e^{π²/(12β)}`.
pub fn g2_constant(sp: &SParam, cfg: &QuadratureConfig) -> Result<f64, AsymError> {
    let g = g_split(sp, cfg)?;
    Ok(g.g2.norm() * sp.beta.sqrt() * (PI * PI / (12.0 * sp.beta)).exp())
}

pub fn write_bound_csv<W: Write>(rows: &[BoundRow], mut w: W) -> io::Result<()> {
    writeln!(w, "name,m,n,x,value,bound,ratio")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{}",
            r.name,
            r.m,
            r.n,
            fmt_sig(r.x, 12),
            fmt_sig(r.value(), 12),
            fmt_sig(r.bound(), 12),
            fmt_sig(r.ratio(), 12)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn far_field_is_smaller_than_the_peak() {
        let cfg = QuadratureConfig::default();
        let near = rm_direct(&SParam::new(100, 1, 0.0).unwrap(), &cfg).unwrap();
        let (far, row) = far_field_bound_check(&SParam::new(100, 1, 1.0).unwrap(), &cfg).unwrap();
        assert!(far.ln_abs() < near.ln_abs());
        assert!(row.ratio().is_finite() && row.ratio() > 0.0);
        assert!(far_field_bound_check(&SParam::new(100, 1, 0.5).unwrap(), &cfg).is_err());
    }

    #[test]
    fn partition_gf_bound_region() {
        assert!(FarFieldParams::new(1.0, 0.05, 0.1).is_err());
        let p = FarFieldParams::new(1.0, 0.2, 0.1).unwrap();
        let row = partition_gf_bound_check(&p, 1, 0, 0.0);
        assert!(row.ratio() > 0.0 && row.ratio() < 10.0, "{row:?}");
    }

    #[test]
    fn g_minus_main_term_is_small_near_the_pole() {
        let sp = SParam::new(200, 2, 0.5).unwrap();
        let grid: Vec<f64> = (-8..=8).map(|k| k as f64 / 48.0).collect();
        let c = gm_main_term_constant(&sp, &grid).unwrap();
        assert!(c.is_finite() && c < 1e3, "{c}");
    }

    #[test]
    fn bound_csv_layout() {
        let rows = [BoundRow { name: "far_field", m: 1, n: 100, x: 1.0, ln_value: 0.0, ln_bound: 2f64.ln() }];
        let mut buf = Vec::new();
        write_bound_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "name,m,n,x,value,bound,ratio\nfar_field,1,100,1.00000000000e0,1.00000000000e0,2.00000000000e0,5.00000000000e-1\n"
        );
    }
}
