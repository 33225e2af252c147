//! Named identity suites with seeded sample grids.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::asym::{i_split_check, rank_decomposition_check, rm_eval, AsymError, RmMethod, SParam};
use crate::specfun::identities::{euler_suite, transforms_suite};
use crate::specfun::{IdentityCheck, QuadratureConfig, TauPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Transforms,
    Decomposition,
    Euler,
    Gm,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Transforms, Suite::Decomposition, Suite::Euler, Suite::Gm];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Transforms => "transforms",
            Suite::Decomposition => "decomposition",
            Suite::Euler => "euler",
            Suite::Gm => "gm",
        }
    }

    /// Tolerance used when the caller does not supply one.
    pub fn default_tol(self) -> f64 {
        match self {
            Suite::Transforms | Suite::Decomposition => 1e-8,
            Suite::Euler => 1e-10,
            Suite::Gm => 1e-6,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| format!("unknown suite '{s}'"))
    }
}

pub const DECOMPOSITION_POINTS: usize = 10;
pub const GM_POINTS: usize = 9;

fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545_F491_4F6C_DD1D) ^ salt)
}

/// Seeded `(z, τ)` with `z` real, at least 0.01 from `(1/3)ℤ`, and
/// `Im τ ∈ [0.15, 1]`.
pub fn decomposition_grid(seed: u64) -> Vec<(f64, TauPoint)> {
    let mut r = rng(seed, 11);
    (0..DECOMPOSITION_POINTS)
        .map(|_| {
            let z = loop {
                let z: f64 = r.random_range(-0.5..0.5);
                if (3.0 * z - (3.0 * z).round()).abs() >= 0.03 {
                    break z;
                }
            };
            let tau = TauPoint::from_parts(r.random_range(-0.5..0.5), r.random_range(0.15..1.0)).expect("Im > 0");
            (z, tau)
        })
        .collect()
}

/// Seeded `(m, n, x)`, three per residue class of `m mod 3`, `n ∈ [50, 200]`, `|x| ≤ 1`.
pub fn gm_grid(seed: u64) -> Vec<(i64, u64, f64)> {
    let mut r = rng(seed, 12);
    (0..GM_POINTS)
        .map(|i| {
            let m = 3 * r.random_range(0..3i64) + (i as i64 % 3);
            (m, r.random_range(50..=200u64), r.random_range(-1.0..=1.0))
        })
        .collect()
}

pub fn decomposition_suite(seed: u64, tol: f64) -> Result<Vec<IdentityCheck>, AsymError> {
    decomposition_grid(seed)
        .into_iter()
        .map(|(z, tau)| {
            let c = rank_decomposition_check(z, tau, false)?;
            Ok(IdentityCheck::new(
                "rank_decomposition",
                vec![("z", z), ("tau_re", tau.tau().re), ("tau_im", tau.tau().im)],
                c.residual,
                tol,
            ))
        })
        .collect()
}

/// Direct vs folded `R_m` (relative difference) and the principal-value
/// integrals that must vanish, on the `gm_grid`.
pub fn gm_suite(seed: u64, tol: f64, cfg: &QuadratureConfig) -> Result<Vec<IdentityCheck>, AsymError> {
    let per_point: Vec<Result<[IdentityCheck; 3], AsymError>> = gm_grid(seed)
        .par_iter()
        .map(|&(m, n, x)| {
            let sp = SParam::new(n, m, x)?;
            let d = rm_eval(&sp, RmMethod::Direct, cfg)?;
            let l = rm_eval(&sp, RmMethod::Lemma41, cfg)?;
            let split = i_split_check(&sp, cfg)?;
            let pt = vec![("m", m as f64), ("n", n as f64), ("x", x)];
            Ok([
                IdentityCheck::new("lemma41_equivalence", pt.clone(), l.relative_difference(&d), tol),
                IdentityCheck::new("i_split_vanishing", pt.clone(), split.vanishing_residual, tol),
                IdentityCheck::new("i_split_sum", pt, split.sum_residual, tol),
            ])
        })
        .collect();
    let mut out = Vec::with_capacity(3 * GM_POINTS);
    for p in per_point {
        out.extend(p?);
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, seed: u64, tol: f64, cfg: &QuadratureConfig) -> Result<Vec<IdentityCheck>, AsymError> {
    match suite {
        Suite::Transforms => Ok(transforms_suite(seed, tol, cfg)?),
        Suite::Euler => Ok(euler_suite(tol, cfg)?),
        Suite::Decomposition => decomposition_suite(seed, tol),
        Suite::Gm => gm_suite(seed, tol, cfg),
    }
}
