//! Exact integer combinatorics for partitions.
//!
//! Everything here works on arbitrary-precision integers: `p(n)` leaves the
//! `u64` range just above `n = 400`, and the rank tables are used as the
//! ground truth for every floating-point computation elsewhere in the crate.
//!
//! Two independent routes produce the rank counts `N(m, n)`:
//!
//! * [`RankMethod::Enumeration`] walks every partition and applies [`rank_of`];
//! * [`RankMethod::Series`] reads the coefficient of `ζ^m` off the bilateral
//!   rank generating function and convolves it with `1/(q)_∞`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

/// Largest `n` accepted by [`enumerate_partitions`] and the enumeration-based tables.
pub const DEFAULT_ENUMERATION_CAP: usize = 70;
/// Largest `n_max` accepted by the series-based rank table.
pub const DEFAULT_SERIES_CAP: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("enumeration too large: n = {n} exceeds the enumeration cap {cap}")]
    EnumerationTooLarge { n: usize, cap: usize },
    #[error("series table too large: n_max = {n} exceeds the series cap {cap}")]
    SeriesTooLarge { n: usize, cap: usize },
    #[error("{0} undefined for empty partition")]
    EmptyPartition(&'static str),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("n = {n} is outside the table range 0..={n_max}")]
    OutOfRange { n: usize, n_max: usize },
    #[error("modulus must be at least 1")]
    ZeroModulus,
}

/// A partition of `n`: a non-increasing sequence of positive parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// Checks the non-increasing / positive invariant.
    pub fn new(parts: Vec<u32>) -> Result<Self, ExactError> {
        if parts.contains(&0) {
            return Err(ExactError::InvalidPartition("parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(ExactError::InvalidPartition("parts must be non-increasing".into()));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// The weight `n = Σ parts`.
    pub fn weight(&self) -> u64 {
        self.parts.iter().map(|&p| u64::from(p)).sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "()");
        }
        let mut first = true;
        for p in &self.parts {
            if !first {
                write!(f, "+")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

/// Iterator over the partitions of `n` in lexicographically decreasing order.
///
/// `4, 3+1, 2+2, 2+1+1, 1+1+1+1` for `n = 4`.
#[derive(Debug, Clone)]
pub struct Partitions {
    current: Option<Vec<u32>>,
}

impl Partitions {
    fn new(n: u32) -> Self {
        let first = if n == 0 { Vec::new() } else { vec![n] };
        Self { current: Some(first) }
    }

    fn advance(parts: &mut Vec<u32>) -> bool {
        // Strip trailing ones, decrement the last part > 1, then refill greedily.
        let mut ones = 0u32;
        while parts.last() == Some(&1) {
            parts.pop();
            ones += 1;
        }
        let Some(last) = parts.last_mut() else {
            return false;
        };
        *last -= 1;
        let cap = *last;
        let mut rest = ones + 1;
        while rest > 0 {
            let take = rest.min(cap);
            parts.push(take);
            rest -= take;
        }
        true
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        let cur = self.current.take()?;
        let mut nxt = cur.clone();
        if Self::advance(&mut nxt) {
            self.current = Some(nxt);
        }
        Some(Partition { parts: cur })
    }
}

/// Lazily enumerate the partitions of `n`, refusing anything above `cap`.
pub fn partitions(n: usize, cap: usize) -> Result<Partitions, ExactError> {
    if n > cap {
        return Err(ExactError::EnumerationTooLarge { n, cap });
    }
    Ok(Partitions::new(n as u32))
}

/// All partitions of `n`, each exactly once, lexicographically decreasing.
pub fn enumerate_partitions(n: usize) -> Result<Vec<Partition>, ExactError> {
    enumerate_partitions_capped(n, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_partitions_capped(n: usize, cap: usize) -> Result<Vec<Partition>, ExactError> {
    Ok(partitions(n, cap)?.collect())
}

fn pentagonal_table(n_max: usize) -> Vec<BigUint> {
    // Euler: p(n) = Σ_{k≥1} (-1)^{k+1} [p(n - k(3k-1)/2) + p(n - k(3k+1)/2)]
    let mut p: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    p.push(BigInt::one());
    for n in 1..=n_max {
        let mut acc = BigInt::zero();
        let mut k = 1usize;
        loop {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let mut term = p[n - g1].clone();
            if g2 <= n {
                term += &p[n - g2];
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
            k += 1;
        }
        p.push(acc);
    }
    p.into_iter()
        .map(|v| v.to_biguint().expect("p(n) is non-negative"))
        .collect()
}

fn p_cache() -> &'static RwLock<Vec<BigUint>> {
    static CACHE: OnceLock<RwLock<Vec<BigUint>>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(vec![BigUint::one()]))
}

/// `p(0), …, p(n_max)`, computed once and memoised process-wide.
pub fn partition_numbers(n_max: usize) -> Vec<BigUint> {
    {
        let cache = p_cache().read().expect("partition cache poisoned");
        if cache.len() > n_max {
            return cache[..=n_max].to_vec();
        }
    }
    let table = pentagonal_table(n_max);
    let mut cache = p_cache().write().expect("partition cache poisoned");
    if cache.len() < table.len() {
        *cache = table.clone();
    }
    table
}

/// The partition number `p(n)`.
pub fn partition_count(n: usize) -> BigUint {
    {
        let cache = p_cache().read().expect("partition cache poisoned");
        if let Some(v) = cache.get(n) {
            return v.clone();
        }
    }
    partition_numbers(n).pop().expect("table is non-empty")
}

/// Dyson's rank: largest part minus number of parts.
pub fn rank_of(lambda: &Partition) -> Result<i64, ExactError> {
    match lambda.parts.first() {
        None => Err(ExactError::EmptyPartition("rank")),
        Some(&largest) => Ok(i64::from(largest) - lambda.parts.len() as i64),
    }
}

/// The Andrews–Garvan crank.
pub fn crank_of(lambda: &Partition) -> Result<i64, ExactError> {
    let Some(&largest) = lambda.parts.first() else {
        return Err(ExactError::EmptyPartition("crank"));
    };
    let ones = lambda.parts.iter().filter(|&&p| p == 1).count() as i64;
    if ones == 0 {
        return Ok(i64::from(largest));
    }
    let above = lambda.parts.iter().filter(|&&p| i64::from(p) > ones).count() as i64;
    Ok(above - ones)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Statistic {
    Rank,
    Crank,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Rank => "rank",
            Statistic::Crank => "crank",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RankMethod {
    Enumeration,
    Series,
}

/// Exact counts of a partition statistic, `counts(m, n)` for `0 ≤ n ≤ n_max`.
///
/// Row `n` stores `m = -n ..= n`. Row 0 holds the generating-function
/// convention `counts(0, 0) = 1` (the empty partition carries no statistic).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StatTable {
    statistic: Statistic,
    n_max: usize,
    rows: Vec<Vec<BigUint>>,
}

pub type RankTable = StatTable;
pub type CrankTable = StatTable;

impl StatTable {
    fn zeroed(statistic: Statistic, n_max: usize) -> Self {
        let rows = (0..=n_max).map(|n| vec![BigUint::zero(); 2 * n + 1]).collect();
        Self { statistic, n_max, rows }
    }

    pub fn statistic(&self) -> Statistic {
        self.statistic
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// `counts(m, n)`; zero outside `|m| ≤ n`.
    pub fn get(&self, m: i64, n: usize) -> BigUint {
        self.try_get(m, n).cloned().unwrap_or_default()
    }

    fn try_get(&self, m: i64, n: usize) -> Option<&BigUint> {
        let row = self.rows.get(n)?;
        if m.unsigned_abs() as usize > n {
            return None;
        }
        row.get((m + n as i64) as usize)
    }

    /// Non-zero entries of row `n` as `m → count`.
    pub fn row(&self, n: usize) -> BTreeMap<i64, BigUint> {
        let mut out = BTreeMap::new();
        if let Some(row) = self.rows.get(n) {
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    out.insert(i as i64 - n as i64, c.clone());
                }
            }
        }
        out
    }

    pub fn row_sum(&self, n: usize) -> BigUint {
        self.rows.get(n).map(|r| r.iter().sum()).unwrap_or_default()
    }

    /// Sizes of the residue classes `m mod modulus` among the partitions of `n`.
    pub fn dyson_class_sizes(&self, n: usize, modulus: u32) -> Result<BTreeMap<u32, BigUint>, ExactError> {
        if modulus == 0 {
            return Err(ExactError::ZeroModulus);
        }
        if n > self.n_max {
            return Err(ExactError::OutOfRange { n, n_max: self.n_max });
        }
        let mut out: BTreeMap<u32, BigUint> = (0..modulus).map(|r| (r, BigUint::zero())).collect();
        for (m, c) in self.row(n) {
            let r = m.rem_euclid(i64::from(modulus)) as u32;
            *out.get_mut(&r).expect("all residues present") += c;
        }
        Ok(out)
    }

    /// CSV with header `n,m,count`, one line per `|m| ≤ n`, sorted by `(n, m)`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "n,m,count")?;
        for (n, row) in self.rows.iter().enumerate() {
            for (i, c) in row.iter().enumerate() {
                writeln!(w, "{},{},{}", n, i as i64 - n as i64, c)?;
            }
        }
        Ok(())
    }

    fn bump(&mut self, m: i64, n: usize) {
        let idx = (m + n as i64) as usize;
        self.rows[n][idx] += 1u32;
    }
}

/// `n,count` CSV for the partition numbers.
pub fn write_partition_csv<W: Write>(n_max: usize, mut w: W) -> io::Result<()> {
    writeln!(w, "n,count")?;
    for (n, p) in partition_numbers(n_max).iter().enumerate() {
        writeln!(w, "{n},{p}")?;
    }
    Ok(())
}

/// Rank table with the default caps.
pub fn rank_table(n_max: usize, method: RankMethod) -> Result<RankTable, ExactError> {
    match method {
        RankMethod::Enumeration => rank_table_enumeration(n_max, DEFAULT_ENUMERATION_CAP),
        RankMethod::Series => rank_table_series(n_max, DEFAULT_SERIES_CAP),
    }
}

pub fn rank_table_enumeration(n_max: usize, cap: usize) -> Result<RankTable, ExactError> {
    if n_max > cap {
        return Err(ExactError::EnumerationTooLarge { n: n_max, cap });
    }
    let mut table = StatTable::zeroed(Statistic::Rank, n_max);
    table.rows[0][0] = BigUint::one();
    for n in 1..=n_max {
        for lambda in Partitions::new(n as u32) {
            let r = rank_of(&lambda)?;
            table.bump(r, n);
        }
    }
    Ok(table)
}

/// Numerator of `Σ_n N(m, n) q^n` after clearing `1/(q)_∞`, as a sparse
/// list of `(exponent, coefficient)` with exponents `≤ n_max`.
///
/// Expanding `(1-ζ)/(1-ζq^k)` geometrically (in `ζ` for `k > 0`, in `ζ^{-1}`
/// for `k < 0`) and reading off `ζ^m` gives, for `m ≥ 1`,
/// `Σ_{k≥1} (-1)^{k-1} q^{k(3k-1)/2 + km} (1 - q^k)`, and for `m = 0`,
/// `1 + 2 Σ_{k≥1} (-1)^k q^{k(3k+1)/2}` (the `k = 0` term contributes the 1).
pub fn rank_numerator(m: i64, n_max: usize) -> Vec<(usize, i64)> {
    let m = m.unsigned_abs() as usize;
    let mut out = Vec::new();
    if m == 0 {
        out.push((0, 1));
        let mut k = 1usize;
        while k * (3 * k + 1) / 2 <= n_max {
            let sign = if k.is_multiple_of(2) { 2 } else { -2 };
            out.push((k * (3 * k + 1) / 2, sign));
            k += 1;
        }
        return out;
    }
    let mut k = 1usize;
    while k * (3 * k - 1) / 2 + k * m <= n_max {
        let e = k * (3 * k - 1) / 2 + k * m;
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out.push((e, sign));
        if e + k <= n_max {
            out.push((e + k, -sign));
        }
        k += 1;
    }
    out
}

/// `N(m, 0..=n_max)` for a single `m` through the series route.
pub fn rank_row_series(m: i64, n_max: usize, p: &[BigUint]) -> Vec<BigUint> {
    assert!(p.len() > n_max, "partition table too short");
    let num = rank_numerator(m, n_max);
    let mut acc = vec![BigInt::zero(); n_max + 1];
    for &(e, c) in &num {
        for n in e..=n_max {
            let pv = BigInt::from(p[n - e].clone());
            if c >= 0 {
                acc[n] += pv * c;
            } else {
                acc[n] -= pv * (-c);
            }
        }
    }
    acc.into_iter()
        .map(|v| {
            debug_assert!(!v.is_negative());
            v.to_biguint().unwrap_or_default()
        })
        .collect()
}

/// `N(m, n)` by the series route, without building a whole table.
pub fn rank_count(m: i64, n: usize) -> Result<BigUint, ExactError> {
    if n > DEFAULT_SERIES_CAP {
        return Err(ExactError::SeriesTooLarge { n, cap: DEFAULT_SERIES_CAP });
    }
    let p = partition_numbers(n);
    Ok(rank_row_series(m, n, &p).pop().expect("non-empty row"))
}

pub fn rank_table_series(n_max: usize, cap: usize) -> Result<RankTable, ExactError> {
    if n_max > cap {
        return Err(ExactError::SeriesTooLarge { n: n_max, cap });
    }
    let p = partition_numbers(n_max);
    let columns: Vec<Vec<BigUint>> = (0..=n_max as i64)
        .into_par_iter()
        .map(|m| rank_row_series(m, n_max, &p))
        .collect();
    let mut table = StatTable::zeroed(Statistic::Rank, n_max);
    for (m, col) in columns.into_iter().enumerate() {
        for (n, c) in col.into_iter().enumerate() {
            if m > n {
                continue;
            }
            let mi = m as i64;
            table.rows[n][(mi + n as i64) as usize] = c.clone();
            table.rows[n][(n as i64 - mi) as usize] = c;
        }
    }
    Ok(table)
}

/// Crank table by enumeration. Row 0 is `{0: 1}`; row 1 is `{-1: 1}` from
/// the combinatorial definition (the generating function disagrees at `n = 1`).
pub fn crank_table(n_max: usize) -> Result<CrankTable, ExactError> {
    crank_table_capped(n_max, DEFAULT_ENUMERATION_CAP)
}

pub fn crank_table_capped(n_max: usize, cap: usize) -> Result<CrankTable, ExactError> {
    if n_max > cap {
        return Err(ExactError::EnumerationTooLarge { n: n_max, cap });
    }
    let mut table = StatTable::zeroed(Statistic::Crank, n_max);
    table.rows[0][0] = BigUint::one();
    for n in 1..=n_max {
        for lambda in Partitions::new(n as u32) {
            let c = crank_of(&lambda)?;
            table.bump(c, n);
        }
    }
    Ok(table)
}

/// Rank-residue class sizes for partitions of `n` (enumeration route).
pub fn dyson_class_sizes(n: usize, modulus: u32) -> Result<BTreeMap<u32, BigUint>, ExactError> {
    if modulus == 0 {
        return Err(ExactError::ZeroModulus);
    }
    let mut out: BTreeMap<u32, BigUint> = (0..modulus).map(|r| (r, BigUint::zero())).collect();
    if n == 0 {
        *out.get_mut(&0).expect("residue 0") += 1u32;
        return Ok(out);
    }
    for lambda in partitions(n, DEFAULT_ENUMERATION_CAP)? {
        let r = rank_of(&lambda)?.rem_euclid(i64::from(modulus)) as u32;
        *out.get_mut(&r).expect("all residues present") += 1u32;
    }
    Ok(out)
}

/// Natural logarithm of a big integer, also past the `f64` range.
pub fn ln_biguint(v: &BigUint) -> f64 {
    if let Some(f) = v.to_f64().filter(|f| f.is_finite()) {
        return f.ln();
    }
    let bits = v.bits();
    let shift = bits.saturating_sub(60);
    let top = (v >> shift).to_f64().expect("60-bit value fits f64");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn partitions_of_four_in_order() {
        let got: Vec<String> = enumerate_partitions(4).unwrap().iter().map(|p| p.to_string()).collect();
        assert_eq!(got, ["4", "3+1", "2+2", "2+1+1", "1+1+1+1"]);
    }

    #[test]
    fn partitions_of_zero_is_the_empty_partition() {
        let all = enumerate_partitions(0).unwrap();
        assert_eq!(all.len(), 1);
        assert!(all[0].is_empty());
    }

    #[test]
    fn enumeration_matches_pentagonal_count() {
        assert_eq!(enumerate_partitions(6).unwrap().len(), 11);
        for n in 0..=25 {
            let count = enumerate_partitions(n).unwrap().len();
            assert_eq!(BigUint::from(count), partition_count(n), "n = {n}");
        }
    }

    #[test]
    fn enumeration_is_strictly_decreasing_and_valid() {
        let all = enumerate_partitions(12).unwrap();
        for w in all.windows(2) {
            assert!(w[0].parts() > w[1].parts());
        }
        for p in &all {
            assert_eq!(p.weight(), 12);
            assert!(Partition::new(p.parts().to_vec()).is_ok());
        }
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        assert_eq!(
            enumerate_partitions(71).unwrap_err(),
            ExactError::EnumerationTooLarge { n: 71, cap: 70 }
        );
        assert!(enumerate_partitions_capped(5, 4).is_err());
    }

    #[test]
    fn partition_numbers_small_and_known() {
        assert_eq!(partition_count(0), BigUint::from(1u32));
        assert_eq!(partition_count(4), BigUint::from(5u32));
        assert_eq!(partition_count(100), BigUint::from(190_569_292u64));
    }

    #[test]
    fn p100_matches_product_expansion() {
        // Independent oracle: multiply out Π_{k≤100} 1/(1-q^k) coefficient-wise.
        let n = 100usize;
        let mut c = vec![BigUint::zero(); n + 1];
        c[0] = BigUint::one();
        for k in 1..=n {
            for i in k..=n {
                let add = c[i - k].clone();
                c[i] += add;
            }
        }
        assert_eq!(c[n], partition_count(n));
        assert_eq!(c[n], BigUint::from(190_569_292u64));
    }

    #[test]
    fn ramanujan_congruences() {
        let p = partition_numbers(400);
        for (k, n) in (4..=400).step_by(5).enumerate() {
            assert!((&p[n] % 5u32).is_zero(), "p(5·{k}+4)");
        }
        for n in (5..=400).step_by(7) {
            assert!((&p[n] % 7u32).is_zero(), "p({n})");
        }
        for n in (6..=400).step_by(11) {
            assert!((&p[n] % 11u32).is_zero(), "p({n})");
        }
    }

    #[test]
    fn p_overflows_u64_near_400() {
        let p = partition_numbers(450);
        assert!(p[400].to_u64().is_none() || p[450].to_u64().is_none());
        assert!(p[300].to_u64().is_some());
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank_of(&parts(&[4])).unwrap(), 3);
        assert_eq!(rank_of(&parts(&[2, 2])).unwrap(), 0);
        assert_eq!(rank_of(&parts(&[1, 1, 1, 1])).unwrap(), -3);
        assert_eq!(rank_of(&Partition::empty()).unwrap_err().to_string(), "rank undefined for empty partition");
    }

    #[test]
    fn crank_examples() {
        assert_eq!(crank_of(&parts(&[4])).unwrap(), 4);
        assert_eq!(crank_of(&parts(&[1, 1, 1, 1])).unwrap(), -4);
        assert_eq!(crank_of(&parts(&[2, 1, 1])).unwrap(), -2);
        assert_eq!(crank_of(&parts(&[1])).unwrap(), -1);
        assert_eq!(crank_of(&Partition::empty()).unwrap_err().to_string(), "crank undefined for empty partition");
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    fn row_of(t: &StatTable, n: usize) -> Vec<(i64, u32)> {
        t.row(n).into_iter().map(|(m, c)| (m, c.to_u32().unwrap())).collect()
    }

    #[test]
    fn rank_table_row_four() {
        let t = rank_table(4, RankMethod::Enumeration).unwrap();
        assert_eq!(row_of(&t, 4), [(-3, 1), (-1, 1), (0, 1), (1, 1), (3, 1)]);
        assert_eq!(row_of(&t, 1), [(0, 1)]);
        assert_eq!(row_of(&t, 0), [(0, 1)]);
        let s = rank_table(1, RankMethod::Series).unwrap();
        assert_eq!(row_of(&s, 1), [(0, 1)]);
    }

    #[test]
    fn series_and_enumeration_agree_to_forty() {
        let a = rank_table(40, RankMethod::Series).unwrap();
        let b = rank_table(40, RankMethod::Enumeration).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rank_table_totals_and_symmetry() {
        let t = rank_table(120, RankMethod::Series).unwrap();
        let p = partition_numbers(120);
        for n in 0..=120 {
            assert_eq!(t.row_sum(n), p[n]);
            for m in 0..=n as i64 {
                assert_eq!(t.get(m, n), t.get(-m, n));
            }
            if n >= 1 {
                assert!(t.get(n as i64 + 1, n).is_zero());
            }
        }
    }

    #[test]
    fn rank_count_matches_table() {
        let t = rank_table(60, RankMethod::Series).unwrap();
        for m in [-7i64, 0, 1, 2, 5] {
            assert_eq!(rank_count(m, 60).unwrap(), t.get(m, 60));
        }
        assert!(rank_count(0, 1001).is_err());
    }

    #[test]
    fn crank_table_rows() {
        let t = crank_table(30).unwrap();
        assert_eq!(row_of(&t, 0), [(0, 1)]);
        assert_eq!(row_of(&t, 1), [(-1, 1)]);
        assert_eq!(row_of(&t, 4), [(-4, 1), (-2, 1), (0, 1), (2, 1), (4, 1)]);
        assert_eq!(t.row_sum(4), BigUint::from(5u32));
        let p = partition_numbers(30);
        for n in 2..=30 {
            assert_eq!(t.row_sum(n), p[n]);
            for m in 0..=n as i64 {
                assert_eq!(t.get(m, n), t.get(-m, n), "M({m},{n})");
            }
        }
    }

    #[test]
    fn table_caps() {
        assert!(rank_table(71, RankMethod::Enumeration).is_err());
        assert!(rank_table(1001, RankMethod::Series).is_err());
        assert!(crank_table(71).is_err());
    }

    #[test]
    fn dyson_classes_examples() {
        let five = dyson_class_sizes(4, 5).unwrap();
        assert!(five.values().all(|c| *c == BigUint::from(1u32)));
        let seven = dyson_class_sizes(5, 7).unwrap();
        assert_eq!(seven.len(), 7);
        assert!(seven.values().all(|c| *c == BigUint::from(1u32)));
        let one = dyson_class_sizes(4, 1).unwrap();
        assert_eq!(one.into_iter().collect::<Vec<_>>(), [(0, BigUint::from(5u32))]);
        assert_eq!(dyson_class_sizes(4, 0).unwrap_err(), ExactError::ZeroModulus);
    }

    #[test]
    fn dyson_classes_from_table_match_enumeration() {
        let t = rank_table(30, RankMethod::Series).unwrap();
        for n in [9usize, 14, 19, 24, 29] {
            assert_eq!(t.dyson_class_sizes(n, 5).unwrap(), dyson_class_sizes(n, 5).unwrap());
        }
        assert!(t.dyson_class_sizes(31, 5).is_err());
    }

    #[test]
    fn csv_layout() {
        let t = rank_table(2, RankMethod::Series).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "n,m,count\n0,0,1\n1,-1,0\n1,0,1\n1,1,0\n2,-2,0\n2,-1,1\n2,0,0\n2,1,1\n2,2,0\n"
        );
        let mut buf = Vec::new();
        write_partition_csv(4, &mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().ends_with("4,5\n"));
    }

    #[test]
    fn ln_of_big_partition_numbers() {
        let p = partition_count(900);
        let approx = ln_biguint(&p);
        let ln_hr = std::f64::consts::PI * (2.0 * 900.0f64 / 3.0).sqrt() - (4.0 * 900.0 * 3f64.sqrt()).ln();
        assert!((approx - ln_hr).abs() < 0.1);
        assert!((ln_biguint(&BigUint::from(5u32)) - 5f64.ln()).abs() < 1e-15);
    }
}
