//! Closed recursions for golden games (`p = φ`).
//!
//! `alpha[n][d]` is the probability that a depth-`n` game with value 1 is not
//! `d`-fragile, `beta[n][d]` the same given value 0. At heights where the
//! winner's opponent moves, both children must stay robust, so the
//! conditional probability squares. At the other heights the winner needs one
//! winning child: with probability φ³ (given the root's value) both children
//! win and both must be overturned, otherwise exactly one child wins and it
//! must be overturned. The limits `xi_d` solve the fixed-point quadratic
//! `2φ²x² − x + φ³H(d) = 0`.

use std::io::Write;

use serde::Serialize;

use crate::distribution::fmt_real;
use crate::error::{Error, Result};
use crate::GOLDEN;

const PHI: f64 = GOLDEN;
const PHI2: f64 = PHI * PHI;
const PHI3: f64 = PHI2 * PHI;
const PHI5: f64 = PHI3 * PHI2;

/// Probability that two independent children, each needing more than `r`
/// flips with probability `tails[r - 1]`, cannot both be overturned with `d`
/// flips in total.
///
/// Equal to `1 - C(d) + C(d - 1)` with `C(k) = Σ_{r+s=k} (1 - t_r)(1 - t_s)`
/// over `r, s >= 1`; expanded so that no two near-equal sums are subtracted:
/// `2 t_{d-1} + Σ_{r+s=d-1} t_r t_s - Σ_{r+s=d} t_r t_s`.
pub fn pair_survival(tails: &[f64], d: usize) -> f64 {
    if d == 1 {
        return 1.0;
    }
    let t = |r: usize| tails[r - 1];
    let conv = |k: usize| -> f64 { (1..k).map(|r| t(r) * t(k - r)).sum() };
    (2.0 * t(d - 1) + conv(d - 1) - conv(d)).max(0.0)
}

/// Smaller root of `φ³h − x + 2φ²x²`, as `2φ³h / (1 + sqrt(1 − 8φ⁵h))`.
pub fn xi_quadratic_root(h: f64) -> Result<f64> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "H must lie in (0, 1], got {h}"
        )));
    }
    Ok(2.0 * PHI3 * h / (1.0 + (1.0 - 8.0 * PHI5 * h).sqrt()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TheoryRow {
    pub d: u32,
    pub xi: f64,
    pub xi_sq: f64,
    #[serde(rename = "H")]
    pub h: f64,
    /// Limiting probability of `d`-fragility.
    #[serde(rename = "F")]
    pub f: f64,
    /// `1 - F`, computed directly as `φ ξ + φ² ξ²`.
    #[serde(rename = "one_minus_F")]
    pub complement: f64,
}

impl TheoryRow {
    /// `|2φ²ξ² − ξ + φ³H|`.
    pub fn residual(&self) -> f64 {
        (2.0 * PHI2 * self.xi_sq - self.xi + PHI3 * self.h).abs()
    }
}

/// Limits `ξ_d`, `H(d)`, `F(d)` for `d = 1..=dmax`.
///
/// Once `ξ_d²` underflows, later `H` values are exactly zero and their `ξ`
/// is reported as zero.
pub fn xi_sequence(dmax: u32) -> Vec<TheoryRow> {
    let mut tails: Vec<f64> = Vec::with_capacity(dmax as usize);
    let mut rows = Vec::with_capacity(dmax as usize);
    for d in 1..=dmax as usize {
        let h = pair_survival(&tails, d);
        let xi = if h > 0.0 { xi_quadratic_root(h).expect("H in (0, 1]") } else { 0.0 };
        let xi_sq = xi * xi;
        let complement = PHI * xi + PHI2 * xi_sq;
        tails.push(xi_sq);
        rows.push(TheoryRow {
            d: d as u32,
            xi,
            xi_sq,
            h,
            f: 1.0 - complement,
            complement,
        });
    }
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FiniteRow {
    pub n: u32,
    pub d: u32,
    pub alpha: f64,
    pub beta: f64,
}

/// `α_n(d)` and `β_n(d)` for all `n <= nmax`, `d <= dmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteTable {
    dmax: u32,
    alpha: Vec<Vec<f64>>,
    beta: Vec<Vec<f64>>,
}

impl FiniteTable {
    pub fn alpha(&self, n: u32, d: u32) -> f64 {
        self.alpha[n as usize][d as usize - 1]
    }

    pub fn beta(&self, n: u32, d: u32) -> f64 {
        self.beta[n as usize][d as usize - 1]
    }

    pub fn nmax(&self) -> u32 {
        self.alpha.len() as u32 - 1
    }

    pub fn dmax(&self) -> u32 {
        self.dmax
    }

    /// Rows ordered by `n`, then `d`.
    pub fn rows(&self) -> Vec<FiniteRow> {
        (0..=self.nmax())
            .flat_map(|n| {
                (1..=self.dmax).map(move |d| FiniteRow {
                    n,
                    d,
                    alpha: self.alpha(n, d),
                    beta: self.beta(n, d),
                })
            })
            .collect()
    }
}

/// One level where the winner picks a child: `φ³ H + 2φ² t`.
fn choose_level(prev: &[f64]) -> Vec<f64> {
    (1..=prev.len())
        .map(|d| PHI3 * pair_survival(prev, d) + 2.0 * PHI2 * prev[d - 1])
        .collect()
}

/// One level where the loser picks a child: both must stay robust.
fn square_level(prev: &[f64]) -> Vec<f64> {
    prev.iter().map(|t| t * t).collect()
}

pub fn finite_table(dmax: u32, nmax: u32) -> FiniteTable {
    let zero = vec![0.0; dmax as usize];
    let mut alpha = vec![zero.clone()];
    let mut beta = vec![zero];
    for n in 1..=nmax as usize {
        // Player 1 moves at even heights: there the value-1 winner chooses.
        let (a, b) = if n % 2 == 0 {
            (choose_level(&alpha[n - 1]), square_level(&beta[n - 1]))
        } else {
            (square_level(&alpha[n - 1]), choose_level(&beta[n - 1]))
        };
        alpha.push(a);
        beta.push(b);
    }
    FiniteTable { dmax, alpha, beta }
}

pub fn finite_alpha_beta(dmax: u32, nmax: u32) -> Vec<FiniteRow> {
    finite_table(dmax, nmax).rows()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitDeviation {
    pub d: u32,
    pub xi: f64,
    /// `|α_{n_big}(d) − ξ_d|`
    pub alpha_even: f64,
    /// `|β_{n_big+1}(d) − ξ_d|`
    pub beta_odd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticReport {
    pub n_big: u32,
    pub deviations: Vec<LimitDeviation>,
    pub xi_strictly_decreasing: bool,
    pub complement_strictly_decreasing: bool,
}

impl AsymptoticReport {
    pub fn max_deviation(&self) -> f64 {
        self.deviations
            .iter()
            .map(|r| r.alpha_even.max(r.beta_odd))
            .fold(0.0, f64::max)
    }
}

/// Compares the depth-`n_big` recursion with the limits `ξ_d`.
pub fn asymptotic_limit_check(dmax: u32, n_big: u32) -> Result<AsymptoticReport> {
    if n_big % 2 != 0 || n_big < 40 {
        return Err(Error::InvalidArgument(format!(
            "n_big must be even and at least 40, got {n_big}"
        )));
    }
    let limits = xi_sequence(dmax);
    let table = finite_table(dmax, n_big + 1);
    let deviations = limits
        .iter()
        .map(|row| LimitDeviation {
            d: row.d,
            xi: row.xi,
            alpha_even: (table.alpha(n_big, row.d) - row.xi).abs(),
            beta_odd: (table.beta(n_big + 1, row.d) - row.xi).abs(),
        })
        .collect();
    Ok(AsymptoticReport {
        n_big,
        deviations,
        xi_strictly_decreasing: limits.windows(2).all(|w| w[1].xi < w[0].xi),
        complement_strictly_decreasing: limits.windows(2).all(|w| w[1].complement < w[0].complement),
    })
}

pub const THEORY_CSV_HEADER: &str = "d,xi,xi_sq,H,F,one_minus_F";

pub fn write_theory_csv<W: Write>(mut w: W, rows: &[TheoryRow]) -> std::io::Result<()> {
    writeln!(w, "{THEORY_CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.d,
            fmt_real(r.xi),
            fmt_real(r.xi_sq),
            fmt_real(r.h),
            fmt_real(r.f),
            fmt_real(r.complement)
        )?;
    }
    Ok(())
}
