//! Exact law of (value, flip cost) under i.i.d. Bernoulli leaves.
//!
//! Fragility only matters up to some budget `D`, so the flip cost is tracked
//! as one of `1..=D` or `OVER`, giving `2(D + 1)` states per level. One level
//! of backward induction convolves two independent copies of the child law.
//!
//! The total mass is renormalized after every level. Squaring a law whose mass
//! is `1 + e` gives mass `1 + 2e`, so without this the rounding error doubles
//! per level and swamps the answer by depth 50 at `p = φ`.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{check_probability, maximizer_at, Player};

pub const MAX_EXACT_DEPTH: u32 = 64;
pub const MAX_CAP: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FlipCost {
    Within(u32),
    Over,
}

/// Probability table over `(value, flipcost)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CappedCostDistribution {
    cap: u32,
    // [value][slot], slot = cost - 1 for cost <= cap, slot = cap for OVER.
    prob: [Vec<f64>; 2],
}

impl CappedCostDistribution {
    fn zeros(cap: u32) -> Self {
        let slots = cap as usize + 1;
        Self {
            cap,
            prob: [vec![0.0; slots], vec![0.0; slots]],
        }
    }

    fn slot(&self, cost: FlipCost) -> usize {
        match cost {
            FlipCost::Within(c) if (1..=self.cap).contains(&c) => c as usize - 1,
            FlipCost::Within(c) if c > self.cap => self.cap as usize,
            FlipCost::Within(c) => panic!("flip cost {c} is below 1"),
            FlipCost::Over => self.cap as usize,
        }
    }

    fn cost_of_slot(&self, slot: usize) -> FlipCost {
        if slot == self.cap as usize {
            FlipCost::Over
        } else {
            FlipCost::Within(slot as u32 + 1)
        }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn prob(&self, value: u8, cost: FlipCost) -> f64 {
        self.prob[value as usize][self.slot(cost)]
    }

    pub fn total(&self) -> f64 {
        self.prob.iter().flatten().sum()
    }

    pub fn prob_value(&self, value: u8) -> f64 {
        self.prob[value as usize].iter().sum()
    }

    /// `Pr[value = v and flipcost > d]` for `d <= cap`.
    pub fn tail_with_value(&self, value: u8, d: u32) -> f64 {
        assert!(d <= self.cap, "budget {d} exceeds cap {}", self.cap);
        self.prob[value as usize][d as usize..].iter().sum()
    }

    /// `Pr[flipcost > d]`, the probability of not being `d`-fragile.
    pub fn tail(&self, d: u32) -> f64 {
        self.tail_with_value(0, d) + self.tail_with_value(1, d)
    }

    /// Nonzero entries as `(value, flipcost, probability)`.
    pub fn entries(&self) -> impl Iterator<Item = (u8, FlipCost, f64)> + '_ {
        (0..2u8).flat_map(move |v| {
            self.prob[v as usize]
                .iter()
                .enumerate()
                .filter(|(_, &p)| p != 0.0)
                .map(move |(s, &p)| (v, self.cost_of_slot(s), p))
        })
    }
}

fn check_cap(cap: u32) -> Result<()> {
    if cap == 0 || cap > MAX_CAP {
        return Err(Error::InvalidArgument(format!(
            "cap must be in 1..={MAX_CAP}, got {cap}"
        )));
    }
    Ok(())
}

pub fn leaf_distribution(p: f64, cap: u32) -> Result<CappedCostDistribution> {
    check_probability(p)?;
    check_cap(cap)?;
    let mut dist = CappedCostDistribution::zeros(cap);
    dist.prob[1][0] = p;
    dist.prob[0][0] = 1.0 - p;
    Ok(dist)
}

/// One level of backward induction over two i.i.d. children.
pub fn combine(child: &CappedCostDistribution, mover: Player) -> CappedCostDistribution {
    let cap = child.cap;
    let over = cap as usize;
    let preferred = mover.preferred_value() as usize;
    let mut out = CappedCostDistribution::zeros(cap);

    // Cost of a child outcome to reach `target`, in slot units: 0 when the
    // child already has it, otherwise its flip cost (OVER stays OVER).
    let cost_to = |value: usize, slot: usize, target: usize| -> usize {
        if value == target {
            0
        } else if slot == over {
            usize::MAX
        } else {
            slot + 1
        }
    };

    for lv in 0..2 {
        for (ls, &lp) in child.prob[lv].iter().enumerate() {
            if lp == 0.0 {
                continue;
            }
            for rv in 0..2 {
                for (rs, &rp) in child.prob[rv].iter().enumerate() {
                    if rp == 0.0 {
                        continue;
                    }
                    let to_pref = cost_to(lv, ls, preferred).min(cost_to(rv, rs, preferred));
                    let other = 1 - preferred;
                    let to_other = cost_to(lv, ls, other).saturating_add(cost_to(rv, rs, other));
                    let (value, cost) = if to_pref == 0 {
                        (preferred, to_other)
                    } else {
                        (other, to_pref)
                    };
                    let slot = if cost > cap as usize { over } else { cost - 1 };
                    out.prob[value][slot] += lp * rp;
                }
            }
        }
    }

    let total = out.total();
    for row in out.prob.iter_mut() {
        for p in row.iter_mut() {
            *p /= total;
        }
    }
    out
}

/// Exact quantities for one depth. Conditionals are `None` when the event
/// they condition on has probability zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExactRow {
    pub n: u32,
    pub p: f64,
    pub cap: u32,
    pub prob_v1: f64,
    /// `f[d - 1]` is the probability of being `d`-fragile.
    #[serde(rename = "F")]
    pub f: Vec<f64>,
    pub alpha: Vec<Option<f64>>,
    pub beta: Vec<Option<f64>>,
}

impl ExactRow {
    fn from_distribution(n: u32, p: f64, dist: &CappedCostDistribution) -> Self {
        let cap = dist.cap;
        let prob_v1 = dist.prob_value(1);
        let prob_v0 = dist.prob_value(0);
        let conditional = |value: u8, given: f64| -> Vec<Option<f64>> {
            (1..=cap)
                .map(|d| (given > 0.0).then(|| dist.tail_with_value(value, d) / given))
                .collect()
        };
        Self {
            n,
            p,
            cap,
            prob_v1,
            f: (1..=cap).map(|d| 1.0 - dist.tail(d)).collect(),
            alpha: conditional(1, prob_v1),
            beta: conditional(0, prob_v0),
        }
    }

    pub fn fragile(&self, d: u32) -> f64 {
        self.f[d as usize - 1]
    }

    pub fn alpha(&self, d: u32) -> Option<f64> {
        self.alpha[d as usize - 1]
    }

    pub fn beta(&self, d: u32) -> Option<f64> {
        self.beta[d as usize - 1]
    }
}

/// Rows for depths `0..=depth`: leaf law, then one [`combine`] per height.
pub fn exact_table(depth: u32, p: f64, cap: u32) -> Result<Vec<ExactRow>> {
    if depth > MAX_EXACT_DEPTH {
        return Err(Error::DepthTooLarge {
            depth,
            max: MAX_EXACT_DEPTH,
        });
    }
    let mut dist = leaf_distribution(p, cap)?;
    let mut rows = Vec::with_capacity(depth as usize + 1);
    rows.push(ExactRow::from_distribution(0, p, &dist));
    for h in 1..=depth {
        let mover = if maximizer_at(h) { Player::Player1 } else { Player::Player2 };
        dist = combine(&dist, mover);
        rows.push(ExactRow::from_distribution(h, p, &dist));
    }
    Ok(rows)
}

/// `Pr[V_n = 1]` for `n = 0..=depth` by the one-level marginal map:
/// `q -> q^2` where Player 2 moves and `q -> 1 - (1 - q)^2` where Player 1 does.
pub fn value_prob_iterate(p: f64, depth: u32) -> Result<Vec<f64>> {
    check_probability(p)?;
    let mut out = Vec::with_capacity(depth as usize + 1);
    let mut q = p;
    out.push(q);
    for h in 1..=depth {
        q = if maximizer_at(h) {
            1.0 - (1.0 - q) * (1.0 - q)
        } else {
            q * q
        };
        out.push(q);
    }
    Ok(out)
}

/// Two levels of the marginal map seen from Player 2: `g(x) = (1 - (1 - x)^2)^2`.
pub fn two_level_map(x: f64) -> f64 {
    let inner = 1.0 - (1.0 - x) * (1.0 - x);
    inner * inner
}

/// Formats a real with 17 significant digits.
pub(crate) fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_else(|| "NA".to_string())
}

pub fn exact_csv_header(cap: u32) -> String {
    let mut cols = vec!["n".to_string(), "p".into(), "cap".into(), "prob_v1".into()];
    for prefix in ["F", "alpha", "beta"] {
        cols.extend((1..=cap).map(|d| format!("{prefix}_{d}")));
    }
    cols.join(",")
}

pub fn exact_csv_line(row: &ExactRow) -> String {
    let mut cols = vec![
        row.n.to_string(),
        fmt_real(row.p),
        row.cap.to_string(),
        fmt_real(row.prob_v1),
    ];
    cols.extend(row.f.iter().copied().map(fmt_real));
    cols.extend(row.alpha.iter().copied().map(fmt_opt));
    cols.extend(row.beta.iter().copied().map(fmt_opt));
    cols.join(",")
}

/// Header plus one line per row. Undefined conditionals are written as `NA`.
pub fn write_exact_csv<W: Write>(mut w: W, rows: &[ExactRow]) -> std::io::Result<()> {
    let cap = rows.first().map_or(1, |r| r.cap);
    writeln!(w, "{}", exact_csv_header(cap))?;
    for row in rows {
        writeln!(w, "{}", exact_csv_line(row))?;
    }
    Ok(())
}
