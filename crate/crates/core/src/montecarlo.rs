//! Seeded Monte Carlo estimates of `Pr[V_n = 1]` and `F_n(d)`.
//!
//! Sample `k` is the game `SampleSpec { depth, p, seed, sample_index: k }`, so
//! the tally does not depend on how the index range is split across threads.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fragility::fragility;
use crate::game::{check_probability, sample_game, SampleSpec, MAX_MATERIALIZED_DEPTH};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959964;

pub const MAX_DMAX: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub est: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Wilson score interval for `successes` out of `trials` at quantile `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wilson {
    pub successes: u64,
    pub trials: u64,
    pub center: f64,
    pub half_width: f64,
    pub z: f64,
}

impl Wilson {
    pub fn new(successes: u64, trials: u64, z: f64) -> Self {
        assert!(trials > 0 && successes <= trials);
        let (x, n) = (successes as f64, trials as f64);
        let z2 = z * z;
        let center = (x + z2 / 2.0) / (n + z2);
        let half_width = z * (x * (n - x) / n + z2 / 4.0).sqrt() / (n + z2);
        Self {
            successes,
            trials,
            center,
            half_width,
            z,
        }
    }

    /// Half-width divided by `z`.
    pub fn standard_error(&self) -> f64 {
        self.half_width / self.z
    }

    pub fn interval(&self) -> Interval {
        Interval {
            est: self.successes as f64 / self.trials as f64,
            lo: (self.center - self.half_width).max(0.0),
            hi: (self.center + self.half_width).min(1.0),
        }
    }

    /// Distance from the Wilson center to `value`, in standard errors.
    pub fn z_score(&self, value: f64) -> f64 {
        (value - self.center).abs() / self.standard_error()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EstimationRequest {
    pub depth: u32,
    pub p: f64,
    pub dmax: u32,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl EstimationRequest {
    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.depth > MAX_MATERIALIZED_DEPTH {
            return Err(Error::DepthTooLarge {
                depth: self.depth,
                max: MAX_MATERIALIZED_DEPTH,
            });
        }
        if self.samples == 0 {
            return Err(Error::InvalidArgument("samples must be positive".into()));
        }
        if self.dmax == 0 || self.dmax > MAX_DMAX {
            return Err(Error::InvalidArgument(format!(
                "dmax must be in 1..={MAX_DMAX}, got {}",
                self.dmax
            )));
        }
        if self.workers == 0 {
            return Err(Error::InvalidArgument("workers must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FragilityEstimate {
    pub d: u32,
    pub est: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimationResult {
    pub depth: u32,
    pub p: f64,
    pub dmax: u32,
    pub samples: u64,
    pub seed: u64,
    /// `counts[v][c - 1]`: games of value `v` with fragility `min(c, dmax + 1)`.
    #[serde(skip)]
    pub counts: [Vec<u64>; 2],
    pub prob_v1: Interval,
    #[serde(rename = "F")]
    pub f: Vec<FragilityEstimate>,
}

impl EstimationResult {
    pub fn value_one_count(&self) -> u64 {
        self.counts[1].iter().sum()
    }

    /// Games with fragility at most `d`.
    pub fn fragile_count(&self, d: u32) -> u64 {
        self.counts.iter().map(|c| c[..d as usize].iter().sum::<u64>()).sum()
    }

    pub fn prob_v1_wilson(&self) -> Wilson {
        Wilson::new(self.value_one_count(), self.samples, Z_95)
    }

    pub fn fragile_wilson(&self, d: u32) -> Wilson {
        Wilson::new(self.fragile_count(d), self.samples, Z_95)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }
}

type Tally = [Vec<u64>; 2];

fn tally_range(req: &EstimationRequest, range: std::ops::Range<u64>) -> Tally {
    let slots = req.dmax as usize + 1;
    let mut counts = [vec![0u64; slots], vec![0u64; slots]];
    for k in range {
        let spec = SampleSpec {
            depth: req.depth,
            p: req.p,
            seed: req.seed,
            sample_index: k,
        };
        let game = sample_game(&spec).expect("request validated");
        let capped = fragility(&game).min(slots as u64);
        counts[game.value() as usize][capped as usize - 1] += 1;
    }
    counts
}

fn merge(mut a: Tally, b: Tally) -> Tally {
    for v in 0..2 {
        for (x, y) in a[v].iter_mut().zip(&b[v]) {
            *x += y;
        }
    }
    a
}

pub fn estimate(req: &EstimationRequest) -> Result<EstimationResult> {
    req.validate()?;
    let workers = req.workers as u64;
    let chunk = req.samples.div_ceil(workers);
    let ranges: Vec<_> = (0..workers)
        .map(|w| (w * chunk).min(req.samples)..((w + 1) * chunk).min(req.samples))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(req.workers)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    let counts = pool.install(|| {
        ranges
            .into_par_iter()
            .map(|r| tally_range(req, r))
            .reduce(
                || [vec![0; req.dmax as usize + 1], vec![0; req.dmax as usize + 1]],
                merge,
            )
    });

    let mut result = EstimationResult {
        depth: req.depth,
        p: req.p,
        dmax: req.dmax,
        samples: req.samples,
        seed: req.seed,
        counts,
        prob_v1: Interval { est: 0.0, lo: 0.0, hi: 0.0 },
        f: Vec::new(),
    };
    result.prob_v1 = result.prob_v1_wilson().interval();
    result.f = (1..=req.dmax)
        .map(|d| {
            let iv = result.fragile_wilson(d).interval();
            FragilityEstimate { d, est: iv.est, lo: iv.lo, hi: iv.hi }
        })
        .collect();
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(p: f64, depth: u32, samples: u64, workers: usize) -> EstimationRequest {
        EstimationRequest {
            depth,
            p,
            dmax: 3,
            samples,
            seed: 11,
            workers,
        }
    }

    #[test]
    fn wilson_reference_values() {
        // x = 0: center z²/2 / (n + z²), half-width (z²/2) / (n + z²).
        let w = Wilson::new(0, 100, Z_95);
        let z2 = Z_95 * Z_95;
        assert!((w.center - z2 / 2.0 / (100.0 + z2)).abs() < 1e-15);
        assert!((w.half_width - w.center).abs() < 1e-15);
        let iv = Wilson::new(50, 100, Z_95).interval();
        assert!((iv.lo - 0.40383152963549296).abs() < 1e-9);
        assert!((iv.hi - 0.596168470364507).abs() < 1e-9);
    }

    #[test]
    fn certain_win() {
        let r = estimate(&request(1.0, 6, 1000, 2)).unwrap();
        assert_eq!(r.prob_v1.est, 1.0);
        assert_eq!(r.value_one_count(), 1000);
    }

    #[test]
    fn tallies_are_conserved() {
        let r = estimate(&request(0.6, 5, 777, 3)).unwrap();
        let total: u64 = r.counts.iter().flatten().sum();
        assert_eq!(total, 777);
        assert_eq!(r.fragile_count(3) + r.counts[0][3] + r.counts[1][3], 777);
    }

    #[test]
    fn worker_count_does_not_matter() {
        let a = estimate(&request(crate::GOLDEN, 7, 3001, 1)).unwrap();
        let b = estimate(&request(crate::GOLDEN, 7, 3001, 8)).unwrap();
        let c = estimate(&request(crate::GOLDEN, 7, 3001, 5)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_json(), c.to_json());
    }

    #[test]
    fn rejects_bad_requests() {
        assert!(estimate(&request(0.5, 4, 0, 1)).is_err());
        assert!(estimate(&request(0.5, 31, 10, 1)).is_err());
        assert!(estimate(&request(-0.1, 4, 10, 1)).is_err());
        assert!(estimate(&EstimationRequest { dmax: 17, ..request(0.5, 4, 10, 1) }).is_err());
        assert!(estimate(&request(0.5, 4, 10, 0)).is_err());
    }

    #[test]
    fn json_fields() {
        let r = estimate(&request(0.5, 3, 50, 1)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in ["depth", "p", "dmax", "samples", "seed", "prob_v1", "F"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["prob_v1"].get("lo").is_some());
        assert_eq!(v["F"].as_array().unwrap().len(), 3);
        assert_eq!(v["F"][0]["d"], 1);
        assert!(v.get("counts").is_none());
    }
}
