//! Transfinite-diameter oracle.
//!
//! Maximizes `∑_{i<j} ln|z_i - z_j|` over `n` points constrained to the set's
//! curves by coordinate-wise golden-section sweeps, each point searching the
//! parameter interval between its two neighbours. Same-curve distances come
//! from chord formulas in the curve parameter so that near-coincident points
//! on exponentially thin arcs keep finite logs.
//!
//! The raw `ln d_n` approaches `ln cap` only like `ln n / n`; the reported
//! capacity is extrapolated from `d_{n/2}` and `d_n` with the model
//! `ln d_m = ln cap + ln m/(m-1) + B/(m-1)`, exact for circles.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::CompactSet;
use crate::error::{Error, Result};

use super::curves::{allocate, curves_of, log_distance, set_diameter, Curve};
use super::LogCapacity;

const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeketeConfig {
    pub n: usize,
    pub seed: u64,
    pub starts: usize,
    /// Stop when a sweep improves the objective by less than this.
    pub sweep_tolerance: f64,
    pub max_sweeps: usize,
    /// Combine `n/2` and `n` into an extrapolated capacity.
    pub extrapolate: bool,
}

impl FeketeConfig {
    pub fn new(n: usize, seed: u64) -> Self {
        FeketeConfig {
            n,
            seed,
            starts: 8,
            sweep_tolerance: 1e-10,
            max_sweeps: 20_000,
            extrapolate: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeketeEstimate {
    /// Extrapolated `ln cap` (or `ln d_n` when extrapolation is off).
    pub log_capacity: LogCapacity,
    /// Raw `ln d_n` of the best configuration.
    #[serde(with = "super::log_f64")]
    pub log_dn: f64,
    /// Raw `ln d_{n/2}` when extrapolating.
    pub log_dn_half: Option<f64>,
    pub n: usize,
    pub sweeps: usize,
    pub best_start: usize,
    pub points: Vec<Complex64>,
}

struct Configuration<'a> {
    curves: &'a [Curve],
    curve_of: Vec<usize>,
    s: Vec<f64>,
}

impl Configuration<'_> {
    fn partial(&self, i: usize, si: f64) -> Result<f64> {
        let ci = self.curve_of[i];
        let mut acc = 0.0;
        for j in 0..self.s.len() {
            if j != i {
                acc += log_distance(self.curves, (ci, si), (self.curve_of[j], self.s[j]))?;
            }
        }
        Ok(acc)
    }

    fn objective(&self) -> Result<f64> {
        let mut acc = 0.0;
        for i in 0..self.s.len() {
            for j in i + 1..self.s.len() {
                acc += log_distance(self.curves, (self.curve_of[i], self.s[i]), (self.curve_of[j], self.s[j]))?;
            }
        }
        Ok(acc)
    }

    /// Index lists per curve, sorted by parameter.
    fn sorted_members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.curves.len()];
        for (i, &c) in self.curve_of.iter().enumerate() {
            members[c].push(i);
        }
        for m in &mut members {
            m.sort_by(|&a, &b| self.s[a].total_cmp(&self.s[b]));
        }
        members
    }

    fn sweep(&mut self) -> Result<()> {
        for (c, members) in self.sorted_members().into_iter().enumerate() {
            let closed = self.curves[c].closed();
            let m = members.len();
            for p in 0..m {
                let i = members[p];
                let (lo, hi) = if closed {
                    let prev = if p == 0 { self.s[members[m - 1]] - 1.0 } else { self.s[members[p - 1]] };
                    let next = if p + 1 == m { self.s[members[0]] + 1.0 } else { self.s[members[p + 1]] };
                    (prev, next)
                } else {
                    let prev = if p == 0 { 0.0 } else { self.s[members[p - 1]] };
                    let next = if p + 1 == m { 1.0 } else { self.s[members[p + 1]] };
                    (prev, next)
                };
                let current = self.partial(i, self.s[i])?;
                let (best_s, best_f) = self.golden(i, lo, hi, p == 0 && !closed, p + 1 == m && !closed)?;
                if best_f > current {
                    self.s[i] = if closed { best_s.rem_euclid(1.0) } else { best_s };
                }
            }
        }
        Ok(())
    }

    /// Golden-section maximization of point `i` on `[lo, hi]`. Endpoints that
    /// are curve ends (not neighbours) are also tried.
    fn golden(&self, i: usize, lo: f64, hi: f64, try_lo: bool, try_hi: bool) -> Result<(f64, f64)> {
        let (mut a, mut b) = (lo, hi);
        let mut x1 = b - GOLDEN * (b - a);
        let mut x2 = a + GOLDEN * (b - a);
        let mut f1 = self.partial(i, x1)?;
        let mut f2 = self.partial(i, x2)?;
        for _ in 0..80 {
            if (b - a) <= 1e-13 * (1.0 + a.abs()) {
                break;
            }
            if f1 < f2 {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + GOLDEN * (b - a);
                f2 = self.partial(i, x2)?;
            } else {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - GOLDEN * (b - a);
                f1 = self.partial(i, x1)?;
            }
        }
        let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
        for (flag, s) in [(try_lo, lo), (try_hi, hi)] {
            if flag {
                let f = self.partial(i, s)?;
                if f > best.1 {
                    best = (s, f);
                }
            }
        }
        Ok(best)
    }
}

/// Best raw transfinite-diameter configuration for `n` points.
#[derive(Clone, Debug)]
pub struct RawFekete {
    pub log_dn: f64,
    pub objective: f64,
    pub points: Vec<Complex64>,
    pub sweeps: usize,
    pub best_start: usize,
}

/// Raw `ln d_n`: best of `config.starts` seeded multi-starts, or `None` for polar sets.
///
/// Starts run in parallel; the reduction is in start order, so the result
/// depends only on the seed.
pub fn fekete_raw(set: &CompactSet, n: usize, config: &FeketeConfig) -> Result<Option<RawFekete>> {
    let pieces = curves_of(set)?;
    if pieces.is_empty() {
        return Ok(None);
    }
    if n < 2 {
        return Err(Error::param("n", "need n >= 2"));
    }
    let (curves, caps): (Vec<Curve>, Vec<LogCapacity>) = pieces.into_iter().unzip();
    let alloc = allocate(&caps, set_diameter(&curves), n)?;
    let curve_of: Vec<usize> = alloc
        .iter()
        .enumerate()
        .flat_map(|(c, &k)| std::iter::repeat_n(c, k))
        .collect();

    let runs: Vec<Result<(f64, Vec<f64>, usize)>> = (0..config.starts.max(1))
        .into_par_iter()
        .map(|start| {
            let stream = config.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(start as u64);
            let mut rng = ChaCha8Rng::seed_from_u64(stream);
            let s: Vec<f64> = curve_of.iter().map(|_| rng.gen::<f64>()).collect();
            let mut cfg = Configuration {
                curves: &curves,
                curve_of: curve_of.clone(),
                s,
            };
            let mut value = cfg.objective()?;
            let mut sweeps = 0;
            while sweeps < config.max_sweeps {
                cfg.sweep()?;
                sweeps += 1;
                let next = cfg.objective()?;
                let gain = next - value;
                value = next;
                if gain < config.sweep_tolerance {
                    break;
                }
            }
            Ok((value, cfg.s, sweeps))
        })
        .collect();

    let mut best: Option<(usize, f64, Vec<f64>)> = None;
    let mut total_sweeps = 0;
    for (start, run) in runs.into_iter().enumerate() {
        let (value, s, sweeps) = run?;
        total_sweeps += sweeps;
        if best.as_ref().is_none_or(|b| value > b.1) {
            best = Some((start, value, s));
        }
    }
    let (best_start, objective, s) = best.expect("at least one start");
    let points = s.iter().zip(&curve_of).map(|(&si, &c)| curves[c].point(si)).collect();
    Ok(Some(RawFekete {
        log_dn: 2.0 * objective / (n as f64 * (n as f64 - 1.0)),
        objective,
        points,
        sweeps: total_sweeps,
        best_start,
    }))
}

/// `ln cap` estimate from Fekete configurations; polar sets return `-inf` at once.
pub fn fekete_log_capacity(set: &CompactSet, config: &FeketeConfig) -> Result<FeketeEstimate> {
    let n = config.n;
    let Some(full) = fekete_raw(set, n, config)? else {
        return Ok(FeketeEstimate {
            log_capacity: LogCapacity::polar(),
            log_dn: f64::NEG_INFINITY,
            log_dn_half: None,
            n,
            sweeps: 0,
            best_start: 0,
            points: Vec::new(),
        });
    };
    let (log_capacity, log_dn_half, sweeps) = if config.extrapolate && n >= 8 {
        let m = n / 2;
        let half = fekete_raw(set, m, config)?.expect("non-polar");
        let y = |ld: f64, k: usize| ld - (k as f64).ln() / (k as f64 - 1.0);
        let (y1, y2) = (y(half.log_dn, m), y(full.log_dn, n));
        let (u1, u2) = (1.0 / (m as f64 - 1.0), 1.0 / (n as f64 - 1.0));
        let slope = (y1 - y2) / (u1 - u2);
        (y2 - slope * u2, Some(half.log_dn), full.sweeps + half.sweeps)
    } else {
        (full.log_dn, None, full.sweeps)
    };
    Ok(FeketeEstimate {
        log_capacity: LogCapacity::new(log_capacity),
        log_dn: full.log_dn,
        log_dn_half,
        n,
        sweeps,
        best_start: full.best_start,
        points: full.points,
    })
}
