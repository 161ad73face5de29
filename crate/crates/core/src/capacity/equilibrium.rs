//! Discretized equilibrium measure.
//!
//! Each curve is cut into cells of equal parameter length with a node at the
//! cell midpoint. Off-diagonal entries are `ln|z_i - z_j|`; the diagonal is
//! the mean of `ln|x - y|` over the cell, `ln h - 3/2` for a cell of length
//! `h`. Setting the diagonal to zero instead makes a point mass the maximizer
//! for every set of diameter below one, so the self-cell term is kept.
//! The weights maximize `wᵀAw` over the probability simplex.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::domain::CompactSet;
use crate::error::{Error, Result};

use super::curves::{allocate, curves_of, log_distance, set_diameter};
use super::{DiscreteMeasure, EnergyValue};

const MAX_ITERATIONS: usize = 4000;
const KKT_TOL: f64 = 1e-11;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub energy: EnergyValue,
    pub measure: DiscreteMeasure,
    /// `max_i (Aw)_i - wᵀAw`; zero at an exact maximizer.
    pub gap: f64,
    pub iterations: usize,
    /// Declared agreement with `ln cap`: `ln m / m`.
    pub tolerance: f64,
    pub m: usize,
}

/// Maximizes the discrete logarithmic energy on `m` nodes.
///
/// The seed only sets the phase of the nodes on closed curves.
/// Shifting an error by the declared tolerance covers the circle, segment and
/// arc closed forms from `m = 16` on.
pub fn equilibrium_energy(set: &CompactSet, m: usize, seed: u64) -> Result<EquilibriumResult> {
    let pieces = curves_of(set)?;
    if pieces.is_empty() {
        return Err(Error::PolarSet);
    }
    if m < 8 {
        return Err(Error::param("m", format!("need m >= 8 nodes, got {m}")));
    }
    let (curves, caps): (Vec<_>, Vec<_>) = pieces.into_iter().unzip();
    let alloc = allocate(&caps, set_diameter(&curves), m)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(m);
    let mut self_energy = Vec::with_capacity(m);
    for (c, &k) in alloc.iter().enumerate() {
        let phase: f64 = if curves[c].closed() { rng.gen() } else { 0.5 };
        nodes.extend((0..k).map(|i| (c, (i as f64 + phase) / k as f64)));
        let log_h = curves[c].log_length() - (k as f64).ln();
        self_energy.extend(std::iter::repeat_n(log_h - 1.5, k));
    }
    let mut a = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        a[(i, i)] = self_energy[i];
        for j in i + 1..m {
            let v = log_distance(&curves, nodes[i], nodes[j])?;
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
    let points: Vec<Complex64> = nodes.iter().map(|&(c, s)| curves[c].point(s)).collect();
    let (w, iterations) = match maximize_on_simplex(&a) {
        Ok(v) => v,
        Err(Error::NoConvergence { iterations, gap, mut best }) => {
            best.points = points;
            return Err(Error::NoConvergence { iterations, gap, best });
        }
        Err(e) => return Err(e),
    };
    let aw = &a * &w;
    let energy = w.dot(&aw);
    let gap = aw.max() - energy;
    let measure = DiscreteMeasure {
        points,
        weights: w.iter().copied().collect(),
    };
    let mf = m as f64;
    Ok(EquilibriumResult {
        energy: EnergyValue { value: energy },
        measure,
        gap,
        iterations,
        tolerance: mf.ln() / mf,
        m,
    })
}

fn stationary(a: &DMatrix<f64>, support: &[usize]) -> Option<DVector<f64>> {
    let k = support.len();
    let sub = DMatrix::from_fn(k, k, |i, j| a[(support[i], support[j])]);
    let v = sub.lu().solve(&DVector::from_element(k, 1.0))?;
    let s = v.sum();
    (s.abs() > 1e-300 && v.iter().all(|x| x.is_finite())).then(|| v / s)
}

fn embed(m: usize, support: &[usize], ws: &DVector<f64>) -> DVector<f64> {
    let mut w = DVector::zeros(m);
    for (i, &s) in support.iter().enumerate() {
        w[s] = ws[i];
    }
    w
}

/// Primal active-set method for `max wᵀAw` on the simplex, falling back to
/// projected gradient ascent when a stationary solve breaks down.
fn maximize_on_simplex(a: &DMatrix<f64>) -> Result<(DVector<f64>, usize)> {
    let m = a.nrows();
    let mut w = DVector::from_element(m, 1.0 / m as f64);
    let mut support: Vec<usize> = (0..m).collect();
    let scale = a.amax().max(1.0);
    for it in 1..=MAX_ITERATIONS {
        let Some(ws) = stationary(a, &support) else {
            return projected_gradient(a, w, it);
        };
        let target = embed(m, &support, &ws);
        if ws.iter().all(|&x| x >= 0.0) {
            w = target;
            let aw = a * &w;
            let level = w.dot(&aw);
            let (idx, best) = aw
                .iter()
                .enumerate()
                .filter(|(i, _)| !support.contains(i))
                .fold((usize::MAX, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
            if idx == usize::MAX || best - level <= KKT_TOL * scale {
                return Ok((w, it));
            }
            support.push(idx);
            support.sort_unstable();
            continue;
        }
        // step toward the stationary point until a weight hits zero
        let mut step = 1.0;
        let mut blocking = None;
        for &s in &support {
            let d = target[s] - w[s];
            if d < 0.0 {
                let lim = -w[s] / d;
                if lim < step {
                    step = lim;
                    blocking = Some(s);
                }
            }
        }
        w += (target - &w) * step;
        if let Some(b) = blocking {
            w[b] = 0.0;
            support.retain(|&s| s != b);
        }
        support.retain(|&s| w[s] > 0.0);
        let total = w.sum();
        w /= total;
        if support.is_empty() {
            return projected_gradient(a, DVector::from_element(m, 1.0 / m as f64), it);
        }
    }
    projected_gradient(a, w, MAX_ITERATIONS)
}

fn project_to_simplex(v: &DVector<f64>) -> DVector<f64> {
    let mut u: Vec<f64> = v.iter().copied().collect();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut acc = 0.0;
    let mut theta = 0.0;
    for (i, &x) in u.iter().enumerate() {
        acc += x;
        let t = (acc - 1.0) / (i as f64 + 1.0);
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.map(|x| (x - theta).max(0.0))
}

fn projected_gradient(a: &DMatrix<f64>, mut w: DVector<f64>, used: usize) -> Result<(DVector<f64>, usize)> {
    let lip = 2.0 * a.norm();
    let step = 1.0 / lip.max(1e-12);
    let scale = a.amax().max(1.0);
    let mut gap = f64::INFINITY;
    for it in 0..MAX_ITERATIONS * 10 {
        let aw = a * &w;
        gap = aw.max() - w.dot(&aw);
        if gap <= 1e-9 * scale {
            return Ok((w, used + it));
        }
        w = project_to_simplex(&(&w + aw * (2.0 * step)));
    }
    Err(Error::NoConvergence {
        iterations: used + MAX_ITERATIONS * 10,
        gap,
        best: Box::new(DiscreteMeasure {
            points: Vec::new(),
            weights: w.iter().copied().collect(),
        }),
    })
}
