//! Curve parameterizations shared by the Fekete and equilibrium solvers.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;

use crate::domain::{CompactSet, Piece};
use crate::error::{Error, Result};

use super::{piece_log_capacity_bounds, LogCapacity};

/// Distances below this are treated as underflowed.
pub(super) const MIN_LINEAR_DISTANCE: f64 = 1e-290;

#[derive(Clone, Debug)]
pub(super) enum Curve {
    /// `radius * e^{i(start + s * span)}`, `s in [0, 1]`.
    Arc {
        radius: f64,
        log_radius: f64,
        start: f64,
        half_width: f64,
        log_half_width: f64,
        closed: bool,
    },
    Segment {
        a: Complex64,
        b: Complex64,
        log_len: f64,
    },
}

impl Curve {
    pub(super) fn closed(&self) -> bool {
        matches!(self, Curve::Arc { closed: true, .. })
    }

    pub(super) fn point(&self, s: f64) -> Complex64 {
        match self {
            Curve::Arc {
                radius,
                start,
                half_width,
                ..
            } => Complex64::from_polar(*radius, start + s * 2.0 * half_width),
            Curve::Segment { a, b, .. } => a + (b - a) * s,
        }
    }

    /// `ln |p(s1) - p(s2)|` from the chord formula.
    pub(super) fn log_chord(&self, s1: f64, s2: f64) -> f64 {
        let ds = (s1 - s2).abs();
        match self {
            Curve::Arc {
                log_radius,
                half_width,
                log_half_width,
                closed,
                ..
            } => {
                let base = LN_2 + log_radius;
                if *closed {
                    base + (PI * ds).sin().abs().ln()
                } else if *half_width > 0.0 && half_width * ds > 1e-8 {
                    base + (half_width * ds).sin().ln()
                } else {
                    base + log_half_width + ds.ln()
                }
            }
            Curve::Segment { log_len, .. } => log_len + ds.ln(),
        }
    }

    /// Natural log of the curve's length.
    pub(super) fn log_length(&self) -> f64 {
        match self {
            Curve::Arc {
                log_radius,
                log_half_width,
                ..
            } => LN_2 + log_radius + log_half_width,
            Curve::Segment { log_len, .. } => *log_len,
        }
    }
}

pub(super) fn curves_of(set: &CompactSet) -> Result<Vec<(Curve, LogCapacity)>> {
    let mut out = Vec::new();
    for piece in &set.pieces {
        let cap = piece_log_capacity_bounds(piece).1;
        let curve = match piece {
            Piece::Point { .. } => continue,
            Piece::Arc(a) if a.degenerate => continue,
            Piece::Arc(a) => {
                let closed = a.half_width >= PI;
                Curve::Arc {
                    radius: a.radius,
                    log_radius: a.log_radius,
                    start: a.center_angle - a.half_width.min(PI),
                    half_width: a.half_width.min(PI),
                    log_half_width: a.log_half_width(),
                    closed,
                }
            }
            // the capacity of a disc is carried by its boundary circle
            Piece::Disc(d) => Curve::Arc {
                radius: d.radius,
                log_radius: d.radius.ln(),
                start: 0.0,
                half_width: PI,
                log_half_width: PI.ln(),
                closed: true,
            },
            Piece::Segment(s) => {
                let len = s.length();
                if len == 0.0 {
                    continue;
                }
                Curve::Segment {
                    a: s.a,
                    b: s.b,
                    log_len: len.ln(),
                }
            }
            Piece::Lens { .. } => {
                return Err(Error::UnsupportedSet("clipped discs (lenses) have no curve parameterization".into()))
            }
        };
        out.push((curve, cap));
    }
    Ok(out)
}

/// Points per curve, weighted by each piece's reciprocal-log share.
pub(super) fn allocate(caps: &[LogCapacity], diameter: f64, n: usize) -> Result<Vec<usize>> {
    let m = caps.len();
    if n < 2 * m {
        return Err(Error::param("n", format!("need at least 2 points per curve ({m} curves), got {n}")));
    }
    if m == 1 {
        return Ok(vec![n]);
    }
    let ld = diameter.max(f64::MIN_POSITIVE).ln();
    let weights: Vec<f64> = caps
        .iter()
        .map(|c| 1.0 / (ld - c.log_value()).max(1e-3))
        .collect();
    let total: f64 = weights.iter().sum();
    let spare = n - 2 * m;
    let raw: Vec<f64> = weights.iter().map(|w| w / total * spare as f64).collect();
    let mut alloc: Vec<usize> = raw.iter().map(|x| 2 + x.floor() as usize).collect();
    let mut rest = n - alloc.iter().sum::<usize>();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| (raw[b] - raw[b].floor()).total_cmp(&(raw[a] - raw[a].floor())).then(a.cmp(&b)));
    for &i in order.iter().cycle() {
        if rest == 0 {
            break;
        }
        alloc[i] += 1;
        rest -= 1;
    }
    Ok(alloc)
}

pub(super) fn set_diameter(curves: &[Curve]) -> f64 {
    let samples: Vec<Complex64> = curves
        .iter()
        .flat_map(|c| (0..=8).map(move |k| c.point(k as f64 / 8.0)))
        .collect();
    let mut d: f64 = 0.0;
    for a in &samples {
        for b in &samples {
            d = d.max((a - b).norm());
        }
    }
    d
}

/// `ln|z_i - z_j|` for points given as (curve, parameter).
pub(super) fn log_distance(curves: &[Curve], (ci, si): (usize, f64), (cj, sj): (usize, f64)) -> Result<f64> {
    if ci == cj {
        return Ok(curves[ci].log_chord(si, sj));
    }
    let d = (curves[ci].point(si) - curves[cj].point(sj)).norm();
    if d < MIN_LINEAR_DISTANCE {
        return Err(Error::DistanceUnderflow(format!("distance {d:e} between curves {ci} and {cj}")));
    }
    Ok(d.ln())
}
