//! Bergman kernel and metric on rotationally symmetric validation domains
//! (discs, annuli, and their variants with zero-area obstacles).
//!
//! The Gram matrix of `b_d(z) = (z/R)^d` is assembled by tensor polar
//! quadrature: Gauss–Legendre in `r` times the uniform rule in `θ`. Both
//! factors separate, so entry `(j, k)` is `Σ_q W_q (r_q/R)^{d_j+d_k} S(d_k - d_j)`
//! with `S(m)` the angular rule applied to `e^{imθ}`.

mod kernel;

use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{DomainSpec, Obstacle, GEOM_TOL};
use crate::error::{Error, Result};

pub use kernel::{kernel_at, metric_path_length, BergmanEngine, KernelEstimate, PathLength, CONDITION_LIMIT};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BasisKind {
    Monomials { max_degree: u32 },
    Laurent { min_degree: i32, max_degree: i32 },
}

impl BasisKind {
    pub fn degrees(&self) -> Vec<i32> {
        match *self {
            BasisKind::Monomials { max_degree } => (0..=max_degree as i32).collect(),
            BasisKind::Laurent { min_degree, max_degree } => (min_degree..=max_degree).collect(),
        }
    }

    pub fn max_abs_degree(&self) -> u32 {
        self.degrees().iter().map(|d| d.unsigned_abs()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub kind: BasisKind,
    pub domain: DomainSpec,
}

impl BasisSpec {
    pub fn monomials(domain: DomainSpec, max_degree: u32) -> Self {
        BasisSpec {
            kind: BasisKind::Monomials { max_degree },
            domain,
        }
    }

    pub fn laurent(domain: DomainSpec, min_degree: i32, max_degree: i32) -> Self {
        BasisSpec {
            kind: BasisKind::Laurent { min_degree, max_degree },
            domain,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolarQuadrature {
    /// Gauss–Legendre nodes per radial panel.
    pub radial_order: usize,
    pub angular_points: usize,
}

impl Default for PolarQuadrature {
    fn default() -> Self {
        PolarQuadrature {
            radial_order: 64,
            angular_points: 512,
        }
    }
}

impl PolarQuadrature {
    /// Default radial order with enough angular points for `max_abs_degree`.
    pub fn for_degree(max_abs_degree: u32) -> Self {
        let need = 4 * max_abs_degree as usize + 8;
        PolarQuadrature {
            radial_order: 64,
            angular_points: need.max(512).next_power_of_two(),
        }
    }
}

/// The integration region `inner < |z| < outer` of a supported domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Annulus {
    pub inner: f64,
    pub outer: f64,
}

/// Positive-area obstacles must be discs centered at the origin; everything
/// else has zero area and does not affect the Gram matrix.
pub fn integration_region(domain: &DomainSpec) -> Result<Annulus> {
    let mut inner: f64 = 0.0;
    for o in &domain.obstacles {
        if let Obstacle::Disc(d) = o {
            if d.center.norm() > GEOM_TOL {
                return Err(Error::UnsupportedSet(format!(
                    "disc obstacle centered at {} breaks rotational symmetry; no basis implemented",
                    d.center
                )));
            }
            inner = inner.max(d.radius);
        }
    }
    Ok(Annulus {
        inner,
        outer: domain.outer_radius,
    })
}

#[derive(Clone, Debug)]
pub struct GramMatrix {
    /// `m[(i, j)] = ∫ b_i conj(b_j) dA`, Hermitian positive definite.
    pub matrix: DMatrix<Complex64>,
    pub degrees: Vec<i32>,
    pub outer_radius: f64,
    pub quad_points: usize,
}

/// Radial nodes and weights (Jacobian `r` included) on `[inner, outer]`.
/// Only area obstacles split panels, so zero-area obstacles leave the rule
/// bit-for-bit unchanged.
fn radial_rule(region: Annulus, order: usize, max_abs_degree: u32) -> Vec<(f64, f64)> {
    let gl = GaussLegendre::new(NonZeroUsize::new(order.max(1)).expect("nonzero"));
    let base = gl.as_node_weight_pairs();
    let mut edges = Vec::new();
    if region.inner > 0.0 {
        // geometric panels with ratio at most 2 keep r^{-k} smooth per panel
        let count = ((region.outer / region.inner).log2().ceil() as usize).max(1);
        let q = (region.outer / region.inner).powf(1.0 / count as f64);
        edges.extend((0..=count).map(|i| region.inner * q.powi(i as i32)));
        *edges.last_mut().expect("nonempty") = region.outer;
    } else {
        edges.push(0.0);
        edges.push(region.outer);
    }
    // more panels for high degrees, which concentrate near the outer edge
    let extra = (2 * max_abs_degree as usize + 2).div_ceil(order.max(1));
    let mut refined = vec![edges[0]];
    for w in edges.windows(2) {
        for i in 1..=extra {
            refined.push(w[0] + (w[1] - w[0]) * i as f64 / extra as f64);
        }
    }
    let mut out = Vec::with_capacity((refined.len() - 1) * base.len());
    for w in refined.windows(2) {
        let (mid, half) = (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]));
        for &(x, wt) in base {
            let r = mid + half * x;
            out.push((r, wt * half * r));
        }
    }
    out
}

/// `S(m) = (2π/M) Σ_q e^{i m θ_q}`; `2π` when `M | m`, zero up to rounding otherwise.
fn angular_sums(max_diff: usize, m_points: usize) -> Vec<Complex64> {
    let w = 2.0 * PI / m_points as f64;
    (0..=max_diff)
        .map(|m| {
            (0..m_points)
                .map(|q| Complex64::from_polar(w, m as f64 * q as f64 * w))
                .sum()
        })
        .collect()
}

pub fn gram_matrix(basis: &BasisSpec, quad: &PolarQuadrature) -> Result<GramMatrix> {
    let region = integration_region(&basis.domain)?;
    let degrees = basis.kind.degrees();
    if degrees.is_empty() {
        return Err(Error::param("basis", "empty basis"));
    }
    if degrees[0] < 0 && region.inner <= 0.0 {
        return Err(Error::param(
            "basis",
            "negative Laurent degrees need the origin excluded by a disc of positive radius",
        ));
    }
    let max_abs = basis.kind.max_abs_degree();
    let need = 4 * max_abs as usize + 8;
    if quad.angular_points < need {
        return Err(Error::QuadratureTooCoarse(format!(
            "{} angular points for degree {}; need at least {need}",
            quad.angular_points, max_abs
        )));
    }
    let radial = radial_rule(region, quad.radial_order, max_abs);
    let big_r = region.outer;
    let (dmin, dmax) = (degrees[0], *degrees.last().expect("nonempty"));
    // radial moments indexed by s = d_j + d_k
    let moments: Vec<f64> = (2 * dmin..=2 * dmax)
        .into_par_iter()
        .map(|s| radial.iter().map(|&(r, w)| w * (r / big_r).powi(s)).sum())
        .collect();
    let ang = angular_sums((dmax - dmin) as usize, quad.angular_points);
    let n = degrees.len();
    let mut matrix = DMatrix::<Complex64>::zeros(n, n);
    for j in 0..n {
        for k in j..n {
            let s = (degrees[j] + degrees[k] - 2 * dmin) as usize;
            let v = ang[(degrees[k] - degrees[j]) as usize] * moments[s];
            matrix[(k, j)] = v;
            matrix[(j, k)] = v.conj();
        }
    }
    Ok(GramMatrix {
        matrix,
        degrees,
        outer_radius: big_r,
        quad_points: radial.len() * quad.angular_points,
    })
}
