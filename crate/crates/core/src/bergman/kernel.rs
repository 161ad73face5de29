use nalgebra::{Cholesky, DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{gram_matrix, BasisSpec, PolarQuadrature};

/// Largest accepted condition number of the (diagonally scaled) Gram matrix.
pub const CONDITION_LIMIT: f64 = 1e14;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelEstimate {
    pub z: Complex64,
    /// `K_D(z)`.
    pub kernel: f64,
    /// `β_D(z) = I_D(z, 1) / K_D(z)`.
    pub metric: f64,
    /// `I_D(z, 1)`.
    pub derivative_functional: f64,
    pub basis_size: usize,
    pub quad_points: usize,
    /// Relative change of `K` from dropping the last basis function.
    pub error_proxy: f64,
    pub condition: f64,
}

/// Factorized Gram matrix, reusable across evaluation points.
#[derive(Clone, Debug)]
pub struct BergmanEngine {
    basis: BasisSpec,
    degrees: Vec<i32>,
    outer_radius: f64,
    /// `1/sqrt(G_ii)`; the factorization is of `S G S`.
    scale: Vec<f64>,
    lower: DMatrix<Complex64>,
    condition: f64,
    quad_points: usize,
}

impl BergmanEngine {
    pub fn new(basis: &BasisSpec, quad: &PolarQuadrature) -> Result<Self> {
        let gram = gram_matrix(basis, quad)?;
        let n = gram.degrees.len();
        let scale: Vec<f64> = (0..n).map(|i| 1.0 / gram.matrix[(i, i)].re.sqrt()).collect();
        // Jacobi scaling leaves K and I unchanged and only helps the factorization
        let scaled = DMatrix::from_fn(n, n, |i, j| gram.matrix[(i, j)] * (scale[i] * scale[j]));
        let eig = SymmetricEigen::new(scaled.clone()).eigenvalues;
        let (lo, hi) = (eig.min(), eig.max());
        let condition = if lo > 0.0 { hi / lo } else { f64::INFINITY };
        if !(condition <= CONDITION_LIMIT) {
            return Err(Error::IllConditioned {
                condition,
                limit: CONDITION_LIMIT,
            });
        }
        let chol = Cholesky::new(scaled).ok_or(Error::IllConditioned {
            condition: f64::INFINITY,
            limit: CONDITION_LIMIT,
        })?;
        Ok(BergmanEngine {
            basis: basis.clone(),
            degrees: gram.degrees,
            outer_radius: gram.outer_radius,
            scale,
            lower: chol.l(),
            condition,
            quad_points: gram.quad_points,
        })
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    /// Scaled basis values and derivatives at `z`.
    fn evaluations(&self, z: Complex64) -> (DVector<Complex64>, DVector<Complex64>) {
        let w = z / self.outer_radius;
        let n = self.degrees.len();
        let mut u = DVector::zeros(n);
        let mut d = DVector::zeros(n);
        for (i, &deg) in self.degrees.iter().enumerate() {
            u[i] = w.powi(deg) * self.scale[i];
            if deg != 0 {
                d[i] = w.powi(deg - 1) * (deg as f64 / self.outer_radius * self.scale[i]);
            }
        }
        (u, d)
    }

    pub fn evaluate(&self, z: Complex64) -> Result<KernelEstimate> {
        if !self.basis.domain.contains(z) {
            return Err(Error::OutsideDomain {
                re: z.re,
                im: z.im,
                reason: format!("not in the open domain `{}`", self.basis.domain.label),
            });
        }
        let (u, d) = self.evaluations(z);
        let solve = |v: &DVector<Complex64>| {
            self.lower
                .solve_lower_triangular(v)
                .expect("Cholesky factor has a positive diagonal")
        };
        let y = solve(&u);
        let w = solve(&d);
        let kernel = y.norm_squared();
        // deflation: remove the component of w along y, the image of the
        // evaluation functional, leaving the maximum over {f(z) = 0}
        let derivative_functional = (w.norm_squared() - y.dotc(&w).norm_sqr() / kernel).max(0.0);
        let last = y[y.len() - 1].norm_sqr();
        Ok(KernelEstimate {
            z,
            kernel,
            metric: derivative_functional / kernel,
            derivative_functional,
            basis_size: self.degrees.len(),
            quad_points: self.quad_points,
            error_proxy: last / kernel,
            condition: self.condition,
        })
    }
}

pub fn kernel_at(basis: &BasisSpec, quad: &PolarQuadrature, z: Complex64) -> Result<KernelEstimate> {
    BergmanEngine::new(basis, quad)?.evaluate(z)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathLength {
    pub length: f64,
    pub samples: usize,
    /// The same rule on half as many intervals.
    pub half_samples_length: f64,
    pub refinement_change: f64,
    pub euclidean_length: f64,
}

/// Point at arclength fraction `s` of a polyline.
fn along(path: &[Complex64], cumulative: &[f64], s: f64) -> Complex64 {
    let total = *cumulative.last().expect("nonempty");
    let target = s * total;
    let i = cumulative.partition_point(|&c| c < target).clamp(1, path.len() - 1);
    let seg = cumulative[i] - cumulative[i - 1];
    if seg == 0.0 {
        return path[i];
    }
    let f = ((target - cumulative[i - 1]) / seg).clamp(0.0, 1.0);
    path[i - 1] + (path[i] - path[i - 1]) * f
}

fn trapezoid(engine: &BergmanEngine, path: &[Complex64], cumulative: &[f64], intervals: usize) -> Result<f64> {
    let total = *cumulative.last().expect("nonempty");
    let h = total / intervals as f64;
    let mut sum = 0.0;
    for i in 0..=intervals {
        let z = along(path, cumulative, i as f64 / intervals as f64);
        let f = engine.evaluate(z)?.metric.sqrt();
        sum += if i == 0 || i == intervals { 0.5 * f } else { f };
    }
    Ok(sum * h)
}

/// Bergman length `∫ sqrt(β) ds` of a polyline by the composite trapezoid
/// rule on `samples` equal arclength intervals.
pub fn metric_path_length(
    basis: &BasisSpec,
    quad: &PolarQuadrature,
    path: &[Complex64],
    samples: usize,
) -> Result<PathLength> {
    if path.is_empty() {
        return Err(Error::param("path", "need at least one vertex"));
    }
    if samples < 2 {
        return Err(Error::param("samples", format!("need at least 2 intervals, got {samples}")));
    }
    let mut cumulative = vec![0.0];
    for w in path.windows(2) {
        cumulative.push(cumulative.last().expect("nonempty") + (w[1] - w[0]).norm());
    }
    let euclidean_length = *cumulative.last().expect("nonempty");
    let engine = BergmanEngine::new(basis, quad)?;
    if euclidean_length == 0.0 {
        engine.evaluate(path[0])?;
        return Ok(PathLength {
            length: 0.0,
            samples,
            half_samples_length: 0.0,
            refinement_change: 0.0,
            euclidean_length,
        });
    }
    let length = trapezoid(&engine, path, &cumulative, samples)?;
    let half_samples_length = trapezoid(&engine, path, &cumulative, samples / 2)?;
    Ok(PathLength {
        length,
        samples,
        half_samples_length,
        refinement_change: length - half_samples_length,
        euclidean_length,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::DomainSpec;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn disc(deg: u32) -> BasisSpec {
        BasisSpec::monomials(DomainSpec::unit_disc(), deg)
    }

    #[test]
    fn disc_origin() {
        let k = kernel_at(&disc(30), &PolarQuadrature::default(), 0.0.into()).unwrap();
        assert_relative_eq!(k.kernel, 1.0 / PI, max_relative = 1e-12);
        assert_relative_eq!(k.metric, 2.0, max_relative = 1e-10);
    }

    #[test]
    fn disc_off_center() {
        let k = kernel_at(&disc(30), &PolarQuadrature::default(), 0.5.into()).unwrap();
        // 1 / (π (1 - |z|²)²) with (1 - 0.25)² = 0.5625
        assert_relative_eq!(k.kernel, 1.0 / (PI * 0.5625), max_relative = 1e-6);
        assert!(k.error_proxy < 1e-6);
    }

    #[test]
    fn point_outside_rejected() {
        let r = kernel_at(&disc(10), &PolarQuadrature::default(), 1.2.into());
        assert!(matches!(r, Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn zero_length_path() {
        let p = metric_path_length(&disc(10), &PolarQuadrature::default(), &[0.3.into(), 0.3.into()], 8).unwrap();
        assert_eq!(p.length, 0.0);
    }
}
