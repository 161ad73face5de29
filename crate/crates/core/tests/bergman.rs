use std::f64::consts::PI;

use num_complex::Complex64;

use bergman_qc::bergman::{gram_matrix, kernel_at, metric_path_length, BasisSpec, BergmanEngine, PolarQuadrature};
use bergman_qc::domain::{DomainSpec, Obstacle};
use bergman_qc::Error;

/// Truncated diagonal kernel of `rho < |z| < 1` from its orthogonal basis `z^n`.
fn annulus_kernel(rho: f64, lo: i32, hi: i32, z: Complex64) -> f64 {
    let s = z.norm_sqr();
    (lo..=hi)
        .map(|n| {
            let norm2 = if n == -1 {
                2.0 * PI * (1.0 / rho).ln()
            } else {
                PI * (1.0 - rho.powi(2 * n + 2)) / (n + 1) as f64
            };
            s.powi(n) / norm2
        })
        .sum()
}

#[test]
fn annulus_matches_orthogonal_series() {
    let rho = 0.4;
    let basis = BasisSpec::laurent(DomainSpec::annulus(rho).unwrap(), -12, 24);
    let engine = BergmanEngine::new(&basis, &PolarQuadrature::default()).unwrap();
    for (m, a) in [(0.45, 0.0), (0.6, 1.0), (0.8, -2.0), (0.95, 3.0)] {
        let z = Complex64::from_polar(m, a);
        let got = engine.evaluate(z).unwrap().kernel;
        let want = annulus_kernel(rho, -12, 24, z);
        assert!((got - want).abs() <= 1e-10 * want, "|z| = {m}: {got} vs {want}");
    }
}

#[test]
fn gram_is_hermitian_positive() {
    let basis = BasisSpec::laurent(DomainSpec::annulus(0.3).unwrap(), -5, 9);
    let g = gram_matrix(&basis, &PolarQuadrature::default()).unwrap();
    let m = &g.matrix;
    assert_eq!((m - m.adjoint()).norm(), 0.0);
    assert!(m.clone().cholesky().is_some());
}

#[test]
fn rotation_invariance() {
    let basis = BasisSpec::monomials(DomainSpec::unit_disc(), 25);
    let engine = BergmanEngine::new(&basis, &PolarQuadrature::default()).unwrap();
    let base = engine.evaluate(Complex64::new(0.7, 0.0)).unwrap();
    for a in [0.3, 1.7, -2.9] {
        let e = engine.evaluate(Complex64::from_polar(0.7, a)).unwrap();
        assert!((e.kernel - base.kernel).abs() <= 1e-12 * base.kernel);
        assert!((e.metric - base.metric).abs() <= 1e-10 * base.metric);
    }
}

#[test]
fn disc_metric_closed_form() {
    // beta = 2 / (1 - |z|^2)^2 on the unit disc
    let basis = BasisSpec::monomials(DomainSpec::unit_disc(), 80);
    let quad = PolarQuadrature::for_degree(80);
    for m in [0.0, 0.2, 0.5] {
        let e = kernel_at(&basis, &quad, Complex64::new(m, 0.0)).unwrap();
        let want = 2.0 / (1.0 - m * m).powi(2);
        assert!((e.metric - want).abs() <= 1e-8 * want, "{m}: {} vs {want}", e.metric);
        assert!(e.error_proxy < 1e-12);
    }
}

#[test]
fn disc_path_length_matches_hyperbolic_distance() {
    // sqrt(beta) |dz| integrates to sqrt(2) artanh(x)
    let basis = BasisSpec::monomials(DomainSpec::unit_disc(), 120);
    let quad = PolarQuadrature::for_degree(120);
    let path = [Complex64::new(0.0, 0.0), Complex64::new(0.7, 0.0)];
    let p = metric_path_length(&basis, &quad, &path, 400).unwrap();
    let want = 2f64.sqrt() * 0.7f64.atanh();
    assert!((p.length - want).abs() < 1e-4, "{} vs {want}", p.length);
    assert!((p.euclidean_length - 0.7).abs() < 1e-15);
    assert!(p.refinement_change.abs() < 1e-4);
}

#[test]
fn annulus_path_grows_toward_inner_circle() {
    let rho = 0.3;
    let basis = BasisSpec::laurent(DomainSpec::annulus(rho).unwrap(), -60, 60);
    let quad = PolarQuadrature::for_degree(60);
    let mut last = 0.0;
    for end in [0.4, 0.35, 0.32, 0.31, 0.305] {
        let path = [Complex64::new(0.6, 0.0), Complex64::new(end, 0.0)];
        let p = metric_path_length(&basis, &quad, &path, 400).unwrap();
        assert!(p.length > last, "endpoint {end}: {} <= {last}", p.length);
        last = p.length;
    }
}

#[test]
fn point_obstacle_leaves_kernel_unchanged() {
    let quad = PolarQuadrature::default();
    let plain = BasisSpec::monomials(DomainSpec::unit_disc(), 20);
    let pricked = DomainSpec::unit_disc().with_obstacle(Obstacle::point(Complex64::new(0.0, 0.0))).unwrap();
    let pricked = BasisSpec::monomials(pricked, 20);
    let z = Complex64::new(0.1, 0.2);
    let a = kernel_at(&plain, &quad, z).unwrap();
    let b = kernel_at(&pricked, &quad, z).unwrap();
    assert_eq!(a.kernel, b.kernel);
    assert_eq!(a.metric, b.metric);
}

#[test]
fn rejects_what_it_cannot_do() {
    let quad = PolarQuadrature::default();
    let disc = BasisSpec::monomials(DomainSpec::unit_disc(), 10);
    assert!(matches!(kernel_at(&disc, &quad, Complex64::new(1.0, 0.0)), Err(Error::OutsideDomain { .. })));
    let annulus = BasisSpec::laurent(DomainSpec::annulus(0.5).unwrap(), -3, 3);
    assert!(matches!(kernel_at(&annulus, &quad, Complex64::new(0.2, 0.0)), Err(Error::OutsideDomain { .. })));
    // rotation invariant domains give a diagonal Gram matrix, so Jacobi
    // scaling keeps even a wide basis on a thin annulus well conditioned
    let thin = BasisSpec::laurent(DomainSpec::annulus(0.9).unwrap(), -150, 150);
    let engine = BergmanEngine::new(&thin, &PolarQuadrature::for_degree(150)).unwrap();
    assert!(engine.condition() < 1.0 + 1e-8, "{}", engine.condition());
}
