//! The radial stretch `φ_α(z) = z^α z̄^{α-1}` and the parameter transport it induces.
//!
//! In polar form `φ_α(ρ e^{iθ}) = ρ^{2α-1} e^{iθ}`, which is how it is
//! evaluated. Writing `φ = z (z z̄)^{α-1}` gives the Wirtinger derivatives
//! `f_z = α |z|^{2α-2}` and `f_z̄ = (α-1) z² |z|^{2α-4}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{ArcObstacle, Obstacle, ParamRT};
use crate::error::{Error, Result};
use crate::exact::{cmp_to_power, Comparison, Scalar};
use crate::wiener::{classify_domain, Classification, DomainClass};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QCParams {
    pub alpha: Scalar,
}

impl QCParams {
    pub fn new(alpha: Scalar) -> Result<Self> {
        if !alpha.cmp_value(&Scalar::ratio(1, 2)).ordering.is_gt() {
            return Err(Error::param("alpha", format!("need alpha > 1/2, got {alpha}")));
        }
        if !alpha.value().is_finite() {
            return Err(Error::param("alpha", "not finite"));
        }
        Ok(QCParams { alpha })
    }

    pub fn from_f64(alpha: f64) -> Result<Self> {
        Self::new(Scalar::from_f64(alpha))
    }

    /// `2α - 1`, exact when α is.
    pub fn exponent(&self) -> Scalar {
        self.alpha.mul(&Scalar::integer(2)).sub(&Scalar::integer(1))
    }

    /// The inverse map's parameter `α'` with `(2α-1)(2α'-1) = 1`.
    pub fn inverse(&self) -> QCParams {
        let e = Scalar::integer(1).div(&self.exponent());
        QCParams {
            alpha: e.add(&Scalar::integer(1)).div(&Scalar::integer(2)),
        }
    }
}

pub fn apply(alpha: &QCParams, z: Complex64) -> Complex64 {
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    let (rho, theta) = z.to_polar();
    Complex64::from_polar((alpha.exponent().value() * rho.ln()).exp(), theta)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Beltrami {
    pub f_z: Complex64,
    pub f_zbar: Complex64,
    /// `|f_z̄| / |f_z| = |α - 1| / α`.
    pub ratio: f64,
}

pub fn beltrami(alpha: &QCParams, z: Complex64) -> Result<Beltrami> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::QcMap("Wirtinger derivatives are not defined at z = 0".into()));
    }
    let a = alpha.alpha.value();
    let log_mod = z.norm().ln();
    let f_z = Complex64::from(a * ((2.0 * a - 2.0) * log_mod).exp());
    let f_zbar = z * z * ((a - 1.0) * ((2.0 * a - 4.0) * log_mod).exp());
    Ok(Beltrami {
        f_z,
        f_zbar,
        ratio: f_zbar.norm() / f_z.norm(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QcConstant {
    /// Smallest `L` with `|f_z̄| <= (L-1)/(L+1) |f_z|`.
    pub l: Scalar,
    /// `(L-1)/(L+1) = |α-1|/α`.
    pub k: Scalar,
}

/// `L = 1/(2α-1)` for `α <= 1` and `2α-1` for `α >= 1`.
pub fn qc_constant(alpha: &QCParams) -> QcConstant {
    let e = alpha.exponent();
    let one = Scalar::integer(1);
    let l = if e.cmp_value(&one).ordering.is_lt() { one.div(&e) } else { e };
    let k = alpha.alpha.sub(&one).abs().div(&alpha.alpha);
    QcConstant { l, k }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Transport {
    pub source: ParamRT,
    pub image: ParamRT,
    pub exponent: Scalar,
    /// The image radius parameter is outside `(0, 1/4)`.
    pub out_of_stated_range: bool,
}

/// `(r, t) ↦ (r^{2α-1}, t)`.
pub fn transport_params(params: &ParamRT, alpha: &QCParams) -> Result<Transport> {
    let exponent = alpha.exponent();
    let r_image = params.r.pow(&exponent);
    if r_image.cmp_value(&Scalar::integer(1)).is_ge() {
        return Err(Error::QcMap(format!(
            "image radius parameter {r_image} = {}^({exponent}) is not below 1",
            params.r
        )));
    }
    let image = ParamRT::new(r_image, params.t.clone())?;
    Ok(Transport {
        source: params.clone(),
        out_of_stated_range: !image.in_stated_range(),
        image,
        exponent,
    })
}

/// Image of a circular arc about the origin: same angles, radius raised to `2α-1`.
pub fn apply_to_arc(alpha: &QCParams, arc: &ArcObstacle) -> ArcObstacle {
    let mut out = ArcObstacle::from_logs(
        arc.log_radius * alpha.exponent().value(),
        arc.center_angle,
        arc.log_sin_quarter,
    );
    out.degenerate = arc.degenerate;
    out
}

pub fn apply_to_obstacle(alpha: &QCParams, o: &Obstacle) -> Result<Obstacle> {
    match o {
        Obstacle::Arc(a) => Ok(Obstacle::Arc(apply_to_arc(alpha, a))),
        Obstacle::Point { at } => Ok(Obstacle::point(apply(alpha, *at))),
        Obstacle::Disc(d) if d.center == Complex64::new(0.0, 0.0) => {
            let mut d = *d;
            d.radius = apply(alpha, d.radius.into()).re;
            Ok(Obstacle::Disc(d))
        }
        _ => Err(Error::QcMap("only arcs and discs about the origin and points are transported".into())),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleChain {
    pub source: Classification,
    pub l: Scalar,
    pub beltrami_ratio: Scalar,
    pub transport: Transport,
    pub image: Classification,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub alpha: Scalar,
    pub inequalities: Vec<String>,
    /// `r^2 <= r^{4(2α-1)}` for `r` in `(0, 1)`, i.e. `4(2α-1) <= 2`.
    pub region_test: Comparison,
    pub candidates_checked: usize,
    pub chains: Vec<CounterexampleChain>,
}

fn inequalities(alpha: &Scalar) -> Vec<String> {
    vec![
        "0 < r < 1, 0 < t < 1/2".into(),
        "t >= r^2 (source exhaustive, hence complete)".into(),
        format!("t <= r^(4(2*{alpha}-1)) (image not complete)"),
    ]
}

/// Candidates `r = 1/m`, `t = 2^{-j}`, with the pair `(1/8, 1/32)` tried first.
fn candidates() -> Vec<ParamRT> {
    let mut out = vec![ParamRT::ratio(1, 8, 1, 32).expect("valid")];
    for m in 2..=16 {
        for j in 2..=16 {
            let p = ParamRT::ratio(1, m, 1, 1 << j).expect("valid");
            if p != out[0] {
                out.push(p);
            }
        }
    }
    out
}

/// Searches `t >= r^2`, `t <= r^{4(2α-1)}` for pairs whose classification
/// flips from complete to not complete under `φ_α`.
pub fn counterexample_search(alpha: &QCParams, max_pairs: usize) -> Result<CounterexampleReport> {
    let e = alpha.exponent();
    // the region is nonempty iff 4(2α-1) <= 2, as r^a <= r^b for a >= b
    let region_test = Scalar::integer(2).cmp_value(&e.mul(&Scalar::integer(4)));
    let ineq = inequalities(&alpha.alpha);
    if !region_test.is_ge() {
        return Err(Error::EmptyFeasibility(format!(
            "alpha = {}: {}; r^2 <= t <= r^{} has no solution with 0 < r < 1",
            alpha.alpha,
            ineq.join("; "),
            e.mul(&Scalar::integer(4))
        )));
    }
    let constant = qc_constant(alpha);
    let mut chains = Vec::new();
    let mut checked = 0;
    for p in candidates() {
        if chains.len() >= max_pairs {
            break;
        }
        checked += 1;
        if !cmp_to_power(&p.t, &p.r, &Scalar::integer(2)).is_ge() {
            continue;
        }
        let Ok(transport) = transport_params(&p, alpha) else {
            continue;
        };
        let source = classify_domain(&p);
        let image = classify_domain(&transport.image);
        if source.class == DomainClass::ExhaustiveHenceComplete && image.class == DomainClass::NotComplete {
            chains.push(CounterexampleChain {
                source,
                l: constant.l.clone(),
                beltrami_ratio: constant.k.clone(),
                transport,
                image,
            });
        }
    }
    if chains.is_empty() {
        return Err(Error::EmptyFeasibility(format!(
            "alpha = {}: no candidate pair satisfies {}",
            alpha.alpha,
            ineq.join("; ")
        )));
    }
    Ok(CounterexampleReport {
        alpha: alpha.alpha.clone(),
        inequalities: ineq,
        region_test,
        candidates_checked: checked,
        chains,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn q(s: &str) -> QCParams {
        QCParams::new(s.parse().unwrap()).unwrap()
    }

    #[test]
    fn alpha_validated() {
        assert!(QCParams::new(Scalar::ratio(1, 2)).is_err());
        assert!(QCParams::from_f64(0.5000001).is_ok());
    }

    #[test]
    fn cube_root_example() {
        assert_relative_eq!(apply(&q("2/3"), 0.25.into()).re, 0.629_960_524_947_436_6, max_relative = 1e-14);
        assert_eq!(apply(&q("1"), Complex64::new(0.3, -0.2)), Complex64::new(0.3, -0.2));
    }

    #[test]
    fn constants() {
        let c = qc_constant(&q("2/3"));
        assert_eq!(c.l, Scalar::integer(3));
        assert_eq!(c.k, Scalar::ratio(1, 2));
        assert_eq!(qc_constant(&q("3/4")).l, Scalar::integer(2));
        assert_eq!(qc_constant(&q("1")).l, Scalar::integer(1));
        assert_eq!(qc_constant(&q("2")).l, Scalar::integer(3));
    }

    #[test]
    fn transport_examples() {
        let t = transport_params(&ParamRT::ratio(1, 8, 1, 32).unwrap(), &q("2/3")).unwrap();
        assert_eq!(t.image, ParamRT::ratio(1, 2, 1, 32).unwrap());
        assert!(t.image.r.is_exact());
        assert!(t.out_of_stated_range);
        let t = transport_params(&ParamRT::from_f64(0.04, 0.3).unwrap(), &q("3/4")).unwrap();
        assert_relative_eq!(t.image.r(), 0.2, max_relative = 1e-15);
        assert!(!t.out_of_stated_range);
    }

    #[test]
    fn alpha_one_region_empty() {
        assert!(matches!(counterexample_search(&q("1"), 4), Err(Error::EmptyFeasibility(_))));
    }
}
