use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bergman::{metric_path_length, BasisSpec, BergmanEngine, KernelEstimate, PathLength, PolarQuadrature};
use crate::capacity::{
    equilibrium_energy, fekete_log_capacity, piece_log_capacity_bounds, EquilibriumResult, FeketeConfig,
    FeketeEstimate, LogCapacity,
};
use crate::domain::{
    build_domain, make_arc, ArcObstacle, CompactSet, DiscObstacle, DomainSpec, ParamRT, Piece, SegmentObstacle,
};
use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::qc::{
    apply_to_arc, beltrami, counterexample_search, qc_constant, transport_params, Beltrami, QCParams, Transport,
};
use crate::wiener::{
    classify_domain, gamma_at_origin_with, gamma_numeric, CapacityPath, Classification, DomainClass,
    GammaQuadrature,
};

use super::record::{Provenance, ResultRecord, RunConfig};
use super::{
    parse_path, CapacityArgs, CapacityPathArg, Command, Format, GammaArgs, GammaMethodArg, KernelArgs, KernelDomain,
    PhaseDiagramArgs, QcArgs, Shape,
};

pub(crate) fn capacity_set(a: &CapacityArgs) -> Result<CompactSet> {
    let piece = match a.shape {
        Shape::Arc => Piece::Arc(ArcObstacle::new(a.radius, a.center_angle, a.half_width)?),
        Shape::Circle => Piece::Arc(ArcObstacle::new(a.radius, 0.0, PI)?),
        Shape::Segment => {
            if !(a.length > 0.0 && a.length.is_finite()) {
                return Err(Error::param("length", format!("need length > 0, got {}", a.length)));
            }
            Piece::Segment(SegmentObstacle {
                a: Complex64::new(-a.length / 2.0, 0.0),
                b: Complex64::new(a.length / 2.0, 0.0),
            })
        }
        Shape::Disc => {
            if !(a.radius > 0.0 && a.radius.is_finite()) {
                return Err(Error::param("radius", format!("need radius > 0, got {}", a.radius)));
            }
            Piece::Disc(DiscObstacle {
                center: Complex64::new(0.0, 0.0),
                radius: a.radius,
            })
        }
        Shape::Point => Piece::Point {
            at: Complex64::new(0.0, 0.0),
        },
        Shape::FamilyArc => {
            let (Some(r), Some(t)) = (&a.r, &a.t) else {
                return Err(Error::param("r, t", "family-arc needs --r and --t"));
            };
            Piece::Arc(make_arc(&ParamRT::new(r.clone(), t.clone())?, a.k)?)
        }
    };
    Ok(CompactSet::new(vec![piece]))
}

pub(crate) fn kernel_domain(a: &KernelArgs) -> Result<BasisSpec> {
    let domain = match a.domain {
        KernelDomain::Disc => DomainSpec::unit_disc(),
        KernelDomain::Punctured => DomainSpec::punctured_disc(),
        KernelDomain::Annulus => DomainSpec::annulus(a.inner)?,
    };
    Ok(match a.min_degree {
        Some(m) => {
            if m > a.max_degree as i32 {
                return Err(Error::param("min-degree", "exceeds max-degree"));
            }
            BasisSpec::laurent(domain, m, a.max_degree as i32)
        }
        None => BasisSpec::monomials(domain, a.max_degree),
    })
}

#[derive(Serialize)]
struct CapacityResults {
    set: CompactSet,
    closed_form: LogCapacity,
    capacity: f64,
    fekete: Option<FeketeEstimate>,
    fekete_abs_log_error: Option<f64>,
    equilibrium: Option<EquilibriumResult>,
    equilibrium_abs_log_error: Option<f64>,
}

fn run_capacity(a: &CapacityArgs, seed: u64) -> Result<CapacityResults> {
    let set = capacity_set(a)?;
    let closed_form = piece_log_capacity_bounds(&set.pieces[0]).1;
    let numeric = !set.is_polar();
    let fekete = match (numeric, a.fekete) {
        (true, n) if n > 0 => Some(fekete_log_capacity(&set, &FeketeConfig::new(n, seed))?),
        _ => None,
    };
    let equilibrium = match (numeric, a.equilibrium) {
        (true, m) if m > 0 => Some(equilibrium_energy(&set, m, seed)?),
        _ => None,
    };
    Ok(CapacityResults {
        fekete_abs_log_error: fekete
            .as_ref()
            .map(|f| (f.log_capacity.log_value() - closed_form.log_value()).abs()),
        equilibrium_abs_log_error: equilibrium
            .as_ref()
            .map(|e| (e.energy.value - closed_form.log_value()).abs()),
        capacity: closed_form.capacity(),
        set,
        closed_form,
        fekete,
        equilibrium,
    })
}

fn run_gamma(a: &GammaArgs, seed: u64, k_max: u32) -> Result<serde_json::Value> {
    let params = ParamRT::new(a.r.clone(), a.t.clone())?;
    let at_origin = a.z.norm() == 0.0;
    let report = if at_origin && a.method != GammaMethodArg::Numeric {
        gamma_at_origin_with(&params, a.n, k_max)
    } else {
        let domain = build_domain(&params, k_max)?;
        let quad = GammaQuadrature {
            delta_min: a.delta_min,
            rel_tol: a.rel_tol,
            path: match a.capacity_path {
                CapacityPathArg::Closed => CapacityPath::ClosedForm,
                CapacityPathArg::Fekete => CapacityPath::Fekete { n: a.fekete_n, seed },
            },
            ..GammaQuadrature::default()
        };
        gamma_numeric(&domain, a.z, a.n, &quad)?
    };
    Ok(serde_json::to_value(report)?)
}

/// `steps` equally spaced points from `lo` to `hi`, exact for exact inputs.
pub fn grid_axis(lo: &Scalar, hi: &Scalar, steps: usize) -> Vec<Scalar> {
    if steps <= 1 {
        return vec![lo.clone()];
    }
    let span = hi.sub(lo);
    let last = Scalar::integer(steps as i64 - 1);
    (0..steps)
        .map(|i| lo.add(&span.mul(&Scalar::integer(i as i64)).div(&last)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub r: Scalar,
    pub t: Scalar,
    pub verdict: DomainClass,
    pub ratio_n0: f64,
    pub ratio_n1: f64,
    pub ratio_one_boundary: bool,
    pub near_boundary: bool,
}

impl From<Classification> for PhaseRow {
    fn from(c: Classification) -> Self {
        PhaseRow {
            r: c.params.r,
            t: c.params.t,
            verdict: c.class,
            ratio_n0: c.ratio_n0,
            ratio_n1: c.ratio_n1,
            ratio_one_boundary: c.ratio_one_boundary,
            near_boundary: c.near_boundary,
        }
    }
}

fn run_phase_diagram(a: &PhaseDiagramArgs) -> Result<Vec<PhaseRow>> {
    let rs = grid_axis(&a.r_min, &a.r_max, a.r_steps);
    let ts = grid_axis(&a.t_min, &a.t_max, a.t_steps);
    let cells: Vec<(Scalar, Scalar)> = rs
        .iter()
        .flat_map(|r| ts.iter().map(move |t| (r.clone(), t.clone())))
        .collect();
    // indexed parallel collect keeps the row order
    cells
        .into_par_iter()
        .map(|(r, t)| Ok(classify_domain(&ParamRT::new(r, t)?).into()))
        .collect()
}

fn verdict_name(c: DomainClass) -> &'static str {
    match c {
        DomainClass::ExhaustiveHenceComplete => "ExhaustiveHenceComplete",
        DomainClass::NotComplete => "NotComplete",
        DomainClass::Unknown => "Unknown",
    }
}

fn rows_to_csv(rows: &[PhaseRow]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r", "t", "verdict", "ratio_n0", "ratio_n1"])?;
    for row in rows {
        w.write_record([
            row.r.value().to_string(),
            row.t.value().to_string(),
            verdict_name(row.verdict).to_string(),
            row.ratio_n0.to_string(),
            row.ratio_n1.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
struct BeltramiSample {
    z: Complex64,
    #[serde(flatten)]
    data: Beltrami,
    /// `k |f_z| - |f_z̄|`, zero when the dilatation bound is attained.
    slack: f64,
}

#[derive(Serialize)]
struct QcResults {
    alpha: Scalar,
    exponent: Scalar,
    inverse_alpha: Scalar,
    l: Scalar,
    k: Scalar,
    beltrami: Vec<BeltramiSample>,
    transport: Transport,
    source: Classification,
    image: Classification,
    arcs_checked: u32,
    max_log_radius_error: f64,
    angular_data_identical: bool,
}

fn run_qc(a: &QcArgs, k_max: u32) -> Result<QcResults> {
    let alpha = QCParams::new(a.alpha.clone())?;
    let params = ParamRT::new(a.r.clone(), a.t.clone())?;
    let constant = qc_constant(&alpha);
    let k = constant.k.value();
    let samples = a
        .z
        .iter()
        .map(|&z| {
            let data = beltrami(&alpha, z)?;
            Ok(BeltramiSample {
                z,
                slack: k * data.f_z.norm() - data.f_zbar.norm(),
                data,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let transport = transport_params(&params, &alpha)?;
    let arcs_checked = k_max.min(60);
    let mut max_err: f64 = 0.0;
    let mut identical = true;
    for j in 1..=arcs_checked {
        let mapped = apply_to_arc(&alpha, &make_arc(&params, j)?);
        let target = make_arc(&transport.image, j)?;
        max_err = max_err.max((mapped.log_radius - target.log_radius).abs() / target.log_radius.abs());
        identical &= mapped.center_angle == target.center_angle && mapped.log_sin_quarter == target.log_sin_quarter;
    }
    Ok(QcResults {
        exponent: alpha.exponent(),
        inverse_alpha: alpha.inverse().alpha,
        alpha: alpha.alpha,
        l: constant.l,
        k: constant.k,
        beltrami: samples,
        source: classify_domain(&params),
        image: classify_domain(&transport.image),
        transport,
        arcs_checked,
        max_log_radius_error: max_err,
        angular_data_identical: identical,
    })
}

#[derive(Serialize)]
struct KernelResults {
    basis: BasisSpec,
    quadrature: PolarQuadrature,
    condition: f64,
    estimates: Vec<KernelEstimate>,
    path_length: Option<PathLength>,
}

fn run_kernel(a: &KernelArgs) -> Result<KernelResults> {
    let basis = kernel_domain(a)?;
    let mut quadrature = PolarQuadrature::for_degree(basis.kind.max_abs_degree());
    quadrature.radial_order = a.radial_order;
    if let Some(m) = a.angular_points {
        quadrature.angular_points = m;
    }
    let engine = BergmanEngine::new(&basis, &quadrature)?;
    let estimates = a.z.iter().map(|&z| engine.evaluate(z)).collect::<Result<Vec<_>>>()?;
    let path_length = match &a.path {
        Some(p) => Some(metric_path_length(&basis, &quadrature, &parse_path(p)?, a.samples)?),
        None => None,
    };
    Ok(KernelResults {
        condition: engine.condition(),
        basis,
        quadrature,
        estimates,
        path_length,
    })
}

pub(crate) fn render(config: &RunConfig) -> Result<String> {
    let provenance = Provenance::start(config);
    let (seed, k_max) = (config.common.seed, config.common.kmax);
    let mut rows = None;
    let results = match &config.command {
        Command::Capacity(a) => serde_json::to_value(run_capacity(a, seed)?)?,
        Command::Gamma(a) => run_gamma(a, seed, k_max)?,
        Command::Classify(a) => {
            let c = classify_domain(&ParamRT::new(a.r.clone(), a.t.clone())?);
            rows = Some(vec![PhaseRow::from(c.clone())]);
            serde_json::to_value(c)?
        }
        Command::PhaseDiagram(a) => {
            let r = run_phase_diagram(a)?;
            let value = serde_json::to_value(&r)?;
            rows = Some(r);
            value
        }
        Command::Qc(a) => serde_json::to_value(run_qc(a, k_max)?)?,
        Command::Kernel(a) => serde_json::to_value(run_kernel(a)?)?,
        Command::Counterexample(a) => {
            serde_json::to_value(counterexample_search(&QCParams::new(a.alpha.clone())?, a.max_pairs)?)?
        }
    };
    match (config.common.format, rows) {
        (Format::Csv, Some(rows)) => rows_to_csv(&rows),
        _ => {
            let record = ResultRecord {
                config: config.clone(),
                results,
                provenance: provenance.finish(),
            };
            Ok(serde_json::to_string_pretty(&record)? + "\n")
        }
    }
}
