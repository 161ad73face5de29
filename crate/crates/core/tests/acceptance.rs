//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the run exits nonzero if any criterion fails. Runs without the libtest
//! harness so the lines are never captured.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, LN_2, PI};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_complex::Complex64;

use bergman_qc::bergman::{kernel_at, BasisSpec, PolarQuadrature};
use bergman_qc::capacity::{arc_log_capacity, fekete_log_capacity, segment_log_capacity, FeketeConfig};
use bergman_qc::cli::grid_axis;
use bergman_qc::domain::{
    build_domain, first_shell_index, trapped_obstacles, ArcObstacle, CompactSet, DomainSpec, ParamRT, Piece,
    SegmentObstacle,
};
use bergman_qc::exact::Scalar;
use bergman_qc::wiener::{
    classify_domain, default_grid, gamma_at_origin, gamma_bracket_on_grid, gamma_numeric, gamma_verdict,
    ratio_test, reciprocal_log_bounds, shell_term_bounds, CapacityPath, DomainClass, GammaQuadrature, Verdict,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let used = start.elapsed();
    check(used < limit, || format!("took {used:?}, limit {limit:?}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_bergman-qc"))
        .args(["counterexample", "--alpha", "2/3"])
        .output()
        .map_err(|e| e.to_string())?;
    check(out.status.success(), || String::from_utf8_lossy(&out.stderr).into_owned())?;
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let chain = &v["results"]["chains"][0];
    let got = (
        chain["source"]["params"]["r"].as_str(),
        chain["source"]["params"]["t"].as_str(),
        chain["source"]["class"].as_str(),
        chain["l"].as_str(),
        chain["transport"]["image"]["r"].as_str(),
        chain["transport"]["image"]["t"].as_str(),
        chain["image"]["class"].as_str(),
    );
    let want = (
        Some("1/8"),
        Some("1/32"),
        Some("ExhaustiveHenceComplete"),
        Some("3"),
        Some("1/2"),
        Some("1/32"),
        Some("NotComplete"),
    );
    check(got == want, || format!("chain {got:?}"))?;
    within(Duration::from_secs(1), start)?;
    Ok(format!(
        "D^(1/8,1/32) complete -> L = 3 -> D^(1/2,1/32) not complete in {:?}",
        start.elapsed()
    ))
}

/// Grid point `num/den` as integers for an independent exact oracle.
fn grid_fraction(lo: (u128, u128), hi: (u128, u128), steps: u128, i: u128) -> (u128, u128) {
    // lo + (hi - lo) i / (steps - 1) over the common denominator
    let den = lo.1 * hi.1 * (steps - 1);
    let num = lo.0 * hi.1 * (steps - 1) + (hi.0 * lo.1 - lo.0 * hi.1) * i;
    (num, den)
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let rs = grid_axis(&Scalar::ratio(1, 20), &Scalar::ratio(9, 20), 50);
    let ts = grid_axis(&Scalar::ratio(1, 100), &Scalar::ratio(49, 100), 50);
    let mut disagreements = Vec::new();
    let mut counts = [0usize; 3];
    for (i, r) in rs.iter().enumerate() {
        for (j, t) in ts.iter().enumerate() {
            let p = ParamRT::new(r.clone(), t.clone()).map_err(|e| e.to_string())?;
            let c = classify_domain(&p);
            let (a, b) = grid_fraction((1, 20), (9, 20), 50, i as u128);
            let (c_num, d) = grid_fraction((1, 100), (49, 100), 50, j as u128);
            let exhaustive = c_num * b * b >= a * a * d;
            let below_r4 = c_num * b.pow(4) <= a.pow(4) * d;
            let expected = if exhaustive {
                DomainClass::ExhaustiveHenceComplete
            } else if below_r4 {
                DomainClass::NotComplete
            } else {
                DomainClass::Unknown
            };
            counts[expected as usize] += 1;
            let gamma0_ok = (gamma_verdict(&p, 0) == Verdict::Divergent) == exhaustive;
            let ratio1_ok = !below_r4 || ratio_test(&p, 1).is_le();
            if c.class != expected || !gamma0_ok || !ratio1_ok || !c.test_n0.exact {
                disagreements.push(format!("({r}, {t})"));
            }
        }
    }
    check(disagreements.is_empty(), || format!("disagreements at {disagreements:?}"))?;
    // boundaries are inclusive
    let boundary = [
        (Scalar::ratio(3, 10), Scalar::ratio(9, 100), DomainClass::ExhaustiveHenceComplete),
        (Scalar::ratio(3, 10), Scalar::ratio(81, 10000), DomainClass::NotComplete),
        (Scalar::ratio(1, 3), Scalar::ratio(1, 9), DomainClass::ExhaustiveHenceComplete),
        (Scalar::ratio(1, 3), Scalar::ratio(1, 81), DomainClass::NotComplete),
        (Scalar::ratio(3, 10), Scalar::ratio(1, 20), DomainClass::Unknown),
    ];
    for (r, t, want) in boundary {
        let got = classify_domain(&ParamRT::new(r.clone(), t.clone()).map_err(|e| e.to_string())?).class;
        check(got == want, || format!("boundary ({r}, {t}): {got:?}, want {want:?}"))?;
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!(
        "2500 cells ({} exhaustive, {} not complete, {} unknown), 0 disagreements, boundaries inclusive",
        counts[0], counts[1], counts[2]
    ))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let cases = [
        (
            "circle R=0.7",
            Piece::Arc(ArcObstacle::new(0.7, 0.0, PI).unwrap()),
            0.7f64.ln(),
        ),
        (
            "segment L=2",
            Piece::Segment(SegmentObstacle {
                a: Complex64::new(-1.0, 0.0),
                b: Complex64::new(1.0, 0.0),
            }),
            segment_log_capacity(2.0).unwrap().log_value(),
        ),
        (
            "semicircle R=1",
            Piece::Arc(ArcObstacle::new(1.0, 0.3, FRAC_PI_2).unwrap()),
            arc_log_capacity(1.0, FRAC_PI_2).unwrap().log_value(),
        ),
    ];
    check((cases[2].2 - FRAC_PI_4.sin().ln()).abs() < 1e-15, || "semicircle closed form".into())?;
    let mut errs = Vec::new();
    for (name, piece, exact) in cases {
        let est = fekete_log_capacity(&CompactSet::new(vec![piece]), &FeketeConfig::new(64, 7)).map_err(|e| e.to_string())?;
        let err = (est.log_capacity.log_value() - exact).abs();
        check(err <= 1e-2, || format!("{name}: log error {err:e}"))?;
        errs.push(format!("{name} {err:.1e}"));
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!("Fekete n=64 log errors: {} in {:?}", errs.join(", "), start.elapsed()))
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for i in 1..=20 {
        for k in 1..=20 {
            let r = i as f64 / 21.0;
            let t = k as f64 / 42.0;
            let p = ParamRT::from_f64(r, t).map_err(|e| e.to_string())?;
            for j in 1..=40 {
                let (lo, g, hi) = reciprocal_log_bounds(&p, j);
                check(lo <= g && g <= hi, || format!("r={r} t={t} j={j}: {lo} {g} {hi}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} log-domain sandwiches hold without tolerance"))
}

fn criterion_5() -> Outcome {
    let triples = [
        (0.2, 0.3, 0),
        (0.2, 0.3, 1),
        (0.125, 0.03125, 0),
        (0.125, 0.03125, 1),
        (0.1, 0.01, 0),
        (0.3, 0.05, 1),
        (0.05, 0.4, 0),
        (0.45, 0.2, 2),
        (0.6, 0.1, 0),
        (0.24, 0.0033, 1),
    ];
    let mut spreads = Vec::new();
    for (r, t, n) in triples {
        let p = ParamRT::from_f64(r, t).map_err(|e| e.to_string())?;
        let pw = 2.0 * n as f64 + 2.0;
        let big_l = -f64::ln(r);
        let m = (LN_2 / big_l).floor();
        // C_k / ρ^k lies in [B, A], ρ = t / r^{2n+2}
        let log_b = -pw * LN_2 + (1.0 - r).ln() + t.ln() - (t * big_l).ln_1p();
        let log_a = -pw * LN_2 - pw * r.ln() + (1.0 / r - 1.0).ln() - m * t.ln() - (1.0 - t).ln();
        let log_rho = t.ln() - pw * r.ln();
        let first = first_shell_index(&p);
        let (mut lo_min, mut hi_max) = (f64::INFINITY, f64::NEG_INFINITY);
        for k in first..=60 {
            let s = shell_term_bounds(&p, n, k).map_err(|e| e.to_string())?;
            check(s.log_lower <= s.log_upper, || format!("{r},{t},{n} k={k}: lower > upper"))?;
            if k == first {
                continue;
            }
            let nl = s.log_lower - k as f64 * log_rho;
            let nu = s.log_upper - k as f64 * log_rho;
            let slack = 1e-12 * (1.0 + k as f64 * log_rho.abs());
            check(nl >= log_b - slack && nu <= log_a + slack, || {
                format!("{r},{t},{n} k={k}: normalized [{nl}, {nu}] outside [{log_b}, {log_a}]")
            })?;
            lo_min = lo_min.min(nl);
            hi_max = hi_max.max(nu);
        }
        spreads.push(hi_max - lo_min);
    }
    let worst = spreads.iter().copied().fold(0.0, f64::max);
    Ok(format!(
        "10 triples, k <= 60: lower <= upper, normalized terms in [B, A] (widest log spread {worst:.2})"
    ))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let quad = PolarQuadrature::default();
    let disc = BasisSpec::monomials(DomainSpec::unit_disc(), 30);
    let punctured = BasisSpec::monomials(DomainSpec::punctured_disc(), 30);
    let mut worst_k: f64 = 0.0;
    for z in [Complex64::new(0.0, 0.0), Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)] {
        let e = kernel_at(&disc, &quad, z).map_err(|e| e.to_string())?;
        let exact = 1.0 / (PI * (1.0 - z.norm_sqr()).powi(2));
        let rel = (e.kernel - exact).abs() / exact;
        worst_k = worst_k.max(rel);
        check(rel <= 1e-6, || format!("K({z}) = {} vs {exact}", e.kernel))?;
        let id = (e.metric - e.derivative_functional / e.kernel).abs() / e.metric;
        check(id <= 1e-10, || format!("metric identity off by {id:e} at {z}"))?;
        if z.norm() == 0.0 {
            check((e.metric - 2.0).abs() <= 2e-8, || format!("beta(0) = {}", e.metric))?;
        }
    }
    for z in [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5), Complex64::new(0.3, -0.2)] {
        let a = kernel_at(&disc, &quad, z).map_err(|e| e.to_string())?;
        let b = kernel_at(&punctured, &quad, z).map_err(|e| e.to_string())?;
        let diffs = [
            a.kernel - b.kernel,
            a.metric - b.metric,
            a.derivative_functional - b.derivative_functional,
            a.error_proxy - b.error_proxy,
            a.condition - b.condition,
        ];
        check(diffs.iter().all(|d| d.abs() <= 1e-14) && a.basis_size == b.basis_size && a.quad_points == b.quad_points, || {
            format!("punctured disc differs at {z}: {diffs:?}")
        })?;
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!(
        "max K rel error {worst_k:.1e}, beta(0) = 2, B = I/K, punctured disc identical, {:?}",
        start.elapsed()
    ))
}

fn criterion_7() -> Outcome {
    let quad = GammaQuadrature::default();
    for d in [DomainSpec::unit_disc(), DomainSpec::punctured_disc()] {
        let g = gamma_numeric(&d, 0.0.into(), 0, &quad).map_err(|e| e.to_string())?;
        check(g.lower_sum == 0.0 && g.upper_sum == 0.0 && g.value == Some(0.0), || {
            format!("{}: gamma = [{}, {}]", d.label, g.lower_sum, g.upper_sum)
        })?;
    }
    let mut shells = 0;
    for (r, t) in [(0.2, 0.3), (0.2, 0.001)] {
        let p = ParamRT::from_f64(r, t).map_err(|e| e.to_string())?;
        let domain = build_domain(&p, 200).map_err(|e| e.to_string())?;
        for n in [0, 1] {
            let num = gamma_numeric(&domain, 0.0.into(), n, &quad).map_err(|e| e.to_string())?;
            for s in &num.shell_terms {
                let a = shell_term_bounds(&p, n, s.k).map_err(|e| e.to_string())?;
                let slack = 1e-12;
                check(s.lower >= a.lower * (1.0 - slack) && s.upper <= a.upper * (1.0 + slack), || {
                    format!("D^({r},{t}) n={n} shell {}: numeric [{}, {}] vs analytic [{}, {}]", s.k, s.lower, s.upper, a.lower, a.upper)
                })?;
                shells += 1;
            }
            let ana = gamma_at_origin(&p, n);
            check(num.lower_sum >= ana.lower_sum * (1.0 - 1e-12) && num.upper_sum <= ana.upper_sum * (1.0 + 1e-12), || {
                format!("D^({r},{t}) n={n}: sums [{}, {}] vs [{}, {}]", num.lower_sum, num.upper_sum, ana.lower_sum, ana.upper_sum)
            })?;
            check(num.verdict == ana.verdict, || format!("D^({r},{t}) n={n}: verdict {:?} vs {:?}", num.verdict, ana.verdict))?;
        }
    }
    Ok(format!("disc and punctured disc give exactly 0; {shells} numeric shell brackets inside the analytic bounds"))
}

fn criterion_8() -> Outcome {
    let quad = GammaQuadrature::default();
    let mut notes = Vec::new();
    // one divergent domain (gamma(0) = inf) and two where gamma(0) is finite
    for (r, t) in [(0.2, 0.3), (0.2, 0.001), (0.3, 0.05)] {
        let p = ParamRT::from_f64(r, t).map_err(|e| e.to_string())?;
        let domain = build_domain(&p, 200).map_err(|e| e.to_string())?;
        let mut margin = f64::INFINITY;
        for n in [0u32, 1] {
            let at0 = gamma_numeric(&domain, 0.0.into(), n, &quad).map_err(|e| e.to_string())?;
            for x in [-1e-3, -1e-4] {
                let z = Complex64::new(x, 0.0);
                let at_x = gamma_numeric(&domain, z, n, &quad).map_err(|e| e.to_string())?;
                check(at_x.upper_sum.is_finite(), || format!("D^({r},{t}) n={n} x={x}: upper bracket not finite"))?;
                check(at_x.upper_sum <= at0.lower_sum, || {
                    format!("D^({r},{t}) n={n} x={x}: upper(x) = {} > lower(0) = {}", at_x.upper_sum, at0.lower_sum)
                })?;
                margin = margin.min(at0.lower_sum / at_x.upper_sum);
                // Cellwise on a shared grid. The lower bound is monotone under
                // inclusion; the subadditive upper bound is not (a clipped arc
                // splits into two pieces), so it is only compared to the lower.
                let lo = 1e-12;
                let mut grid = default_grid(&domain, 0.0.into(), lo, 0.25, 8);
                grid.extend(default_grid(&domain, z, lo, 0.25, 8));
                grid.sort_by(f64::total_cmp);
                grid.dedup();
                let cx = gamma_bracket_on_grid(&domain, z, n, &grid, CapacityPath::ClosedForm)
                    .map_err(|e| e.to_string())?;
                let c0 = gamma_bracket_on_grid(&domain, 0.0.into(), n, &grid, CapacityPath::ClosedForm)
                    .map_err(|e| e.to_string())?;
                for (a, b) in cx.iter().zip(&c0) {
                    check(a.h_lower <= b.h_lower && a.h_lower <= b.h_upper, || {
                        format!(
                            "D^({r},{t}) n={n} x={x} cell [{}, {}]: h(x) [{}, {}] vs h(0) [{}, {}]",
                            a.a, a.b, a.h_lower, a.h_upper, b.h_lower, b.h_upper
                        )
                    })?;
                }
                for &d in &grid {
                    let small = trapped_obstacles(&domain, z, d);
                    let big = trapped_obstacles(&domain, 0.0.into(), d);
                    check(big.contains_set(&small), || {
                        format!("D^({r},{t}) x={x}: trapped set not contained at delta={d}")
                    })?;
                }
            }
        }
        notes.push(if margin.is_infinite() {
            format!("D^({r},{t}) gamma(0) = inf")
        } else {
            format!("D^({r},{t}) lower(0)/upper(x) >= {margin:.4}")
        });
    }
    Ok(format!(
        "x in {{-1e-3, -1e-4}}, n in {{0,1}}: upper(x) <= lower(0), trapped sets nested ({})",
        notes.join(", ")
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("counterexample chain for alpha = 2/3", criterion_1),
        ("classification thresholds t = r^2 and t = r^4", criterion_2),
        ("capacity oracle agreement", criterion_3),
        ("reciprocal-log sandwich", criterion_4),
        ("shell sandwich coherence", criterion_5),
        ("bergman engine validation", criterion_6),
        ("gamma degenerate cases and shell brackets", criterion_7),
        ("monotonicity along the negative real axis", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {} FAIL {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
