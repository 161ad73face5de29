//! The Wiener-type integral
//!
//! ```text
//! γ_D^{(n)}(z) = ∫_0^{1/4} dδ / (δ^{2n+3} · (-ln cap(closed disc(z, δ) \ D)))
//! ```
//!
//! At the origin of D^{r,t} the integral splits into shells whose terms are
//! sandwiched between multiples of `(t / r^{2n+2})^k`, so divergence is a
//! ratio test. Elsewhere it is bracketed by quadrature: the integrand factor
//! `h(δ) = 1/(-ln cap)` is nondecreasing in δ, so on a cell `[a, b]` it lies
//! between `h(a)` and `h(b⁻)`.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::capacity::{fekete_log_capacity, log_f64, set_union_bounds, FeketeConfig};
use crate::domain::{
    first_shell_index, trapped_obstacles, trapped_obstacles_open, CompactSet, DomainSpec, ParamRT, DEFAULT_K_MAX,
};
use crate::error::{Error, Result};
use crate::exact::{cmp_to_power, Comparison, Scalar};

/// Tail sums stop once a term is below this fraction of the running sum.
const TAIL_REL: f64 = 1e-18;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Divergent,
    Finite,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaMethod {
    ShellSeries,
    Quadrature,
}

/// Bounds on one shell integral `C_k`, kept in log form as well since the
/// linear values overflow for large `k` when the series diverges.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShellTerm {
    pub k: u32,
    pub inner: f64,
    pub outer: f64,
    #[serde(with = "log_f64")]
    pub lower: f64,
    #[serde(with = "log_f64")]
    pub upper: f64,
    #[serde(with = "log_f64")]
    pub log_lower: f64,
    #[serde(with = "log_f64")]
    pub log_upper: f64,
}

/// Quadrature bracket on one δ-cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellBracket {
    pub a: f64,
    pub b: f64,
    /// `1/(-ln cap)` lower bound at `a`.
    pub h_lower: f64,
    /// `1/(-ln cap)` upper bound just below `b`.
    pub h_upper: f64,
    #[serde(with = "log_f64")]
    pub lower: f64,
    #[serde(with = "log_f64")]
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// Shell indices covered explicitly.
    pub k_first: Option<u32>,
    pub k_last: Option<u32>,
    /// Bounds on everything beyond the explicit part (shells past `k_last`,
    /// or δ below `delta_min`).
    #[serde(with = "log_f64")]
    pub tail_lower: f64,
    #[serde(with = "log_f64")]
    pub tail_upper: f64,
    pub delta_min: Option<f64>,
    /// Set when the mass below `delta_min` could not be bounded.
    pub unresolved_below: Option<f64>,
    pub refinements: usize,
}

/// Cell where the capacity oracle failed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellFailure {
    pub a: f64,
    pub b: f64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaReport {
    pub n: u32,
    pub z: Complex64,
    pub method: GammaMethod,
    pub verdict: Verdict,
    /// Finite verdicts only: the upper bracket of the integral.
    pub value: Option<f64>,
    #[serde(with = "log_f64")]
    pub lower_sum: f64,
    #[serde(with = "log_f64")]
    pub upper_sum: f64,
    pub shell_terms: Vec<ShellTerm>,
    /// `t / r^{2n+2}` for the slit family.
    pub ratio: Option<f64>,
    pub ratio_test: Option<Comparison>,
    /// `t = r^{2n+2}`: the series diverges with terms bounded below.
    pub ratio_one_boundary: bool,
    /// r outside the family's original range (0, 1/4).
    pub out_of_stated_range: bool,
    pub truncation: Truncation,
    pub cells: Vec<CellBracket>,
    pub failure: Option<CellFailure>,
}

/// `g(j) = 1/(t^{-j} + j ln(1/r))` in log form: `j ln t - ln(1 + j t^j ln(1/r))`.
pub fn log_g(params: &ParamRT, j: u32) -> f64 {
    let (ln_t, big_l) = (params.t().ln(), -params.r().ln());
    let jf = j as f64;
    jf * ln_t - (jf * params.t().powi(j as i32) * big_l).ln_1p()
}

/// Log bounds `(ln lower, ln g(j), ln upper)` of the sandwich
/// `t^j/(1 - t ln r) <= g(j) <= t^j`.
///
/// All three share `j ln t`, so the comparison reduces to
/// `ln(1 + t L) >= ln(1 + j t^j L) >= 0` with `L = ln(1/r)`.
pub fn reciprocal_log_bounds(params: &ParamRT, j: u32) -> (f64, f64, f64) {
    let (ln_t, big_l) = (params.t().ln(), -params.r().ln());
    let base = j as f64 * ln_t;
    let lower = base - (params.t() * big_l).ln_1p();
    (lower, log_g(params, j), base)
}

/// `ln Σ_{j >= from} g(j)`, summed until terms drop below [`TAIL_REL`] of the running sum.
pub fn log_tail_sum(params: &ParamRT, from: u32) -> f64 {
    let lead = log_g(params, from);
    let mut rel = 1.0;
    let mut j = from + 1;
    loop {
        let term = (log_g(params, j) - lead).exp();
        rel += term;
        if term < TAIL_REL * rel || j >= from + 100_000 {
            break;
        }
        j += 1;
    }
    lead + rel.ln()
}

/// Arcs `j >= k - m` can meet the closed disc of radius `2 r^k`, where
/// `m = floor(ln 2 / ln(1/r))`; `m = 0` for `r < 1/2`.
fn arc_offset(params: &ParamRT) -> u32 {
    (LN_2 / -params.r().ln() + 1e-12).floor() as u32
}

/// Least `j` with `r^j <= 1/4`.
fn first_arc_in_quarter(params: &ParamRT) -> u32 {
    let mut j = 1;
    while cmp_to_power(&Scalar::ratio(1, 4), &params.r, &Scalar::integer(j as i64)).ordering.is_lt() {
        j += 1;
    }
    j
}

/// Bounds on the shell integral `C_k`.
///
/// For the first shell `[2r^{k0+1}, 1/4]`:
/// `(1/4 - 2r^{k0+1}) 4^{2n+3} g(k0+1) <= C <= (1/4 - 2r^{k0+1}) (2r^{k0+1})^{-2n-3} Σ_{j>=j0} g(j)`.
/// For later shells `[2r^{k+1}, 2r^k]`:
/// `(2r^k)^{-2n-2} (1-r) g(k+1) <= C_k <= (2r^{k+1})^{-2n-2} (1/r - 1) Σ_{j>=k-m} g(j)`.
/// `j0` and `m` account for arcs of earlier index reaching into the shell,
/// which only happens for r >= 1/2.
pub fn shell_term_bounds(params: &ParamRT, n: u32, k: u32) -> Result<ShellTerm> {
    let first = first_shell_index(params);
    if k < first {
        return Err(Error::EmptyShell { k, first_valid: first });
    }
    let ln_r = params.r().ln();
    let p = 2.0 * n as f64 + 2.0;
    let log_inner = LN_2 + (k as f64 + 1.0) * ln_r;
    let (log_lower, log_upper, outer) = if k == first {
        let log_len = (0.25 - log_inner.exp()).ln();
        let j0 = first.min(first_arc_in_quarter(params));
        (
            log_len + (p + 1.0) * 4f64.ln() + log_g(params, k + 1),
            log_len - (p + 1.0) * log_inner + log_tail_sum(params, j0),
            0.25,
        )
    } else {
        let log_outer = LN_2 + k as f64 * ln_r;
        let from = k.saturating_sub(arc_offset(params)).max(1);
        (
            -p * log_outer + (-ln_r.exp_m1()).ln() + log_g(params, k + 1),
            -p * log_inner + (1.0 / params.r() - 1.0).ln() + log_tail_sum(params, from),
            log_outer.exp(),
        )
    };
    Ok(ShellTerm {
        k,
        inner: log_inner.exp(),
        outer,
        lower: log_lower.exp(),
        upper: log_upper.exp(),
        log_lower,
        log_upper,
    })
}

/// The divergence test `t >= r^{2n+2}` shared by every classification path.
pub fn ratio_test(params: &ParamRT, n: u32) -> Comparison {
    cmp_to_power(&params.t, &params.r, &Scalar::integer(2 * n as i64 + 2))
}

/// `t / r^{2n+2}`, correctly rounded for exact parameters.
pub fn ratio_value(params: &ParamRT, n: u32) -> f64 {
    let p = 2 * n as i32 + 2;
    if params.r.is_exact() && params.t.is_exact() {
        return params.t.div(&params.r.powi(p)).value();
    }
    (params.t().ln() - p as f64 * params.r().ln()).exp()
}

pub fn gamma_verdict(params: &ParamRT, n: u32) -> Verdict {
    if ratio_test(params, n).is_ge() {
        Verdict::Divergent
    } else {
        Verdict::Finite
    }
}

/// Sum of shells `from..=to` plus the geometric tail past `to`.
struct Series {
    terms: Vec<ShellTerm>,
    lower: f64,
    upper: f64,
    tail_lower: f64,
    tail_upper: f64,
}

fn shell_series(params: &ParamRT, n: u32, from: u32, to: u32) -> Result<Series> {
    let terms: Vec<ShellTerm> = (from..=to)
        .into_par_iter()
        .map(|k| shell_term_bounds(params, n, k))
        .collect::<Result<_>>()?;
    let lower = terms.iter().map(|s| s.lower).sum();
    let upper = terms.iter().map(|s| s.upper).sum();
    let (tail_lower, tail_upper) = if ratio_test(params, n).is_ge() {
        (f64::INFINITY, f64::INFINITY)
    } else {
        // C_k >= B ρ^k and C_k <= A ρ^k with ρ = t / r^{2n+2}
        let (r, t) = (params.r(), params.t());
        let p = 2.0 * n as f64 + 2.0;
        let log_rho = t.ln() - p * r.ln();
        let log_geo = (to as f64 + 1.0) * log_rho - (-log_rho.exp_m1()).ln();
        let log_a = -p * LN_2 - p * r.ln() + (1.0 / r - 1.0).ln() - arc_offset(params) as f64 * t.ln()
            - (-t).ln_1p();
        let log_b = -p * LN_2 + (-r).ln_1p() + t.ln() - (t * -r.ln()).ln_1p();
        ((log_b + log_geo).exp(), (log_a + log_geo).exp())
    };
    Ok(Series {
        terms,
        lower,
        upper,
        tail_lower,
        tail_upper,
    })
}

/// Shell-series evaluation of `γ^{(n)}(0)` for D^{r,t} with the default truncation.
pub fn gamma_at_origin(params: &ParamRT, n: u32) -> GammaReport {
    gamma_at_origin_with(params, n, DEFAULT_K_MAX)
}

/// Shells from the first index through `k_max` are listed; the rest enter
/// through the closed-form geometric tail.
pub fn gamma_at_origin_with(params: &ParamRT, n: u32, k_max: u32) -> GammaReport {
    let test = ratio_test(params, n);
    let verdict = if test.is_ge() { Verdict::Divergent } else { Verdict::Finite };
    let first = first_shell_index(params);
    let last = k_max.max(first);
    let series = shell_series(params, n, first, last).expect("shells from the first index exist");
    let lower_sum = series.lower + series.tail_lower;
    let upper_sum = series.upper + series.tail_upper;
    GammaReport {
        n,
        z: Complex64::new(0.0, 0.0),
        method: GammaMethod::ShellSeries,
        verdict,
        value: (verdict == Verdict::Finite).then_some(upper_sum),
        lower_sum,
        upper_sum,
        shell_terms: series.terms,
        ratio: Some(ratio_value(params, n)),
        ratio_test: Some(test),
        ratio_one_boundary: test.is_eq(),
        out_of_stated_range: !params.in_stated_range(),
        truncation: Truncation {
            k_first: Some(first),
            k_last: Some(last),
            tail_lower: series.tail_lower,
            tail_upper: series.tail_upper,
            delta_min: None,
            unresolved_below: None,
            refinements: 0,
        },
        cells: Vec::new(),
        failure: None,
    }
}

/// How `cap` of the trapped set is obtained inside [`gamma_numeric`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CapacityPath {
    /// Closed forms per piece, combined by the largest-part and reciprocal-log bounds.
    ClosedForm,
    /// Fekete estimate of the whole trapped set; not a certified bracket.
    Fekete { n: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaQuadrature {
    pub delta_min: f64,
    pub cells_per_decade: usize,
    /// Bisections of the widest cell after the initial grid.
    pub max_refinements: usize,
    /// Stop refining once every cell gap is below this fraction of the upper sum.
    pub rel_tol: f64,
    pub divergence_threshold: f64,
    pub path: CapacityPath,
}

impl Default for GammaQuadrature {
    fn default() -> Self {
        GammaQuadrature {
            delta_min: 1e-12,
            cells_per_decade: 8,
            max_refinements: 200,
            rel_tol: 1e-3,
            divergence_threshold: 1e6,
            path: CapacityPath::ClosedForm,
        }
    }
}

/// Upper bound for the reciprocal-log mass of family arcs missing from a
/// truncated D^{r,t} (beyond `k_max`, or replaced by points).
fn missing_family_mass(domain: &DomainSpec) -> f64 {
    domain.family.as_ref().map_or(0.0, |f| {
        let first_missing = f.degenerate_arcs.first().copied().unwrap_or(f.k_max + 1).min(f.k_max + 1);
        let t = f.params.t();
        (first_missing as f64 * t.ln()).exp() / (1.0 - t)
    })
}

fn h_of(set: &CompactSet, path: CapacityPath, upper: bool) -> Result<f64> {
    if set.is_polar() {
        return Ok(0.0);
    }
    match path {
        CapacityPath::ClosedForm => {
            let b = set_union_bounds(set)?;
            Ok(if upper { b.reciprocal_sum } else { b.lower.reciprocal_log() })
        }
        CapacityPath::Fekete { n, seed } => {
            let est = fekete_log_capacity(set, &FeketeConfig::new(n, seed))?;
            if est.log_capacity.log_value() >= 0.0 {
                return Err(Error::BoundRegime(est.log_capacity.log_value()));
            }
            Ok(est.log_capacity.reciprocal_log())
        }
    }
}

/// `ln ∫_a^b δ^{-p} dδ`.
fn log_power_integral(a: f64, b: f64, p: f64) -> f64 {
    (1.0 - p) * a.ln() + (-((p - 1.0) * (a / b).ln()).exp_m1()).ln() - (p - 1.0).ln()
}

fn bracket_cell(
    domain: &DomainSpec,
    z: Complex64,
    n: u32,
    a: f64,
    b: f64,
    path: CapacityPath,
    extra: f64,
) -> Result<CellBracket> {
    let h_lower = h_of(&trapped_obstacles(domain, z, a), path, false)?;
    let mut h_upper = h_of(&trapped_obstacles_open(domain, z, b), path, true)?;
    if extra > 0.0 && b >= z.norm() {
        h_upper += extra;
    }
    let log_int = log_power_integral(a, b, 2.0 * n as f64 + 3.0);
    let scaled = |h: f64| if h > 0.0 { (h.ln() + log_int).exp() } else { 0.0 };
    Ok(CellBracket {
        a,
        b,
        h_lower,
        h_upper,
        lower: scaled(h_lower),
        upper: scaled(h_upper),
    })
}

/// Brackets on the cells of a fixed, increasing grid of δ values.
pub fn gamma_bracket_on_grid(
    domain: &DomainSpec,
    z: Complex64,
    n: u32,
    grid: &[f64],
    path: CapacityPath,
) -> Result<Vec<CellBracket>> {
    if grid.windows(2).any(|w| !(w[0] < w[1])) || grid.first().is_some_and(|&g| !(g > 0.0)) {
        return Err(Error::param("grid", "need a strictly increasing positive grid"));
    }
    let extra = missing_family_mass(domain);
    grid.par_windows(2)
        .map(|w| bracket_cell(domain, z, n, w[0], w[1], path, extra))
        .collect()
}

/// Breakpoints where the trapped set changes abruptly, plus a log grid.
pub fn default_grid(domain: &DomainSpec, z: Complex64, lo: f64, hi: f64, cells_per_decade: usize) -> Vec<f64> {
    let mut pts = vec![lo, hi];
    let decades = (hi / lo).log10();
    let cells = (decades * cells_per_decade as f64).ceil().max(1.0) as usize;
    let step = (hi / lo).ln() / cells as f64;
    pts.extend((1..cells).map(|i| lo * (i as f64 * step).exp()));
    for o in &domain.obstacles {
        pts.push(o.distance_to(z));
        pts.push(o.max_distance_to(z));
    }
    if let (Some(f), true) = (&domain.family, z.norm() == 0.0) {
        let first = first_shell_index(&f.params);
        let ln_r = f.params.r().ln();
        let mut k = first;
        loop {
            let b = (LN_2 + (k as f64 + 1.0) * ln_r).exp();
            if b < lo {
                break;
            }
            pts.push(b);
            k += 1;
        }
    }
    pts.retain(|&p| p >= lo && p <= hi && p.is_finite());
    pts.sort_by(|a, b| a.total_cmp(b));
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-14 * b.abs());
    pts
}

/// Quadrature evaluation of `γ^{(n)}(z)` on `[δ_min, 1/4]` with bracketed cells.
///
/// For D^{r,t} at the origin, `δ_min` is moved down to the nearest shell
/// boundary and the shells below it enter through [`shell_term_bounds`].
/// Elsewhere the part below `δ_min` is zero when the trapped set there is
/// polar and is otherwise reported as unresolved.
pub fn gamma_numeric(domain: &DomainSpec, z: Complex64, n: u32, quad: &GammaQuadrature) -> Result<GammaReport> {
    if !domain.closure_contains(z) {
        return Err(Error::OutsideDomain {
            re: z.re,
            im: z.im,
            reason: "not in the closure of the domain".into(),
        });
    }
    if !(quad.delta_min > 0.0 && quad.delta_min < 0.25) {
        return Err(Error::param("delta_min", "need 0 < delta_min < 1/4"));
    }
    let family_origin = domain.family.as_ref().filter(|_| z.norm() == 0.0);
    let mut lo = quad.delta_min;
    let mut tail = (0.0, 0.0);
    let mut unresolved_below = None;
    let mut k_range = (None, None);
    let mut ratio = None;
    let mut test = None;
    let mut out_of_range = false;
    if let Some(f) = family_origin {
        let p = &f.params;
        let first = first_shell_index(p);
        let ln_r = p.r().ln();
        let mut kk = first;
        while LN_2 + (kk as f64 + 1.0) * ln_r > quad.delta_min.ln() {
            kk += 1;
        }
        lo = (LN_2 + (kk as f64 + 1.0) * ln_r).exp();
        let series = shell_series(p, n, kk + 1, DEFAULT_K_MAX.max(kk + 1))?;
        tail = (series.lower + series.tail_lower, series.upper + series.tail_upper);
        k_range = (Some(first), Some(kk));
        ratio = Some(ratio_value(p, n));
        test = Some(ratio_test(p, n));
        out_of_range = !p.in_stated_range();
    } else if !trapped_obstacles(domain, z, quad.delta_min).is_polar() {
        unresolved_below = Some(quad.delta_min);
    }

    let grid = default_grid(domain, z, lo, 0.25, quad.cells_per_decade);
    let extra = missing_family_mass(domain);
    let mut failure = None;
    let mut cells: Vec<CellBracket> = Vec::new();
    let evaluated: Vec<Result<CellBracket>> = grid
        .par_windows(2)
        .map(|w| bracket_cell(domain, z, n, w[0], w[1], quad.path, extra))
        .collect();
    for (w, c) in grid.windows(2).zip(evaluated) {
        match c {
            Ok(c) => cells.push(c),
            Err(e) => {
                failure.get_or_insert(CellFailure {
                    a: w[0],
                    b: w[1],
                    reason: e.to_string(),
                });
            }
        }
    }
    let mut refinements = 0;
    if failure.is_none() {
        while refinements < quad.max_refinements {
            let upper: f64 = cells.iter().map(|c| c.upper).sum();
            let lower: f64 = cells.iter().map(|c| c.lower).sum();
            if !upper.is_finite() || lower > quad.divergence_threshold {
                break;
            }
            let (idx, gap) = cells
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.upper - c.lower))
                .fold((0, f64::NEG_INFINITY), |acc, x| if x.1 > acc.1 { x } else { acc });
            if gap <= quad.rel_tol * upper {
                break;
            }
            let c = cells[idx];
            let mid = (c.a * c.b).sqrt();
            if !(mid > c.a && mid < c.b) {
                break;
            }
            let halves = [
                bracket_cell(domain, z, n, c.a, mid, quad.path, extra),
                bracket_cell(domain, z, n, mid, c.b, quad.path, extra),
            ];
            match halves {
                [Ok(l), Ok(r)] => {
                    cells.splice(idx..=idx, [l, r]);
                }
                [Err(e), _] | [_, Err(e)] => {
                    failure = Some(CellFailure {
                        a: c.a,
                        b: c.b,
                        reason: e.to_string(),
                    });
                    break;
                }
            }
            refinements += 1;
        }
    }

    let cell_lower: f64 = cells.iter().map(|c| c.lower).sum();
    let cell_upper: f64 = cells.iter().map(|c| c.upper).sum();
    let lower_sum = cell_lower + tail.0;
    let upper_sum = cell_upper + tail.1;
    let verdict = if lower_sum > quad.divergence_threshold || lower_sum.is_infinite() {
        Verdict::Divergent
    } else if failure.is_some() || unresolved_below.is_some() || !upper_sum.is_finite() {
        Verdict::Inconclusive
    } else {
        Verdict::Finite
    };

    let shell_terms = match family_origin {
        Some(f) => group_by_shell(&f.params, &cells),
        None => Vec::new(),
    };
    Ok(GammaReport {
        n,
        z,
        method: GammaMethod::Quadrature,
        verdict,
        value: (verdict == Verdict::Finite).then_some(upper_sum),
        lower_sum,
        upper_sum,
        shell_terms,
        ratio,
        ratio_test: test,
        ratio_one_boundary: test.is_some_and(|t| t.is_eq()),
        out_of_stated_range: out_of_range,
        truncation: Truncation {
            k_first: k_range.0,
            k_last: k_range.1,
            tail_lower: tail.0,
            tail_upper: tail.1,
            delta_min: Some(lo),
            unresolved_below,
            refinements,
        },
        cells,
        failure,
    })
}

/// Numeric brackets summed over each shell of the decomposition.
fn group_by_shell(params: &ParamRT, cells: &[CellBracket]) -> Vec<ShellTerm> {
    let first = first_shell_index(params);
    let ln_r = params.r().ln();
    let mut out: Vec<ShellTerm> = Vec::new();
    for c in cells {
        // shell k covers [2r^{k+1}, 2r^k]; use the cell's geometric midpoint
        let mid = 0.5 * (c.a.ln() + c.b.ln());
        let k = (((mid - LN_2) / ln_r - 1.0).ceil().max(first as f64)) as u32;
        match out.last_mut() {
            Some(s) if s.k == k => {
                s.lower += c.lower;
                s.upper += c.upper;
                s.inner = s.inner.min(c.a);
                s.outer = s.outer.max(c.b);
            }
            _ => out.push(ShellTerm {
                k,
                inner: c.a,
                outer: c.b,
                lower: c.lower,
                upper: c.upper,
                log_lower: 0.0,
                log_upper: 0.0,
            }),
        }
    }
    for s in &mut out {
        s.log_lower = s.lower.ln();
        s.log_upper = s.upper.ln();
    }
    out.sort_by_key(|s| s.k);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DomainClass {
    ExhaustiveHenceComplete,
    NotComplete,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub params: ParamRT,
    pub class: DomainClass,
    pub gamma0: Verdict,
    pub gamma1: Verdict,
    pub ratio_n0: f64,
    pub ratio_n1: f64,
    pub test_n0: Comparison,
    pub test_n1: Comparison,
    /// `t = r^4`: classified NotComplete by hypothesis although the n = 1
    /// shell series has ratio one and is not finite.
    pub ratio_one_boundary: bool,
    pub near_boundary: bool,
    pub out_of_stated_range: bool,
}

/// `t >= r^2`: exhaustive at every boundary point, hence complete.
/// `t <= r^4`: not complete. Otherwise unknown.
pub fn classify_domain(params: &ParamRT) -> Classification {
    let test_n0 = ratio_test(params, 0);
    let test_n1 = ratio_test(params, 1);
    let class = if test_n0.is_ge() {
        DomainClass::ExhaustiveHenceComplete
    } else if test_n1.is_le() {
        DomainClass::NotComplete
    } else {
        DomainClass::Unknown
    };
    Classification {
        params: params.clone(),
        class,
        gamma0: gamma_verdict(params, 0),
        gamma1: gamma_verdict(params, 1),
        ratio_n0: ratio_value(params, 0),
        ratio_n1: ratio_value(params, 1),
        test_n0,
        test_n1,
        ratio_one_boundary: class == DomainClass::NotComplete && test_n1.is_eq(),
        near_boundary: test_n0.near_boundary || test_n1.near_boundary,
        out_of_stated_range: !params.in_stated_range(),
    }
}
