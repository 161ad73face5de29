//! Planar domains of the form "disc minus compact obstacles", and the slit
//! family D^{r,t} whose arcs shrink like `sin(half_width/2) = exp(-t^{-k})`.
//!
//! Arc widths for that family underflow almost immediately (t = 1/32, k = 2
//! already gives e^{-1024}), so arcs carry `log_sin_quarter` as their source
//! of truth and `half_width` only when it is representable.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{cmp_to_power, Scalar};

/// Default truncation index for the arc family.
pub const DEFAULT_K_MAX: u32 = 200;

/// Absolute tolerance for circle/disc intersection tests.
pub const GEOM_TOL: f64 = 1e-12;

/// Below this magnitude we never exponentiate a log-domain quantity.
const MAX_EXP_MAGNITUDE: f64 = 700.0;

/// Below this, `arcsin(x)` is replaced by `x`.
const SMALL_SINE: f64 = 1e-8;

/// Clipped arcs narrower than this (in log) degrade to points.
const LOG_MIN_WIDTH: f64 = -690.0; // ln(1e-300)

/// Parameters (r, t) of the slit family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamRT {
    pub r: Scalar,
    pub t: Scalar,
}

impl ParamRT {
    /// Validates `0 < r < 1` and `0 < t < 1/2`.
    pub fn new(r: Scalar, t: Scalar) -> Result<Self> {
        let zero = Scalar::integer(0);
        if !(r.cmp_value(&zero).ordering.is_gt() && r.cmp_value(&Scalar::integer(1)).ordering.is_lt())
        {
            return Err(Error::param("r", format!("need 0 < r < 1, got {r}")));
        }
        if !(t.cmp_value(&zero).ordering.is_gt() && t.cmp_value(&Scalar::ratio(1, 2)).ordering.is_lt())
        {
            return Err(Error::param("t", format!("need 0 < t < 1/2, got {t}")));
        }
        Ok(ParamRT { r, t })
    }

    pub fn from_f64(r: f64, t: f64) -> Result<Self> {
        Self::new(Scalar::from_f64(r), Scalar::from_f64(t))
    }

    /// Exact rational parameters `r = rn/rd`, `t = tn/td`.
    pub fn ratio(rn: i64, rd: i64, tn: i64, td: i64) -> Result<Self> {
        Self::new(Scalar::ratio(rn, rd), Scalar::ratio(tn, td))
    }

    pub fn r(&self) -> f64 {
        self.r.value()
    }

    pub fn t(&self) -> f64 {
        self.t.value()
    }

    /// The family is originally stated for r < 1/4; larger r is admitted but flagged.
    pub fn in_stated_range(&self) -> bool {
        self.r.cmp_value(&Scalar::ratio(1, 4)).ordering.is_lt()
    }

    /// `r <= 1/2`, needed for every shell to trap exactly one arc.
    pub fn shells_available(&self) -> bool {
        self.r.cmp_value(&Scalar::ratio(1, 2)).is_le()
    }

    pub fn label(&self) -> String {
        format!("D^{{{},{}}}", self.r, self.t)
    }
}

/// Arc `{radius * e^{iθ} : |θ - center_angle| <= half_width}` around the origin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcObstacle {
    pub radius: f64,
    pub log_radius: f64,
    pub center_angle: f64,
    /// Zero when the true width is below the f64 range; `log_sin_quarter` is authoritative.
    pub half_width: f64,
    /// `ln(sin(half_width / 2))`.
    pub log_sin_quarter: f64,
    /// `t^{-k}` overflowed; the arc is treated as a point.
    pub degenerate: bool,
}

impl ArcObstacle {
    pub fn new(radius: f64, center_angle: f64, half_width: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::param("radius", format!("need radius > 0, got {radius}")));
        }
        if !(half_width > 0.0 && half_width <= PI) {
            return Err(Error::param(
                "half_width",
                format!("need half_width in (0, pi], got {half_width}"),
            ));
        }
        Ok(ArcObstacle {
            radius,
            log_radius: radius.ln(),
            center_angle,
            half_width,
            log_sin_quarter: (half_width / 2.0).sin().ln(),
            degenerate: false,
        })
    }

    /// Builds an arc from log-domain data. `half_width` is recovered only when representable.
    pub fn from_logs(log_radius: f64, center_angle: f64, log_sin_quarter: f64) -> Self {
        let degenerate = !log_sin_quarter.is_finite();
        let half_width = if degenerate || log_sin_quarter < -MAX_EXP_MAGNITUDE {
            0.0
        } else {
            let s = log_sin_quarter.exp();
            if s < SMALL_SINE {
                2.0 * s
            } else {
                2.0 * s.min(1.0).asin()
            }
        };
        ArcObstacle {
            radius: log_radius.exp(),
            log_radius,
            center_angle,
            half_width,
            log_sin_quarter,
            degenerate,
        }
    }

    /// Natural log of the half width, valid even when `half_width` underflows.
    pub fn log_half_width(&self) -> f64 {
        if self.half_width > 0.0 && self.log_sin_quarter > -MAX_EXP_MAGNITUDE {
            self.half_width.ln()
        } else {
            // half_width = 2 asin(s) ~ 2 s for tiny s
            std::f64::consts::LN_2 + self.log_sin_quarter
        }
    }

    pub fn width_representable(&self) -> bool {
        self.half_width > 0.0
    }

    pub fn point_at(&self, angle: f64) -> Complex64 {
        Complex64::from_polar(self.radius, angle)
    }

    pub fn endpoints(&self) -> (Complex64, Complex64) {
        (
            self.point_at(self.center_angle - self.half_width),
            self.point_at(self.center_angle + self.half_width),
        )
    }

    pub fn midpoint(&self) -> Complex64 {
        self.point_at(self.center_angle)
    }

    fn contains_angle(&self, phi: f64, tol: f64) -> bool {
        wrap_angle(phi - self.center_angle).abs() <= self.half_width + tol
    }

    /// Euclidean distance from `p` to the arc.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        let m = p.norm();
        if m == 0.0 {
            return self.radius;
        }
        if self.contains_angle(p.arg(), 0.0) {
            return (m - self.radius).abs();
        }
        let (a, b) = self.endpoints();
        (p - a).norm().min((p - b).norm())
    }

    /// Largest distance from `p` to a point of the arc.
    pub fn max_distance_to(&self, p: Complex64) -> f64 {
        let m = p.norm();
        if m == 0.0 {
            return self.radius;
        }
        if self.contains_angle(p.arg() + PI, 0.0) {
            return m + self.radius;
        }
        let (a, b) = self.endpoints();
        (p - a).norm().max((p - b).norm())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscObstacle {
    pub center: Complex64,
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentObstacle {
    pub a: Complex64,
    pub b: Complex64,
}

impl SegmentObstacle {
    pub fn length(&self) -> f64 {
        (self.b - self.a).norm()
    }

    pub fn distance_to(&self, p: Complex64) -> f64 {
        let d = self.b - self.a;
        let len2 = d.norm_sqr();
        if len2 == 0.0 {
            return (p - self.a).norm();
        }
        let s = (((p - self.a) * d.conj()).re / len2).clamp(0.0, 1.0);
        (p - (self.a + d * s)).norm()
    }

    /// Parameter interval `{s in [0,1] : |a + s(b-a) - c| <= rho}`.
    fn clip_to_disc(&self, c: Complex64, rho: f64) -> Option<(f64, f64)> {
        let d = self.b - self.a;
        let f = self.a - c;
        let qa = d.norm_sqr();
        if qa == 0.0 {
            return (f.norm() <= rho + GEOM_TOL).then_some((0.0, 1.0));
        }
        let qb = 2.0 * (f * d.conj()).re;
        let qc = f.norm_sqr() - rho * rho;
        let disc = qb * qb - 4.0 * qa * qc;
        if disc < 0.0 {
            return None;
        }
        let sq = disc.sqrt();
        let s0 = ((-qb - sq) / (2.0 * qa)).max(0.0);
        let s1 = ((-qb + sq) / (2.0 * qa)).min(1.0);
        (s0 <= s1).then_some((s0, s1))
    }
}

/// A removed compact piece of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Obstacle {
    Arc(ArcObstacle),
    Disc(DiscObstacle),
    Segment(SegmentObstacle),
    Point { at: Complex64 },
}

impl Obstacle {
    pub fn point(at: Complex64) -> Self {
        Obstacle::Point { at }
    }

    pub fn distance_to(&self, p: Complex64) -> f64 {
        match self {
            Obstacle::Arc(a) => a.distance_to(p),
            Obstacle::Disc(d) => ((p - d.center).norm() - d.radius).max(0.0),
            Obstacle::Segment(s) => s.distance_to(p),
            Obstacle::Point { at } => (p - at).norm(),
        }
    }

    pub fn max_distance_to(&self, p: Complex64) -> f64 {
        match self {
            Obstacle::Arc(a) => a.max_distance_to(p),
            Obstacle::Disc(d) => (p - d.center).norm() + d.radius,
            Obstacle::Segment(s) => (p - s.a).norm().max((p - s.b).norm()),
            Obstacle::Point { at } => (p - at).norm(),
        }
    }

    fn max_modulus(&self) -> f64 {
        self.max_distance_to(Complex64::new(0.0, 0.0))
    }

    /// Whether the two closed sets meet.
    pub fn intersects(&self, other: &Obstacle) -> bool {
        use Obstacle::*;
        // relative tolerance so that the family's tiny arcs stay apart from the origin
        let tol = GEOM_TOL * self.max_modulus().max(other.max_modulus()).min(1.0);
        match (self, other) {
            (Point { at }, o) | (o, Point { at }) => o.distance_to(*at) <= tol,
            (Disc(d), o) | (o, Disc(d)) => o.distance_to(d.center) <= d.radius + tol,
            (Segment(s), Segment(u)) => segments_intersect(s, u),
            (Segment(s), Arc(a)) | (Arc(a), Segment(s)) => match s.clip_to_disc(0.0.into(), a.radius) {
                None => false,
                Some(_) => {
                    // crossings of |w| = radius along the segment
                    crossing_params(s, a.radius)
                        .into_iter()
                        .any(|p| a.contains_angle(p.arg(), tol))
                }
            },
            (Arc(a), Arc(b)) => {
                (a.radius - b.radius).abs() <= GEOM_TOL * a.radius.max(b.radius)
                    && wrap_angle(a.center_angle - b.center_angle).abs()
                        <= a.half_width + b.half_width + GEOM_TOL
            }
        }
    }
}

fn crossing_params(s: &SegmentObstacle, radius: f64) -> Vec<Complex64> {
    let d = s.b - s.a;
    let qa = d.norm_sqr();
    if qa == 0.0 {
        return if (s.a.norm() - radius).abs() <= GEOM_TOL { vec![s.a] } else { vec![] };
    }
    let qb = 2.0 * (s.a * d.conj()).re;
    let qc = s.a.norm_sqr() - radius * radius;
    let disc = qb * qb - 4.0 * qa * qc;
    if disc < 0.0 {
        return vec![];
    }
    let sq = disc.sqrt();
    [(-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa)]
        .into_iter()
        .filter(|u| (-GEOM_TOL..=1.0 + GEOM_TOL).contains(u))
        .map(|u| s.a + d * u)
        .collect()
}

fn segments_intersect(s: &SegmentObstacle, u: &SegmentObstacle) -> bool {
    fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
        ((b - a).conj() * (c - a)).im
    }
    let d1 = orient(u.a, u.b, s.a);
    let d2 = orient(u.a, u.b, s.b);
    let d3 = orient(s.a, s.b, u.a);
    let d4 = orient(s.a, s.b, u.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    s.distance_to(u.a) <= GEOM_TOL
        || s.distance_to(u.b) <= GEOM_TOL
        || u.distance_to(s.a) <= GEOM_TOL
        || u.distance_to(s.b) <= GEOM_TOL
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut x = a.rem_euclid(2.0 * PI);
    if x > PI {
        x -= 2.0 * PI;
    }
    x
}

/// Open disc of radius `outer_radius` about the origin minus a finite list of obstacles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainSpec {
    pub outer_radius: f64,
    pub obstacles: Vec<Obstacle>,
    pub label: String,
    /// Set when the domain is a truncation of D^{r,t}.
    pub family: Option<FamilyInfo>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyInfo {
    pub params: ParamRT,
    pub k_max: u32,
    /// Arcs whose `t^{-k}` overflowed and were replaced by points.
    pub degenerate_arcs: Vec<u32>,
}

impl DomainSpec {
    pub fn new(outer_radius: f64, obstacles: Vec<Obstacle>, label: impl Into<String>) -> Result<Self> {
        if !(outer_radius > 0.0 && outer_radius.is_finite()) {
            return Err(Error::param("outer_radius", format!("need > 0, got {outer_radius}")));
        }
        for (i, o) in obstacles.iter().enumerate() {
            if o.max_modulus() > outer_radius + GEOM_TOL {
                return Err(Error::InvalidDomain(format!(
                    "obstacle {i} leaves the closed disc of radius {outer_radius}"
                )));
            }
            if let Obstacle::Disc(d) = o {
                if !(d.radius > 0.0) {
                    return Err(Error::InvalidDomain(format!("disc obstacle {i} has radius {}", d.radius)));
                }
            }
        }
        for i in 0..obstacles.len() {
            for j in i + 1..obstacles.len() {
                if obstacles[i].intersects(&obstacles[j]) {
                    return Err(Error::InvalidDomain(format!("obstacles {i} and {j} intersect")));
                }
            }
        }
        Ok(DomainSpec {
            outer_radius,
            obstacles,
            label: label.into(),
            family: None,
        })
    }

    pub fn unit_disc() -> Self {
        DomainSpec {
            outer_radius: 1.0,
            obstacles: Vec::new(),
            label: "unit disc".into(),
            family: None,
        }
    }

    pub fn punctured_disc() -> Self {
        DomainSpec {
            outer_radius: 1.0,
            obstacles: vec![Obstacle::point(0.0.into())],
            label: "punctured unit disc".into(),
            family: None,
        }
    }

    /// `inner < |z| < 1`.
    pub fn annulus(inner: f64) -> Result<Self> {
        if !(inner > 0.0 && inner < 1.0) {
            return Err(Error::param("inner", format!("need 0 < inner < 1, got {inner}")));
        }
        Self::new(
            1.0,
            vec![Obstacle::Disc(DiscObstacle {
                center: 0.0.into(),
                radius: inner,
            })],
            format!("annulus {inner} < |z| < 1"),
        )
    }

    pub fn with_obstacle(mut self, o: Obstacle) -> Result<Self> {
        let label = self.label.clone();
        self.obstacles.push(o);
        let mut d = Self::new(self.outer_radius, self.obstacles, label)?;
        d.family = self.family;
        Ok(d)
    }

    /// Whether `z` lies in the open domain.
    pub fn contains(&self, z: Complex64) -> bool {
        z.norm() < self.outer_radius && self.obstacles.iter().all(|o| o.distance_to(z) > GEOM_TOL)
    }

    /// Whether `z` lies in the closure of the domain (obstacles with empty
    /// interior belong to the closure).
    pub fn closure_contains(&self, z: Complex64) -> bool {
        z.norm() <= self.outer_radius + GEOM_TOL
            && self.obstacles.iter().all(|o| match o {
                Obstacle::Disc(d) => (z - d.center).norm() >= d.radius - GEOM_TOL,
                _ => true,
            })
    }
}

/// Arc `k` of D^{r,t}: radius `r^k`, centered on the positive real axis,
/// `sin(half_width/2) = exp(-t^{-k})`.
pub fn make_arc(params: &ParamRT, k: u32) -> Result<ArcObstacle> {
    family_arc(params.r(), params.t(), k)
}

/// Same construction for raw `0 < r < 1`, `0 < t < 1`, without the family's `t < 1/2`.
pub fn family_arc(r: f64, t: f64, k: u32) -> Result<ArcObstacle> {
    if k == 0 {
        return Err(Error::param("k", "arc index starts at 1"));
    }
    if !(r > 0.0 && r < 1.0) || !(t > 0.0 && t < 1.0) {
        return Err(Error::param("r, t", format!("need r, t in (0, 1), got ({r}, {t})")));
    }
    let log_radius = k as f64 * r.ln();
    let t_pow = (-(k as f64) * t.ln()).exp(); // t^{-k}, may be +inf
    Ok(ArcObstacle::from_logs(log_radius, 0.0, -t_pow))
}

/// Arcs `1..=k_max` of D^{r,t} plus the origin.
///
/// Arcs whose radius is below the f64 range end the construction early; the
/// effective truncation is recorded in [`FamilyInfo::k_max`].
pub fn build_domain(params: &ParamRT, k_max: u32) -> Result<DomainSpec> {
    if k_max == 0 {
        return Err(Error::param("k_max", "need k_max >= 1"));
    }
    let mut obstacles = Vec::with_capacity(k_max as usize + 1);
    let mut degenerate_arcs = Vec::new();
    let mut last = 0;
    for k in 1..=k_max {
        let arc = make_arc(params, k)?;
        if arc.radius < f64::MIN_POSITIVE {
            break;
        }
        last = k;
        if arc.degenerate {
            degenerate_arcs.push(k);
            obstacles.push(Obstacle::point(arc.midpoint()));
        } else {
            obstacles.push(Obstacle::Arc(arc));
        }
    }
    obstacles.push(Obstacle::point(0.0.into()));
    Ok(DomainSpec {
        outer_radius: 1.0,
        obstacles,
        label: format!("{} (k_max = {last})", params.label()),
        family: Some(FamilyInfo {
            params: params.clone(),
            k_max: last,
            degenerate_arcs,
        }),
    })
}

/// Annular shell of the radial decomposition of `[0, 1/4]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    pub index: u32,
    pub inner_radius: f64,
    pub outer_radius: f64,
    pub log_inner: f64,
    pub log_outer: f64,
    /// The outermost shell, ending at 1/4.
    pub is_first: bool,
    /// Index of the arc whose radius lies in the shell, if any.
    pub trapped_arc: Option<u32>,
}

/// First shell index: the least `k >= 1` with `2 r^{k+1} < 1/4`.
pub fn first_shell_index(params: &ParamRT) -> u32 {
    let quarter_over_two = Scalar::ratio(1, 8);
    let mut k = 1u32;
    // 2 r^{k+1} < 1/4  <=>  1/8 > r^{k+1}
    while cmp_to_power(&quarter_over_two, &params.r, &Scalar::integer(k as i64 + 1)).is_le() {
        k += 1;
    }
    k
}

/// Shell `k`: `[2r^{k+1}, 1/4]` for the first shell, `[2r^{k+1}, 2r^k]` after it.
pub fn shell(params: &ParamRT, k: u32) -> Result<Shell> {
    if !params.shells_available() {
        return Err(Error::ShellDecomposition(format!(
            "r = {} > 1/2: shells no longer separate consecutive arcs",
            params.r
        )));
    }
    let first = first_shell_index(params);
    if k < first {
        return Err(Error::EmptyShell { k, first_valid: first });
    }
    let ln_r = params.r().ln();
    let ln2 = std::f64::consts::LN_2;
    let log_inner = ln2 + (k as f64 + 1.0) * ln_r;
    let is_first = k == first;
    let log_outer = if is_first { (0.25f64).ln() } else { ln2 + k as f64 * ln_r };
    let log_arc = k as f64 * ln_r;
    let slack = 1e-12 * log_inner.abs();
    let trapped_arc = (log_arc >= log_inner - slack && log_arc <= log_outer + slack).then_some(k);
    debug_assert!(is_first || trapped_arc == Some(k) || !params.shells_available());
    Ok(Shell {
        index: k,
        inner_radius: log_inner.exp(),
        outer_radius: log_outer.exp(),
        log_inner,
        log_outer,
        is_first,
        trapped_arc,
    })
}

/// A compact set given as a finite union of pieces.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CompactSet {
    pub pieces: Vec<Piece>,
}

/// Piece of a compact set. `Lens` is a disc obstacle clipped by another disc.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Piece {
    Arc(ArcObstacle),
    Disc(DiscObstacle),
    Segment(SegmentObstacle),
    Point { at: Complex64 },
    Lens { disc: DiscObstacle, clip: DiscObstacle },
}

impl From<Obstacle> for Piece {
    fn from(o: Obstacle) -> Self {
        match o {
            Obstacle::Arc(a) => Piece::Arc(a),
            Obstacle::Disc(d) => Piece::Disc(d),
            Obstacle::Segment(s) => Piece::Segment(s),
            Obstacle::Point { at } => Piece::Point { at },
        }
    }
}

impl CompactSet {
    pub fn new(pieces: Vec<Piece>) -> Self {
        CompactSet { pieces }
    }

    pub fn from_obstacles(obstacles: impl IntoIterator<Item = Obstacle>) -> Self {
        CompactSet::new(obstacles.into_iter().map(Piece::from).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// True when every piece is a point (or there are none).
    pub fn is_polar(&self) -> bool {
        self.pieces.iter().all(|p| match p {
            Piece::Point { .. } => true,
            Piece::Arc(a) => a.degenerate,
            _ => false,
        })
    }

    /// Geometric containment `other ⊆ self`, checked piecewise: every piece
    /// of `other` must lie inside a single piece of `self`.
    pub fn contains_set(&self, other: &CompactSet) -> bool {
        other
            .pieces
            .iter()
            .all(|small| self.pieces.iter().any(|big| piece_contains(big, small)))
    }
}

fn piece_distance(piece: &Piece, p: Complex64) -> f64 {
    match piece {
        Piece::Arc(a) => a.distance_to(p),
        Piece::Disc(d) => ((p - d.center).norm() - d.radius).max(0.0),
        Piece::Segment(s) => s.distance_to(p),
        Piece::Point { at } => (p - at).norm(),
        Piece::Lens { disc, clip } => {
            let a = ((p - disc.center).norm() - disc.radius).max(0.0);
            let b = ((p - clip.center).norm() - clip.radius).max(0.0);
            a.max(b)
        }
    }
}

fn disc_contains_disc(big: &DiscObstacle, small: &DiscObstacle) -> bool {
    (big.center - small.center).norm() + small.radius <= big.radius + GEOM_TOL
}

fn piece_contains(big: &Piece, small: &Piece) -> bool {
    use Piece::*;
    match (big, small) {
        (_, Point { at }) => piece_distance(big, *at) <= GEOM_TOL,
        (Arc(b), Arc(s)) => {
            (b.log_radius - s.log_radius).abs() <= GEOM_TOL
                && wrap_angle(s.center_angle - b.center_angle).abs() + s.half_width <= b.half_width + GEOM_TOL
        }
        (Disc(d), Arc(s)) => s.max_distance_to(d.center) <= d.radius + GEOM_TOL,
        (Disc(d), Segment(s)) => {
            (s.a - d.center).norm() <= d.radius + GEOM_TOL && (s.b - d.center).norm() <= d.radius + GEOM_TOL
        }
        (Disc(d), Disc(s)) => disc_contains_disc(d, s),
        (Disc(d), Lens { disc, clip }) => disc_contains_disc(d, disc) || disc_contains_disc(d, clip),
        (Segment(b), Segment(s)) => b.distance_to(s.a) <= GEOM_TOL && b.distance_to(s.b) <= GEOM_TOL,
        (Lens { disc, clip }, Lens { disc: d2, clip: c2 }) => disc == d2 && disc_contains_disc(clip, c2),
        (Lens { disc, clip }, Disc(s)) => disc_contains_disc(disc, s) && disc_contains_disc(clip, s),
        _ => false,
    }
}

/// Part of the removed set inside the closed disc of radius `delta` about `center`.
///
/// Arcs partially inside are clipped to their angular intersection, discs
/// partially inside become lenses, segments are cut to sub-segments.
pub fn trapped_obstacles(domain: &DomainSpec, center: Complex64, delta: f64) -> CompactSet {
    let mut pieces = Vec::new();
    for o in &domain.obstacles {
        clip_obstacle(o, center, delta, &mut pieces);
    }
    CompactSet { pieces }
}

/// Like [`trapped_obstacles`] for the open disc: obstacles that only touch
/// the boundary circle are left out. This is the left limit in `delta` of the
/// trapped set.
pub fn trapped_obstacles_open(domain: &DomainSpec, center: Complex64, delta: f64) -> CompactSet {
    let mut pieces = Vec::new();
    let cut = delta * (1.0 - GEOM_TOL);
    for o in domain.obstacles.iter().filter(|o| o.distance_to(center) < cut) {
        clip_obstacle(o, center, delta, &mut pieces);
    }
    CompactSet { pieces }
}

fn clip_obstacle(o: &Obstacle, z: Complex64, delta: f64, out: &mut Vec<Piece>) {
    let tol = GEOM_TOL * delta;
    match o {
        Obstacle::Point { at } => {
            if (at - z).norm() <= delta + tol {
                out.push(Piece::Point { at: *at });
            }
        }
        Obstacle::Disc(d) => {
            let dist = (d.center - z).norm();
            if dist + d.radius <= delta + tol {
                out.push(Piece::Disc(*d));
            } else if dist > d.radius + delta + tol {
            } else if dist >= d.radius + delta - tol {
                // tangent: a single point
                let dir = if dist > 0.0 { (z - d.center) / dist } else { 1.0.into() };
                out.push(Piece::Point { at: d.center + dir * d.radius });
            } else if dist + delta <= d.radius + tol {
                out.push(Piece::Disc(DiscObstacle { center: z, radius: delta }));
            } else {
                out.push(Piece::Lens {
                    disc: *d,
                    clip: DiscObstacle { center: z, radius: delta },
                });
            }
        }
        Obstacle::Segment(s) => {
            if let Some((s0, s1)) = s.clip_to_disc(z, delta) {
                if s0 <= 0.0 && s1 >= 1.0 {
                    out.push(Piece::Segment(*s));
                } else {
                    let d = s.b - s.a;
                    let (a, b) = (s.a + d * s0, s.a + d * s1);
                    if (b - a).norm() <= f64::MIN_POSITIVE {
                        out.push(Piece::Point { at: a });
                    } else {
                        out.push(Piece::Segment(SegmentObstacle { a, b }));
                    }
                }
            }
        }
        Obstacle::Arc(a) => clip_arc(a, z, delta, out),
    }
}

fn clip_arc(arc: &ArcObstacle, z: Complex64, delta: f64, out: &mut Vec<Piece>) {
    let tol = GEOM_TOL * delta;
    if arc.degenerate || !arc.width_representable() {
        // numerically a point: keep the whole arc iff its midpoint is inside
        if (arc.midpoint() - z).norm() <= delta + tol {
            out.push(Piece::Arc(*arc));
        }
        return;
    }
    let zm = z.norm();
    let radius = arc.radius;
    if zm == 0.0 {
        if radius <= delta + tol {
            out.push(Piece::Arc(*arc));
        }
        return;
    }
    // points R e^{iθ} with cos(θ - φ) >= kappa are within delta of z
    let kappa = (radius * radius + zm * zm - delta * delta) / (2.0 * radius * zm);
    let visible_half = if kappa <= -1.0 {
        PI
    } else if kappa > 1.0 {
        // nearest point still within tolerance?
        if (radius - zm).abs() <= delta + tol && arc.contains_angle(z.arg(), GEOM_TOL) {
            out.push(Piece::Point {
                at: Complex64::from_polar(radius, z.arg()),
            });
        }
        return;
    } else {
        kappa.acos()
    };
    let arc_len = 2.0 * arc.half_width;
    let start = arc.center_angle - arc.half_width;
    if visible_half >= PI - GEOM_TOL {
        out.push(Piece::Arc(*arc));
        return;
    }
    let vis_len = 2.0 * visible_half;
    let d = (z.arg() - visible_half - start).rem_euclid(2.0 * PI);
    let mut intervals = Vec::with_capacity(2);
    if d <= arc_len + GEOM_TOL {
        intervals.push((d, (d + vis_len).min(arc_len)));
    }
    if d + vis_len > 2.0 * PI {
        intervals.push((0.0, (d + vis_len - 2.0 * PI).min(arc_len)));
    }
    for (lo, hi) in intervals {
        let lo = lo.max(0.0);
        let hi = hi.min(arc_len);
        if hi < lo {
            continue;
        }
        if lo <= GEOM_TOL && hi >= arc_len - GEOM_TOL {
            out.push(Piece::Arc(*arc));
            continue;
        }
        let half = 0.5 * (hi - lo);
        let mid = start + 0.5 * (lo + hi);
        if half <= 0.0 || half.ln() < LOG_MIN_WIDTH {
            out.push(Piece::Point {
                at: Complex64::from_polar(radius, mid),
            });
        } else {
            out.push(Piece::Arc(ArcObstacle {
                radius,
                log_radius: arc.log_radius,
                center_angle: mid,
                half_width: half,
                log_sin_quarter: (half / 2.0).sin().ln(),
                degenerate: false,
            }));
        }
    }
}

/// Scans `|x|` on a log grid along the ray `direction` from 0 and returns the
/// largest tested modulus for which `trapped(x, δ) ⊆ trapped(0, δ)` holds at
/// every tested `δ` (and at every smaller tested modulus).
pub fn containment_threshold(
    domain: &DomainSpec,
    direction: Complex64,
    moduli: &[f64],
    deltas: &[f64],
) -> Option<f64> {
    let dir = direction / direction.norm();
    let mut best = None;
    let mut sorted = moduli.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    for m in sorted {
        let x = dir * m;
        let ok = deltas.iter().all(|&d| {
            trapped_obstacles(domain, 0.0.into(), d).contains_set(&trapped_obstacles(domain, x, d))
        });
        if !ok {
            break;
        }
        best = Some(m);
    }
    best
}
