//! Constants and primitive predicates shared by every other module.
//!
//! All lengths are measured in units of the unit-disk radius. Disks are
//! closed: a point at distance exactly 1 from a center is covered.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const SQRT_3: f64 = 1.732_050_807_568_877_3;

/// Radius of the disk that fits between three mutually tangent unit disks, `2/√3 − 1`.
pub const HOLE_RADIUS: f64 = 0.154_700_538_379_251_53;

/// Area of the fundamental domain of the close-packing lattice, `2√3`.
pub const FUNDAMENTAL_AREA: f64 = 3.464_101_615_137_754_6;

/// Uncovered area per fundamental domain of the close packing, `2√3 − π`.
pub const INTERSTITIUM_AREA: f64 = 0.322_508_961_547_961_3;

/// Module-wide tolerance for floating-point geometric comparisons.
pub const EPS: f64 = 1e-9;

/// Minimum distance of the close-packing lattice `H`.
pub const CLOSE_PACKING_DIST: f64 = 2.0;

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Validating constructor used at every external boundary.
    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Self { x, y })
        } else {
            Err(Error::NonFinite { x, y })
        }
    }

    #[inline]
    pub fn polar(radius: f64, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        Self::new(radius * c, radius * s)
    }

    #[inline]
    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    #[inline]
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn midpoint(self, other: Point2) -> Point2 {
        Point2::new(0.5 * (self.x + other.x), 0.5 * (self.y + other.y))
    }

    #[inline]
    pub fn rotate(self, angle: f64) -> Point2 {
        let (s, c) = angle.sin_cos();
        Point2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(self) -> f64 {
        normalize_angle(self.y.atan2(self.x))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Lexicographic order on `(x, y)`.
    pub fn lex_cmp(&self, other: &Point2) -> std::cmp::Ordering {
        self.x.total_cmp(&other.x).then(self.y.total_cmp(&other.y))
    }
}

impl fmt::Display for Point2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl TryFrom<[f64; 2]> for Point2 {
    type Error = Error;

    fn try_from([x, y]: [f64; 2]) -> Result<Self> {
        Point2::try_new(x, y)
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2 {
    type Output = Point2;
    #[inline]
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Point2 {
    #[inline]
    fn add_assign(&mut self, o: Point2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Point2 {
    type Output = Point2;
    #[inline]
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Point2 {
    #[inline]
    fn sub_assign(&mut self, o: Point2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    #[inline]
    fn mul(self, k: f64) -> Point2 {
        Point2::new(self.x * k, self.y * k)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    #[inline]
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Wraps an angle into `[0, 2π)`.
pub fn normalize_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly TAU for tiny negative inputs
    if a >= TAU {
        0.0
    } else {
        a
    }
}

/// A closed disk.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: Point2,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: Point2, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "disk radius must be positive, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }

    pub fn unit(center: Point2) -> Self {
        Self {
            center,
            radius: 1.0,
        }
    }

    pub fn hole(center: Point2) -> Self {
        Self {
            center,
            radius: HOLE_RADIUS,
        }
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.center.dist(p) <= self.radius + EPS
    }

    /// True when the interiors of the two disks are disjoint.
    pub fn interior_disjoint(&self, other: &Disk) -> bool {
        self.center.dist(other.center) >= self.radius + other.radius - EPS
    }
}

/// Rigid motion: rotation about the origin by `angle`, then translation by `shift`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pose {
    pub angle: f64,
    pub shift: Point2,
}

impl Default for Pose {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Pose {
    pub const IDENTITY: Pose = Pose {
        angle: 0.0,
        shift: Point2::ORIGIN,
    };

    pub fn new(angle: f64, shift: Point2) -> Self {
        Self {
            angle: normalize_angle(angle),
            shift,
        }
    }

    #[inline]
    pub fn apply(&self, p: Point2) -> Point2 {
        p.rotate(self.angle) + self.shift
    }

    #[inline]
    pub fn apply_inverse(&self, p: Point2) -> Point2 {
        (p - self.shift).rotate(-self.angle)
    }

    /// Lexicographic order on `(angle, shift.x, shift.y)`, used for deterministic tie-breaking.
    pub fn lex_cmp(&self, other: &Pose) -> std::cmp::Ordering {
        self.angle
            .total_cmp(&other.angle)
            .then(self.shift.lex_cmp(&other.shift))
    }
}

/// Hexagonal lattice with basis `(d, 0)` and `(d/2, √3 d/2)`, moved by a pose.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HexLattice {
    min_dist: f64,
    pose: Pose,
    frame: LatticeFrame,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct LatticeFrame {
    b1: Point2,
    b2: Point2,
    cos: f64,
    sin: f64,
}

impl LatticeFrame {
    fn build(d: f64, angle: f64) -> Self {
        let (sin, cos) = angle.sin_cos();
        let b1 = Point2::new(d * cos, d * sin);
        let e2 = Point2::new(0.5 * d, 0.5 * SQRT_3 * d);
        let b2 = Point2::new(cos * e2.x - sin * e2.y, sin * e2.x + cos * e2.y);
        Self { b1, b2, cos, sin }
    }
}

impl HexLattice {
    pub fn new(min_dist: f64, pose: Pose) -> Result<Self> {
        if !(min_dist > 0.0 && min_dist.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "lattice minimum distance must be positive, got {min_dist}"
            )));
        }
        let pose = Pose::new(pose.angle, pose.shift);
        Ok(Self {
            min_dist,
            pose,
            frame: LatticeFrame::build(min_dist, pose.angle),
        })
    }

    /// The close-packing lattice `H`: minimum distance 2, identity pose.
    pub fn close_packing() -> Self {
        Self::new(CLOSE_PACKING_DIST, Pose::IDENTITY).expect("valid constant lattice")
    }

    pub fn min_dist(&self) -> f64 {
        self.min_dist
    }

    pub fn pose(&self) -> Pose {
        self.pose
    }

    pub fn basis(&self) -> (Point2, Point2) {
        (self.frame.b1, self.frame.b2)
    }

    /// Maximum distance from any plane point to the nearest lattice point, `d/√3`.
    pub fn covering_radius(&self) -> f64 {
        self.min_dist / SQRT_3
    }

    /// Area of one fundamental cell, `√3 d² / 2`.
    pub fn cell_area(&self) -> f64 {
        0.5 * SQRT_3 * self.min_dist * self.min_dist
    }

    #[inline]
    pub fn point(&self, i: i64, j: i64) -> Point2 {
        self.pose.shift + self.frame.b1 * i as f64 + self.frame.b2 * j as f64
    }

    /// Real coordinates `(a, b)` with `p = shift + a·b1 + b·b2`.
    #[inline]
    pub fn coords(&self, p: Point2) -> (f64, f64) {
        let q = p - self.pose.shift;
        // rotate back into the lattice frame, then solve against the unrotated basis
        let lx = self.frame.cos * q.x + self.frame.sin * q.y;
        let ly = -self.frame.sin * q.x + self.frame.cos * q.y;
        let b = 2.0 * ly / (SQRT_3 * self.min_dist);
        let a = lx / self.min_dist - 0.5 * b;
        (a, b)
    }

    /// A closest lattice point to `p` and its distance. The distance never exceeds `d/√3`.
    pub fn nearest(&self, p: Point2) -> (Point2, f64) {
        let (a, b) = self.coords(p);
        let (i0, j0) = (a.floor() as i64, b.floor() as i64);
        let mut best = (self.point(i0, j0), f64::INFINITY);
        // the Delaunay triangle holding p has its vertices among the rhombus corners
        for (di, dj) in [(0, 0), (1, 0), (0, 1), (1, 1)] {
            let q = self.point(i0 + di, j0 + dj);
            let dist = q.dist(p);
            if dist < best.1 {
                best = (q, dist);
            }
        }
        best
    }

    /// Reduces `p` into the Voronoi cell of the lattice point at the pose origin.
    ///
    /// Ties on the cell boundary resolve to the lexicographically smallest representative.
    pub fn reduce(&self, p: Point2) -> Point2 {
        let (a, b) = self.coords(p);
        let (i0, j0) = (a.floor() as i64, b.floor() as i64);
        let origin = self.pose.shift;
        let mut candidates: Vec<(f64, Point2)> = Vec::with_capacity(16);
        for di in -1..=2 {
            for dj in -1..=2 {
                let v = self.point(i0 + di, j0 + dj) - origin;
                let residue = p - v;
                candidates.push(((residue - origin).norm_sq(), residue));
            }
        }
        let min = candidates.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        let tol = 1e-12 * (1.0 + min + self.min_dist * self.min_dist);
        candidates
            .into_iter()
            .filter(|c| c.0 <= min + tol)
            .map(|c| c.1)
            .min_by(Point2::lex_cmp)
            .expect("non-empty candidate window")
    }

    /// Enumerates the lattice points whose coordinates fall in the axis-aligned box.
    pub fn points_in_box(&self, lo: Point2, hi: Point2) -> Vec<Point2> {
        let corners = [lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)];
        let (mut amin, mut amax, mut bmin, mut bmax) = (
            f64::INFINITY,
            f64::NEG_INFINITY,
            f64::INFINITY,
            f64::NEG_INFINITY,
        );
        for c in corners {
            let (a, b) = self.coords(c);
            amin = amin.min(a);
            amax = amax.max(a);
            bmin = bmin.min(b);
            bmax = bmax.max(b);
        }
        let mut out = Vec::new();
        for i in (amin.floor() as i64 - 1)..=(amax.ceil() as i64 + 1) {
            for j in (bmin.floor() as i64 - 1)..=(bmax.ceil() as i64 + 1) {
                let q = self.point(i, j);
                if q.x >= lo.x && q.x <= hi.x && q.y >= lo.y && q.y <= hi.y {
                    out.push(q);
                }
            }
        }
        out
    }
}

/// Reduces `p` into the canonical fundamental cell of `lattice`.
pub fn reduce_to_fundamental(p: Point2, lattice: &HexLattice) -> Point2 {
    lattice.reduce(p)
}

/// A closest point of `lattice` to `p`, with its distance.
pub fn nearest_lattice_point(p: Point2, lattice: &HexLattice) -> (Point2, f64) {
    lattice.nearest(p)
}

/// `x.floor()` through an integer cast, which avoids a libm call on baseline x86-64.
#[inline]
fn floor_fast(x: f64) -> f64 {
    if x.abs() < 4.0e15 {
        let t = x as i64 as f64;
        if t > x {
            t - 1.0
        } else {
            t
        }
    } else {
        x.floor()
    }
}

/// Distance from `p` to the nearest point of the close-packing lattice `H`.
///
/// Specialised hot path of [`HexLattice::nearest`] for `d = 2`, identity pose.
#[inline]
pub fn dist_to_close_packing(p: Point2) -> f64 {
    let b = p.y / SQRT_3;
    let a = 0.5 * p.x - 0.5 * b;
    let (fa, fb) = (floor_fast(a), floor_fast(b));
    let base = Point2::new(2.0 * fa + fb, SQRT_3 * fb);
    let r = p - base;
    let mut best = r.norm_sq();
    for off in [
        Point2::new(2.0, 0.0),
        Point2::new(1.0, SQRT_3),
        Point2::new(3.0, SQRT_3),
    ] {
        best = best.min((r - off).norm_sq());
    }
    best.sqrt()
}

/// Whether a unit disk of the close packing `H + t` covers `p`.
#[inline]
pub fn covered_by_packing(p: Point2, t: Point2) -> bool {
    dist_to_close_packing(p - t) <= 1.0
}

/// True iff `p` lies in the interstitium of the close packing translated by `t`.
///
/// Disks are closed, so distance exactly 1 from a center counts as covered.
#[inline]
pub fn point_in_interstitium(p: Point2, t: Point2) -> bool {
    !covered_by_packing(p, t)
}

/// Smallest enclosing circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnclosingCircle {
    pub center: Point2,
    pub radius: f64,
}

impl EnclosingCircle {
    fn point(p: Point2) -> Self {
        Self {
            center: p,
            radius: 0.0,
        }
    }

    fn diameter(a: Point2, b: Point2) -> Self {
        let center = a.midpoint(b);
        Self {
            center,
            radius: center.dist(a).max(center.dist(b)),
        }
    }

    fn through(a: Point2, b: Point2, c: Point2) -> Self {
        let ab = b - a;
        let ac = c - a;
        let det = 2.0 * ab.cross(ac);
        let scale = ab.norm_sq().max(ac.norm_sq());
        if det.abs() <= 1e-14 * scale {
            // collinear: the farthest pair spans the circle
            let pairs = [(a, b), (a, c), (b, c)];
            let (p, q) = pairs
                .into_iter()
                .max_by(|x, y| x.0.dist(x.1).total_cmp(&y.0.dist(y.1)))
                .unwrap();
            return Self::diameter(p, q);
        }
        let ux = (ac.y * ab.norm_sq() - ab.y * ac.norm_sq()) / det;
        let uy = (ab.x * ac.norm_sq() - ac.x * ab.norm_sq()) / det;
        let center = a + Point2::new(ux, uy);
        let radius = center.dist(a).max(center.dist(b)).max(center.dist(c));
        Self { center, radius }
    }

    pub fn contains(&self, p: Point2) -> bool {
        self.center.dist(p) <= self.radius * (1.0 + 1e-12) + 1e-12
    }
}

/// Minimum enclosing circle by the incremental Welzl construction.
pub fn min_enclosing_circle(points: &[Point2]) -> Result<EnclosingCircle> {
    let (&first, rest) = points.split_first().ok_or(Error::EmptyInput)?;
    let mut circle = EnclosingCircle::point(first);
    for (i, &p) in rest.iter().enumerate() {
        if circle.contains(p) {
            continue;
        }
        circle = EnclosingCircle::point(p);
        for j in 0..=i {
            let q = points[j];
            if circle.contains(q) {
                continue;
            }
            circle = EnclosingCircle::diameter(p, q);
            for &s in &points[..j] {
                if !circle.contains(s) {
                    circle = EnclosingCircle::through(p, q, s);
                }
            }
        }
    }
    Ok(circle)
}

/// Monte Carlo estimate of the uncovered area per fundamental domain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub samples: u64,
}

pub const MIN_MC_SAMPLES: u64 = 10_000;

/// Estimates the interstitium area of `lattice` (which must be the close packing,
/// in any pose) by uniform sampling of one fundamental cell.
pub fn interstitium_area_mc(lattice: &HexLattice, samples: u64, seed: u64) -> Result<AreaEstimate> {
    if (lattice.min_dist() - CLOSE_PACKING_DIST).abs() > EPS {
        return Err(Error::UnsupportedLattice {
            min_dist: lattice.min_dist(),
        });
    }
    if samples < MIN_MC_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "at least {MIN_MC_SAMPLES} samples required, got {samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (b1, b2) = (Point2::new(2.0, 0.0), Point2::new(1.0, SQRT_3));
    let mut uncovered = 0u64;
    for _ in 0..samples {
        let u: f64 = rng.random();
        let v: f64 = rng.random();
        if point_in_interstitium(b1 * u + b2 * v, Point2::ORIGIN) {
            uncovered += 1;
        }
    }
    let f = uncovered as f64 / samples as f64;
    Ok(AreaEstimate {
        estimate: f * FUNDAMENTAL_AREA,
        std_error: FUNDAMENTAL_AREA * (f * (1.0 - f) / samples as f64).sqrt(),
        samples,
    })
}

/// The two deep holes (barycenters of lattice triangles) in the cell at the origin of `H + t`.
pub fn deep_holes(t: Point2) -> [Point2; 2] {
    [
        t + Point2::new(1.0, SQRT_3 / 3.0),
        t + Point2::new(2.0, 2.0 * SQRT_3 / 3.0),
    ]
}
