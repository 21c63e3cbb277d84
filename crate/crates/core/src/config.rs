//! The hard configuration: lattice points of a fine hexagonal lattice that fall
//! strictly inside a `(2 + 4r) × (1 + 3r)` rectangle.
//!
//! Any packing of unit disks leaves a hole inside the rectangle, and every hole
//! contains a point of a lattice with `d < √3 r`, so the intersection cannot be
//! covered. The lattice pose is searched to minimise the point count.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{HexLattice, Point2, Pose, EPS, HOLE_RADIUS, SQRT_3};

/// Long side of the rectangle, `2 + 4r`.
pub const RECT_WIDTH: f64 = 2.0 + 4.0 * HOLE_RADIUS;
/// Short side of the rectangle, `1 + 3r`.
pub const RECT_HEIGHT: f64 = 1.0 + 3.0 * HOLE_RADIUS;

/// Largest admissible lattice minimum distance, `√3 r` (exclusive).
pub fn critical_min_dist() -> f64 {
    SQRT_3 * HOLE_RADIUS
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardRectangle {
    pub width: f64,
    pub height: f64,
    pub pose: Pose,
}

impl Default for HardRectangle {
    fn default() -> Self {
        Self::standard()
    }
}

impl HardRectangle {
    /// The rectangle centered at the origin with its long side horizontal.
    pub fn standard() -> Self {
        Self {
            width: RECT_WIDTH,
            height: RECT_HEIGHT,
            pose: Pose::IDENTITY,
        }
    }

    pub fn with_size(width: f64, height: f64) -> Self {
        Self {
            width,
            height,
            pose: Pose::IDENTITY,
        }
    }

    #[inline]
    pub fn to_local(&self, p: Point2) -> Point2 {
        self.pose.apply_inverse(p)
    }

    /// Distance to the boundary, positive inside and negative outside.
    #[inline]
    pub fn signed_clearance(&self, p: Point2) -> f64 {
        let q = self.to_local(p);
        let dx = 0.5 * self.width - q.x.abs();
        let dy = 0.5 * self.height - q.y.abs();
        if dx > 0.0 && dy > 0.0 {
            dx.min(dy)
        } else {
            -(dx.min(0.0).hypot(dy.min(0.0)))
        }
    }

    #[inline]
    pub fn contains_strict(&self, p: Point2) -> bool {
        self.signed_clearance(p) > 0.0
    }

    pub fn corners(&self) -> [Point2; 4] {
        let (w, h) = (0.5 * self.width, 0.5 * self.height);
        [
            Point2::new(-w, -h),
            Point2::new(w, -h),
            Point2::new(w, h),
            Point2::new(-w, h),
        ]
        .map(|c| self.pose.apply(c))
    }

    /// World-space bounding box of the rectangle grown by `margin` on every side.
    fn bounding_box(&self, margin: f64) -> (Point2, Point2) {
        let (w, h) = (0.5 * self.width + margin, 0.5 * self.height + margin);
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for c in [
            Point2::new(-w, -h),
            Point2::new(w, -h),
            Point2::new(w, h),
            Point2::new(-w, h),
        ] {
            let c = self.pose.apply(c);
            lo = Point2::new(lo.x.min(c.x), lo.y.min(c.y));
            hi = Point2::new(hi.x.max(c.x), hi.y.max(c.y));
        }
        (lo, hi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardConfiguration {
    pub points: Vec<Point2>,
    pub lattice_min_dist: f64,
    pub pose: Pose,
    /// Smallest distance from any lattice point near the rectangle to its boundary.
    pub boundary_clearance: f64,
    pub rectangle: HardRectangle,
}

impl HardConfiguration {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn lattice(&self) -> HexLattice {
        HexLattice::new(self.lattice_min_dist, self.pose).expect("validated at construction")
    }

    pub fn to_file(&self) -> PointSetFile {
        PointSetFile {
            d: self.lattice_min_dist,
            pose: self.pose,
            points: self.points.clone(),
        }
    }
}

/// Interchange format for configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub d: f64,
    pub pose: Pose,
    pub points: Vec<Point2>,
}

/// Calls `f` with every lattice point within `margin` of the rectangle's bounding box.
fn for_each_nearby(
    lattice: &HexLattice,
    rect: &HardRectangle,
    margin: f64,
    mut f: impl FnMut(Point2),
) {
    let (lo, hi) = rect.bounding_box(margin);
    let corners = [lo, Point2::new(hi.x, lo.y), hi, Point2::new(lo.x, hi.y)];
    let (mut amin, mut amax, mut bmin, mut bmax) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for c in corners {
        let (a, b) = lattice.coords(c);
        amin = amin.min(a);
        amax = amax.max(a);
        bmin = bmin.min(b);
        bmax = bmax.max(b);
    }
    for i in (amin.floor() as i64)..=(amax.ceil() as i64) {
        for j in (bmin.floor() as i64)..=(bmax.ceil() as i64) {
            let q = lattice.point(i, j);
            if q.x >= lo.x && q.x <= hi.x && q.y >= lo.y && q.y <= hi.y {
                f(q);
            }
        }
    }
}

/// Count of interior lattice points and the boundary clearance, without allocating.
fn count_and_clearance(lattice: &HexLattice, rect: &HardRectangle) -> (usize, f64) {
    let mut count = 0;
    let mut clearance = f64::INFINITY;
    for_each_nearby(lattice, rect, lattice.min_dist(), |q| {
        let s = rect.signed_clearance(q);
        if s > 0.0 {
            count += 1;
        }
        clearance = clearance.min(s.abs());
    });
    (count, clearance)
}

fn validate_min_dist(d: f64) -> Result<()> {
    if d > 0.0 && d.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "lattice minimum distance must be positive, got {d}"
        )))
    }
}

/// All lattice points of `H_d` (posed) strictly inside the standard rectangle.
pub fn generate_configuration(d: f64, pose: Pose) -> Result<HardConfiguration> {
    generate_in(HardRectangle::standard(), d, pose)
}

/// As [`generate_configuration`] for an arbitrary rectangle.
pub fn generate_in(rect: HardRectangle, d: f64, pose: Pose) -> Result<HardConfiguration> {
    validate_min_dist(d)?;
    let lattice = HexLattice::new(d, pose)?;
    let mut points = Vec::new();
    let mut clearance = f64::INFINITY;
    for_each_nearby(&lattice, &rect, d, |q| {
        let s = rect.signed_clearance(q);
        if s > 0.0 {
            points.push(q);
        }
        clearance = clearance.min(s.abs());
    });
    points.sort_by(|a, b| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)));
    Ok(HardConfiguration {
        points,
        lattice_min_dist: d,
        pose: lattice.pose(),
        boundary_clearance: clearance,
        rectangle: rect,
    })
}

/// Rebuilds `cfg` with the lattice scaled by `factor` about the rectangle center.
pub fn compress(cfg: &HardConfiguration, factor: f64) -> Result<HardConfiguration> {
    let center = cfg.rectangle.pose.shift;
    let shift = center + (cfg.pose.shift - center) * factor;
    generate_in(
        cfg.rectangle,
        cfg.lattice_min_dist * factor,
        Pose::new(cfg.pose.angle, shift),
    )
}

/// True iff no lattice point lies within `EPS` of the rectangle boundary, so the
/// lattice can be compressed slightly without changing the point set.
pub fn verify_compressibility(cfg: &HardConfiguration) -> bool {
    cfg.boundary_clearance > EPS
}

/// Grid parameters of the pose search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseGrid {
    /// Rotation samples over `[0, π/3)`.
    pub angles: usize,
    /// Translation samples per lattice basis direction over one cell.
    pub shifts: usize,
    /// Coordinate-descent refinement after the grid pass.
    pub refine: bool,
}

impl Default for PoseGrid {
    fn default() -> Self {
        Self {
            angles: 720,
            shifts: 64,
            refine: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseSearch {
    pub pose: Pose,
    pub count: usize,
    pub clearance: f64,
    /// Count and clearance at the best grid pose, before refinement.
    pub grid_count: usize,
    pub grid_clearance: f64,
    pub evaluated: usize,
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    count: usize,
    clearance: f64,
    pose: Pose,
}

impl Candidate {
    // fewer points first, then larger clearance, then the lexicographically smaller pose
    fn better_than(&self, other: &Candidate) -> bool {
        self.cmp_key(other) == Ordering::Less
    }

    fn cmp_key(&self, other: &Candidate) -> Ordering {
        self.count
            .cmp(&other.count)
            .then(other.clearance.total_cmp(&self.clearance))
            .then(self.pose.lex_cmp(&other.pose))
    }
}

/// Pose for rotation `angle` and translation `(u, v)` in units of the rotated basis.
fn pose_from_params(d: f64, angle: f64, u: f64, v: f64) -> Pose {
    let angle = angle.rem_euclid(PI / 3.0);
    let lattice = HexLattice::new(d, Pose::new(angle, Point2::ORIGIN)).expect("d validated");
    let (b1, b2) = lattice.basis();
    Pose::new(angle, b1 * u.rem_euclid(1.0) + b2 * v.rem_euclid(1.0))
}

fn evaluate(d: f64, rect: &HardRectangle, angle: f64, u: f64, v: f64) -> Candidate {
    let pose = pose_from_params(d, angle, u, v);
    let lattice = HexLattice::new(d, pose).expect("d validated");
    let (count, clearance) = count_and_clearance(&lattice, rect);
    Candidate {
        count,
        clearance,
        pose,
    }
}

/// Searches lattice poses minimising the number of interior points at the default grid.
pub fn optimize_pose(d: f64) -> Result<PoseSearch> {
    optimize_pose_with(d, PoseGrid::default())
}

/// Grid search over rotation `[0, π/3)` and one lattice cell of translations, then
/// coordinate descent. Among poses of equal count the largest boundary clearance wins.
pub fn optimize_pose_with(d: f64, grid: PoseGrid) -> Result<PoseSearch> {
    validate_min_dist(d)?;
    if d > critical_min_dist() * (1.0 + 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "pose search requires d <= √3 r, got {d}"
        )));
    }
    if grid.angles == 0 || grid.shifts == 0 {
        return Err(Error::InvalidArgument("empty pose grid".into()));
    }
    let rect = HardRectangle::standard();
    let (na, ns) = (grid.angles, grid.shifts);
    let angle_step = PI / 3.0 / na as f64;
    let shift_step = 1.0 / ns as f64;

    let best = (0..na)
        .into_par_iter()
        .map(|k| {
            let angle = k as f64 * angle_step;
            let mut best: Option<(Candidate, [f64; 3])> = None;
            for i in 0..ns {
                for j in 0..ns {
                    let (u, v) = (i as f64 * shift_step, j as f64 * shift_step);
                    let c = evaluate(d, &rect, angle, u, v);
                    if best.as_ref().is_none_or(|(b, _)| c.better_than(b)) {
                        best = Some((c, [angle, u, v]));
                    }
                }
            }
            best.expect("non-empty shift grid")
        })
        .reduce_with(|a, b| if b.0.better_than(&a.0) { b } else { a })
        .expect("non-empty angle grid");

    let (grid_best, mut params) = best;
    let mut current = grid_best;
    if grid.refine {
        let mut steps = [angle_step, shift_step, shift_step];
        let mut rounds = 0;
        while steps[1] > 1e-12 && rounds < 10_000 {
            rounds += 1;
            let mut improved = false;
            for axis in 0..3 {
                for sign in [1.0, -1.0] {
                    let mut trial = params;
                    trial[axis] += sign * steps[axis];
                    let c = evaluate(d, &rect, trial[0], trial[1], trial[2]);
                    if c.count < current.count
                        || (c.count == current.count && c.clearance > current.clearance)
                    {
                        current = c;
                        params = trial;
                        improved = true;
                    }
                }
            }
            if !improved {
                steps.iter_mut().for_each(|s| *s *= 0.5);
            }
        }
    }
    Ok(PoseSearch {
        pose: current.pose,
        count: current.count,
        clearance: current.clearance,
        grid_count: grid_best.count,
        grid_clearance: grid_best.clearance,
        evaluated: na * ns * ns,
    })
}

/// Vertical gap between the nearest lattice points above and below the rectangle,
/// over the points whose horizontal coordinate lies within it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FootnoteCheck {
    pub separation: f64,
    /// `11 √3 r / 2`, the separation for five interior points per lattice column.
    pub expected: f64,
    pub height: f64,
}

impl FootnoteCheck {
    pub fn holds(&self) -> bool {
        self.separation > self.height
    }
}

/// Lattice distance used for the reference configuration, just below `√3 r`.
pub fn reference_min_dist() -> f64 {
    (1.0 - 1e-6) * critical_min_dist()
}

/// The 55-point configuration: columns of the lattice parallel to the short side.
pub fn reference_configuration() -> HardConfiguration {
    let d = reference_min_dist();
    let pose = Pose::new(std::f64::consts::PI / 6.0, Point2::new(0.0, 0.25 * d));
    generate_configuration(d, pose).expect("reference distance is admissible")
}

pub fn footnote_check(cfg: &HardConfiguration) -> Option<FootnoteCheck> {
    let rect = cfg.rectangle;
    let lattice = cfg.lattice();
    let (mut above, mut below) = (f64::INFINITY, f64::NEG_INFINITY);
    for_each_nearby(&lattice, &rect, 2.0 * lattice.min_dist(), |q| {
        let local = rect.to_local(q);
        if local.x.abs() >= 0.5 * rect.width {
            return;
        }
        if local.y >= 0.5 * rect.height {
            above = above.min(local.y);
        } else if local.y <= -0.5 * rect.height {
            below = below.max(local.y);
        }
    });
    (above.is_finite() && below.is_finite()).then(|| FootnoteCheck {
        separation: above - below,
        expected: 11.0 * SQRT_3 * HOLE_RADIUS / 2.0,
        height: rect.height,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    // Independent oracle: scan a generous index window and test membership directly.
    fn scan_count(d: f64, pose: Pose, rect: &HardRectangle) -> usize {
        let lattice = HexLattice::new(d, pose).unwrap();
        let n = ((rect.width + rect.height + 4.0 * d + pose.shift.norm()) / d).ceil() as i64 + 4;
        let (w, h) = (0.5 * rect.width, 0.5 * rect.height);
        let mut count = 0;
        for i in -2 * n..=2 * n {
            for j in -2 * n..=2 * n {
                let q = rect.pose.apply_inverse(lattice.point(i, j));
                if q.x.abs() < w && q.y.abs() < h {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn rectangle_dimensions() {
        assert!((RECT_WIDTH - 2.618_802_15).abs() < 1e-8);
        assert!((RECT_HEIGHT - 1.464_101_62).abs() < 1e-8);
        let r = 2.0 / 3f64.sqrt() - 1.0;
        assert!((RECT_WIDTH - (2.0 + 4.0 * r)).abs() < 1e-12);
        assert!((RECT_HEIGHT - (1.0 + 3.0 * r)).abs() < 1e-12);
    }

    #[test]
    fn signed_clearance_inside_and_out() {
        let rect = HardRectangle::with_size(4.0, 2.0);
        assert!((rect.signed_clearance(Point2::ORIGIN) - 1.0).abs() < 1e-15);
        assert!((rect.signed_clearance(Point2::new(3.0, 0.0)) + 1.0).abs() < 1e-15);
        assert!(
            (rect.signed_clearance(Point2::new(5.0, 4.0)) + (9.0f64 + 9.0).sqrt()).abs() < 1e-12
        );
        assert_eq!(rect.signed_clearance(Point2::new(2.0, 0.5)), 0.0);
        assert!(!rect.contains_strict(Point2::new(2.0, 0.5)));
    }

    #[test]
    fn count_matches_exhaustive_scan_for_long_side_rows() {
        let d = critical_min_dist();
        for pose in [
            Pose::IDENTITY,
            Pose::new(0.4, Point2::new(0.05, 0.11)),
            Pose::new(PI / 6.0, Point2::new(-0.3, 0.2)),
        ] {
            let cfg = generate_configuration(d, pose).unwrap();
            assert_eq!(
                cfg.len(),
                scan_count(d, pose, &cfg.rectangle),
                "pose {pose:?}"
            );
            for p in &cfg.points {
                assert!(cfg.rectangle.signed_clearance(*p) >= cfg.boundary_clearance);
            }
        }
    }

    #[test]
    fn degenerate_rectangle_is_empty() {
        let cfg = generate_in(
            HardRectangle::with_size(0.0, RECT_HEIGHT),
            0.25,
            Pose::IDENTITY,
        )
        .unwrap();
        assert!(cfg.is_empty());
        assert!(generate_configuration(0.0, Pose::IDENTITY).is_err());
    }

    #[test]
    fn boundary_point_defeats_compressibility() {
        let d = critical_min_dist();
        // put a lattice point exactly on the top side
        let pose = Pose::new(0.0, Point2::new(0.0, 0.5 * RECT_HEIGHT));
        let cfg = generate_configuration(d, pose).unwrap();
        assert!(cfg.boundary_clearance < 1e-12);
        assert!(!verify_compressibility(&cfg));
    }

    #[test]
    fn footnote_pose_gives_55_points_and_the_stated_gap() {
        // Columns along the short side: rotate by π/6 so (0, d) is a lattice vector;
        // shift so the rows just outside sit at ±11d/4.
        let d = critical_min_dist();
        let pose = Pose::new(PI / 6.0, Point2::new(0.0, 0.25 * d));
        let cfg = generate_configuration(d, pose).unwrap();
        let check = footnote_check(&cfg).unwrap();
        // direct recomputation from the row geometry
        assert!((check.separation - 5.5 * d).abs() < 1e-12);
        assert!((check.expected - 1.4737).abs() < 5e-5);
        assert!((check.separation - 1.4737).abs() < 5e-5);
        assert!(check.holds());
        assert_eq!(cfg.len(), 55);
        assert_eq!(cfg.len(), scan_count(d, pose, &cfg.rectangle));
        let vertical_gap = (check.separation - RECT_HEIGHT) / 2.0;
        assert!(cfg.boundary_clearance <= vertical_gap + 1e-12);
        assert!(verify_compressibility(&cfg));
        let reference = reference_configuration();
        assert_eq!(reference.len(), 55);
        assert!(reference.boundary_clearance > 0.0);
    }

    #[test]
    fn coarse_search_dominates_identity() {
        let d = critical_min_dist();
        let grid = PoseGrid {
            angles: 12,
            shifts: 8,
            refine: true,
        };
        let search = optimize_pose_with(d, grid).unwrap();
        let identity = generate_configuration(d, Pose::IDENTITY).unwrap();
        assert!(search.count <= identity.len());
        assert!(search.count <= search.grid_count);
        let rebuilt = generate_configuration(d, search.pose).unwrap();
        assert_eq!(rebuilt.len(), search.count);
        assert!(optimize_pose_with(1.01 * d, grid).is_err());
    }

    #[test]
    fn grid_search_is_exhaustive_at_its_resolution() {
        let d = critical_min_dist();
        let grid = PoseGrid {
            angles: 6,
            shifts: 6,
            refine: false,
        };
        let search = optimize_pose_with(d, grid).unwrap();
        for k in 0..6 {
            for i in 0..6 {
                for j in 0..6 {
                    let pose =
                        pose_from_params(d, k as f64 * PI / 18.0, i as f64 / 6.0, j as f64 / 6.0);
                    let cfg = generate_configuration(d, pose).unwrap();
                    assert!(search.count <= cfg.len());
                }
            }
        }
    }

    #[test]
    fn compression_keeps_count_with_positive_clearance() {
        let d = critical_min_dist();
        let pose = Pose::new(PI / 6.0, Point2::new(0.0, 0.25 * d));
        let cfg = generate_configuration(d, pose).unwrap();
        for factor in [0.999_999, 0.9999, 0.999] {
            let small = compress(&cfg, factor).unwrap();
            assert_eq!(small.len(), cfg.len(), "factor {factor}");
            assert!(small.lattice_min_dist < d);
        }
    }

    #[test]
    fn point_set_file_round_trips() {
        let cfg = generate_configuration(0.3, Pose::new(0.2, Point2::new(0.01, 0.02))).unwrap();
        let json = serde_json::to_string(&cfg.to_file()).unwrap();
        let back: PointSetFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cfg.to_file());
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert!(v["pose"]["shift"].is_array() && v["points"][0].is_array());
    }
}
