//! Equilateral triangles inscribed in the interstitium and the exact tiling check.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::exact::{ExactPoint, QSqrt3};
use super::TranslateSet;
use crate::geometry::{Point2, HOLE_RADIUS, SQRT_3};

/// Side length of an inscribed triangle, `4 − 2√3`.
pub const TRIANGLE_SIDE: f64 = 4.0 - 2.0 * SQRT_3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Sits in a lattice triangle with a horizontal bottom edge; apex points down.
    Up,
    /// Sits in a lattice triangle with a horizontal top edge; apex points up.
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InscribedTriangle {
    pub vertices: [Point2; 3],
    pub centroid: Point2,
    pub orientation: Orientation,
}

impl InscribedTriangle {
    pub fn side(&self) -> f64 {
        self.vertices[0].dist(self.vertices[1])
    }

    pub fn contains(&self, p: Point2) -> bool {
        let [a, b, c] = self.vertices;
        let s0 = (b - a).cross(p - a);
        let s1 = (c - b).cross(p - b);
        let s2 = (a - c).cross(p - c);
        (s0 >= 0.0 && s1 >= 0.0 && s2 >= 0.0) || (s0 <= 0.0 && s1 <= 0.0 && s2 <= 0.0)
    }
}

// offsets from the deep hole, in units of r: (±√3, 1) and (0, −2) for Up
fn vertex_offsets(orientation: Orientation) -> [(f64, f64); 3] {
    let s = match orientation {
        Orientation::Up => 1.0,
        Orientation::Down => -1.0,
    };
    [(0.0, -2.0 * s), (SQRT_3, s), (-SQRT_3, s)]
}

/// The two triangles of side `4 − 2√3` centered at the deep holes of `H + t`.
pub fn inscribed_triangles(t: Point2) -> [InscribedTriangle; 2] {
    let holes = crate::geometry::deep_holes(t);
    let make = |c: Point2, orientation| {
        let off = vertex_offsets(orientation);
        let v = off.map(|(x, y)| c + Point2::new(x * HOLE_RADIUS, y * HOLE_RADIUS));
        InscribedTriangle {
            vertices: v,
            centroid: c,
            orientation,
        }
    };
    [
        make(holes[0], Orientation::Up),
        make(holes[1], Orientation::Down),
    ]
}

fn exact_triangles(t: &ExactPoint) -> [[ExactPoint; 3]; 2] {
    // r = 2√3/3 − 1 and √3·r = 2 − √3
    let r = QSqrt3::frac(-1, 1, 2, 3);
    let sr = QSqrt3::frac(2, 1, -1, 1);
    let two_r = &r + &r;
    let zero = QSqrt3::zero();
    let up = t.add(&ExactPoint::new(QSqrt3::int(1), QSqrt3::frac(0, 1, 1, 3)));
    let down = t.add(&ExactPoint::new(QSqrt3::int(2), QSqrt3::frac(0, 1, 2, 3)));
    let tri = |c: &ExactPoint, s: i64| {
        let sgn = QSqrt3::int(s);
        [
            c.add(&ExactPoint::new(zero.clone(), -(&two_r * &sgn))),
            c.add(&ExactPoint::new(sr.clone(), &r * &sgn)),
            c.add(&ExactPoint::new(-&sr, &r * &sgn)),
        ]
    };
    [tri(&up, 1), tri(&down, -1)]
}

struct Tri {
    v: [ExactPoint; 3],
    lo: Point2,
    hi: Point2,
}

impl Tri {
    fn new(v: [ExactPoint; 3]) -> Self {
        let f = v.clone().map(|p| p.to_point());
        let lo = Point2::new(
            f.iter().map(|p| p.x).fold(f64::INFINITY, f64::min),
            f.iter().map(|p| p.y).fold(f64::INFINITY, f64::min),
        );
        let hi = Point2::new(
            f.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max),
            f.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max),
        );
        Tri { v, lo, hi }
    }

    fn edges(&self) -> [(&ExactPoint, &ExactPoint); 3] {
        [
            (&self.v[0], &self.v[1]),
            (&self.v[1], &self.v[2]),
            (&self.v[2], &self.v[0]),
        ]
    }

    /// Vertical extent of the triangle on the line `x = xm`, assuming `xm` is not a vertex abscissa.
    fn section(&self, xm: &QSqrt3) -> Option<(QSqrt3, QSqrt3)> {
        let mut ys = Vec::with_capacity(2);
        for (p, q) in self.edges() {
            let (l, h) = if p.x < q.x {
                (&p.x, &q.x)
            } else {
                (&q.x, &p.x)
            };
            if l < xm && xm < h {
                let y = &p.y + &(&(xm - &p.x) * &(&(&q.y - &p.y) / &(&q.x - &p.x)));
                ys.push(y);
            }
        }
        match ys.len() {
            2 => {
                let (a, b) = (ys.pop()?, ys.pop()?);
                Some(if a < b { (a, b) } else { (b, a) })
            }
            _ => None,
        }
    }
}

/// Outcome of the exact tiling check with a witness when it fails.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TilingVerdict {
    pub covered: bool,
    /// A point of the plane not covered by any triangle, when `covered` is false.
    pub witness: Option<Point2>,
    pub triangles: usize,
    pub slabs: usize,
}

/// Decides exactly whether the inscribed triangles of every translate cover the plane.
///
/// Requires exact coordinates; translates built from floats use their binary values.
pub fn certify_triangle_tiling(ts: &TranslateSet) -> bool {
    certify_triangle_tiling_detailed(ts).covered
}

pub fn certify_triangle_tiling_detailed(ts: &TranslateSet) -> TilingVerdict {
    // The rectangle [0, 2] × [0, 2√3] is a union of two fundamental cells.
    let x_max = QSqrt3::int(2);
    let y_max = QSqrt3::frac(0, 1, 2, 1);
    let (fx, fy) = (2.0, 2.0 * SQRT_3);
    let slack = 1e-9;

    let mut tris: Vec<Tri> = Vec::new();
    for t in ts.exact_translates() {
        for base in exact_triangles(&t) {
            for j in -3..=4 {
                for i in -4..=4 {
                    let shift = ExactPoint::from_lattice_coords(i, j, 1);
                    let tri = Tri::new(base.clone().map(|v| v.add(&shift)));
                    if tri.hi.x < -slack || tri.lo.x > fx + slack {
                        continue;
                    }
                    if tri.hi.y < -slack || tri.lo.y > fy + slack {
                        continue;
                    }
                    tris.push(tri);
                }
            }
        }
    }

    let zero = QSqrt3::zero();
    let mut xs: Vec<QSqrt3> = vec![zero.clone(), x_max.clone()];
    let inside = |x: &QSqrt3| &zero < x && x < &x_max;
    for tri in &tris {
        for v in &tri.v {
            if inside(&v.x) {
                xs.push(v.x.clone());
            }
        }
    }
    for (a, ta) in tris.iter().enumerate() {
        for tb in &tris[a + 1..] {
            if ta.hi.x < tb.lo.x - slack
                || tb.hi.x < ta.lo.x - slack
                || ta.hi.y < tb.lo.y - slack
                || tb.hi.y < ta.lo.y - slack
            {
                continue;
            }
            for (p1, q1) in ta.edges() {
                for (p2, q2) in tb.edges() {
                    if let Some(x) = edge_crossing_x(p1, q1, p2, q2) {
                        if inside(&x) {
                            xs.push(x);
                        }
                    }
                }
            }
        }
    }
    xs.sort_by(|a, b| {
        let (fa, fb) = (a.to_f64(), b.to_f64());
        if (fa - fb).abs() > 1e-9 {
            fa.partial_cmp(&fb).unwrap_or(Ordering::Equal)
        } else {
            a.cmp(b)
        }
    });
    xs.dedup();

    let mut slabs = 0;
    for w in xs.windows(2) {
        slabs += 1;
        let xm = (&w[0] + &w[1]).half();
        let fxm = xm.to_f64();
        let mut intervals: Vec<(QSqrt3, QSqrt3)> = tris
            .iter()
            .filter(|t| t.lo.x - slack < fxm && fxm < t.hi.x + slack)
            .filter_map(|t| t.section(&xm))
            .collect();
        if let Some(gap) = first_gap(&mut intervals, &y_max) {
            return TilingVerdict {
                covered: false,
                witness: Some(Point2::new(fxm, gap.to_f64())),
                triangles: tris.len(),
                slabs,
            };
        }
    }
    TilingVerdict {
        covered: true,
        witness: None,
        triangles: tris.len(),
        slabs,
    }
}

fn edge_crossing_x(
    p1: &ExactPoint,
    q1: &ExactPoint,
    p2: &ExactPoint,
    q2: &ExactPoint,
) -> Option<QSqrt3> {
    let d1 = q1.sub(p1);
    let d2 = q2.sub(p2);
    let den = d1.cross(&d2);
    if den.is_zero() {
        return None;
    }
    let w = p2.sub(p1);
    let s = &w.cross(&d2) / &den;
    let u = &w.cross(&d1) / &den;
    let zero = QSqrt3::zero();
    let one = QSqrt3::int(1);
    if s < zero || s > one || u < zero || u > one {
        return None;
    }
    Some(&p1.x + &(&s * &d1.x))
}

/// Returns a point of `[0, y_max]` not covered by the closed intervals, if any.
fn first_gap(intervals: &mut [(QSqrt3, QSqrt3)], y_max: &QSqrt3) -> Option<QSqrt3> {
    intervals.sort_by(|a, b| {
        let (fa, fb) = (a.0.to_f64(), b.0.to_f64());
        if (fa - fb).abs() > 1e-9 {
            fa.partial_cmp(&fb).unwrap_or(Ordering::Equal)
        } else {
            a.0.cmp(&b.0)
        }
    });
    let mut reach = QSqrt3::zero();
    let mut started = false;
    for (lo, hi) in intervals.iter() {
        if hi < &reach || (started && hi == &reach) {
            continue;
        }
        let open = if started {
            lo > &reach
        } else {
            lo > &QSqrt3::zero()
        };
        if open {
            // the open gap (reach, lo) or [0, lo), clipped to the domain
            let top = if lo < y_max { lo } else { y_max };
            return Some((&reach + top).half());
        }
        reach = hi.clone();
        started = true;
        if &reach >= y_max {
            return None;
        }
    }
    if started {
        Some((&reach + y_max).half())
    } else {
        Some(y_max.half())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dist_to_close_packing, point_in_interstitium, HexLattice};
    use crate::interstitium::lattice_translate_set;

    fn segment_dist(p: Point2, a: Point2, b: Point2) -> f64 {
        let ab = b - a;
        let s = ((p - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
        (a + ab * s).dist(p)
    }

    #[test]
    fn triangle_geometry() {
        for t in [
            Point2::ORIGIN,
            Point2::new(0.3, -0.7),
            Point2::new(-1.1, 0.2),
        ] {
            let lattice = HexLattice::close_packing();
            for tri in inscribed_triangles(t) {
                for k in 0..3 {
                    let (a, b) = (tri.vertices[k], tri.vertices[(k + 1) % 3]);
                    assert!((a.dist(b) - TRIANGLE_SIDE).abs() < 1e-12);
                    let near = lattice
                        .points_in_box(
                            tri.centroid - t - Point2::new(3.0, 3.0),
                            tri.centroid - t + Point2::new(3.0, 3.0),
                        )
                        .into_iter()
                        .map(|h| segment_dist(h + t, a, b))
                        .fold(f64::INFINITY, f64::min);
                    assert!((near - 1.0).abs() < 1e-12, "edge distance {near}");
                }
                let c = tri.vertices.iter().fold(Point2::ORIGIN, |s, &v| s + v) * (1.0 / 3.0);
                assert!(c.dist(tri.centroid) < 1e-12);
                for v in tri.vertices {
                    assert!(point_in_interstitium(v, t));
                }
                assert!((dist_to_close_packing(tri.centroid - t) - 2.0 / SQRT_3).abs() < 1e-12);
            }
        }
        assert!((TRIANGLE_SIDE - 0.535_898_384_862_245_4).abs() < 1e-12);
    }

    #[test]
    fn exact_vertices_match_floats() {
        let t = Point2::ORIGIN;
        let ex = exact_triangles(&ExactPoint::from_point(t).unwrap());
        let fl = inscribed_triangles(t);
        for k in 0..2 {
            for (e, f) in ex[k].iter().zip(fl[k].vertices) {
                assert!(e.to_point().dist(f) < 1e-12);
            }
        }
    }

    #[test]
    fn origin_alone_does_not_tile() {
        let v = certify_triangle_tiling_detailed(&lattice_translate_set(1).unwrap());
        assert!(!v.covered);
        let w = v.witness.unwrap();
        let tri = inscribed_triangles(Point2::ORIGIN);
        let lattice = HexLattice::close_packing();
        let w0 = lattice.reduce(w);
        for l in lattice.points_in_box(Point2::new(-4.0, -4.0), Point2::new(4.0, 4.0)) {
            for t in &tri {
                let mut shifted = *t;
                shifted.vertices = t.vertices.map(|v| v + l);
                assert!(!shifted.contains(w0));
            }
        }
    }

    #[test]
    fn gap_finder() {
        let q = |a: i64| QSqrt3::int(a);
        let mut iv = vec![(q(0), q(1)), (q(1), q(3))];
        assert!(first_gap(&mut iv, &q(3)).is_none());
        let mut iv = vec![(q(0), q(1)), (q(2), q(3))];
        assert_eq!(first_gap(&mut iv, &q(3)), Some(QSqrt3::frac(3, 2, 0, 1)));
        let mut iv = vec![(q(1), q(3))];
        assert!(first_gap(&mut iv, &q(3)).is_some());
        let mut iv = vec![(q(0), q(2))];
        assert!(first_gap(&mut iv, &q(3)).is_some());
    }
}
