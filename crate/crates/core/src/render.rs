//! SVG output. Scenes are drawn in model coordinates with the y axis pointing up.

use std::fmt::Write;

use crate::config::HardConfiguration;
use crate::cover::CoverSolution;
use crate::geometry::{HexLattice, Point2, Pose};
use crate::interstitium::{inscribed_triangles, TranslateSet};
use crate::lemmas::{Fig3Frame, LemmaReport};

const PX_PER_UNIT: f64 = 200.0;

/// A minimal SVG canvas with a fixed model-space viewport.
pub struct Svg {
    lo: Point2,
    hi: Point2,
    body: String,
}

impl Svg {
    pub fn new(lo: Point2, hi: Point2) -> Self {
        Self {
            lo,
            hi,
            body: String::new(),
        }
    }

    /// Viewport around the points with a margin.
    pub fn fit(points: impl IntoIterator<Item = Point2>, margin: f64) -> Self {
        let mut lo = Point2::new(f64::INFINITY, f64::INFINITY);
        let mut hi = Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            lo = Point2::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point2::new(hi.x.max(p.x), hi.y.max(p.y));
        }
        if !lo.is_finite() || !hi.is_finite() {
            lo = Point2::new(-1.0, -1.0);
            hi = Point2::new(1.0, 1.0);
        }
        let m = Point2::new(margin, margin);
        Self::new(lo - m, hi + m)
    }

    fn stroke(&self) -> f64 {
        1.5 / PX_PER_UNIT
    }

    pub fn circle(&mut self, c: Point2, r: f64, fill: &str, stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.6}" cy="{:.6}" r="{:.6}" fill="{fill}" stroke="{stroke}" stroke-width="{:.6}"/>"#,
            c.x,
            c.y,
            r,
            self.stroke()
        );
    }

    pub fn dot(&mut self, c: Point2, color: &str) {
        let r = 3.0 / PX_PER_UNIT;
        let _ = writeln!(
            self.body,
            r#"<circle cx="{:.6}" cy="{:.6}" r="{r:.6}" fill="{color}"/>"#,
            c.x, c.y
        );
    }

    pub fn polygon(&mut self, pts: &[Point2], fill: &str, stroke: &str) {
        let coords: Vec<String> = pts
            .iter()
            .map(|p| format!("{:.6},{:.6}", p.x, p.y))
            .collect();
        let _ = writeln!(
            self.body,
            r#"<polygon points="{}" fill="{fill}" stroke="{stroke}" stroke-width="{:.6}"/>"#,
            coords.join(" "),
            self.stroke()
        );
    }

    pub fn line(&mut self, a: Point2, b: Point2, stroke: &str) {
        let _ = writeln!(
            self.body,
            r#"<line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" stroke="{stroke}" stroke-width="{:.6}"/>"#,
            a.x,
            a.y,
            b.x,
            b.y,
            self.stroke()
        );
    }

    pub fn label(&mut self, at: Point2, text: &str) {
        // text is flipped back so it reads upright
        let size = 12.0 / PX_PER_UNIT;
        let _ = writeln!(
            self.body,
            r#"<text x="{:.6}" y="{:.6}" font-size="{size:.6}" transform="scale(1,-1)" font-family="sans-serif">{}</text>"#,
            at.x,
            -at.y,
            escape(text)
        );
    }

    pub fn finish(self) -> String {
        let w = self.hi.x - self.lo.x;
        let h = self.hi.y - self.lo.y;
        format!(
            concat!(
                r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
                "\n",
                r#"<g transform="scale(1,-1)">"#,
                "\n{}</g>\n</svg>\n"
            ),
            w * PX_PER_UNIT,
            h * PX_PER_UNIT,
            self.lo.x,
            -self.hi.y,
            w,
            h,
            self.body
        )
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// The rectangle, its lattice points, and the lattice rows just outside it.
pub fn render_configuration(cfg: &HardConfiguration) -> String {
    let corners = cfg.rectangle.corners();
    let mut svg = Svg::fit(corners, 0.4);
    svg.polygon(&corners, "none", "black");
    if let Ok(lattice) = HexLattice::new(cfg.lattice_min_dist, cfg.pose) {
        let lo = Point2::new(-cfg.rectangle.width, -cfg.rectangle.width);
        let hi = Point2::new(cfg.rectangle.width, cfg.rectangle.width);
        for p in lattice.points_in_box(lo, hi) {
            if cfg.rectangle.signed_clearance(p) < 0.0 && cfg.rectangle.signed_clearance(p) > -0.35
            {
                svg.dot(p, "#bbbbbb");
            }
        }
    }
    for &p in &cfg.points {
        svg.dot(p, "black");
    }
    svg.label(
        corners[3] + Point2::new(0.0, 0.1),
        &format!("{} points", cfg.points.len()),
    );
    svg.finish()
}

/// Points with the disks of a cover attempt; uncovered points are drawn in red.
pub fn render_cover(points: &[Point2], solution: &CoverSolution) -> String {
    let extent = points.iter().copied().chain(
        solution
            .centers
            .iter()
            .flat_map(|&c| [c + Point2::new(1.0, 1.0), c - Point2::new(1.0, 1.0)]),
    );
    let mut svg = Svg::fit(extent, 0.3);
    for &c in &solution.centers {
        svg.circle(c, 1.0, "#cfe3ff", "#3a6ea5");
    }
    for (p, a) in points.iter().zip(&solution.assignment) {
        svg.dot(*p, if a.is_some() { "black" } else { "red" });
    }
    svg.finish()
}

/// The close packing `H + t` around a point set, as seen by the handicap oracle.
pub fn render_handicap(points: &[Point2], t: Point2) -> String {
    let mut svg = Svg::fit(points.iter().copied(), 1.2);
    let lattice = HexLattice::new(2.0, Pose::new(0.0, t)).expect("positive distance");
    for c in lattice.points_in_box(
        svg.lo - Point2::new(1.0, 1.0),
        svg.hi + Point2::new(1.0, 1.0),
    ) {
        svg.circle(c, 1.0, "#eef4ff", "#3a6ea5");
    }
    for &p in points {
        let covered = lattice.nearest(p).1 <= 1.0;
        svg.dot(p, if covered { "black" } else { "red" });
    }
    svg.finish()
}

/// The close packing with the inscribed triangles of every translate, tiled over a window.
pub fn render_translates(ts: &TranslateSet) -> String {
    let lo = Point2::new(-3.0, -2.5);
    let hi = Point2::new(3.0, 2.5);
    let mut svg = Svg::new(lo, hi);
    let h = HexLattice::close_packing();
    let window: Vec<Point2> =
        h.points_in_box(lo - Point2::new(2.0, 2.0), hi + Point2::new(2.0, 2.0));
    for &c in &window {
        svg.circle(c, 1.0, "none", "#888888");
    }
    for &t in ts.translates() {
        for tri in inscribed_triangles(t) {
            for &l in &window {
                let v = tri.vertices.map(|p| p + l);
                let inside = v
                    .iter()
                    .any(|p| p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y);
                if inside {
                    svg.polygon(&v, "#9a9a9a", "#555555");
                }
            }
        }
    }
    for &t in ts.translates() {
        svg.dot(t, "#c0392b");
    }
    svg.finish()
}

/// The hole-center rectangle with its labelled construction points and any witnesses.
pub fn render_fig3(frame: &Fig3Frame, report: Option<&LemmaReport>) -> String {
    let (w, h) = (frame.half_width, frame.half_height);
    let corners = [
        Point2::new(-w, -h),
        Point2::new(w, -h),
        Point2::new(w, h),
        Point2::new(-w, h),
    ];
    let mut svg = Svg::fit(corners, 0.5);
    svg.polygon(&corners, "none", "black");
    let named = [
        ("E", frame.e),
        ("F", frame.f),
        ("G", frame.g),
        ("H", frame.h),
        ("I", frame.i),
        ("J", frame.j),
        ("K", frame.k),
        ("L", frame.l),
        ("M", frame.m),
        ("N", frame.n),
    ];
    for (name, p) in named {
        svg.dot(p, "black");
        svg.label(p + Point2::new(0.03, 0.03), name);
    }
    svg.line(frame.i, frame.f, "#999999");
    if let Some(r) = report {
        for wit in &r.witnesses {
            svg.dot(wit.point, "#c0392b");
        }
    }
    svg.finish()
}
