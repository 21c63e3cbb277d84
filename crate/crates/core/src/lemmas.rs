//! Numerical checks of the hole lemmas behind the 55-point configuration.
//!
//! * Tangency arcs: around any disk of a packing, each neighbor excludes an open
//!   arc of possible hole tangencies no longer than `π/3`, and those arcs are
//!   disjoint, so every closed `π/3` arc admits a hole.
//! * Rectangle sweep: a unit disk centered anywhere in the quarter square `S`
//!   keeps a contiguous `π/3` arc of hole positions inside the rectangle.
//! * Hole sampling: a lattice with `d < √3 r` has a point in every hole.

use std::f64::consts::{FRAC_PI_3, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::control::derive_seed;
use crate::error::{Error, Result};
use crate::geometry::{normalize_angle, HexLattice, Point2, Pose, EPS, HOLE_RADIUS, SQRT_3};

/// Distance from a disk center to the center of a hole tangent to it.
pub const TANGENCY_RADIUS: f64 = 1.0 + HOLE_RADIUS;

/// Tolerance on angles when testing arc membership.
pub const ANGLE_EPS: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trial: Option<u64>,
    pub check: String,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub packing: Option<Vec<Point2>>,
}

impl Failure {
    fn new(check: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            trial: None,
            check: check.into(),
            detail: detail.into(),
            packing: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub label: String,
    pub point: Point2,
    pub value: f64,
}

/// Outcome of one lemma verification run.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LemmaReport {
    pub lemma: u8,
    pub trials: u64,
    pub failures: Vec<Failure>,
    pub min_arc: Option<f64>,
    pub witnesses: Vec<Witness>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_excluded_arc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub holes_without_point: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub monotone_from_corner: Option<bool>,
}

impl LemmaReport {
    fn new(lemma: u8, trials: u64) -> Self {
        Self {
            lemma,
            trials,
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

// ---------------------------------------------------------------------------
// Tangency arcs
// ---------------------------------------------------------------------------

/// Half-angle of the arc of hole tangencies on a unit disk excluded by a second
/// unit disk at center distance `s`: `arccos(s / 2(1+r))` below `2(1+r)`, else 0.
pub fn excluded_halfangle(s: f64) -> Result<f64> {
    if !s.is_finite() || s < 2.0 - EPS {
        return Err(Error::OverlappingDisks { distance: s });
    }
    let reach = 2.0 * TANGENCY_RADIUS;
    if s >= reach {
        return Ok(0.0);
    }
    Ok((s / reach).min(1.0).acos())
}

/// Open arc `(start, start + length)` of angles, `start` in `[0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArcInterval {
    pub start: f64,
    pub length: f64,
}

impl ArcInterval {
    pub fn end(&self) -> f64 {
        self.start + self.length
    }

    /// Strict interior membership, shrunk by `ANGLE_EPS` at both ends.
    pub fn contains_open(&self, angle: f64) -> bool {
        let offset = normalize_angle(angle - self.start);
        offset > ANGLE_EPS && offset < self.length - ANGLE_EPS
    }

    /// Length of the intersection of two arcs on the circle.
    pub fn overlap(&self, other: &ArcInterval) -> f64 {
        let offset = normalize_angle(other.start - self.start);
        let mut total = 0.0;
        for shift in [offset - TAU, offset] {
            let lo = shift.max(0.0);
            let hi = (shift + other.length).min(self.length);
            total += (hi - lo).max(0.0);
        }
        total
    }
}

/// Arcs of the circle of hole-tangency positions around a base disk that are
/// excluded by neighboring disks, one per neighbor within reach, sorted by start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangencyArcSet {
    pub base: Point2,
    pub intervals: Vec<ArcInterval>,
}

impl TangencyArcSet {
    pub fn from_neighbors(base: Point2, neighbors: &[Point2]) -> Result<Self> {
        let mut intervals = Vec::new();
        for &n in neighbors {
            let offset = n - base;
            let half = excluded_halfangle(offset.norm())?;
            if half > 0.0 {
                intervals.push(ArcInterval {
                    start: normalize_angle(offset.angle() - half),
                    length: 2.0 * half,
                });
            }
        }
        intervals.sort_by(|a, b| a.start.total_cmp(&b.start));
        Ok(Self { base, intervals })
    }

    pub fn is_allowed(&self, angle: f64) -> bool {
        !self.intervals.iter().any(|a| a.contains_open(angle))
    }

    pub fn total_excluded(&self) -> f64 {
        self.intervals.iter().map(|a| a.length).sum()
    }

    /// Pairs of intervals overlapping by more than `ANGLE_EPS`.
    pub fn overlapping_pairs(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for i in 0..self.intervals.len() {
            for j in i + 1..self.intervals.len() {
                let o = self.intervals[i].overlap(&self.intervals[j]);
                if o > ANGLE_EPS {
                    out.push((i, j, o));
                }
            }
        }
        out
    }

    /// An allowed angle within the closed arc `[start, start + length]`, if any.
    pub fn allowed_in_closed_arc(&self, start: f64, length: f64) -> Option<f64> {
        if self.is_allowed(start) {
            return Some(normalize_angle(start));
        }
        // otherwise the first allowed angle is an interval endpoint
        self.intervals
            .iter()
            .map(|a| normalize_angle(a.end()))
            .filter(|&e| normalize_angle(e - start) <= length + ANGLE_EPS)
            .find(|&e| self.is_allowed(e))
    }

    pub fn hole_at(&self, angle: f64) -> Point2 {
        self.base + Point2::polar(TANGENCY_RADIUS, angle)
    }
}

fn hole_disjoint(hole: Point2, disks: &[Point2]) -> bool {
    disks.iter().all(|&c| c.dist(hole) >= TANGENCY_RADIUS - EPS)
}

/// Checks the tangency-arc properties for one packing around a base disk.
///
/// `rotations` closed arcs of length `π/3`, evenly spaced, must each contain an
/// allowed angle whose hole is verified directly against every packed disk.
pub fn check_packing(
    base: Point2,
    neighbors: &[Point2],
    rotations: usize,
) -> Result<(TangencyArcSet, Vec<Failure>)> {
    let arcs = TangencyArcSet::from_neighbors(base, neighbors)?;
    let mut failures = Vec::new();
    for (i, j, o) in arcs.overlapping_pairs() {
        failures.push(Failure::new(
            "disjoint",
            format!("intervals {i} and {j} overlap by {o:e}"),
        ));
    }
    for (i, a) in arcs.intervals.iter().enumerate() {
        if a.length > FRAC_PI_3 + ANGLE_EPS {
            failures.push(Failure::new(
                "max-length",
                format!("interval {i} has length {} > π/3", a.length),
            ));
        }
    }
    for k in 0..rotations {
        let start = k as f64 * TAU / rotations as f64;
        let found = arcs
            .allowed_in_closed_arc(start, FRAC_PI_3)
            .filter(|&phi| hole_disjoint(arcs.hole_at(phi), neighbors));
        if found.is_none() {
            failures.push(Failure::new(
                "arc-admits-hole",
                format!("no hole tangent within [{start}, {}]", start + FRAC_PI_3),
            ));
            break;
        }
    }
    Ok((arcs, failures))
}

/// Random sequential adsorption of unit disks around a base disk at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PackingSampler {
    /// Consecutive rejected placements that declare the inner ring saturated.
    pub saturation_attempts: usize,
    /// Same, for the outer ring of disks that cannot touch a tangent hole.
    pub far_attempts: usize,
}

impl Default for PackingSampler {
    fn default() -> Self {
        Self {
            saturation_attempts: 10_000,
            far_attempts: 1_000,
        }
    }
}

impl PackingSampler {
    /// Centers of the neighbors of a unit disk at the origin, forming a packing.
    pub fn sample(&self, rng: &mut impl Rng) -> Vec<Point2> {
        let reach = 2.0 * TANGENCY_RADIUS;
        let mut disks: Vec<Point2> = Vec::new();
        let fits = |disks: &[Point2], c: Point2| disks.iter().all(|&d| d.dist(c) >= 2.0 - 1e-12);

        let mut misses = 0;
        while misses < self.saturation_attempts {
            let candidate = match rng.random_range(0..4) {
                // area-uniform in the annulus 2 <= s < 2(1 + r)
                0 | 1 => {
                    let s = rng.random_range(4.0..reach * reach).sqrt();
                    Some(Point2::polar(s, rng.random_range(0.0..TAU)))
                }
                // tangent to the base disk
                2 => Some(Point2::polar(2.0, rng.random_range(0.0..TAU))),
                // tangent to the base disk and to an existing neighbor
                _ => tangent_to_base_and(&disks, rng),
            };
            match candidate {
                Some(c) if fits(&disks, c) => {
                    disks.push(c);
                    misses = 0;
                }
                _ => misses += 1,
            }
        }

        let mut misses = 0;
        while misses < self.far_attempts {
            let s = rng
                .random_range(reach * reach..(reach + 2.0).powi(2))
                .sqrt();
            let c = Point2::polar(s, rng.random_range(0.0..TAU));
            if fits(&disks, c) {
                disks.push(c);
                misses = 0;
            } else {
                misses += 1;
            }
        }
        disks
    }
}

fn tangent_to_base_and(disks: &[Point2], rng: &mut impl Rng) -> Option<Point2> {
    if disks.is_empty() {
        return None;
    }
    let n = disks[rng.random_range(0..disks.len())];
    let dist = n.norm();
    if !(1e-12..=4.0).contains(&dist) {
        return None;
    }
    // intersection of the radius-2 circles about the origin and about n
    let h = (4.0 - 0.25 * dist * dist).max(0.0).sqrt();
    let mid = n * 0.5;
    let perp = Point2::new(-n.y, n.x) * (1.0 / dist);
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    Some(mid + perp * (sign * h))
}

/// Verifies the tangency-arc lemma over `trials` random saturated packings.
pub fn verify_lemma1(trials: u64, seed: u64) -> LemmaReport {
    verify_lemma1_with(trials, seed, PackingSampler::default(), 10_000)
}

pub fn verify_lemma1_with(
    trials: u64,
    seed: u64,
    sampler: PackingSampler,
    rotations: usize,
) -> LemmaReport {
    let outcomes: Vec<(f64, Vec<Failure>)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, trial));
            let packing = sampler.sample(&mut rng);
            match check_packing(Point2::ORIGIN, &packing, rotations) {
                Ok((arcs, failures)) => {
                    let longest = arcs.intervals.iter().map(|a| a.length).fold(0.0, f64::max);
                    let failures = failures
                        .into_iter()
                        .map(|mut f| {
                            f.trial = Some(trial);
                            f.packing = Some(packing.clone());
                            f
                        })
                        .collect();
                    (longest, failures)
                }
                Err(e) => (
                    0.0,
                    vec![Failure {
                        trial: Some(trial),
                        check: "packing".into(),
                        detail: e.to_string(),
                        packing: Some(packing),
                    }],
                ),
            }
        })
        .collect();
    let mut report = LemmaReport::new(1, trials);
    let mut longest = 0.0f64;
    for (l, f) in outcomes {
        longest = longest.max(l);
        report.failures.extend(f);
    }
    report.max_excluded_arc = Some(longest);
    report
}

// ---------------------------------------------------------------------------
// Rectangle construction
// ---------------------------------------------------------------------------

/// Named points of the rectangle construction, with `E` at the origin and the
/// long side of the rectangle horizontal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig3Frame {
    pub e: Point2,
    pub f: Point2,
    pub g: Point2,
    pub h: Point2,
    pub i: Point2,
    pub j: Point2,
    pub k: Point2,
    pub l: Point2,
    pub m: Point2,
    pub n: Point2,
    /// Half extents of the rectangle.
    pub half_width: f64,
    pub half_height: f64,
}

pub fn build_fig3_frame() -> Fig3Frame {
    let r = HOLE_RADIUS;
    let rho = TANGENCY_RADIUS;
    Fig3Frame {
        e: Point2::ORIGIN,
        f: Point2::new(rho, 0.0),
        g: Point2::new(1.0, 0.5 * rho),
        h: Point2::new(1.0, -0.5 * rho),
        i: Point2::new(-rho, 0.0),
        j: Point2::new(-r, 0.5 * rho),
        k: Point2::new(-rho, 0.5 * rho),
        l: Point2::new(0.0, 0.5 * rho),
        m: Point2::new(-rho, rho),
        n: Point2::new(0.0, rho),
        half_width: 1.0 + 2.0 * r,
        half_height: 0.5 * (1.0 + 3.0 * r),
    }
}

fn angle_at(vertex: Point2, a: Point2, b: Point2) -> f64 {
    let (u, v) = (a - vertex, b - vertex);
    u.cross(v).abs().atan2(u.dot(v))
}

/// Checks every distance and angle identity of the construction to `1e-12`.
pub fn verify_fig3_construction(frame: &Fig3Frame) -> LemmaReport {
    const TOL: f64 = 1e-12;
    let r = HOLE_RADIUS;
    let rho = TANGENCY_RADIUS;
    let fr = frame;
    let (left, right) = (-fr.half_width, fr.half_width);
    let (bottom, top) = (-fr.half_height, fr.half_height);
    let right_angle = PI / 2.0;

    let checks: Vec<(&str, f64, f64)> = vec![
        ("width = 2 + 4r", right - left, 2.0 + 4.0 * r),
        ("height = 1 + 3r", top - bottom, 1.0 + 3.0 * r),
        ("F tangent to right side", right - fr.f.x, r),
        ("G tangent to top side", top - fr.g.y, r),
        ("H tangent to bottom side", fr.h.y - bottom, r),
        ("I tangent to left side", fr.i.x - left, r),
        ("J tangent to top side", top - fr.j.y, r),
        ("d(E,F) = 1 + r", fr.e.dist(fr.f), rho),
        ("d(E,G) = 1 + r", fr.e.dist(fr.g), rho),
        ("d(E,H) = 1 + r", fr.e.dist(fr.h), rho),
        ("d(I,E) = 1 + r", fr.i.dist(fr.e), rho),
        ("angle GEH = π/3", angle_at(fr.e, fr.g, fr.h), FRAC_PI_3),
        (
            "d(G,H) + 2r = 1 + 3r",
            fr.g.dist(fr.h) + 2.0 * r,
            1.0 + 3.0 * r,
        ),
        ("d(E,L) = (1 + r)/2", fr.e.dist(fr.l), 0.5 * rho),
        ("d(I,K) = (1 + r)/2", fr.i.dist(fr.k), 0.5 * rho),
        ("d(K,L) = 1 + r", fr.k.dist(fr.l), rho),
        ("d(K,M) = (1 + r)/2", fr.k.dist(fr.m), 0.5 * rho),
        ("d(L,N) = (1 + r)/2", fr.l.dist(fr.n), 0.5 * rho),
        ("d(M,N) = 1 + r", fr.m.dist(fr.n), rho),
        (
            "S' right angle at E",
            angle_at(fr.e, fr.i, fr.l),
            right_angle,
        ),
        (
            "S'' right angle at M",
            angle_at(fr.m, fr.k, fr.n),
            right_angle,
        ),
        ("S square diagonal", fr.i.dist(fr.n), rho * 2f64.sqrt()),
        ("S square diagonal", fr.e.dist(fr.m), rho * 2f64.sqrt()),
        ("d(I,J) = 1 + r", fr.i.dist(fr.j), rho),
        ("d(J,M) = 1 + r", fr.j.dist(fr.m), rho),
        ("d(I,M) = 1 + r", fr.i.dist(fr.m), rho),
        ("angle IMJ = π/3", angle_at(fr.m, fr.i, fr.j), FRAC_PI_3),
    ];
    let mut report = LemmaReport::new(2, checks.len() as u64);
    for (name, got, want) in checks {
        if (got - want).abs() > TOL {
            report
                .failures
                .push(Failure::new(name, format!("got {got}, expected {want}")));
        }
    }
    report
}

/// Longest contiguous closed arc of angles `φ` for which the hole centered at
/// `center + (1 + r)(cos φ, sin φ)` lies inside the rectangle.
pub fn longest_in_rectangle_arc(center: Point2, frame: &Fig3Frame) -> f64 {
    let rho = TANGENCY_RADIUS;
    let r = HOLE_RADIUS;
    // hole center bounds: the rectangle shrunk by r
    let (xl, xr) = (-frame.half_width + r, frame.half_width - r);
    let (yb, yt) = (-frame.half_height + r, frame.half_height - r);
    let feasible = |phi: f64| {
        let h = center + Point2::polar(rho, phi);
        h.x >= xl - EPS && h.x <= xr + EPS && h.y >= yb - EPS && h.y <= yt + EPS
    };

    let mut breaks = Vec::with_capacity(8);
    for x in [xl, xr] {
        let c = (x - center.x) / rho;
        if c.abs() <= 1.0 {
            let a = c.acos();
            breaks.extend([a, -a]);
        }
    }
    for y in [yb, yt] {
        let s = (y - center.y) / rho;
        if s.abs() <= 1.0 {
            let a = s.asin();
            breaks.extend([a, PI - a]);
        }
    }
    let mut breaks: Vec<f64> = breaks.into_iter().map(normalize_angle).collect();
    breaks.sort_by(f64::total_cmp);
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    if breaks.is_empty() {
        return if feasible(0.0) { TAU } else { 0.0 };
    }

    // segments between consecutive breakpoints are uniformly feasible or not
    let n = breaks.len();
    let segments: Vec<(f64, bool)> = (0..n)
        .map(|s| {
            let a = breaks[s];
            let b = if s + 1 < n {
                breaks[s + 1]
            } else {
                breaks[0] + TAU
            };
            (b - a, feasible(0.5 * (a + b)))
        })
        .collect();
    if segments.iter().all(|s| s.1) {
        return TAU;
    }
    let start = segments
        .iter()
        .position(|s| !s.1)
        .expect("some infeasible segment");
    let (mut best, mut run) = (0.0f64, 0.0);
    for step in 1..=n {
        let (len, ok) = segments[(start + step) % n];
        if ok {
            run += len;
            best = best.max(run);
        } else {
            run = 0.0;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma2Sweep {
    pub grid: usize,
    pub min_arc: f64,
    pub argmin: Point2,
    /// Grid centers whose arc is within `ANGLE_EPS` of the minimum.
    pub minimizers: Vec<Point2>,
    /// Arc length is non-decreasing from `M` towards `K` and towards `N`.
    pub monotone_from_corner: bool,
}

/// Minimum over a `grid × grid` lattice of centers in the square `S` of the
/// longest in-rectangle tangency arc.
pub fn sweep_lemma2(grid: usize) -> Result<Lemma2Sweep> {
    if grid < 100 {
        return Err(Error::InvalidArgument(format!(
            "sweep grid must be at least 100, got {grid}"
        )));
    }
    let frame = build_fig3_frame();
    let rho = TANGENCY_RADIUS;
    let step = rho / (grid - 1) as f64;
    let arcs: Vec<(Point2, f64)> = (0..grid * grid)
        .into_par_iter()
        .map(|idx| {
            let (ix, iy) = (idx % grid, idx / grid);
            let c = Point2::new(-rho + ix as f64 * step, iy as f64 * step);
            (c, longest_in_rectangle_arc(c, &frame))
        })
        .collect();
    let (argmin, min_arc) = arcs
        .iter()
        .copied()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty grid");
    let minimizers = arcs
        .iter()
        .filter(|a| a.1 <= min_arc + ANGLE_EPS)
        .map(|a| a.0)
        .collect();

    // M is the top-left grid corner; K is halfway down the left edge, N is the top-right corner
    let at = |ix: usize, iy: usize| arcs[iy * grid + ix].1;
    let top = grid - 1;
    let to_k = (0..top / 2).all(|s| at(0, top - s - 1) >= at(0, top - s) - ANGLE_EPS);
    let to_n = (0..top).all(|s| at(s + 1, top) >= at(s, top) - ANGLE_EPS);

    Ok(Lemma2Sweep {
        grid,
        min_arc,
        argmin,
        minimizers,
        monotone_from_corner: to_k && to_n,
    })
}

/// Construction identities plus the sweep, as one report.
pub fn verify_lemma2(grid: usize) -> Result<LemmaReport> {
    let frame = build_fig3_frame();
    let mut report = verify_fig3_construction(&frame);
    let sweep = sweep_lemma2(grid)?;
    report.trials += (grid * grid) as u64;
    report.min_arc = Some(sweep.min_arc);
    report.monotone_from_corner = Some(sweep.monotone_from_corner);
    if sweep.min_arc < FRAC_PI_3 - ANGLE_EPS {
        report.failures.push(Failure::new(
            "sweep",
            format!("arc {} at {} is below π/3", sweep.min_arc, sweep.argmin),
        ));
    }
    report.witnesses.push(Witness {
        label: "argmin".into(),
        point: sweep.argmin,
        value: sweep.min_arc,
    });
    for (label, corner) in [("E", frame.e), ("M", frame.m)] {
        let step = TANGENCY_RADIUS / (grid - 1) as f64;
        match sweep
            .minimizers
            .iter()
            .find(|p| p.dist(corner) <= step * 1.5)
        {
            Some(&p) => report.witnesses.push(Witness {
                label: format!("minimum near {label}"),
                point: p,
                value: longest_in_rectangle_arc(p, &frame),
            }),
            None => report.failures.push(Failure::new(
                "minimizers",
                format!("no grid minimum adjacent to {label}"),
            )),
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Hole sampling
// ---------------------------------------------------------------------------

/// Samples hole centers in one cell of `H_d` and checks that every hole of radius
/// `r` contains a lattice point when `d < √3 r`, or exhibits the deep-hole
/// counterexample when `d > √3 r`.
pub fn verify_lemma3(trials: u64, d: f64, seed: u64) -> Result<LemmaReport> {
    let lattice = HexLattice::new(d, Pose::IDENTITY)?;
    let (b1, b2) = lattice.basis();
    let r = HOLE_RADIUS;
    let critical = SQRT_3 * r;

    const CHUNK: u64 = 4096;
    let chunks = trials.div_ceil(CHUNK);
    let misses: Vec<(u64, Option<Point2>)> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, c));
            let (mut count, mut first) = (0, None);
            for _ in (c * CHUNK)..((c + 1) * CHUNK).min(trials) {
                let center = b1 * rng.random::<f64>() + b2 * rng.random::<f64>();
                if lattice.nearest(center).1 > r {
                    count += 1;
                    first.get_or_insert(center);
                }
            }
            (count, first)
        })
        .collect();
    let without: u64 = misses.iter().map(|m| m.0).sum();

    let mut report = LemmaReport::new(3, trials);
    report.holes_without_point = Some(without);
    let deep = (b1 + b2) * (1.0 / 3.0);
    let deep_dist = lattice.nearest(deep).1;
    report.witnesses.push(Witness {
        label: "deep hole: covering radius − r".into(),
        point: deep,
        value: deep_dist - r,
    });

    if d < critical {
        if let Some(p) = misses.iter().find_map(|m| m.1) {
            report.failures.push(Failure::new(
                "hole-contains-point",
                format!("{without} holes without a lattice point, first at {p}"),
            ));
        }
    } else if d > critical && deep_dist <= r {
        report.failures.push(Failure::new(
            "counterexample",
            format!("deep hole at distance {deep_dist} does not exceed r"),
        ));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn halfangle_examples() {
        assert!((excluded_halfangle(2.0).unwrap() - PI / 6.0).abs() < 1e-12);
        assert_eq!(excluded_halfangle(4.0 / SQRT_3).unwrap(), 0.0);
        assert_eq!(excluded_halfangle(3.0).unwrap(), 0.0);
        assert!(excluded_halfangle(1.9).is_err());
        assert!(excluded_halfangle(f64::NAN).is_err());
    }

    #[test]
    fn halfangle_strictly_decreasing() {
        let reach = 2.0 * TANGENCY_RADIUS;
        let mut prev = excluded_halfangle(2.0).unwrap();
        for k in 1..=1000 {
            let s = 2.0 + (reach - 2.0) * k as f64 / 1000.0;
            let a = excluded_halfangle(s).unwrap();
            assert!(a < prev);
            prev = a;
        }
        assert_eq!(prev, 0.0);
    }

    #[test]
    fn halfangle_matches_rejection_sampling() {
        // Oracle: sample tangency angles and test hole/neighbor disjointness directly.
        let s = 2.1;
        let neighbor = Point2::new(s, 0.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let n = 1_000_000;
        let mut blocked = 0;
        for _ in 0..n {
            let phi: f64 = rng.random_range(0.0..TAU);
            let hole = Point2::polar(TANGENCY_RADIUS, phi);
            if hole.dist(neighbor) < TANGENCY_RADIUS {
                blocked += 1;
            }
        }
        let sampled = blocked as f64 / n as f64 * TAU;
        let exact = 2.0 * excluded_halfangle(s).unwrap();
        // binomial standard error on the arc length is about 1.4e-3 here
        assert!((sampled - exact).abs() < 6e-3, "{sampled} vs {exact}");
    }

    #[test]
    fn three_neighbors_at_120_degrees() {
        let nbrs: Vec<Point2> = (0..3)
            .map(|k| Point2::polar(2.0, k as f64 * TAU / 3.0))
            .collect();
        let (arcs, failures) = check_packing(Point2::ORIGIN, &nbrs, 10_000).unwrap();
        assert!(failures.is_empty(), "{failures:?}");
        assert_eq!(arcs.intervals.len(), 3);
        // each arc spans π/3, so the allowed set is three closed arcs of π/3 centered
        // at π/3, π and 5π/3
        for a in &arcs.intervals {
            assert!((a.length - FRAC_PI_3).abs() < 1e-12);
        }
        assert!(arcs.is_allowed(PI / 3.0) && arcs.is_allowed(PI));
        assert!(!arcs.is_allowed(0.0));
    }

    #[test]
    fn six_tangent_neighbors_leave_isolated_points() {
        // Hexagonal ring: arcs tile the circle and only their shared endpoints remain.
        let nbrs: Vec<Point2> = (0..6)
            .map(|k| Point2::polar(2.0, k as f64 * TAU / 6.0))
            .collect();
        let (arcs, failures) = check_packing(Point2::ORIGIN, &nbrs, 10_000).unwrap();
        assert!(failures.is_empty(), "{failures:?}");
        assert!((arcs.total_excluded() - TAU).abs() < 1e-12);
        assert!(arcs.is_allowed(PI / 6.0));
        assert!(!arcs.is_allowed(PI / 6.0 + 0.01));
    }

    #[test]
    fn single_and_no_neighbors() {
        let (arcs, failures) =
            check_packing(Point2::ORIGIN, &[Point2::new(0.0, 2.0)], 1000).unwrap();
        assert!(failures.is_empty());
        assert_eq!(arcs.intervals.len(), 1);
        assert!((arcs.intervals[0].length - 2.0 * PI / 6.0).abs() < 1e-12);
        let (arcs, failures) = check_packing(Point2::ORIGIN, &[], 1000).unwrap();
        assert!(failures.is_empty() && arcs.intervals.is_empty());
        assert!(arcs.is_allowed(1.234));
    }

    #[test]
    fn overlapping_disks_are_reported() {
        assert!(check_packing(Point2::ORIGIN, &[Point2::new(1.5, 0.0)], 10).is_err());
    }

    #[test]
    fn arc_overlap_wraps() {
        let a = ArcInterval {
            start: TAU - 0.1,
            length: 0.3,
        };
        let b = ArcInterval {
            start: 0.1,
            length: 0.5,
        };
        assert!((a.overlap(&b) - 0.1).abs() < 1e-12);
        assert!((b.overlap(&a) - 0.1).abs() < 1e-12);
        let c = ArcInterval {
            start: 1.0,
            length: 0.5,
        };
        assert_eq!(a.overlap(&c), 0.0);
    }

    #[test]
    fn sampled_packings_are_packings() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sampler = PackingSampler {
            saturation_attempts: 2000,
            far_attempts: 200,
        };
        for _ in 0..20 {
            let disks = sampler.sample(&mut rng);
            for (i, a) in disks.iter().enumerate() {
                assert!(a.norm() >= 2.0 - 1e-12);
                for b in &disks[i + 1..] {
                    assert!(a.dist(*b) >= 2.0 - 1e-12);
                }
            }
            let (arcs, _) = check_packing(Point2::ORIGIN, &disks, 10).unwrap();
            assert!(arcs.total_excluded() <= TAU + 1e-9);
        }
    }

    #[test]
    fn lemma1_small_run_is_clean_and_deterministic() {
        let sampler = PackingSampler {
            saturation_attempts: 2000,
            far_attempts: 100,
        };
        let a = verify_lemma1_with(50, 3, sampler, 2000);
        assert!(a.passed(), "{:?}", a.failures.first());
        let b = verify_lemma1_with(50, 3, sampler, 2000);
        assert_eq!(a, b);
        assert!(a.max_excluded_arc.unwrap() <= FRAC_PI_3 + ANGLE_EPS);
    }

    #[test]
    fn fig3_identities() {
        let fr = build_fig3_frame();
        let report = verify_fig3_construction(&fr);
        assert!(report.passed(), "{:?}", report.failures);
        assert!((fr.i.dist(fr.e) - 1.154_700_54).abs() < 1e-8);
        assert!((fr.e.dist(fr.l) - 0.577_350_27).abs() < 1e-8);
        assert!((angle_at(fr.e, fr.g, fr.h) - FRAC_PI_3).abs() < 1e-12);
        assert!((fr.j.y + HOLE_RADIUS - fr.half_height).abs() < 1e-15);
    }

    // Solves a 2x2 system by Newton iteration with a finite-difference Jacobian.
    fn newton(mut p: Point2, f: impl Fn(Point2) -> (f64, f64)) -> Point2 {
        for _ in 0..60 {
            let (f1, f2) = f(p);
            let h = 1e-7;
            let (a1, a2) = f(p + Point2::new(h, 0.0));
            let (b1, b2) = f(p + Point2::new(0.0, h));
            let (j11, j12, j21, j22) = ((a1 - f1) / h, (b1 - f1) / h, (a2 - f2) / h, (b2 - f2) / h);
            let det = j11 * j22 - j12 * j21;
            p -= Point2::new((j22 * f1 - j12 * f2) / det, (j11 * f2 - j21 * f1) / det);
        }
        p
    }

    #[test]
    fn fig3_coordinates_from_tangency_constraints() {
        let r = 2.0 / 3f64.sqrt() - 1.0;
        let rho = 1.0 + r;
        // G: tangent to the disk at E, and GE at π/6 from the long axis
        let g = newton(Point2::new(0.9, 0.5), |p| {
            (p.norm() - rho, p.y - p.x * (PI / 6.0).tan())
        });
        let half_h = g.y + r;
        assert!((2.0 * half_h - (1.0 + 3.0 * r)).abs() < 1e-12);
        // J: tangent to the top side, and tangent to a disk at M that also touches I
        let i = Point2::new(-rho, 0.0);
        let m = Point2::new(-rho, rho);
        assert!((i.dist(m) - rho).abs() < 1e-15);
        let j = newton(Point2::new(-0.2, 0.6), |p| {
            (p.y + r - half_h, p.dist(m) - rho)
        });
        let fr = build_fig3_frame();
        assert!(g.dist(fr.g) < 1e-12);
        assert!(j.dist(fr.j) < 1e-12, "{j} vs {}", fr.j);
        assert!((j.dist(i) - rho).abs() < 1e-12);
    }

    #[test]
    fn arc_closed_forms_at_e_and_m() {
        let fr = build_fig3_frame();
        assert!((longest_in_rectangle_arc(fr.e, &fr) - FRAC_PI_3).abs() < 1e-12);
        assert!((longest_in_rectangle_arc(fr.m, &fr) - FRAC_PI_3).abs() < 1e-12);
        let inner = Point2::new(-0.5, 0.2);
        assert!(longest_in_rectangle_arc(inner, &fr) > FRAC_PI_3 + 1e-3);
        let upper = Point2::new(-0.5, 0.9);
        assert!(longest_in_rectangle_arc(upper, &fr) > FRAC_PI_3 + 1e-3);
    }

    #[test]
    fn arc_matches_dense_angle_scan() {
        let fr = build_fig3_frame();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = HOLE_RADIUS;
        let n = 200_000;
        for _ in 0..20 {
            let c = Point2::new(
                -rng.random_range(0.0..TANGENCY_RADIUS),
                rng.random_range(0.0..TANGENCY_RADIUS),
            );
            let inside: Vec<bool> = (0..n)
                .map(|k| {
                    let h = c + Point2::polar(TANGENCY_RADIUS, k as f64 * TAU / n as f64);
                    h.x.abs() <= fr.half_width - r && h.y.abs() <= fr.half_height - r
                })
                .collect();
            let start = inside.iter().position(|b| !b).unwrap();
            let (mut best, mut run) = (0usize, 0usize);
            for k in 1..=n {
                if inside[(start + k) % n] {
                    run += 1;
                    best = best.max(run);
                } else {
                    run = 0;
                }
            }
            let scanned = best as f64 * TAU / n as f64;
            let exact = longest_in_rectangle_arc(c, &fr);
            assert!(
                (scanned - exact).abs() < 2.0 * TAU / n as f64,
                "{c}: {scanned} vs {exact}"
            );
        }
    }

    #[test]
    fn sweep_minimum_is_pi_over_3() {
        let sweep = sweep_lemma2(100).unwrap();
        assert!(sweep.min_arc >= FRAC_PI_3 - ANGLE_EPS);
        assert!((sweep.min_arc - FRAC_PI_3).abs() < 1e-9);
        assert!(sweep.monotone_from_corner);
        assert!(sweep_lemma2(99).is_err());
        let report = verify_lemma2(100).unwrap();
        assert!(report.passed(), "{:?}", report.failures);
    }

    #[test]
    fn lemma3_threshold() {
        let critical = SQRT_3 * HOLE_RADIUS;
        let below = verify_lemma3(20_000, 0.99 * critical, 1).unwrap();
        assert!(below.passed());
        assert_eq!(below.holes_without_point, Some(0));

        let at = verify_lemma3(100, critical, 1).unwrap();
        assert!(at.witnesses[0].value.abs() < 1e-12);

        let above = verify_lemma3(1000, 1.01 * critical, 1).unwrap();
        assert!(above.passed());
        assert!(above.witnesses[0].value > 0.0);
        assert!(above.holes_without_point.unwrap() > 0);
    }
}
