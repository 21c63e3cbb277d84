//! Player two in the unrestricted game: cover a finite point set with
//! non-overlapping unit disks.
//!
//! The search has two phases. First, rotated and translated close packings are
//! tried through the handicap oracle. Then partitions of the points into
//! clusters that fit in one disk are enumerated, fewest parts first, and each
//! partition is handed to an alternating-projection feasibility phase that
//! places one disk per part. Every `Covered` answer is checked by
//! [`verify_cover`]; `Unknown` certifies nothing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::HardConfiguration;
use crate::control::{derive_seed, CancelToken};
use crate::error::{Error, Result};
use crate::geometry::{min_enclosing_circle, HexLattice, Point2, Pose};
use crate::interstitium::{handicap_oracle_with, HandicapOutcome, SubdivisionLimits};

/// Bitset representation caps instances at this many points.
pub const MAX_POINTS: usize = 64;

/// Tolerance of [`verify_cover`].
pub const VERIFY_EPS: f64 = 1e-9;

// cluster membership and projection use a slack well inside VERIFY_EPS
const FIT_EPS: f64 = 1e-10;
const REPEL_TARGET: f64 = 2.0 + 1e-7;
const STAGNATION: u32 = 25;
const BATCH: usize = 16;
const LATTICE_ANGLES: usize = 24;

/// Points that fit together in one unit disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub members: Vec<usize>,
    pub center: Point2,
    pub radius: f64,
}

impl Cluster {
    pub fn mask(&self) -> u64 {
        self.members.iter().fold(0, |m, &i| m | 1 << i)
    }

    fn from_mask(points: &[Point2], mask: u64) -> Result<Self> {
        let members = bits(mask);
        let pts: Vec<Point2> = members.iter().map(|&i| points[i]).collect();
        let mec = min_enclosing_circle(&pts)?;
        Ok(Self {
            members,
            center: mec.center,
            radius: mec.radius,
        })
    }
}

fn bits(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

fn check_points(points: &[Point2]) -> Result<()> {
    if points.len() > MAX_POINTS {
        return Err(Error::TooManyPoints {
            count: points.len(),
            max: MAX_POINTS,
        });
    }
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::NonFinite { x: p.x, y: p.y });
    }
    Ok(())
}

/// Unit-disk centers at distance 1 from both points, if the points are at most 2 apart.
fn pair_centers(p: Point2, q: Point2) -> Option<[Point2; 2]> {
    let d = p.dist(q);
    if d > 2.0 + FIT_EPS || d == 0.0 {
        return None;
    }
    let m = p.midpoint(q);
    let h = (1.0 - 0.25 * d * d).max(0.0).sqrt();
    let n = Point2::new(-(q - p).y, (q - p).x) * (h / d);
    Some([m + n, m - n])
}

/// All maximal subsets of `points` that fit in a closed unit disk.
///
/// Every such subset fits in a disk with two of its points on the boundary, or
/// centered on one of them, so candidate disks of those two kinds suffice.
pub fn enumerate_clusters(points: &[Point2]) -> Result<Vec<Cluster>> {
    check_points(points)?;
    let n = points.len();
    let collect = |c: Point2| -> u64 {
        (0..n)
            .filter(|&k| points[k].dist(c) <= 1.0 + FIT_EPS)
            .fold(0u64, |m, k| m | 1 << k)
    };
    let mut masks: Vec<u64> = Vec::new();
    for i in 0..n {
        masks.push(collect(points[i]));
        for j in i + 1..n {
            if let Some(cs) = pair_centers(points[i], points[j]) {
                masks.extend(cs.iter().map(|&c| collect(c)));
            }
        }
    }
    masks.sort_unstable_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
    masks.dedup();
    let mut maximal: Vec<u64> = Vec::new();
    for m in masks {
        if !maximal.iter().any(|&big| big & m == m) {
            maximal.push(m);
        }
    }
    maximal.sort_unstable();
    let mut out = Vec::with_capacity(maximal.len());
    for m in maximal {
        let c = Cluster::from_mask(points, m)?;
        if c.radius <= 1.0 + FIT_EPS {
            out.push(c);
        } else {
            // slack admitted a set that does not quite fit; fall back to its singletons
            for i in bits(m) {
                out.push(Cluster::from_mask(points, 1 << i)?);
            }
        }
    }
    Ok(out)
}

/// True iff every point is within `1 + 1e-9` of a center and centers are pairwise `≥ 2 − 1e-9` apart.
pub fn verify_cover(points: &[Point2], centers: &[Point2]) -> bool {
    let covered = points
        .iter()
        .all(|&p| centers.iter().any(|&c| p.dist(c) <= 1.0 + VERIFY_EPS));
    covered && is_packing(centers)
}

fn is_packing(centers: &[Point2]) -> bool {
    centers.iter().enumerate().all(|(i, &a)| {
        centers[i + 1..]
            .iter()
            .all(|&b| a.dist(b) >= 2.0 - VERIFY_EPS)
    })
}

/// Index of a center covering each point.
fn assign(points: &[Point2], centers: &[Point2]) -> Vec<Option<usize>> {
    points
        .iter()
        .map(|&p| {
            centers
                .iter()
                .enumerate()
                .filter(|(_, &c)| p.dist(c) <= 1.0 + VERIFY_EPS)
                .min_by(|a, b| p.dist(*a.1).total_cmp(&p.dist(*b.1)))
                .map(|(k, _)| k)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    /// Partitions handed to the feasibility phase.
    pub partitions: u64,
    /// Restarts per partition.
    pub restarts: u32,
    /// Projection iterations per restart.
    pub iterations: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            partitions: 1_000,
            restarts: 32,
            iterations: 500,
        }
    }
}

impl Budget {
    /// Multiplies the partition count, leaving the per-partition effort unchanged.
    pub fn scaled(self, factor: u64) -> Self {
        Self {
            partitions: self.partitions.saturating_mul(factor),
            ..self
        }
    }

    fn node_cap(&self) -> u64 {
        self.partitions.saturating_mul(1_000)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolveStatus {
    Covered,
    /// No cover found; the reported centers leave this many points uncovered.
    Unknown {
        best_uncovered: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverSolution {
    pub centers: Vec<Point2>,
    /// For each point, the center covering it.
    pub assignment: Vec<Option<usize>>,
    pub status: SolveStatus,
    pub partitions_tried: u64,
}

impl CoverSolution {
    pub fn is_covered(&self) -> bool {
        self.status == SolveStatus::Covered
    }

    pub fn covered_flags(&self) -> Vec<bool> {
        self.assignment.iter().map(Option::is_some).collect()
    }

    fn from_centers(points: &[Point2], centers: Vec<Point2>, partitions_tried: u64) -> Self {
        let assignment = assign(points, &centers);
        let uncovered = assignment.iter().filter(|a| a.is_none()).count();
        let status = if uncovered == 0 && is_packing(&centers) {
            SolveStatus::Covered
        } else {
            SolveStatus::Unknown {
                best_uncovered: uncovered,
            }
        };
        Self {
            centers,
            assignment,
            status,
            partitions_tried,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub budget: Budget,
    pub seed: u64,
    /// Candidate centers tried before any search, e.g. a translated close packing.
    pub hint: Option<Vec<Point2>>,
    pub lattice_phase: bool,
}

impl SolveOptions {
    pub fn new(budget: Budget, seed: u64) -> Self {
        Self {
            budget,
            seed,
            hint: None,
            lattice_phase: true,
        }
    }
}

/// Searches for a packing of unit disks covering all points.
pub fn solve_cover(points: &[Point2], budget: Budget, seed: u64) -> Result<CoverSolution> {
    solve_cover_with(points, &SolveOptions::new(budget, seed), None)
}

/// [`solve_cover`] with the close packing `H + t` as the first candidate.
pub fn solve_cover_with_translate(
    points: &[Point2],
    t: Point2,
    budget: Budget,
    seed: u64,
) -> Result<CoverSolution> {
    let mut opts = SolveOptions::new(budget, seed);
    opts.hint = Some(close_packing_centers(points, Pose::new(0.0, t)));
    solve_cover_with(points, &opts, None)
}

/// Lattice points of the posed close packing nearest to each point, deduplicated.
fn close_packing_centers(points: &[Point2], pose: Pose) -> Vec<Point2> {
    let lattice = HexLattice::new(2.0, pose).expect("positive distance");
    let mut centers: Vec<Point2> = Vec::new();
    for &p in points {
        let (c, _) = lattice.nearest(p);
        if !centers.iter().any(|&q| q.dist(c) < 1e-9) {
            centers.push(c);
        }
    }
    centers
}

/// Keeps the centers that cover some point, dropping later ones that overlap kept ones.
fn prune_centers(points: &[Point2], centers: &[Point2]) -> Vec<Point2> {
    let mut kept: Vec<Point2> = Vec::new();
    for &c in centers {
        let useful = points.iter().any(|&p| p.dist(c) <= 1.0 + VERIFY_EPS);
        if useful && kept.iter().all(|&k| k.dist(c) >= 2.0 - VERIFY_EPS) {
            kept.push(c);
        }
    }
    kept
}

fn uncovered_count(points: &[Point2], centers: &[Point2]) -> usize {
    points
        .iter()
        .filter(|&&p| !centers.iter().any(|&c| p.dist(c) <= 1.0 + VERIFY_EPS))
        .count()
}

pub fn solve_cover_with(
    points: &[Point2],
    opts: &SolveOptions,
    cancel: Option<&CancelToken>,
) -> Result<CoverSolution> {
    check_points(points)?;
    if points.is_empty() {
        return Ok(CoverSolution::from_centers(points, Vec::new(), 0));
    }
    let mut best: Vec<Point2> = Vec::new();
    let mut best_uncovered = points.len();
    let mut consider = |centers: Vec<Point2>, best: &mut Vec<Point2>| -> bool {
        let centers = prune_centers(points, &centers);
        let u = uncovered_count(points, &centers);
        if u < best_uncovered {
            best_uncovered = u;
            *best = centers;
        }
        u == 0
    };

    if let Some(hint) = &opts.hint {
        if consider(hint.clone(), &mut best) && verify_cover(points, &best) {
            return Ok(CoverSolution::from_centers(points, best, 0));
        }
    }

    if opts.lattice_phase {
        if let Some(centers) = lattice_phase(points, cancel)? {
            if consider(centers, &mut best) && verify_cover(points, &best) {
                return Ok(CoverSolution::from_centers(points, best, 0));
            }
        }
    }

    let clusters = enumerate_clusters(points)?;
    let masks: Vec<u64> = clusters.iter().map(Cluster::mask).collect();
    let search = PartitionSpace::new(points, &masks);
    let n = points.len();
    let mut tried = 0u64;
    let mut nodes = 0u64;
    let mut attempt = 0u64;
    'levels: for parts in search.lower_bound(search.all)..=n {
        let mut iter = search.iter(parts);
        loop {
            if cancel.is_some_and(|c| c.is_cancelled()) {
                return Err(Error::Cancelled);
            }
            let mut batch: Vec<(u64, Vec<u64>)> = Vec::with_capacity(BATCH);
            while batch.len() < BATCH && tried + (batch.len() as u64) < opts.budget.partitions {
                match iter.next(&mut nodes, opts.budget.node_cap()) {
                    Some(p) => {
                        batch.push((attempt, p));
                        attempt += 1;
                    }
                    None => break,
                }
            }
            if batch.is_empty() {
                if tried >= opts.budget.partitions || nodes >= opts.budget.node_cap() {
                    break 'levels;
                }
                continue 'levels;
            }
            tried += batch.len() as u64;
            let results: Vec<Result<Feasibility>> = batch
                .par_iter()
                .map(|(idx, part)| {
                    let clusters: Vec<Cluster> = part
                        .iter()
                        .map(|&m| Cluster::from_mask(points, m))
                        .collect::<Result<_>>()?;
                    Ok(continuous_feasibility(
                        points,
                        &clusters,
                        opts.budget.restarts,
                        opts.budget.iterations,
                        derive_seed(opts.seed, *idx),
                    ))
                })
                .collect();
            // lowest partition index wins
            for r in results {
                match r? {
                    Feasibility::Found(centers) => {
                        if consider(centers, &mut best) && verify_cover(points, &best) {
                            return Ok(CoverSolution::from_centers(points, best, tried));
                        }
                    }
                    Feasibility::Failed { best: centers, .. } => {
                        consider(centers, &mut best);
                    }
                }
            }
        }
    }
    Ok(CoverSolution::from_centers(points, best, tried))
}

/// Tries rotated close packings; the translate for each rotation comes from the handicap oracle.
fn lattice_phase(points: &[Point2], cancel: Option<&CancelToken>) -> Result<Option<Vec<Point2>>> {
    let limits = SubdivisionLimits {
        depth: 12,
        margin: 0.0,
        box_budget: 20_000,
    };
    let step = std::f64::consts::FRAC_PI_3 / LATTICE_ANGLES as f64;
    let mut best: Option<(usize, Vec<Point2>)> = None;
    for a in 0..LATTICE_ANGLES {
        let angle = a as f64 * step;
        let local: Vec<Point2> = points.iter().map(|p| p.rotate(-angle)).collect();
        let outcome = match handicap_oracle_with(&local, &limits, cancel) {
            Ok(o) => o,
            Err(Error::Cancelled) => return Err(Error::Cancelled),
            Err(e) => return Err(e),
        };
        if let HandicapOutcome::Coverable { t } = outcome {
            let centers = close_packing_centers(points, Pose::new(angle, t.rotate(angle)));
            let u = uncovered_count(points, &centers);
            if u == 0 {
                return Ok(Some(centers));
            }
            if best.as_ref().is_none_or(|b| u < b.0) {
                best = Some((u, centers));
            }
        }
    }
    Ok(best.map(|b| b.1))
}

struct PartitionSpace<'a> {
    points: &'a [Point2],
    all: u64,
    /// Maximal cluster masks containing each point.
    by_point: Vec<Vec<u64>>,
    /// Points within distance 2 of each point.
    near: Vec<u64>,
}

impl<'a> PartitionSpace<'a> {
    fn new(points: &'a [Point2], masks: &[u64]) -> Self {
        let n = points.len();
        let by_point = (0..n)
            .map(|i| masks.iter().copied().filter(|m| m >> i & 1 == 1).collect())
            .collect();
        let near = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| points[i].dist(points[j]) <= 2.0 + FIT_EPS)
                    .fold(0u64, |m, j| m | 1 << j)
            })
            .collect();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Self {
            points,
            all,
            by_point,
            near,
        }
    }

    /// MEC center of the part and the radius of a disk holding every feasible center.
    fn reach(&self, mask: u64) -> (Point2, f64) {
        let pts: Vec<Point2> = bits(mask).iter().map(|&i| self.points[i]).collect();
        let mec = min_enclosing_circle(&pts).expect("non-empty part");
        (mec.center, (1.0 - mec.radius * mec.radius).max(0.0).sqrt())
    }

    /// Greedy set of points pairwise more than 2 apart; each needs its own disk.
    fn lower_bound(&self, remaining: u64) -> usize {
        let mut free = remaining;
        let mut count = 0;
        while free != 0 {
            let i = free.trailing_zeros() as usize;
            count += 1;
            free &= !self.near[i];
        }
        count
    }

    fn options(&self, remaining: u64) -> Vec<u64> {
        let i = remaining.trailing_zeros() as usize;
        let mut opts: Vec<u64> = self.by_point[i].iter().map(|m| m & remaining).collect();
        opts.push(1 << i);
        opts.sort_unstable_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
        opts.dedup();
        opts
    }

    fn iter(&self, parts: usize) -> PartitionIter<'_, 'a> {
        PartitionIter {
            space: self,
            target: parts,
            parts: Vec::new(),
            reach: Vec::new(),
            stack: vec![Frame {
                remaining: self.all,
                depth: 0,
                options: self.options(self.all),
                next: 0,
            }],
        }
    }
}

struct Frame {
    remaining: u64,
    depth: usize,
    options: Vec<u64>,
    next: usize,
}

/// Depth-first enumeration of partitions with exactly `target` parts.
///
/// A feasible center of a part with MEC radius `R` lies within `√(1 − R²)` of
/// the MEC center, so two parts whose such disks are less than 2 apart at their
/// farthest cannot get separate disks and the branch is cut.
struct PartitionIter<'s, 'a> {
    space: &'s PartitionSpace<'a>,
    target: usize,
    parts: Vec<u64>,
    reach: Vec<(Point2, f64)>,
    stack: Vec<Frame>,
}

impl PartitionIter<'_, '_> {
    fn next(&mut self, nodes: &mut u64, cap: u64) -> Option<Vec<u64>> {
        loop {
            let top = self.stack.last_mut()?;
            if top.next >= top.options.len() {
                self.stack.pop();
                continue;
            }
            let opt = top.options[top.next];
            top.next += 1;
            let remaining = top.remaining & !opt;
            let depth = top.depth + 1;
            self.parts.truncate(top.depth);
            self.reach.truncate(top.depth);
            let (m, s) = self.space.reach(opt);
            if self
                .reach
                .iter()
                .any(|&(m2, s2)| m.dist(m2) + s + s2 < 2.0 - VERIFY_EPS)
            {
                continue;
            }
            self.parts.push(opt);
            self.reach.push((m, s));
            if remaining == 0 {
                if depth == self.target {
                    return Some(self.parts.clone());
                }
                continue;
            }
            if depth + self.space.lower_bound(remaining) > self.target {
                continue;
            }
            *nodes += 1;
            if *nodes >= cap {
                self.stack.clear();
                return None;
            }
            let options = self.space.options(remaining);
            self.stack.push(Frame {
                remaining,
                depth,
                options,
                next: 0,
            });
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Feasibility {
    Found(Vec<Point2>),
    /// Best attempt and its largest remaining pairwise overlap.
    Failed {
        best: Vec<Point2>,
        violation: f64,
    },
}

/// Nearest point to `x` in the intersection of closed disks of radius `radius` about `sites`.
///
/// The nearest point lies on one boundary circle or at a pairwise crossing of two.
pub fn project_to_disk_intersection(x: Point2, sites: &[Point2], radius: f64) -> Option<Point2> {
    let tol = 1e-12;
    let inside = |y: Point2| sites.iter().all(|&s| y.dist(s) <= radius + tol);
    if inside(x) {
        return Some(x);
    }
    let mut candidates: Vec<(f64, Point2)> = Vec::new();
    for &s in sites {
        let v = x - s;
        let n = v.norm();
        let y = if n > 0.0 { s + v * (radius / n) } else { s };
        candidates.push((y.dist(x), y));
    }
    for (i, &a) in sites.iter().enumerate() {
        for &b in &sites[i + 1..] {
            let d = a.dist(b);
            if d == 0.0 || d > 2.0 * radius {
                continue;
            }
            let m = a.midpoint(b);
            let h = (radius * radius - 0.25 * d * d).max(0.0).sqrt();
            let n = Point2::new(-(b - a).y, (b - a).x) * (h / d);
            for y in [m + n, m - n] {
                candidates.push((y.dist(x), y));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0));
    candidates.into_iter().map(|c| c.1).find(|&y| inside(y))
}

/// Vertices of the convex hull; a point is within 1 of the whole set iff within 1 of these.
fn hull_vertices(points: &[Point2]) -> Vec<Point2> {
    let mut pts = points.to_vec();
    pts.sort_by(Point2::lex_cmp);
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        for &p in &pts {
            while hull.len() >= start + 2
                && (hull[hull.len() - 1] - hull[hull.len() - 2]).cross(p - hull[hull.len() - 2])
                    <= 0.0
            {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
        if pass == 0 {
            pts.reverse();
        }
    }
    hull
}

/// Places one disk per cluster so that the disks do not overlap.
///
/// Alternates a symmetric push-apart of overlapping centers with projection of
/// each center back onto the region where its disk still covers its cluster.
pub fn continuous_feasibility(
    points: &[Point2],
    partition: &[Cluster],
    restarts: u32,
    iterations: u32,
    seed: u64,
) -> Feasibility {
    let sites: Vec<Vec<Point2>> = partition
        .iter()
        .map(|c| hull_vertices(&c.members.iter().map(|&i| points[i]).collect::<Vec<_>>()))
        .collect();
    let radius = 1.0 + FIT_EPS;
    let m = partition.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let jitter = Normal::new(0.0, 0.5).expect("valid normal");
    let mut best: Option<(f64, Vec<Point2>)> = None;
    for r in 0..restarts.max(1) {
        let mut c: Vec<Point2> = partition.iter().map(|cl| cl.center).collect();
        if r > 0 {
            for (k, ck) in c.iter_mut().enumerate() {
                let moved = *ck + Point2::new(jitter.sample(&mut rng), jitter.sample(&mut rng));
                *ck = project_to_disk_intersection(moved, &sites[k], radius).unwrap_or(*ck);
            }
        }
        let mut best_viol = f64::INFINITY;
        let mut last_gain = 0;
        for it in 0..iterations.max(1) {
            let viol = overlap(&c);
            if viol <= 0.0 {
                return Feasibility::Found(c);
            }
            if best.as_ref().is_none_or(|b| viol < b.0) {
                best = Some((viol, c.clone()));
            }
            if viol < best_viol * (1.0 - 1e-2) {
                best_viol = viol;
                last_gain = it;
            } else if it - last_gain > STAGNATION {
                break;
            }
            for i in 0..m {
                for j in i + 1..m {
                    let v = c[i] - c[j];
                    let d = v.norm();
                    if d >= REPEL_TARGET {
                        continue;
                    }
                    let dir = if d > 1e-12 {
                        v * (1.0 / d)
                    } else {
                        Point2::polar(1.0, rng.random::<f64>() * std::f64::consts::TAU)
                    };
                    let push = 0.5 * (REPEL_TARGET - d);
                    c[i] += dir * push;
                    c[j] -= dir * push;
                }
            }
            for k in 0..m {
                if let Some(p) = project_to_disk_intersection(c[k], &sites[k], radius) {
                    c[k] = p;
                }
            }
        }
        let viol = overlap(&c);
        if viol <= 0.0 {
            return Feasibility::Found(c);
        }
        if best.as_ref().is_none_or(|b| viol < b.0) {
            best = Some((viol, c));
        }
    }
    let (violation, best) = best.expect("at least one restart");
    Feasibility::Failed { best, violation }
}

/// Largest pairwise overlap beyond the verification tolerance, or ≤ 0 when the centers pack.
fn overlap(c: &[Point2]) -> f64 {
    let mut worst = f64::NEG_INFINITY;
    for (i, &a) in c.iter().enumerate() {
        for &b in &c[i + 1..] {
            worst = worst.max(2.0 - 1e-10 - a.dist(b));
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RemovalOutcome {
    pub index: usize,
    pub point: Point2,
    pub status: SolveStatus,
}

/// Tries to cover the configuration with each point removed in turn.
pub fn removability_probe(
    cfg: &HardConfiguration,
    budget: Budget,
    seed: u64,
) -> Result<Vec<RemovalOutcome>> {
    removability_probe_points(&cfg.points, budget, seed)
}

pub fn removability_probe_points(
    points: &[Point2],
    budget: Budget,
    seed: u64,
) -> Result<Vec<RemovalOutcome>> {
    check_points(points)?;
    (0..points.len())
        .into_par_iter()
        .map(|i| {
            let rest: Vec<Point2> = points
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != i)
                .map(|(_, &p)| p)
                .collect();
            let sol = solve_cover(&rest, budget, derive_seed(seed, i as u64))?;
            Ok(RemovalOutcome {
                index: i,
                point: points[i],
                status: sol.status,
            })
        })
        .collect()
}
