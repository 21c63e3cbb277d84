//! Adaptive subdivision of the fundamental cell against unions of interstitium regions.
//!
//! The cell is parametrised as `u·(2, 0) + v·(1, √3)` with `(u, v) ∈ [0, 1]²`.
//! The distance to the close packing is 1-Lipschitz, so a box of circumradius
//! `ρ` around center `c` has every distance within `dist(c) ± ρ`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::TranslateSet;
use crate::control::CancelToken;
use crate::error::{Error, Result};
use crate::geometry::{dist_to_close_packing, Point2, SQRT_3};

/// Default subdivision depth.
pub const DEFAULT_DEPTH: u32 = 24;
/// Default number of boxes examined before giving up.
pub const DEFAULT_BOX_BUDGET: u64 = 20_000_000;
const MAX_FRONTIER: usize = 10_000;
const ROOT_SPLIT: u32 = 2;

/// A parameter-space box `[u, u+size] × [v, v+size]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CellBox {
    pub u: f64,
    pub v: f64,
    pub size: f64,
    pub depth: u32,
}

impl CellBox {
    pub const ROOT: CellBox = CellBox {
        u: 0.0,
        v: 0.0,
        size: 1.0,
        depth: 0,
    };

    fn param_to_point(u: f64, v: f64) -> Point2 {
        Point2::new(2.0 * u + v, SQRT_3 * v)
    }

    pub fn center(&self) -> Point2 {
        Self::param_to_point(self.u + 0.5 * self.size, self.v + 0.5 * self.size)
    }

    /// Largest distance from the center to a corner of the parallelogram.
    pub fn circumradius(&self) -> f64 {
        // half-diagonals are size·(3, √3)/2 and size·(1, −√3)/2
        self.size * SQRT_3
    }

    pub fn corners(&self) -> [Point2; 4] {
        let (u, v, s) = (self.u, self.v, self.size);
        [
            Self::param_to_point(u, v),
            Self::param_to_point(u + s, v),
            Self::param_to_point(u + s, v + s),
            Self::param_to_point(u, v + s),
        ]
    }

    fn children(&self) -> [CellBox; 4] {
        let h = 0.5 * self.size;
        let d = self.depth + 1;
        [
            CellBox {
                u: self.u,
                v: self.v,
                size: h,
                depth: d,
            },
            CellBox {
                u: self.u + h,
                v: self.v,
                size: h,
                depth: d,
            },
            CellBox {
                u: self.u,
                v: self.v + h,
                size: h,
                depth: d,
            },
            CellBox {
                u: self.u + h,
                v: self.v + h,
                size: h,
                depth: d,
            },
        ]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CoverStatus {
    Covered,
    NotCovered {
        witness: CellBox,
    },
    Undecided {
        frontier: Vec<CellBox>,
        frontier_total: u64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverCertificate {
    pub status: CoverStatus,
    /// Deepest subdivision level reached.
    pub depth: u32,
    pub margin: f64,
    pub boxes: u64,
}

impl CoverCertificate {
    pub fn is_covered(&self) -> bool {
        matches!(self.status, CoverStatus::Covered)
    }
}

/// What the engine looks for besides full coverage.
#[derive(Clone, Copy, PartialEq)]
enum Mode {
    /// Regions are interstitia of `H + a_k`; a box point covered by no region is a gap.
    TranslateCover,
    /// Regions are `{t : dist(p_k − t, H) > 1}`; a translate outside all of them covers every point.
    Handicap,
}

#[derive(Debug, Clone, Copy)]
pub struct SubdivisionLimits {
    pub depth: u32,
    pub margin: f64,
    pub box_budget: u64,
}

impl SubdivisionLimits {
    pub fn new(depth: u32, margin: f64) -> Self {
        Self {
            depth,
            margin,
            box_budget: DEFAULT_BOX_BUDGET,
        }
    }
}

enum Leaf {
    Gap(CellBox),
    Witness(Point2),
}

struct SubtreeResult {
    found: Option<Leaf>,
    frontier: Vec<CellBox>,
    frontier_total: u64,
    boxes: u64,
    depth: u32,
    exhausted: bool,
}

fn explore(
    root: CellBox,
    anchors: &[Point2],
    mode: Mode,
    limits: &SubdivisionLimits,
    budget: u64,
    cancel: Option<&CancelToken>,
) -> SubtreeResult {
    let mut res = SubtreeResult {
        found: None,
        frontier: Vec::new(),
        frontier_total: 0,
        boxes: 0,
        depth: 0,
        exhausted: false,
    };
    let all: Vec<u32> = (0..anchors.len() as u32).collect();
    let mut stack: Vec<(CellBox, Vec<u32>)> = vec![(root, all)];
    while let Some((b, active)) = stack.pop() {
        res.boxes += 1;
        res.depth = res.depth.max(b.depth);
        if res.boxes > budget
            || (res.boxes.is_multiple_of(4096) && cancel.is_some_and(|c| c.is_cancelled()))
        {
            res.exhausted = true;
            res.frontier_total += 1 + stack.len() as u64;
            if res.frontier.len() < MAX_FRONTIER {
                res.frontier.push(b);
            }
            return res;
        }
        let c = b.center();
        let rho = b.circumradius();
        let mut next = Vec::with_capacity(active.len());
        let mut inside = false;
        let mut all_in_disk = true;
        for &k in &active {
            let a = anchors[k as usize];
            let d = match mode {
                Mode::TranslateCover => dist_to_close_packing(c - a),
                Mode::Handicap => dist_to_close_packing(a - c),
            };
            if d - rho >= 1.0 + limits.margin {
                inside = true;
                break;
            }
            if d > 1.0 {
                all_in_disk = false;
            }
            if d + rho > 1.0 {
                next.push(k);
            }
        }
        if inside {
            continue;
        }
        if mode == Mode::Handicap && all_in_disk {
            res.found = Some(Leaf::Witness(c));
            return res;
        }
        if next.is_empty() {
            match mode {
                Mode::TranslateCover => {
                    res.found = Some(Leaf::Gap(b));
                    return res;
                }
                Mode::Handicap => {
                    // no region meets the box: its center is covered by every disk
                    res.found = Some(Leaf::Witness(c));
                    return res;
                }
            }
        }
        if b.depth >= limits.depth {
            res.frontier_total += 1;
            if res.frontier.len() < MAX_FRONTIER {
                res.frontier.push(b);
            }
            continue;
        }
        for child in b.children().into_iter().rev() {
            stack.push((child, next.clone()));
        }
    }
    res
}

fn run(
    anchors: &[Point2],
    mode: Mode,
    limits: &SubdivisionLimits,
    cancel: Option<&CancelToken>,
) -> Result<(Option<Leaf>, CoverCertificate)> {
    if !limits.margin.is_finite() || limits.margin < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "margin must be ≥ 0, got {}",
            limits.margin
        )));
    }
    let split = 1u32 << ROOT_SPLIT;
    let size = 1.0 / split as f64;
    let roots: Vec<CellBox> = (0..split * split)
        .map(|k| CellBox {
            u: (k % split) as f64 * size,
            v: (k / split) as f64 * size,
            size,
            depth: ROOT_SPLIT,
        })
        .collect();
    let per_root = (limits.box_budget / roots.len() as u64).max(1);
    let results: Vec<SubtreeResult> = roots
        .par_iter()
        .map(|&r| explore(r, anchors, mode, limits, per_root, cancel))
        .collect();
    if cancel.is_some_and(|c| c.is_cancelled()) {
        return Err(Error::Cancelled);
    }
    let boxes = results.iter().map(|r| r.boxes).sum();
    let depth = results.iter().map(|r| r.depth).max().unwrap_or(0);
    let mut frontier = Vec::new();
    let mut frontier_total = 0;
    let mut leaf = None;
    for r in results {
        if leaf.is_none() {
            leaf = r.found;
        }
        frontier_total += r.frontier_total;
        frontier.extend(r.frontier);
    }
    frontier.truncate(MAX_FRONTIER);
    let status = match &leaf {
        Some(Leaf::Gap(b)) => CoverStatus::NotCovered { witness: *b },
        Some(Leaf::Witness(_)) => CoverStatus::NotCovered {
            witness: CellBox::ROOT,
        },
        None if frontier_total == 0 => CoverStatus::Covered,
        None => CoverStatus::Undecided {
            frontier,
            frontier_total,
        },
    };
    Ok((
        leaf,
        CoverCertificate {
            status,
            depth,
            margin: limits.margin,
            boxes,
        },
    ))
}

/// Certifies that the interstitia of `H + a` over all translates cover the plane.
pub fn certify_translate_cover(
    ts: &TranslateSet,
    margin: f64,
    depth: u32,
) -> Result<CoverCertificate> {
    certify_translate_cover_with(
        ts.translates(),
        &SubdivisionLimits::new(depth, margin),
        None,
    )
}

pub fn certify_translate_cover_with(
    translates: &[Point2],
    limits: &SubdivisionLimits,
    cancel: Option<&CancelToken>,
) -> Result<CoverCertificate> {
    if limits.margin.is_nan() || limits.margin <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "margin must be > 0, got {}",
            limits.margin
        )));
    }
    Ok(run(translates, Mode::TranslateCover, limits, cancel)?.1)
}

/// Result of the handicap game for a point set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HandicapOutcome {
    /// The close packing translated by `t` covers every point.
    Coverable { t: Point2 },
    /// No translate covers all points (when `Covered`), or the search was inconclusive.
    Certificate(CoverCertificate),
}

impl HandicapOutcome {
    pub fn witness(&self) -> Option<Point2> {
        match self {
            HandicapOutcome::Coverable { t } => Some(*t),
            HandicapOutcome::Certificate(_) => None,
        }
    }
}

/// Decides whether some translate of the close packing covers all `points`.
pub fn handicap_oracle(points: &[Point2], depth: u32, margin: f64) -> Result<HandicapOutcome> {
    handicap_oracle_with(points, &SubdivisionLimits::new(depth, margin), None)
}

pub fn handicap_oracle_with(
    points: &[Point2],
    limits: &SubdivisionLimits,
    cancel: Option<&CancelToken>,
) -> Result<HandicapOutcome> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    if let Some(p) = points.iter().find(|p| !p.is_finite()) {
        return Err(Error::NonFinite { x: p.x, y: p.y });
    }
    let covers_all = |t: Point2| points.iter().all(|&p| dist_to_close_packing(p - t) <= 1.0);
    for &p in points {
        if covers_all(p) {
            return Ok(HandicapOutcome::Coverable { t: p });
        }
    }
    let (leaf, cert) = run(points, Mode::Handicap, limits, cancel)?;
    if let Some(Leaf::Witness(t)) = leaf {
        if covers_all(t) {
            return Ok(HandicapOutcome::Coverable { t });
        }
    }
    Ok(HandicapOutcome::Certificate(cert))
}

/// The translate covering the most points, found on a `grid × grid` scan of the cell.
pub fn best_translate(points: &[Point2], grid: usize) -> (Point2, usize) {
    let mut best = (Point2::ORIGIN, 0usize);
    let mut candidates: Vec<Point2> = points.to_vec();
    for i in 0..grid {
        for j in 0..grid {
            let u = (i as f64 + 0.5) / grid as f64;
            let v = (j as f64 + 0.5) / grid as f64;
            candidates.push(CellBox::param_to_point(u, v));
        }
    }
    for t in candidates {
        let n = points
            .iter()
            .filter(|&&p| dist_to_close_packing(p - t) <= 1.0)
            .count();
        if n > best.1 {
            best = (t, n);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn box_radius_bounds_corners() {
        let b = CellBox {
            u: 0.25,
            v: 0.5,
            size: 0.125,
            depth: 3,
        };
        let c = b.center();
        let max = b.corners().iter().map(|p| p.dist(c)).fold(0.0, f64::max);
        assert!((max - b.circumradius()).abs() < 1e-12);
    }

    #[test]
    fn single_point_coverable() {
        let out = handicap_oracle(&[Point2::new(3.7, -1.2)], 16, 1e-6).unwrap();
        let t = out.witness().unwrap();
        assert!(dist_to_close_packing(Point2::new(3.7, -1.2) - t) <= 1.0);
    }

    #[test]
    fn empty_input_rejected() {
        assert_eq!(handicap_oracle(&[], 8, 1e-6), Err(Error::EmptyInput));
        assert!(certify_translate_cover(&TranslateSet::new(vec![Point2::ORIGIN]), 0.0, 8).is_err());
    }

    #[test]
    fn single_translate_leaves_gap() {
        let cert =
            certify_translate_cover(&TranslateSet::new(vec![Point2::ORIGIN]), 1e-6, 16).unwrap();
        let CoverStatus::NotCovered { witness } = cert.status else {
            panic!("expected a gap, got {:?}", cert.status);
        };
        let c = witness.center();
        assert!(dist_to_close_packing(c) + witness.circumradius() <= 1.0);
    }
}
