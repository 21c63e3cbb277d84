//! Lower-bound machinery built on interstitia of translated close packings.
//!
//! A point `p` defeats the translate `t` when `p − t` lies in the interstitium
//! of `H`. The handicap oracle asks whether the regions defeated by a point set
//! cover the whole cell; the translate-cover tools ask the dual question for a
//! fixed set of translates.

mod exact;
mod search;
mod subdivision;
mod triangles;

pub use exact::{ExactPoint, QSqrt3};
pub use search::{
    estimate_uncovered, search_translate_cover, search_translate_cover_with, SearchParams,
    SearchResult, UncoveredEstimate,
};
pub use subdivision::{
    best_translate, certify_translate_cover, certify_translate_cover_with, handicap_oracle,
    handicap_oracle_with, CellBox, CoverCertificate, CoverStatus, HandicapOutcome,
    SubdivisionLimits, DEFAULT_BOX_BUDGET, DEFAULT_DEPTH,
};
pub use triangles::{
    certify_triangle_tiling, certify_triangle_tiling_detailed, inscribed_triangles,
    InscribedTriangle, Orientation, TilingVerdict, TRIANGLE_SIDE,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{HexLattice, Point2, FUNDAMENTAL_AREA, INTERSTITIUM_AREA};

/// Default clearance demanded of accepted boxes.
pub const DEFAULT_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    /// `|U| / |I|`.
    pub ratio: f64,
    /// Smallest point count that can possibly beat every translate.
    pub bound: u64,
}

/// Area bound: at least `⌈|U| / |I|⌉` interstitia are needed to cover the cell.
pub fn compute_lower_bound() -> LowerBound {
    lower_bound_from_area(INTERSTITIUM_AREA).expect("interstitium area is positive")
}

/// Area bound for a hypothetical interstitium area.
pub fn lower_bound_from_area(area: f64) -> Result<LowerBound> {
    if !(area > 0.0 && area <= FUNDAMENTAL_AREA) {
        return Err(Error::InvalidArgument(format!(
            "interstitium area must lie in (0, {FUNDAMENTAL_AREA}], got {area}"
        )));
    }
    let ratio = FUNDAMENTAL_AREA / area;
    // snap values within rounding of an integer so |U|/|U| gives exactly 1
    let nearest = ratio.round();
    let bound = if (ratio - nearest).abs() < 1e-9 {
        nearest
    } else {
        ratio.ceil()
    };
    Ok(LowerBound {
        ratio,
        bound: bound as u64,
    })
}

#[derive(Deserialize)]
struct TranslateSetFile {
    translates: Vec<Point2>,
}

/// Translates of the close packing, reduced to the Voronoi cell of the origin.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(from = "TranslateSetFile")]
pub struct TranslateSet {
    translates: Vec<Point2>,
    #[serde(skip)]
    exact: Option<Vec<ExactPoint>>,
}

impl From<TranslateSetFile> for TranslateSet {
    fn from(f: TranslateSetFile) -> Self {
        TranslateSet::new(f.translates)
    }
}

impl PartialEq for TranslateSet {
    fn eq(&self, other: &Self) -> bool {
        self.translates == other.translates
    }
}

fn reduce_all(points: &[Point2]) -> Vec<Point2> {
    let h = HexLattice::close_packing();
    points.iter().map(|&p| h.reduce(p)).collect()
}

fn dedup_indices(points: &[Point2]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].lex_cmp(&points[b]));
    let mut keep: Vec<usize> = Vec::new();
    for i in order {
        if !keep.iter().any(|&j| points[j].dist(points[i]) < 1e-12) {
            keep.push(i);
        }
    }
    keep
}

impl TranslateSet {
    pub fn new(points: Vec<Point2>) -> Self {
        let reduced = reduce_all(&points);
        let keep = dedup_indices(&reduced);
        Self {
            translates: keep.iter().map(|&i| reduced[i]).collect(),
            exact: None,
        }
    }

    fn with_exact(points: Vec<Point2>, exact: Vec<ExactPoint>) -> Self {
        let keep = dedup_indices(&points);
        Self {
            translates: keep.iter().map(|&i| points[i]).collect(),
            exact: Some(keep.iter().map(|&i| exact[i].clone()).collect()),
        }
    }

    pub fn translates(&self) -> &[Point2] {
        &self.translates
    }

    pub fn len(&self) -> usize {
        self.translates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.translates.is_empty()
    }

    pub fn has_exact_coordinates(&self) -> bool {
        self.exact.is_some()
    }

    /// Exact coordinates; float translates are taken at their binary values.
    pub fn exact_translates(&self) -> Vec<ExactPoint> {
        match &self.exact {
            Some(e) => e.clone(),
            None => self
                .translates
                .iter()
                .map(|&p| ExactPoint::from_point(p).expect("translates are finite"))
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// The `n²` cosets of `H/n` in `H`, with exact coordinates.
pub fn lattice_translate_set(n: u32) -> Result<TranslateSet> {
    if n == 0 {
        return Err(Error::InvalidArgument("divisor must be ≥ 1".into()));
    }
    let h = HexLattice::close_packing();
    let n = n as i64;
    let mut pts = Vec::new();
    let mut exact = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let raw = h.point(i, j) * (1.0 / n as f64);
            let reduced = h.reduce(raw);
            let (a, b) = h.coords(raw - reduced);
            let (a, b) = (a.round() as i64, b.round() as i64);
            pts.push(reduced);
            exact.push(ExactPoint::from_lattice_coords(i - a * n, j - b * n, n));
        }
    }
    Ok(TranslateSet::with_exact(pts, exact))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{dist_to_close_packing, SQRT_3};

    #[test]
    fn lower_bound_values() {
        let lb = compute_lower_bound();
        let closed = 2.0 * SQRT_3 / (2.0 * SQRT_3 - std::f64::consts::PI);
        assert!((lb.ratio - closed).abs() < 1e-9);
        assert!((lb.ratio - 10.74110).abs() < 1e-5);
        assert_eq!(lb.bound, 11);
        assert_eq!(lower_bound_from_area(FUNDAMENTAL_AREA).unwrap().bound, 1);
        assert!(lower_bound_from_area(0.0).is_err());
    }

    #[test]
    fn lattice_sets() {
        let one = lattice_translate_set(1).unwrap();
        assert_eq!(one.translates(), &[Point2::ORIGIN]);
        assert_eq!(lattice_translate_set(5).unwrap().len(), 25);
        assert!(lattice_translate_set(0).is_err());

        let three = lattice_translate_set(3).unwrap();
        assert_eq!(three.len(), 9);
        // coset oracle: differences are multiples of the basis over 3, never in H
        let ts = three.translates();
        let mut min = f64::INFINITY;
        for a in 0..ts.len() {
            for b in 0..a {
                let d = dist_to_close_packing(ts[a] - ts[b]);
                assert!(d > 1e-9);
                min = min.min(d);
            }
        }
        assert!((min - 2.0 / 3.0).abs() < 1e-12);
        for (f, e) in three.translates().iter().zip(three.exact_translates()) {
            assert!(f.dist(e.to_point()) < 1e-12);
        }
    }

    #[test]
    fn translate_set_reduces_and_dedups() {
        let ts = TranslateSet::new(vec![
            Point2::new(0.1, 0.2),
            Point2::new(2.1, 0.2),
            Point2::new(1.1, 0.2 + SQRT_3),
        ]);
        assert_eq!(ts.len(), 1);
        let json = ts.to_json();
        let back: TranslateSet = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ts);
        let parsed: TranslateSet =
            serde_json::from_str(r#"{"translates":[[2.0,0.0],[0.0,0.0]]}"#).unwrap();
        assert_eq!(parsed.len(), 1);
    }
}
