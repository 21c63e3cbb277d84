//! Simulated annealing over translate positions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::subdivision::{
    certify_translate_cover_with, CoverCertificate, CoverStatus, SubdivisionLimits,
};
use super::triangles::certify_triangle_tiling;
use super::{TranslateSet, DEFAULT_MARGIN};
use crate::control::{derive_seed, CancelToken};
use crate::error::{Error, Result};
use crate::geometry::{deep_holes, dist_to_close_packing, Point2, SQRT_3};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncoveredEstimate {
    /// Fraction of the cell outside every interstitium.
    pub fraction: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// One uniform sample per cell of a `grid × grid` partition of the parameter square.
fn stratified_samples(grid: usize, seed: u64) -> Vec<Point2> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = grid as f64;
    let mut out = Vec::with_capacity(grid * grid);
    for j in 0..grid {
        for i in 0..grid {
            let u = (i as f64 + rng.random::<f64>()) / g;
            let v = (j as f64 + rng.random::<f64>()) / g;
            out.push(Point2::new(2.0 * u + v, SQRT_3 * v));
        }
    }
    out
}

#[inline]
fn in_interstitium(s: Point2, a: Point2) -> bool {
    dist_to_close_packing(s - a) > 1.0
}

/// Stratified Monte Carlo estimate of the part of the cell no interstitium reaches.
pub fn estimate_uncovered(translates: &[Point2], grid: usize, seed: u64) -> UncoveredEstimate {
    let samples = stratified_samples(grid.max(1), seed);
    let n = samples.len() as f64;
    let miss = samples
        .par_iter()
        .filter(|&&s| !translates.iter().any(|&a| in_interstitium(s, a)))
        .count() as f64;
    let p = miss / n;
    UncoveredEstimate {
        fraction: p,
        // the binomial error bounds the stratified one from above
        std_error: (p * (1.0 - p) / n).sqrt(),
        samples: n as u64,
    }
}

#[derive(Debug, Clone)]
pub struct SearchParams {
    pub k: usize,
    /// Proposed moves per restart.
    pub moves: u64,
    pub restarts: usize,
    pub seed: u64,
    /// Working sample grid, doubled up to `final_grid` whenever every sample is covered.
    pub work_grid: usize,
    pub final_grid: usize,
    pub initial: Option<TranslateSet>,
    pub sigma_start: f64,
    pub sigma_end: f64,
    pub temp_start: f64,
    pub temp_end: f64,
    pub teleport_prob: f64,
    pub certify: bool,
    pub margin: f64,
    pub depth: u32,
}

impl SearchParams {
    pub fn new(k: usize, moves: u64, seed: u64) -> Self {
        Self {
            k,
            moves,
            restarts: 4,
            seed,
            work_grid: 128,
            final_grid: 512,
            initial: None,
            sigma_start: 0.2,
            sigma_end: 0.001,
            temp_start: 2e-3,
            temp_end: 1e-5,
            teleport_prob: 0.05,
            certify: true,
            margin: DEFAULT_MARGIN,
            depth: 20,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SearchResult {
    pub translates: TranslateSet,
    pub uncovered_estimate: f64,
    pub std_error: f64,
    pub samples: u64,
    /// Subdivision certificate, computed when the estimate is zero.
    pub certificate: Option<CoverCertificate>,
    /// Exact triangle check, run when subdivision does not settle an exact set.
    pub tiling_certified: Option<bool>,
    pub restarts: usize,
    pub moves: u64,
}

impl SearchResult {
    /// True when the translates provably cover the cell.
    pub fn certified(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.is_covered())
            || self.tiling_certified == Some(true)
    }
}

struct Anneal {
    grid: usize,
    /// Samples past the first `grid²` are gap witnesses added by the certifier.
    samples: Vec<Point2>,
    counts: Vec<u16>,
    /// Stratum offsets, relative to the stratum of a translate, that can meet its interstitium.
    reach: Vec<(usize, usize)>,
    /// Indices of the samples inside each translate's interstitium.
    hits: Vec<Vec<u32>>,
    /// `stamp[s] == epoch` marks the samples of the row being proposed.
    stamp: Vec<u32>,
    epoch: u32,
    positions: Vec<Point2>,
    uncovered: usize,
}

/// Parameter coordinates `(u, v)` with `p = u (2, 0) + v (1, √3)`.
fn cell_coords(p: Point2) -> (f64, f64) {
    let v = p.y / SQRT_3;
    (0.5 * (p.x - v), v)
}

impl Anneal {
    fn new(grid: usize, samples: Vec<Point2>, positions: Vec<Point2>) -> Self {
        // a sample and a translate in strata `(di, dj)` apart differ by less than one
        // stratum in each parameter, so by the 1-Lipschitz distance this test never drops a hit
        let g = grid as f64;
        let slack = 2.0 * SQRT_3 / g;
        let mut reach = Vec::new();
        for dj in 0..grid {
            for di in 0..grid {
                let (u, v) = (di as f64 / g, dj as f64 / g);
                if dist_to_close_packing(Point2::new(2.0 * u + v, SQRT_3 * v)) + slack > 1.0 {
                    reach.push((di, dj));
                }
            }
        }
        let mut state = Self {
            grid,
            counts: vec![0u16; samples.len()],
            stamp: vec![0; samples.len()],
            epoch: 0,
            samples,
            reach,
            hits: Vec::with_capacity(positions.len()),
            positions: Vec::new(),
            uncovered: 0,
        };
        for &a in &positions {
            let row = state.hit_row(a);
            for &s in &row {
                state.counts[s as usize] += 1;
            }
            state.hits.push(row);
        }
        state.positions = positions;
        state.uncovered = state.counts.iter().filter(|&&c| c == 0).count();
        state
    }

    /// Samples in the interstitium of `H + a`.
    fn hit_row(&self, a: Point2) -> Vec<u32> {
        let g = self.grid;
        let extra = (g * g..self.samples.len()).filter(|&s| in_interstitium(self.samples[s], a));
        let (ua, va) = cell_coords(a);
        let ai = ((ua * g as f64).floor() as i64).rem_euclid(g as i64) as usize;
        let aj = ((va * g as f64).floor() as i64).rem_euclid(g as i64) as usize;
        self.reach
            .iter()
            .map(|&(di, dj)| {
                let (i, j) = (ai + di, aj + dj);
                let i = if i >= g { i - g } else { i };
                let j = if j >= g { j - g } else { j };
                (j * g + i) as u32
            })
            .filter(|&idx| in_interstitium(self.samples[idx as usize], a))
            .chain(extra.map(|s| s as u32))
            .collect()
    }

    fn add_sample(&mut self, p: Point2) {
        let idx = self.samples.len();
        self.samples.push(p);
        self.stamp.push(0);
        let mut count = 0;
        for (row, &a) in self.hits.iter_mut().zip(&self.positions) {
            if in_interstitium(p, a) {
                row.push(idx as u32);
                count += 1;
            }
        }
        self.counts.push(count);
        self.uncovered += (count == 0) as usize;
    }

    /// Change in uncovered samples if translate `i` moves to `a`, with the new hit row.
    fn propose(&mut self, i: usize, a: Point2) -> (i64, Vec<u32>) {
        let row = self.hit_row(a);
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        let mut delta = 0i64;
        // a sample with count 0 is in no current row, in particular not in the old one
        for &s in &row {
            self.stamp[s as usize] = self.epoch;
            delta -= (self.counts[s as usize] == 0) as i64;
        }
        for &s in &self.hits[i] {
            delta += (self.counts[s as usize] == 1 && self.stamp[s as usize] != self.epoch) as i64;
        }
        (delta, row)
    }

    fn accept(&mut self, i: usize, a: Point2, row: Vec<u32>, delta: i64) {
        for &s in &self.hits[i] {
            self.counts[s as usize] -= 1;
        }
        for &s in &row {
            self.counts[s as usize] += 1;
        }
        self.hits[i] = row;
        self.positions[i] = a;
        self.uncovered = (self.uncovered as i64 + delta) as usize;
    }
}

struct RunOutcome {
    best: Vec<Point2>,
    /// Refinement level of the best state; finer levels rank first.
    level: u32,
    best_uncovered: usize,
    improved: bool,
}

fn anneal_run(params: &SearchParams, index: usize, cancel: Option<&CancelToken>) -> RunOutcome {
    let seed = derive_seed(params.seed, index as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = params.work_grid;
    let mut level = 0u32;
    let samples = stratified_samples(grid, derive_seed(seed, 1));
    let start: Vec<Point2> = match &params.initial {
        Some(ts) => ts.translates().to_vec(),
        None => (0..params.k)
            .map(|_| {
                let (u, v) = (rng.random::<f64>(), rng.random::<f64>());
                Point2::new(2.0 * u + v, SQRT_3 * v)
            })
            .collect(),
    };
    let mut state = Anneal::new(grid, samples, start);
    let mut best = state.positions.clone();
    let mut best_level = 0;
    let mut best_uncovered = state.uncovered;
    let mut improved = false;
    let k = state.positions.len();
    if k == 0 || params.moves == 0 {
        return RunOutcome {
            best,
            level: best_level,
            best_uncovered,
            improved,
        };
    }
    let unit = Normal::new(0.0, 1.0).expect("valid normal");
    for step in 0..params.moves {
        if state.uncovered == 0 {
            if grid * 2 <= params.final_grid {
                // the working samples are all covered: continue on a finer grid
                grid *= 2;
                let samples = stratified_samples(grid, derive_seed(seed, 1 + level as u64));
                state = Anneal::new(grid, samples, state.positions.clone());
            } else {
                // then ask the certifier for a point no interstitium reaches
                if !params.certify {
                    break;
                }
                let limits = SubdivisionLimits::new(params.depth, params.margin);
                match certify_translate_cover_with(&state.positions, &limits, cancel)
                    .map(|c| c.status)
                {
                    Ok(CoverStatus::NotCovered { witness }) => state.add_sample(witness.center()),
                    _ => break,
                }
            }
            level += 1;
            best = state.positions.clone();
            best_level = level;
            best_uncovered = state.uncovered;
            if state.uncovered == 0 {
                continue;
            }
        }
        if step % 256 == 0 && cancel.is_some_and(|c| c.is_cancelled()) {
            break;
        }
        let n = state.samples.len() as f64;
        let frac = step as f64 / params.moves as f64;
        let sigma = params.sigma_start * (params.sigma_end / params.sigma_start).powf(frac);
        let temp = params.temp_start * (params.temp_end / params.temp_start).powf(frac);
        let i = rng.random_range(0..k);
        let proposal = if rng.random::<f64>() < params.teleport_prob {
            // put a deep hole of translate i on a random uncovered sample
            let holes: Vec<usize> = (0..state.samples.len())
                .filter(|&s| state.counts[s] == 0)
                .collect();
            let s = state.samples[holes[rng.random_range(0..holes.len())]];
            let h = deep_holes(Point2::ORIGIN)[rng.random_range(0..2)];
            s - h
        } else {
            state.positions[i] + Point2::new(unit.sample(&mut rng), unit.sample(&mut rng)) * sigma
        };
        let (delta, row) = state.propose(i, proposal);
        let accept = delta <= 0 || rng.random::<f64>() < (-(delta as f64) / n / temp).exp();
        if accept {
            state.accept(i, proposal, row, delta);
            if state.uncovered < best_uncovered {
                best_uncovered = state.uncovered;
                best = state.positions.clone();
                improved = true;
            }
        }
    }
    RunOutcome {
        best,
        level: best_level,
        best_uncovered,
        improved,
    }
}

/// Searches for `k` translates whose interstitia cover the cell, with default parameters.
pub fn search_translate_cover(k: usize, budget: u64, seed: u64) -> Result<SearchResult> {
    search_translate_cover_with(&SearchParams::new(k, budget, seed), None)
}

pub fn search_translate_cover_with(
    params: &SearchParams,
    cancel: Option<&CancelToken>,
) -> Result<SearchResult> {
    if params.k == 0 {
        return Err(Error::InvalidArgument("translate count must be ≥ 1".into()));
    }
    if let Some(init) = &params.initial {
        if init.len() != params.k {
            return Err(Error::InvalidArgument(format!(
                "initial set has {} distinct translates, expected {}",
                init.len(),
                params.k
            )));
        }
    }
    if params.work_grid == 0 || params.final_grid == 0 || params.restarts == 0 {
        return Err(Error::InvalidArgument(
            "grids and restarts must be positive".into(),
        ));
    }
    let runs: Vec<RunOutcome> = (0..params.restarts)
        .into_par_iter()
        .map(|r| anneal_run(params, r, cancel))
        .collect();
    let (idx, best) = runs
        .iter()
        .enumerate()
        .min_by_key(|(i, r)| (std::cmp::Reverse(r.level), r.best_uncovered, *i))
        .expect("at least one restart");
    let translates = match (&params.initial, best.improved) {
        (Some(init), false) => init.clone(),
        _ => TranslateSet::new(runs[idx].best.clone()),
    };
    let est = estimate_uncovered(
        translates.translates(),
        params.final_grid,
        derive_seed(params.seed, u64::MAX),
    );
    let mut certificate = None;
    let mut tiling_certified = None;
    if est.fraction == 0.0 && params.certify {
        let limits = SubdivisionLimits::new(params.depth, params.margin);
        let cert = certify_translate_cover_with(translates.translates(), &limits, cancel)?;
        if !cert.is_covered() && translates.has_exact_coordinates() {
            tiling_certified = Some(certify_triangle_tiling(&translates));
        }
        certificate = Some(cert);
    }
    Ok(SearchResult {
        translates,
        uncovered_estimate: est.fraction,
        std_error: est.std_error,
        samples: est.samples,
        certificate,
        tiling_certified,
        restarts: params.restarts,
        moves: params.moves,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{FUNDAMENTAL_AREA, INTERSTITIUM_AREA};
    use crate::interstitium::lattice_translate_set;

    #[test]
    fn single_translate_estimate_matches_area() {
        let est = estimate_uncovered(&[Point2::ORIGIN], 400, 3);
        let expected = 1.0 - INTERSTITIUM_AREA / FUNDAMENTAL_AREA;
        assert!((est.fraction - expected).abs() < 4.0 * est.std_error + 1e-3);
    }

    #[test]
    fn small_k_respects_area_obstruction() {
        for k in [1usize, 5, 10] {
            let res = search_translate_cover(k, 300, 7).unwrap();
            let bound = (FUNDAMENTAL_AREA - k as f64 * INTERSTITIUM_AREA) / FUNDAMENTAL_AREA;
            assert!(
                res.uncovered_estimate >= bound - 3.0 * res.std_error,
                "k={k}"
            );
            assert!(res.uncovered_estimate > 0.0);
            assert!(!res.certified());
        }
    }

    #[test]
    fn sparse_rows_match_full_scan() {
        let grid = 64;
        let samples = stratified_samples(grid, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let positions: Vec<Point2> = (0..6)
            .map(|_| Point2::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0)))
            .collect();
        let mut state = Anneal::new(grid, samples.clone(), positions);
        for _ in 0..200 {
            let a = Point2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            let full: Vec<u32> = (0..samples.len() as u32)
                .filter(|&s| in_interstitium(samples[s as usize], a))
                .collect();
            let i = rng.random_range(0..6);
            let (delta, row) = state.propose(i, a);
            let mut sorted = row.clone();
            sorted.sort_unstable();
            assert_eq!(sorted, full);
            let before = state.uncovered as i64;
            state.accept(i, a, row, delta);
            let recount = state.counts.iter().filter(|&&c| c == 0).count() as i64;
            assert_eq!(recount, before + delta);
            assert_eq!(recount, state.uncovered as i64);
        }
    }

    #[test]
    fn search_is_deterministic() {
        let a = search_translate_cover(12, 200, 11).unwrap();
        let b = search_translate_cover(12, 200, 11).unwrap();
        assert_eq!(a.translates, b.translates);
        assert_eq!(a.uncovered_estimate, b.uncovered_estimate);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(search_translate_cover(0, 10, 1).is_err());
        let mut p = SearchParams::new(24, 10, 1);
        p.initial = Some(lattice_translate_set(5).unwrap());
        assert!(search_translate_cover_with(&p, None).is_err());
    }
}
