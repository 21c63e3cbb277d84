use pc2_core::config::reference_configuration;
use pc2_core::geometry::{dist_to_close_packing, HexLattice, Point2, SQRT_3};
use pc2_core::interstitium::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_cell_point(rng: &mut ChaCha8Rng) -> Point2 {
    let (u, v) = (rng.random::<f64>(), rng.random::<f64>());
    Point2::new(2.0 * u + v, SQRT_3 * v)
}

fn in_some_interstitium(x: Point2, ts: &[Point2]) -> bool {
    ts.iter().any(|&a| dist_to_close_packing(x - a) > 1.0)
}

fn in_some_triangle(x: Point2, ts: &[Point2]) -> bool {
    let h = HexLattice::close_packing();
    ts.iter().any(|&a| {
        inscribed_triangles(a).iter().any(|tri| {
            // compare against the copy of the triangle nearest to x
            let shift = h.reduce(x - tri.centroid) - (x - tri.centroid);
            tri.contains(x + shift)
        })
    })
}

#[test]
fn four_by_four_lattice_tiling_matches_sampling() {
    let ts = lattice_translate_set(4).unwrap();
    let verdict = certify_triangle_tiling_detailed(&ts);
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    let misses = (0..1_000_000)
        .filter(|_| !in_some_triangle(random_cell_point(&mut rng), ts.translates()))
        .count();
    if verdict.covered {
        assert_eq!(misses, 0);
    } else {
        let w = verdict.witness.expect("failing verdict carries a witness");
        assert!(!in_some_triangle(w, ts.translates()));
        assert!(
            misses > 0,
            "sampling should see the gap the certifier found"
        );
    }
}

#[test]
fn five_by_five_lattice_tiles_and_origin_does_not() {
    assert!(certify_triangle_tiling(&lattice_translate_set(5).unwrap()));
    assert!(!certify_triangle_tiling(&lattice_translate_set(1).unwrap()));
}

#[test]
fn lattice_cover_certificate() {
    let ts = lattice_translate_set(5).unwrap();
    let cert = certify_translate_cover(&ts, 1e-4, DEFAULT_DEPTH).unwrap();
    assert!(
        matches!(
            cert.status,
            CoverStatus::Covered | CoverStatus::Undecided { .. }
        ),
        "{:?}",
        cert.status
    );
}

#[test]
fn removed_neighbourhood_is_reported_with_a_real_gap() {
    let full = lattice_translate_set(5).unwrap();
    // drop every translate near one point so its neighbourhood is exposed
    let target = Point2::new(0.3, 0.2);
    let kept: Vec<Point2> = full
        .translates()
        .iter()
        .copied()
        .filter(|&a| dist_to_close_packing(target - a) <= 1.0)
        .collect();
    assert!(kept.len() < full.len());
    let ts = TranslateSet::new(kept);
    let cert = certify_translate_cover(&ts, 1e-6, 20).unwrap();
    let CoverStatus::NotCovered { witness } = cert.status else {
        panic!("expected a gap, got {:?}", cert.status);
    };
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let (a, b) = (rng.random::<f64>(), rng.random::<f64>());
        let x = Point2::new(
            2.0 * (witness.u + a * witness.size) + (witness.v + b * witness.size),
            SQRT_3 * (witness.v + b * witness.size),
        );
        assert!(!in_some_interstitium(x, ts.translates()));
    }
    assert!(!in_some_interstitium(target, ts.translates()));
}

#[test]
fn jittered_lattice_set_is_certified_and_sampling_agrees() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let jittered: Vec<Point2> = lattice_translate_set(5)
        .unwrap()
        .translates()
        .iter()
        .map(|&a| a + Point2::polar(1e-3, rng.random::<f64>() * std::f64::consts::TAU))
        .collect();
    let ts = TranslateSet::new(jittered);
    let cert = certify_translate_cover(&ts, 1e-4, DEFAULT_DEPTH).unwrap();
    assert!(cert.is_covered(), "{:?}", cert.status);
    for _ in 0..1_000_000 {
        assert!(in_some_interstitium(
            random_cell_point(&mut rng),
            ts.translates()
        ));
    }
}

#[test]
fn handicap_trivial_cases() {
    let p = Point2::new(-7.25, 3.5);
    let t = handicap_oracle(&[p], DEFAULT_DEPTH, DEFAULT_MARGIN)
        .unwrap()
        .witness()
        .unwrap();
    assert!(dist_to_close_packing(p - t) <= 1.0);
    let twice = handicap_oracle(&[p, p], DEFAULT_DEPTH, DEFAULT_MARGIN).unwrap();
    assert!(twice.witness().is_some());
}

#[test]
fn handicap_witnesses_verify_and_oracle_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut certified = 0;
    for round in 0..40 {
        let pts: Vec<Point2> = match round % 3 {
            // a grid finer than the inradius of an interstitium meets every translate
            0 => {
                let step = rng.random_range(0.15..0.25);
                let n = (2.6 / step) as usize;
                (0..n * n)
                    .map(|k| {
                        let jitter = Point2::new(rng.random::<f64>(), rng.random::<f64>()) * 0.01;
                        Point2::new((k % n) as f64 * step, (k / n) as f64 * step) + jitter
                    })
                    .collect()
            }
            1 => reference_configuration().points,
            _ => {
                let n = rng.random_range(1..40);
                (0..n)
                    .map(|_| Point2::new(rng.random::<f64>() * 3.0, rng.random::<f64>() * 3.0))
                    .collect()
            }
        };
        match handicap_oracle(&pts, 18, DEFAULT_MARGIN).unwrap() {
            HandicapOutcome::Coverable { t } => {
                assert!(pts.iter().all(|&p| dist_to_close_packing(p - t) <= 1.0));
            }
            HandicapOutcome::Certificate(c) if c.is_covered() => {
                certified += 1;
                let mut sup = pts.clone();
                for _ in 0..5 {
                    sup.push(Point2::new(
                        rng.random::<f64>() * 8.0,
                        rng.random::<f64>() * 8.0,
                    ));
                    let out = handicap_oracle(&sup, 18, DEFAULT_MARGIN).unwrap();
                    assert!(matches!(out, HandicapOutcome::Certificate(ref c) if c.is_covered()));
                }
            }
            HandicapOutcome::Certificate(_) => {}
        }
    }
    assert!(certified >= 20);
}

#[test]
fn reference_configuration_beats_every_translate_on_a_grid() {
    let cfg = reference_configuration();
    let out = handicap_oracle(&cfg.points, DEFAULT_DEPTH, DEFAULT_MARGIN).unwrap();
    assert!(matches!(out, HandicapOutcome::Certificate(ref c) if c.is_covered()));
    let n = 1000;
    let mut last = 0;
    for i in 0..n {
        for j in 0..n {
            let t = Point2::new(
                2.0 * (i as f64 + 0.5) / n as f64 + (j as f64 + 0.5) / n as f64,
                SQRT_3 * (j as f64 + 0.5) / n as f64,
            );
            let excluded = |k: usize| dist_to_close_packing(cfg.points[k] - t) > 1.0;
            if excluded(last) {
                continue;
            }
            last = (0..cfg.points.len())
                .find(|&k| excluded(k))
                .expect("some point is uncovered");
        }
    }
}

#[test]
fn search_from_lattice_set_is_certified() {
    let mut params = SearchParams::new(25, 200, 5);
    params.initial = Some(lattice_translate_set(5).unwrap());
    let res = search_translate_cover_with(&params, None).unwrap();
    assert_eq!(res.uncovered_estimate, 0.0);
    assert!(res.certified());
}

#[test]
fn ten_translates_never_cover() {
    let res = search_translate_cover(10, 2_000, 3).unwrap();
    assert!(res.uncovered_estimate > 0.0);
    assert!(res.certificate.is_none());
}

#[test]
fn certified_search_results_agree_with_sampling() {
    let res = search_translate_cover(28, 3_000, 8).unwrap();
    if res.certified() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..200_000 {
            assert!(in_some_interstitium(
                random_cell_point(&mut rng),
                res.translates.translates()
            ));
        }
    }
}
