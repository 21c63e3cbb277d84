use pc2_core::config::reference_configuration;
use pc2_core::cover::*;
use pc2_core::geometry::Point2;
use pc2_core::interstitium::{handicap_oracle, HandicapOutcome, DEFAULT_DEPTH, DEFAULT_MARGIN};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_points(rng: &mut ChaCha8Rng, n: usize, side: f64) -> Vec<Point2> {
    (0..n)
        .map(|_| Point2::new(rng.random::<f64>() * side, rng.random::<f64>() * side))
        .collect()
}

#[test]
fn ten_random_points_are_usually_covered() {
    let mut covered = 0;
    for seed in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts = random_points(&mut rng, 10, 6.0);
        let sol = solve_cover(&pts, Budget::default(), seed).unwrap();
        if sol.is_covered() {
            assert!(verify_cover(&pts, &sol.centers));
            covered += 1;
        }
    }
    assert!(covered >= 95, "covered {covered}/100");
}

#[test]
fn covered_answers_always_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let budget = Budget {
        partitions: 50,
        restarts: 8,
        iterations: 200,
    };
    for seed in 0..1500 {
        let n = rng.random_range(1..16);
        let side = rng.random_range(0.5..8.0);
        let pts = random_points(&mut rng, n, side);
        let mut opts = SolveOptions::new(budget, seed);
        // half the instances exercise the partition search alone
        opts.lattice_phase = seed % 2 == 0;
        let sol = solve_cover_with(&pts, &opts, None).unwrap();
        // the reported centers always form a packing
        assert!(verify_cover(&[], &sol.centers));
        if sol.is_covered() {
            assert!(verify_cover(&pts, &sol.centers));
            assert!(sol.assignment.iter().all(Option::is_some));
        } else {
            let SolveStatus::Unknown { best_uncovered } = sol.status else {
                unreachable!()
            };
            assert_eq!(
                best_uncovered,
                sol.assignment.iter().filter(|a| a.is_none()).count()
            );
        }
    }
}

#[test]
fn handicap_witness_seeds_a_cover() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for seed in 0..30 {
        let pts = random_points(&mut rng, 20, 4.0);
        if let HandicapOutcome::Coverable { t } =
            handicap_oracle(&pts, DEFAULT_DEPTH, DEFAULT_MARGIN).unwrap()
        {
            let sol = solve_cover_with_translate(
                &pts,
                t,
                Budget {
                    partitions: 0,
                    ..Budget::default()
                },
                seed,
            )
            .unwrap();
            assert!(sol.is_covered());
        }
    }
}

#[test]
fn reference_configuration_is_never_covered() {
    let cfg = reference_configuration();
    let sol = solve_cover(
        &cfg.points,
        Budget {
            partitions: 100,
            ..Budget::default()
        },
        0,
    )
    .unwrap();
    assert!(!sol.is_covered());
    assert!(verify_cover(&[], &sol.centers));
}

#[test]
fn removability_on_tiny_sets() {
    let pts = [Point2::ORIGIN, Point2::new(0.5, 0.0)];
    let report = removability_probe_points(&pts, Budget::default(), 0).unwrap();
    assert_eq!(report.len(), 2);
    assert!(report.iter().all(|r| r.status == SolveStatus::Covered));
}

#[test]
fn too_many_points_rejected() {
    let pts = vec![Point2::ORIGIN; 65];
    assert!(solve_cover(&pts, Budget::default(), 0).is_err());
    assert!(solve_cover(&[Point2::new(f64::NAN, 0.0)], Budget::default(), 0).is_err());
}

#[test]
fn solution_json_round_trip() {
    let pts = [Point2::ORIGIN, Point2::new(1.5, 0.2), Point2::new(4.0, 1.0)];
    let sol = solve_cover(&pts, Budget::default(), 3).unwrap();
    let json = serde_json::to_string(&sol).unwrap();
    let back: CoverSolution = serde_json::from_str(&json).unwrap();
    assert_eq!(back, sol);
}
