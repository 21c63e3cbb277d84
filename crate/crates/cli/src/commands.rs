use anyhow::{bail, Context, Result};
use pc2_core::config::{
    critical_min_dist, footnote_check, generate_configuration, optimize_pose_with,
    verify_compressibility, FootnoteCheck, PointSetFile, PoseGrid, PoseSearch,
};
use pc2_core::cover::{removability_probe_points, solve_cover_with, Budget, SolveOptions};
use pc2_core::interstitium::{
    certify_translate_cover, certify_triangle_tiling_detailed, compute_lower_bound,
    handicap_oracle, lattice_translate_set, search_translate_cover_with, CoverCertificate,
    HandicapOutcome, SearchParams, TilingVerdict,
};
use pc2_core::lemmas::{
    build_fig3_frame, excluded_halfangle, verify_lemma1, verify_lemma2, verify_lemma3, LemmaReport,
};
use pc2_core::render::{
    render_configuration, render_cover, render_fig3, render_handicap, render_translates,
};
use pc2_core::Point2;
use pc2_service::ServiceConfig;
use serde::Serialize;

use crate::io::{emit, load_points, preset, read_points, read_translates, write_text};
use crate::{
    BudgetArgs, Command, ConfigCommand, CoverCommand, CoverExpect, HandicapCommand, HandicapExpect,
    LemmaCommand, Scene, TranslatesCommand, Verdict,
};

/// Points of a regenerated configuration may differ from the file by this much.
const POINT_TOL: f64 = 1e-9;

pub fn run(command: Command, threads: Option<usize>) -> Result<Verdict> {
    match command {
        Command::Bound { output } => {
            let b = compute_lower_bound();
            eprintln!("ratio {:.10}, bound {}", b.ratio, b.bound);
            emit(&output, &b, None)?;
            Ok(Verdict::Ok)
        }
        Command::Config(c) => config(c),
        Command::Lemma(c) => lemma(c),
        Command::Handicap(c) => handicap(c),
        Command::Cover(c) => cover(c),
        Command::Translates(c) => translates(c),
        Command::Render {
            scene,
            input,
            preset: name,
            lattice,
            t,
            seed,
            out,
        } => {
            let svg = render(scene, input.as_deref(), name.as_deref(), lattice, t, seed)?;
            write_text(out.as_deref(), &svg)?;
            Ok(Verdict::Ok)
        }
        Command::Serve {
            addr,
            workers,
            queue,
        } => {
            let mut config = ServiceConfig::default();
            if let Some(w) = workers.or(threads) {
                config.workers = w.max(1);
            }
            if let Some(q) = queue {
                config.queue_capacity = q;
            }
            let rt = tokio::runtime::Runtime::new()?;
            eprintln!("listening on http://{addr}");
            rt.block_on(pc2_service::serve(addr, config))?;
            Ok(Verdict::Ok)
        }
    }
}

fn budget(args: &BudgetArgs) -> Budget {
    Budget {
        partitions: args.partitions,
        restarts: args.restarts,
        iterations: args.iterations,
    }
    .scaled(args.budget_scale)
}

#[derive(Serialize)]
struct GenerateReport {
    #[serde(flatten)]
    file: PointSetFile,
    count: usize,
    boundary_clearance: f64,
    search: PoseSearch,
    footnote: Option<FootnoteCheck>,
}

#[derive(Serialize)]
struct VerifyReport {
    count: usize,
    regenerated: usize,
    points_match: bool,
    boundary_clearance: f64,
    compressible: bool,
    footnote: Option<FootnoteCheck>,
    passed: bool,
}

fn config(command: ConfigCommand) -> Result<Verdict> {
    match command {
        ConfigCommand::Generate {
            d_frac,
            angles,
            shifts,
            no_refine,
            svg,
            output,
        } => {
            let d = d_frac * critical_min_dist();
            let grid = PoseGrid {
                angles,
                shifts,
                refine: !no_refine,
            };
            let search = optimize_pose_with(d, grid)?;
            let cfg = generate_configuration(d, search.pose)?;
            eprintln!(
                "{} points, boundary clearance {:.3e}",
                cfg.len(),
                cfg.boundary_clearance
            );
            if let Some(path) = &svg {
                write_text(Some(path), &render_configuration(&cfg))?;
            }
            let report = GenerateReport {
                file: cfg.to_file(),
                count: cfg.len(),
                boundary_clearance: cfg.boundary_clearance,
                search,
                footnote: footnote_check(&cfg),
            };
            emit(&output, &report, Some(&|| render_configuration(&cfg)))?;
            Ok(Verdict::Ok)
        }
        ConfigCommand::Verify { input, output } => {
            let text = std::fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let file: PointSetFile = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", input.display()))?;
            let cfg = generate_configuration(file.d, file.pose)?;
            let mut given = file.points.clone();
            let mut fresh = cfg.points.clone();
            given.sort_by(Point2::lex_cmp);
            fresh.sort_by(Point2::lex_cmp);
            let points_match = given.len() == fresh.len()
                && given
                    .iter()
                    .zip(&fresh)
                    .all(|(a, b)| a.dist(*b) <= POINT_TOL);
            let compressible = verify_compressibility(&cfg);
            let passed = points_match && compressible && cfg.boundary_clearance > 0.0;
            let report = VerifyReport {
                count: given.len(),
                regenerated: fresh.len(),
                points_match,
                boundary_clearance: cfg.boundary_clearance,
                compressible,
                footnote: footnote_check(&cfg),
                passed,
            };
            eprintln!(
                "{}: {} points, {}",
                input.display(),
                report.count,
                if passed { "verified" } else { "FAILED" }
            );
            emit(&output, &report, Some(&|| render_configuration(&cfg)))?;
            Ok(if passed { Verdict::Ok } else { Verdict::Failed })
        }
    }
}

#[derive(Serialize)]
struct Lemma1Output {
    halfangle_at_contact: f64,
    #[serde(flatten)]
    report: LemmaReport,
}

fn lemma(command: LemmaCommand) -> Result<Verdict> {
    let LemmaCommand::Verify {
        lemma,
        trials,
        grid,
        d_frac,
        seed,
        output,
    } = command;
    let report = match lemma {
        1 => {
            let halfangle = excluded_halfangle(2.0)?;
            let mut report = verify_lemma1(trials.unwrap_or(10_000), seed);
            if (halfangle - std::f64::consts::FRAC_PI_6).abs() > 1e-12 {
                report.failures.push(pc2_core::lemmas::Failure {
                    trial: None,
                    check: "halfangle".into(),
                    detail: format!("half-angle at contact is {halfangle}"),
                    packing: None,
                });
            }
            let passed = report.passed();
            summarize(&report);
            emit(
                &output,
                &Lemma1Output {
                    halfangle_at_contact: halfangle,
                    report,
                },
                None,
            )?;
            return Ok(if passed { Verdict::Ok } else { Verdict::Failed });
        }
        2 => verify_lemma2(grid)?,
        _ => verify_lemma3(
            trials.unwrap_or(100_000),
            d_frac * critical_min_dist(),
            seed,
        )?,
    };
    summarize(&report);
    let frame = build_fig3_frame();
    let svg = || render_fig3(&frame, Some(&report));
    emit(
        &output,
        &report,
        (lemma == 2).then_some(&svg as &dyn Fn() -> String),
    )?;
    Ok(if report.passed() {
        Verdict::Ok
    } else {
        Verdict::Failed
    })
}

fn summarize(report: &LemmaReport) {
    let mut line = format!("lemma {}: {} trials", report.lemma, report.trials);
    if let Some(a) = report.min_arc {
        line += &format!(", min arc {a:.12}");
    }
    if let Some(h) = report.holes_without_point {
        line += &format!(", {h} holes without a point");
    }
    line += if report.passed() {
        ", passed"
    } else {
        ", FAILED"
    };
    eprintln!("{line}");
}

fn handicap(command: HandicapCommand) -> Result<Verdict> {
    let HandicapCommand::Check {
        source,
        depth,
        margin,
        expect,
        output,
    } = command;
    let points = load_points(&source)?;
    let outcome = handicap_oracle(&points, depth, margin)?;
    let verdict = match &outcome {
        HandicapOutcome::Coverable { t } => format!("coverable by translate {t}"),
        HandicapOutcome::Certificate(c) if c.is_covered() => {
            "no translate covers the points".into()
        }
        HandicapOutcome::Certificate(_) => "undecided".into(),
    };
    eprintln!("{} points: {verdict}", points.len());
    let t = outcome.witness().unwrap_or(Point2::ORIGIN);
    emit(&output, &outcome, Some(&|| render_handicap(&points, t)))?;
    let matched = match expect {
        None => true,
        Some(HandicapExpect::Coverable) => outcome.witness().is_some(),
        Some(HandicapExpect::NotCoverable) => {
            matches!(&outcome, HandicapOutcome::Certificate(c) if c.is_covered())
        }
    };
    Ok(if matched {
        Verdict::Ok
    } else {
        Verdict::Failed
    })
}

fn cover(command: CoverCommand) -> Result<Verdict> {
    match command {
        CoverCommand::Solve {
            source,
            budget: args,
            no_lattice,
            expect,
            output,
        } => {
            let points = load_points(&source)?;
            let mut opts = SolveOptions::new(budget(&args), args.seed);
            opts.lattice_phase = !no_lattice;
            let solution = solve_cover_with(&points, &opts, None)?;
            eprintln!(
                "{} points: {} after {} partitions",
                points.len(),
                if solution.is_covered() {
                    format!("covered by {} disks", solution.centers.len())
                } else {
                    "no cover found".to_string()
                },
                solution.partitions_tried
            );
            emit(
                &output,
                &solution,
                Some(&|| render_cover(&points, &solution)),
            )?;
            let matched = match expect {
                None => true,
                Some(CoverExpect::Covered) => solution.is_covered(),
                Some(CoverExpect::Unknown) => !solution.is_covered(),
            };
            Ok(if matched {
                Verdict::Ok
            } else {
                Verdict::Failed
            })
        }
        CoverCommand::Removability {
            source,
            budget: args,
            output,
        } => {
            let points = load_points(&source)?;
            let outcomes = removability_probe_points(&points, budget(&args), args.seed)?;
            let covered = outcomes
                .iter()
                .filter(|o| matches!(o.status, pc2_core::cover::SolveStatus::Covered))
                .count();
            eprintln!("{covered} of {} removals lead to a cover", outcomes.len());
            emit(&output, &outcomes, None)?;
            Ok(Verdict::Ok)
        }
    }
}

#[derive(Serialize)]
struct CertifyOutput {
    translates: usize,
    certificate: CoverCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    tiling: Option<TilingVerdict>,
    covered: bool,
}

fn translates(command: TranslatesCommand) -> Result<Verdict> {
    match command {
        TranslatesCommand::Lattice { n, output } => {
            let ts = lattice_translate_set(n)?;
            eprintln!("{} translates", ts.len());
            emit(&output, &ts, Some(&|| render_translates(&ts)))?;
            Ok(Verdict::Ok)
        }
        TranslatesCommand::Certify {
            input,
            margin,
            depth,
            exact,
            output,
        } => {
            let ts = read_translates(&input)?;
            let certificate = certify_translate_cover(&ts, margin, depth)?;
            let tiling = if exact {
                let exact_ts = recover_lattice_set(&ts)
                    .context("--exact needs a set equal to a lattice translate set")?;
                Some(certify_triangle_tiling_detailed(&exact_ts))
            } else {
                None
            };
            let covered = certificate.is_covered() || tiling.as_ref().is_some_and(|v| v.covered);
            eprintln!(
                "{} translates: {}",
                ts.len(),
                if covered {
                    "cover certified"
                } else {
                    "not certified"
                }
            );
            let out = CertifyOutput {
                translates: ts.len(),
                certificate,
                tiling,
                covered,
            };
            emit(&output, &out, Some(&|| render_translates(&ts)))?;
            Ok(if covered {
                Verdict::Ok
            } else {
                Verdict::Failed
            })
        }
        TranslatesCommand::Search {
            k,
            moves,
            restarts,
            seed,
            initial,
            output,
        } => {
            let mut params = SearchParams::new(k, moves, seed);
            params.restarts = restarts;
            if let Some(path) = &initial {
                let ts = read_translates(path)?;
                params.initial = Some(recover_lattice_set(&ts).unwrap_or(ts));
            }
            let result = search_translate_cover_with(&params, None)?;
            eprintln!(
                "k = {k}: uncovered fraction {:.3e} ± {:.1e}, {}",
                result.uncovered_estimate,
                result.std_error,
                if result.certified() {
                    "certified"
                } else {
                    "not certified"
                }
            );
            emit(
                &output,
                &result,
                Some(&|| render_translates(&result.translates)),
            )?;
            Ok(Verdict::Ok)
        }
    }
}

/// Exact coordinates are not serialized; a file matching a lattice set gets them back.
fn recover_lattice_set(
    ts: &pc2_core::interstitium::TranslateSet,
) -> Option<pc2_core::interstitium::TranslateSet> {
    let n = (ts.len() as f64).sqrt().round() as u32;
    if n == 0 || (n * n) as usize != ts.len() {
        return None;
    }
    let lattice = lattice_translate_set(n).ok()?;
    let mut a = lattice.translates().to_vec();
    let mut b = ts.translates().to_vec();
    a.sort_by(Point2::lex_cmp);
    b.sort_by(Point2::lex_cmp);
    a.iter()
        .zip(&b)
        .all(|(p, q)| p.dist(*q) <= 1e-9)
        .then_some(lattice)
}

fn render(
    scene: Scene,
    input: Option<&std::path::Path>,
    name: Option<&str>,
    lattice: Option<u32>,
    t: Option<Point2>,
    seed: u64,
) -> Result<String> {
    let points = || -> Result<Vec<Point2>> {
        match (input, name) {
            (Some(path), _) => read_points(path),
            (None, Some(name)) => preset(name),
            (None, None) => preset("fig1-55"),
        }
    };
    Ok(match scene {
        Scene::Config => match input {
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let file: PointSetFile = serde_json::from_str(&text)?;
                render_configuration(&generate_configuration(file.d, file.pose)?)
            }
            None => render_configuration(&pc2_core::config::reference_configuration()),
        },
        Scene::Cover => {
            let pts = points()?;
            let solution =
                solve_cover_with(&pts, &SolveOptions::new(Budget::default(), seed), None)?;
            render_cover(&pts, &solution)
        }
        Scene::Handicap => {
            let pts = points()?;
            render_handicap(&pts, t.unwrap_or(Point2::ORIGIN))
        }
        Scene::Translates => match (input, lattice) {
            (Some(path), _) => render_translates(&read_translates(path)?),
            (None, Some(n)) => render_translates(&lattice_translate_set(n)?),
            (None, None) => bail!("the translates scene needs a file or --lattice"),
        },
        Scene::Fig3 => render_fig3(&build_fig3_frame(), None),
    })
}
