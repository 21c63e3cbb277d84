use pc2_core::cover::{solve_cover_with, Budget, CoverSolution, SolveOptions};
use pc2_core::geometry::{dist_to_close_packing, HexLattice, Point2, Pose};
use pc2_core::interstitium::{
    best_translate, handicap_oracle_with, HandicapOutcome, SubdivisionLimits, DEFAULT_BOX_BUDGET,
    DEFAULT_DEPTH, DEFAULT_MARGIN,
};
use pc2_core::CancelToken;
use serde::{Deserialize, Serialize};

/// Scan resolution for the best partial translate shown when no translate covers everything.
const TRANSLATE_SCAN: usize = 64;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    #[default]
    Free,
    Handicap,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveRequest {
    pub mode: Option<SolveMode>,
    pub budget: Option<Budget>,
    pub seed: Option<u64>,
    pub depth: Option<u32>,
    pub margin: Option<f64>,
}

impl SolveRequest {
    pub fn mode(&self) -> SolveMode {
        self.mode.unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobStatus {
    Queued,
    Running,
    Done,
    Cancelled,
    Failed,
}

impl JobStatus {
    pub fn is_terminal(self) -> bool {
        matches!(
            self,
            JobStatus::Done | JobStatus::Cancelled | JobStatus::Failed
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum JobResult {
    Free {
        solution: CoverSolution,
        covered: Vec<bool>,
    },
    Handicap {
        outcome: HandicapOutcome,
        /// The witness translate, or the one covering the most points.
        translate: Point2,
        disks: Vec<Point2>,
        covered: Vec<bool>,
    },
}

pub(crate) struct Job {
    pub session: u64,
    pub mode: SolveMode,
    pub status: JobStatus,
    pub result: Option<JobResult>,
    pub error: Option<String>,
    pub cancel: CancelToken,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobView {
    pub id: u64,
    pub session: u64,
    pub mode: SolveMode,
    pub status: JobStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<JobResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Job {
    pub fn view(&self, id: u64) -> JobView {
        JobView {
            id,
            session: self.session,
            mode: self.mode,
            status: self.status,
            result: self.result.clone(),
            error: self.error.clone(),
        }
    }
}

/// Runs a solve request synchronously; the same call the command line makes.
pub fn execute(
    points: &[Point2],
    req: &SolveRequest,
    cancel: Option<&CancelToken>,
) -> pc2_core::Result<JobResult> {
    match req.mode() {
        SolveMode::Free => {
            let opts = SolveOptions::new(req.budget.unwrap_or_default(), req.seed.unwrap_or(0));
            let solution = solve_cover_with(points, &opts, cancel)?;
            Ok(JobResult::Free {
                covered: solution.covered_flags(),
                solution,
            })
        }
        SolveMode::Handicap => {
            let limits = SubdivisionLimits {
                depth: req.depth.unwrap_or(DEFAULT_DEPTH),
                margin: req.margin.unwrap_or(DEFAULT_MARGIN),
                box_budget: DEFAULT_BOX_BUDGET,
            };
            let outcome = handicap_oracle_with(points, &limits, cancel)?;
            let translate = outcome
                .witness()
                .unwrap_or_else(|| best_translate(points, TRANSLATE_SCAN).0);
            let lattice =
                HexLattice::new(2.0, Pose::new(0.0, translate)).expect("positive distance");
            let mut disks: Vec<Point2> = Vec::new();
            for &p in points {
                let (c, d) = lattice.nearest(p);
                if d <= 1.0 && !disks.iter().any(|&q| q.dist(c) < 1e-9) {
                    disks.push(c);
                }
            }
            let covered = points
                .iter()
                .map(|&p| dist_to_close_packing(p - translate) <= 1.0)
                .collect();
            Ok(JobResult::Handicap {
                outcome,
                translate,
                disks,
                covered,
            })
        }
    }
}
