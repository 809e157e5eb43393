//! Side-by-side comparison of `(X, 𝔽)` and `(X, f)`: hypothesis profile, bound
//! checks, every requested checker in both modes, and the consistency of the
//! verdict pairs with the transfer theorems.

mod catalog;
mod emit;
mod scenario;
mod theorems;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{collective_convergence_profile, BoundLedger, DeviationRecord, LEDGER_GRID};
use crate::checkers::region::{Region, RegionOrbit};
use crate::checkers::{run_property, CheckConfig, Mode, Outcome, Property, SystemView, Verdict};
use crate::error::Result;
use crate::family::{profile_hypotheses, HypothesisProfile, MapFamily};
use crate::space::{sample_grid, PhaseSpace};

pub use catalog::{catalog, golden, reproduce, scenario, CatalogEntry};
pub use emit::{emit, plot_files, to_csv, to_json, Format, CSV_HEADER};
pub use scenario::{OutputConfig, ScenarioSpec};
pub use theorems::{theorem_key, Applicability};

/// Longest orbit used for the deviation ledger and plot series.
const BOUND_HORIZON: usize = 200;
/// `n`-range and `k`-range of the collective-convergence summary.
const COLLECTIVE_N: usize = 50;
const COLLECTIVE_K: usize = 20;
/// Balls tracked in the diameter plot series.
const TRACKED_BALLS: usize = 2;

/// One property judged in both modes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub property: Property,
    /// Descriptive key of the transfer theorem the pair is judged against.
    pub theorem: String,
    #[serde(rename = "verdict_F")]
    pub verdict_family: Verdict,
    #[serde(rename = "verdict_f")]
    pub verdict_limit: Verdict,
    pub applicable: bool,
    pub consistent: bool,
    pub note: String,
}

/// Orbit-deviation bound over the grid, `k ≤ k_max`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub k_max: usize,
    pub points: usize,
    pub checked: usize,
    pub violations: usize,
    /// The bound is a theorem only when the steps commute with the limit.
    pub bound_applies: bool,
    pub approximate_bound: bool,
    pub first_violation: Option<DeviationRecord>,
    /// `T(n)` for `n ≤ 50`, `k ≤ 20`.
    pub tail_sup: Vec<f64>,
    pub collective_likely: bool,
}

/// A two-column series for plotting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    pub name: String,
    pub columns: [String; 2],
    pub points: Vec<[f64; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub label: String,
    pub space: PhaseSpace,
    pub check: CheckConfig,
    pub notes: Vec<String>,
    pub profile: HypothesisProfile,
    pub rows: Vec<ComparisonRow>,
    pub bounds: BoundSummary,
    pub plots: Vec<PlotSeries>,
    pub provenance: Provenance,
}

impl ComparisonReport {
    pub fn row(&self, p: Property) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.property == p)
    }

    /// Whether any row contradicts its theorem.
    pub fn inconsistent(&self) -> bool {
        self.rows.iter().any(|r| !r.consistent)
    }

    /// The pinned verdict table compared against the shipped goldens.
    pub fn verdict_table(&self) -> VerdictTable {
        VerdictTable {
            label: self.label.clone(),
            config_hash: self.provenance.config_hash.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| VerdictTableRow {
                    property: r.property,
                    theorem: r.theorem.clone(),
                    family: r.verdict_family.outcome,
                    limit: r.verdict_limit.outcome,
                    applicable: r.applicable,
                    consistent: r.consistent,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictTableRow {
    pub property: Property,
    pub theorem: String,
    #[serde(rename = "F")]
    pub family: Outcome,
    #[serde(rename = "f")]
    pub limit: Outcome,
    pub applicable: bool,
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictTable {
    pub label: String,
    pub config_hash: String,
    pub rows: Vec<VerdictTableRow>,
}

impl VerdictTable {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("verdict tables always serialize");
        s.push('\n');
        s
    }
}

fn run_or_record(sys: &SystemView, cfg: &CheckConfig, p: Property) -> Verdict {
    run_property(sys, cfg, p)
        .unwrap_or_else(|e| Verdict::inconclusive(cfg.horizon, format!("checker failed: {e}")))
}

/// Run the full comparison for a scenario.
pub fn run_comparison(spec: &ScenarioSpec) -> Result<ComparisonReport> {
    let fam = spec.validate()?;
    let cfg = &spec.check;
    let profile = profile_hypotheses(&fam, &spec.profile_config())?;
    let systems = Mode::BOTH.map(|m| SystemView::new(fam.clone(), m));
    let jobs: Vec<(Property, usize)> = spec.properties.iter().flat_map(|&p| [(p, 0), (p, 1)]).collect();
    let verdicts: Vec<Verdict> = jobs.par_iter().map(|&(p, m)| run_or_record(&systems[m], cfg, p)).collect();
    let pairs: Vec<(Property, Verdict, Verdict)> = spec
        .properties
        .iter()
        .zip(verdicts.chunks(2))
        .map(|(&p, v)| (p, v[0].clone(), v[1].clone()))
        .collect();
    let rows = theorems::judge(&profile, &pairs);
    let bounds = bound_summary(&fam, cfg, profile.commutes.is_holds())?;
    let plots = plot_series(&fam, &systems, cfg)?;
    Ok(ComparisonReport {
        label: fam.label.clone(),
        space: fam.space.clone(),
        check: cfg.clone(),
        notes: fam.notes.clone(),
        profile,
        rows,
        bounds,
        plots,
        provenance: Provenance {
            config_hash: spec.config_hash(),
            seed: 0,
            version: env!("CARGO_PKG_VERSION").to_string(),
        },
    })
}

fn bound_summary(fam: &MapFamily, cfg: &CheckConfig, bound_applies: bool) -> Result<BoundSummary> {
    let k_max = cfg.horizon.min(BOUND_HORIZON);
    let ledger = BoundLedger::build(fam, k_max, LEDGER_GRID)?;
    let grid = sample_grid(&fam.space, cfg.grid)?.into_points();
    let records: Vec<Vec<DeviationRecord>> = grid
        .par_iter()
        .map(|x| (1..=k_max).map(|k| ledger.deviation(fam, x, k, cfg.tol)).collect())
        .collect::<Result<_>>()?;
    let flat: Vec<&DeviationRecord> = records.iter().flatten().collect();
    let collective = collective_convergence_profile(fam, COLLECTIVE_N, COLLECTIVE_K, cfg.grid, cfg.eps, cfg.tol)?;
    Ok(BoundSummary {
        k_max,
        points: grid.len(),
        checked: flat.len(),
        violations: flat.iter().filter(|r| !r.holds).count(),
        bound_applies,
        approximate_bound: flat.iter().any(|r| r.approximate_bound),
        first_violation: flat.iter().find(|r| !r.holds).map(|r| (*r).clone()),
        tail_sup: collective.tail_sup,
        collective_likely: collective.collective_likely,
    })
}

fn plot_series(fam: &MapFamily, systems: &[SystemView; 2], cfg: &CheckConfig) -> Result<Vec<PlotSeries>> {
    let k_max = cfg.horizon.min(BOUND_HORIZON);
    let grid = sample_grid(&fam.space, cfg.grid)?.into_points();
    let ledger = BoundLedger::build(fam, k_max, LEDGER_GRID)?;
    let x = &grid[0];
    let recs = (1..=k_max).map(|k| ledger.deviation(fam, x, k, cfg.tol)).collect::<Result<Vec<_>>>()?;
    let col = |name: &str| [String::from("k"), name.to_string()];
    let mut out = vec![
        PlotSeries {
            name: "deviation".into(),
            columns: col("deviation"),
            points: recs.iter().map(|r| [r.k as f64, r.measured]).collect(),
        },
        PlotSeries {
            name: "bound".into(),
            columns: col("bound"),
            points: recs.iter().map(|r| [r.k as f64, r.bound]).collect(),
        },
    ];
    let step = (grid.len() / TRACKED_BALLS).max(1);
    for (sys, tag) in systems.iter().zip(["F", "f"]) {
        for (b, c) in grid.iter().step_by(step).take(TRACKED_BALLS).enumerate() {
            let u = Region::ball(sys.space(), c, cfg.eps, cfg.ball_count)?;
            let o = RegionOrbit::compute(sys, u, k_max, cfg.ball_count)?;
            out.push(PlotSeries {
                name: format!("diameter-{tag}-{b}"),
                columns: [String::from("n"), String::from("diameter")],
                points: (0..=k_max).map(|n| [n as f64, o.at(n).diameter()]).collect(),
            });
        }
    }
    Ok(out)
}
