//! Finite-horizon semi-decisions for the dynamical properties, run on either
//! the non-autonomous system `(X, 𝔽)` or its autonomous limit `(X, f)`.
//!
//! A `Holds` or `Refuted` outcome always carries a witness that replays. A
//! `Refuted` verdict for a limit-type property rests on a concrete witness or on
//! a structural rule:
//!
//! * isometric steps, under which pair distances and ball diameters never change;
//! * a forecast orbit, when the family is autonomous from some index on and an
//!   exact image repeats, so the whole future is known;
//! * confinement, when the limit is the identity and `Σ D(f_n, f)` is known in
//!   closed form, so no orbit travels further than that sum.
//!
//! Anything else ends `Inconclusive` with the exhausted horizon.

mod pointwise;
pub(crate) mod region;
mod sets;
mod verdict;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::MapFamily;
use crate::space::{PhaseSpace, SpaceKind};

pub use pointwise::{
    cell_density, check_dense_periodicity, check_periodic, check_periodic_points, dense_proximal_pairs,
    li_yorke_check, li_yorke_sensitivity, proximal_cell_density, proximal_check, PairPredicate,
};
pub use sets::{
    check_cofinite_sensitivity, check_equicontinuity, check_minimality, check_sensitivity, check_topological_mixing,
    check_transitivity, check_weak_mixing,
};
pub use verdict::{Basis, Outcome, Verdict, Witness};

/// Which orbit operator a checker iterates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// `ω_n = f_n ∘ … ∘ f_1`.
    NonAutonomous,
    /// `f^n`.
    AutonomousLimit,
}

impl Mode {
    pub const BOTH: [Mode; 2] = [Mode::NonAutonomous, Mode::AutonomousLimit];
}

/// A family viewed through one of the two orbit operators.
#[derive(Clone, Debug)]
pub struct SystemView {
    mode: Mode,
    effective: MapFamily,
}

impl SystemView {
    pub fn new(fam: MapFamily, mode: Mode) -> Self {
        let effective = match mode {
            Mode::NonAutonomous => fam,
            Mode::AutonomousLimit => fam.limit_system(),
        };
        SystemView { mode, effective }
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// The family whose steps generate the orbits in this mode.
    pub fn family(&self) -> &MapFamily {
        &self.effective
    }

    pub fn space(&self) -> &PhaseSpace {
        &self.effective.space
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckConfig {
    pub horizon: usize,
    pub grid: usize,
    pub ball_count: usize,
    pub eps: f64,
    pub delta: f64,
    pub tol: f64,
    pub tail_window: usize,
    pub max_period: usize,
    pub repetitions: usize,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            horizon: 5000,
            grid: 16,
            ball_count: 5,
            eps: 0.1,
            delta: 0.5,
            tol: crate::DEFAULT_TOL,
            tail_window: 2000,
            max_period: 10,
            repetitions: 3,
        }
    }
}

impl CheckConfig {
    pub fn validate(&self, space: &PhaseSpace) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.eps > 0.0 && self.eps < self.delta && self.delta <= space.diameter()) {
            return bad(format!(
                "need 0 < eps < delta ≤ diameter {}, got eps {} delta {}",
                space.diameter(),
                self.eps,
                self.delta
            ));
        }
        if self.horizon == 0 || self.tail_window > self.horizon {
            return bad(format!("need 1 ≤ horizon and tail window ≤ horizon, got {} and {}", self.horizon, self.tail_window));
        }
        if self.grid < 2 || self.ball_count < 2 {
            return bad("grid resolution and ball count must be ≥ 2".into());
        }
        if self.max_period == 0 || self.repetitions == 0 {
            return bad("max period and repetitions must be ≥ 1".into());
        }
        if !(self.tol >= 0.0 && self.tol.is_finite()) {
            return bad("tolerance must be finite and nonnegative".into());
        }
        if space.kind == SpaceKind::BinarySeq && 1.0 / self.eps >= space.word_len() as f64 {
            return bad(format!("word length {} cannot resolve eps {}", space.word_len(), self.eps));
        }
        Ok(())
    }
}

/// The properties compared between the two systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Equicontinuity,
    Sensitivity,
    CofiniteSensitivity,
    Transitivity,
    WeakMixing,
    TopologicalMixing,
    Minimality,
    PeriodicPoints,
    DensePeriodicity,
    ProximalCellDensity,
    DenseProximalPairs,
    LiYorkeSensitivity,
    LiYorkeCellDensity,
}

impl Property {
    pub const ALL: [Property; 13] = [
        Property::Equicontinuity,
        Property::Sensitivity,
        Property::CofiniteSensitivity,
        Property::Transitivity,
        Property::WeakMixing,
        Property::TopologicalMixing,
        Property::Minimality,
        Property::PeriodicPoints,
        Property::DensePeriodicity,
        Property::ProximalCellDensity,
        Property::DenseProximalPairs,
        Property::LiYorkeSensitivity,
        Property::LiYorkeCellDensity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Equicontinuity => "equicontinuity",
            Property::Sensitivity => "sensitivity",
            Property::CofiniteSensitivity => "cofinite-sensitivity",
            Property::Transitivity => "transitivity",
            Property::WeakMixing => "weak-mixing",
            Property::TopologicalMixing => "topological-mixing",
            Property::Minimality => "minimality",
            Property::PeriodicPoints => "periodic-points",
            Property::DensePeriodicity => "dense-periodicity",
            Property::ProximalCellDensity => "proximal-cell-density",
            Property::DenseProximalPairs => "dense-proximal-pairs",
            Property::LiYorkeSensitivity => "li-yorke-sensitivity",
            Property::LiYorkeCellDensity => "li-yorke-cell-density",
        }
    }
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown property `{s}`")))
    }
}

/// Run the system-level check for `property`.
pub fn run_property(sys: &SystemView, cfg: &CheckConfig, property: Property) -> Result<Verdict> {
    cfg.validate(sys.space())?;
    match property {
        Property::Equicontinuity => check_equicontinuity(sys, cfg),
        Property::Sensitivity => check_sensitivity(sys, cfg),
        Property::CofiniteSensitivity => check_cofinite_sensitivity(sys, cfg),
        Property::Transitivity => check_transitivity(sys, cfg),
        Property::WeakMixing => check_weak_mixing(sys, cfg),
        Property::TopologicalMixing => check_topological_mixing(sys, cfg),
        Property::Minimality => check_minimality(sys, cfg),
        Property::PeriodicPoints => check_periodic_points(sys, cfg),
        Property::DensePeriodicity => check_dense_periodicity(sys, cfg),
        Property::ProximalCellDensity => proximal_cell_density(sys, cfg),
        Property::DenseProximalPairs => dense_proximal_pairs(sys, cfg),
        Property::LiYorkeSensitivity => li_yorke_sensitivity(sys, cfg),
        Property::LiYorkeCellDensity => cell_density_all(sys, cfg, PairPredicate::LiYorke),
    }
}

fn cell_density_all(sys: &SystemView, cfg: &CheckConfig, pred: PairPredicate) -> Result<Verdict> {
    pointwise::cell_density_over_grid(sys, cfg, pred)
}

/// Confinement radius: when the limit is the identity and `Σ D(f_n, f)` is
/// known, no orbit moves further than this from its start.
pub(crate) fn confinement(sys: &SystemView) -> Option<f64> {
    let fam = sys.family();
    let identity = match fam.limit.as_affine_circle() {
        Some((1, o)) => crate::space::circle_distance(o, 0.0) == 0.0,
        _ => fam.limit.as_piecewise_linear().is_some_and(|b| b.iter().all(|(x, y)| x == y)),
    };
    if identity {
        fam.tail_sum(0)
    } else {
        None
    }
}
