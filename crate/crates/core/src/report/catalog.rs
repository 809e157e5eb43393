//! The five example scenarios with pinned desk-scale parameters.

use serde::Serialize;

use super::scenario::{OutputConfig, ScenarioSpec};
use super::{run_comparison, ComparisonReport};
use crate::checkers::{CheckConfig, Property};
use crate::error::{Error, Result};
use crate::family::{BuiltinFamily, BuiltinParams, FamilyConfig, DEFAULT_WORD_LEN};
use crate::space::PhaseSpace;

#[derive(Clone, Debug, Serialize)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub family: BuiltinFamily,
    pub summary: &'static str,
}

const ENTRIES: [CatalogEntry; 5] = [
    CatalogEntry {
        id: "alternating-rotation",
        family: BuiltinFamily::AlternatingRotation,
        summary: "pairs of rotations cancelling toward an irrational rotation; convergence too slow to sum",
    },
    CatalogEntry {
        id: "inverse-square-rotation",
        family: BuiltinFamily::InverseSquareRotation,
        summary: "rotations by 1/n² converging to the identity with Σ = π²/6",
    },
    CatalogEntry {
        id: "perturbed-doubling",
        family: BuiltinFamily::PerturbedDoubling,
        summary: "doubling map shifted by 1/n; steps do not commute with the limit",
    },
    CatalogEntry {
        id: "plateau-tent",
        family: BuiltinFamily::PlateauTent,
        summary: "a plateau map followed by the tent map; the first step is not feeble open",
    },
    CatalogEntry {
        id: "odometer-deletion",
        family: BuiltinFamily::OdometerDeletion,
        summary: "odometer composed with deleting the n-th coordinate, on binary words of length 24",
    },
];

pub fn catalog() -> &'static [CatalogEntry] {
    &ENTRIES
}

struct Pinned {
    horizon: usize,
    tail_window: usize,
    grid: usize,
    ball_count: usize,
    eps: f64,
    delta: f64,
    max_period: usize,
    repetitions: usize,
}

fn pinned(f: BuiltinFamily) -> Pinned {
    use BuiltinFamily::*;
    let (horizon, tail_window, grid, ball_count, eps, delta, max_period, repetitions) = match f {
        AlternatingRotation => (5000, 2000, 8, 5, 0.05, 0.5, 10, 5),
        InverseSquareRotation => (2000, 800, 12, 5, 0.1, 0.5, 100, 5),
        PerturbedDoubling => (300, 120, 12, 5, 0.2, 0.5, 10, 3),
        PlateauTent => (500, 200, 11, 5, 0.1, 0.25, 8, 3),
        OdometerDeletion => (200, 80, 4, 4, 0.25, 0.5, 20, 2),
    };
    Pinned { horizon, tail_window, grid, ball_count, eps, delta, max_period, repetitions }
}

fn entry(id: &str) -> Result<&'static CatalogEntry> {
    ENTRIES.iter().find(|e| e.id == id).ok_or_else(|| Error::UnknownScenario(id.to_string()))
}

/// The pinned scenario for a catalog id.
pub fn scenario(id: &str) -> Result<ScenarioSpec> {
    let e = entry(id)?;
    let p = pinned(e.family);
    let space = match e.family {
        BuiltinFamily::OdometerDeletion => PhaseSpace::binary_seq(DEFAULT_WORD_LEN)?,
        BuiltinFamily::PlateauTent => PhaseSpace::unit_interval(),
        _ => PhaseSpace::circle(),
    };
    Ok(ScenarioSpec {
        space,
        family: FamilyConfig::Builtin { builtin: e.id.to_string(), params: BuiltinParams::default(), label: None },
        check: CheckConfig {
            horizon: p.horizon,
            grid: p.grid,
            ball_count: p.ball_count,
            eps: p.eps,
            delta: p.delta,
            tol: crate::DEFAULT_TOL,
            tail_window: p.tail_window,
            max_period: p.max_period,
            repetitions: p.repetitions,
        },
        properties: Property::ALL.to_vec(),
        output: OutputConfig::default(),
        profile: None,
    })
}

/// The shipped golden verdict table for a catalog id.
pub fn golden(id: &str) -> Result<&'static str> {
    Ok(match entry(id)?.family {
        BuiltinFamily::AlternatingRotation => include_str!("../../goldens/alternating-rotation.json"),
        BuiltinFamily::InverseSquareRotation => include_str!("../../goldens/inverse-square-rotation.json"),
        BuiltinFamily::PerturbedDoubling => include_str!("../../goldens/perturbed-doubling.json"),
        BuiltinFamily::PlateauTent => include_str!("../../goldens/plateau-tent.json"),
        BuiltinFamily::OdometerDeletion => include_str!("../../goldens/odometer-deletion.json"),
    })
}

/// Run a catalog scenario with its pinned parameters.
pub fn reproduce(id: &str) -> Result<ComparisonReport> {
    run_comparison(&scenario(id)?)
}
